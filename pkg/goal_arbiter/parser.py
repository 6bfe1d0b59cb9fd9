""" Loader for the knowledge-base text format, and its canonical serialization.

    A document is a sequence of sections:

        beliefs:   be(operative), ~full_trashcan
        actions:   go(5,5) use(vacuum)
        goals:     clean(5,5) @ 0.75
        resources: bat = 90
        pursuable: clean(5,5)
        rules:     be(operative), go(5,5), res(bat,60) -> clean(5,5);

    Commas between list entries are optional. '#' starts a comment that runs to
    the end of the line.
"""
import re
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import List, NamedTuple, Optional

from loguru import logger

from goal_arbiter.errors import (
    DuplicateGoalDeclaration,
    DuplicateResourceDeclaration,
    KBSyntaxError,
    PreferenceOutOfRange,
    UndeclaredSymbol,
)
from goal_arbiter.kb import (
    ElementKind,
    KnowledgeBase,
    Literal,
    PlanRule,
    ResourceAtom,
    ResourceSummary,
)

SECTIONS = ("beliefs", "actions", "goals", "resources", "pursuable", "rules")
RESOURCE_PREMISE = "res"

_TOKEN_SPECS = [
    ("comment", r"#[^\n]*"),
    ("newline", r"\n"),
    ("space", r"[ \t\r]+"),
    ("number", r"\d+(?:\.\d+)?"),
    ("ident", r"[a-z][a-zA-Z0-9_]*"),
    ("arrow", r"->"),
    ("punct", r"[~(),:@=;]"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPECS))


class Token(NamedTuple):
    type: str
    val: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise KBSyntaxError(line, pos - line_start + 1, "a token", text[pos])
        kind = m.lastgroup
        if kind == "newline":
            line += 1
            line_start = m.end()
        elif kind not in ("space", "comment"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _RawRule(NamedTuple):
    premises: list
    head: Literal
    token: Token


class Parser:
    """ Recursive descent over the token list. Premise literals are classified
        only once every section has been read, since rules may come first.
    """

    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.beliefs = set()
        self.actions = set()
        self.goals = {}
        self.resources = {}
        self.pursuable = set()
        self.rules: List[_RawRule] = []

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset=1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tok
        if tok.type != "eof":
            self.pos += 1
        return tok

    def fail(self, expected):
        tok = self.tok
        raise KBSyntaxError(tok.line, tok.col, expected, tok.val if tok.type != "eof" else "end of input")

    def expect(self, val=None, type=None, expected=None):
        tok = self.tok
        if (val is not None and tok.val != val) or (type is not None and tok.type != type):
            self.fail(expected or (f"'{val}'" if val is not None else f"a {type}"))
        return self.advance()

    def accept(self, val) -> Optional[Token]:
        if self.tok.val == val and self.tok.type != "eof":
            return self.advance()
        return None

    def at_section_start(self):
        return self.tok.type == "ident" and self.peek().val == ":"

    def at_list_end(self):
        return self.tok.type == "eof" or self.at_section_start()

    def parse_document(self):
        if self.tok.type == "eof":
            self.fail("a section")
        while self.tok.type != "eof":
            self.parse_section()

    def parse_section(self):
        if not self.at_section_start() or self.tok.val not in SECTIONS:
            self.fail("one of " + ", ".join(f"'{s}:'" for s in SECTIONS))
        name = self.advance().val
        self.expect(":")
        handler = getattr(self, f"parse_{name}")
        while not self.at_list_end():
            handler()
            self.accept(",")

    def parse_beliefs(self):
        self.beliefs.add(self.parse_literal())

    def parse_actions(self):
        self.actions.add(self.parse_literal())

    def parse_pursuable(self):
        self.pursuable.add(self.parse_literal())

    def parse_goals(self):
        goal = self.parse_literal()
        self.expect("@", expected="'@' and a preference value")
        tok = self.expect(type="number", expected="a decimal preference")
        try:
            value = Decimal(tok.val)
        except InvalidOperation:
            raise KBSyntaxError(tok.line, tok.col, "a decimal preference", tok.val)
        if goal in self.goals:
            raise DuplicateGoalDeclaration(goal)
        if not Decimal(0) <= value <= Decimal(1):
            raise PreferenceOutOfRange(goal, value)
        self.goals[goal] = value

    def parse_resources(self):
        name = self.expect(type="ident", expected="a resource name").val
        self.expect("=")
        amount = self.parse_integer()
        if name in self.resources:
            raise DuplicateResourceDeclaration(name)
        self.resources[name] = amount

    def parse_rules(self):
        start = self.tok
        premises = []
        while self.tok.type != "arrow":
            if self.tok.type == "eof" or self.at_section_start():
                self.fail("'->'")
            premises.append(self.parse_premise())
            self.accept(",")
        self.advance()
        head = self.parse_literal()
        self.expect(";")
        self.rules.append(_RawRule(premises, head, start))

    def parse_premise(self):
        if self.tok.val == RESOURCE_PREMISE and self.peek().val == "(":
            self.advance()
            self.expect("(")
            name = self.expect(type="ident", expected="a resource name").val
            self.expect(",")
            amount = self.parse_integer()
            self.expect(")")
            return ResourceAtom(resource=name, amount=amount)
        return self.parse_literal()

    def parse_literal(self):
        negated = self.accept("~") is not None
        name_tok = self.tok
        name = self.expect(type="ident", expected="a literal").val
        if name == RESOURCE_PREMISE and negated:
            raise KBSyntaxError(name_tok.line, name_tok.col, "a literal", "~res")
        args = []
        if self.accept("("):
            args.append(self.parse_term())
            while self.accept(","):
                args.append(self.parse_term())
            self.expect(")")
        return Literal(name=name, negated=negated, args=tuple(args))

    def parse_term(self):
        tok = self.tok
        if tok.type == "ident":
            return self.advance().val
        return self.parse_integer()

    def parse_integer(self):
        tok = self.tok
        if tok.type != "number" or "." in tok.val:
            self.fail("an integer")
        self.advance()
        return int(tok.val)

    def build(self) -> KnowledgeBase:
        kb = KnowledgeBase(
            beliefs=frozenset(self.beliefs),
            actions=frozenset(self.actions),
            goals=frozenset(self.goals),
            pursuable=frozenset(self.pursuable),
            preferences=dict(self.goals),
            resources=ResourceSummary(availability=dict(self.resources)),
        )
        rules = {}
        for raw in self.rules:
            rule = self.classify(kb, raw)
            rules[rule.key] = rule
        kb = kb.model_copy(update={"rules": tuple(rules[key] for key in sorted(rules))})
        return kb.validate()

    def classify(self, kb, raw: _RawRule) -> PlanRule:
        groups = {kind: set() for kind in ElementKind}
        for premise in raw.premises:
            kind = kb.kind_of(premise)
            if kind is None:
                raise UndeclaredSymbol(str(premise))
            if kind is ElementKind.RESOURCE and premise.resource not in kb.resources:
                raise UndeclaredSymbol(premise.resource)
            groups[kind].add(premise)
        return PlanRule(
            beliefs=frozenset(groups[ElementKind.BELIEF]),
            subgoals=frozenset(groups[ElementKind.GOAL]),
            actions=frozenset(groups[ElementKind.ACTION]),
            resources=frozenset(groups[ElementKind.RESOURCE]),
            head=raw.head,
        )


def parse_kb(text: str) -> KnowledgeBase:
    """ Parse and validate a knowledge-base document.
    """
    parser = Parser(text)
    parser.parse_document()
    kb = parser.build()
    logger.debug(f"Parsed knowledge base: {len(kb.beliefs)} beliefs, {len(kb.actions)} actions, "
                 f"{len(kb.goals)} goals, {len(kb.rules)} rules")
    return kb


def load_kb(path) -> KnowledgeBase:
    logger.debug(f"Loading knowledge base from {path}")
    return parse_kb(Path(path).read_text(encoding="utf-8"))


def serialize_kb(kb: KnowledgeBase) -> str:
    """ Canonical text form: sections in a fixed order, one entry per line,
        entries sorted by their printed form. Empty sections are omitted.
    """
    sections = [
        ("beliefs", sorted(str(b) for b in kb.beliefs)),
        ("actions", sorted(str(a) for a in kb.actions)),
        ("goals", sorted(f"{g} @ {kb.preferences[g]}" for g in kb.goals)),
        ("resources", sorted(f"{r} = {n}" for r, n in kb.resources.availability.items())),
        ("pursuable", sorted(str(g) for g in kb.pursuable)),
        ("rules", sorted(f"{rule.key};" for rule in kb.rules)),
    ]
    lines = []
    for name, entries in sections:
        if not entries:
            continue
        lines.append(f"{name}:")
        lines.extend(f"  {entry}" for entry in entries)
    return "\n".join(lines) + "\n"
