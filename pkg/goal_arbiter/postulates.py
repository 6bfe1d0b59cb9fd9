""" Rationality postulates over selected extensions: direct consistency,
    closure under the plan rules and indirect consistency.
"""
import itertools
from typing import Any, FrozenSet, Tuple

from loguru import logger
from pydantic import BaseModel, ConfigDict

from goal_arbiter.attacks import ResourceFormula, joint_formula, superfluous_attacks
from goal_arbiter.kb import KnowledgeBase, Literal
from goal_arbiter.semantics import Extension
from goal_arbiter.settings import Level, ResourceMode

OUTPUT = "Output"


class ConclusionSets(BaseModel):
    model_config = ConfigDict(frozen=True)

    per_extension: Tuple[Tuple[Extension, FrozenSet[Literal]], ...] = ()
    output: FrozenSet[Literal] = frozenset()

    def of(self, extension):
        for e, goals in self.per_extension:
            if e == extension:
                return goals
        raise KeyError(str(extension))


class LiteralConflict(BaseModel):
    """ `literal` and its complement both occur. Sources are argument ids or rule keys. """
    model_config = ConfigDict(frozen=True)

    clause: str
    literal: Literal
    sources: Tuple[str, ...] = ()
    opposing: Tuple[str, ...] = ()

    def __str__(self):
        return f"{self.clause}: {self.literal} / {self.literal.negate()}"


class ResourceConflict(BaseModel):
    model_config = ConfigDict(frozen=True)

    formula: ResourceFormula

    def __str__(self):
        return f"resources: {self.formula}"


class SuperfluousConflict(BaseModel):
    """ Two plans for one end, or two arguments related by a superfluous attack. """
    model_config = ConfigDict(frozen=True)

    first: str
    second: str
    reason: str

    def __str__(self):
        return f"superfluity: {self.first} / {self.second} ({self.reason})"


class ClosureViolation(BaseModel):
    model_config = ConfigDict(frozen=True)

    rule: str
    head: Literal

    def __str__(self):
        return f"closure: {self.rule} adds {self.head}"


class PostulateCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    postulate: str
    subject: str
    witnesses: Tuple[Any, ...] = ()

    @property
    def passed(self):
        return not self.witnesses


class PostulateReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    checks: Tuple[PostulateCheck, ...] = ()

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    def failures(self):
        return [check for check in self.checks if not check.passed]

    def __add__(self, other):
        return PostulateReport(checks=self.checks + other.checks)


def _claims(extension, store):
    if extension.level is Level.GOALS:
        return frozenset(extension.members)
    return frozenset(store.get(m).claim for m in extension.members)


def concs(extensions, store) -> ConclusionSets:
    """ Claims of each extension, and the claims common to all of them. """
    per_extension = tuple((e, _claims(e, store)) for e in extensions)
    output = frozenset.intersection(*(goals for _, goals in per_extension)) \
        if per_extension else frozenset()
    return ConclusionSets(per_extension=per_extension, output=output)


def _complementary(clause, holders):
    """ holders maps each literal to the sources holding it. """
    conflicts = []
    for lit in sorted(holders):
        if lit.negated or lit.negate() not in holders:
            continue
        conflicts.append(LiteralConflict(clause=clause, literal=lit,
                                         sources=tuple(sorted(holders[lit])),
                                         opposing=tuple(sorted(holders[lit.negate()]))))
    return conflicts


def _collect(args, view):
    holders = {}
    for arg in args:
        for lit in view(arg):
            holders.setdefault(lit, set()).add(arg.id)
    return holders


def _resource_conflicts(args, summary, joint_resources):
    conflicts = []
    groups = [(a,) for a in args] + list(itertools.combinations(args, 2))
    if joint_resources and len(args) > 2:
        groups.append(tuple(args))
    for group in groups:
        names = sorted({atom.resource for arg in group for atom in arg.rec_set()})
        for name in names:
            formula = joint_formula(summary, group, name)
            if formula.required > summary.available(name):
                conflicts.append(ResourceConflict(formula=formula))
    return conflicts


def _superfluous_conflicts(args, superfluous):
    conflicts = []
    for a, b in itertools.combinations(args, 2):
        if a.claim == b.claim and a.support() != b.support():
            conflicts.append(SuperfluousConflict(first=a.id, second=b.id, reason="same claim"))
        elif (a.id, b.id) in superfluous or (b.id, a.id) in superfluous:
            conflicts.append(SuperfluousConflict(first=a.id, second=b.id, reason="superfluous attack"))
    return conflicts


def check_direct_consistency(extension, store, summary=None, superfluous=None,
                             joint_resources=False) -> PostulateReport:
    """ The members' beliefs, actions and goals hold no complementary pair,
        their resource demand fits the availability (per member and per pair of
        members, or for all members at once with `joint_resources`), and no two
        members are superfluous plans for one end.
    """
    summary = store.kb.resources if summary is None else summary
    superfluous = superfluous if superfluous is not None else superfluous_attacks(store)
    args = [store.get(m) for m in extension.sorted_members()]
    subject = str(extension)

    clauses = [
        ("beliefs", _complementary("beliefs", _collect(args, lambda a: a.beliefs()))),
        ("actions", _complementary("actions", _collect(args, lambda a: a.actions()))),
        ("goals", _complementary("goals", _collect(args, lambda a: a.goals()))),
        ("resources", _resource_conflicts(args, summary, joint_resources)),
        ("superfluity", _superfluous_conflicts(args, superfluous)),
    ]
    return PostulateReport(checks=tuple(
        PostulateCheck(postulate=f"direct-consistency/{name}", subject=subject, witnesses=tuple(w))
        for name, w in clauses))


def closure_trace(goal_set, kb: KnowledgeBase, resource_mode=ResourceMode.PER_RULE, facts=None):
    """ Least fixpoint of rule application over the goal set. A rule fires
        when its beliefs and actions are among `facts` (the declared beliefs
        and actions by default), its subgoals are in the closure and every
        resource premise is within the availability. Returns the goals of the
        closure and the rules that fired, in firing order.

        In budget mode a resource premise is drawn from what earlier firings
        left, and firing a rule consumes its resource premises.
    """
    resource_mode = ResourceMode(resource_mode)
    facts = kb.beliefs | kb.actions if facts is None else frozenset(facts)
    goals = set(goal_set)
    remaining = dict(kb.resources.availability)
    fired = []

    def resources_hold(rule):
        if resource_mode is ResourceMode.BUDGET:
            return all(remaining.get(atom.resource, 0) >= atom.amount for atom in rule.resources)
        return all(atom.amount <= kb.resources.available(atom.resource) for atom in rule.resources)

    changed = True
    while changed:
        changed = False
        for rule in kb.rules:
            if rule.head in goals:
                continue
            if rule.beliefs <= facts and rule.actions <= facts \
                    and rule.subgoals <= goals and resources_hold(rule):
                goals.add(rule.head)
                fired.append(rule)
                if resource_mode is ResourceMode.BUDGET:
                    for atom in rule.resources:
                        remaining[atom.resource] -= atom.amount
                changed = True

    return frozenset(goals), tuple(fired)


def closure_pr(goal_set, kb: KnowledgeBase, resource_mode=ResourceMode.PER_RULE, facts=None):
    return closure_trace(goal_set, kb, resource_mode, facts)[0]


def _material_args(extension, store):
    if extension.level is Level.GOALS:
        members = frozenset(extension.members)
        return [arg for arg in store if arg.claim in members and arg.goals() <= members]
    return [store.get(m) for m in extension.sorted_members()]


def extension_material(extension, store):
    """ The goals and facts an extension's closure starts from: every goal
        node, belief and action in its members' trees. At goal level the trees
        are those of the arguments whose goal nodes all lie in the extension.
    """
    args = _material_args(extension, store)
    goals = set(_claims(extension, store))
    facts = set()
    for arg in args:
        goals.update(arg.goals())
        facts.update(arg.beliefs() | arg.actions())
    return frozenset(goals), frozenset(facts)


def _closure_subjects(extensions, store):
    """ (subject, extension, seed goals, facts) per extension, then the
        material common to all of them under OUTPUT.
    """
    subjects = []
    for extension in extensions:
        goals, facts = extension_material(extension, store)
        subjects.append((str(extension), extension, goals, facts))
    if subjects:
        goals = frozenset.intersection(*(s[2] for s in subjects))
        facts = frozenset.intersection(*(s[3] for s in subjects))
    else:
        goals, facts = frozenset(), frozenset()
    subjects.append((OUTPUT, None, goals, facts))
    return subjects


def check_closure(extensions, store, resource_mode=ResourceMode.PER_RULE) -> PostulateReport:
    """ Each extension's material, and the part common to all extensions,
        admits no rule whose head it lacks.
    """
    checks = []
    for subject, _, goals, facts in _closure_subjects(extensions, store):
        _, fired = closure_trace(goals, store.kb, resource_mode, facts)
        witnesses = tuple(ClosureViolation(rule=rule.key, head=rule.head) for rule in fired)
        checks.append(PostulateCheck(postulate="closure", subject=subject, witnesses=witnesses))
    return PostulateReport(checks=tuple(checks))


def _rule_holders(rules, view):
    holders = {}
    for rule in rules:
        for lit in view(rule):
            holders.setdefault(lit, set()).add(rule.key)
    return holders


def _merge(*maps):
    merged = {}
    for m in maps:
        for lit, sources in m.items():
            merged.setdefault(lit, set()).update(sources)
    return merged


def _indirect(subject, args, goals, fired, summary, superfluous):
    """ Direct-consistency clauses over the members plus the material of the
        rules that fired while closing their conclusions.
    """
    goal_holders = _collect(args, lambda a: a.goals())
    for goal in goals:
        goal_holders.setdefault(goal, set()).add(subject)
    clauses = [
        ("beliefs", _complementary("beliefs", _merge(
            _collect(args, lambda a: a.beliefs()), _rule_holders(fired, lambda r: r.beliefs)))),
        ("actions", _complementary("actions", _merge(
            _collect(args, lambda a: a.actions()), _rule_holders(fired, lambda r: r.actions)))),
        ("goals", _complementary("goals", _merge(
            goal_holders, _rule_holders(fired, lambda r: r.subgoals | {r.head})))),
    ]

    # a fired rule draws on top of what each member already holds
    resources = _resource_conflicts(args, summary, False)
    for rule in fired:
        for atom in sorted(rule.resources):
            for arg in args or [None]:
                held = joint_formula(summary, [arg], atom.resource).occurrences if arg else ()
                formula = ResourceFormula(resource=atom.resource,
                                          occurrences=held + ((rule.key, rule.key, atom.amount),),
                                          available=summary.available(atom.resource))
                if formula.required > formula.available:
                    resources.append(ResourceConflict(formula=formula))
    clauses.append(("resources", resources))

    clauses.append(("superfluity", _superfluous_conflicts(args, superfluous)))

    return [PostulateCheck(postulate=f"indirect-consistency/{name}", subject=subject, witnesses=tuple(w))
            for name, w in clauses]


def check_indirect(extensions, store, summary=None, resource_mode=ResourceMode.PER_RULE,
                   superfluous=None) -> PostulateReport:
    """ The closed material of each extension, and of their common part, is
        directly consistent.
    """
    summary = store.kb.resources if summary is None else summary
    superfluous = superfluous if superfluous is not None else superfluous_attacks(store)
    checks = []
    for subject, extension, goals, facts in _closure_subjects(extensions, store):
        closed, fired = closure_trace(goals, store.kb, resource_mode, facts)
        args = [] if extension is None or extension.level is Level.GOALS \
            else [store.get(m) for m in extension.sorted_members()]
        checks.extend(_indirect(subject, args, closed, fired, summary, superfluous))
    return PostulateReport(checks=tuple(checks))


def check_postulates(extensions, store, resource_mode=ResourceMode.PER_RULE,
                     joint_resources=False) -> PostulateReport:
    """ Direct consistency of every extension, closure and indirect consistency. """
    superfluous = superfluous_attacks(store)
    report = PostulateReport()
    for extension in extensions:
        report += check_direct_consistency(extension, store, superfluous=superfluous,
                                           joint_resources=joint_resources)
    report += check_closure(extensions, store, resource_mode)
    report += check_indirect(extensions, store, resource_mode=resource_mode, superfluous=superfluous)
    failed = report.failures()
    if failed:
        logger.info(f"{len(failed)} postulate check(s) failed")
    else:
        logger.debug(f"All {len(report.checks)} postulate checks passed")
    return report
