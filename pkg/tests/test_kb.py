from decimal import Decimal
from pathlib import Path

import pytest

from goal_arbiter.errors import (
    DisjointnessViolation,
    DuplicateGoalDeclaration,
    DuplicateResourceDeclaration,
    HeadInOwnPremise,
    KBSyntaxError,
    MissingPreference,
    NoRuleForGoal,
    PreferenceOutOfRange,
    UndeclaredSymbol,
    UnknownGoal,
    UnknownResource,
)
from goal_arbiter.kb import ElementKind, KnowledgeBase, Literal, ResourceAtom, availability, preference
from goal_arbiter.parser import Parser, load_kb, parse_kb, serialize_kb

DATA = Path(__file__).parent / "data"


def lit(text):
    return Parser(text).parse_literal()


@pytest.fixture
def kb():
    return load_kb(DATA / "cleaner.kb")


def test_literal_text():
    assert str(lit("clean(5,5)")) == "clean(5,5)"
    assert str(lit("~full_trashcan")) == "~full_trashcan"
    assert lit("go(workshop)").args == ("workshop",)
    assert lit("at(1,4)").args == (1, 4)


def test_literal_negation():
    goal = lit("be(operative)")
    assert goal.negate() == lit("~be(operative)")
    assert goal.negate().negate() == goal
    assert goal.is_complement(goal.negate())
    assert not goal.is_complement(goal)
    assert not goal.is_complement(lit("~be(fixed)"))


def test_load_cleaner(kb):
    assert len(kb.beliefs) == 6
    assert len(kb.actions) == 5
    assert len(kb.goals) == 5
    assert len(kb.rules) == 7
    assert kb.pursuable == {lit("clean(5,5)"), lit("be(fixed)")}
    assert kb.resources.availability == {"bat": 90, "oil": 50, "fuel": 20}


def test_rule_premises_are_classified(kb):
    rule = kb.rules_for(lit("be(fixed)"))
    assert len(rule) == 2
    workshop = next(r for r in rule if r.subgoals)
    assert workshop.subgoals == {lit("be(in_workshop)")}
    assert workshop.beliefs == {lit("~be(operative)"), lit("has(spare_part)")}
    assert not workshop.resources

    mop = kb.rules_for(lit("mop(5,5)"))[0]
    assert mop.actions == {lit("go(5,5)"), lit("use(spinmop)")}
    assert mop.resources == {ResourceAtom(resource="bat", amount=60)}
    assert mop.key == ("at(1,4), be(operative), liquid_dirt(5,5), ~full_trashcan, "
                       "go(5,5), use(spinmop), res(bat,60) -> mop(5,5)")


def test_kind_of_matches_either_polarity(kb):
    assert kb.kind_of(lit("~solid_dirt(5,5)")) is ElementKind.BELIEF
    assert kb.kind_of(lit("call(technician)")) is ElementKind.ACTION
    assert kb.kind_of(lit("mop(5,5)")) is ElementKind.GOAL
    assert kb.kind_of(ResourceAtom(resource="bat", amount=1)) is ElementKind.RESOURCE
    assert kb.kind_of(lit("fly")) is None


def test_availability(kb):
    assert availability(kb, "bat") == 90
    assert availability(kb, "fuel") == 20
    with pytest.raises(UnknownResource):
        availability(kb, "water")


def test_preference(kb):
    assert preference(kb, lit("mop(5,5)")) == Decimal("0.8")
    assert preference(kb, lit("be(fixed)")) == Decimal("0.6")
    with pytest.raises(UnknownGoal):
        preference(kb, lit("be(happy)"))


def test_missing_preference():
    kb = KnowledgeBase(goals=frozenset({lit("g")}))
    with pytest.raises(MissingPreference):
        kb.preference(lit("g"))


def test_minimal():
    kb = load_kb(DATA / "minimal.kb")
    assert len(kb.rules) == 1
    assert kb.rules[0].key == "-> g"
    assert not kb.rules[0].premises


def test_comments_and_optional_commas():
    kb = parse_kb("""
        # a comment
        beliefs: p q   # another
        goals: g @ 0.5
        rules: p, q -> g;
    """)
    assert kb.beliefs == {lit("p"), lit("q")}


def test_duplicate_rules_collapse():
    kb = parse_kb("beliefs: p\ngoals: g @ 0.5\nrules:\n  p -> g;\n  p -> g;\n")
    assert len(kb.rules) == 1


def test_missing_preference_value():
    with pytest.raises(KBSyntaxError) as e:
        parse_kb("goals:\n  g\nrules:\n  -> g;\n")
    assert e.value.line == 3
    assert e.value.col == 1


def test_negated_resource_premise():
    with pytest.raises(KBSyntaxError):
        parse_kb("goals: g @ 0.5\nresources: bat = 5\nrules: ~res(bat,1) -> g;\n")


def test_empty_document():
    with pytest.raises(KBSyntaxError):
        parse_kb("# nothing here\n")


def test_unknown_section():
    with pytest.raises(KBSyntaxError) as e:
        parse_kb("desires: g\n")
    assert e.value.line == 1


def test_fractional_resource_amount():
    with pytest.raises(KBSyntaxError):
        parse_kb("goals: g @ 0.5\nresources: bat = 1.5\nrules: -> g;\n")


def test_unterminated_rule():
    with pytest.raises(KBSyntaxError):
        parse_kb("beliefs: p\ngoals: g @ 0.5\nrules: p -> g\n")


def test_undeclared_premise():
    with pytest.raises(UndeclaredSymbol) as e:
        parse_kb("goals: g @ 0.5\nrules: p -> g;\n")
    assert e.value.name == "p"


def test_undeclared_resource():
    with pytest.raises(UndeclaredSymbol):
        parse_kb("goals: g @ 0.5\nrules: res(bat,5) -> g;\n")


def test_undeclared_pursuable():
    with pytest.raises(UndeclaredSymbol):
        parse_kb("goals: g @ 0.5\npursuable: h\nrules: -> g;\n")


def test_disjointness():
    with pytest.raises(DisjointnessViolation) as e:
        parse_kb("beliefs: p\nactions: ~p\ngoals: g @ 0.5\nrules: -> g;\n")
    assert e.value.name == "p"
    assert e.value.sets == ("actions", "beliefs")


def test_resource_named_like_literal():
    with pytest.raises(DisjointnessViolation):
        parse_kb("beliefs: bat\ngoals: g @ 0.5\nresources: bat = 5\nrules: -> g;\n")


def test_duplicate_goal():
    with pytest.raises(DuplicateGoalDeclaration):
        parse_kb("goals: g @ 0.5, g @ 0.6\nrules: -> g;\n")


def test_duplicate_resource():
    with pytest.raises(DuplicateResourceDeclaration):
        parse_kb("goals: g @ 0.5\nresources: bat = 5, bat = 6\nrules: -> g;\n")


def test_preference_out_of_range():
    with pytest.raises(PreferenceOutOfRange) as e:
        parse_kb("goals: g @ 1.5\nrules: -> g;\n")
    assert e.value.value == Decimal("1.5")


def test_head_in_own_premise():
    with pytest.raises(HeadInOwnPremise):
        parse_kb("goals: g @ 0.5\nrules: g -> g;\n")


def test_goal_without_rule():
    with pytest.raises(NoRuleForGoal) as e:
        parse_kb("goals: g @ 0.5, h @ 0.5\nrules: -> g;\n")
    assert e.value.goal == lit("h")


def test_serialize_is_canonical(kb):
    text = serialize_kb(kb)
    assert text.splitlines()[0] == "beliefs:"
    assert "  clean(5,5) @ 0.75" in text.splitlines()
    assert "  bat = 90" in text.splitlines()
    assert parse_kb(text) == kb
    assert serialize_kb(parse_kb(text)) == text


def test_serialize_omits_empty_sections():
    text = serialize_kb(load_kb(DATA / "minimal.kb"))
    assert text == "goals:\n  g @ 1.0\nrules:\n  -> g;\n"
