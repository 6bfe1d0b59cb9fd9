from decimal import Decimal
from pathlib import Path

import pytest

from goal_arbiter.arguments import enumerate_arguments
from goal_arbiter.attacks import AttackKind, compute_relations, rebuttal_attacks
from goal_arbiter.errors import MissingPreference, MixedStores
from goal_arbiter.frameworks import ArgFramework, build_af, goal_attacks, successful_filter
from goal_arbiter.parser import Parser, load_kb, parse_kb
from goal_arbiter.settings import Level

DATA = Path(__file__).parent / "data"


def lit(text):
    return Parser(text).parse_literal()


def find(store, head, marker=""):
    for arg in store:
        if str(arg.claim) == head and marker in arg.rule.key:
            return arg
    raise KeyError(head)


def pairs(text):
    return {(p[0], p[1]) for p in text.split()}


@pytest.fixture
def store():
    return enumerate_arguments(load_kb(DATA / "cleaner.kb"))


@pytest.fixture
def letters(store):
    named = {
        "A": find(store, "clean(5,5)", "pickup(5,5)"),
        "B": find(store, "be(fixed)", "be(in_workshop)"),
        "C": find(store, "clean(5,5)", "mop(5,5)"),
        "D": find(store, "mop(5,5)"),
        "E": find(store, "pickup(5,5)"),
        "F": find(store, "be(fixed)", "call(technician)"),
        "H": find(store, "be(in_workshop)"),
    }
    return {arg.id: name for name, arg in named.items()}


@pytest.fixture
def relations(store):
    return compute_relations(store, store.kb.resources)


@pytest.fixture
def af(relations, store):
    return build_af(list(relations.values()), store)


def as_letters(edges, letters):
    return {(letters[a], letters[b]) for a, b in edges}


def test_general_framework(af, store, letters):
    assert af.nodes == tuple(store.ids())
    assert not af.filtered
    assert af.level is Level.ARGUMENTS
    assert len(af.edges) == 28
    assert as_letters(af.edges, letters) == pairs(
        "AB BA EB BE EH HE AH HA CB BC DB BD DH HD CH HC "
        "CA AC FB BF ED DE CE EC AD DA FH HF")


def test_merged_kinds(af, letters):
    by_letters = {(letters[a], letters[b]): kinds for (a, b), kinds in af.kinds.items()}
    assert by_letters[("A", "B")] == {AttackKind.TERMINAL, AttackKind.RESOURCE}
    assert by_letters[("C", "B")] == {AttackKind.TERMINAL}
    assert by_letters[("D", "E")] == {AttackKind.SUPERFLUOUS}


def test_union_correctness(af, relations):
    union = set()
    for relation in relations.values():
        union |= relation.edges
    assert set(af.edges) == union


def test_single_relation(relations, store, letters):
    af = build_af([relations[AttackKind.RESOURCE]], store)
    assert as_letters(af.edges, letters) == pairs("AB BA EB BE AH HA EH HE")


def test_no_relations(store):
    af = build_af([], store)
    assert len(af.nodes) == 7
    assert not af.edges


def test_mixed_stores(store):
    other = enumerate_arguments(load_kb(DATA / "minimal.kb"))
    with pytest.raises(MixedStores):
        build_af([rebuttal_attacks(store), rebuttal_attacks(other)], store)


def test_successful_filter(af, letters):
    filtered = successful_filter(af)
    assert filtered.filtered
    assert len(filtered.edges) == 18
    assert as_letters(filtered.edges, letters) == pairs(
        "AB EB EH AH CB DB DH CH CA AC DE CE EC DA FB BF FH HF")
    assert set(filtered.kinds) == set(filtered.edges)


def test_filter_strict_preference(af, letters):
    filtered = as_letters(successful_filter(af).edges, letters)
    assert ("D", "E") in filtered
    assert ("E", "D") not in filtered


def test_filter_safety(af):
    filtered = successful_filter(af)
    assert filtered.edges <= af.edges
    for a, b in af.edges:
        if (b, a) in af.edges:
            assert (a, b) in filtered.edges or (b, a) in filtered.edges


def test_filter_with_equal_preferences(af):
    flat = {goal: Decimal("0.5") for goal in af.preferences}
    assert successful_filter(af, flat).edges == af.edges


def test_filter_missing_preference(af):
    with pytest.raises(MissingPreference):
        successful_filter(af, {})


def test_goal_framework(af, store):
    gf = goal_attacks(successful_filter(af), store)
    assert gf.level is Level.GOALS
    assert set(gf.nodes) == {lit(g) for g in
                             ("clean(5,5)", "pickup(5,5)", "mop(5,5)", "be(in_workshop)", "be(fixed)")}
    assert gf.edges == {
        (lit("mop(5,5)"), lit("pickup(5,5)")),
        (lit("clean(5,5)"), lit("be(in_workshop)")),
        (lit("mop(5,5)"), lit("be(in_workshop)")),
        (lit("pickup(5,5)"), lit("be(in_workshop)")),
    }
    assert gf.pursuable == {lit("clean(5,5)"), lit("be(fixed)")}
    assert gf.preferences[lit("mop(5,5)")] == Decimal("0.8")


def test_goal_certificates_revalidate(af, store):
    filtered = successful_filter(af)
    gf = goal_attacks(filtered, store)
    for (g, h), certificate in gf.certificates.items():
        assert (g, h) in gf.edges
        for a, b, direction in certificate:
            assert {store.get(a).claim, store.get(b).claim} == {g, h}
            if direction == "->":
                assert (a, b) in filtered.edges
            elif direction == "<-":
                assert (b, a) in filtered.edges
            else:
                assert (a, b) in filtered.edges and (b, a) in filtered.edges


def test_goal_attack_needs_every_pair(af, store):
    # (A,F) has no attack either way, so clean and be(fixed) stay compatible
    gf = goal_attacks(successful_filter(af), store)
    assert not gf.conflicting(lit("clean(5,5)"), lit("be(fixed)"))


def test_mixed_directions_give_both_edges():
    kb = parse_kb("beliefs: p, q\ngoals: g @ 0.5, h @ 0.5\npursuable: g, h\nrules: p -> g; q -> g; p, q -> h;\n")
    store = enumerate_arguments(kb)
    g_args = sorted(store.by_claim[lit("g")])
    (h_arg,) = store.by_claim[lit("h")]
    fw = ArgFramework(
        nodes=tuple(store.ids()),
        edges=frozenset({(g_args[0], h_arg), (h_arg, g_args[1])}),
        claims={arg.id: arg.claim for arg in store},
    )
    gf = goal_attacks(fw, store)
    assert gf.edges == {(lit("g"), lit("h")), (lit("h"), lit("g"))}


def test_from_edges():
    fw = ArgFramework.from_edges(
        nodes=["A", "B", "C"],
        edges=[("A", "B"), ("A", "C")],
        claims={"A": "g1", "B": "g2", "C": "g3"},
        preferences={"g1": 0.9, "g2": 0.3, "g3": 0.4},
    )
    assert fw.preferences[lit("g1")] == Decimal("0.9")
    assert fw.pursuable == {lit("g1"), lit("g2"), lit("g3")}
    assert fw.attackers("B") == {"A"}
    assert fw.targets("A") == {"B", "C"}
    assert fw.goals_of({"A", "C"}) == {lit("g1"), lit("g3")}
