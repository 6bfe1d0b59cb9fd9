from pathlib import Path

import pytest

from goal_arbiter.arguments import enumerate_arguments
from goal_arbiter.attacks import (
    AttackKind,
    ResourceFormula,
    compute_relations,
    joint_formula,
    rebuttal_attacks,
    resource_attacks,
    resource_entails,
    resource_formula,
    superfluous_attacks,
)
from goal_arbiter.errors import UnknownResource
from goal_arbiter.kb import ElementKind, ResourceSummary
from goal_arbiter.parser import load_kb, parse_kb

DATA = Path(__file__).parent / "data"


def find(store, head, marker=""):
    for arg in store:
        if str(arg.claim) == head and marker in arg.rule.key:
            return arg
    raise KeyError(head)


def pairs(text):
    """ "AB BA" -> {("A", "B"), ("B", "A")} """
    return {(p[0], p[1]) for p in text.split()}


@pytest.fixture
def kb():
    return load_kb(DATA / "cleaner.kb")


@pytest.fixture
def store(kb):
    return enumerate_arguments(kb)


@pytest.fixture
def named(store):
    return {
        "A": find(store, "clean(5,5)", "pickup(5,5)"),
        "B": find(store, "be(fixed)", "be(in_workshop)"),
        "C": find(store, "clean(5,5)", "mop(5,5)"),
        "D": find(store, "mop(5,5)"),
        "E": find(store, "pickup(5,5)"),
        "F": find(store, "be(fixed)", "call(technician)"),
        "H": find(store, "be(in_workshop)"),
    }


@pytest.fixture
def letters(named):
    return {arg.id: name for name, arg in named.items()}


def as_letters(relation, letters):
    return {(letters[a], letters[b]) for a, b in relation.edges}


def test_rebuttal_cleaner(store, letters):
    relation = rebuttal_attacks(store)
    assert relation.kind is AttackKind.TERMINAL
    assert as_letters(relation, letters) == pairs("AB BA EB BE EH HE AH HA CB BC DB BD DH HD CH HC")
    assert relation.is_symmetric()


def test_rebuttal_witness(store, named):
    relation = rebuttal_attacks(store)
    (witness,) = relation.witnesses(named["H"].id, named["A"].id)
    assert witness.element_kind is ElementKind.BELIEF
    assert str(witness) == "~be(operative) / be(operative)"


def test_rebuttal_needs_different_claims():
    kb = parse_kb("beliefs: p\ngoals: g @ 0.5\nrules: p -> g; ~p -> g;\n")
    store = enumerate_arguments(kb)
    assert len(store) == 2
    assert len(rebuttal_attacks(store)) == 0


def test_single_argument_has_no_attacks():
    store = enumerate_arguments(load_kb(DATA / "minimal.kb"))
    for relation in compute_relations(store, store.kb.resources).values():
        assert len(relation) == 0


def test_resource_entails(kb):
    summary = kb.resources
    occurrences = (("C", "n1", 60), ("H", "n2", 30))
    assert resource_entails(summary, ResourceFormula(resource="bat", occurrences=occurrences, available=90))
    too_much = (("A", "n1", 70), ("H", "n2", 30))
    assert not resource_entails(summary, ResourceFormula(resource="bat", occurrences=too_much, available=90))
    assert resource_entails(summary, ResourceFormula(resource="bat", available=90))
    with pytest.raises(UnknownResource):
        resource_entails(summary, ResourceFormula(resource="water", available=0))


def test_resource_formula(kb, named):
    feasible = resource_formula(kb.resources, named["C"], named["B"], "bat")
    assert feasible.required == 90
    assert str(feasible) == "bat: 60+30=90 <= 90"
    assert resource_entails(kb.resources, feasible)

    infeasible = resource_formula(kb.resources, named["A"], named["B"], "bat")
    assert str(infeasible) == "bat: 70+30=100 > 90"
    assert not resource_entails(kb.resources, infeasible)


def test_shared_subtree_counts_once(kb, named):
    formula = joint_formula(kb.resources, (named["A"], named["E"]), "bat")
    assert formula.required == 70
    assert len(formula.occurrences) == 1


def test_resource_cleaner(store, kb, letters):
    relation = resource_attacks(store, kb.resources)
    assert relation.kind is AttackKind.RESOURCE
    assert as_letters(relation, letters) == pairs("AB BA EB BE AH HA EH HE")
    assert relation.is_symmetric()


def test_resource_skips_alternatives(store, kb, named):
    relation = resource_attacks(store, kb.resources)
    # 70+60 > 90, yet the plans are alternatives for one end
    assert (named["A"].id, named["C"].id) not in relation
    assert (named["E"].id, named["D"].id) not in relation
    assert (named["C"].id, named["B"].id) not in relation


def test_resource_skips_subarguments(store, kb, named):
    relation = resource_attacks(store, kb.resources)
    assert (named["A"].id, named["E"].id) not in relation
    assert (named["E"].id, named["A"].id) not in relation


def test_resource_disjoint_names():
    kb = parse_kb("goals: g @ 0.5, h @ 0.5\nresources: bat = 10, oil = 10\n"
                  "rules: res(bat,10) -> g; res(oil,10) -> h;\n")
    store = enumerate_arguments(kb)
    assert len(resource_attacks(store, kb.resources)) == 0


def test_resource_equal_amounts_are_both_counted():
    kb = parse_kb("goals: g @ 0.5, h @ 0.5\nresources: bat = 90\n"
                  "rules: res(bat,50) -> g; res(bat,50) -> h;\n")
    store = enumerate_arguments(kb)
    relation = resource_attacks(store, kb.resources)
    assert len(relation) == 2
    (formula,) = relation.witnesses(*relation.pairs()[0])
    assert formula.required == 100


def test_superfluous_cleaner(store, letters):
    relation = superfluous_attacks(store)
    assert relation.kind is AttackKind.SUPERFLUOUS
    assert as_letters(relation, letters) == pairs("CA AC FB BF ED DE CE EC AD DA FH HF")
    assert relation.is_symmetric()


def test_superfluous_cases(store, letters):
    relation = superfluous_attacks(store)
    cases = {}
    for a, b in relation.edges:
        (witness,) = relation.witnesses(a, b)
        cases.setdefault(witness.case, set()).add((letters[a], letters[b]))
    assert cases == {
        1: pairs("CA AC FB BF"),
        2: pairs("ED DE"),
        3: pairs("CE EC AD DA FH HF"),
    }


def test_superfluous_witnesses_revalidate(store):
    relation = superfluous_attacks(store)
    for a, b in relation.edges:
        (witness,) = relation.witnesses(a, b)
        if witness.mirrored:
            assert (b, a) in relation
            assert not relation.witnesses(b, a)[0].mirrored
        elif witness.case == 1:
            assert store.get(a).claim == store.get(b).claim
        else:
            assert witness.via in relation
            assert not store.share_tree(a, b)


def test_superfluous_rounds(store):
    relation = superfluous_attacks(store)
    assert 1 <= relation.rounds <= len(store) ** 2


def test_superfluous_needs_a_seed():
    kb = parse_kb("beliefs: p\ngoals: g @ 0.5, h @ 0.5\nrules: p -> g; p, g -> h;\n")
    assert len(superfluous_attacks(enumerate_arguments(kb))) == 0


def test_compute_relations(store, kb):
    relations = compute_relations(store, kb.resources)
    assert set(relations) == {AttackKind.TERMINAL, AttackKind.RESOURCE, AttackKind.SUPERFLUOUS}
    assert [len(r) for r in relations.values()] == [16, 8, 12]
    only = compute_relations(store, kb.resources, [AttackKind.RESOURCE])
    assert list(only) == [AttackKind.RESOURCE]
    assert all(r.store == store.fingerprint for r in relations.values())


def test_attack_kind_codes():
    assert AttackKind.from_code("t") is AttackKind.TERMINAL
    assert AttackKind.from_code("resource") is AttackKind.RESOURCE
    assert AttackKind.SUPERFLUOUS.code == "s"
    with pytest.raises(ValueError):
        AttackKind.from_code("x")


def test_clone_congruence(store, kb, named):
    original = compute_relations(store, kb.resources)
    for name in "ABCF":
        arg = named[name]
        clone_store, clone = store.with_clone(arg.id)
        cloned = compute_relations(clone_store, kb.resources)
        for kind, relation in cloned.items():
            restricted = {(a, b) for a, b in relation.edges if clone.id not in (a, b)}
            assert restricted == set(original[kind].edges)
            for other in store.ids():
                if other == arg.id:
                    continue
                assert ((arg.id, other) in relation) == ((clone.id, other) in relation)
                assert ((other, arg.id) in relation) == ((other, clone.id) in relation)


def test_summary_lookup():
    summary = ResourceSummary(availability={"bat": 90})
    assert summary.available("bat") == 90
    assert "bat" in summary
    with pytest.raises(UnknownResource):
        summary.available("oil")
