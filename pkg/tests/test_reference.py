from decimal import Decimal
from pathlib import Path

import pytest

from goal_arbiter.arguments import enumerate_arguments
from goal_arbiter.attacks import compute_relations
from goal_arbiter.errors import ReferenceTableError, UnresolvedReference
from goal_arbiter.frameworks import build_af, goal_attacks, successful_filter
from goal_arbiter.parser import load_kb
from goal_arbiter.reference import ReferenceArgument, ReferenceRow, ReferenceTable, compare, load_reference, resolve
from goal_arbiter.semantics import select

DATA = Path(__file__).parent / "data"


@pytest.fixture
def store():
    return enumerate_arguments(load_kb(DATA / "cleaner.kb"))


@pytest.fixture
def filtered(store):
    relations = compute_relations(store, store.kb.resources)
    return successful_filter(build_af(list(relations.values()), store))


@pytest.fixture
def table():
    return load_reference(DATA / "cleaner.reference.yaml")


def test_load(table):
    assert len(table.arguments) == 7
    assert len(table.rows) == 17
    assert table.rows[6].members == ("A", "E")
    assert table.rows[6].utility == Decimal("0.75")


def test_resolve(table, store):
    ids = resolve(table, store)
    assert set(ids.values()) == set(store.ids())
    assert str(store.get(ids["A"]).claim) == "clean(5,5)"
    assert "pickup(5,5)" in store.get(ids["A"]).rule.key


def test_only_the_summed_utility_differs(table, store, filtered):
    notes = compare(table, select(filtered), store)
    assert [str(note) for note in notes] == ["{A,E} utility=1.50 differs from reference 0.75"]


def test_row_outside_the_table(store, filtered):
    table = ReferenceTable(
        arguments={"C": ReferenceArgument(claim="clean(5,5)", uses=("mop(5,5)",)),
                   "B": ReferenceArgument(claim="be(fixed)", uses=("be(in_workshop)",))},
        rows=(ReferenceRow(members=("B", "C"), goals=2),))
    (note,) = compare(table, select(filtered), store)
    assert note.metric == "extension"
    assert str(note) == "{B,C} is not a conflict-free extension"


def test_goal_level_rows(store, filtered):
    table = ReferenceTable(rows=(
        ReferenceRow(members=("be(fixed)", "clean(5,5)", "mop(5,5)"), goals=3, utility=Decimal("2.15")),
        ReferenceRow(members=("mop(5,5)", "pickup(5,5)")),
    ))
    notes = compare(table, select(goal_attacks(filtered, store)), store)
    assert [str(note) for note in notes] == ["{mop(5,5),pickup(5,5)} is not a conflict-free extension"]


def test_ambiguous_name(store, filtered):
    table = ReferenceTable(arguments={"X": ReferenceArgument(claim="clean(5,5)")})
    with pytest.raises(UnresolvedReference) as e:
        resolve(table, store)
    assert len(e.value.matches) == 2


def test_unknown_member(table, store, filtered):
    broken = table.model_copy(update={"rows": (ReferenceRow(members=("Z",)),)})
    with pytest.raises(UnresolvedReference):
        compare(broken, select(filtered), store)


def test_invalid_table(tmp_path):
    path = tmp_path / "table.yaml"
    path.write_text("rows: [{members: [A], goals: many}]\n")
    with pytest.raises(ReferenceTableError):
        load_reference(path)
