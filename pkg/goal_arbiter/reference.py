""" Reference tables: expected goal counts and utilities per conflict-free
    extension, compared against what a selection computed.

    A table names arguments by their claim and, where the claim alone is
    ambiguous, by literals their tree uses:

        arguments:
          A: {claim: clean(5,5), uses: [pickup(5,5)]}
          F: {claim: be(fixed), uses: [call(technician)]}
        rows:
          - {members: [A, F], goals: 2, utility: 1.35}

    At the goal level row members are goal literals and no names are needed.
"""
from decimal import Decimal
from pathlib import Path
from typing import Dict, Optional, Tuple

import yaml
from loguru import logger
from pydantic import BaseModel, ConfigDict, ValidationError

from goal_arbiter.errors import ReferenceTableError, UnresolvedReference
from goal_arbiter.settings import Level


class ReferenceArgument(BaseModel):
    model_config = ConfigDict(frozen=True)

    claim: str
    uses: Tuple[str, ...] = ()


class ReferenceRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    members: Tuple[str, ...] = ()
    goals: Optional[int] = None
    utility: Optional[Decimal] = None

    @property
    def label(self):
        return "{" + ",".join(self.members) + "}"


class ReferenceTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    arguments: Dict[str, ReferenceArgument] = {}
    rows: Tuple[ReferenceRow, ...] = ()


class ReferenceNote(BaseModel):
    """ One metric of one row that differs from the computed value. A row
        that names no conflict-free extension has metric `extension`.
    """
    model_config = ConfigDict(frozen=True)

    row: str
    metric: str
    computed: Optional[str] = None
    expected: Optional[str] = None

    def __str__(self):
        if self.metric == "extension":
            return f"{self.row} is not a conflict-free extension"
        return f"{self.row} {self.metric}={self.computed} differs from reference {self.expected}"


def load_reference(path) -> ReferenceTable:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        table = ReferenceTable.model_validate(data)
    except (OSError, yaml.YAMLError, ValidationError) as e:
        raise ReferenceTableError(str(path), str(e).splitlines()[0])
    logger.debug(f"Loaded reference table with {len(table.rows)} rows from {path}")
    return table


def resolve(table: ReferenceTable, store):
    """ Argument id for every name in the table. """
    ids = {}
    for name, spec in sorted(table.arguments.items()):
        matches = []
        for arg in store:
            if str(arg.claim) != spec.claim:
                continue
            text = {str(x) for x in arg.goals() | arg.beliefs() | arg.actions()}
            if all(use in text for use in spec.uses):
                matches.append(arg.id)
        if len(matches) != 1:
            raise UnresolvedReference(name, matches)
        ids[name] = matches[0]
    return ids


def compare(table: ReferenceTable, result, store) -> Tuple[ReferenceNote, ...]:
    """ Notes for every row whose metrics differ from the selection's. """
    if result.level is Level.GOALS:
        by_members = {frozenset(str(g) for g in m.extension.members): m for m in result.metrics}
        key = frozenset
    else:
        ids = resolve(table, store)
        by_members = {m.extension.members: m for m in result.metrics}

        def key(members):
            missing = [name for name in members if name not in ids]
            if missing:
                raise UnresolvedReference(missing[0], ())
            return frozenset(ids[name] for name in members)

    notes = []
    for row in table.rows:
        metrics = by_members.get(key(row.members))
        if metrics is None:
            notes.append(ReferenceNote(row=row.label, metric="extension"))
            continue
        if row.goals is not None and row.goals != metrics.goal_count:
            notes.append(ReferenceNote(row=row.label, metric="goals",
                                       computed=str(metrics.goal_count), expected=str(row.goals)))
        if row.utility is not None and row.utility != metrics.utility:
            notes.append(ReferenceNote(row=row.label, metric="utility",
                                       computed=str(metrics.utility), expected=str(row.utility)))
    logger.debug(f"Reference comparison: {len(notes)} note(s) over {len(table.rows)} rows")
    return tuple(notes)
