""" The three attack relations between instrumental arguments: partial-plans
    rebuttal (terminal), resource attack and superfluous attack.
"""
import itertools
from collections import Counter
from enum import Enum
from typing import Dict, FrozenSet, Optional, Tuple, Union

from loguru import logger
from pydantic import BaseModel, ConfigDict, NonNegativeInt

from goal_arbiter.kb import ElementKind, Literal, ResourceSummary


class AttackKind(str, Enum):
    TERMINAL = "terminal"
    RESOURCE = "resource"
    SUPERFLUOUS = "superfluous"
    GENERAL = "general"

    @property
    def code(self):
        return self.value[0] if self is not AttackKind.GENERAL else "g"

    @classmethod
    def from_code(cls, code):
        for kind in cls:
            if code in (kind.value, kind.code):
                return kind
        raise ValueError(f"Unknown attack kind: {code}")


class RebuttalWitness(BaseModel):
    """ The attacker holds `conclusion`, the target holds its complement. """
    model_config = ConfigDict(frozen=True)

    element_kind: ElementKind
    conclusion: Literal

    @property
    def kind(self):
        return AttackKind.TERMINAL

    def __str__(self):
        return f"{self.conclusion} / {self.conclusion.negate()}"


class ResourceFormula(BaseModel):
    """ Joint demand of arguments on one resource. Occurrences are
        (argument id, node id, amount); a node shared by several trees is listed once.
    """
    model_config = ConfigDict(frozen=True)

    resource: str
    occurrences: Tuple[Tuple[str, str, NonNegativeInt], ...] = ()
    available: NonNegativeInt

    @property
    def kind(self):
        return AttackKind.RESOURCE

    @property
    def required(self):
        return sum(amount for _, _, amount in self.occurrences)

    def __str__(self):
        amounts = "+".join(str(amount) for _, _, amount in self.occurrences) or "0"
        op = "<=" if self.required <= self.available else ">"
        return f"{self.resource}: {amounts}={self.required} {op} {self.available}"


class SuperfluityWitness(BaseModel):
    """ The case that produced the edge. `via` is the edge the case was derived
        from (cases 2 and 3). A mirrored edge was added by symmetric closure and
        carries the case of its reverse.
    """
    model_config = ConfigDict(frozen=True)

    case: int
    via: Optional[Tuple[str, str]] = None
    mirrored: bool = False

    @property
    def kind(self):
        return AttackKind.SUPERFLUOUS

    def __str__(self):
        text = f"case {self.case}"
        if self.via:
            text += f" via {self.via[0]}->{self.via[1]}"
        if self.mirrored:
            text += " (mirrored)"
        return text


Witness = Union[RebuttalWitness, ResourceFormula, SuperfluityWitness]
Edge = Tuple[str, str]


class AttackRelation(BaseModel):
    """ A typed set of directed (attacker, target) pairs over one argument store.
    """
    model_config = ConfigDict(frozen=True)

    kind: AttackKind
    store: str
    edges: FrozenSet[Edge] = frozenset()
    provenance: Dict[Edge, Tuple[Witness, ...]] = {}
    rounds: int = 0

    def __contains__(self, edge):
        return tuple(edge) in self.edges

    def __len__(self):
        return len(self.edges)

    def pairs(self):
        return sorted(self.edges)

    def witnesses(self, attacker, target):
        return self.provenance.get((attacker, target), ())

    def is_symmetric(self):
        return all((b, a) in self.edges for a, b in self.edges)


def _relation(kind, store, found, rounds=0):
    return AttackRelation(
        kind=kind,
        store=store.fingerprint,
        edges=frozenset(found),
        provenance={edge: tuple(w) for edge, w in found.items()},
        rounds=rounds,
    )


def rebuttal_attacks(store) -> AttackRelation:
    """ Arguments for different goals whose trees hold complementary beliefs,
        actions or goals.
    """
    conclusions = {arg.id: {(k, c) for k, c in arg.conclusions() if k is not ElementKind.RESOURCE}
                   for arg in store}
    found = {}
    for a, b in itertools.permutations(store, 2):
        if a.claim == b.claim:
            continue
        theirs = conclusions[b.id]
        witnesses = sorted(
            (RebuttalWitness(element_kind=k, conclusion=c)
             for k, c in conclusions[a.id] if (k, c.negate()) in theirs),
            key=str)
        if witnesses:
            found[(a.id, b.id)] = witnesses
    logger.debug(f"Terminal attacks: {len(found)}")
    return _relation(AttackKind.TERMINAL, store, found)


def joint_formula(summary: ResourceSummary, args, resource) -> ResourceFormula:
    """ Joint demand of several arguments on one resource. Each (node, amount)
        occurrence counts as often as it occurs in whichever tree holds it most,
        so a subtree shared by two arguments is consumed once.
    """
    occurrences = []
    counted = Counter()
    for arg in args:
        local = Counter((node, atom.amount) for node, atom in arg.rec() if atom.resource == resource)
        for (node, amount), n in sorted(local.items()):
            extra = n - counted[(node, amount)]
            for _ in range(max(extra, 0)):
                occurrences.append((arg.id, node, amount))
            counted[(node, amount)] = max(counted[(node, amount)], n)
    return ResourceFormula(resource=resource, occurrences=tuple(occurrences),
                           available=summary.available(resource))


def resource_formula(summary: ResourceSummary, a, b, resource) -> ResourceFormula:
    return joint_formula(summary, (a, b), resource)


def resource_entails(summary: ResourceSummary, formula: ResourceFormula) -> bool:
    return summary.available(formula.resource) >= formula.required


def resource_attacks(store, summary: ResourceSummary, alternatives: Optional[AttackRelation] = None) -> AttackRelation:
    """ Pairs whose joint demand on a shared resource exceeds availability.
        Sub-argument pairs are skipped, and so are alternative plans for a
        common end (pairs in the superfluous relation).
    """
    if alternatives is None:
        alternatives = superfluous_attacks(store)
    names = {arg.id: {atom.resource for atom in arg.rec_set()} for arg in store}
    found = {}
    for a, b in itertools.permutations(store, 2):
        if store.is_subargument(a.id, b.id) or store.is_subargument(b.id, a.id):
            continue
        if (a.id, b.id) in alternatives:
            continue
        for resource in sorted(names[a.id] & names[b.id]):
            formula = resource_formula(summary, a, b, resource)
            if not resource_entails(summary, formula):
                found[(a.id, b.id)] = [formula]
                break
    logger.debug(f"Resource attacks: {len(found)}")
    return _relation(AttackKind.RESOURCE, store, found)


def _case_one(a, b):
    if a.claim == b.claim and a.support() != b.support():
        return SuperfluityWitness(case=1)
    return None


def _case_two(store, a, b, current):
    for x, y in sorted(current):
        if store.get(x).goal_plans(a.claim, proper=True) and \
                store.get(y).goal_plans(b.claim, proper=True):
            return SuperfluityWitness(case=2, via=(x, y))
    return None


def _case_three(store, a, b, current):
    target_support = b.support()
    for x, y in sorted(current):
        if y != b.id:
            continue
        for node in store.get(x).goal_plans(a.claim):
            if node.root not in target_support:
                return SuperfluityWitness(case=3, via=(x, y))
    return None


def superfluous_attacks(store) -> AttackRelation:
    """ Least fixpoint of the three superfluity cases. Each round derives new
        edges from the relation as it stood at the end of the previous round,
        trying case 1, then 2, then 3, and then closes the result symmetrically.
        No case 2 or 3 edge joins two arguments found together in one tree.
    """
    current: Dict[Edge, SuperfluityWitness] = {}
    rounds = 0
    while True:
        rounds += 1
        derived = {}
        for a, b in itertools.permutations(store, 2):
            if (a.id, b.id) in current:
                continue
            witness = _case_one(a, b)
            if witness is None and a.claim != b.claim and not store.share_tree(a.id, b.id):
                witness = _case_two(store, a, b, current) or _case_three(store, a, b, current)
            if witness is not None:
                derived[(a.id, b.id)] = witness
        if not derived:
            break
        mirrors = {(b, a): w.model_copy(update={"mirrored": True})
                   for (a, b), w in derived.items()
                   if (b, a) not in derived and (b, a) not in current}
        current.update(derived)
        current.update(mirrors)
        logger.trace(f"Superfluity round {rounds}: {len(derived)} derived, {len(mirrors)} mirrored")

    logger.debug(f"Superfluous attacks: {len(current)} after {rounds} round(s)")
    return _relation(AttackKind.SUPERFLUOUS, store,
                     {edge: [w] for edge, w in current.items()}, rounds=rounds)


def compute_relations(store, summary, kinds=None) -> Dict[AttackKind, AttackRelation]:
    """ The requested per-kind relations, all three by default. """
    kinds = kinds or [AttackKind.TERMINAL, AttackKind.RESOURCE, AttackKind.SUPERFLUOUS]
    superfluous = superfluous_attacks(store)
    relations = {}
    for kind in kinds:
        if kind is AttackKind.TERMINAL:
            relations[kind] = rebuttal_attacks(store)
        elif kind is AttackKind.RESOURCE:
            relations[kind] = resource_attacks(store, summary, alternatives=superfluous)
        elif kind is AttackKind.SUPERFLUOUS:
            relations[kind] = superfluous
    return relations
