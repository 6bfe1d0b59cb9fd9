""" Argumentation frameworks over arguments and over goals.
"""
from decimal import Decimal
from typing import Any, Dict, FrozenSet, Hashable, Tuple

import networkx as nx
from loguru import logger
from pydantic import BaseModel, ConfigDict

from goal_arbiter.attacks import AttackKind, Witness
from goal_arbiter.errors import MissingPreference, MixedStores
from goal_arbiter.kb import Literal
from goal_arbiter.settings import Level


class Framework(BaseModel):
    """ Nodes and directed attack edges, plus what selection needs to know
        about the goals each node stands for.
    """
    model_config = ConfigDict(frozen=True)

    nodes: Tuple[Hashable, ...] = ()
    edges: FrozenSet[Tuple[Any, Any]] = frozenset()
    pursuable: FrozenSet[Literal] = frozenset()
    preferences: Dict[Literal, Decimal] = {}
    filtered: bool = False

    level: Level = Level.ARGUMENTS

    def graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.nodes)
        graph.add_edges_from(self.edges)
        return graph

    def attackers(self, node):
        return set(self.graph().predecessors(node))

    def targets(self, node):
        return set(self.graph().successors(node))

    def conflicting(self, a, b):
        return (a, b) in self.edges or (b, a) in self.edges

    def goals_of(self, members):
        raise NotImplementedError()


class ArgFramework(Framework):
    """ Arguments as nodes. `kinds` and `provenance` keep, for every edge, the
        attack kinds merged into it and their witnesses.
    """
    nodes: Tuple[str, ...] = ()
    edges: FrozenSet[Tuple[str, str]] = frozenset()
    claims: Dict[str, Literal] = {}
    kinds: Dict[Tuple[str, str], FrozenSet[AttackKind]] = {}
    provenance: Dict[Tuple[str, str], Tuple[Witness, ...]] = {}

    level: Level = Level.ARGUMENTS

    @classmethod
    def from_edges(cls, nodes, edges, claims, pursuable=None, preferences=None):
        """ An abstract framework with no knowledge base behind it. """
        claims = {node: _as_literal(claim) for node, claim in claims.items()}
        preferences = {_as_literal(goal): Decimal(str(value))
                       for goal, value in (preferences or {}).items()}
        pursuable = frozenset(claims.values()) if pursuable is None \
            else frozenset(_as_literal(g) for g in pursuable)
        edges = frozenset(tuple(edge) for edge in edges)
        return cls(
            nodes=tuple(sorted(nodes)),
            edges=edges,
            claims=claims,
            kinds={edge: frozenset({AttackKind.GENERAL}) for edge in edges},
            pursuable=pursuable,
            preferences=preferences,
        )

    def goals_of(self, members):
        return {self.claims[m] for m in members}


class GoalFramework(Framework):
    """ Goals as nodes. `certificates` holds, per edge, the cross argument
        pairs and the direction of the attack between them.
    """
    nodes: Tuple[Literal, ...] = ()
    edges: FrozenSet[Tuple[Literal, Literal]] = frozenset()
    certificates: Dict[Tuple[Literal, Literal], Tuple[Tuple[str, str, str], ...]] = {}

    level: Level = Level.GOALS

    def goals_of(self, members):
        return set(members)


def _as_literal(value):
    return value if isinstance(value, Literal) else Literal(name=str(value))


def build_af(relations, store) -> ArgFramework:
    """ The union of the given relations over every argument in the store.
        Several kinds on one pair make a single edge that remembers them all.
    """
    kinds = {}
    provenance = {}
    for relation in relations:
        if relation.store != store.fingerprint:
            raise MixedStores()
        for edge in relation.pairs():
            kinds.setdefault(edge, set()).add(relation.kind)
            provenance[edge] = provenance.get(edge, ()) + relation.witnesses(*edge)

    af = ArgFramework(
        nodes=tuple(store.ids()),
        edges=frozenset(kinds),
        claims={arg.id: arg.claim for arg in store},
        kinds={edge: frozenset(k) for edge, k in kinds.items()},
        provenance=provenance,
        pursuable=store.kb.pursuable,
        preferences=dict(store.kb.preferences),
    )
    logger.debug(f"Built framework: {len(af.nodes)} nodes, {len(af.edges)} edges")
    return af


def successful_filter(af: ArgFramework, preferences=None) -> ArgFramework:
    """ Keep an attack when the attacker's claim is at least as preferred as
        the target's. Equal preferences keep both directions of a pair.
    """
    preferences = af.preferences if preferences is None else preferences

    def pref(node):
        goal = af.claims[node]
        if goal not in preferences:
            raise MissingPreference(goal)
        return preferences[goal]

    kept = frozenset((a, b) for a, b in af.edges if pref(a) >= pref(b))
    logger.debug(f"Successful attacks: {len(kept)} of {len(af.edges)}")
    return af.model_copy(update={
        "edges": kept,
        "kinds": {edge: k for edge, k in af.kinds.items() if edge in kept},
        "provenance": {edge: w for edge, w in af.provenance.items() if edge in kept},
        "preferences": dict(preferences),
        "filtered": True,
    })


def goal_attacks(af: ArgFramework, store) -> GoalFramework:
    """ Two goals conflict when every argument for one is in conflict with
        every argument for the other. The goal edge follows the argument edges:
        one direction when they all agree, both otherwise.
    """
    nodes = set(store.kb.pursuable)
    for arg in store:
        nodes.update(arg.subgoals())
    by_goal = {g: sorted(store.by_claim.get(g, ())) for g in nodes}
    nodes = sorted(g for g in nodes if by_goal[g])

    edges = set()
    certificates = {}
    for i, g in enumerate(nodes):
        for h in nodes[i + 1:]:
            certificate = _cross_certificate(af, by_goal[g], by_goal[h])
            if certificate is None:
                continue
            directions = {d for _, _, d in certificate}
            if directions == {"->"}:
                emitted = [(g, h)]
            elif directions == {"<-"}:
                emitted = [(h, g)]
            else:
                emitted = [(g, h), (h, g)]
            for edge in emitted:
                edges.add(edge)
                certificates[edge] = certificate

    gf = GoalFramework(
        nodes=tuple(nodes),
        edges=frozenset(edges),
        certificates=certificates,
        pursuable=store.kb.pursuable & frozenset(nodes),
        preferences={g: af.preferences[g] for g in nodes if g in af.preferences},
        filtered=af.filtered,
    )
    logger.debug(f"Goal framework: {len(gf.nodes)} goals, {len(gf.edges)} edges")
    return gf


def _cross_certificate(af, args, others):
    """ Direction of the attack for every cross pair, or None when some pair
        has no attack either way.
    """
    certificate = []
    for a in args:
        for b in others:
            forward, backward = (a, b) in af.edges, (b, a) in af.edges
            if not (forward or backward):
                return None
            certificate.append((a, b, "<->" if forward and backward else "->" if forward else "<-"))
    return tuple(certificate)
