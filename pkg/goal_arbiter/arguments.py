""" Partial plans and instrumental arguments (complete plan trees).

    Every goal node of an argument is itself an argument in the store, and a
    goal node's identifier is that argument's content hash. Two arguments
    that share a subtree therefore share the node identifiers inside it.
"""
import hashlib
import itertools
from enum import Enum
from typing import FrozenSet, Optional, Tuple, Union

import networkx as nx
from loguru import logger
from pydantic import BaseModel, ConfigDict

from goal_arbiter.errors import CyclicGoalDependency, NoRuleForGoal, UnknownGoal
from goal_arbiter.kb import Element, ElementKind, KnowledgeBase, Literal, PlanRule, ResourceAtom

ID_LENGTH = 12


class PartialPlan(BaseModel):
    """ A pair (support, conclusion). Elementary when the support is empty.
    """
    model_config = ConfigDict(frozen=True)

    support: FrozenSet[Element] = frozenset()
    conclusion: Element
    source_rule: Optional[str] = None

    @property
    def elementary(self):
        return not self.support

    def __str__(self):
        support = ", ".join(sorted(str(s) for s in self.support))
        return f"[{{{support}}}, {self.conclusion}]"


class Leaf(BaseModel):
    """ An elementary node: a belief, action or resource premise. """
    model_config = ConfigDict(frozen=True)

    id: str
    kind: ElementKind
    plan: PartialPlan

    @property
    def conclusion(self):
        return self.plan.conclusion


class InstrumentalArgument(BaseModel):
    """ A finite tree of partial plans whose root concludes the claimed goal.
        Children are ordered like the rule premise.
    """
    model_config = ConfigDict(frozen=True)

    id: str
    rule: PlanRule
    root: PartialPlan
    children: Tuple[Union["InstrumentalArgument", Leaf], ...] = ()

    def __eq__(self, other):
        return isinstance(other, InstrumentalArgument) and self.id == other.id

    def __hash__(self):
        return hash(self.id)

    def __str__(self):
        return f"{self.id}: {self.claim}"

    @property
    def claim(self) -> Literal:
        return self.root.conclusion

    def goal_nodes(self):
        """ This argument followed by its proper sub-arguments, depth first,
            each distinct sub-argument once.
        """
        seen = {}
        stack = [self]
        while stack:
            node = stack.pop()
            if node.id in seen:
                continue
            seen[node.id] = node
            stack.extend(reversed([c for c in node.children if isinstance(c, InstrumentalArgument)]))
        return list(seen.values())

    def descendants(self):
        return self.goal_nodes()[1:]

    def leaves(self):
        """ Every leaf occurrence in the tree. """
        return [leaf for node in self._walk() for leaf in node.children if isinstance(leaf, Leaf)]

    def _walk(self):
        yield self
        for child in self.children:
            if isinstance(child, InstrumentalArgument):
                yield from child._walk()

    def size(self):
        return sum(1 + sum(1 for c in node.children if isinstance(c, Leaf)) for node in self._walk())

    def support(self):
        plans = set()
        for node in self._walk():
            plans.add(node.root)
            plans.update(leaf.plan for leaf in node.children if isinstance(leaf, Leaf))
        return frozenset(plans)

    def conclusions(self):
        """ (kind, conclusion) for every partial plan in the tree. """
        found = {(ElementKind.GOAL, node.claim) for node in self._walk()}
        found.update((leaf.kind, leaf.conclusion) for leaf in self.leaves())
        return found

    def rec(self):
        """ Resource premise occurrences tagged with their leaf node id. """
        return [(leaf.id, leaf.conclusion) for leaf in self.leaves()
                if leaf.kind is ElementKind.RESOURCE]

    def rec_set(self):
        return frozenset(atom for _, atom in self.rec())

    def _literals(self, kind):
        return frozenset(leaf.conclusion for leaf in self.leaves() if leaf.kind is kind)

    def beliefs(self):
        return self._literals(ElementKind.BELIEF)

    def actions(self):
        return self._literals(ElementKind.ACTION)

    def subgoals(self):
        return frozenset(node.claim for node in self.descendants())

    def goals(self):
        return frozenset(node.claim for node in self._walk())

    def goal_plans(self, goal, proper=False):
        """ Goal nodes of the tree concluding the given goal. """
        nodes = self.descendants() if proper else self.goal_nodes()
        return [node for node in nodes if node.claim == goal]


InstrumentalArgument.model_rebuild()


def content_id(rule: PlanRule, subarguments) -> str:
    text = rule.key + "[" + ",".join(arg.id for arg in subarguments) + "]"
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:ID_LENGTH]


def build_argument(kb: KnowledgeBase, rule: PlanRule, chosen) -> InstrumentalArgument:
    """ Instantiate a rule, taking the sub-argument for each subgoal from `chosen`.
    """
    premises = rule.ordered_premises()
    subarguments = [chosen[p] for p in premises if p in rule.subgoals]
    arg_id = content_id(rule, subarguments)
    children = []
    for premise in premises:
        if premise in rule.subgoals:
            children.append(chosen[premise])
        else:
            kind = kb.kind_of(premise)
            children.append(Leaf(id=f"{arg_id}/{premise}", kind=kind,
                                 plan=PartialPlan(conclusion=premise)))
    root = PartialPlan(support=rule.premises, conclusion=rule.head, source_rule=rule.key)
    return InstrumentalArgument(id=arg_id, rule=rule, root=root, children=tuple(children))


def goal_dependency_graph(kb: KnowledgeBase) -> nx.DiGraph:
    """ Edge head -> subgoal for every rule. """
    graph = nx.DiGraph()
    graph.add_nodes_from(kb.goals)
    for rule in kb.rules:
        for subgoal in rule.subgoals:
            graph.add_edge(rule.head, subgoal)
    return graph


def enumerate_arguments(kb: KnowledgeBase) -> "ArgumentStore":
    """ Build every instrumental argument, choosing one rule per goal node.
        Goals are processed leaves first so each subgoal's arguments exist
        before any rule that needs them.
    """
    graph = goal_dependency_graph(kb)
    try:
        edges = nx.find_cycle(graph)
        raise CyclicGoalDependency([u for u, _ in edges] + [edges[-1][1]])
    except nx.NetworkXNoCycle:
        pass

    built = {}
    for goal in reversed(list(nx.lexicographical_topological_sort(graph, key=str))):
        rules = kb.rules_for(goal)
        if not rules:
            raise NoRuleForGoal(goal)
        args = []
        for rule in rules:
            subgoals = sorted(rule.subgoals)
            for combo in itertools.product(*(built[g] for g in subgoals)):
                args.append(build_argument(kb, rule, dict(zip(subgoals, combo))))
        built[goal] = args
        logger.trace(f"{len(args)} argument(s) for {goal}")

    if kb.pursuable:
        reachable = set(kb.pursuable)
        for goal in kb.pursuable:
            reachable.update(nx.descendants(graph, goal))
        for goal in sorted(kb.goals - reachable):
            logger.warning(f"Goal {goal} is not reachable from any pursuable goal")

    store = ArgumentStore([arg for args in built.values() for arg in args], kb)
    logger.debug(f"Enumerated {len(store)} arguments")
    return store


class ArgumentStore:
    """ All instrumental arguments of a knowledge base, indexed by id and claim.
    """

    def __init__(self, arguments, kb: KnowledgeBase):
        self.kb = kb
        self.goals = kb.goals
        self._by_id = {}
        for arg in arguments:
            self._by_id.setdefault(arg.id, arg)
        self.all = tuple(sorted(self._by_id.values(), key=lambda a: (str(a.claim), a.id)))
        self.by_claim = {goal: frozenset() for goal in self.goals}
        for arg in self.all:
            self.by_claim[arg.claim] = self.by_claim.get(arg.claim, frozenset()) | {arg.id}
        self.subargument_index = frozenset(
            (arg.id, sub.id) for arg in self.all for sub in arg.descendants())
        self._shared = frozenset(
            (a.id, b.id) for arg in self.all
            for a, b in itertools.permutations(arg.goal_nodes(), 2))
        self.fingerprint = hashlib.sha256(
            ",".join(sorted(self._by_id)).encode("utf-8")).hexdigest()[:ID_LENGTH]

    def __len__(self):
        return len(self.all)

    def __iter__(self):
        return iter(self.all)

    def __contains__(self, arg_id):
        return arg_id in self._by_id

    def get(self, arg_id) -> InstrumentalArgument:
        return self._by_id[arg_id]

    def ids(self):
        return [arg.id for arg in self.all]

    def arg_for(self, goal):
        if goal not in self.goals:
            raise UnknownGoal(goal)
        return {self._by_id[i] for i in self.by_claim.get(goal, ())}

    def is_subargument(self, sub_id, arg_id):
        """ True when sub_id is a proper sub-argument of arg_id. """
        return (arg_id, sub_id) in self.subargument_index

    def share_tree(self, a_id, b_id):
        """ True when both occur as goal nodes of one argument's tree. """
        return (a_id, b_id) in self._shared

    def with_clone(self, arg_id):
        """ A store that also holds a copy of the argument under a fresh id.
            Returns the new store and the clone.
        """
        original = self.get(arg_id)
        clone_id = f"{original.id}'"
        children = tuple(
            child.model_copy(update={"id": f"{clone_id}/{child.conclusion}"})
            if isinstance(child, Leaf) else child
            for child in original.children)
        clone = original.model_copy(update={"id": clone_id, "children": children})
        return ArgumentStore([*self.all, clone], self.kb), clone


class EquivalenceMode(str, Enum):
    LOGICAL = "logical"
    RESOURCE = "resource"
    WHOLE = "whole"


def claim(arg):
    return arg.claim


def support(arg):
    return arg.support()


def rec(arg):
    return arg.rec()


def rec_set(arg):
    return arg.rec_set()


def arg_for(store, goal):
    return store.arg_for(goal)


def equivalent(a, b, mode=EquivalenceMode.WHOLE) -> bool:
    mode = EquivalenceMode(mode)
    logical = a.claim == b.claim and a.support() == b.support()
    resource = a.rec_set() == b.rec_set()
    if mode is EquivalenceMode.LOGICAL:
        return logical
    if mode is EquivalenceMode.RESOURCE:
        return resource
    return logical and resource
