""" Extension semantics and the selection of compatible goal sets.
"""
from decimal import Decimal
from enum import Enum
from typing import Dict, FrozenSet, Hashable, Optional, Tuple, Type

from loguru import logger
from pydantic import BaseModel, ConfigDict
from typing_extensions import override

from goal_arbiter.errors import MissingPreference, SizeBoundExceeded
from goal_arbiter.kb import Literal
from goal_arbiter.settings import Level, Policy, get_settings


class Extension(BaseModel):
    model_config = ConfigDict(frozen=True)

    members: FrozenSet[Hashable] = frozenset()
    level: Level = Level.ARGUMENTS

    def sorted_members(self):
        return sorted(self.members, key=str)

    def __len__(self):
        return len(self.members)

    def __str__(self):
        return "{" + ", ".join(str(m) for m in self.sorted_members()) + "}"


def _canonical(extensions):
    return sorted(extensions, key=lambda e: (len(e.members), [str(m) for m in e.sorted_members()]))


def _bound(fw, bound):
    bound = get_settings().bound if bound is None else bound
    if len(fw.nodes) > bound:
        raise SizeBoundExceeded(len(fw.nodes), bound)


def is_conflict_free(fw, members) -> bool:
    members = set(members)
    return not any(a in members and b in members for a, b in fw.edges)


def attacker_map(fw):
    """ The attackers of every node, read once from the framework graph. """
    graph = fw.graph()
    return {node: set(graph.predecessors(node)) for node in graph.nodes}


def defends(fw, members, node, attackers=None) -> bool:
    """ Every attacker of the node is attacked by some member. """
    attackers = attacker_map(fw) if attackers is None else attackers
    members = set(members)
    return all(attackers[attacker] & members for attacker in attackers.get(node, ()))


def is_admissible(fw, members, attackers=None) -> bool:
    attackers = attacker_map(fw) if attackers is None else attackers
    return is_conflict_free(fw, members) and all(defends(fw, members, m, attackers) for m in members)


def range_of(fw, members):
    """ The members together with everything they attack. """
    members = set(members)
    return members | {b for a, b in fw.edges if a in members}


def maximal(extensions):
    """ The inclusion-maximal extensions of the given collection. """
    extensions = list(extensions)
    return [e for e in extensions if not any(e.members < other.members for other in extensions)]


def conflict_free_sets(fw, bound=None):
    """ Every subset of the nodes with no attack between two members,
        the empty set included. Raises when the framework exceeds the bound.
    """
    _bound(fw, bound)
    nodes = sorted(fw.nodes, key=str)
    conflicts = {n: set() for n in nodes}
    for a, b in fw.edges:
        conflicts[a].add(b)
        conflicts[b].add(a)

    found = []

    def extend(index, chosen, blocked):
        if index == len(nodes):
            found.append(Extension(members=frozenset(chosen), level=fw.level))
            return
        node = nodes[index]
        extend(index + 1, chosen, blocked)
        if node not in blocked and node not in conflicts[node]:
            extend(index + 1, chosen + [node], blocked | conflicts[node])

    extend(0, [], frozenset())
    logger.trace(f"{len(found)} conflict-free sets over {len(nodes)} nodes")
    return _canonical(found)


def preferred_extensions(fw, bound=None):
    """ Inclusion-maximal admissible sets. """
    attackers = attacker_map(fw)
    admissible = [e for e in conflict_free_sets(fw, bound) if is_admissible(fw, e.members, attackers)]
    return _canonical(maximal(admissible))


def stage_extensions(fw, bound=None):
    """ Conflict-free sets whose range is inclusion-maximal. """
    candidates = [(e, frozenset(range_of(fw, e.members))) for e in conflict_free_sets(fw, bound)]
    return _canonical(e for e, r in candidates if not any(r < other for _, other in candidates))


class GoalCounting(str, Enum):
    PURSUABLE = "pursuable-only"
    ALL = "all-elements"


class SelectionPolicy(BaseModel):
    """ Which criterion runs first, and how goals are counted. Without an
        explicit counting mode, argument-level frameworks count pursuable goals
        and goal-level frameworks count members.
    """
    model_config = ConfigDict(frozen=True)

    first_criterion: Policy = Policy.GOALS_FIRST
    goal_counting: Optional[GoalCounting] = None

    def counting_for(self, fw):
        if self.goal_counting is not None:
            return self.goal_counting
        return GoalCounting.PURSUABLE if fw.level is Level.ARGUMENTS else GoalCounting.ALL


def goal_count(fw, members, counting=None):
    counting = counting or SelectionPolicy().counting_for(fw)
    if counting is GoalCounting.ALL:
        return len(members)
    return len(fw.goals_of(members) & fw.pursuable)


def utility(fw, members, preferences=None) -> Decimal:
    """ Sum of preferences over the distinct goals the members stand for. """
    preferences = fw.preferences if preferences is None else preferences
    total = Decimal(0)
    for goal in sorted(fw.goals_of(members)):
        if goal not in preferences:
            raise MissingPreference(goal)
        total += preferences[goal]
    return total


def _keep_best(extensions, score):
    scored = [(score(e), e) for e in extensions]
    best = max(s for s, _ in scored)
    return [e for s, e in scored if s == best]


def max_goal(sets, fw, policy: Optional[SelectionPolicy] = None):
    counting = (policy or SelectionPolicy()).counting_for(fw)
    return _keep_best(sets, lambda e: goal_count(fw, e.members, counting))


def max_util(sets, fw, preferences=None):
    return _keep_best(sets, lambda e: utility(fw, e.members, preferences))


def comp_goals(fw, extension) -> FrozenSet[Literal]:
    return frozenset(fw.goals_of(extension.members))


class ExtensionMetrics(BaseModel):
    model_config = ConfigDict(frozen=True)

    extension: Extension
    goal_count: int
    utility: Decimal


class SelectionStage(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    survivors: Tuple[Extension, ...]
    eliminated: Tuple[Extension, ...] = ()


class SelectionResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    level: Level
    policy: SelectionPolicy
    proper_extensions: Tuple[Extension, ...]
    compatible_goal_sets: Tuple[FrozenSet[Literal], ...]
    metrics: Tuple[ExtensionMetrics, ...]
    trace: Tuple[SelectionStage, ...]

    def metrics_for(self, extension):
        for m in self.metrics:
            if m.extension == extension:
                return m
        return None


def _stage(name, before, after):
    kept = set(after)
    return SelectionStage(name=name, survivors=tuple(_canonical(after)),
                          eliminated=tuple(_canonical(e for e in before if e not in kept)))


def select(fw, policy: Optional[SelectionPolicy] = None, bound=None) -> SelectionResult:
    """ Conflict-free sets, then the first criterion, then the second one when
        more than one set survives, then the inclusion-maximal survivors.
    """
    policy = policy or SelectionPolicy()
    counting = policy.counting_for(fw)
    cf = conflict_free_sets(fw, bound)
    metrics = tuple(ExtensionMetrics(extension=e, goal_count=goal_count(fw, e.members, counting),
                                     utility=utility(fw, e.members)) for e in cf)
    trace = [_stage("conflict-free", [], cf)]

    criteria = [("max-goal", lambda sets: max_goal(sets, fw, policy)),
                ("max-util", lambda sets: max_util(sets, fw))]
    if policy.first_criterion is Policy.UTILITY_FIRST:
        criteria.reverse()

    current = cf
    for position, (name, criterion) in enumerate(criteria):
        if position > 0 and len(current) <= 1:
            break
        survivors = criterion(current)
        trace.append(_stage(name, current, survivors))
        current = survivors
        logger.debug(f"{name}: {len(current)} extension(s) left")

    survivors = maximal(current)
    trace.append(_stage("maximal", current, survivors))
    proper = tuple(_canonical(survivors))

    return SelectionResult(
        level=fw.level,
        policy=policy,
        proper_extensions=proper,
        compatible_goal_sets=tuple(comp_goals(fw, e) for e in proper),
        metrics=metrics,
        trace=tuple(trace),
    )


class Semantics:
    """ Interface for an extension semantics. Implementations are looked up
        by name in SEMANTICS.
    """

    def __init__(self, bound=None):
        self.bound = bound

    def extensions(self, fw):
        """ All extensions of the framework under this semantics. """
        raise NotImplementedError()


class ConflictFreeSemantics(Semantics):

    @override
    def extensions(self, fw):
        return conflict_free_sets(fw, self.bound)


class PreferredSemantics(Semantics):

    @override
    def extensions(self, fw):
        return preferred_extensions(fw, self.bound)


class StageSemantics(Semantics):

    @override
    def extensions(self, fw):
        return stage_extensions(fw, self.bound)


SEMANTICS: Dict[str, Type[Semantics]] = {
    "conflict-free": ConflictFreeSemantics,
    "preferred": PreferredSemantics,
    "stage": StageSemantics,
}


def get_semantics(name, bound=None) -> Semantics:
    if name not in SEMANTICS:
        raise ValueError(f"Unknown semantics {name!r}, expected one of: {', '.join(sorted(SEMANTICS))}")
    return SEMANTICS[name](bound=bound)
