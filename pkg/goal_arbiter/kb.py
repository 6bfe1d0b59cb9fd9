""" Domain types for the agent's mental state: literals, resource atoms,
    plan rules, the resource summary and the knowledge base tuple.
"""
from decimal import Decimal
from enum import Enum
from typing import Dict, FrozenSet, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt

from goal_arbiter.errors import (
    DisjointnessViolation,
    HeadInOwnPremise,
    MissingPreference,
    NoRuleForGoal,
    PreferenceOutOfRange,
    UndeclaredSymbol,
    UnknownGoal,
    UnknownResource,
)

Term = Union[int, str]


class ElementKind(str, Enum):
    BELIEF = "belief"
    ACTION = "action"
    GOAL = "goal"
    RESOURCE = "resource"


class Literal(BaseModel):
    """ An atom with a polarity. Negating twice yields the original literal,
        so a double negation is never stored.
    """
    model_config = ConfigDict(frozen=True)

    name: str = Field(min_length=1)
    negated: bool = False
    args: Tuple[Term, ...] = ()

    @property
    def atom(self):
        return (self.name, self.args)

    def negate(self):
        return self.model_copy(update={"negated": not self.negated})

    def is_complement(self, other):
        return isinstance(other, Literal) and self.atom == other.atom \
            and self.negated != other.negated

    def __str__(self):
        text = ("~" if self.negated else "") + self.name
        if self.args:
            text += "(" + ",".join(str(a) for a in self.args) + ")"
        return text

    def __lt__(self, other):
        return str(self) < str(other)


class ResourceAtom(BaseModel):
    model_config = ConfigDict(frozen=True)

    resource: str = Field(min_length=1)
    amount: NonNegativeInt

    def __str__(self):
        return f"res({self.resource},{self.amount})"

    def __lt__(self, other):
        return (self.resource, self.amount) < (other.resource, other.amount)


Element = Union[Literal, ResourceAtom]


class PlanRule(BaseModel):
    """ One derivation step: beliefs, subgoals, actions and resource
        amounts in the premise, a goal as the head.
    """
    model_config = ConfigDict(frozen=True)

    beliefs: FrozenSet[Literal] = frozenset()
    subgoals: FrozenSet[Literal] = frozenset()
    actions: FrozenSet[Literal] = frozenset()
    resources: FrozenSet[ResourceAtom] = frozenset()
    head: Literal

    @property
    def premises(self):
        return self.beliefs | self.subgoals | self.actions | self.resources

    def ordered_premises(self):
        """ Premise elements in canonical order: beliefs, subgoals, actions,
            then resource atoms, each group sorted.
        """
        return [*sorted(self.beliefs), *sorted(self.subgoals),
                *sorted(self.actions), *sorted(self.resources)]

    @property
    def key(self):
        premise = ", ".join(str(p) for p in self.ordered_premises())
        return f"{premise} -> {self.head}".strip()

    def __str__(self):
        return self.key


class ResourceSummary(BaseModel):
    """ The function rho: each declared resource with its available amount.
    """
    model_config = ConfigDict(frozen=True)

    availability: Dict[str, NonNegativeInt] = {}

    def available(self, name):
        if name not in self.availability:
            raise UnknownResource(name)
        return self.availability[name]

    def atoms(self):
        return frozenset(ResourceAtom(resource=name, amount=amount)
                         for name, amount in self.availability.items())

    def __contains__(self, name):
        return name in self.availability


class KnowledgeBase(BaseModel):
    """ The agent tuple. Immutable once built, so it can be shared
        read-only by any number of workers.
    """
    model_config = ConfigDict(frozen=True)

    beliefs: FrozenSet[Literal] = frozenset()
    actions: FrozenSet[Literal] = frozenset()
    goals: FrozenSet[Literal] = frozenset()
    rules: Tuple[PlanRule, ...] = ()
    pursuable: FrozenSet[Literal] = frozenset()
    preferences: Dict[Literal, Decimal] = {}
    resources: ResourceSummary = ResourceSummary()

    def availability(self, name):
        return self.resources.available(name)

    def preference(self, goal):
        if goal not in self.goals:
            raise UnknownGoal(goal)
        if goal not in self.preferences:
            raise MissingPreference(goal)
        return self.preferences[goal]

    def atoms_of(self, kind):
        literals = {
            ElementKind.BELIEF: self.beliefs,
            ElementKind.ACTION: self.actions,
            ElementKind.GOAL: self.goals,
        }[kind]
        return frozenset(lit.atom for lit in literals)

    def kind_of(self, element) -> Optional[ElementKind]:
        """ Classify a premise element. Beliefs and actions are matched by atom,
            so either polarity of a declared belief may appear in a rule.
        """
        if isinstance(element, ResourceAtom):
            return ElementKind.RESOURCE
        for kind in (ElementKind.BELIEF, ElementKind.ACTION, ElementKind.GOAL):
            if element.atom in self.atoms_of(kind):
                return kind
        return None

    def rules_for(self, goal):
        return [rule for rule in self.rules if rule.head == goal]

    def validate(self):
        """ Check the invariants of the agent tuple, raising on the first violation.
            Returns the knowledge base so it can be chained.
        """
        _check_disjoint(self)

        for goal in sorted(self.goals):
            if goal not in self.preferences:
                raise MissingPreference(goal)
            value = self.preferences[goal]
            if not Decimal(0) <= value <= Decimal(1):
                raise PreferenceOutOfRange(goal, value)

        for goal in sorted(self.pursuable):
            if goal not in self.goals:
                raise UndeclaredSymbol(str(goal))

        belief_atoms = self.atoms_of(ElementKind.BELIEF)
        action_atoms = self.atoms_of(ElementKind.ACTION)
        for rule in self.rules:
            if rule.head not in self.goals:
                raise UndeclaredSymbol(str(rule.head))
            if rule.head in rule.subgoals:
                raise HeadInOwnPremise(rule.key)
            for goal in rule.subgoals:
                if goal not in self.goals:
                    raise UndeclaredSymbol(str(goal))
            for lit in rule.beliefs:
                if lit.atom not in belief_atoms:
                    raise UndeclaredSymbol(str(lit))
            for lit in rule.actions:
                if lit.atom not in action_atoms:
                    raise UndeclaredSymbol(str(lit))
            for atom in rule.resources:
                if atom.resource not in self.resources:
                    raise UndeclaredSymbol(atom.resource)

        heads = {rule.head for rule in self.rules}
        for goal in sorted(self.goals):
            if goal not in heads:
                raise NoRuleForGoal(goal)

        return self


def _check_disjoint(kb):
    owners = {}
    for label, literals in (("beliefs", kb.beliefs), ("actions", kb.actions), ("goals", kb.goals)):
        for lit in literals:
            owners.setdefault(lit.atom, set()).add(label)
    for atom, labels in sorted(owners.items(), key=lambda item: str(item[0])):
        if len(labels) > 1:
            raise DisjointnessViolation(_atom_str(atom), sorted(labels))

    literal_names = {atom[0] for atom in owners}
    for name in sorted(kb.resources.availability):
        if name in literal_names:
            raise DisjointnessViolation(name, ["resources", "literals"])


def _atom_str(atom):
    name, args = atom
    if args:
        return f"{name}(" + ",".join(str(a) for a in args) + ")"
    return name


def availability(kb, name):
    """ Available amount of a declared resource (rho). """
    return kb.availability(name)


def preference(kb, goal):
    """ Preference value of a declared goal (PREF). """
    return kb.preference(goal)
