""" Exception hierarchy for knowledge-base loading and the reasoning pipeline.

    Library code raises these; only the CLI turns them into messages and exit codes.
"""


class GoalArbiterError(Exception):
    exit_code = 70


class KnowledgeBaseError(GoalArbiterError):
    exit_code = 2


class KBSyntaxError(KnowledgeBaseError):

    def __init__(self, line, col, expected, found=None):
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found
        message = f"line {line}, col {col}: expected {expected}"
        if found is not None:
            message += f", found {found!r}"
        super().__init__(message)


class UndeclaredSymbol(KnowledgeBaseError):

    def __init__(self, name):
        self.name = name
        super().__init__(f"Undeclared symbol: {name}")


class DisjointnessViolation(KnowledgeBaseError):

    def __init__(self, name, sets):
        self.name = name
        self.sets = tuple(sets)
        super().__init__(f"{name} is declared in more than one of: {', '.join(self.sets)}")


class DuplicateResourceDeclaration(KnowledgeBaseError):

    def __init__(self, name):
        self.name = name
        super().__init__(f"Resource declared more than once: {name}")


class DuplicateGoalDeclaration(KnowledgeBaseError):

    def __init__(self, goal):
        self.goal = goal
        super().__init__(f"Goal declared more than once: {goal}")


class PreferenceOutOfRange(KnowledgeBaseError):

    def __init__(self, goal, value):
        self.goal = goal
        self.value = value
        super().__init__(f"Preference of {goal} must lie in [0,1], got {value}")


class HeadInOwnPremise(KnowledgeBaseError):

    def __init__(self, rule):
        self.rule = rule
        super().__init__(f"Rule head occurs in its own premise: {rule}")


class NoRuleForGoal(KnowledgeBaseError):

    def __init__(self, goal):
        self.goal = goal
        super().__init__(f"No plan rule has {goal} as its head")


class CyclicGoalDependency(KnowledgeBaseError):

    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        path = " -> ".join(str(g) for g in self.cycle)
        super().__init__(f"Cyclic goal dependency: {path}")


class LookupFailure(GoalArbiterError):
    exit_code = 3


class UnknownResource(LookupFailure):

    def __init__(self, name):
        self.name = name
        super().__init__(f"Unknown resource: {name}")


class UnknownGoal(LookupFailure):

    def __init__(self, goal):
        self.goal = goal
        super().__init__(f"Unknown goal: {goal}")


class MissingPreference(LookupFailure):

    def __init__(self, goal):
        self.goal = goal
        super().__init__(f"No preference value for goal: {goal}")


class ComputationError(GoalArbiterError):
    exit_code = 4


class SizeBoundExceeded(ComputationError):

    def __init__(self, n, bound):
        self.n = n
        self.bound = bound
        super().__init__(
            f"Framework has {n} nodes, more than the enumeration bound of {bound} "
            f"(raise it with --bound or GOAL_ARBITER_BOUND)")


class MixedStores(ComputationError):

    def __init__(self):
        super().__init__("Attack relations were computed over different argument stores")


class ReferenceTableError(GoalArbiterError):
    exit_code = 2

    def __init__(self, path, reason):
        self.path = path
        self.reason = reason
        super().__init__(f"Invalid reference table {path}: {reason}")


class UnresolvedReference(LookupFailure):

    def __init__(self, name, matches):
        self.name = name
        self.matches = tuple(matches)
        found = "no argument" if not self.matches else f"{len(self.matches)} arguments"
        super().__init__(f"Reference name {name} matches {found}")
