from .arguments import ArgumentStore, InstrumentalArgument, enumerate_arguments
from .attacks import AttackKind, AttackRelation, compute_relations
from .frameworks import ArgFramework, GoalFramework, build_af, goal_attacks, successful_filter
from .kb import KnowledgeBase, Literal, PlanRule, ResourceAtom
from .parser import load_kb, parse_kb
from .semantics import SelectionPolicy, select
from .settings import Settings

__all__ = [
    'ArgFramework',
    'ArgumentStore',
    'AttackKind',
    'AttackRelation',
    'GoalFramework',
    'InstrumentalArgument',
    'KnowledgeBase',
    'Literal',
    'PlanRule',
    'ResourceAtom',
    'SelectionPolicy',
    'Settings',
    'build_af',
    'compute_relations',
    'enumerate_arguments',
    'goal_attacks',
    'load_kb',
    'parse_kb',
    'select',
    'successful_filter',
]
