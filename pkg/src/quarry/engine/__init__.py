from quarry.engine.taint import FlowWitness, Reachability, taint_reachability
from quarry.engine.resolve import DeclarationResolver, resolve_declaration
from quarry.engine.predicates import eval_node_predicate
from quarry.engine.execute import execute

__all__ = [
    "FlowWitness",
    "Reachability",
    "taint_reachability",
    "DeclarationResolver",
    "resolve_declaration",
    "eval_node_predicate",
    "execute",
]
