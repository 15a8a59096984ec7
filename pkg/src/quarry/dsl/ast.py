"""Query language syntax tree.

A query declares typed bindings, filters them with predicate chains
combined by not/and/or (tightest first, left associative), and selects
bindings or string literals. All nodes are frozen so structural
equality is plain ==.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

TYPE_NAMES = ("Call", "Statement", "Expression", "TaintFlow")

# Predicate constructors usable in declaration position, e.g.
# `ContainsFunctionCall("malloc") m`; each maps to a base binding type.
CTOR_BASE_TYPE = {
    "ContainsFunctionCall": "Call",
    "FunctionContains": "Call",
    "FunctionMatches": "Call",
    "CodeEquals": "Statement",
    "CodeContains": "Statement",
    "CodeMatches": "Statement",
    "InFile": "Statement",
    "LineBetween": "Statement",
}


@dataclass(frozen=True)
class BindingRef:
    name: str


Arg = Union[str, int, BindingRef]


@dataclass(frozen=True)
class MethodCall:
    name: str
    args: tuple[Arg, ...] = ()


@dataclass(frozen=True)
class Predicate:
    receiver: str
    chain: tuple[MethodCall, ...]


@dataclass(frozen=True)
class PredLeaf:
    predicate: Predicate


@dataclass(frozen=True)
class NotExpr:
    operand: "BoolExpr"


@dataclass(frozen=True)
class AndExpr:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class OrExpr:
    left: "BoolExpr"
    right: "BoolExpr"


BoolExpr = Union[PredLeaf, NotExpr, AndExpr, OrExpr]


@dataclass(frozen=True)
class Decl:
    type_name: str
    name: str


@dataclass(frozen=True)
class SelectName:
    name: str


@dataclass(frozen=True)
class SelectLiteral:
    value: str


SelectItem = Union[SelectName, SelectLiteral]


@dataclass(frozen=True)
class QueryAst:
    decls: tuple[Decl, ...]
    where: BoolExpr | None
    selects: tuple[SelectItem, ...]

    def declared_names(self) -> set[str]:
        return {d.name for d in self.decls}
