"""Canonical text form of a QueryAst; parse(format_query(ast)) == ast."""

from __future__ import annotations

import json

from quarry.dsl.ast import (
    AndExpr,
    BindingRef,
    NotExpr,
    OrExpr,
    PredLeaf,
    Predicate,
    QueryAst,
    SelectName,
)


def _format_arg(arg) -> str:
    if isinstance(arg, BindingRef):
        return arg.name
    if isinstance(arg, str):
        return json.dumps(arg)
    return str(arg)


def _format_predicate(pred: Predicate) -> str:
    calls = "".join(
        f".{c.name}({', '.join(_format_arg(a) for a in c.args)})" for c in pred.chain
    )
    return pred.receiver + calls


def _format_bool(expr) -> str:
    # The grammar has no grouping, so only trees the parser itself can
    # produce (left-nested or/and over [not] leaves) are printable.
    if isinstance(expr, PredLeaf):
        return _format_predicate(expr.predicate)
    if isinstance(expr, NotExpr):
        return "not " + _format_bool(expr.operand)
    if isinstance(expr, AndExpr):
        return _format_bool(expr.left) + "\n  and " + _format_bool(expr.right)
    if isinstance(expr, OrExpr):
        return _format_bool(expr.left) + "\n  or " + _format_bool(expr.right)
    raise TypeError(f"not a boolean expression: {expr!r}")


def format_query(ast: QueryAst) -> str:
    decls = ", ".join(f"{d.type_name} {d.name}" for d in ast.decls)
    lines = [f"from {decls}"]
    if ast.where is not None:
        lines.append("where")
        lines.append("  " + _format_bool(ast.where))
    selects = ", ".join(
        item.name if isinstance(item, SelectName) else json.dumps(item.value)
        for item in ast.selects
    )
    lines.append(f"select {selects}")
    return "\n".join(lines) + "\n"
