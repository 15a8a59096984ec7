"""Parser for .vql query files.

    query  := from <decl> {, <decl>}
              [where [not] <pred> {and|or [not] <pred>}]
              select <expr> {, <expr>}
    decl   := <Type> name | <Ctor>(args) name
    pred   := name.method(args){.method(args)}
    expr   := name | string

`not` binds tighter than `and`, which binds tighter than `or`; both
connectives associate left. `//` starts a line comment. A constructor
declaration desugars to a plain typed binding plus a where filter.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from quarry.errors import QuerySyntaxError, UnboundNameError, UnknownTypeError
from quarry.dsl.ast import (
    AndExpr,
    BindingRef,
    CTOR_BASE_TYPE,
    Decl,
    MethodCall,
    NotExpr,
    OrExpr,
    PredLeaf,
    Predicate,
    QueryAst,
    SelectLiteral,
    SelectName,
    TYPE_NAMES,
)

KEYWORDS = ("from", "where", "select", "and", "or", "not")


@dataclass(frozen=True)
class _Tok:
    kind: str  # ident | string | number | punct
    text: str
    line: int
    col: int


def _lex(text: str) -> list[_Tok]:
    tokens: list[_Tok] = []
    i = 0
    line = 1
    line_start = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            line_start = i
            continue
        if ch in " \t\r":
            i += 1
            continue
        if text.startswith("//", i):
            j = text.find("\n", i)
            i = n if j < 0 else j
            continue
        col = i - line_start + 1
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Tok("ident", text[i:j], line, col))
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Tok("number", text[i:j], line, col))
            i = j
            continue
        if ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                j += 2 if text[j] == "\\" else 1
            if j >= n:
                raise QuerySyntaxError("unterminated string", line, col)
            tokens.append(_Tok("string", text[i : j + 1], line, col))
            i = j + 1
            continue
        if ch in ".,()":
            tokens.append(_Tok("punct", ch, line, col))
            i += 1
            continue
        raise QuerySyntaxError(f"unexpected character {ch!r}", line, col)
    return tokens


class _QueryParser:
    def __init__(self, tokens: list[_Tok]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Tok | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.text == text

    def advance(self) -> _Tok:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str) -> QuerySyntaxError:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            return QuerySyntaxError(
                message + ", found end of query",
                last.line if last else 1,
                last.col if last else 1,
            )
        return QuerySyntaxError(f"{message}, found {tok.text!r}", tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        return self.advance()

    def expect_name(self) -> str:
        tok = self.peek()
        if tok is None or tok.kind != "ident" or tok.text in KEYWORDS:
            raise self.error("expected a name")
        return self.advance().text

    # -- grammar ---------------------------------------------------------

    def parse(self) -> QueryAst:
        self.expect("from")
        decls: list[Decl] = []
        sugar_filters: list[PredLeaf] = []
        decls_names: set[str] = set()
        while True:
            decl, extra = self.parse_decl()
            if decl.name in decls_names:
                raise self.error(f"binding {decl.name!r} declared twice")
            decls_names.add(decl.name)
            decls.append(decl)
            if extra is not None:
                sugar_filters.append(extra)
            if self.at(","):
                self.advance()
                continue
            break
        where = None
        if self.at("where"):
            self.advance()
            where = self.parse_or()
        for leaf in sugar_filters:
            where = leaf if where is None else AndExpr(where, leaf)
        self.expect("select")
        selects: list = [self.parse_select_item()]
        while self.at(","):
            self.advance()
            selects.append(self.parse_select_item())
        if self.peek() is not None:
            raise self.error("expected end of query")
        ast = QueryAst(tuple(decls), where, tuple(selects))
        _check_bound_names(ast)
        return ast

    def parse_decl(self) -> tuple[Decl, PredLeaf | None]:
        tok = self.peek()
        if tok is None or tok.kind != "ident":
            raise self.error("expected a binding type")
        head = self.advance().text
        if head in TYPE_NAMES:
            return Decl(head, self.expect_name()), None
        if self.at("("):
            if head not in CTOR_BASE_TYPE:
                raise UnknownTypeError(f"unknown predicate type {head!r}")
            args = self.parse_args()
            name = self.expect_name()
            # `Ctor(args) x` is sugar for `Type x where x.Ctor(args)`.
            predicate = Predicate(name, (MethodCall(head, args),))
            return Decl(CTOR_BASE_TYPE[head], name), PredLeaf(predicate)
        raise UnknownTypeError(f"unknown binding type {head!r}")

    def parse_or(self):
        left = self.parse_and()
        while self.at("or"):
            self.advance()
            left = OrExpr(left, self.parse_and())
        return left

    def parse_and(self):
        left = self.parse_not()
        while self.at("and"):
            self.advance()
            left = AndExpr(left, self.parse_not())
        return left

    def parse_not(self):
        if self.at("not"):
            self.advance()
            return NotExpr(PredLeaf(self.parse_predicate()))
        return PredLeaf(self.parse_predicate())

    def parse_predicate(self) -> Predicate:
        receiver = self.expect_name()
        chain: list[MethodCall] = []
        while self.at("."):
            self.advance()
            method = self.expect_name()
            args = self.parse_args()
            chain.append(MethodCall(method, args))
        if not chain:
            raise self.error("expected '.' after predicate receiver")
        return Predicate(receiver, tuple(chain))

    def parse_args(self) -> tuple:
        self.expect("(")
        args: list = []
        while not self.at(")"):
            tok = self.peek()
            if tok is None:
                raise self.error("expected ')'")
            if tok.kind == "string":
                args.append(json.loads(self.advance().text))
            elif tok.kind == "number":
                args.append(int(self.advance().text))
            elif tok.kind == "ident" and tok.text not in KEYWORDS:
                args.append(BindingRef(self.advance().text))
            else:
                raise self.error("expected an argument")
            if self.at(","):
                self.advance()
                if self.at(")"):
                    raise self.error("expected an argument")
        self.expect(")")
        return tuple(args)

    def parse_select_item(self):
        tok = self.peek()
        if tok is None:
            raise self.error("expected a select expression")
        if tok.kind == "string":
            return SelectLiteral(json.loads(self.advance().text))
        return SelectName(self.expect_name())


def _iter_predicates(expr):
    if isinstance(expr, PredLeaf):
        yield expr.predicate
    elif isinstance(expr, NotExpr):
        yield from _iter_predicates(expr.operand)
    elif isinstance(expr, (AndExpr, OrExpr)):
        yield from _iter_predicates(expr.left)
        yield from _iter_predicates(expr.right)


def _check_bound_names(ast: QueryAst) -> None:
    declared = ast.declared_names()
    if ast.where is not None:
        for predicate in _iter_predicates(ast.where):
            if predicate.receiver not in declared:
                raise UnboundNameError(f"unbound name {predicate.receiver!r} in where clause")
            for call in predicate.chain:
                for arg in call.args:
                    if isinstance(arg, BindingRef) and arg.name not in declared:
                        raise UnboundNameError(f"unbound name {arg.name!r} in where clause")
    for item in ast.selects:
        if isinstance(item, SelectName) and item.name not in declared:
            raise UnboundNameError(f"unbound name {item.name!r} in select clause")


def parse_query(text: str) -> QueryAst:
    tokens = _lex(text)
    if not tokens:
        raise QuerySyntaxError("empty query", 1, 1)
    return _QueryParser(tokens).parse()
