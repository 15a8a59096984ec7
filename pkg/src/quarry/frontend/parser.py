"""Recursive-descent parser for MiniC.

The grammar covers functions over int/char values and pointers,
declarations (with initializers, pointers, and fixed-size arrays),
assignment, binary/unary expressions, calls, if/else, while, and
return. On a syntax error the parser skips to the next ';' or '}' and
keeps going, so one run reports every diagnostic in the file.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from quarry.errors import Diagnostic, ParseError
from quarry.frontend.tokens import Span, Token, tokenize

TYPE_KEYWORDS = ("int", "char", "void")

LEAF_KINDS = frozenset({"Identifier", "IntLiteral", "StringLiteral"})


@dataclass
class MiniCAst:
    kind: str
    children: list["MiniCAst"] = field(default_factory=list)
    text: str = ""
    span: Span = Span("<input>", 1, 1)
    start: int = 0  # byte offsets of the covered source slice
    end: int = 0
    # Set on FunctionDef/If/While: end offset of the header (through the
    # closing paren), used to slice predicate/header statement text.
    header_end: int = -1
    # Set on DeclStmt: declarator carried one or more '*'.
    pointer: bool = False


class _Bail(Exception):
    def __init__(self, diagnostic: Diagnostic):
        self.diagnostic = diagnostic


class _Parser:
    def __init__(self, tokens: list[Token], file: str):
        self.tokens = tokens
        self.file = file
        self.pos = 0
        self.diagnostics: list[Diagnostic] = []

    # -- token helpers -------------------------------------------------

    def peek(self, ahead: int = 0) -> Token | None:
        i = self.pos + ahead
        return self.tokens[i] if i < len(self.tokens) else None

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.text == text

    def at_kind(self, kind: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == kind

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _eof_pos(self) -> tuple[int, int]:
        if self.tokens:
            last = self.tokens[-1]
            return last.line, last.col + len(last.text)
        return 1, 1

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok is None:
            line, col = self._eof_pos()
            raise _Bail(Diagnostic(f"expected {text!r}, found end of file", self.file, line, col))
        if tok.text != text:
            raise _Bail(
                Diagnostic(f"expected {text!r}, found {tok.text!r}", self.file, tok.line, tok.col)
            )
        return self.advance()

    def expect_ident(self) -> Token:
        tok = self.peek()
        if tok is None:
            line, col = self._eof_pos()
            raise _Bail(Diagnostic("expected identifier, found end of file", self.file, line, col))
        if tok.kind != "ident":
            raise _Bail(
                Diagnostic(
                    f"expected identifier, found {tok.text!r}", self.file, tok.line, tok.col
                )
            )
        return self.advance()

    def node(
        self,
        kind: str,
        start_tok: Token,
        end_tok: Token,
        children: list[MiniCAst] | None = None,
        text: str = "",
    ) -> MiniCAst:
        return MiniCAst(
            kind,
            children or [],
            text,
            Span(self.file, start_tok.line, start_tok.col),
            start_tok.offset,
            end_tok.end,
        )

    # -- error recovery ------------------------------------------------

    def recover(self) -> None:
        """Skip forward to just past the next ';' or up to a '}'."""
        while self.pos < len(self.tokens):
            text = self.tokens[self.pos].text
            if text == ";":
                self.pos += 1
                return
            if text == "}":
                return
            self.pos += 1

    # -- grammar -------------------------------------------------------

    def parse_unit(self) -> MiniCAst:
        items: list[MiniCAst] = []
        while self.pos < len(self.tokens):
            try:
                items.extend(self.parse_external())
            except _Bail as bail:
                self.diagnostics.append(bail.diagnostic)
                before = self.pos
                self.recover()
                if self.at("}"):
                    self.advance()
                if self.pos == before:
                    self.pos += 1
        unit = MiniCAst("TranslationUnit", items, "", Span(self.file, 1, 1))
        if self.tokens:
            unit.start = self.tokens[0].offset
            unit.end = self.tokens[-1].end
        return unit

    def parse_external(self) -> list[MiniCAst]:
        tok = self.peek()
        if tok is None:
            return []
        if tok.text not in TYPE_KEYWORDS:
            raise _Bail(
                Diagnostic(
                    f"expected type keyword, found {tok.text!r}", self.file, tok.line, tok.col
                )
            )
        # FunctionDef when "type '*'* ident '('" is ahead; else a global.
        ahead = 1
        while (t := self.peek(ahead)) is not None and t.text == "*":
            ahead += 1
        name = self.peek(ahead)
        after = self.peek(ahead + 1)
        if name is not None and name.kind == "ident" and after is not None and after.text == "(":
            return [self.parse_function()]
        return self.parse_declaration()

    def parse_function(self) -> MiniCAst:
        start = self.advance()  # type keyword
        while self.at("*"):
            self.advance()
        name = self.expect_ident()
        self.expect("(")
        params: list[MiniCAst] = []
        nxt = self.peek(1)
        if self.at("void") and nxt is not None and nxt.text == ")":
            self.advance()
        elif not self.at(")"):
            params.append(self.parse_param())
            while self.at(","):
                self.advance()
                params.append(self.parse_param())
        close = self.expect(")")
        body = self.parse_block()
        fn = self.node("FunctionDef", start, self.tokens[self.pos - 1], params + [body], name.text)
        fn.header_end = close.end
        return fn

    def parse_param(self) -> MiniCAst:
        tok = self.peek()
        if tok is None or tok.text not in TYPE_KEYWORDS:
            found = tok.text if tok else "end of file"
            line, col = (tok.line, tok.col) if tok else self._eof_pos()
            raise _Bail(
                Diagnostic(f"expected parameter type, found {found!r}", self.file, line, col)
            )
        start = self.advance()
        stars = 0
        while self.at("*"):
            self.advance()
            stars += 1
        name = self.expect_ident()
        ident = self.node("Identifier", name, name, text=name.text)
        param = self.node("Param", start, name, [ident], name.text)
        param.pointer = stars > 0
        return param

    def parse_block(self) -> MiniCAst:
        open_tok = self.expect("{")
        stmts: list[MiniCAst] = []
        while not self.at("}"):
            if self.pos >= len(self.tokens):
                raise _Bail(
                    Diagnostic("expected '}', found end of file", self.file, open_tok.line, open_tok.col)
                )
            try:
                stmts.extend(self.parse_statement())
            except _Bail as bail:
                self.diagnostics.append(bail.diagnostic)
                self.recover()
        close = self.expect("}")
        return self.node("Block", open_tok, close, stmts)

    def parse_statement(self) -> list[MiniCAst]:
        tok = self.peek()
        assert tok is not None
        if tok.text in TYPE_KEYWORDS:
            return self.parse_declaration()
        if tok.text == "if":
            return [self.parse_if()]
        if tok.text == "while":
            return [self.parse_while()]
        if tok.text == "return":
            return [self.parse_return()]
        if tok.text == "{":
            return [self.parse_block()]
        if tok.text == ";":
            semi = self.advance()  # empty statement
            return [self.node("ExprStmt", semi, semi)]
        start_tok = tok
        expr = self.parse_expr()
        semi = self.expect(";")
        return [self.node("ExprStmt", start_tok, semi, [expr])]

    def parse_declaration(self) -> list[MiniCAst]:
        """One DeclStmt node per declarator; `int a, b;` yields two."""
        type_tok = self.advance()
        decls: list[MiniCAst] = []
        first = True
        while True:
            start_tok = type_tok if first else self.tokens[self.pos]
            stars = 0
            while self.at("*"):
                self.advance()
                stars += 1
            name = self.expect_ident()
            declarator: MiniCAst = self.node("Identifier", name, name, text=name.text)
            if self.at("["):
                self.advance()
                size = None
                if self.at_kind("number"):
                    num = self.advance()
                    size = self.node("IntLiteral", num, num, text=num.text)
                close = self.expect("]")
                declarator = self.node("Index", name, close, [declarator] + ([size] if size else []))
            children = [declarator]
            if self.at("="):
                self.advance()
                children.append(self.parse_assignment())
            if self.at(";"):
                end_tok = self.advance()
                decl = self.node("DeclStmt", start_tok, end_tok, children, name.text)
                decl.pointer = stars > 0
                decls.append(decl)
                return decls
            end_tok = self.tokens[self.pos - 1]
            self.expect(",")
            decl = self.node("DeclStmt", start_tok, end_tok, children, name.text)
            decl.pointer = stars > 0
            decls.append(decl)
            first = False

    def parse_if(self) -> MiniCAst:
        start = self.advance()
        self.expect("(")
        cond = self.parse_expr()
        close = self.expect(")")
        then = self.parse_statement_as_block()
        children = [cond, then]
        if self.at("else"):
            self.advance()
            children.append(self.parse_statement_as_block())
        node = self.node("If", start, self.tokens[self.pos - 1], children)
        node.header_end = close.end
        return node

    def parse_while(self) -> MiniCAst:
        start = self.advance()
        self.expect("(")
        cond = self.parse_expr()
        close = self.expect(")")
        body = self.parse_statement_as_block()
        node = self.node("While", start, self.tokens[self.pos - 1], [cond, body])
        node.header_end = close.end
        return node

    def parse_statement_as_block(self) -> MiniCAst:
        """Branch bodies normalize to a Block, even single statements."""
        if self.at("{"):
            return self.parse_block()
        start = self.peek()
        assert start is not None
        stmts = self.parse_statement()
        return self.node("Block", start, self.tokens[self.pos - 1], stmts)

    def parse_return(self) -> MiniCAst:
        start = self.advance()
        children = []
        if not self.at(";"):
            children.append(self.parse_expr())
        semi = self.expect(";")
        return self.node("Return", start, semi, children)

    # -- expressions ----------------------------------------------------

    def parse_expr(self) -> MiniCAst:
        return self.parse_assignment()

    def parse_assignment(self) -> MiniCAst:
        left = self.parse_binary(0)
        if self.at("="):
            eq = self.advance()
            if left.kind not in ("Identifier", "Deref", "Index"):
                raise _Bail(Diagnostic("invalid assignment target", self.file, eq.line, eq.col))
            right = self.parse_assignment()
            return MiniCAst("Assign", [left, right], "=", left.span, left.start, right.end)
        return left

    _PRECEDENCE = (
        ("||",),
        ("&&",),
        ("==", "!="),
        ("<", ">", "<=", ">="),
        ("+", "-"),
        ("*", "/", "%"),
    )

    def parse_binary(self, level: int) -> MiniCAst:
        if level >= len(self._PRECEDENCE):
            return self.parse_unary()
        ops = self._PRECEDENCE[level]
        left = self.parse_binary(level + 1)
        while (tok := self.peek()) is not None and tok.text in ops:
            op = self.advance()
            right = self.parse_binary(level + 1)
            left = MiniCAst("BinaryOp", [left, right], op.text, left.span, left.start, right.end)
        return left

    def parse_unary(self) -> MiniCAst:
        tok = self.peek()
        if tok is not None and tok.text in ("*", "&", "-", "!"):
            op = self.advance()
            operand = self.parse_unary()
            kind = {"*": "Deref", "&": "AddressOf"}.get(op.text, "UnaryOp")
            text = op.text if kind == "UnaryOp" else ""
            return MiniCAst(
                kind, [operand], text, Span(self.file, op.line, op.col), op.offset, operand.end
            )
        return self.parse_postfix()

    def parse_postfix(self) -> MiniCAst:
        node = self.parse_primary()
        while True:
            if self.at("("):
                if node.kind != "Identifier":
                    tok = self.peek()
                    assert tok is not None
                    raise _Bail(
                        Diagnostic(
                            "call target must be a function name", self.file, tok.line, tok.col
                        )
                    )
                self.advance()
                args: list[MiniCAst] = []
                if not self.at(")"):
                    args.append(self.parse_assignment())
                    while self.at(","):
                        self.advance()
                        args.append(self.parse_assignment())
                close = self.expect(")")
                node = MiniCAst("Call", [node] + args, node.text, node.span, node.start, close.end)
            elif self.at("["):
                self.advance()
                index = self.parse_expr()
                close = self.expect("]")
                node = MiniCAst("Index", [node, index], "", node.span, node.start, close.end)
            else:
                return node

    def parse_primary(self) -> MiniCAst:
        tok = self.peek()
        if tok is None:
            line, col = self._eof_pos()
            raise _Bail(Diagnostic("expected expression, found end of file", self.file, line, col))
        if tok.kind == "ident":
            self.advance()
            return self.node("Identifier", tok, tok, text=tok.text)
        if tok.kind == "number":
            self.advance()
            return self.node("IntLiteral", tok, tok, text=tok.text)
        if tok.kind == "string":
            self.advance()
            return self.node("StringLiteral", tok, tok, text=tok.text)
        if tok.text == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        raise _Bail(
            Diagnostic(f"expected expression, found {tok.text!r}", self.file, tok.line, tok.col)
        )


def parse(tokens: list[Token], file: str = "<input>") -> MiniCAst:
    """Parse a token stream into a TranslationUnit.

    Raises ParseError carrying all recovered diagnostics when the input
    is malformed.
    """
    parser = _Parser(tokens, file)
    unit = parser.parse_unit()
    if parser.diagnostics:
        raise ParseError(parser.diagnostics)
    return unit


def parse_source(source: str, file: str = "<input>") -> MiniCAst:
    return parse(tokenize(source, file), file)
