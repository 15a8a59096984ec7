"""Lowering from the MiniC AST to the language-independent statement form.

Every source statement becomes exactly one UnifiedStatement; control
headers (`if (...)`, `while (...)`) are their own predicate statements,
and each function gains synthetic Entry/Exit statements plus one node
for the function header and one per parameter. Statement ids are
sequential in lexical order, namespaced by a hash of the file path so
they stay stable across runs.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from quarry.errors import LoweringError
from quarry.frontend.parser import MiniCAst
from quarry.frontend.tokens import Span

# Synthetic variable standing for a function's returned value; it lets
# return statements act as definition sites for return-value data flow.
RETURN_SLOT = "$ret"

KIND_ENTRY = "entry"
KIND_EXIT = "exit"
KIND_PLAIN = "plain"
KIND_PREDICATE = "predicate"
KIND_FNDECL = "fndecl"

SEQ_BITS = 20


def file_namespace(path: str) -> int:
    digest = hashlib.sha256(path.encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "big") << SEQ_BITS


@dataclass
class UnifiedStatement:
    uid: int
    file: str
    line: int
    col: int
    code: str
    ast: dict
    callees: list[str]
    defs: list[str]
    uses: list[str]
    kind: str
    fn: str

    @property
    def span(self) -> Span:
        return Span(self.file, self.line, self.col)


@dataclass
class FunctionInfo:
    name: str
    file: str
    line: int
    fndecl_uid: int
    entry_uid: int
    exit_uid: int
    param_uids: list[int] = field(default_factory=list)
    param_names: list[str] = field(default_factory=list)
    return_uids: list[int] = field(default_factory=list)
    pointer_vars: set[str] = field(default_factory=set)
    decl_of: dict[str, int] = field(default_factory=dict)  # first declaration per name


# Structure items describe statement nesting for the CFG builder.


@dataclass
class StmtItem:
    uid: int


@dataclass
class RetItem:
    uid: int


@dataclass
class IfItem:
    pred_uid: int
    then_body: list
    else_body: list


@dataclass
class WhileItem:
    pred_uid: int
    body: list


@dataclass
class LoweredFunction:
    info: FunctionInfo
    statements: list[UnifiedStatement]
    body: list  # structure items covering the function body


@dataclass
class LoweredUnit:
    file: str
    functions: list[LoweredFunction]
    globals: list[UnifiedStatement]

    @property
    def statements(self) -> list[UnifiedStatement]:
        out = list(self.globals)
        for fn in self.functions:
            out.extend(fn.statements)
        out.sort(key=lambda s: s.uid)
        return out


def _min_ast(node: MiniCAst) -> dict:
    return {
        "kind": node.kind,
        "text": node.text,
        "children": [_min_ast(c) for c in node.children],
    }


def _collect(node: MiniCAst, defs: list[str], uses: list[str], callees: list[str]) -> None:
    """Accumulate defined/used variables and called functions."""
    kind = node.kind
    if kind == "Identifier":
        if node.text not in uses:
            uses.append(node.text)
        return
    if kind in ("IntLiteral", "StringLiteral"):
        return
    if kind == "Assign":
        lhs, rhs = node.children[0], node.children[1]
        if lhs.kind == "Identifier":
            if lhs.text not in defs:
                defs.append(lhs.text)
        else:
            # Stores through *p or p[i] read the base and index.
            _collect(lhs, defs, uses, callees)
        _collect(rhs, defs, uses, callees)
        return
    if kind == "Call":
        callee = node.children[0].text
        if callee not in callees:
            callees.append(callee)
        for arg in node.children[1:]:
            _collect(arg, defs, uses, callees)
        return
    for child in node.children:
        _collect(child, defs, uses, callees)


class _Lowerer:
    def __init__(self, file: str, source: str, namespace: int):
        self.file = file
        self.source = source
        self.namespace = namespace
        self.seq = 0

    def next_uid(self) -> int:
        uid = self.namespace | self.seq
        self.seq += 1
        if self.seq >= (1 << SEQ_BITS):
            raise LoweringError(f"{self.file}: too many statements for one file")
        return uid

    def slice(self, start: int, end: int) -> str:
        return self.source[start:end]

    def make(
        self,
        kind: str,
        node: MiniCAst | None,
        fn: str,
        code: str = "",
        ast: dict | None = None,
        defs: list[str] | None = None,
        uses: list[str] | None = None,
        callees: list[str] | None = None,
        line: int = 1,
        col: int = 1,
    ) -> UnifiedStatement:
        if node is not None:
            line, col = node.span.line, node.span.col
        return UnifiedStatement(
            uid=self.next_uid(),
            file=self.file,
            line=line,
            col=col,
            code=code,
            ast=ast if ast is not None else {"kind": kind.capitalize(), "text": "", "children": []},
            callees=callees or [],
            defs=defs or [],
            uses=uses or [],
            kind=kind,
            fn=fn,
        )

    def lower_unit(self, unit: MiniCAst) -> LoweredUnit:
        functions: list[LoweredFunction] = []
        globals_: list[UnifiedStatement] = []
        for item in unit.children:
            if item.kind == "FunctionDef":
                functions.append(self.lower_function(item))
            elif item.kind == "DeclStmt":
                globals_.append(self.lower_simple(item, fn=""))
            else:
                raise LoweringError(
                    f"{self.file}:{item.span.line}: unsupported top-level construct {item.kind}"
                )
        return LoweredUnit(self.file, functions, globals_)

    def lower_function(self, fn_node: MiniCAst) -> LoweredFunction:
        name = fn_node.text
        params = [c for c in fn_node.children if c.kind == "Param"]
        block = fn_node.children[-1]
        stmts: list[UnifiedStatement] = []

        entry = self.make(KIND_ENTRY, fn_node, name)
        stmts.append(entry)

        header = self.slice(fn_node.start, fn_node.header_end)
        fndecl = self.make(
            KIND_FNDECL,
            fn_node,
            name,
            code=header,
            ast={"kind": "FunctionDef", "text": name, "children": [_min_ast(p) for p in params]},
        )
        stmts.append(fndecl)

        info = FunctionInfo(
            name=name,
            file=self.file,
            line=fn_node.span.line,
            fndecl_uid=fndecl.uid,
            entry_uid=entry.uid,
            exit_uid=-1,
        )

        for p in params:
            pstmt = self.make(
                KIND_PLAIN,
                p,
                name,
                code=self.slice(p.start, p.end),
                ast=_min_ast(p),
                defs=[p.text],
            )
            stmts.append(pstmt)
            info.param_uids.append(pstmt.uid)
            info.param_names.append(p.text)
            info.decl_of.setdefault(p.text, pstmt.uid)
            if p.pointer:
                info.pointer_vars.add(p.text)

        body = self.lower_block(block, name, stmts, info)

        exit_stmt = self.make(
            KIND_EXIT, None, name, line=block.span.line, col=block.span.col
        )
        # Exit sits at the closing brace of the function body.
        end_line = self.source.count("\n", 0, block.end) + 1
        exit_stmt.line = end_line
        exit_stmt.col = 1
        stmts.append(exit_stmt)
        info.exit_uid = exit_stmt.uid
        return LoweredFunction(info, stmts, body)

    def lower_block(
        self,
        block: MiniCAst,
        fn: str,
        stmts: list[UnifiedStatement],
        info: FunctionInfo,
    ) -> list:
        items: list = []
        for child in block.children:
            items.extend(self.lower_statement(child, fn, stmts, info))
        return items

    def lower_statement(
        self,
        node: MiniCAst,
        fn: str,
        stmts: list[UnifiedStatement],
        info: FunctionInfo,
    ) -> list:
        kind = node.kind
        if kind == "DeclStmt":
            stmt = self.lower_simple(node, fn)
            stmts.append(stmt)
            info.decl_of.setdefault(node.text, stmt.uid)
            declarator = node.children[0]
            if node.pointer or declarator.kind == "Index":
                info.pointer_vars.add(node.text)
            return [StmtItem(stmt.uid)]
        if kind == "ExprStmt":
            stmt = self.lower_simple(node, fn)
            stmts.append(stmt)
            return [StmtItem(stmt.uid)]
        if kind == "Return":
            defs: list[str] = []
            uses: list[str] = []
            callees: list[str] = []
            for child in node.children:
                _collect(child, defs, uses, callees)
            if node.children:
                defs.append(RETURN_SLOT)
            stmt = self.make(
                KIND_PLAIN,
                node,
                fn,
                code=self.slice(node.start, node.end),
                ast=_min_ast(node),
                defs=defs,
                uses=uses,
                callees=callees,
            )
            stmts.append(stmt)
            info.return_uids.append(stmt.uid)
            return [RetItem(stmt.uid)]
        if kind in ("If", "While"):
            cond = node.children[0]
            defs, uses, callees = [], [], []
            _collect(cond, defs, uses, callees)
            pred = self.make(
                KIND_PREDICATE,
                node,
                fn,
                code=self.slice(node.start, node.header_end),
                ast={"kind": kind, "text": "", "children": [_min_ast(cond)]},
                defs=defs,
                uses=uses,
                callees=callees,
            )
            stmts.append(pred)
            if kind == "If":
                then_body = self.lower_block(node.children[1], fn, stmts, info)
                else_body = (
                    self.lower_block(node.children[2], fn, stmts, info)
                    if len(node.children) > 2
                    else []
                )
                return [IfItem(pred.uid, then_body, else_body)]
            body = self.lower_block(node.children[1], fn, stmts, info)
            return [WhileItem(pred.uid, body)]
        if kind == "Block":
            return self.lower_block(node, fn, stmts, info)
        raise LoweringError(
            f"{self.file}:{node.span.line}: unsupported statement kind {kind}"
        )

    def lower_simple(self, node: MiniCAst, fn: str) -> UnifiedStatement:
        defs: list[str] = []
        uses: list[str] = []
        callees: list[str] = []
        if node.kind == "DeclStmt":
            defs.append(node.text)
            for child in node.children[1:]:
                _collect(child, defs, uses, callees)
        else:
            for child in node.children:
                _collect(child, defs, uses, callees)
        return self.make(
            KIND_PLAIN,
            node,
            fn,
            code=self.slice(node.start, node.end),
            ast=_min_ast(node),
            defs=defs,
            uses=uses,
            callees=callees,
        )


def lower(unit: MiniCAst, source: str, file: str, namespace: int | None = None) -> LoweredUnit:
    """Lower a parsed translation unit into unified statements.

    `namespace` overrides the uid namespace (defaults to a hash of the
    file path).
    """
    ns = file_namespace(file) if namespace is None else namespace
    return _Lowerer(file, source, ns).lower_unit(unit)
