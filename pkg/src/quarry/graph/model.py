"""Graph data model: statement nodes, flow edges, and the code graph.

The graph is compressed to statement level: one vertex per source
statement, with the statement's minimal AST carried as a node attribute
rather than as sub-vertices. Edges are labeled CFG, DFG, or CG; DFG
edges additionally name the variable and its definition site.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from quarry.errors import UnknownNodeError
from quarry.frontend.lowering import UnifiedStatement

CFG = "CFG"
DFG = "DFG"
CG = "CG"
EDGE_KINDS = (CFG, DFG, CG)


@dataclass(frozen=True)
class FlowEdge:
    src: int
    dst: int
    kind: str
    var: str | None = None  # DFG only: the flowing variable
    def_site: int | None = None  # DFG only: uid of the definition
    branch: bool | None = None  # CFG out of a predicate only

    def sort_key(self):
        return (
            self.src,
            self.dst,
            self.kind,
            self.var or "",
            self.def_site if self.def_site is not None else -1,
            -1 if self.branch is None else int(self.branch),
        )


@dataclass
class StatementNode:
    """One graph vertex; mirrors the persisted node record."""

    uid: int
    file: str
    line: int
    kind: str  # entry | exit | plain | predicate | fndecl
    code: str
    ast: dict
    callees: list[str]
    defs: list[str]
    uses: list[str]
    fn: str

    @classmethod
    def from_statement(cls, stmt: UnifiedStatement) -> "StatementNode":
        return cls(
            uid=stmt.uid,
            file=stmt.file,
            line=stmt.line,
            kind=stmt.kind,
            code=stmt.code,
            ast=stmt.ast,
            callees=list(stmt.callees),
            defs=list(stmt.defs),
            uses=list(stmt.uses),
            fn=stmt.fn,
        )

    def is_declaration_of(self, var: str) -> bool:
        """True when this statement declares `var` (DeclStmt or Param)."""
        return self.ast.get("kind") in ("DeclStmt", "Param") and var in self.defs


def copy_source(node: StatementNode, var: str) -> str | None:
    """Name of `w` when the statement is a pure copy `var = w` (or a
    declaration `... var = w;`), else None."""
    ast = node.ast
    kind = ast.get("kind")
    if kind == "DeclStmt" and node.defs and node.defs[0] == var:
        children = ast.get("children", [])
        if len(children) == 2 and children[1].get("kind") == "Identifier":
            return children[1]["text"]
        return None
    if kind == "ExprStmt":
        children = ast.get("children", [])
        if len(children) == 1 and children[0].get("kind") == "Assign":
            assign = children[0]
            lhs, rhs = assign["children"]
            if (
                lhs.get("kind") == "Identifier"
                and lhs.get("text") == var
                and rhs.get("kind") == "Identifier"
            ):
                return rhs["text"]
    return None


def find_calls(ast: dict, callee: str) -> list[dict]:
    """All Call subtrees invoking `callee`, in pre-order."""
    found: list[dict] = []
    if ast.get("kind") == "Call" and ast.get("text") == callee:
        found.append(ast)
    for child in ast.get("children", []):
        found.extend(find_calls(child, callee))
    return found


def idents_in(ast: dict) -> list[str]:
    """Identifiers read inside an expression subtree (callee names skipped)."""
    out: list[str] = []

    def walk(node: dict) -> None:
        if node.get("kind") == "Identifier":
            if node["text"] not in out:
                out.append(node["text"])
            return
        children = node.get("children", [])
        if node.get("kind") == "Call":
            children = children[1:]
        for child in children:
            walk(child)

    walk(ast)
    return out


@dataclass
class AliasSet:
    representative: str
    members: frozenset[str]
    scope: str


@dataclass
class CodeGraph:
    nodes: dict[int, StatementNode] = field(default_factory=dict)
    version: str = ""
    stats: dict = field(default_factory=dict)
    _out: dict[int, dict[str, list[FlowEdge]]] = field(default_factory=dict, repr=False)
    _in: dict[int, dict[str, list[FlowEdge]]] = field(default_factory=dict, repr=False)
    callee_index: dict[str, list[int]] = field(default_factory=dict)
    file_index: dict[str, list[int]] = field(default_factory=dict)
    fn_index: dict[str, list[int]] = field(default_factory=dict)

    # -- construction ---------------------------------------------------

    def add_node(self, node: StatementNode) -> None:
        self.nodes[node.uid] = node

    def add_edge(self, edge: FlowEdge) -> None:
        self._out.setdefault(edge.src, {}).setdefault(edge.kind, []).append(edge)
        self._in.setdefault(edge.dst, {}).setdefault(edge.kind, []).append(edge)

    def freeze(self) -> None:
        """Sort adjacency and rebuild the secondary indices."""
        seen: set[tuple] = set()
        for adj in (self._out, self._in):
            for per_kind in adj.values():
                for kind, edges in per_kind.items():
                    unique = {e.sort_key(): e for e in edges}
                    per_kind[kind] = [unique[k] for k in sorted(unique)]
        self.callee_index = {}
        self.file_index = {}
        self.fn_index = {}
        for uid in sorted(self.nodes):
            node = self.nodes[uid]
            for callee in node.callees:
                self.callee_index.setdefault(callee, []).append(uid)
            self.file_index.setdefault(node.file, []).append(uid)
            self.fn_index.setdefault(node.fn, []).append(uid)
        self.nodes = {uid: self.nodes[uid] for uid in sorted(self.nodes)}
        del seen

    # -- queries ----------------------------------------------------------

    def require(self, uid: int) -> StatementNode:
        try:
            return self.nodes[uid]
        except KeyError:
            raise UnknownNodeError(f"unknown node {uid}") from None

    def out_edges(self, uid: int, kind: str | None = None) -> list[FlowEdge]:
        per_kind = self._out.get(uid, {})
        if kind is not None:
            return per_kind.get(kind, [])
        return [e for k in EDGE_KINDS for e in per_kind.get(k, [])]

    def in_edges(self, uid: int, kind: str | None = None) -> list[FlowEdge]:
        per_kind = self._in.get(uid, {})
        if kind is not None:
            return per_kind.get(kind, [])
        return [e for k in EDGE_KINDS for e in per_kind.get(k, [])]

    def successors(self, uid: int, kind: str) -> list[int]:
        self.require(uid)
        return sorted({e.dst for e in self.out_edges(uid, kind)})

    def predecessors(self, uid: int, kind: str) -> list[int]:
        self.require(uid)
        return sorted({e.src for e in self.in_edges(uid, kind)})

    def edges(self) -> list[FlowEdge]:
        out: list[FlowEdge] = []
        for uid in sorted(self._out):
            for kind in EDGE_KINDS:
                out.extend(self._out[uid].get(kind, []))
        return out

    def edge_count(self) -> int:
        return sum(len(self._out[uid].get(k, [])) for uid in self._out for k in EDGE_KINDS)

    def fn_nodes(self, fn: str) -> list[int]:
        return self.fn_index.get(fn, [])

    def fn_entry(self, fn: str) -> int | None:
        for uid in self.fn_nodes(fn):
            if self.nodes[uid].kind == "entry":
                return uid
        return None

    def fn_exit(self, fn: str) -> int | None:
        for uid in self.fn_nodes(fn):
            if self.nodes[uid].kind == "exit":
                return uid
        return None


def graph_equal(a: CodeGraph, b: CodeGraph) -> bool:
    if a.nodes != b.nodes:
        return False
    if set(e.sort_key() for e in a.edges()) != set(e.sort_key() for e in b.edges()):
        return False
    return (
        a.version == b.version
        and a.callee_index == b.callee_index
        and a.file_index == b.file_index
    )
