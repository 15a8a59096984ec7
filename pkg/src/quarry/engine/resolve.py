"""Backward declaration resolution.

Every variable occurrence can be traced to the declaration of the
storage it refers to: data-flow edges are followed in reverse, plain
copy assignments (`q = p`) are chased into the copied variable, and
declaration-to-declaration alias links collapse a pointer alias set
onto its representative. Two occurrences operate on the same storage
exactly when they resolve to the same declaration uid.
"""

from __future__ import annotations

from quarry.errors import NoDeclarationError
from quarry.frontend.lowering import RETURN_SLOT
from quarry.graph.model import DFG, CodeGraph, StatementNode, copy_source


class DeclarationResolver:
    def __init__(self, graph: CodeGraph):
        self.graph = graph
        self._decl_scan: dict[tuple[str, str], int | None] = {}
        self._memo: dict[tuple[int, str], int] = {}

    # -- public ----------------------------------------------------------

    def resolve(self, uid: int, var: str) -> int:
        """Declaration uid of the storage `var` refers to at `uid`.

        Raises NoDeclarationError when no in-project declaration exists
        (an extern or a typo).
        """
        key = (uid, var)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        node = self.graph.require(uid)
        roots: set[int] = set()
        if node.is_declaration_of(var):
            roots |= self._roots_of_declaration(uid, var, frozenset())
        elif var in node.uses:
            roots |= self._walk_back(uid, var, frozenset())
        elif var in node.defs:
            copied = copy_source(node, var)
            if copied is not None:
                roots |= self._walk_back(uid, copied, frozenset())
            if not roots:
                decl = self.declaration_in(node.fn, var)
                if decl is not None:
                    roots.add(decl)
        else:
            raise NoDeclarationError(f"{var!r} is neither used nor defined at node {uid}")
        roots = {self._canonical(r) for r in roots}
        if not roots:
            raise NoDeclarationError(f"no declaration found for {var!r} from node {uid}")
        result = min(roots)
        self._memo[key] = result
        return result

    def try_resolve(self, uid: int, var: str) -> int | None:
        try:
            return self.resolve(uid, var)
        except NoDeclarationError:
            return None

    def declaration_in(self, fn: str, var: str) -> int | None:
        """Smallest-uid declaration of `var` in a function (or globals)."""
        key = (fn, var)
        if key in self._decl_scan:
            return self._decl_scan[key]
        found = None
        for uid in self.graph.fn_nodes(fn):
            if self.graph.nodes[uid].is_declaration_of(var):
                found = uid
                break
        if found is None and fn != "":
            found = self.declaration_in("", var)  # module-level declaration
        self._decl_scan[key] = found
        return found

    # -- internals ---------------------------------------------------------

    def _roots_of_declaration(self, uid: int, var: str, seen: frozenset) -> set[int]:
        node = self.graph.nodes[uid]
        copied = copy_source(node, var)
        if copied is not None:
            inner = self._walk_back(uid, copied, seen | {(uid, var)})
            if inner:
                return inner
        return {uid}

    def _walk_back(self, uid: int, var: str, seen: frozenset) -> set[int]:
        """Roots of `var` as used at `uid`, chasing copies backwards."""
        if (uid, var) in seen:
            return set()
        seen = seen | {(uid, var)}
        roots: set[int] = set()
        node = self.graph.nodes[uid]
        for edge in self.graph.in_edges(uid, DFG):
            if edge.var != var:
                continue
            d = edge.src
            dnode = self.graph.nodes[d]
            if dnode.is_declaration_of(var):
                roots |= self._roots_of_declaration(d, var, seen)
            elif var in dnode.defs:
                copied = copy_source(dnode, var)
                if copied is not None:
                    inner = self._walk_back(d, copied, seen)
                    roots |= inner
                    if not inner:
                        decl = self.declaration_in(dnode.fn, var)
                        if decl is not None:
                            roots.add(decl)
                else:
                    decl = self.declaration_in(dnode.fn, var)
                    roots.add(decl if decl is not None else d)
        if not roots and node.is_declaration_of(var):
            roots.add(uid)
        return roots

    def _canonical(self, decl_uid: int) -> int:
        """Collapse alias-linked declarations onto the representative."""
        seen = {decl_uid}
        current = decl_uid
        while True:
            node = self.graph.nodes[current]
            candidates = [
                e.src
                for e in self.graph.in_edges(current, DFG)
                if e.src != current
                and e.src not in seen
                and self.graph.nodes[e.src].fn == node.fn
                and self.graph.nodes[e.src].is_declaration_of(e.var)
                and e.var not in node.uses
                and e.var not in node.defs
            ]
            if not candidates:
                return current
            current = min(candidates)
            seen.add(current)


def resolve_declaration(uid: int, var: str, graph: CodeGraph) -> int:
    return DeclarationResolver(graph).resolve(uid, var)


def kill_statements(
    graph: CodeGraph,
    fn: str,
    root: int,
    resolver: DeclarationResolver,
) -> set[int]:
    """Statements that re-point the storage rooted at `root` to something
    fresh; plain copies inside the alias set do not count."""
    kills: set[int] = set()
    for uid in graph.fn_nodes(fn):
        node = graph.nodes[uid]
        for var in node.defs:
            if var == RETURN_SLOT:
                continue
            if resolver.try_resolve(uid, var) != root:
                continue
            copied = copy_source(node, var)
            if copied is not None and resolver.try_resolve(uid, copied) == root:
                continue  # alias-internal copy keeps pointing at the storage
            kills.add(uid)
    return kills


def freed_variable(node: StatementNode, deallocators: frozenset[str]) -> str | None:
    """The variable passed to a deallocator call, if any."""
    from quarry.graph.model import find_calls, idents_in

    for callee in node.callees:
        if callee not in deallocators:
            continue
        for call in find_calls(node.ast, callee):
            args = call.get("children", [])[1:]
            for arg in args:
                names = idents_in(arg)
                if names:
                    return names[0]
    return None
