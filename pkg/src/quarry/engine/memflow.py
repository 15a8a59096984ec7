"""Storage-lifetime flow analyses backing the memory-safety rules.

Two reachability questions over a resolved storage root:

* usage pairs — a deallocation control-flow-reaches another touch of
  the same storage with no re-pointing statement between them
  (double-free when the touch is another deallocation, use-after-free
  otherwise);
* unreleased storage — an allocation for which some (or every) path to
  the function exit avoids all deallocations of its storage, with
  bounded follow-through into callers when the pointer escapes by
  return.

Confidence is structural: a result is a "must" when every surviving
path exhibits it, "maybe" when only some path does.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from quarry.engine.resolve import DeclarationResolver, freed_variable, kill_statements
from quarry.engine.taint import Reachability
from quarry.frontend.lowering import RETURN_SLOT
from quarry.graph.model import CFG, CodeGraph, StatementNode, copy_source, find_calls, idents_in

DEFAULT_ALLOCATORS = frozenset({"malloc", "calloc", "realloc"})
DEFAULT_DEALLOCATORS = frozenset({"free"})


@dataclass(frozen=True)
class MemPolicy:
    allocators: frozenset[str] = DEFAULT_ALLOCATORS
    deallocators: frozenset[str] = DEFAULT_DEALLOCATORS
    # Optimistic: unknown external callees neither free nor use pointers.
    optimistic_externals: bool = True


@dataclass
class UsagePair:
    source: int  # the deallocation
    sink: int  # the later touch of the same storage
    root: int  # shared declaration uid
    path: list[int]  # CFG witness from source to sink
    must: bool


@dataclass
class LeakReport:
    alloc: int
    root: int | None
    must: bool
    path: list[int]  # CFG witness to the exit (or just the allocation)
    context_fn: str  # function in which the leak manifests


class MemFlowAnalyzer:
    """Shared state (resolver, reachability, summaries) for one graph."""

    def __init__(self, graph: CodeGraph, policy: MemPolicy | None = None):
        self.graph = graph
        self.policy = policy or MemPolicy()
        self.resolver = DeclarationResolver(graph)
        self.reach = Reachability(graph)
        self._kills: dict[tuple[str, int], set[int]] = {}
        self._dealloc_sites: dict[tuple[str, int], set[int]] = {}
        self._users: dict[tuple[str, int], set[int]] = {}
        self._fn_table = self._build_fn_table()
        self._allocating: set[str] = set()
        self._freeing_params: dict[str, set[int]] = {}
        self._compute_summaries()

    # -- function table and summaries ------------------------------------

    def _build_fn_table(self) -> dict[str, dict]:
        table: dict[str, dict] = {}
        for fn in self.graph.fn_index:
            if fn == "":
                continue
            entry = exit_uid = None
            params: list[int] = []
            returns: list[int] = []
            for uid in self.graph.fn_nodes(fn):
                node = self.graph.nodes[uid]
                if node.kind == "entry":
                    entry = uid
                elif node.kind == "exit":
                    exit_uid = uid
                elif node.ast.get("kind") == "Param":
                    params.append(uid)
                elif node.ast.get("kind") == "Return":
                    returns.append(uid)
            table[fn] = {
                "entry": entry,
                "exit": exit_uid,
                "params": params,
                "returns": returns,
            }
        return table

    def _compute_summaries(self) -> None:
        """Fixpoint over callee summaries: which functions hand back
        fresh storage, and which release a parameter's storage."""
        changed = True
        while changed:
            changed = False
            for fn, meta in self._fn_table.items():
                if fn not in self._allocating and self._fn_allocates(fn, meta):
                    self._allocating.add(fn)
                    changed = True
                freed = self._fn_freed_params(fn, meta)
                if freed != self._freeing_params.get(fn, set()):
                    self._freeing_params[fn] = freed
                    changed = True

    def _returns_fresh(self, ret: StatementNode) -> bool:
        if set(ret.callees) & (self.policy.allocators | self._allocating):
            return True
        for var in ret.uses:
            for edge in self.graph.in_edges(ret.uid, "DFG"):
                if edge.var != var:
                    continue
                src = self.graph.nodes[edge.src]
                if set(src.callees) & (self.policy.allocators | self._allocating):
                    return True
        return False

    def _fn_allocates(self, fn: str, meta: dict) -> bool:
        return any(self._returns_fresh(self.graph.nodes[r]) for r in meta["returns"])

    def _fn_freed_params(self, fn: str, meta: dict) -> set[int]:
        freed: set[int] = set()
        for index, param_uid in enumerate(meta["params"]):
            node = self.graph.nodes[param_uid]
            var = node.defs[0] if node.defs else None
            if var is None:
                continue
            root = self.resolver.try_resolve(param_uid, var)
            if root is None:
                continue
            if self.dealloc_sites(fn, root):
                freed.add(index)
        return freed

    # -- per-root indexes ---------------------------------------------------

    def is_alloc_call(self, node: StatementNode) -> bool:
        return bool(set(node.callees) & self.policy.allocators)

    def alloc_sites(self) -> list[int]:
        return sorted(
            uid
            for uid, node in self.graph.nodes.items()
            if self.is_alloc_call(node) and node.fn
        )

    def kills(self, fn: str, root: int) -> set[int]:
        key = (fn, root)
        if key not in self._kills:
            self._kills[key] = kill_statements(self.graph, fn, root, self.resolver)
        return self._kills[key]

    def dealloc_sites(self, fn: str, root: int) -> set[int]:
        """Statements in `fn` that release the storage rooted at `root`:
        direct deallocator calls plus calls handing the pointer to a
        callee that frees that parameter."""
        key = (fn, root)
        if key in self._dealloc_sites:
            return self._dealloc_sites[key]
        sites: set[int] = set()
        for uid in self.graph.fn_nodes(fn):
            node = self.graph.nodes[uid]
            if not node.callees:
                continue
            var = freed_variable(node, self.policy.deallocators)
            if var is not None and self.resolver.try_resolve(uid, var) == root:
                sites.add(uid)
                continue
            for callee in node.callees:
                freed_params = self._freeing_params.get(callee)
                if freed_params:
                    if self._passes_root_at(node, callee, freed_params, root):
                        sites.add(uid)
                        break
                elif (
                    not self.policy.optimistic_externals
                    and callee not in self._fn_table
                    and self._passes_root_at(node, callee, None, root)
                ):
                    sites.add(uid)
                    break
        self._dealloc_sites[key] = sites
        return sites

    def _passes_root_at(
        self, node: StatementNode, callee: str, positions: set[int] | None, root: int
    ) -> bool:
        for call in find_calls(node.ast, callee):
            args = call.get("children", [])[1:]
            for index, arg in enumerate(args):
                if positions is not None and index not in positions:
                    continue
                for var in idents_in(arg):
                    if self.resolver.try_resolve(node.uid, var) == root:
                        return True
        return False

    def users(self, fn: str, root: int) -> set[int]:
        """Statements in `fn` using a variable of this storage root."""
        key = (fn, root)
        if key not in self._users:
            found: set[int] = set()
            for uid in self.graph.fn_nodes(fn):
                node = self.graph.nodes[uid]
                for var in node.uses:
                    if var == RETURN_SLOT:
                        continue
                    if self.resolver.try_resolve(uid, var) == root:
                        found.add(uid)
                        break
            self._users[key] = found
        return self._users[key]

    # -- CFG path search ------------------------------------------------------

    def _cfg_path(self, start: int, goal: int, blocked: set[int]) -> list[int] | None:
        """Shortest CFG path start..goal whose interior avoids `blocked`;
        start == goal demands a real cycle."""
        parents: dict[int, int] = {}
        queue = deque()
        for succ in self.graph.successors(start, CFG):
            if succ not in parents:
                parents[succ] = start
                queue.append(succ)
        while queue:
            cur = queue.popleft()
            if cur == goal:
                path = [cur]
                while path[-1] != start:
                    path.append(parents[path[-1]])
                return list(reversed(path))
            if cur in blocked:
                continue
            for succ in self.graph.successors(cur, CFG):
                if succ not in parents:
                    parents[succ] = cur
                    queue.append(succ)
        return None

    def _exit_reachable(self, fn: str, start: int, blocked: set[int]) -> bool:
        exit_uid = self._fn_table.get(fn, {}).get("exit")
        if exit_uid is None:
            return True
        return self._cfg_path(start, exit_uid, blocked) is not None

    # -- usage pairs (double free / use after free) -----------------------

    def usage_pairs(
        self,
        sources: list[int],
        sinks: set[int] | None = None,
        sinks_must_deallocate: bool | None = None,
    ) -> list[UsagePair]:
        """Pairs (deallocation, later touch of the same storage).

        `sinks` restricts candidate sink uids; `sinks_must_deallocate`
        narrows to deallocations (double free) or non-deallocations
        (use after free).
        """
        pairs: list[UsagePair] = []
        for f in sorted(sources):
            node = self.graph.nodes[f]
            fn = node.fn
            if not fn:
                continue
            var = freed_variable(node, self.policy.deallocators)
            if var is None:
                continue
            root = self.resolver.try_resolve(f, var)
            if root is None:
                continue
            events = self.dealloc_sites(fn, root)
            kills = self.kills(fn, root)
            if sinks_must_deallocate is True:
                candidates = events
            elif sinks_must_deallocate is False:
                candidates = self.users(fn, root) - events
            else:
                candidates = self.users(fn, root) | events
            if sinks is not None:
                candidates = candidates & sinks
            for u in sorted(candidates):
                blocked = (kills | events) - {f, u}
                path = self._cfg_path(f, u, blocked)
                if path is None:
                    continue
                must = not self._exit_reachable(fn, f, blocked | {u})
                pairs.append(UsagePair(f, u, root, path, must))
        return pairs

    # -- unreleased storage (memory leak) ------------------------------------

    def leak_reports(self, allocs: list[int] | None = None) -> list[LeakReport]:
        reports: list[LeakReport] = []
        for a in sorted(allocs if allocs is not None else self.alloc_sites()):
            report = self._analyze_alloc(a, frozenset())
            if report is not None:
                reports.append(report)
        return reports

    def _capture_var(self, node: StatementNode) -> str | None:
        for var in node.defs:
            if var != RETURN_SLOT:
                return var
        return None

    def _stores_through_pointer(self, node: StatementNode) -> bool:
        ast = node.ast
        if ast.get("kind") != "ExprStmt":
            return False
        children = ast.get("children", [])
        if not children or children[0].get("kind") != "Assign":
            return False
        return children[0]["children"][0].get("kind") in ("Deref", "Index")

    def _stored_value_idents(self, node: StatementNode) -> list[str]:
        """Identifiers whose value a deref/index store writes out."""
        if not self._stores_through_pointer(node):
            return []
        return idents_in(node.ast["children"][0]["children"][1])

    def _analyze_alloc(self, a: int, visiting: frozenset[str]) -> LeakReport | None:
        node = self.graph.nodes[a]
        fn = node.fn
        var = self._capture_var(node)
        if var is None:
            if self._stores_through_pointer(node):
                return None  # stored through an out-pointer; escapes
            return LeakReport(a, None, True, [a], fn)  # result dropped
        root = self.resolver.try_resolve(a, var)
        if root is None:
            return None
        if self._escapes(fn, root):
            return self._analyze_in_callers(a, fn, visiting)
        return self._leak_status(a, a, root, fn)

    def _escapes(self, fn: str, root: int) -> bool:
        meta = self._fn_table.get(fn, {})
        for r in meta.get("returns", ()):
            ret = self.graph.nodes[r]
            for var in ret.uses:
                if self.resolver.try_resolve(r, var) == root:
                    return True
        for uid in self.graph.fn_nodes(fn):
            stmt = self.graph.nodes[uid]
            # The pointer's own value written out through another pointer.
            for var in self._stored_value_idents(stmt):
                if self.resolver.try_resolve(uid, var) == root:
                    return True
            # The pointer copied into module-level storage.
            for var in stmt.defs:
                if var == RETURN_SLOT:
                    continue
                copied = copy_source(stmt, var)
                if copied is None or self.resolver.try_resolve(uid, copied) != root:
                    continue
                decl = self.resolver.declaration_in(fn, var)
                if decl is not None and self.graph.nodes[decl].fn == "":
                    return True
        return False

    def _analyze_in_callers(
        self, alloc: int, fn: str, visiting: frozenset[str]
    ) -> LeakReport | None:
        if fn in visiting or len(visiting) >= 8:
            return None
        worst: LeakReport | None = None
        for cs in sorted(self.graph.callee_index.get(fn, ())):
            cs_node = self.graph.nodes[cs]
            caller_fn = cs_node.fn
            if not caller_fn:
                continue
            var = self._capture_var(cs_node)
            if var is None:
                if self._stores_through_pointer(cs_node):
                    continue
                return LeakReport(alloc, None, True, [alloc, cs], caller_fn)
            root = self.resolver.try_resolve(cs, var)
            if root is None:
                continue
            if self._escapes(caller_fn, root):
                inner = self._analyze_in_callers(alloc, caller_fn, visiting | {fn})
            else:
                inner = self._leak_status(alloc, cs, root, caller_fn)
            if inner is not None:
                if inner.must:
                    return inner
                worst = worst or inner
        return worst

    def _leak_status(
        self, alloc: int, from_uid: int, root: int, fn: str
    ) -> LeakReport | None:
        releases = {
            uid
            for uid in self.dealloc_sites(fn, root)
            if uid == from_uid or self.reach.reaches(from_uid, uid)
        }
        if not releases:
            prefix = [alloc] if alloc == from_uid else [alloc, from_uid]
            return LeakReport(alloc, root, True, prefix, fn)
        exit_uid = self._fn_table.get(fn, {}).get("exit")
        if exit_uid is None:
            return None
        path = self._cfg_path(from_uid, exit_uid, set(releases))
        if path is not None:
            witness = path if alloc == from_uid else [alloc] + path
            return LeakReport(alloc, root, False, witness, fn)
        return None
