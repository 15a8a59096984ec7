"""Variable-annotated data flow edges for one function.

Three edge families are produced:

* def-to-use edges from classic forward reaching definitions;
* declaration anchors, one from a variable's declaration to each of its
  uses regardless of intervening kills, so any use can be traced back
  to its declaration;
* alias edges for pointer variables merging through plain copy
  assignments: the alias set's representative declaration is linked to
  member declarations and to statements using any member.

Uses with no in-scope definition are reported as unresolved so the
cross-file join can match them against global declarations.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from quarry.frontend.lowering import LoweredFunction, UnifiedStatement
from quarry.graph.model import CFG, DFG, AliasSet, FlowEdge, StatementNode, copy_source


@dataclass
class DfgResult:
    edges: list[FlowEdge] = field(default_factory=list)
    alias_sets: list[AliasSet] = field(default_factory=list)
    unresolved: list[tuple[int, str]] = field(default_factory=list)  # (use uid, var)


def _cfg_reachability(uids: list[int], cfg_edges: list[FlowEdge]) -> dict[int, set[int]]:
    """reach[u] = every node reachable from u over CFG edges (u excluded
    unless it sits on a cycle)."""
    succ: dict[int, list[int]] = defaultdict(list)
    for e in cfg_edges:
        if e.kind == CFG:
            succ[e.src].append(e.dst)
    reach: dict[int, set[int]] = {}
    for start in uids:
        seen: set[int] = set()
        stack = list(succ.get(start, ()))
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(succ.get(cur, ()))
        reach[start] = seen
    return reach


class _UnionFind:
    def __init__(self):
        self.parent: dict[str, str] = {}

    def find(self, x: str) -> str:
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # Tie-break on name for determinism; real rep chosen later.
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb

    def groups(self) -> list[set[str]]:
        by_root: dict[str, set[str]] = defaultdict(set)
        for x in self.parent:
            by_root[self.find(x)].add(x)
        return [g for g in by_root.values() if len(g) > 1]


def _alias_groups(fn: LoweredFunction) -> list[set[str]]:
    """Flow-insensitive, assignment-based aliasing of pointer variables."""
    pointers = fn.info.pointer_vars
    uf = _UnionFind()
    for stmt in fn.statements:
        for var in stmt.defs:
            if var not in pointers:
                continue
            node = StatementNode.from_statement(stmt)
            src = copy_source(node, var)
            if src is not None and src in pointers:
                uf.union(var, src)
    return uf.groups()


def build_dfg(fn: LoweredFunction, cfg_edges: list[FlowEdge]) -> DfgResult:
    stmts = fn.statements
    by_uid = {s.uid: s for s in stmts}
    uids = [s.uid for s in stmts]
    decl_of = fn.info.decl_of

    succ: dict[int, list[int]] = defaultdict(list)
    pred: dict[int, list[int]] = defaultdict(list)
    for e in cfg_edges:
        succ[e.src].append(e.dst)
        pred[e.dst].append(e.src)

    # Forward reaching definitions at statement granularity.
    def transfer(inset: dict[str, frozenset[int]], stmt: UnifiedStatement):
        out = dict(inset)
        for var in stmt.defs:
            out[var] = frozenset((stmt.uid,))
        return out

    in_sets: dict[int, dict[str, frozenset[int]]] = {u: {} for u in uids}
    out_sets: dict[int, dict[str, frozenset[int]]] = {
        u: transfer({}, by_uid[u]) for u in uids
    }
    worklist = sorted(uids)
    while worklist:
        uid = worklist.pop(0)
        merged: dict[str, set[int]] = defaultdict(set)
        for p in pred.get(uid, ()):
            for var, defs in out_sets[p].items():
                merged[var] |= defs
        new_in = {var: frozenset(defs) for var, defs in merged.items()}
        if new_in != in_sets[uid]:
            in_sets[uid] = new_in
            out_sets[uid] = transfer(new_in, by_uid[uid])
            for s in succ.get(uid, ()):
                if s not in worklist:
                    worklist.append(s)

    reach = _cfg_reachability(uids, cfg_edges)

    groups = _alias_groups(fn)
    group_of: dict[str, set[str]] = {}
    rep_of: dict[str, str] = {}
    alias_sets: list[AliasSet] = []
    for group in groups:
        declared = [v for v in group if v in decl_of]
        if not declared:
            continue
        rep = min(declared, key=lambda v: decl_of[v])
        alias_sets.append(AliasSet(rep, frozenset(group), fn.info.name))
        for member in group:
            group_of[member] = group
            rep_of[member] = rep
    alias_sets.sort(key=lambda a: a.representative)

    edges: dict[tuple, FlowEdge] = {}

    def add(src: int, dst: int, var: str) -> None:
        edge = FlowEdge(src, dst, DFG, var=var, def_site=src)
        edges.setdefault(edge.sort_key(), edge)

    unresolved: list[tuple[int, str]] = []
    for stmt in stmts:
        for var in stmt.uses:
            reaching = in_sets[stmt.uid].get(var, frozenset())
            for d in sorted(reaching):
                add(d, stmt.uid, var)
            decl_uid = decl_of.get(var)
            if decl_uid is None:
                if not reaching:
                    unresolved.append((stmt.uid, var))
            elif decl_uid == stmt.uid or stmt.uid in reach.get(decl_uid, ()):
                if decl_uid != stmt.uid:
                    add(decl_uid, stmt.uid, var)
            # Alias duplication: uses of a member also link back to the
            # representative's declaration.
            rep = rep_of.get(var)
            if rep is not None and rep != var:
                rep_decl = decl_of.get(rep)
                if rep_decl is not None and stmt.uid in reach.get(rep_decl, ()):
                    add(rep_decl, stmt.uid, rep)

    # Declaration-to-declaration alias links; the backward resolver
    # follows these to the set representative.
    for aset in alias_sets:
        rep_decl = decl_of.get(aset.representative)
        if rep_decl is None:
            continue
        for member in sorted(aset.members):
            if member == aset.representative or member not in decl_of:
                continue
            member_decl = decl_of[member]
            if member_decl in reach.get(rep_decl, ()):
                add(rep_decl, member_decl, aset.representative)

    result = DfgResult(
        edges=[edges[k] for k in sorted(edges)],
        alias_sets=alias_sets,
        unresolved=unresolved,
    )
    return result
