"""Project extraction: parallel per-file graph builds, sequential join.

Per-file work (lex, parse, lower, CFG, DFG) runs on a worker pool with
no shared state; the cross-file call graph and global-variable
resolution happen in a single join phase afterwards, so the result is
identical for any worker count.
"""

from __future__ import annotations

import fnmatch
import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from quarry.errors import EmptyProjectError, LexError, LoweringError, ParseError
from quarry.frontend.lowering import LoweredUnit, file_namespace, lower
from quarry.frontend.parser import parse
from quarry.frontend.tokens import tokenize
from quarry.graph.callgraph import build_cg
from quarry.graph.cfg import build_cfg
from quarry.graph.dfg import build_dfg
from quarry.graph.model import CFG, DFG, CodeGraph, FlowEdge, StatementNode

DEFAULT_EXTENSIONS = (".c", ".mc")


@dataclass
class ExtractConfig:
    workers: int = 1
    exclude: list[str] = field(default_factory=list)
    extensions: tuple[str, ...] = DEFAULT_EXTENSIONS


@dataclass
class _FileResult:
    relpath: str
    digest: str
    unit: LoweredUnit | None = None
    edges: list[FlowEdge] = field(default_factory=list)
    unresolved: list[tuple[int, str]] = field(default_factory=list)
    alias_count: int = 0
    error: str | None = None


def _discover(project_dir: Path, config: ExtractConfig) -> list[str]:
    files = []
    for path in sorted(project_dir.rglob("*")):
        if not path.is_file() or path.suffix not in config.extensions:
            continue
        rel = path.relative_to(project_dir).as_posix()
        if any(fnmatch.fnmatch(rel, pat) or pat in rel.split("/") for pat in config.exclude):
            continue
        files.append(rel)
    return files


def _assign_namespaces(relpaths: list[str]) -> dict[str, int]:
    """Path-hash uid namespaces with deterministic collision bumping."""
    taken: set[int] = set()
    spaces: dict[str, int] = {}
    for rel in relpaths:  # relpaths are sorted, so bumps are stable
        salt = 0
        ns = file_namespace(rel)
        while ns in taken:
            salt += 1
            ns = file_namespace(f"{rel}\x00{salt}")
        taken.add(ns)
        spaces[rel] = ns
    return spaces


def _build_file(project_dir: Path, relpath: str, namespace: int) -> _FileResult:
    raw = (project_dir / relpath).read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    result = _FileResult(relpath=relpath, digest=digest)
    try:
        source = raw.decode("utf-8")
        unit = lower(parse(tokenize(source, relpath), relpath), source, relpath, namespace)
    except (UnicodeDecodeError, LexError, ParseError, LoweringError) as err:
        result.error = str(err)
        return result
    except RecursionError:
        result.error = "expression nesting too deep"
        return result
    result.unit = unit
    for fn in unit.functions:
        cfg_edges = build_cfg(fn)
        result.edges.extend(cfg_edges)
        dfg = build_dfg(fn, cfg_edges)
        result.edges.extend(dfg.edges)
        result.unresolved.extend(dfg.unresolved)
        result.alias_count += len(dfg.alias_sets)
    return result


def extract(project_dir: str | Path, config: ExtractConfig | None = None) -> CodeGraph:
    """Build the full code graph for every source file under a directory."""
    config = config or ExtractConfig()
    project_dir = Path(project_dir)
    relpaths = _discover(project_dir, config)
    if not relpaths:
        raise EmptyProjectError(f"no source files under {project_dir}")
    spaces = _assign_namespaces(relpaths)

    if config.workers <= 1:
        results = [_build_file(project_dir, rel, spaces[rel]) for rel in relpaths]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(
                pool.map(lambda rel: _build_file(project_dir, rel, spaces[rel]), relpaths)
            )
    results.sort(key=lambda r: r.relpath)

    graph = CodeGraph()
    fn_table = {}
    warnings: list[str] = []
    failures: list[dict] = []
    global_decls: dict[str, int] = {}
    unresolved: list[tuple[int, str]] = []

    for result in results:
        if result.error is not None:
            failures.append({"file": result.relpath, "error": result.error})
            continue
        unit = result.unit
        assert unit is not None
        for stmt in unit.statements:
            graph.add_node(StatementNode.from_statement(stmt))
        for g in unit.globals:
            name = g.defs[0]
            if name in global_decls:
                warnings.append(f"duplicate global {name!r} at {result.relpath}:{g.line}")
            else:
                global_decls[name] = g.uid
        for fn in unit.functions:
            if fn.info.name in fn_table:
                warnings.append(
                    f"duplicate function {fn.info.name!r} at {result.relpath}:{fn.info.line}"
                )
            else:
                fn_table[fn.info.name] = fn.info
        for edge in result.edges:
            graph.add_edge(edge)
        unresolved.extend(result.unresolved)

    # Global declarations anchor uses that had no local definition.
    still_unresolved = []
    for uid, var in unresolved:
        decl_uid = global_decls.get(var)
        if decl_uid is not None:
            graph.add_edge(FlowEdge(decl_uid, uid, DFG, var=var, def_site=decl_uid))
        else:
            still_unresolved.append((uid, var))
    for uid, var in sorted(still_unresolved):
        node = graph.nodes[uid]
        warnings.append(f"undefined variable {var!r} at {node.file}:{node.line}")

    for edge in build_cg(graph, fn_table):
        graph.add_edge(edge)
    graph.freeze()

    unresolved_callees = sorted(
        {c for n in graph.nodes.values() for c in n.callees if c not in fn_table}
    )
    graph.version = _project_version(results)
    graph.stats = {
        "files": len(relpaths),
        "functions": len(fn_table),
        "nodes": _count_by(graph.nodes.values(), lambda n: n.kind),
        "edges": _count_by(graph.edges(), lambda e: e.kind),
        "alias_sets": sum(r.alias_count for r in results if r.error is None),
        "unresolved_callees": unresolved_callees,
        "unreachable": _count_unreachable(graph, fn_table),
        "warnings": sorted(warnings),
        "failures": failures,
        "partial": bool(failures),
    }
    return graph


def _project_version(results: list[_FileResult]) -> str:
    acc = hashlib.sha256()
    for result in results:  # already sorted by relpath
        acc.update(result.relpath.encode("utf-8"))
        acc.update(b"\x00")
        acc.update(result.digest.encode("ascii"))
        acc.update(b"\x00")
    return acc.hexdigest()


def _count_by(items, key) -> dict[str, int]:
    out: dict[str, int] = {}
    for item in items:
        k = key(item)
        out[k] = out.get(k, 0) + 1
    return dict(sorted(out.items()))


def _count_unreachable(graph: CodeGraph, fn_table) -> int:
    unreachable = 0
    for name, info in fn_table.items():
        seen = {info.entry_uid}
        stack = [info.entry_uid]
        while stack:
            cur = stack.pop()
            for nxt in graph.successors(cur, CFG):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        unreachable += sum(1 for uid in graph.fn_nodes(name) if uid not in seen)
    return unreachable
