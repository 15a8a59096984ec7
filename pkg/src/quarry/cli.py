"""Command-line interface: extract, query, detect, score.

Extraction and analysis are decoupled: `extract` writes a snapshot
directory, and `query`/`detect` work from the snapshot without
re-parsing sources. Exit codes: 0 success, 1 fatal error, 2 partial
graph (some files failed to parse).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import quarry
from quarry.dsl.parser import parse_query
from quarry.dsl.translate import translate
from quarry.engine.execute import execute
from quarry.engine.taint import FlowWitness
from quarry.errors import (
    EmptyProjectError,
    ProviderUnavailableError,
    QuarryError,
)
from quarry.graph.extract import ExtractConfig, extract
from quarry.ml.bridge import ml_taint_scan
from quarry.ml.providers import HttpClassifier
from quarry.report import Report, finding_from_json
from quarry.rules.config import RuleConfig
from quarry.rules.detectors import DETECTORS, run_rules
from quarry.rules.scoring import score_corpus
from quarry.store.store import GraphStore, load, save


def parse_config_file(path: str | Path) -> dict:
    """Flat `key = value` configuration; comma-separated values become
    lists, and `#` starts a comment."""
    values: dict[str, object] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line: {raw!r}")
        key, _, value = line.partition("=")
        value = value.strip()
        if "," in value:
            values[key.strip()] = [v.strip() for v in value.split(",") if v.strip()]
        else:
            values[key.strip()] = value
    return values


def _rule_config(args) -> RuleConfig:
    data: dict = {}
    if getattr(args, "config", None):
        cfg = parse_config_file(args.config)
        for key in ("allocators", "deallocators", "sources", "sinks", "sanitizers"):
            if key in cfg:
                value = cfg[key]
                data[key] = value if isinstance(value, list) else [value]
        if "optimistic_externals" in cfg:
            data["optimistic_externals"] = str(cfg["optimistic_externals"]).lower() not in (
                "0",
                "false",
                "no",
            )
    return RuleConfig.from_mapping(data)


def cmd_extract(args) -> int:
    exclude = list(args.exclude or [])
    workers = args.workers
    if args.config:
        cfg = parse_config_file(args.config)
        if "exclude" in cfg and not exclude:
            value = cfg["exclude"]
            exclude = value if isinstance(value, list) else [value]
        if "workers" in cfg and args.workers == 1:
            workers = int(cfg["workers"])  # flag wins over file default
    timings: dict[str, float] = {}
    started = time.perf_counter()
    try:
        graph = extract(args.project, ExtractConfig(workers=workers, exclude=exclude))
    except EmptyProjectError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    timings["extract"] = time.perf_counter() - started
    started = time.perf_counter()
    save(graph, args.out)
    timings["save"] = time.perf_counter() - started
    nodes = len(graph.nodes)
    edges = graph.edge_count()
    print(f"nodes={nodes} edges={edges} version={graph.version[:12]}")
    for phase, seconds in sorted(timings.items()):
        print(f"timing {phase}={seconds:.3f}s", file=sys.stderr)
    if args.timings:
        Path(args.timings).write_text(
            json.dumps({"timings": {k: round(v, 6) for k, v in timings.items()}}, sort_keys=True, indent=2)
            + "\n"
        )
    if graph.stats.get("partial"):
        for failure in graph.stats.get("failures", ()):
            print(f"warning: {failure['file']}: {failure['error']}", file=sys.stderr)
        return 2
    return 0


def _render_value(value, graph) -> str:
    if isinstance(value, FlowWitness):
        return "->".join(str(uid) for uid in value.path)
    if isinstance(value, int):
        node = graph.nodes.get(value)
        if node is not None:
            return f"{node.file}:{node.line}:{node.code}"
    return str(value)


def cmd_query(args) -> int:
    store = GraphStore.open(args.snapshot, cache_enabled=not args.no_cache)
    try:
        text = Path(args.query).read_text()
        plan = translate(parse_query(text))
        rows = execute(plan, store)
    except QuarryError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    if args.format == "json":
        payload = [
            [
                value.path if isinstance(value, FlowWitness) else value
                for value in row.values
            ]
            for row in rows
        ]
        print(json.dumps({"rows": payload}, sort_keys=True, indent=2))
    else:
        for row in rows:
            print("\t".join(_render_value(v, store.graph) for v in row.values))
        print(f"{len(rows)} rows")
    return 0


def cmd_detect(args) -> int:
    timings: dict[str, float] = {}
    started = time.perf_counter()
    store = GraphStore.open(args.snapshot, cache_enabled=not args.no_cache)
    timings["load"] = time.perf_counter() - started
    rule_cfg = _rule_config(args)
    if args.config:
        file_cfg = parse_config_file(args.config)
        if not args.ml_url and "ml_url" in file_cfg:
            args.ml_url = str(file_cfg["ml_url"])
        if "ml_timeout" in file_cfg and args.ml_timeout == 5.0:
            args.ml_timeout = float(file_cfg["ml_timeout"])
    rules = list(DETECTORS) if not args.rules else args.rules.split(",")
    try:
        started = time.perf_counter()
        findings = run_rules(store.graph, rule_cfg, rules)
        timings["detect"] = time.perf_counter() - started
    except (ValueError, QuarryError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    ml_enabled = False
    ml_findings = []
    if args.ml_url:
        provider = HttpClassifier(args.ml_url, timeout=args.ml_timeout)
        started = time.perf_counter()
        try:
            ml_findings = ml_taint_scan(store.graph, provider, rule_cfg.sanitizers)
            ml_enabled = True
        except ProviderUnavailableError as err:
            print(f"warning: classifier scan skipped: {err}", file=sys.stderr)
        timings["ml"] = time.perf_counter() - started
    report = Report(
        findings=findings,
        graph_version=store.graph.version,
        graph_stats=store.graph.stats,
        rules=rules,
        ml_enabled=ml_enabled,
        ml_findings=ml_findings,
        timings=timings,
    )
    payload = report.to_json() if args.format == "json" else report.render_text()
    if args.out:
        Path(args.out).write_text(report.to_json())
        if args.format == "text":
            print(report.render_text(), end="")
    else:
        print(payload, end="")
    for phase, seconds in sorted(timings.items()):
        print(f"timing {phase}={seconds:.3f}s", file=sys.stderr)
    if args.timings:
        Path(args.timings).write_text(report.timings_json())
    return 0


def cmd_score(args) -> int:
    try:
        report_obj = json.loads(Path(args.report).read_text())
        truth = json.loads(Path(args.truth).read_text())
    except (OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    findings = [finding_from_json(f) for f in report_obj.get("findings", [])]
    findings += [
        finding_from_json(f) for f in report_obj.get("ml", {}).get("findings", [])
    ]
    by_case: dict[str, list] = {case: [] for case in truth}
    try:
        for finding in findings:
            case = finding.file.rsplit(".", 1)[0]
            by_case.setdefault(case, []).append(finding)
        scores = score_corpus(by_case, truth)
    except QuarryError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    if args.format == "json":
        payload = {
            variant: {rule: score.to_json() for rule, score in table.items()}
            for variant, table in scores.items()
        }
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for variant in ("all", "must"):
            label = "must+maybe" if variant == "all" else "must only"
            print(f"[{label}]")
            table = scores[variant]
            for rule in sorted(table):
                score = table[rule]
                print(
                    f"  {rule:>15}: precision {score.precision:6.2f}%  "
                    f"recall {score.recall:6.2f}%  "
                    f"({score.positives} hit, {score.false_positives} false, {score.total} labeled)"
                )
    return 0


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quarry", description="Graph-based static defect detection."
    )
    parser.add_argument("--version", action="version", version=f"quarry {quarry.__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_extract = sub.add_parser("extract", help="build a graph snapshot from sources")
    p_extract.add_argument("project", help="project directory")
    p_extract.add_argument("-o", "--out", required=True, help="snapshot directory")
    p_extract.add_argument("--workers", type=int, default=1)
    p_extract.add_argument("--exclude", action="append", help="path pattern to skip")
    p_extract.add_argument("--config", help="key = value config file")
    p_extract.add_argument("--timings", help="write phase timings to this file")
    p_extract.set_defaults(func=cmd_extract)

    p_query = sub.add_parser("query", help="run a .vql query against a snapshot")
    p_query.add_argument("snapshot")
    p_query.add_argument("query", help=".vql file")
    p_query.add_argument("--format", choices=("text", "json"), default="text")
    p_query.add_argument("--no-cache", action="store_true")
    p_query.set_defaults(func=cmd_query)

    p_detect = sub.add_parser("detect", help="run the built-in rules")
    p_detect.add_argument("snapshot")
    p_detect.add_argument("--rules", help="comma-separated rule ids")
    p_detect.add_argument("--ml-url", help="model server base URL")
    p_detect.add_argument("--ml-timeout", type=float, default=5.0)
    p_detect.add_argument("--format", choices=("text", "json"), default="text")
    p_detect.add_argument("--out", help="write the JSON report here")
    p_detect.add_argument("--no-cache", action="store_true")
    p_detect.add_argument("--config", help="key = value config file")
    p_detect.add_argument("--timings", help="write phase timings to this file")
    p_detect.set_defaults(func=cmd_detect)

    p_score = sub.add_parser("score", help="score a report against ground truth")
    p_score.add_argument("report", help="report JSON from detect --out")
    p_score.add_argument("truth", help="ground truth JSON")
    p_score.add_argument("--format", choices=("text", "json"), default="text")
    p_score.set_defaults(func=cmd_score)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        return args.func(args)
    except QuarryError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
