"""Command-line interface: ``wellconn stats|treat|compare|dl|fetch``.

Exit codes: 0 ok, 1 treatment/metric contract failure, 2 I/O or parse error,
3 external-command failure.
"""
from __future__ import annotations

import argparse
import io
import logging
import os
import resource
import sys
import time
from pathlib import Path

from . import __version__
from . import fetch as fetch_mod
from . import report as rep
from .clustering import Clustering, cluster_stats, read_clustering, read_clustering_labels, write_clustering
from .connectivity import connectivity_profile, parse_threshold
from .dl import compare_dl, dl_dc
from .errors import ContractViolation, ExternalCommandError, FetchError, ParseError, TreatmentError
from .graph import Graph, read_edge_list
from .metrics import compare as compare_scores
from .treatments import external_reclusterer, treat

log = logging.getLogger("wellconn")

EXIT_OK, EXIT_CONTRACT, EXIT_IO, EXIT_EXTERNAL = 0, 1, 2, 3


class InputMissing(Exception):
    pass


def _require(path, what):
    if path is None:
        raise InputMissing(f"--{what} is required")
    if not Path(path).is_file():
        raise InputMissing(f"{what} file not found: {path}")
    return Path(path)


def _load(graph_path, *clustering_paths):
    """Read the graph, admitting nodes that only appear in clustering files."""
    graph = read_edge_list(_require(graph_path, "graph"))
    extra = []
    for p in clustering_paths:
        if p is not None:
            extra.extend(read_clustering_labels(_require(p, "clustering")))
    graph = graph.with_isolated(extra)
    clusterings = [None if p is None else read_clustering(p, graph) for p in clustering_paths]
    return graph, clusterings


def _config(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func",)}


def _emit(args, report: dict, text: str | None = None) -> None:
    body = rep.dumps(report)
    if args.json:
        rep.write_text_atomic(args.json, body)
    if args.csv:
        rep.write_text_atomic(args.csv, rep.summary_csv(report))
    if text is not None:
        sys.stdout.write(text + "\n")
    elif not args.json:
        sys.stdout.write(body)


def _profile_block(graph, clustering, threshold, jobs):
    return rep.stats_block(cluster_stats(clustering), connectivity_profile(graph, clustering, threshold, jobs))


def cmd_stats(args) -> int:
    graph, (clustering,) = _load(args.graph, args.clustering)
    threshold = parse_threshold(args.threshold)
    report = rep.envelope("stats", _config(args), {"graph": args.graph, "clustering": args.clustering})
    report["result"] = _profile_block(graph, clustering, threshold, args.jobs)
    _emit(args, report)
    return EXIT_OK


def cmd_treat(args) -> int:
    graph, (clustering,) = _load(args.graph, args.clustering)
    threshold = parse_threshold(args.threshold)
    reclusterer = None
    if args.mode == "cm" and args.recluster_cmd:
        reclusterer = external_reclusterer(args.recluster_cmd, args.workdir, args.timeout)
    result = treat(graph, clustering, args.mode, threshold, reclusterer, args.jobs)
    summary = result.summary()
    summary["reclusterer"] = "components" if args.mode == "cm" and reclusterer is None else (
        args.recluster_cmd if args.mode == "cm" else None)
    if reclusterer is not None:
        summary["note"] = "external reclusterer output may be nondeterministic"
    report = rep.envelope("treat", _config(args), {"graph": args.graph, "clustering": args.clustering})
    report["result"] = {
        "treatment": summary,
        "before": _profile_block(graph, clustering, threshold, args.jobs),
        "after": _profile_block(graph, result.output, threshold, args.jobs),
        "trace": {str(k): v for k, v in result.trace.items()},
    }
    if args.out:
        buf = io.StringIO()
        write_clustering(result.output, buf)
        rep.write_text_atomic(args.out, buf.getvalue())
    log.info("%s: %d -> %d clusters, %d edges removed%s", args.mode, summary["clusters_in"],
             summary["clusters_out"], summary["removed_edges"], "" if summary["changed"] else " (no change)")
    _emit(args, report)
    return EXIT_OK


def _label_only_universe(path_a, path_b):
    la = read_clustering_labels(_require(path_a, "clustering"))
    lb = read_clustering_labels(_require(path_b, "clustering-b"))
    sa, sb = set(la), set(lb)
    if sa != sb:
        only_a, only_b = sorted(sa - sb)[:5], sorted(sb - sa)[:5]
        raise ContractViolation(f"node universes differ: only in first {only_a}, only in second {only_b}")
    return Graph.from_edges(len(la), [], la)


def cmd_compare(args) -> int:
    paths = [args.clustering, args.clustering_b, args.pair]
    if args.graph:
        graph, clusterings = _load(args.graph, *paths)
    else:
        graph = _label_only_universe(args.clustering, args.clustering_b)
        if args.pair:
            _label_only_universe(args.clustering, args.pair)
        clusterings = [None if p is None else read_clustering(p, graph) for p in paths]
    truth, before, after = clusterings
    scores = {"a_vs_b": compare_scores(truth, before)}
    result = {"scores": scores}
    if after is not None:
        scores["a_vs_pair"] = compare_scores(truth, after)
        delta = {m: scores["a_vs_pair"][m] - scores["a_vs_b"][m] for m in ("nmi", "ari", "ami")}
        scores["delta"] = delta
    result.update({k: scores["a_vs_b"][k] for k in ("nmi", "ari", "ami", "N", "B_u", "B_v")})
    report = rep.envelope("compare", _config(args), {"graph": args.graph, "clustering": args.clustering,
                                                     "clustering_b": args.clustering_b, "pair": args.pair})
    report["result"] = result
    _emit(args, report)
    return EXIT_OK


def cmd_dl(args) -> int:
    other = args.clustering_b or args.compare
    graph, (first, second) = _load(args.graph, args.clustering, other)
    report = rep.envelope("dl", _config(args), {"graph": args.graph, "clustering": args.clustering,
                                                "clustering_b": other})
    if second is None:
        report["result"] = dl_dc(graph, first).to_dict()
        _emit(args, report)
    else:
        comparison = compare_dl(graph, first, second)
        report["result"] = comparison.to_dict()
        _emit(args, report, text=None if (args.json is None and args.no_table) else comparison.table())
    return EXIT_OK


def cmd_fetch(args) -> int:
    res = fetch_mod.fetch(args.dataset, cache_dir=args.cache_dir, offline=args.offline,
                          expected_sha256=args.sha256, timeout=args.timeout)
    if args.out:
        rep.write_text_atomic(args.out, Path(res.edges_path).read_text(encoding="utf-8"))
    report = rep.envelope("fetch", _config(args), {})
    report["result"] = fetch_mod.result_dict(res)
    _emit(args, report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wellconn", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"wellconn {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def verbose(sp):
        sp.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    def common(sp, graph_required=True):
        verbose(sp)
        sp.add_argument("--graph", required=graph_required, help="edge-list file")
        sp.add_argument("--json", help="write the JSON report here (default: stdout)")
        sp.add_argument("--csv", help="write the CSV summary here")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes for per-cluster work")
        sp.add_argument("--max-memory-gb", type=float, default=None,
                        help="warn when peak memory exceeds this (advisory)")

    s = sub.add_parser("stats", help="cluster statistics and connectivity profile")
    common(s)
    s.add_argument("--clustering", required=True)
    s.add_argument("--threshold", default="log10", help="log10 | const:<v>")
    s.set_defaults(func=cmd_stats)

    t = sub.add_parser("treat", help="apply a CC, WCC or CM treatment")
    common(t)
    t.add_argument("--clustering", required=True)
    t.add_argument("--mode", choices=["cc", "wcc", "cm"], required=True)
    t.add_argument("--threshold", default="log10", help="log10 | const:<v>")
    t.add_argument("--recluster-cmd", help="CM reclusterer command with {input} and {output} placeholders")
    t.add_argument("--workdir", default=None, help="scratch directory for reclusterer files")
    t.add_argument("--timeout", type=float, default=float(os.environ.get("WELLCONN_TIMEOUT", 3600)),
                   help="seconds per reclusterer call")
    t.add_argument("--out", help="write the treated clustering here")
    t.set_defaults(func=cmd_treat)

    c = sub.add_parser("compare", help="NMI/ARI/AMI between clusterings")
    common(c, graph_required=False)
    c.add_argument("--clustering", required=True, help="reference (e.g. ground truth)")
    c.add_argument("--clustering-b", required=True, help="clustering to score")
    c.add_argument("--pair", help="second clustering to score (e.g. after treatment); reports deltas")
    c.set_defaults(func=cmd_compare)

    d = sub.add_parser("dl", help="degree-corrected SBM description-length breakdown")
    common(d)
    d.add_argument("--clustering", required=True, help="untreated clustering")
    d.add_argument("--clustering-b", help="treated clustering to compare against")
    d.add_argument("--compare", help="alias of --clustering-b")
    d.add_argument("--no-table", action="store_true", help="print JSON instead of the comparison table")
    d.set_defaults(func=cmd_dl)

    f = sub.add_parser("fetch", help="download and preprocess a catalogue network")
    verbose(f)
    f.add_argument("dataset", help="catalogue name, optionally name/subnetwork")
    f.add_argument("--offline", action="store_true", help="use the cache only")
    f.add_argument("--sha256", help="expected payload checksum")
    f.add_argument("--cache-dir", default=None, help=f"cache root (env {fetch_mod.CACHE_ENV})")
    f.add_argument("--timeout", type=float, default=300.0)
    f.add_argument("--out", help="copy the preprocessed edge list here")
    f.add_argument("--json", help="write the JSON report here (default: stdout)")
    f.add_argument("--csv", help="write the CSV summary here")
    f.set_defaults(func=cmd_fetch)
    return p


def _peak_rss_gb() -> float:
    kb = max(resource.getrusage(resource.RUSAGE_SELF).ru_maxrss,
             resource.getrusage(resource.RUSAGE_CHILDREN).ru_maxrss)
    return kb / 1024 ** 2


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="wellconn: %(message)s")
    if getattr(args, "jobs", 1) < 1:
        print("wellconn: --jobs must be >= 1", file=sys.stderr)
        return EXIT_IO
    start = time.perf_counter()
    try:
        code = args.func(args)
    except ExternalCommandError as exc:
        print(f"wellconn: external command failed: {exc}", file=sys.stderr)
        return EXIT_EXTERNAL
    except (ContractViolation, TreatmentError) as exc:
        print(f"wellconn: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except (InputMissing, ParseError, FetchError, OSError, ValueError) as exc:
        print(f"wellconn: {exc}", file=sys.stderr)
        return EXIT_IO
    limit = getattr(args, "max_memory_gb", None)
    if limit is not None and _peak_rss_gb() > limit:
        log.warning("peak memory %.2f GB exceeded advisory limit %.2f GB", _peak_rss_gb(), limit)
    log.info("%s finished in %.2fs", args.command, time.perf_counter() - start)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
