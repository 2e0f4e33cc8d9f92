"""JSON report envelopes and the CSV summaries derived from them.

CSV summaries are always computed from the JSON report dict, so reloading a
saved report and re-deriving the CSV reproduces the original bytes.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import sys
from pathlib import Path

from . import __version__, mincut

PROFILE_CLASSES = ("disconnected", "poorly_connected", "well_connected")


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def envelope(command: str, config: dict, inputs: dict) -> dict:
    """Report header: tool version, config echo and input checksums."""
    return {
        "tool": "wellconn",
        "version": __version__,
        "kernel": mincut.KERNEL,
        "command": command,
        "config": {k: (str(v) if isinstance(v, os.PathLike) else v) for k, v in sorted(config.items())},
        "inputs": {name: {"path": str(p), "sha256": file_sha256(p)} for name, p in inputs.items()
                   if p is not None},
    }


def stats_block(stats, profile) -> dict:
    return {"stats": stats.to_dict(), "profile": profile.to_dict()}


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _stats_row(stage: str, block: dict) -> list:
    s, p = block["stats"], block["profile"]
    return [stage, s["n"], s["num_clusters"], s["num_non_singleton"], s["node_coverage"], s["size_min"],
            s["size_median"], s["size_max"], p["counts"]["singleton"], p["num_classified"]] + \
        [p["percentages"][c] for c in PROFILE_CLASSES]


_STATS_HEADER = ["stage", "n", "num_clusters", "num_non_singleton", "node_coverage", "size_min",
                 "size_median", "size_max", "num_singletons", "num_classified"] + \
    [f"pct_{c}" for c in PROFILE_CLASSES]


def summary_rows(report: dict) -> list[list]:
    cmd = report["command"]
    if cmd == "stats":
        return [_STATS_HEADER, _stats_row("input", report["result"])]
    if cmd == "treat":
        r = report["result"]
        return [_STATS_HEADER, _stats_row("before", r["before"]), _stats_row(f"after_{r['treatment']['mode']}", r["after"])]
    if cmd == "compare":
        rows = [["pair", "nmi", "ari", "ami"]]
        for name, scores in report["result"]["scores"].items():
            rows.append([name, scores["nmi"], scores["ari"], scores["ami"]])
        return rows
    if cmd == "dl":
        r = report["result"]
        if "rows" in r:
            return [["quantity", "untreated", "treated", "ratio", "preferred"]] + \
                [[x["quantity"], x["untreated"], x["treated"], x["ratio"], x["preferred"]] for x in r["rows"]]
        return [["quantity", "value"]] + [[k, r[k]] for k in
                                          ("term_A", "term_K", "term_B", "term_E", "total", "total_without_term_E")]
    if cmd == "fetch":
        r = report["result"]
        keys = ["dataset", "n", "E", "raw_pairs", "self_loops_removed", "duplicates_removed", "sha256", "edges_path"]
        return [keys, [r[k] for k in keys]]
    raise ValueError(f"no summary defined for command {cmd!r}")


def summary_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in summary_rows(report):
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


def write_text_atomic(path, text: str) -> None:
    """Write via a temporary file and rename; ``-`` and non-regular files are written directly."""
    if str(path) == "-":
        sys.stdout.write(text)
        return
    path = Path(path)
    if path.exists() and not path.is_file():
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.tmp-{os.getpid()}")
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)
