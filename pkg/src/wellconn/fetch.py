"""Download catalogue networks into a content-addressed local cache.

Cache layout under the cache directory::

    blobs/<sha256>            raw downloaded payload
    edges/<sha256>.edgelist   preprocessed edge list (no self-loops or duplicates)
    index.json                dataset name -> payload digest and source URL

Every file is written to a temporary name and renamed into place.
"""
from __future__ import annotations

import hashlib
import io
import json
import logging
import os
import tempfile
import urllib.error
import urllib.request
import zipfile
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import FetchError
from .graph import Graph, write_edge_list

log = logging.getLogger(__name__)

DEFAULT_CATALOGUE_URL = "https://networks.skewed.de"
CACHE_ENV = "WELLCONN_CACHE_DIR"
CATALOGUE_ENV = "WELLCONN_CATALOGUE_URL"


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "wellconn"


def catalogue_url() -> str:
    return os.environ.get(CATALOGUE_ENV, DEFAULT_CATALOGUE_URL).rstrip("/")


def dataset_url(dataset: str, base: str | None = None) -> str:
    """``name`` or ``name/subnet`` -> zipped CSV download URL."""
    base = (base or catalogue_url()).rstrip("/")
    name, _, net = dataset.partition("/")
    if not name or "/" in net:
        raise FetchError(f"bad dataset name {dataset!r}")
    return f"{base}/net/{name}/files/{net or name}.csv.zip"


@dataclass
class FetchResult:
    dataset: str
    url: str
    sha256: str
    edges_path: str
    n: int
    E: int
    raw_pairs: int
    self_loops_removed: int
    duplicates_removed: int
    from_cache: bool


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _edge_text(payload: bytes) -> str:
    if zipfile.is_zipfile(io.BytesIO(payload)):
        with zipfile.ZipFile(io.BytesIO(payload)) as zf:
            names = zf.namelist()
            pick = [x for x in names if Path(x).name == "edges.csv"]
            pick = pick or [x for x in names if x.endswith((".edges", ".edgelist", ".txt", ".tsv", ".csv"))
                            and "node" not in Path(x).name]
            if not pick:
                raise FetchError(f"unsupported archive: no edge list among {names}")
            return zf.read(pick[0]).decode("utf-8")
    try:
        return payload.decode("utf-8")
    except UnicodeDecodeError:
        raise FetchError("unsupported payload: not a zipped or plain-text edge list") from None


def convert_payload(payload: bytes) -> tuple[Graph, dict]:
    """Parse CSV or whitespace edge lines, dropping self-loops and duplicates."""
    index: dict[str, int] = {}
    labels: list[str] = []
    pairs = []
    for lineno, line in enumerate(_edge_text(payload).splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith(("#", "%")):
            continue
        tokens = s.replace(",", " ").split()
        if len(tokens) < 2:
            raise FetchError(f"unsupported payload: line {lineno} is not an edge: {s[:60]!r}")
        ids = []
        for tok in tokens[:2]:
            i = index.get(tok)
            if i is None:
                i = index[tok] = len(labels)
                labels.append(tok)
            ids.append(i)
        pairs.append(ids)
    arr = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    loops = int(np.sum(arr[:, 0] == arr[:, 1]))
    graph = Graph.from_edges(len(labels), arr, labels)
    stats = {"raw_pairs": len(arr), "self_loops_removed": loops,
             "duplicates_removed": len(arr) - loops - graph.num_edges}
    return graph, stats


class Cache:
    def __init__(self, root=None):
        self.root = Path(root) if root is not None else default_cache_dir()

    @property
    def index_path(self) -> Path:
        return self.root / "index.json"

    def index(self) -> dict:
        try:
            return json.loads(self.index_path.read_text())
        except FileNotFoundError:
            return {}

    def blob_path(self, digest: str) -> Path:
        return self.root / "blobs" / digest

    def edges_path(self, digest: str) -> Path:
        return self.root / "edges" / f"{digest}.edgelist"

    def record(self, dataset: str, entry: dict) -> None:
        idx = self.index()
        idx[dataset] = entry
        _atomic_write(self.index_path, json.dumps(idx, indent=2, sort_keys=True).encode())


def _download(url: str, timeout: float) -> bytes:
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            return resp.read()
    except urllib.error.HTTPError as exc:
        if exc.code == 404:
            raise FetchError(f"unknown dataset: catalogue has nothing at {url}") from None
        raise FetchError(f"HTTP {exc.code} fetching {url}") from None
    except urllib.error.URLError as exc:
        if isinstance(exc.reason, FileNotFoundError):
            raise FetchError(f"unknown dataset: catalogue has nothing at {url}") from None
        raise FetchError(f"cannot reach {url}: {exc.reason}") from None
    except OSError as exc:
        raise FetchError(f"download of {url} failed: {exc}") from None


def fetch(dataset: str, cache_dir=None, offline: bool = False, expected_sha256: str | None = None,
          base_url: str | None = None, timeout: float = 300.0) -> FetchResult:
    """Return a preprocessed edge list for ``dataset``, downloading only on a cache miss."""
    cache = Cache(cache_dir)
    url = dataset_url(dataset, base_url)
    entry = cache.index().get(dataset)
    if entry is not None:
        digest = entry["sha256"]
        blob = cache.blob_path(digest)
        try:
            payload = blob.read_bytes()
        except FileNotFoundError:
            payload = None
        if payload is not None:
            if _sha256(payload) != digest:
                raise FetchError(f"checksum mismatch for cached {dataset!r} ({blob})")
            if expected_sha256 and expected_sha256 != digest:
                raise FetchError(f"checksum mismatch for {dataset!r}: cached {digest}, expected {expected_sha256}")
            edges = cache.edges_path(digest)
            if not edges.exists():
                graph, stats = convert_payload(payload)
                _write_edges(edges, graph)
            log.info("cache hit for %s", dataset)
            return FetchResult(dataset, entry.get("url", url), digest, str(edges), entry["n"], entry["E"],
                               entry["raw_pairs"], entry["self_loops_removed"],
                               entry["duplicates_removed"], True)
    if offline:
        raise FetchError(f"dataset {dataset!r} is not cached in {cache.root} (offline mode)")
    log.info("downloading %s", url)
    payload = _download(url, timeout)
    digest = _sha256(payload)
    if expected_sha256 and expected_sha256 != digest:
        raise FetchError(f"checksum mismatch for {dataset!r}: got {digest}, expected {expected_sha256}")
    graph, stats = convert_payload(payload)
    _atomic_write(cache.blob_path(digest), payload)
    edges = cache.edges_path(digest)
    _write_edges(edges, graph)
    cache.record(dataset, {"sha256": digest, "url": url, "n": graph.n, "E": graph.num_edges, **stats})
    return FetchResult(dataset, url, digest, str(edges), graph.n, graph.num_edges,
                       stats["raw_pairs"], stats["self_loops_removed"], stats["duplicates_removed"], False)


def _write_edges(path: Path, graph: Graph) -> None:
    buf = io.StringIO()
    write_edge_list(graph, buf)
    _atomic_write(path, buf.getvalue().encode("utf-8"))


def result_dict(res: FetchResult) -> dict:
    return asdict(res)
