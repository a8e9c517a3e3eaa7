"""Temporal edge-list ingestion and embedding/report serialization.

The .tel format is plain text, one edge per row: ``src dst t [weight]`` with
whitespace or comma delimiters, ``t`` a 0-based snapshot index and ``weight``
a positive integer defaulting to 1. Repeated rows accumulate (multigraph);
snapshots are symmetrized entrywise by max(w_ij, w_ji). Embeddings serialize
to CSV/JSON with full float precision and round-trip losslessly.
"""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .experiments import ExperimentReport
from .graph import DynamicEmbedding, DynamicNetwork

__all__ = [
    "load_edge_list",
    "write_edge_list",
    "write_embedding",
    "read_embedding",
    "write_report",
]

logger = logging.getLogger(__name__)


def _split_row(line: str, delimiter: str | None) -> list[str]:
    if delimiter is not None and not delimiter.strip():
        delimiter = None  # explicit whitespace: split on any run of it
    if delimiter is None and "," in line:
        delimiter = ","
    if delimiter == ",":
        return [f.strip() for f in line.split(",")]
    return line.split(delimiter)


def load_edge_list(path, delimiter: str | None = None) -> DynamicNetwork:
    """Parse a temporal edge list into a dynamic network.

    Node ids map to dense indices in first-seen order (the mapping is kept as
    node labels). Self-loops are dropped with a warning. Missing intermediate
    times yield empty snapshots; T is the largest time index plus one.
    """
    path = Path(path)
    ids: dict[str, int] = {}
    rows: list[tuple[int, int, int, int]] = []
    with path.open() as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = _split_row(line, delimiter)
            if len(fields) not in (3, 4):
                raise ValueError(
                    f"{path}:{lineno}: expected 'src dst t [weight]', got {line!r}"
                )
            src, dst = fields[0], fields[1]
            try:
                t = int(fields[2])
                weight = int(fields[3]) if len(fields) == 4 else 1
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: malformed row {line!r}") from exc
            if t < 0:
                raise ValueError(f"{path}:{lineno}: negative time index {t}")
            if weight < 1:
                raise ValueError(f"{path}:{lineno}: weight must be positive")
            if src == dst:
                logger.warning("%s:%d: dropping self-loop on %r", path, lineno, src)
                continue
            for node in (src, dst):
                if node not in ids:
                    ids[node] = len(ids)
            rows.append((ids[src], ids[dst], t, weight))
    if not rows:
        raise ValueError(f"{path}: no edges found")
    n = len(ids)
    T = max(r[2] for r in rows) + 1
    i, j, t, w = (np.array(col) for col in zip(*rows))
    snapshots = []
    for snap in range(T):
        mask = t == snap
        directed = sp.coo_matrix(
            (w[mask].astype(np.float64), (i[mask], j[mask])), shape=(n, n)
        ).tocsr()
        snapshots.append(directed.maximum(directed.T))
    labels = list(ids)
    return DynamicNetwork(snapshots, node_labels=labels)


def write_edge_list(network: DynamicNetwork, path, delimiter: str = " ") -> None:
    """Write one row per undirected edge: ``src dst t weight``."""
    labels = network.node_labels or [str(k) for k in range(network.n)]
    path = Path(path)
    with path.open("w") as fh:
        for t, snap in enumerate(network.snapshots):
            coo = sp.triu(snap, k=1).tocoo()
            for i, j, w in zip(coo.row, coo.col, coo.data):
                fh.write(
                    delimiter.join(
                        (labels[i], labels[j], str(t), str(int(round(w))))
                    )
                    + "\n"
                )


def _embedding_rows(embedding: DynamicEmbedding):
    for i in range(embedding.anchor.shape[0]):
        yield ("anchor", "", i, embedding.anchor[i])
    for t in range(embedding.T):
        block = embedding.time_point(t)
        for i in range(embedding.n):
            yield ("dynamic", t, i, block[i])


def write_embedding(embedding: DynamicEmbedding, path, fmt: str = "csv") -> None:
    """Serialize an embedding to CSV or JSON at full float precision.

    CSV columns: block (anchor|dynamic), time (blank for anchor rows), node,
    dim_0..dim_{d-1}. JSON mirrors the same rows plus the shape header.
    """
    path = Path(path)
    if fmt == "csv":
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["block", "time", "node"] + [f"dim_{k}" for k in range(embedding.d)]
            )
            for block, t, i, vec in _embedding_rows(embedding):
                writer.writerow([block, t, i] + [repr(float(x)) for x in vec])
    elif fmt == "json":
        payload = {
            "n": embedding.n,
            "T": embedding.T,
            "d": embedding.d,
            "rows": [
                {
                    "block": block,
                    "time": None if block == "anchor" else t,
                    "node": i,
                    "vector": [float(x) for x in vec],
                }
                for block, t, i, vec in _embedding_rows(embedding)
            ],
        }
        path.write_text(json.dumps(payload))
    else:
        raise ValueError(f"unknown format {fmt!r}; expected 'csv' or 'json'")


def read_embedding(path, fmt: str | None = None) -> DynamicEmbedding:
    """Read an embedding written by write_embedding (format inferred from suffix)."""
    path = Path(path)
    if fmt is None:
        fmt = "json" if path.suffix.lower() == ".json" else "csv"
    anchor_rows: dict[int, list[float]] = {}
    dynamic_rows: dict[tuple[int, int], list[float]] = {}
    if fmt == "csv":
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            d = len(header) - 3
            for row in reader:
                vec = [float(x) for x in row[3 : 3 + d]]
                if row[0] == "anchor":
                    anchor_rows[int(row[2])] = vec
                else:
                    dynamic_rows[(int(row[1]), int(row[2]))] = vec
    else:
        payload = json.loads(path.read_text())
        d = payload["d"]
        for row in payload["rows"]:
            if row["block"] == "anchor":
                anchor_rows[row["node"]] = row["vector"]
            else:
                dynamic_rows[(row["time"], row["node"])] = row["vector"]
    if not dynamic_rows:
        raise ValueError(f"{path}: no dynamic rows")
    T = max(t for t, _ in dynamic_rows) + 1
    n = max(i for _, i in dynamic_rows) + 1
    if len(dynamic_rows) != n * T:
        raise ValueError(f"{path}: dynamic block is not a full n x T grid")
    dynamic = np.array([dynamic_rows[(t, i)] for t in range(T) for i in range(n)])
    if anchor_rows:
        if len(anchor_rows) != n:
            raise ValueError(f"{path}: anchor block must have 0 or n rows")
        anchor = np.array([anchor_rows[i] for i in range(n)])
    else:
        anchor = np.zeros((0, d))
    return DynamicEmbedding(anchor=anchor, dynamic=dynamic, n=n, T=T)


def write_report(report: ExperimentReport, path) -> None:
    """Serialize an experiment report (sorted p-values included) as JSON."""
    Path(path).write_text(json.dumps(report.to_dict(), indent=2))
