"""Diversity filtering: prune near-duplicate candidates by cosine distance.

Given N embedded candidates and a target count k, the filter repeatedly finds
the closest active pair and discards the member that is more redundant with
respect to everything still active, until k candidates remain.  All
tie-breaks are deterministic so equal inputs always produce equal outputs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ResourceParseError


@dataclass
class EmbeddingMatrix:
    """Row-aligned ids and embedding vectors (N x D, float64)."""

    ids: list[str]
    rows: np.ndarray

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=np.float64)
        if self.rows.ndim != 2:
            raise ValueError("rows must be a 2-D array")
        n, d = self.rows.shape
        if n < 1 or d < 1:
            raise ValueError("embedding matrix must be at least 1x1")
        if len(self.ids) != n:
            raise ValueError(f"{len(self.ids)} ids for {n} rows")
        if len(set(self.ids)) != n:
            raise ValueError("embedding ids must be unique")
        if not np.all(np.isfinite(self.rows)):
            raise ValueError("embedding vectors must be finite")

    def __len__(self) -> int:
        return len(self.ids)


def cosine_distance_matrix(em: EmbeddingMatrix) -> np.ndarray:
    """Pairwise cosine distances with +inf on the diagonal.

    The diagonal sentinel keeps self-pairs out of every argmin scan.  Raises
    ValueError for zero-norm rows, where cosine distance is undefined.
    """
    norms = np.linalg.norm(em.rows, axis=1)
    if np.any(norms == 0.0):
        bad = [em.ids[i] for i in np.nonzero(norms == 0.0)[0]]
        raise ValueError(f"zero-norm embedding rows: {bad}")
    unit = em.rows / norms[:, None]
    sims = np.clip(unit @ unit.T, -1.0, 1.0)
    dist = 1.0 - sims
    # Mirror the upper triangle so the matrix is exactly symmetric.
    dist = np.triu(dist, k=1)
    dist = dist + dist.T
    np.fill_diagonal(dist, math.inf)
    return dist


def _closest_active_pair(dist: np.ndarray, active: list[int]) -> tuple[int, int]:
    best = (math.inf, -1, -1)
    for ai, i in enumerate(active):
        for j in active[ai + 1:]:
            d = dist[i, j]
            if d < best[0]:
                best = (d, i, j)
    return best[1], best[2]


def diversity_filter(em: EmbeddingMatrix, k: int) -> tuple[list[str], float]:
    """Keep the k most mutually distant candidates.

    Each of the N - k iterations finds the minimum-distance active pair
    (ties: smallest (i, j) lexicographically), computes each member's
    redundancy as its summed distance to every other active candidate, and
    removes the member with the smaller sum (ties: the larger index).

    Returns the surviving ids in their original order, plus the minimum
    pairwise distance among survivors (+inf when a single candidate remains,
    since no pair exists to measure).
    """
    n = len(em)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    dist = cosine_distance_matrix(em)
    active = list(range(n))
    for _ in range(n - k):
        i, j = _closest_active_pair(dist, active)
        phi_i = sum(dist[i, v] for v in active if v != i)
        phi_j = sum(dist[j, v] for v in active if v != j)
        drop = i if phi_i < phi_j else j
        active.remove(drop)
    if len(active) == 1:
        d_min = math.inf
    else:
        d_min = min(dist[i, j] for ai, i in enumerate(active)
                    for j in active[ai + 1:])
    return [em.ids[i] for i in active], d_min


def load_embeddings(text: str) -> EmbeddingMatrix:
    """Read JSONL records of the form {"id": ..., "vector": [...]}."""
    ids: list[str] = []
    vectors: list[list[float]] = []
    width: int | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            ids.append(str(obj["id"]))
            vec = [float(x) for x in obj["vector"]]
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ResourceParseError(f"bad embedding record: {exc}", lineno) from None
        if width is None:
            width = len(vec)
        elif len(vec) != width:
            raise ResourceParseError(
                f"vector width {len(vec)} != {width}", lineno)
        vectors.append(vec)
    if not ids:
        raise ResourceParseError("no embedding records found")
    return EmbeddingMatrix(ids=ids, rows=np.array(vectors, dtype=np.float64))


def dump_embeddings(em: EmbeddingMatrix) -> str:
    return "".join(
        json.dumps({"id": i, "vector": row.tolist()}) + "\n"
        for i, row in zip(em.ids, em.rows)
    )
