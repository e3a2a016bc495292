"""Structural role embeddings.

GraphWave: heat-kernel wavelets from the graph Laplacian, summarized per
node by the empirical characteristic function of its wavelet coefficients
at evenly spaced evaluation points. Deterministic, seed-free; processed
per connected component (the heat kernel is block-diagonal), with the
characteristic function normalized by component size.

RolX: recursive structural features (ReFeX) factorized by non-negative
matrix factorization with multiplicative updates; a node's embedding is
its L1-normalized loading row.

Struc2Vec/Role2Vec and any other external method enter the pipeline only
through ``import_embedding``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ive

from .seeds import derive_seed

DEFAULT_SCALES = (0.5, 1.5)
DEFAULT_SAMPLE_POINTS = 32
DEFAULT_T_MAX = 100.0
DEFAULT_ROLX_RANK = 16


class EmbeddingError(ValueError):
    """Invalid embedding parameters or input files."""


@dataclass
class EmbeddingMatrix:
    """N x d real node vectors tagged with the producing method."""

    vectors: np.ndarray
    method_tag: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim != 2:
            raise EmbeddingError("embedding must be a 2-d matrix")
        if not np.isfinite(self.vectors).all():
            raise EmbeddingError("embedding contains NaN or Inf")

    @property
    def d(self) -> int:
        return self.vectors.shape[1]

    @property
    def node_count(self) -> int:
        return self.vectors.shape[0]


@dataclass
class RefexFeatureMatrix:
    """Recursive structural features: base + neighbor aggregates."""

    features: np.ndarray
    generation: int
    column_names: list


def _component_laplacian(graph, comp):
    k = len(comp)
    pos = {v: i for i, v in enumerate(comp)}
    lap = np.zeros((k, k), dtype=np.float64)
    for v in comp:
        i = pos[v]
        lap[i, i] = graph.degree(v)
        for w in graph.adjacency[v]:
            lap[i, pos[w]] = -1.0
    return lap


def _heat_kernel_exact(lap, scale):
    eigval, eigvec = np.linalg.eigh(lap)
    return (eigvec * np.exp(-scale * eigval)) @ eigvec.T


def _heat_kernel_chebyshev(lap, scale, order):
    """Chebyshev expansion of exp(-s*x) on [0, lam_max].

    lam_max uses the Gershgorin bound 2*max_degree: exact enough for the
    expansion interval and fully deterministic.
    """
    k = lap.shape[0]
    lam_max = max(2.0 * float(lap.diagonal().max()), 1e-9)
    a = scale * lam_max / 2.0
    # exp(-a(y+1)) = sum_k c_k T_k(y), c_k = (2-delta_k0) (-1)^k e^{-a} I_k(a)
    coeff = np.array(
        [(2.0 if j else 1.0) * (-1.0) ** j * ive(j, a) for j in range(order + 1)]
    )
    shifted = (2.0 / lam_max) * lap - np.eye(k)
    t_prev = np.eye(k)
    t_cur = shifted.copy()
    acc = coeff[0] * t_prev + coeff[1] * t_cur
    for j in range(2, order + 1):
        t_next = 2.0 * shifted @ t_cur - t_prev
        acc += coeff[j] * t_next
        t_prev, t_cur = t_cur, t_next
    return acc


def graphwave_embed(
    graph,
    scales=DEFAULT_SCALES,
    sample_points: int = DEFAULT_SAMPLE_POINTS,
    d: int | None = None,
    t_max: float = DEFAULT_T_MAX,
    kernel: str = "exact",
    chebyshev_order: int = 30,
) -> EmbeddingMatrix:
    """Heat-wavelet characteristic-function embedding.

    The width is 2 * len(scales) * sample_points (real and imaginary part
    per evaluation point); passing ``d`` asserts that identity. With the
    defaults (2 scales, 32 points) the width is 128.
    """
    scales = tuple(float(s) for s in scales)
    if not scales or any(s <= 0 for s in scales):
        raise EmbeddingError("scales must be positive reals")
    width = 2 * len(scales) * sample_points
    if d is not None and d != width:
        raise EmbeddingError(
            f"d={d} inconsistent with 2 x {len(scales)} scales x "
            f"{sample_points} sample points = {width}"
        )
    if kernel not in ("exact", "chebyshev"):
        raise EmbeddingError(f"unknown kernel {kernel!r}")

    ts = np.linspace(0.0, t_max, sample_points)
    out = np.zeros((graph.node_count, width), dtype=np.float64)
    for comp in graph.components():
        k = len(comp)
        lap = _component_laplacian(graph, comp)
        idx = np.array(comp)
        col = 0
        for s in scales:
            if kernel == "exact":
                psi = _heat_kernel_exact(lap, s)
            else:
                psi = _heat_kernel_chebyshev(lap, s, chebyshev_order)
            for t in ts:
                phase = np.exp(1j * t * psi)
                char = phase.mean(axis=0)  # over coefficient rows, 1/|C| norm
                out[idx, col] = char.real
                out[idx, col + 1] = char.imag
                col += 2
    return EmbeddingMatrix(
        vectors=out,
        method_tag="graphwave",
        meta={
            "scales": scales,
            "sample_points": sample_points,
            "t_max": t_max,
            "kernel": kernel,
        },
    )


def _pearson(u, v):
    su, sv = u.std(), v.std()
    if su == 0.0 and sv == 0.0:
        return 1.0  # two constants are duplicates
    if su == 0.0 or sv == 0.0:
        return 0.0
    return float(np.corrcoef(u, v)[0, 1])


def refex_features(
    graph, depth: int = 2, dedup_threshold: float = 0.99
) -> RefexFeatureMatrix:
    """Base structural features plus recursive neighbor aggregates.

    Base: degree, egonet internal edge count, egonet boundary edge count.
    Each generation appends the mean and sum over neighbors of the previous
    generation's retained columns, pruning near-duplicates by absolute
    Pearson correlation.
    """
    n = graph.node_count
    adjacency = graph.adjacency
    masks = []
    for v in range(n):
        m = 1 << v
        for w in adjacency[v]:
            m |= 1 << w
        masks.append(m)

    deg = graph.degrees().astype(np.float64)
    internal = np.zeros(n)
    boundary = np.zeros(n)
    for v in range(n):
        ego = masks[v]
        inside = 0
        outside = 0
        members = [v] + list(adjacency[v])
        for u in members:
            du = len(adjacency[u])
            k = bin(masks[u] & ego).count("1") - 1  # drop u itself
            inside += k
            outside += du - k
        internal[v] = inside / 2
        boundary[v] = outside

    cols = [deg, internal, boundary]
    names = ["degree", "ego_internal", "ego_boundary"]
    prev_gen = list(range(len(cols)))
    reached = 0

    for gen in range(1, depth + 1):
        new_cols = []
        new_names = []
        for ci in prev_gen:
            base = cols[ci]
            agg_sum = np.zeros(n)
            for v in range(n):
                if adjacency[v]:
                    agg_sum[v] = sum(base[w] for w in adjacency[v])
            with np.errstate(invalid="ignore"):
                agg_mean = np.where(deg > 0, agg_sum / np.maximum(deg, 1), 0.0)
            new_cols.append(agg_mean)
            new_names.append(f"mean_{names[ci]}")
            new_cols.append(agg_sum)
            new_names.append(f"sum_{names[ci]}")
        kept = []
        for col, name in zip(new_cols, new_names):
            if any(abs(_pearson(col, cols[j])) > dedup_threshold for j in range(len(cols))):
                continue
            cols.append(col)
            names.append(name)
            kept.append(len(cols) - 1)
        if not kept:
            break
        prev_gen = kept
        reached = gen

    return RefexFeatureMatrix(
        features=np.column_stack(cols), generation=reached, column_names=names
    )


def _nmf_multiplicative(F, rank, seed, max_iter, tol):
    """F ~ G @ H with non-negative factors; returns (G, H, errors, converged).

    Loading rows are initialized uniform(0, 1] from a seed derived from the
    row's feature content, so relabeling nodes permutes the factorization
    exactly and structurally identical nodes share an initialization.
    """
    n, f = F.shape
    eps = 1e-12
    G = np.empty((n, rank))
    for i in range(n):
        # quantize before hashing: neighbor-sum rounding noise must not
        # change the seed under node relabeling
        key = np.round(F[i], 9).tobytes().hex()
        row_rng = np.random.default_rng(derive_seed(seed, "loading-row", key))
        G[i] = 1.0 - row_rng.random(rank)
    H = 1.0 - np.random.default_rng(derive_seed(seed, "basis")).random((rank, f))
    errors = [float(np.linalg.norm(F - G @ H))]
    converged = False
    for _ in range(max_iter):
        H *= (G.T @ F) / (G.T @ G @ H + eps)
        G *= (F @ H.T) / (G @ H @ H.T + eps)
        err = float(np.linalg.norm(F - G @ H))
        errors.append(err)
        prev = errors[-2]
        if prev > 0 and (prev - err) / prev < tol:
            converged = True
            break
    return G, H, errors, converged


def rolx_embed(
    graph,
    rank: int = DEFAULT_ROLX_RANK,
    refex_depth: int = 2,
    seed: int = 0,
    max_iter: int = 500,
    tol: float = 1e-6,
) -> EmbeddingMatrix:
    """ReFeX features factorized by seeded multiplicative-update NMF.

    Rows of the returned matrix are the loading rows of G normalized to
    unit L1 (all-zero rows stay zero). Non-convergence after ``max_iter``
    returns the best iterate with ``meta['converged'] = False``.
    """
    if rank < 2:
        raise EmbeddingError("rank must be >= 2")
    refex = refex_features(graph, depth=refex_depth)
    F = refex.features
    if rank > F.shape[1]:
        raise EmbeddingError(
            f"rank {rank} exceeds the {F.shape[1]} retained ReFeX features"
        )
    G, H, errors, converged = _nmf_multiplicative(F, rank, seed, max_iter, tol)
    row_sums = G.sum(axis=1, keepdims=True)
    vectors = np.divide(G, row_sums, out=np.zeros_like(G), where=row_sums > 0)
    return EmbeddingMatrix(
        vectors=vectors,
        method_tag="rolx",
        meta={
            "rank": rank,
            "refex_depth": refex_depth,
            "refex_generation": refex.generation,
            "seed": seed,
            "nmf_errors": errors,
            "converged": converged,
            "factors": (G, H),
        },
    )


def embedding_to_csv(embedding: EmbeddingMatrix, table, path) -> None:
    if embedding.node_count != len(table):
        raise EmbeddingError("embedding and node table are misaligned")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# method={embedding.method_tag}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id"] + [f"e{i}" for i in range(embedding.d)])
        for i, ext in enumerate(table.external_ids):
            writer.writerow([ext] + [repr(float(v)) for v in embedding.vectors[i]])


def import_embedding(path, table, method_tag: str | None = None) -> EmbeddingMatrix:
    """Load an external embedding CSV and align rows to the node table.

    Expected layout: optional ``# method=<tag>`` comment, then a header
    ``id,e0,...,e{d-1}``. Every graph node must be present.
    """
    tag = method_tag
    rows = {}
    d = None
    with open(path, "r", encoding="utf-8", newline="") as fh:
        header = None
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("method=") and tag is None:
                    tag = body.split("=", 1)[1].strip()
                continue
            cells = next(csv.reader([line]))
            if header is None:
                header = cells
                if not header or header[0] != "id":
                    raise EmbeddingError(f"{path}: first column must be 'id'")
                d = len(header) - 1
                if d < 1:
                    raise EmbeddingError(f"{path}: no embedding columns")
                continue
            if len(cells) != d + 1:
                raise EmbeddingError(
                    f"{path}:{lineno}: expected {d + 1} cells, got {len(cells)}"
                )
            try:
                vec = [float(c) for c in cells[1:]]
            except ValueError as exc:
                raise EmbeddingError(f"{path}:{lineno}: non-numeric cell ({exc})") from None
            rows[cells[0]] = vec
    if header is None:
        raise EmbeddingError(f"{path}: empty embedding file")

    missing = [x for x in table.external_ids if x not in rows]
    if missing:
        raise EmbeddingError(f"{path}: missing embeddings for ids {missing[:10]}")
    vectors = np.array([rows[x] for x in table.external_ids], dtype=np.float64)
    if tag is None:
        import os

        tag = os.path.splitext(os.path.basename(str(path)))[0]
    return EmbeddingMatrix(vectors=vectors, method_tag=tag)
