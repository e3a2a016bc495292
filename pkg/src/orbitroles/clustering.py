"""K-means role candidates and orbit-space silhouette validation.

Candidate roles are k-means clusterings of an embedding space; their
validity is judged where interpretation happens, in the graphlet space,
by the silhouette score over log-transformed orbit vectors. The sweep
emits one row per (method, k) for plotting; candidate selection stays
manual.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .seeds import derive_seed


class ClusteringError(ValueError):
    pass


@dataclass
class RoleAssignment:
    """Per-node cluster label in [0, k); a candidate role set."""

    labels: np.ndarray
    k: int
    method_tag: str
    seed: int
    degenerate: bool = False
    k_effective: int = 0
    inertia: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.labels.min(initial=0) < 0 or (
            self.labels.size and self.labels.max() >= self.k
        ):
            raise ClusteringError("labels outside [0, k)")
        if not self.k_effective:
            self.k_effective = int(np.unique(self.labels).size)


def _kmeans_pp_init(X, k, rng):
    n = X.shape[0]
    centroids = np.empty((k, X.shape[1]))
    first = int(rng.integers(0, n))
    centroids[0] = X[first]
    d2 = ((X - centroids[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0:
            idx = int(rng.integers(0, n))
        else:
            r = rng.random() * total
            idx = int(np.searchsorted(np.cumsum(d2), r))
            idx = min(idx, n - 1)
        centroids[j] = X[idx]
        d2 = np.minimum(d2, ((X - centroids[j]) ** 2).sum(axis=1))
    return centroids


def kmeans(
    embedding,
    k: int,
    seed: int = 0,
    max_iter: int = 300,
    tol: float = 1e-6,
) -> RoleAssignment:
    """Lloyd's algorithm with k-means++ init, deterministic per seed.

    Empty clusters are re-seeded to the point currently farthest from its
    centroid; a cluster still empty at convergence marks the run
    degenerate with k_effective < k. The within-cluster sum of squares is
    checked to be non-increasing on every run.
    """
    X = embedding.vectors
    n = X.shape[0]
    if k < 2:
        raise ClusteringError("k must be >= 2")
    if k > n:
        raise ClusteringError(f"k={k} exceeds {n} points")

    rng = np.random.default_rng(seed)
    centroids = _kmeans_pp_init(X, k, rng)
    labels = np.zeros(n, dtype=np.int64)
    wcss_prev = np.inf
    trajectory = []

    for _ in range(max_iter):
        d2 = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        labels = d2.argmin(axis=1)
        point_d2 = d2[np.arange(n), labels]

        wcss = 0.0
        new_centroids = centroids.copy()
        for j in range(k):
            members = labels == j
            if members.any():
                new_centroids[j] = X[members].mean(axis=0)
                wcss += float(((X[members] - new_centroids[j]) ** 2).sum())
            else:
                # re-seed an empty centroid to the point farthest from its
                # current centroid; labels stay as assigned
                far = int(point_d2.argmax())
                new_centroids[j] = X[far]
                point_d2[far] = 0.0
        trajectory.append(wcss)
        if wcss > wcss_prev * (1 + 1e-9) + 1e-12:
            raise AssertionError(
                f"k-means objective increased: {wcss_prev} -> {wcss}"
            )
        move = float(np.abs(new_centroids - centroids).max())
        centroids = new_centroids
        if move < tol:
            break
        wcss_prev = wcss

    counts = np.bincount(labels, minlength=k)
    k_eff = int((counts > 0).sum())
    return RoleAssignment(
        labels=labels,
        k=k,
        method_tag=embedding.method_tag,
        seed=seed,
        degenerate=k_eff < k,
        k_effective=k_eff,
        inertia=trajectory[-1] if trajectory else 0.0,
        meta={"wcss_trajectory": trajectory},
    )


def silhouette_in_orbit_space(
    assignment: RoleAssignment,
    orbit_features,
    sample_cap: int = 20000,
    seed: int = 0,
) -> float:
    """Mean silhouette of the roles measured on log-orbit vectors.

    Exact (all pairwise Euclidean distances) up to ``sample_cap`` nodes;
    beyond that a seeded uniform node sample of that size is scored.
    Singleton clusters contribute 0 by convention. All nodes in one
    cluster is an error.
    """
    X = orbit_features.values
    labels = assignment.labels
    if X.shape[0] != labels.shape[0]:
        raise ClusteringError("assignment and orbit features are misaligned")
    if np.unique(labels).size < 2:
        raise ClusteringError("silhouette needs at least two populated clusters")

    n = X.shape[0]
    if n > sample_cap:
        rng = np.random.default_rng(seed)
        keep = np.sort(rng.choice(n, size=sample_cap, replace=False))
        X = X[keep]
        labels = labels[keep]
        n = sample_cap
        if np.unique(labels).size < 2:
            raise ClusteringError("sampled nodes fall in a single cluster")

    present = np.unique(labels)
    members = {int(c): np.flatnonzero(labels == c) for c in present}
    scores = np.zeros(n)
    chunk = max(1, min(n, 2_000_000 // max(n, 1)))
    for start in range(0, n, chunk):
        stop = min(n, start + chunk)
        block = X[start:stop]
        d = np.sqrt(
            np.maximum(
                (block**2).sum(axis=1)[:, None]
                - 2 * block @ X.T
                + (X**2).sum(axis=1)[None, :],
                0.0,
            )
        )
        for row, v in enumerate(range(start, stop)):
            own = int(labels[v])
            own_idx = members[own]
            if own_idx.size == 1:
                scores[v] = 0.0
                continue
            a = d[row, own_idx].sum() / (own_idx.size - 1)
            b = min(
                d[row, members[other]].mean()
                for other in members
                if other != own
            )
            denom = max(a, b)
            scores[v] = 0.0 if denom == 0 else (b - a) / denom
    return float(scores.mean())


@dataclass
class SilhouetteSweep:
    """Rows of (method_tag, k, silhouette, sampled) for plotting."""

    rows: list

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["method", "k", "silhouette", "sampled"])
            for method, k, score, sampled in self.rows:
                writer.writerow([method, k, repr(float(score)), str(bool(sampled)).lower()])

    def best_k(self, method: str) -> int:
        cand = [(s, k) for m, k, s, _ in self.rows if m == method]
        if not cand:
            raise ClusteringError(f"no sweep rows for method {method!r}")
        return max(cand)[1]


def assignment_seed(seed: int, method_tag: str, k: int) -> int:
    """The per-(method, k) k-means seed used by sweep and pipeline."""
    return derive_seed(seed, "kmeans", method_tag, k)


def roles_to_csv(assignment: RoleAssignment, table, path) -> None:
    if assignment.labels.shape[0] != len(table):
        raise ClusteringError("assignment and node table are misaligned")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(
            f"# method={assignment.method_tag} k={assignment.k} "
            f"seed={assignment.seed} degenerate={str(assignment.degenerate).lower()}\n"
        )
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "role"])
        for i, ext in enumerate(table.external_ids):
            writer.writerow([ext, int(assignment.labels[i])])


def roles_from_csv(path, table=None):
    """Read a roles CSV; returns (RoleAssignment, external ids)."""
    meta = {}
    ids = []
    labels = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        header_seen = False
        for raw in fh:
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                for part in line[1:].split():
                    if "=" in part:
                        key, val = part.split("=", 1)
                        meta[key] = val
                continue
            cells = next(csv.reader([line]))
            if not header_seen:
                if cells[:2] != ["id", "role"]:
                    raise ClusteringError(f"{path}: expected header id,role")
                header_seen = True
                continue
            ids.append(cells[0])
            labels.append(int(cells[1]))
    if not ids:
        raise ClusteringError(f"{path}: no role rows")
    labels = np.array(labels, dtype=np.int64)
    if table is not None:
        index = {x: i for i, x in enumerate(ids)}
        missing = [x for x in table.external_ids if x not in index]
        if missing:
            raise ClusteringError(f"{path}: missing roles for ids {missing[:10]}")
        labels = labels[[index[x] for x in table.external_ids]]
        ids = list(table.external_ids)
    assignment = RoleAssignment(
        labels=labels,
        k=int(meta.get("k", labels.max() + 1)),
        method_tag=meta.get("method", "imported"),
        seed=int(meta.get("seed", 0)),
    )
    return assignment, ids


def sweep(
    embeddings,
    k_range,
    orbit_features,
    seed: int = 0,
    sample_cap: int = 20000,
    threads: int = 1,
) -> SilhouetteSweep:
    """Run k-means plus orbit-space silhouette for each (method, k).

    The (method, k) cells are independent pure computations; with
    ``threads`` > 1 they run on a worker pool and are collected by index,
    so the emitted table is identical regardless of thread count.
    """
    embeddings = list(embeddings)
    if not embeddings:
        raise ClusteringError("no embeddings supplied")
    ks = list(k_range)
    if not ks:
        raise ClusteringError("empty k range")
    sampled = orbit_features.node_count > sample_cap

    def cell(emb, k):
        assignment = kmeans(emb, k, seed=assignment_seed(seed, emb.method_tag, k))
        score = silhouette_in_orbit_space(
            assignment,
            orbit_features,
            sample_cap=sample_cap,
            seed=derive_seed(seed, "silhouette", emb.method_tag, k),
        )
        return (emb.method_tag, k, score, sampled)

    jobs = [(emb, k) for emb in embeddings for k in ks]
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda job: cell(*job), jobs))
    else:
        rows = [cell(*job) for job in jobs]
    return SilhouetteSweep(rows=rows)
