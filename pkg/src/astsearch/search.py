"""Similarity matrices, their fusion, dimensionality reduction, and ranking.

Two retrieval tracks produce query x candidate cosine matrices: the original
track from externally supplied embeddings and the augmented track from
tree-summary embeddings. The tracks are fused either by a weighted matrix
combination or by embedding concatenation.
"""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from astsearch.errors import (
    DimMismatch, IdOrderMismatch, TargetDimTooLarge, UnknownQuery,
)

ORIGINAL = "original"
AUGMENTED = "augmented"
COMBINED = "combined"

# incremented when a zero vector is scored; cosine with a zero vector is 0.0
zero_vector_cosines = 0


@dataclass(frozen=True)
class EmbeddingVector:
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if self.values.ndim != 1:
            raise DimMismatch("embedding vector must be one-dimensional")
        if not np.all(np.isfinite(self.values)):
            raise DimMismatch("embedding vector contains non-finite entries")

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])


@dataclass
class EmbeddingSet:
    """Ordered ids with one embedding row per id."""
    ids: list[str]
    vectors: np.ndarray
    source: str = ORIGINAL

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.ids):
            raise DimMismatch(
                f"vectors shape {self.vectors.shape} does not match {len(self.ids)} ids")
        if len(set(self.ids)) != len(self.ids):
            raise IdOrderMismatch("duplicate ids in embedding set")
        if not np.all(np.isfinite(self.vectors)):
            raise DimMismatch("embedding set contains non-finite entries")

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])


@dataclass
class SimMatrix:
    query_ids: list[str]
    candidate_ids: list[str]
    values: np.ndarray
    kind: str = ORIGINAL

    def row(self, query_id: str) -> np.ndarray:
        try:
            return self.values[self.query_ids.index(query_id)]
        except ValueError:
            raise UnknownQuery(f"query {query_id!r} not in matrix") from None


@dataclass(frozen=True)
class CombineConfig:
    """Convex-combination weight of the augmented matrix (0 = original only)."""
    weight_w: float = 0.1

    def __post_init__(self):
        if not 0.0 <= self.weight_w <= 1.0:
            raise ValueError("weight_w must lie in [0, 1]")


@dataclass
class RankedList:
    query_id: str
    candidates: list[str]
    rank_of: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.rank_of:
            self.rank_of = {c: i + 1 for i, c in enumerate(self.candidates)}


def _as_array(v) -> np.ndarray:
    if isinstance(v, EmbeddingVector):
        return v.values
    return np.asarray(v, dtype=np.float64)


def cosine_similarity(u, v) -> float:
    """Cosine of the angle between two vectors; 0.0 when either is zero.

    The denominator is sqrt(dot(u,u) * dot(v,v)), whose rounding makes
    cosine(v, v) exactly 1.0.
    """
    global zero_vector_cosines
    a, b = _as_array(u), _as_array(v)
    if a.shape != b.shape:
        raise DimMismatch(f"dims {a.shape[0]} vs {b.shape[0]}")
    sa, sb = float(np.dot(a, a)), float(np.dot(b, b))
    if sa == 0.0 or sb == 0.0:
        zero_vector_cosines += 1
        return 0.0
    return float(np.clip(np.dot(a, b) / np.sqrt(sa * sb), -1.0, 1.0))


def build_sim_matrix(queries: EmbeddingSet, candidates: EmbeddingSet,
                     kind: str | None = None) -> SimMatrix:
    """All-pairs cosine similarity; rows follow query order."""
    global zero_vector_cosines
    if queries.dim != candidates.dim:
        raise DimMismatch(f"query dim {queries.dim} != candidate dim {candidates.dim}")
    qs = np.einsum("ij,ij->i", queries.vectors, queries.vectors)
    cs = np.einsum("ij,ij->i", candidates.vectors, candidates.vectors)
    zero_vector_cosines += int(np.sum(qs == 0) * len(candidates.ids)
                               + np.sum(cs == 0) * len(queries.ids))
    denom = np.sqrt(np.outer(qs, cs))
    grams = queries.vectors @ candidates.vectors.T
    values = np.divide(grams, denom, out=np.zeros_like(grams), where=denom != 0)
    values = np.clip(values, -1.0, 1.0)
    if kind is None:
        kind = AUGMENTED if queries.source == AUGMENTED else ORIGINAL
    return SimMatrix(list(queries.ids), list(candidates.ids), values, kind)


def combine(org: SimMatrix, aug: SimMatrix, cfg: CombineConfig) -> SimMatrix:
    """Entry-wise convex combination: original weighted 1-w, augmented weighted w.

    Evaluated as org + w*(aug - org), the form whose rounding keeps every
    entry inside [min(org, aug), max(org, aug)]; the endpoints w=0 and w=1
    reproduce the inputs exactly.
    """
    if org.values.shape != aug.values.shape:
        raise DimMismatch(
            f"matrix shapes {org.values.shape} vs {aug.values.shape}")
    if org.query_ids != aug.query_ids or org.candidate_ids != aug.candidate_ids:
        raise IdOrderMismatch("query/candidate id lists must match exactly")
    w = cfg.weight_w
    if w == 0.0:
        values = org.values.copy()
    elif w == 1.0:
        values = aug.values.copy()
    else:
        values = org.values + w * (aug.values - org.values)
    return SimMatrix(list(org.query_ids), list(org.candidate_ids), values, COMBINED)


def concat_embeddings(org: EmbeddingSet, aug: EmbeddingSet) -> EmbeddingSet:
    """Row-wise concatenation: each item's original vector followed by its
    augmented vector (single-track fusion strategy)."""
    if org.ids != aug.ids:
        raise IdOrderMismatch("embedding sets must carry identical ids in identical order")
    vectors = np.hstack([org.vectors, aug.vectors])
    return EmbeddingSet(list(org.ids), vectors, source=ORIGINAL)


@dataclass
class PcaModel:
    """Mean and principal axes fitted on candidate vectors.

    transform() projects mean-centered data onto the axes and adds the
    projected mean back, so the map is rigid: at full dimension it is a pure
    rotation and cosine rankings are unchanged. reconstruct() inverts it.
    """
    mean: np.ndarray
    components: np.ndarray  # target_dim x dim; rows beyond rank are zero
    explained_variance: np.ndarray
    explained_variance_ratio: np.ndarray

    @property
    def projected_mean(self) -> np.ndarray:
        return self.mean @ self.components.T

    def transform(self, vectors: np.ndarray) -> np.ndarray:
        centered = np.asarray(vectors, dtype=np.float64) - self.mean
        return centered @ self.components.T + self.projected_mean

    def reconstruct(self, reduced: np.ndarray) -> np.ndarray:
        centered = np.asarray(reduced, dtype=np.float64) - self.projected_mean
        return centered @ self.components + self.mean


def fit_pca(vectors: np.ndarray, target_dim: int) -> PcaModel:
    """Principal axes by eigendecomposition of the sample covariance."""
    x = np.asarray(vectors, dtype=np.float64)
    n, dim = x.shape
    if target_dim > dim or target_dim > n:
        raise TargetDimTooLarge(
            f"target_dim {target_dim} exceeds min(dim={dim}, items={n})")
    mean = x.mean(axis=0)
    centered = x - mean
    denom = max(n - 1, 1)
    cov = centered.T @ centered / denom
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.clip(eigvals[order], 0.0, None)
    eigvecs = eigvecs[:, order]
    components = eigvecs[:, :target_dim].T.copy()
    variance = eigvals[:target_dim].copy()
    # zero out directions beyond numerical rank: deterministic, projection-free
    tol = eigvals[0] * 1e-12 if eigvals.size and eigvals[0] > 0 else 0.0
    for i in range(target_dim):
        if variance[i] <= tol:
            components[i] = 0.0
            variance[i] = 0.0
        elif components[i][np.argmax(np.abs(components[i]))] < 0:
            components[i] = -components[i]  # sign convention for determinism
    total = eigvals.sum()
    ratio = variance / total if total > 0 else np.zeros_like(variance)
    return PcaModel(mean, components, variance, ratio)


def pca_reduce(items: EmbeddingSet, target_dim: int,
               model: PcaModel | None = None) -> tuple[EmbeddingSet, PcaModel]:
    """Project an embedding set onto its top principal components.

    Fit on the given set when no model is passed (candidate side); pass the
    returned model to project the query side into the same basis.
    """
    if model is None:
        model = fit_pca(items.vectors, target_dim)
    reduced = model.transform(items.vectors)
    return EmbeddingSet(list(items.ids), reduced, source=items.source), model


def rank(matrix: SimMatrix, query_id: str) -> RankedList:
    """Candidates in descending score order; ties broken by candidate id."""
    scores = matrix.row(query_id)
    order = sorted(range(len(matrix.candidate_ids)),
                   key=lambda j: (-scores[j], matrix.candidate_ids[j]))
    return RankedList(query_id, [matrix.candidate_ids[j] for j in order])


def rank_all(matrix: SimMatrix) -> list[RankedList]:
    return [rank(matrix, q) for q in matrix.query_ids]


# --- file formats ---

def save_embedding_set(path: str | Path, items: EmbeddingSet) -> None:
    """Header "count dim", then one line per id: id followed by the values."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"{len(items.ids)} {items.dim}\n")
        for item_id, row in zip(items.ids, items.vectors):
            f.write(item_id + " " + " ".join(repr(float(v)) for v in row) + "\n")


def load_embedding_set(path: str | Path, source: str = ORIGINAL) -> EmbeddingSet:
    with open(path, encoding="utf-8") as f:
        header = f.readline().split()
        if len(header) != 2:
            raise DimMismatch(f"malformed embedding file header in {path}")
        count, dim = int(header[0]), int(header[1])
        ids, rows = [], []
        for line in f:
            parts = line.split()
            if not parts:
                continue
            if len(parts) != dim + 1:
                raise DimMismatch(f"row for {parts[0]!r} has {len(parts) - 1} values, expected {dim}")
            ids.append(parts[0])
            rows.append([float(v) for v in parts[1:]])
    if len(ids) != count:
        raise DimMismatch(f"expected {count} rows, found {len(ids)}")
    return EmbeddingSet(ids, np.array(rows, dtype=np.float64).reshape(len(ids), dim), source)


def save_sim_matrix(path: str | Path, matrix: SimMatrix) -> None:
    """TSV: header row of candidate ids, then query id + scores per row."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("query_id\t" + "\t".join(matrix.candidate_ids) + "\n")
        for query_id, row in zip(matrix.query_ids, matrix.values):
            f.write(query_id + "\t" + "\t".join(f"{v:.9g}" for v in row) + "\n")


def load_sim_matrix(path: str | Path, kind: str = ORIGINAL) -> SimMatrix:
    with open(path, encoding="utf-8") as f:
        header = f.readline().rstrip("\n").split("\t")
        candidate_ids = header[1:]
        query_ids, rows = [], []
        for line in f:
            parts = line.rstrip("\n").split("\t")
            if len(parts) < 2:
                continue
            query_ids.append(parts[0])
            rows.append([float(v) for v in parts[1:]])
    return SimMatrix(query_ids, candidate_ids,
                     np.array(rows, dtype=np.float64).reshape(len(query_ids), len(candidate_ids)),
                     kind)
