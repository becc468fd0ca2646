"""Finite metric spaces, k-median risk, far sets and truncated risks.

A dataset is either a block of Euclidean coordinates or an explicit distance
matrix; both sit behind the same index-addressed interface. Point indices
refer to the original dataset order, which doubles as the fixed tie-breaking
order for every distance comparison in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import ContractError

__all__ = [
    "PointId",
    "CenterSet",
    "Dataset",
    "nearest_center",
    "risk",
    "far_r",
    "truncated_risk",
    "farthest_order",
]

PointId = int

# Upper bound on temporary cells allocated by one chunk of a cross-distance
# computation (8 bytes per cell).
_CHUNK_CELLS = 4_000_000


def as_id_array(ids: Iterable[int]) -> np.ndarray:
    """Normalize an id collection to a sorted, deduplicated int64 array."""
    arr = np.asarray(sorted(set(int(i) for i in ids)), dtype=np.int64)
    if arr.size and arr[0] < 0:
        raise ContractError("point ids must be nonnegative")
    return arr


@dataclass(frozen=True)
class CenterSet:
    """Deduplicated, sorted collection of point ids acting as a clustering."""

    ids: tuple[int, ...]

    @classmethod
    def of(cls, ids: Iterable[int]) -> "CenterSet":
        return cls(tuple(int(i) for i in as_id_array(ids)))

    def __post_init__(self) -> None:
        if list(self.ids) != sorted(set(self.ids)):
            raise ContractError("CenterSet ids must be sorted and deduplicated")
        if self.ids and self.ids[0] < 0:
            raise ContractError("point ids must be nonnegative")

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self) -> Iterator[int]:
        return iter(self.ids)

    def __contains__(self, item: int) -> bool:
        return item in set(self.ids)

    def to_array(self) -> np.ndarray:
        return np.asarray(self.ids, dtype=np.int64)


class Dataset:
    """Ordered finite metric space in coordinate or distance-matrix form.

    Immutable after construction; safe to share across concurrent runs.
    Matrix inputs are validated for symmetry, zero diagonal, nonnegativity
    and the triangle inequality (exhaustively for n <= 200, by sampling at
    least 10^4 triples above that).
    """

    def __init__(self, *, coords: np.ndarray | None = None, matrix: np.ndarray | None = None):
        if (coords is None) == (matrix is None):
            raise ContractError("provide exactly one of coords or matrix")
        if coords is not None:
            coords = np.array(coords, dtype=np.float64, copy=True)
            if coords.ndim != 2 or coords.shape[0] < 1:
                raise ContractError("coords must be a nonempty 2-d array")
            if not np.all(np.isfinite(coords)):
                raise ContractError("coordinates must be finite")
            coords.setflags(write=False)
            self._coords: np.ndarray | None = coords
            self._matrix: np.ndarray | None = None
            self._n = coords.shape[0]
        else:
            matrix = np.array(matrix, dtype=np.float64, copy=True)
            self._validate_matrix(matrix)
            matrix.setflags(write=False)
            self._coords = None
            self._matrix = matrix
            self._n = matrix.shape[0]

    @classmethod
    def from_coords(cls, points) -> "Dataset":
        return cls(coords=np.asarray(points, dtype=np.float64))

    @classmethod
    def from_matrix(cls, matrix) -> "Dataset":
        return cls(matrix=np.asarray(matrix, dtype=np.float64))

    @staticmethod
    def _validate_matrix(m: np.ndarray) -> None:
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ContractError("distance matrix must be square and nonempty")
        if not np.all(np.isfinite(m)):
            raise ContractError("distances must be finite")
        if np.any(m < 0):
            raise ContractError("distances must be nonnegative")
        if np.any(np.diag(m) != 0.0):
            raise ContractError("matrix diagonal must be zero")
        if not np.array_equal(m, m.T):
            raise ContractError("distance matrix must be symmetric")
        n = m.shape[0]
        atol = 1e-9 * float(m.max()) if n > 1 else 0.0
        if n <= 200:
            for j in range(n):
                # d(i,k) <= d(i,j) + d(j,k) for all i,k with this j
                if np.any(m > m[:, j][:, None] + m[j, :][None, :] + atol):
                    raise ContractError("triangle inequality violated")
        else:
            rng = np.random.default_rng(12345)
            triples = rng.integers(0, n, size=(10_000, 3))
            i, j, kk = triples[:, 0], triples[:, 1], triples[:, 2]
            if np.any(m[i, kk] > m[i, j] + m[j, kk] + atol):
                raise ContractError("triangle inequality violated (sampled)")

    @property
    def n(self) -> int:
        return self._n

    @property
    def mode(self) -> str:
        return "euclidean" if self._coords is not None else "matrix"

    @property
    def dim(self) -> int | None:
        return None if self._coords is None else int(self._coords.shape[1])

    @property
    def coords(self) -> np.ndarray | None:
        return self._coords

    @property
    def matrix(self) -> np.ndarray | None:
        return self._matrix

    def _check_ids(self, ids: np.ndarray) -> None:
        if ids.size and (ids.min() < 0 or ids.max() >= self._n):
            raise ContractError("point id out of range for dataset")

    def dist(self, i: int, j: int) -> float:
        """Distance between two points."""
        ids = np.asarray([i, j], dtype=np.int64)
        self._check_ids(ids)
        if self._matrix is not None:
            return float(self._matrix[i, j])
        diff = self._coords[i] - self._coords[j]
        return float(np.sqrt(np.sum(diff * diff)))

    def point_to_ids(self, x: int, ids: np.ndarray) -> np.ndarray:
        """Distances from one point to each id in `ids` (same order)."""
        ids = np.asarray(ids, dtype=np.int64)
        self._check_ids(ids)
        self._check_ids(np.asarray([x], dtype=np.int64))
        if self._matrix is not None:
            return self._matrix[x, ids]
        diff = self._coords[ids] - self._coords[x]
        return np.sqrt(np.sum(diff * diff, axis=1))

    def pairwise(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """Distance block with shape (len(rows), len(cols))."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        self._check_ids(rows)
        self._check_ids(cols)
        if self._matrix is not None:
            return self._matrix[np.ix_(rows, cols)]
        out = np.empty((rows.size, cols.size), dtype=np.float64)
        b = self._coords[cols]
        step = max(1, _CHUNK_CELLS // max(1, cols.size * (self.dim or 1)))
        for lo in range(0, rows.size, step):
            hi = min(rows.size, lo + step)
            diff = self._coords[rows[lo:hi], None, :] - b[None, :, :]
            out[lo:hi] = np.sqrt(np.sum(diff * diff, axis=2))
        return out


def _centers_array(centers: CenterSet, data: Dataset) -> np.ndarray:
    if len(centers) == 0:
        raise ContractError("center set must be nonempty")
    arr = centers.to_array()
    data._check_ids(arr)
    return arr


def _nearest_dists(ids: np.ndarray, centers: CenterSet, data: Dataset) -> np.ndarray:
    """Distance of each id (ascending order) to its nearest center."""
    carr = _centers_array(centers, data)
    if ids.size == 0:
        return np.empty(0, dtype=np.float64)
    return data.pairwise(ids, carr).min(axis=1)


def nearest_center(x: int, centers: CenterSet, data: Dataset) -> tuple[int, float]:
    """Closest center to x; equal distances resolve to the smallest id."""
    carr = _centers_array(centers, data)
    d = data.point_to_ids(x, carr)
    pos = int(np.argmin(d))  # first minimum == smallest id (carr is sorted)
    return int(carr[pos]), float(d[pos])


def risk(points: Iterable[int], centers: CenterSet, data: Dataset) -> float:
    """Sum of nearest-center distances over `points` (empty set -> 0).

    Points are summed in ascending id order, so equal inputs give bitwise
    equal results.
    """
    ids = as_id_array(points)
    _centers_array(centers, data)  # nonempty check even for empty points
    if ids.size == 0:
        return 0.0
    return float(np.sum(_nearest_dists(ids, centers, data)))


def farthest_order(points: Iterable[int], centers: CenterSet, data: Dataset) -> np.ndarray:
    """Ids sorted by distance to the centers, descending; ties by ascending id."""
    ids = as_id_array(points)
    d = _nearest_dists(ids, centers, data)
    order = np.lexsort((ids, -d))
    return ids[order]


def far_r(points: Iterable[int], centers: CenterSet, r: int, data: Dataset) -> set[int]:
    """The r points farthest from the centers; all of S when |S| < r.

    Distance ties are resolved toward smaller ids, so the far set is a
    deterministic function of its inputs.
    """
    if r < 0 or isinstance(r, bool) or int(r) != r:
        raise ContractError("r must be a nonnegative integer")
    ordered = farthest_order(points, centers, data)
    take = min(int(r), ordered.size)
    return set(int(i) for i in ordered[:take])


def truncated_risk(points: Iterable[int], centers: CenterSet, r: int, data: Dataset) -> float:
    """Risk after discounting the r points that incur the most risk."""
    if r < 0 or isinstance(r, bool) or int(r) != r:
        raise ContractError("r must be a nonnegative integer")
    ids = as_id_array(points)
    _centers_array(centers, data)
    if ids.size == 0 or r >= ids.size:
        return 0.0
    d = _nearest_dists(ids, centers, data)
    order = np.lexsort((ids, -d))
    keep = np.ones(ids.size, dtype=bool)
    keep[order[: int(r)]] = False
    return float(np.sum(d[keep]))
