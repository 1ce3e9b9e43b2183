"""Unit vectors on S^n and Haar-random rotations of SO(n+1).

Rotations act on column vectors.  All types are immutable after construction
and safe to share across threads; sampling is a pure function of its
arguments and the generator state, so parallel callers should use
independently seeded generator streams.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

ORTHOGONALITY_TOL = 1e-12
DETERMINANT_TOL = 1e-9
UNIT_NORM_TOL = 1e-12

# Residual above which compose() re-orthonormalizes.  Kept well below the
# Rotation orthogonality invariant so a chained product can never construct
# an invalid matrix.
_REPAIR_RESIDUAL = 1e-13


def _readonly(values, dtype=float):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


def _require_rng(rng):
    if not isinstance(rng, np.random.Generator):
        raise TypeError("rng must be a numpy.random.Generator")
    return rng


@dataclass(frozen=True)
class UnitVector:
    """A point of S^n stored as n+1 coordinates of unit Euclidean norm."""

    coords: np.ndarray

    def __post_init__(self):
        coords = _readonly(self.coords)
        if coords.ndim != 1 or coords.size < 2:
            raise DimensionError("a unit vector needs at least 2 coordinates")
        if abs(float(np.linalg.norm(coords)) - 1.0) > UNIT_NORM_TOL:
            raise ValueError("coordinates are not unit-norm")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return self.coords.size - 1

    def dot(self, other: "UnitVector") -> float:
        return float(self.coords @ other.coords)

    @classmethod
    def normalized(cls, coords) -> "UnitVector":
        """Scale an arbitrary nonzero vector onto the sphere."""
        arr = np.asarray(coords, dtype=float)
        norm = float(np.linalg.norm(arr))
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(arr / norm)

    @classmethod
    def north_pole(cls, n: int) -> "UnitVector":
        """The default base point e_{n+1} = (0, ..., 0, 1)."""
        if n < 1:
            raise DimensionError("sphere dimension must be at least 1")
        coords = np.zeros(n + 1)
        coords[-1] = 1.0
        return cls(coords)


def orthogonality_residual(matrix) -> float:
    matrix = np.asarray(matrix, dtype=float)
    eye = np.eye(matrix.shape[0])
    return float(np.max(np.abs(matrix.T @ matrix - eye)))


@dataclass(frozen=True)
class Rotation:
    """An element of SO(n+1): orthogonal with determinant +1."""

    matrix: np.ndarray

    def __post_init__(self):
        matrix = _readonly(self.matrix)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionError("rotation matrix must be square")
        if matrix.shape[0] < 2:
            raise DimensionError("rotation matrix must be at least 2x2")
        residual = orthogonality_residual(matrix)
        if residual > ORTHOGONALITY_TOL:
            raise ValueError(f"orthogonality residual {residual:.3e} exceeds {ORTHOGONALITY_TOL:.0e}")
        det = float(np.linalg.det(matrix))
        if abs(det - 1.0) > DETERMINANT_TOL:
            raise ValueError(f"determinant {det!r} is not +1 within {DETERMINANT_TOL:.0e}")
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0] - 1


@dataclass(frozen=True)
class GeneratorSet:
    """k rotations sampled from one seed; the word alphabet is these and their inverses."""

    generators: tuple
    seed: int
    dim: int

    def __post_init__(self):
        generators = tuple(self.generators)
        if len(generators) < 1:
            raise ValueError("a generator set needs at least one rotation")
        for g in generators:
            if not isinstance(g, Rotation):
                raise TypeError("generators must be Rotation instances")
            if g.dim != self.dim:
                raise DimensionError("all generators must share the sphere dimension")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def k(self) -> int:
        return len(self.generators)

    def matrices(self) -> np.ndarray:
        """Generator matrices stacked as a (k, n+1, n+1) array."""
        return np.stack([g.matrix for g in self.generators])

    def alphabet(self) -> np.ndarray:
        """Generators followed by their inverses, stacked as (2k, n+1, n+1).

        Index order matches the word-letter convention: slot i-1 holds
        generator +i and slot k+i-1 holds its inverse -i.
        """
        mats = self.matrices()
        return np.concatenate([mats, mats.transpose(0, 2, 1)])


def identity_rotation(n: int) -> Rotation:
    if n < 1:
        raise DimensionError("sphere dimension must be at least 1")
    return Rotation(np.eye(n + 1))


def sample_haar_rotation(n: int, rng) -> Rotation:
    """Draw one rotation from the Haar measure on SO(n+1).

    Fills an (n+1)x(n+1) matrix with iid standard Gaussians and
    orthonormalizes by QR with the triangular factor's diagonal made
    positive, which is Haar on O(n+1); a determinant of -1 is repaired by
    negating the last row, a fixed measure-preserving bijection onto the
    special orthogonal group.
    """
    if n < 1:
        raise DimensionError("sphere dimension must be at least 1")
    _require_rng(rng)
    gauss = rng.standard_normal((n + 1, n + 1))
    q, r = np.linalg.qr(gauss)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    q = q * signs
    if np.linalg.det(q) < 0:
        q[-1, :] = -q[-1, :]
    return Rotation(q)


def sample_generator_set(n: int, k: int, seed: int) -> GeneratorSet:
    """k iid Haar rotations, deterministic given (n, k, seed)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if not 0 <= int(seed) < 2**64:
        raise ValueError("seed must fit in an unsigned 64-bit integer")
    rng = np.random.default_rng(int(seed))
    generators = tuple(sample_haar_rotation(n, rng) for _ in range(k))
    return GeneratorSet(generators=generators, seed=int(seed), dim=n)


def apply(r: Rotation, x: UnitVector) -> UnitVector:
    """Image of x under r, renormalized to suppress drift across long words."""
    if r.dim != x.dim:
        raise DimensionError(f"rotation acts on S^{r.dim} but point lies on S^{x.dim}")
    y = r.matrix @ x.coords
    return UnitVector(y / np.linalg.norm(y))


def inverse(r: Rotation) -> Rotation:
    """Group inverse; for orthogonal matrices this is the transpose."""
    return Rotation(r.matrix.T)


def compose(a: Rotation, b: Rotation) -> Rotation:
    """The rotation a.b (apply b first), re-orthonormalized when drift shows."""
    if a.dim != b.dim:
        raise DimensionError("cannot compose rotations of different dimensions")
    product = a.matrix @ b.matrix
    if orthogonality_residual(product) > _REPAIR_RESIDUAL:
        product = _project_special_orthogonal(product)
    return Rotation(product)


def _project_special_orthogonal(matrix):
    q, r = np.linalg.qr(matrix)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    q = q * signs
    if np.linalg.det(q) < 0:
        q[-1, :] = -q[-1, :]
    return q


def uniform_unit_vectors(n: int, count: int, rng) -> np.ndarray:
    """count iid uniform points on S^n (normalized Gaussian vectors), as rows."""
    if n < 1:
        raise DimensionError("sphere dimension must be at least 1")
    if count < 1:
        raise ValueError("count must be at least 1")
    _require_rng(rng)
    pts = rng.standard_normal((count, n + 1))
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    return pts
