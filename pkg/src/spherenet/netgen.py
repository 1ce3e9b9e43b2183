"""Weighted nets on the sphere from words in a rotation alphabet.

A net is the image of a base point under all words of a fixed length over
the generators and their inverses, either fully enumerated (multiplicities
count coinciding words) or sampled uniformly when the word tree is too
large.  Words are deliberately not freely reduced: the word measure is
uniform over all (2k)^l words, reducible ones included, and multiplicities
preserve that measure exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.spatial import cKDTree

from .errors import CapacityError, DimensionError
from .geometry import (
    GeneratorSet,
    Rotation,
    UnitVector,
    compose,
    identity_rotation,
    inverse,
)

DEFAULT_DEDUPE_TOL = 1e-9
DEFAULT_LEAF_CAP = 10_000_000


@dataclass(frozen=True)
class Word:
    """Letters are signed 1-based generator indices; -i means the inverse of i."""

    letters: tuple

    def __post_init__(self):
        letters = tuple(int(i) for i in self.letters)
        if any(i == 0 for i in letters):
            raise ValueError("letter indices are 1-based and nonzero")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)


@dataclass(frozen=True)
class SphericalNet:
    """Distinct unit points with positive multiplicities and provenance metadata."""

    dim: int
    points: np.ndarray
    multiplicities: np.ndarray
    meta: dict

    def __post_init__(self):
        points = np.array(self.points, dtype=float)
        mult = np.array(self.multiplicities, dtype=np.int64)
        if points.ndim != 2 or points.shape[1] != self.dim + 1:
            raise DimensionError("points must be an (N, dim+1) array")
        if points.shape[0] < 1:
            raise ValueError("a net needs at least one point")
        if mult.shape != (points.shape[0],):
            raise ValueError("multiplicities must match the point count")
        if np.any(mult < 1):
            raise ValueError("multiplicities must be positive")
        norms = np.linalg.norm(points, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-10:
            raise ValueError("net points must be unit-norm within 1e-10")
        meta = dict(self.meta)
        mode = meta.get("mode")
        if mode not in ("full", "sampled"):
            raise ValueError("meta['mode'] must be 'full' or 'sampled'")
        if mode == "full":
            expected = (2 * int(meta["k"])) ** int(meta["l"])
            if int(mult.sum()) != expected:
                raise ValueError(
                    f"full-mode weight {int(mult.sum())} != (2k)^l = {expected}")
        points.setflags(write=False)
        mult.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "multiplicities", mult)
        object.__setattr__(self, "meta", meta)

    @property
    def distinct_count(self) -> int:
        return self.points.shape[0]

    @property
    def total_weight(self) -> int:
        return int(self.multiplicities.sum())


def _union_find_roots(count, pairs):
    parent = np.arange(count)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            # merge into the earlier representative to keep first-seen order
            lo, hi = (ra, rb) if ra < rb else (rb, ra)
            parent[hi] = lo
    return np.array([find(i) for i in range(count)])


def dedupe_points(points, multiplicities, tol=DEFAULT_DEDUPE_TOL):
    """Collapse points pairwise closer than tol, accumulating multiplicity.

    Representatives are first-seen points; total multiplicity is conserved.
    A quantized-grid pass collapses near-exact duplicates cheaply, then
    representatives within tol of each other are merged until none remain.
    """
    if tol <= 0.0:
        raise ValueError("dedupe tolerance must be positive")
    pts = np.ascontiguousarray(points, dtype=float)
    mult = np.asarray(multiplicities, dtype=np.int64)
    if pts.ndim != 2 or mult.shape != (pts.shape[0],):
        raise ValueError("points must be (N, d) with matching multiplicities")
    if pts.shape[0] == 0:
        return pts, mult

    # cell edge tol/sqrt(d) keeps every in-cell pair within tol
    cell = tol / math.sqrt(pts.shape[1])
    keys = np.round(pts / cell).astype(np.int64)
    _, first_idx, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    order = np.argsort(first_idx, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    groups = rank[inverse.ravel()]
    reps = pts[first_idx[order]]
    sums = np.bincount(groups, weights=mult.astype(float), minlength=order.size)
    agg = np.rint(sums).astype(np.int64)

    while True:
        tree = cKDTree(reps)
        pairs = tree.query_pairs(r=tol, output_type="ndarray")
        if len(pairs) == 0:
            break
        roots = _union_find_roots(len(reps), pairs)
        keep = np.flatnonzero(roots == np.arange(len(reps)))
        merged = np.bincount(
            np.searchsorted(keep, roots), weights=agg.astype(float), minlength=keep.size)
        reps = reps[keep]
        agg = np.rint(merged).astype(np.int64)
    return reps, agg


def enumerate_net(gens: GeneratorSet, l: int, x0: UnitVector,
                  cap: int = DEFAULT_LEAF_CAP,
                  dedupe_tol: float = DEFAULT_DEDUPE_TOL) -> SphericalNet:
    """Image of x0 under every length-l word, with exact word multiplicities.

    The word tree is expanded level by level with one matrix-vector product
    per node and points renormalized at each level; leaves appear in
    depth-first order (first letter most significant, letters ordered
    +1..+k, -1..-k).  The point of word (s_1, ..., s_l) is s_l(...(s_1 x0)).
    """
    if l < 0:
        raise ValueError("word length must be nonnegative")
    if cap < 1:
        raise ValueError("cap must be positive")
    if gens.dim != x0.dim:
        raise DimensionError(f"generators act on S^{gens.dim} but x0 lies on S^{x0.dim}")
    total = (2 * gens.k) ** l
    if total > cap:
        log2_words = l * math.log2(2 * gens.k)
        raise CapacityError(
            f"full enumeration needs (2k)^l = 2^{log2_words:.1f} leaves, over the cap "
            f"of {cap}; use sampled mode (sample_words_net / --sample)")
    alpha = gens.alphabet()
    pts = x0.coords[None, :].copy()
    for _ in range(l):
        pts = np.einsum("kab,pb->pka", alpha, pts).reshape(-1, alpha.shape[1])
        pts /= np.linalg.norm(pts, axis=1)[:, None]
    mult = np.ones(pts.shape[0], dtype=np.int64)
    pts, mult = dedupe_points(pts, mult, dedupe_tol)
    meta = {"k": gens.k, "l": l, "seed": gens.seed, "x0": tuple(x0.coords),
            "mode": "full", "dedupe_tolerance": dedupe_tol}
    return SphericalNet(dim=gens.dim, points=pts, multiplicities=mult, meta=meta)


def sample_words_net(gens: GeneratorSet, l: int, x0: UnitVector, m: int, rng,
                     dedupe_tol: float = DEFAULT_DEDUPE_TOL) -> SphericalNet:
    """Unbiased sampled net: m iid uniform words of length l, multiplicity 1 each.

    The multiplicity-weighted mean of any bounded function is an unbiased
    estimator of its mean under full enumeration.
    """
    if m < 1:
        raise ValueError("sample count must be at least 1")
    if l < 0:
        raise ValueError("word length must be nonnegative")
    if gens.dim != x0.dim:
        raise DimensionError(f"generators act on S^{gens.dim} but x0 lies on S^{x0.dim}")
    if not isinstance(rng, np.random.Generator):
        raise TypeError("rng must be a numpy.random.Generator")
    alpha = gens.alphabet()
    slots = rng.integers(0, 2 * gens.k, size=(m, l)) if l > 0 else np.empty((m, 0), dtype=int)
    pts = np.tile(x0.coords, (m, 1))
    for j in range(l):
        col = slots[:, j]
        for a in range(2 * gens.k):
            mask = col == a
            if mask.any():
                pts[mask] = pts[mask] @ alpha[a].T
        pts /= np.linalg.norm(pts, axis=1)[:, None]
    mult = np.ones(m, dtype=np.int64)
    pts, mult = dedupe_points(pts, mult, dedupe_tol)
    meta = {"k": gens.k, "l": l, "seed": gens.seed, "x0": tuple(x0.coords),
            "mode": "sampled", "samples": m, "dedupe_tolerance": dedupe_tol}
    return SphericalNet(dim=gens.dim, points=pts, multiplicities=mult, meta=meta)


def word_to_rotation(word: Word, gens: GeneratorSet) -> Rotation:
    """Product of the word's letters in enumeration order: s_l . ... . s_1."""
    rot = identity_rotation(gens.dim)
    for idx in word.letters:
        if not 1 <= abs(idx) <= gens.k:
            raise IndexError(f"letter {idx} outside the alphabet of {gens.k} generators")
        g = gens.generators[abs(idx) - 1]
        if idx < 0:
            g = inverse(g)
        rot = compose(g, rot)
    return rot
