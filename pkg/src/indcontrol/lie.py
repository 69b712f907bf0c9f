"""Lie closures, subspace membership and intersection, ad-saturation, and the
observability space seeded by a product state.

Subspaces are real spans of skew-Hermitian matrices, kept as orthonormal
stacks under the Hilbert-Schmidt inner product. Internally every element is
stored through its ``n*n`` real coordinates in u(n), so rounding noise can
never leave the skew-Hermitian matrices.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _backend
from .errors import ClosureCapError, DimensionMismatch, ValidationError
from .linalg import (
    DEFAULT_TOL,
    BipartiteDims,
    DensityMatrix,
    as_matrix,
    from_skew_coords,
    hs_norm,
    is_skew_hermitian,
    kron,
    skew_coords,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Orthonormal real span of ``n x n`` skew-Hermitian matrices."""

    n: int
    elements: np.ndarray  # (dim, n, n)
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        els = np.asarray(self.elements, dtype=np.complex128).reshape(-1, self.n, self.n)
        els.flags.writeable = False
        object.__setattr__(self, "elements", els)

    @property
    def dim(self) -> int:
        return self.elements.shape[0]

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.elements)

    @cached_property
    def vectors(self) -> np.ndarray:
        """Skew coordinates of the elements, one row each."""
        out = np.zeros((self.dim, self.n * self.n))
        for i, e in enumerate(self.elements):
            out[i] = skew_coords(e)
        return out

    @classmethod
    def from_vectors(cls, rows, n, tol=DEFAULT_TOL, **kw):
        return cls(n, np.array([from_skew_coords(r, n) for r in rows]).reshape(-1, n, n), tol, **kw)

    @classmethod
    def spanned_by(cls, matrices, n=None, tol=DEFAULT_TOL) -> "Subspace":
        """Orthonormal basis of the real span of skew-Hermitian ``matrices``."""
        matrices = [as_matrix(m) for m in matrices]
        if n is None:
            if not matrices:
                raise ValueError("need n for an empty span")
            n = matrices[0].shape[0]
        grow = _Grower(n, n * n, tol)
        for i, m in enumerate(matrices):
            if m.shape[0] != n:
                raise DimensionMismatch(f"matrix {i} has size {m.shape[0]}, expected {n}")
            if not is_skew_hermitian(m, tol):
                raise ValidationError(f"matrix {i} is not skew-Hermitian")
        grow.offer([skew_coords(m) for m in matrices], 0)
        return cls(n, grow.mats[: grow.k].copy(), tol)


@dataclass(frozen=True, eq=False)
class LieBasis(Subspace):
    """Orthonormal basis of a traceless real Lie algebra of skew-Hermitian matrices."""

    closed: bool = False
    depth_reached: int = 0
    dims: BipartiteDims | None = field(default=None)


class _Overflow(Exception):
    pass


class _Grower:
    """Orthonormal basis grown block by block, as coordinates and as matrices.

    Each block of candidates is projected off the current basis and its new
    directions are read off an SVD, keeping singular values above
    ``tol * max(1, largest candidate norm)``. Picking the best-conditioned
    directions of the whole block, rather than normalizing one small
    residual at a time, keeps rounding from compounding with depth.

    With ``traceless`` the unit trace direction is a hidden first row of the
    projection stack, so the basis cannot drift out of su(n).
    """

    def __init__(self, n, capacity, tol, traceless=False):
        self.n = n
        self.tol = tol
        self.capacity = capacity
        self._off = 1 if traceless else 0
        self._q = np.zeros((capacity + self._off, n * n))
        if traceless:
            self._q[0, :n] = 1.0 / np.sqrt(n)
        self.mats = np.zeros((capacity, n, n), dtype=np.complex128)
        self.depth = np.zeros(capacity, dtype=int)
        self.k = 0

    @property
    def q(self):
        return self._q[self._off : self._off + self.k]

    @property
    def full(self):
        return self.k == self.capacity

    def offer(self, cands, depth):
        """Add the new directions of the rows of ``cands``; return their slice."""
        cands = np.array(cands, dtype=float).reshape(-1, self.n * self.n)
        start = self.k
        if not len(cands):
            return slice(start, start)
        scale = max(1.0, float(np.sqrt((cands * cands).sum(axis=1).max())))
        q = self._q[: self._off + self.k]
        for _ in range(2):
            cands -= (cands @ q.T) @ q
        _, sv, vt = np.linalg.svd(cands, full_matrices=False)
        r = int(np.sum(sv > self.tol * scale))
        if not r:
            return slice(start, start)
        if self.k + r > self.capacity:
            raise _Overflow
        new = vt[:r]
        new -= (new @ q.T) @ q
        new, _ = np.linalg.qr(new.T)
        self._q[self._off + start : self._off + start + r] = new.T
        for i in range(r):
            self.mats[start + i] = from_skew_coords(new[:, i], self.n)
        self.depth[start : start + r] = depth
        self.k += r
        return slice(start, self.k)

    def brackets(self, a, b, traceless=False):
        out = np.empty((len(a) * len(b), self.n * self.n))
        _backend.kernels.bracket_coords(
            np.ascontiguousarray(a), np.ascontiguousarray(b), out, traceless
        )
        return out

    def max_depth(self):
        return int(self.depth[: self.k].max(initial=0))


def lie_closure(generators, tol=DEFAULT_TOL, max_dim=None, dims=None) -> LieBasis:
    """Smallest real Lie algebra containing ``generators``.

    Trace components are projected out first. Growth runs level by level:
    the elements found at one level are bracketed with everything found so
    far, and the new directions form the next level. The output is
    deterministic.

    Raises ``ClosureCapError`` if the algebra needs more than ``max_dim``
    elements.
    """
    gens = [as_matrix(g, "generator") for g in generators]
    if not gens:
        raise ValidationError("lie_closure needs at least one generator")
    n = gens[0].shape[0]
    for i, g in enumerate(gens):
        if g.shape[0] != n:
            raise DimensionMismatch(f"generator {i} has size {g.shape[0]}, expected {n}")
        if not is_skew_hermitian(g, tol):
            raise ValidationError(f"generator {i} is not skew-Hermitian")
    if dims is not None and dims.n != n:
        raise DimensionMismatch(f"generators act on C^{n}, dims say {dims.n}")
    full = n * n - 1
    cap = full if max_dim is None else min(int(max_dim), full)

    grow = _Grower(n, cap, tol, traceless=True)
    depth = 0
    try:
        level = grow.offer([skew_coords(g) for g in gens], 0)
        while level.stop > level.start and grow.k < full:
            depth += 1
            cands = grow.brackets(grow.mats[level], grow.mats[: grow.k], traceless=True)
            level = grow.offer(cands, depth)
    except _Overflow:
        raise ClosureCapError(cap, depth) from None

    log.debug("closure: dim %d of %d, depth %d", grow.k, full, grow.max_depth())
    return LieBasis(
        n, grow.mats[: grow.k].copy(), tol, closed=True, depth_reached=grow.max_depth(), dims=dims
    )


def _check_dim(space, x):
    x = as_matrix(x)
    if x.shape[0] != space.n:
        raise DimensionMismatch(f"matrix of size {x.shape[0]} vs subspace ambient {space.n}")
    return x


def residual_norm(space: Subspace, x) -> float:
    """Norm of the part of ``x`` orthogonal to ``space``."""
    x = _check_dim(space, x)
    herm = 0.5 * (x + x.conj().T)
    v = skew_coords(x)
    if space.dim:
        q = space.vectors
        for _ in range(2):
            v = v - q.T @ (q @ v)
    return float(np.sqrt(v @ v + hs_norm(herm) ** 2))


def contains(space: Subspace, x, tol=None) -> bool:
    """Whether ``x`` lies in ``space`` up to ``tol * max(1, |x|)``."""
    tol = space.tol if tol is None else tol
    return residual_norm(space, x) <= tol * max(1.0, hs_norm(x))


def same_span(u: Subspace, w: Subspace, tol=DEFAULT_TOL) -> bool:
    return (
        u.dim == w.dim
        and all(contains(w, e, tol) for e in u)
        and all(contains(u, e, tol) for e in w)
    )


def subspace_intersect(u: Subspace, w: Subspace, tol=DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the intersection of ``u`` and ``w``.

    Principal directions whose cosine is at least ``1 - tol`` are kept.
    """
    if u.n != w.n:
        raise DimensionMismatch(f"ambient sizes differ: {u.n} vs {w.n}")
    if u.dim == 0 or w.dim == 0:
        return Subspace(u.n, np.zeros((0, u.n, u.n)), tol)
    qu, qw = u.vectors, w.vectors
    y, s, zt = np.linalg.svd(qu @ qw.T, full_matrices=False)
    keep = s >= 1.0 - tol
    # average the two representatives of each shared direction
    dirs = 0.5 * (y[:, keep].T @ qu + zt[keep] @ qw)
    q, _ = np.linalg.qr(dirs.T)
    return Subspace.from_vectors(q.T, u.n, tol)


def _saturate(seed, algebra: Subspace, tol):
    n = algebra.n
    grow = _Grower(n, n * n, tol)
    level = grow.offer([skew_coords(seed)], 0)
    alg = np.ascontiguousarray(algebra.elements)
    depth = 0
    while level.stop > level.start and not grow.full and len(alg):
        depth += 1
        level = grow.offer(grow.brackets(alg, grow.mats[level]), depth)
    return Subspace(n, grow.mats[: grow.k].copy(), tol)


def ad_saturate(seed, algebra: Subspace, tol=DEFAULT_TOL) -> Subspace:
    """Smallest ad-invariant subspace containing ``seed`` (ad taken over ``algebra``)."""
    seed = _check_dim(algebra, seed)
    if hs_norm(seed) <= tol:
        raise ValidationError("ad_saturate needs a nonzero seed")
    if not is_skew_hermitian(seed, tol):
        raise ValidationError("seed is not skew-Hermitian")
    return _saturate(seed, algebra, tol)


def observability_space(
    rho_s: DensityMatrix,
    rho_a: DensityMatrix,
    algebra: Subspace,
    dims: BipartiteDims,
    tol=DEFAULT_TOL,
) -> Subspace:
    """ad-closure under ``algebra`` of the line through ``i rho_s (x) rho_a``.

    The identity component of the seed is kept, so the result lives in
    u(n) rather than su(n).
    """
    if rho_s.dim != dims.n_s or rho_a.dim != dims.n_a:
        raise DimensionMismatch("state sizes do not match dims")
    if algebra.n != dims.n:
        raise DimensionMismatch(f"algebra acts on C^{algebra.n}, dims say {dims.n}")
    return _saturate(1j * kron(rho_s.mat, rho_a.mat), algebra, tol)
