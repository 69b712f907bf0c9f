"""Dense complex matrix helpers: Hilbert-Schmidt geometry, tensor products,
partial traces and tolerance-aware orthonormalization.

Matrices are plain ``numpy`` complex arrays. Spans are always taken over the
reals, and ``Re tr(a^dagger b)`` is the inner product used for every rank
decision. Tensor products are ordered S (left, slow index) times A (right).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import unitary_group

from . import _backend
from .errors import DimensionMismatch, ValidationError

DEFAULT_TOL = 1e-9

ComplexMatrix = np.ndarray


def as_matrix(a, name="matrix") -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValidationError(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    return m


def _same_dim(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def hs_norm(a) -> float:
    return float(np.linalg.norm(a))


def is_hermitian(a, tol=DEFAULT_TOL) -> bool:
    a = as_matrix(a)
    return hs_norm(a - a.conj().T) <= tol * max(1.0, hs_norm(a))


def is_skew_hermitian(a, tol=DEFAULT_TOL) -> bool:
    a = as_matrix(a)
    return hs_norm(a + a.conj().T) <= tol * max(1.0, hs_norm(a))


def is_traceless(a, tol=DEFAULT_TOL) -> bool:
    a = as_matrix(a)
    return abs(np.trace(a)) <= tol * max(1.0, hs_norm(a))


def is_psd(a, tol=DEFAULT_TOL) -> bool:
    """Hermitian with every eigenvalue at least ``-tol``."""
    a = as_matrix(a)
    if not is_hermitian(a, tol):
        return False
    return bool(np.linalg.eigvalsh(0.5 * (a + a.conj().T)).min() >= -tol)


def commutator(a, b) -> np.ndarray:
    a, b = _same_dim(a, b)
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    a, b = _same_dim(a, b)
    return a @ b + b @ a


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product ``tr(a^dagger b)``."""
    a, b = _same_dim(a, b)
    return complex(np.vdot(a, b))


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def identity(n) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


@dataclass(frozen=True)
class BipartiteDims:
    """Sizes of the target system S and the auxiliary system A."""

    n_s: int
    n_a: int

    def __post_init__(self):
        for name in ("n_s", "n_a"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or v < 2:
                raise ValidationError(f"{name} must be an integer >= 2, got {v!r}")

    @property
    def n(self) -> int:
        return self.n_s * self.n_a

    @property
    def d_s(self) -> int:
        return self.n_s**2 - 1

    @property
    def d_a(self) -> int:
        return self.n_a**2 - 1


def _check_joint(rho, dims):
    rho = as_matrix(rho)
    if rho.shape[0] != dims.n:
        raise DimensionMismatch(
            f"matrix of size {rho.shape[0]} does not match n_s*n_a = {dims.n}"
        )
    return rho.reshape(dims.n_s, dims.n_a, dims.n_s, dims.n_a)


def partial_trace_a(rho_tot, dims: BipartiteDims) -> np.ndarray:
    """Trace out the auxiliary (right) factor."""
    return np.einsum("iaja->ij", _check_joint(rho_tot, dims))


def partial_trace_s(rho_tot, dims: BipartiteDims) -> np.ndarray:
    """Trace out the target (left) factor."""
    return np.einsum("iaib->ab", _check_joint(rho_tot, dims))


@dataclass(frozen=True)
class DensityMatrix:
    """A trace-one positive semidefinite Hermitian matrix."""

    mat: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        m = as_matrix(self.mat, "density matrix").copy()
        m.flags.writeable = False
        object.__setattr__(self, "mat", m)
        if not is_hermitian(m, self.tol):
            raise ValidationError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > self.tol * m.shape[0]:
            raise ValidationError(f"density matrix has trace {np.trace(m).real:.6g}, expected 1")
        if not is_psd(m, self.tol):
            raise ValidationError("density matrix is not positive semidefinite")

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def mixed(cls, n) -> "DensityMatrix":
        """The perfectly mixed state ``1/n``."""
        return cls(identity(n) / n)

    def is_maximally_mixed(self, tol=DEFAULT_TOL) -> bool:
        return hs_norm(self.mat - identity(self.dim) / self.dim) <= tol


def random_unitary(n, rng) -> np.ndarray:
    """Haar-random ``n x n`` unitary drawn from ``rng``."""
    return np.asarray(unitary_group.rvs(n, random_state=rng), dtype=np.complex128)


def random_density(n, rng, min_gap=1e-3) -> DensityMatrix:
    """Full-rank density matrix with a non-degenerate spectrum.

    Eigenvalues are drawn from a flat Dirichlet distribution and redrawn
    until every pair is separated by ``min_gap`` and none is below it.
    """
    while True:
        p = rng.dirichlet(np.ones(n))
        s = np.sort(p)
        if s[0] >= min_gap and (n == 1 or np.diff(s).min() >= min_gap):
            break
    u = random_unitary(n, rng)
    m = (u * p) @ u.conj().T
    return DensityMatrix(0.5 * (m + m.conj().T))


_TRIU = {}


def _triu(n):
    if n not in _TRIU:
        _TRIU[n] = np.triu_indices(n, 1)
    return _TRIU[n]


def skew_coords(x) -> np.ndarray:
    """``n*n`` real coordinates of the skew-Hermitian part of ``x``.

    For ``X = iH``: the diagonal of ``H``, then ``sqrt(2) * (Re H_jk, Im H_jk)``
    for ``j < k`` in row-major order. Isometric for ``Re tr(a^dagger b)``.
    """
    x = np.asarray(x, dtype=np.complex128)
    n = x.shape[0]
    h = -0.5j * (x - x.conj().T)
    off = np.sqrt(2.0) * h[_triu(n)]
    v = np.empty(n * n)
    v[:n] = h.diagonal().real
    v[n::2] = off.real
    v[n + 1 :: 2] = off.imag
    return v


def from_skew_coords(v, n) -> np.ndarray:
    """Inverse of :func:`skew_coords`; the result is exactly skew-Hermitian."""
    h = np.zeros((n, n), dtype=np.complex128)
    iu = _triu(n)
    h[iu] = (v[n::2] + 1j * v[n + 1 :: 2]) / np.sqrt(2.0)
    h = h + h.conj().T
    h[np.diag_indices(n)] = v[:n]
    return 1j * h


def to_real_vector(a) -> np.ndarray:
    """Real coordinates of any square matrix, isometric for ``Re tr(a^dagger b)``.

    The skew-Hermitian part fills the first ``n*n`` entries, ``1j`` times the
    Hermitian part the rest, so skew-Hermitian input has a zero second half.
    """
    a = np.asarray(a, dtype=np.complex128)
    herm = 0.5 * (a + a.conj().T)
    return np.concatenate([skew_coords(a), skew_coords(1j * herm)])


def from_real_vector(v, n) -> np.ndarray:
    nn = n * n
    return from_skew_coords(v[:nn], n) - 1j * from_skew_coords(v[nn:], n)


def orthonormalize(candidates, against=(), tol=DEFAULT_TOL) -> list[np.ndarray]:
    """Extend the orthonormal set ``against`` to cover ``candidates``.

    Only the new elements are returned. A candidate whose residual after
    projection has norm at most ``tol * max(1, |candidate|)`` is dropped.
    """
    candidates = [as_matrix(c) for c in candidates]
    against = [as_matrix(a) for a in against]
    if not candidates:
        return []
    n = candidates[0].shape[0]
    for m in candidates + against:
        if m.shape[0] != n:
            raise DimensionMismatch("all matrices must have the same dimension")
    q = np.zeros((len(against) + len(candidates), 2 * n * n))
    for i, a in enumerate(against):
        q[i] = to_real_vector(a)
    k = len(against)
    out = []
    kern = _backend.kernels
    for c in candidates:
        v = to_real_vector(c)
        scale = max(1.0, float(np.sqrt(v @ v)))
        res = kern.project_out(q, k, v)
        if res > tol * scale:
            v /= res
            q[k] = v
            k += 1
            out.append(from_real_vector(v, n))
    return out
