"""Decision procedures for indirectly controlled bipartite systems.

A system S is steered only through an auxiliary A. Its dynamics are
generated by a drift/interaction term ``J`` plus local controls
``1 (x) b`` on A. The routines here compute the dynamical Lie algebra, split
it into tensor-product blocks, classify it, and check the necessary condition
for indirect controllability at a given auxiliary state. The result is a
:class:`Report` that cross-checks complete controllability against indirect
controllability at the perfectly mixed auxiliary state.
"""

from __future__ import annotations

import enum
import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from .bases import gell_mann_basis
from .errors import (
    DisintegrationFailure,
    HypothesisError,
    ValidationError,
)
from .lie import (
    LieBasis,
    Subspace,
    ad_saturate,
    contains,
    lie_closure,
    observability_space,
    subspace_intersect,
)
from .linalg import (
    DEFAULT_TOL,
    BipartiteDims,
    DensityMatrix,
    as_matrix,
    commutator,
    hs_norm,
    identity,
    is_skew_hermitian,
    is_traceless,
    kron,
    orthonormalize,
    partial_trace_a,
    random_density,
)

log = logging.getLogger(__name__)


class CaseLabel(str, enum.Enum):
    """How much of su(n_S) (x) 1 the algebra contains."""

    FULL_LOCAL = "FullLocal"
    NO_LOCAL = "NoLocal"
    INTERMEDIATE = "Intermediate"

    def __str__(self):
        return self.value


def _su_element(m, n, tol, path, nonzero=False):
    m = as_matrix(m, path)
    if m.shape[0] != n:
        raise ValidationError(f"expected a {n}x{n} matrix, got {m.shape[0]}x{m.shape[0]}", path)
    if not is_skew_hermitian(m, tol):
        raise ValidationError("matrix is not skew-Hermitian", path)
    if not is_traceless(m, tol):
        raise ValidationError("matrix is not traceless", path)
    if nonzero and hs_norm(m) <= tol:
        raise ValidationError("matrix must be nonzero", path)
    m = m.copy()
    m.flags.writeable = False
    return m


@dataclass(frozen=True, eq=False)
class IndirectProblem:
    """Drift ``K``, ``L``, couplings ``(S_j, sigma_j)`` and controls on A.

    The interaction summand of ``J`` is ``1j * S_j (x) sigma_j`` with both
    factors given as skew-Hermitian traceless matrices.
    """

    dims: BipartiteDims
    drift_k: np.ndarray
    drift_l: np.ndarray
    couplings: tuple
    control_algebra: tuple = ()
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        d, tol = self.dims, self.tol
        object.__setattr__(self, "drift_k", _su_element(self.drift_k, d.n_s, tol, "K"))
        object.__setattr__(self, "drift_l", _su_element(self.drift_l, d.n_a, tol, "L"))
        if len(self.couplings) == 0:
            raise ValidationError("at least one coupling pair is required", "couplings")
        pairs = []
        for j, pair in enumerate(self.couplings):
            s, sigma = pair
            s = _su_element(s, d.n_s, tol, f"couplings[{j}].S", nonzero=True)
            sigma = _su_element(sigma, d.n_a, tol, f"couplings[{j}].sigma", nonzero=True)
            pairs.append((s, sigma))
        sigmas = [p[1] for p in pairs]
        if len(orthonormalize(sigmas, (), tol)) != len(sigmas):
            raise ValidationError("coupling sigmas are linearly dependent", "couplings")
        object.__setattr__(self, "couplings", tuple(pairs))
        ctrl = tuple(
            _su_element(b, d.n_a, tol, f"control_algebra[{i}]")
            for i, b in enumerate(self.control_algebra)
        )
        object.__setattr__(self, "control_algebra", ctrl)

    def conjugated(self, t_s, t_a) -> "IndirectProblem":
        """The same problem seen through local unitaries ``t_s (x) t_a``."""

        def cs(m):
            return t_s @ m @ t_s.conj().T

        def ca(m):
            return t_a @ m @ t_a.conj().T

        return IndirectProblem(
            self.dims,
            cs(self.drift_k),
            ca(self.drift_l),
            tuple((cs(s), ca(sig)) for s, sig in self.couplings),
            tuple(ca(b) for b in self.control_algebra),
            self.tol,
        )


def build_generators(p: IndirectProblem) -> list[np.ndarray]:
    """``[J] + [1 (x) b for b in control_algebra]``."""
    i_s, i_a = identity(p.dims.n_s), identity(p.dims.n_a)
    j = kron(p.drift_k, i_a) + kron(i_s, p.drift_l)
    for s, sigma in p.couplings:
        j = j + 1j * kron(s, sigma)
    return [j] + [kron(i_s, b) for b in p.control_algebra]


def is_completely_controllable(basis: LieBasis, dims: BipartiteDims) -> bool:
    return basis.dim == dims.n**2 - 1


# -- pairs of commuting su(n) elements --------------------------------------


def _check_pair(x, y, tol):
    x = _su_element(x, as_matrix(x).shape[0], tol, "x")
    y = _su_element(y, x.shape[0], tol, "y")
    return x, y


def _commute(x, y, tol):
    return hs_norm(commutator(x, y)) <= tol * max(1.0, hs_norm(x) * hs_norm(y))


def simultaneous_diagonalizer(x, y, tol=DEFAULT_TOL) -> np.ndarray:
    """Unitary ``u`` making ``u^dagger x u`` and ``u^dagger y u`` diagonal.

    ``x`` is diagonalized first; ``y`` is then diagonalized inside each
    eigenspace of ``x`` (eigenvalues closer than ``tol`` times the spectral
    scale count as degenerate).
    """
    hx = 1j * x
    hx = 0.5 * (hx + hx.conj().T)
    w, u = np.linalg.eigh(hx)
    scale = max(1.0, float(np.abs(w).max()))
    blocks, start = [], 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[i - 1] > tol * scale * 10:
            blocks.append((start, i))
            start = i
    hy = 1j * y
    for a, b in blocks:
        if b - a > 1:
            ub = u[:, a:b]
            blk = ub.conj().T @ hy @ ub
            _, v = np.linalg.eigh(0.5 * (blk + blk.conj().T))
            u[:, a:b] = ub @ v
    return u


def _diagonal_coords(x, u):
    # x = sum_l 1j * x_l |l><l| in the frame u
    return np.real(-1j * np.diag(u.conj().T @ x @ u))


def lemma1_dependent(x, y, tol=DEFAULT_TOL) -> bool:
    """Decide real linear dependence of ``x, y`` in su(n) via commutation data.

    Non-commuting pairs are independent. Commuting pairs are brought to a
    common diagonal frame ``x = diag(i x_l)``, ``y = diag(i y_l)`` and are
    dependent iff ``x_b y_a == x_a y_b`` for all index pairs.
    """
    x, y = _check_pair(x, y, tol)
    if hs_norm(x) <= tol or hs_norm(y) <= tol:
        return True
    if not _commute(x, y, tol):
        return False
    u = simultaneous_diagonalizer(x, y, tol)
    xs, ys = _diagonal_coords(x, u), _diagonal_coords(y, u)
    cross = np.outer(xs, ys) - np.outer(ys, xs)
    return bool(np.abs(cross).max() <= tol * max(1.0, np.abs(xs).max() * np.abs(ys).max()))


def _antisym_unit(n, j, k):
    a = np.zeros((n, n), dtype=np.complex128)
    a[j, k], a[k, j] = 1.0, -1.0
    return a


def _witness_family(n):
    for j, k in itertools.combinations(range(n), 2):
        yield _antisym_unit(n, j, k)
    for a, b, g in itertools.permutations(range(n), 3):
        base = _antisym_unit(n, a, b)
        yield base + _antisym_unit(n, g, a)
        yield base + _antisym_unit(n, g, b)


def lemma1_witness(x, y, tol=DEFAULT_TOL):
    """An ``A`` in su(n) with ``[[A, x], [A, y]] != 0`` for a commuting independent pair.

    Candidates are the real rotation generators ``A_jk`` and the sums
    ``A_ab + A_ga``, ``A_ab + A_gb`` built in the common eigenframe and
    rotated back; the first one in lexicographic ``(a, b, g)`` order that
    works is returned. Returns ``None`` for dependent pairs, which includes
    every commuting pair when ``n = 2``.
    """
    x, y = _check_pair(x, y, tol)
    if not _commute(x, y, tol):
        raise ValidationError("lemma1_witness needs commuting inputs")
    if lemma1_dependent(x, y, tol):
        return None
    n = x.shape[0]
    if n == 2:  # unreachable: commuting pairs in su(2) are dependent
        log.warning("n = 2 commuting pair judged independent; no witness family exists")
        return None
    u = simultaneous_diagonalizer(x, y, tol)
    thresh = tol * max(1.0, hs_norm(x) * hs_norm(y))
    for a_frame in _witness_family(n):
        a = u @ a_frame @ u.conj().T
        if hs_norm(commutator(commutator(a, x), commutator(a, y))) > thresh:
            return a
    return None


# -- structured basis --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StructuredBasis:
    """Tensor-product decomposition of a dynamical Lie algebra.

    ``local_a`` holds the ``1 (x) sigma`` block, ``coupled[j]`` the
    orthonormal left factors ``S`` with ``1j * S (x) sigma_basis[j]`` in L,
    and ``local_s`` the factors ``D`` with ``D (x) 1`` in L.
    """

    dims: BipartiteDims
    sigma_basis: tuple
    local_a: tuple
    coupled: dict
    local_s: tuple
    algebra_dim: int
    case_label: CaseLabel | None = None

    @property
    def s(self) -> int:
        return len(self.local_s)

    @property
    def coupled_dims(self) -> list[int]:
        return [len(self.coupled.get(j, ())) for j in range(len(self.sigma_basis))]

    def block_dims(self) -> dict:
        return {
            "local_a": len(self.local_a),
            "coupled": self.coupled_dims,
            "coupled_total": sum(self.coupled_dims),
            "local_s": self.s,
        }

    def total(self) -> int:
        return len(self.local_a) + sum(self.coupled_dims) + self.s

    def left_factors(self) -> list[np.ndarray]:
        return [m for j in sorted(self.coupled) for m in self.coupled[j]]

    def tensor_elements(self) -> list[np.ndarray]:
        i_a = identity(self.dims.n_a)
        out = list(self.local_a)
        for j in sorted(self.coupled):
            out += [1j * kron(s, self.sigma_basis[j]) for s in self.coupled[j]]
        out += [kron(d, i_a) for d in self.local_s]
        return out


def normalized_basis(n):
    return [g / np.sqrt(2.0) for g in gell_mann_basis(n)]


def _require_full_control(basis: LieBasis, dims, tol):
    i_s = identity(dims.n_s)
    for k, sig in enumerate(normalized_basis(dims.n_a)):
        if not contains(basis, kron(i_s, sig), tol):
            raise HypothesisError(
                f"L does not contain 1 (x) sigma_{k}: the controls do not generate su(n_A)"
            )


def disintegrate(basis: LieBasis, dims: BipartiteDims, tol=DEFAULT_TOL) -> StructuredBasis:
    """Split L into ``1 (x) su(n_A)``, pure ``i S (x) sigma_j`` and ``D (x) 1`` blocks.

    Each block is the intersection of L with the corresponding tensor plane.
    Requires ``1 (x) su(n_A)`` inside L; raises ``DisintegrationFailure``
    when the block dimensions do not add up to ``dim L``.
    """
    if basis.n != dims.n:
        raise ValidationError(f"basis acts on C^{basis.n}, dims say {dims.n}")
    _require_full_control(basis, dims, tol)
    n_s, n_a = dims.n_s, dims.n_a
    i_s, i_a = identity(n_s), identity(n_a)
    sig = normalized_basis(n_a)
    gs = normalized_basis(n_s)

    plane_a = Subspace.spanned_by([kron(i_s, s) for s in sig], tol=tol)
    block_a = subspace_intersect(basis, plane_a, tol)
    local_a = tuple(kron(i_s, s) for s in sig) if block_a.dim == dims.d_a else tuple(block_a)

    coupled = {}
    for j, sj in enumerate(sig):
        plane = Subspace.spanned_by([1j * kron(g, sj) for g in gs], tol=tol)
        inter = subspace_intersect(basis, plane, tol)
        lift = kron(i_s, sj.conj().T)
        lefts = [-1j * partial_trace_a(v @ lift, dims) for v in inter]
        coupled[j] = tuple(orthonormalize(lefts, (), tol))

    plane_s = Subspace.spanned_by([kron(g, i_a) for g in gs], tol=tol)
    local_s = tuple(
        orthonormalize([partial_trace_a(v, dims) / n_a for v in subspace_intersect(basis, plane_s, tol)], (), tol)
    )

    sb = StructuredBasis(dims, tuple(sig), local_a, coupled, local_s, basis.dim)
    if sb.total() != basis.dim:
        raise DisintegrationFailure(
            f"block dimensions {sb.block_dims()} sum to {sb.total()}, but dim L = {basis.dim}"
        )
    for e in sb.tensor_elements():
        if not contains(basis, e, tol * 10):
            raise DisintegrationFailure("reconstructed tensor element is not in L")
    return StructuredBasis(
        dims, sb.sigma_basis, local_a, coupled, local_s, basis.dim, classify_case(sb, dims)
    )


def classify_case(sb: StructuredBasis, dims: BipartiteDims) -> CaseLabel:
    if sb.s == dims.d_s:
        return CaseLabel.FULL_LOCAL
    if sb.s == 0:
        return CaseLabel.NO_LOCAL
    return CaseLabel.INTERMEDIATE


# -- diagonal sign patterns on A --------------------------------------------


def sigma_even(n_a) -> np.ndarray:
    """``diag(1, -1, 1, -1, ...)`` for even ``n_a``."""
    if n_a < 2 or n_a % 2:
        raise ValidationError(f"sigma_even needs an even n_a >= 2, got {n_a}")
    return np.diag([(-1.0) ** k for k in range(n_a)]).astype(np.complex128)


def sigma_odd(n_a, j) -> np.ndarray:
    """Diagonal with 0 at position ``j`` (1-based) and alternating +-1 elsewhere.

    The signs alternate over the remaining positions so the trace is zero.
    """
    if n_a < 3 or n_a % 2 == 0:
        raise ValidationError(f"sigma_odd needs an odd n_a >= 3, got {n_a}")
    if not 1 <= j <= n_a:
        raise ValidationError(f"position j={j} outside 1..{n_a}")
    d = np.zeros(n_a)
    sign = 1.0
    for k in range(n_a):
        if k != j - 1:
            d[k] = sign
            sign = -sign
    return np.diag(d).astype(np.complex128)


# -- indirect-controllability criterion -------------------------------------


def _resolve_basis(problem_or_basis, dims, tol):
    if isinstance(problem_or_basis, IndirectProblem):
        p = problem_or_basis
        return lie_closure(build_generators(p), tol, dims=p.dims), p.dims
    basis = problem_or_basis
    dims = dims or basis.dims
    if dims is None:
        raise ValidationError("dims are required when passing a bare LieBasis")
    return basis, dims


def reduced_observability(basis, rho_s, rho_a, dims, tol=DEFAULT_TOL):
    """``(V, Tr_A(V))`` as subspaces; ``Tr_A(V)`` lives in u(n_S)."""
    v = observability_space(rho_s, rho_a, basis, dims, tol)
    traced = Subspace.spanned_by([partial_trace_a(e, dims) for e in v], n=dims.n_s, tol=tol)
    return v, traced


def indirect_criterion(problem_or_basis, rho_s, rho_a, tol=DEFAULT_TOL, dims=None) -> bool:
    """Whether ``Tr_A(V)`` fills u(n_S), i.e. has real dimension ``n_S**2``.

    This is necessary, not sufficient, for indirect controllability of S
    given ``rho_a``.
    """
    basis, dims = _resolve_basis(problem_or_basis, dims, tol)
    if rho_s.is_maximally_mixed(tol):
        raise ValidationError("rho_s must differ from the maximally mixed state")
    _, traced = reduced_observability(basis, rho_s, rho_a, dims, tol)
    return traced.dim == dims.n_s**2


def case3_containments(v: Subspace, basis: LieBasis, sb: StructuredBasis, dims, tol=DEFAULT_TOL):
    """Check ``V <= L + span{i 1}`` and ``Tr_A(V) <= span{D_k} + span{i 1}``."""
    ext = Subspace.spanned_by(list(basis) + [1j * identity(dims.n)], tol=tol)
    in_l = all(contains(ext, e, tol) for e in v)
    d_span = Subspace.spanned_by(list(sb.local_s) + [1j * identity(dims.n_s)], tol=tol)
    in_d = all(contains(d_span, partial_trace_a(e, dims), tol) for e in v)
    return in_l, in_d


def _hermitian_commutant(mats, n, tol):
    """Traceless Hermitian matrices commuting with every matrix in ``mats``."""
    herm = [-1j * g for g in gell_mann_basis(n)]
    if not mats:
        return herm
    cols = [np.concatenate([np.concatenate([c.real.ravel(), c.imag.ravel()])
                            for c in (commutator(h, m) for m in mats)]) for h in herm]
    a = np.stack(cols, axis=1)
    _, s, vt = np.linalg.svd(a)
    scale = max(1.0, s[0] if len(s) else 1.0)
    rank = int(np.sum(s > tol * scale))
    out = []
    for c in vt[rank:]:
        c = c * np.sign(c[np.argmax(np.abs(c))])
        out.append(sum(ck * h for ck, h in zip(c, herm)))
    return out


def _shifted_mixed(h, n):
    # 1/n - alpha*h with alpha set so the smallest eigenvalue stays >= 1/(2n)
    alpha = 1.0 / (2 * n * np.linalg.norm(h, 2))
    m = identity(n) / n - alpha * h
    return DensityMatrix(0.5 * (m + m.conj().T)), alpha


def counterexample_state(sb: StructuredBasis, basis: LieBasis, dims, tol=DEFAULT_TOL):
    """A state ``rho_S`` on which the criterion fails at ``rho_A = 1/n_A``.

    Intermediate: ``1/n_S - alpha * 1j * D_1`` with ``alpha = 1/(2 n_S |D_1|_2)``.
    NoLocal: ``1/n_S - alpha * H`` for a traceless Hermitian ``H`` commuting
    with every coupled left factor, making ``rho_S (x) 1/n_A`` a fixed point.
    Returns ``(DensityMatrix, explanation)``, or ``None`` for FullLocal input
    and for a NoLocal basis whose left factors have trivial commutant.
    """
    label = sb.case_label or classify_case(sb, dims)
    n_s = dims.n_s
    if label is CaseLabel.FULL_LOCAL:
        return None
    if label is CaseLabel.INTERMEDIATE:
        rho, alpha = _shifted_mixed(1j * sb.local_s[0], n_s)
        return rho, (
            f"rho_S = 1/{n_s} - alpha*i*D_1 with alpha = {alpha:.6g}; "
            "V stays inside L + span{i 1}, so Tr_A(V) misses part of u(n_S)"
        )
    comm = _hermitian_commutant(sb.left_factors(), n_s, tol)
    if not comm:
        return None
    rho, alpha = _shifted_mixed(comm[0], n_s)
    return rho, (
        f"rho_S = 1/{n_s} - alpha*H with H commuting with all coupled left factors "
        f"(alpha = {alpha:.6g}); rho_S (x) 1/n_A is a fixed point of L"
    )


def verify_case2_contradiction(sb: StructuredBasis, basis: LieBasis, dims, tol=DEFAULT_TOL) -> bool:
    """Look for non-commuting left factors that force ``[A, B] (x) 1`` into L.

    Returns ``True`` when such a pair exists and ``[A, B] (x) 1`` is confirmed
    in L through the diagonal sign patterns on A, which means the NoLocal
    label cannot be right. Returns ``False`` when all left factors commute.
    """
    if (sb.case_label or classify_case(sb, dims)) is not CaseLabel.NO_LOCAL:
        raise ValidationError("verify_case2_contradiction applies to NoLocal bases only")
    tagged = [(j, m) for j in sorted(sb.coupled) for m in sb.coupled[j]]
    pair = next(
        ((ja, a, jb, b) for (ja, a), (jb, b) in itertools.combinations(tagged, 2)
         if not _commute(a, b, tol)),
        None,
    )
    if pair is None:
        return False
    ja, a, jb, b = pair
    n_a = dims.n_a
    if n_a % 2 == 0:
        patterns, weight = [sigma_even(n_a)], 1.0
    else:
        patterns, weight = [sigma_odd(n_a, j) for j in range(1, n_a + 1)], 1.0 / (n_a - 1)
    sat_a = ad_saturate(1j * kron(a, sb.sigma_basis[ja]), basis, tol)
    sat_b = ad_saturate(1j * kron(b, sb.sigma_basis[jb]), basis, tol)
    total = np.zeros((dims.n, dims.n), dtype=np.complex128)
    for d in patterns:
        ad, bd = kron(a, d), kron(b, d)
        if not (contains(sat_a, ad, tol * 10) and contains(sat_b, bd, tol * 10)):
            log.info("sign-pattern element missing from the saturation; no contradiction")
            return False
        total += commutator(ad, bd)
    target = kron(commutator(a, b), identity(n_a))
    if hs_norm(weight * total - target) > tol * max(1.0, hs_norm(target)):
        return False
    return contains(basis, target, tol * 10)


# -- end-to-end ---------------------------------------------------------------


def generic_states(n_s, seed, count=3) -> list[DensityMatrix]:
    """Full-rank non-degenerate states from independent child seeds of ``seed``."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [random_density(n_s, np.random.default_rng(c)) for c in children]


@dataclass(eq=False)
class Report:
    """Outcome of an analysis run; see :func:`check_equivalence`."""

    algebra_dim: int
    ambient_dim: int
    completely_controllable: bool
    case_label: CaseLabel | None
    indirect_criterion_holds: bool
    generic_verdicts: tuple
    counterexample_state: DensityMatrix | None
    counterexample_verdict: bool | None
    tol: float
    closure_depth: int
    seed: int
    mode: str = "equivalence"
    block_dims: dict | None = None
    counterexample_note: str | None = None
    inconsistencies: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    structured: StructuredBasis | None = field(default=None, repr=False)

    @property
    def consistent(self) -> bool:
        return not self.inconsistencies


REACHABILITY_NOTE = (
    "reachable set taken as exp(L); when exp(L) is not closed it is only dense in it"
)


def control_generates_su(p: IndirectProblem, tol=DEFAULT_TOL) -> bool:
    if not p.control_algebra:
        return False
    return lie_closure(p.control_algebra, tol).dim == p.dims.d_a


def check_equivalence(p: IndirectProblem, tol=DEFAULT_TOL, seed=0, max_dim=None) -> Report:
    """Run the whole pipeline and cross-check the equivalence theorem.

    Complete controllability must coincide with the criterion holding at
    ``rho_A = 1/n_A`` for three generic ``rho_S`` and, when the algebra is
    not FullLocal, failing on the constructed counterexample state. Every
    mismatch is recorded in ``Report.inconsistencies``; nothing is patched.
    """
    if not control_generates_su(p, tol):
        raise HypothesisError("control_algebra does not generate su(n_A)")
    return _pipeline(p, tol, seed, max_dim, DensityMatrix.mixed(p.dims.n_a), "equivalence")


def analyze(p: IndirectProblem, tol=DEFAULT_TOL, seed=0, max_dim=None, rho_a=None) -> Report:
    """Like :func:`check_equivalence`, degrading gracefully off-hypothesis.

    Without full control on A only the closure and the criterion are
    evaluated ("criterion-only"). With a non-mixed ``rho_a`` the pipeline
    runs but the theorem's equivalence is not asserted ("exploratory").
    """
    mixed = DensityMatrix.mixed(p.dims.n_a)
    rho_a = mixed if rho_a is None else rho_a
    if rho_a.dim != p.dims.n_a:
        raise ValidationError(f"rho_A has size {rho_a.dim}, expected {p.dims.n_a}", "rho_a")
    if not control_generates_su(p, tol):
        return _criterion_only(p, tol, seed, max_dim, rho_a)
    if not rho_a.is_maximally_mixed(tol):
        return _pipeline(p, tol, seed, max_dim, rho_a, "exploratory")
    return _pipeline(p, tol, seed, max_dim, rho_a, "equivalence")


def _criterion_only(p, tol, seed, max_dim, rho_a):
    dims = p.dims
    basis = lie_closure(build_generators(p), tol, max_dim, dims)
    verdicts = tuple(indirect_criterion(basis, r, rho_a, tol, dims) for r in generic_states(dims.n_s, seed))
    return Report(
        algebra_dim=basis.dim,
        ambient_dim=dims.n,
        completely_controllable=is_completely_controllable(basis, dims),
        case_label=None,
        indirect_criterion_holds=all(verdicts),
        generic_verdicts=verdicts,
        counterexample_state=None,
        counterexample_verdict=None,
        tol=tol,
        closure_depth=basis.depth_reached,
        seed=seed,
        mode="criterion-only",
        notes=[
            "hypothesis violated: control_algebra does not generate su(n_A); "
            "equivalence not asserted",
            REACHABILITY_NOTE,
        ],
    )


def _pipeline(p, tol, seed, max_dim, rho_a, mode):
    dims = p.dims
    basis = lie_closure(build_generators(p), tol, max_dim, dims)
    sb = disintegrate(basis, dims, tol)
    case = sb.case_label
    complete = is_completely_controllable(basis, dims)
    generic = tuple(
        indirect_criterion(basis, r, rho_a, tol, dims) for r in generic_states(dims.n_s, seed)
    )
    problems, notes = [], [REACHABILITY_NOTE]
    ce_state = ce_verdict = ce_note = None
    if case is not CaseLabel.FULL_LOCAL:
        found = counterexample_state(sb, basis, dims, tol)
        if found is None:
            if verify_case2_contradiction(sb, basis, dims, tol):
                problems.append("NoLocal label contradicted: [A,B] (x) 1 lies in L")
            else:
                problems.append("no counterexample state could be constructed")
        else:
            ce_state, ce_note = found
            v, traced = reduced_observability(basis, ce_state, rho_a, dims, tol)
            ce_verdict = traced.dim == dims.n_s**2
            if mode == "equivalence":
                if ce_verdict:
                    problems.append("criterion holds on the counterexample state")
                if case is CaseLabel.INTERMEDIATE:
                    in_l, in_d = case3_containments(v, basis, sb, dims, tol)
                    if not in_l:
                        problems.append("V is not contained in L + span{i 1}")
                    if not in_d:
                        problems.append("Tr_A(V) is not contained in span{D_k} + span{i 1}")
    holds = all(generic) and ce_verdict is not False
    if mode == "equivalence":
        if len(set(generic)) > 1:
            problems.append(f"generic-state verdicts disagree across seeds: {generic}")
        if complete != (case is CaseLabel.FULL_LOCAL):
            problems.append(f"complete controllability {complete} but case {case}")
        if complete and not all(generic):
            problems.append("completely controllable yet criterion fails for a generic state")
        if complete != holds:
            problems.append(
                f"complete controllability {complete} != indirect criterion verdict {holds}"
            )
    else:
        notes.append("rho_A is not perfectly mixed: exploratory run, equivalence not asserted")
    return Report(
        algebra_dim=basis.dim,
        ambient_dim=dims.n,
        completely_controllable=complete,
        case_label=case,
        indirect_criterion_holds=holds,
        generic_verdicts=generic,
        counterexample_state=ce_state,
        counterexample_verdict=ce_verdict,
        tol=tol,
        closure_depth=basis.depth_reached,
        seed=seed,
        mode=mode,
        block_dims=sb.block_dims(),
        counterexample_note=ce_note,
        inconsistencies=problems,
        notes=notes,
        structured=sb,
    )
