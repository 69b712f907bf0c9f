"""Standard bases and ready-made problems covering every branch of the pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bases import gell_mann_basis, pauli
from .controllability import IndirectProblem
from .linalg import BipartiteDims, identity, kron, random_unitary

__all__ = [
    "ModelSpec",
    "gell_mann_basis",
    "pauli",
    "example_two_qubit_case1",
    "example_two_qubit_transverse",
    "example_no_drift_case_degenerate",
    "example_intermediate",
    "example_subalgebra_sp",
    "example_odd_na",
    "symplectic_form",
    "swap_factors",
    "random_su",
    "random_problem",
    "EXAMPLES",
]

_ORACLE = "[DERIVED] brute-force rank closure, tests/oracles.py::brute_closure_dim"


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """A named problem plus the report fragments it is expected to produce.

    ``provenance`` says where each expected value came from.
    """

    name: str
    dims: BipartiteDims
    problem: IndirectProblem
    expected: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)


def _su2(axis):
    return pauli(axis, "su2")


def _full_su(n):
    return tuple(gell_mann_basis(n))


def example_two_qubit_case1() -> ModelSpec:
    """Two qubits, tilted drift ``i (sigma_x + sigma_z)/sqrt 2`` on S, Ising coupling.

    The coupling summand is ``-i sigma_z (x) sigma_z`` and A is fully
    controlled. The tilt matters: with drift ``i sigma_x`` alone the algebra
    is only 10-dimensional (see :func:`example_two_qubit_transverse`).
    """
    dims = BipartiteDims(2, 2)
    p = IndirectProblem(
        dims,
        drift_k=(_su2("x") + _su2("z")) / np.sqrt(2),
        drift_l=np.zeros((2, 2)),
        couplings=((_su2("z"), _su2("z")),),
        control_algebra=_full_su(2),
    )
    return ModelSpec(
        "two_qubit_case1",
        dims,
        p,
        {"algebra_dim": 15, "case_label": "FullLocal", "completely_controllable": True},
        {"algebra_dim": _ORACLE, "case_label": "[DERIVED] disintegration of the 15-dim algebra"},
    )


def example_two_qubit_transverse() -> ModelSpec:
    """Drift ``i sigma_x`` on S with the Ising coupling: an Intermediate algebra.

    Left factors stay in span{i sigma_y, i sigma_z} and the only local
    direction on S is ``i sigma_x``, giving dimension 3 + 2*3 + 1 = 10.
    """
    dims = BipartiteDims(2, 2)
    p = IndirectProblem(
        dims,
        drift_k=_su2("x"),
        drift_l=np.zeros((2, 2)),
        couplings=((_su2("z"), _su2("z")),),
        control_algebra=_full_su(2),
    )
    return ModelSpec(
        "two_qubit_transverse",
        dims,
        p,
        {"algebra_dim": 10, "case_label": "Intermediate", "completely_controllable": False},
        {"algebra_dim": _ORACLE, "case_label": "[DERIVED] pipeline run"},
    )


def example_no_drift_case_degenerate() -> ModelSpec:
    """No drift, one commuting coupling: S only ever sees ``sigma_z``."""
    dims = BipartiteDims(2, 2)
    p = IndirectProblem(
        dims,
        drift_k=np.zeros((2, 2)),
        drift_l=np.zeros((2, 2)),
        couplings=((_su2("z"), _su2("z")),),
        control_algebra=_full_su(2),
    )
    return ModelSpec(
        "no_drift_degenerate",
        dims,
        p,
        {"algebra_dim": 6, "case_label": "NoLocal", "completely_controllable": False},
        {"algebra_dim": _ORACLE, "case_label": "[DERIVED] pipeline run; left factors span{i sigma_z}"},
    )


def example_intermediate() -> ModelSpec:
    """Drift parallel to the single coupling's left factor: one local direction on S."""
    dims = BipartiteDims(2, 2)
    p = IndirectProblem(
        dims,
        drift_k=_su2("z"),
        drift_l=np.zeros((2, 2)),
        couplings=((_su2("z"), _su2("z")),),
        control_algebra=_full_su(2),
    )
    return ModelSpec(
        "intermediate",
        dims,
        p,
        {"algebra_dim": 7, "case_label": "Intermediate", "completely_controllable": False},
        {"algebra_dim": _ORACLE, "case_label": "[DERIVED] pipeline run; D block = span{i sigma_z}"},
    )


def symplectic_form(dims=BipartiteDims(2, 2)) -> np.ndarray:
    """``1 (x) [[0, 1], [-1, 0]]`` in the S (x) A ordering.

    Reordering the factors to A (x) S turns this into the block form
    ``[[0, 1_2], [-1_2, 0]]``; see :func:`swap_factors`.
    """
    eps = np.array([[0, 1], [-1, 0]], dtype=np.complex128)
    return kron(identity(dims.n_s), eps)


def swap_factors(m, dims: BipartiteDims) -> np.ndarray:
    """Re-express an operator on S (x) A in the A (x) S ordering."""
    t = np.asarray(m).reshape(dims.n_s, dims.n_a, dims.n_s, dims.n_a)
    return t.transpose(1, 0, 3, 2).reshape(dims.n, dims.n)


def example_subalgebra_sp() -> ModelSpec:
    """Two qubits whose generators all satisfy ``Jm A + A^T Jm = 0``.

    ``Jm = symplectic_form()``. Full control on A is compatible with this
    constraint, drift ``i sigma_y`` on S is too, and so is any coupling
    ``i S (x) sigma`` with a symmetric ``S``.
    """
    dims = BipartiteDims(2, 2)
    p = IndirectProblem(
        dims,
        drift_k=_su2("y"),
        drift_l=0.5 * _su2("x"),
        couplings=((_su2("x"), _su2("z")),),
        control_algebra=_full_su(2),
    )
    return ModelSpec(
        "subalgebra_sp",
        dims,
        p,
        {
            "algebra_dim": 10,
            "constraint_space_dim": 10,
            "case_label": "Intermediate",
            "completely_controllable": False,
        },
        {
            "algebra_dim": _ORACLE,
            "constraint_space_dim": "[DERIVED] null space of A -> Jm A + A^T Jm on u(4), "
            "tests/oracles.py::symplectic_constraint_dim",
        },
    )


def example_odd_na() -> ModelSpec:
    """Qubit S, qutrit A, two couplings with non-commuting left factors."""
    dims = BipartiteDims(2, 3)
    g3 = gell_mann_basis(3)
    p = IndirectProblem(
        dims,
        drift_k=np.zeros((2, 2)),
        drift_l=np.zeros((3, 3)),
        couplings=((_su2("x"), g3[0]), (_su2("y"), g3[1])),
        control_algebra=_full_su(3),
    )
    return ModelSpec(
        "odd_na",
        dims,
        p,
        {"algebra_dim": 35, "case_label": "FullLocal", "completely_controllable": True},
        {"algebra_dim": _ORACLE},
    )


EXAMPLES = {
    "two_qubit_case1": example_two_qubit_case1,
    "two_qubit_transverse": example_two_qubit_transverse,
    "no_drift_degenerate": example_no_drift_case_degenerate,
    "intermediate": example_intermediate,
    "subalgebra_sp": example_subalgebra_sp,
    "odd_na": example_odd_na,
}


def random_su(n, rng) -> np.ndarray:
    """Unit-norm element of su(n) from a Gaussian Hermitian matrix."""
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = 0.5 * (z + z.conj().T)
    h -= np.trace(h) / n * identity(n)
    x = 1j * h
    return x / np.linalg.norm(x)


def _random_diag_su(n, rng, t):
    d = rng.standard_normal(n)
    d -= d.mean()
    x = t @ np.diag(1j * d) @ t.conj().T
    return x / np.linalg.norm(x)


def random_problem(dims: BipartiteDims, rng, kind="generic", n_couplings=None) -> IndirectProblem:
    """Random problem with full control on A.

    ``kind="generic"`` draws every term independently. ``"intermediate"``
    and ``"nolocal"`` make ``K`` and every ``S_j`` diagonal in a shared random
    frame; ``"nolocal"`` additionally sets ``K = 0``.
    """
    if n_couplings is None:
        n_couplings = int(rng.integers(1, min(3, dims.d_a) + 1))
    t_a = random_unitary(dims.n_a, rng)
    sigmas = [random_su(dims.n_a, rng) for _ in range(n_couplings)]
    control = tuple(t_a @ g @ t_a.conj().T for g in gell_mann_basis(dims.n_a))
    if kind == "generic":
        k = random_su(dims.n_s, rng)
        lefts = [random_su(dims.n_s, rng) for _ in range(n_couplings)]
    elif kind in ("intermediate", "nolocal"):
        t_s = random_unitary(dims.n_s, rng)
        k = _random_diag_su(dims.n_s, rng, t_s)
        if kind == "nolocal":
            k = np.zeros_like(k)
        lefts = [_random_diag_su(dims.n_s, rng, t_s) for _ in range(n_couplings)]
    else:
        raise ValueError(f"unknown problem kind {kind!r}")
    return IndirectProblem(
        dims,
        drift_k=k,
        drift_l=random_su(dims.n_a, rng),
        couplings=tuple(zip(lefts, sigmas)),
        control_algebra=control,
    )
