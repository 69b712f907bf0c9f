"""Acceptance suite: one test per criterion, each at its stated tolerance.

The terminal summary (see ``conftest.py``) prints a PASS/FAIL line per
criterion together with the measured quantities.
"""

import itertools
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from indcontrol import (
    BipartiteDims,
    CaseLabel,
    DensityMatrix,
    build_generators,
    case3_containments,
    check_equivalence,
    commutator,
    counterexample_state,
    disintegrate,
    indirect_criterion,
    is_completely_controllable,
    kron,
    lemma1_dependent,
    lemma1_witness,
    lie_closure,
    partial_trace_a,
    sigma_even,
    sigma_odd,
)
from indcontrol.bases import gell_mann_basis, pauli
from indcontrol.controllability import generic_states, reduced_observability
from indcontrol.linalg import identity, random_density, random_unitary
from indcontrol.systems import (
    example_subalgebra_sp,
    example_two_qubit_case1,
    random_problem,
    random_su,
    swap_factors,
    symplectic_form,
)
from oracles import brute_closure_dim, gram_dependent, partial_trace_a_loops

pytestmark = pytest.mark.acceptance

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
PROBLEMS = os.path.join(ROOT, "problems")
FIXTURES = os.path.join(ROOT, "tests", "fixtures")

SMALL_DIMS = [BipartiteDims(a, b) for a, b in itertools.product((2, 3), repeat=2)]


def test_criterion_01_closure_sanity(criterion):
    criterion(1, "closure sanity: su(2) from two Paulis, su(n) from Gell-Mann for n = 2, 3, 4")
    t0 = time.perf_counter()
    two = lie_closure([pauli("x", "su2"), pauli("y", "su2")], tol=1e-9)
    dims = {n: lie_closure(gell_mann_basis(n), tol=1e-9).dim for n in (2, 3, 4)}
    elapsed = time.perf_counter() - t0
    criterion.detail(f"dims 3/{dims}, {elapsed:.3f} s")
    assert two.dim == 3 == brute_closure_dim([pauli("x", "su2"), pauli("y", "su2")])
    for n, d in dims.items():
        assert d == n * n - 1 == brute_closure_dim(gell_mann_basis(n))
    assert elapsed < 1.0


def test_criterion_02_forward_direction(criterion):
    criterion(2, "complete controllability implies the criterion at rho_A = 1/n_A")
    t0 = time.perf_counter()
    problems = [example_two_qubit_case1().problem]
    seed = 0
    while len(problems) < 26:
        rng = np.random.default_rng(20_000 + seed)
        p = random_problem(SMALL_DIMS[seed % 4], rng, "generic")
        seed += 1
        basis = lie_closure(build_generators(p), dims=p.dims)
        if is_completely_controllable(basis, p.dims):
            problems.append(p)
    violations, checked = 0, 0
    for k, p in enumerate(problems):
        basis = lie_closure(build_generators(p), dims=p.dims)
        assert is_completely_controllable(basis, p.dims)
        mixed = DensityMatrix.mixed(p.dims.n_a)
        for rho in generic_states(p.dims.n_s, seed=k):
            checked += 1
            violations += not indirect_criterion(basis, rho, mixed, dims=p.dims)
    elapsed = time.perf_counter() - t0
    criterion.detail(f"{len(problems)} problems, {checked} states, {violations} violations, {elapsed:.1f} s")
    assert violations == 0
    assert elapsed < 60.0


def _intermediate_instances(count):
    out, seed = [], 0
    while len(out) < count:
        rng = np.random.default_rng(30_000 + seed)
        dims = SMALL_DIMS[seed % 4]
        seed += 1
        p = random_problem(dims, rng, "intermediate")
        basis = lie_closure(build_generators(p), dims=dims)
        sb = disintegrate(basis, dims)
        if sb.case_label is CaseLabel.INTERMEDIATE:
            out.append((p, basis, sb))
    return out


def test_criterion_03_contrapositive_witnesses(criterion):
    criterion(3, "Intermediate instances: counterexample state fails the criterion, containments hold")
    instances = _intermediate_instances(12)
    for p, basis, sb in instances:
        found = counterexample_state(sb, basis, p.dims)
        assert found is not None
        rho_s, _ = found
        mixed = DensityMatrix.mixed(p.dims.n_a)
        v, traced = reduced_observability(basis, rho_s, mixed, p.dims)
        assert traced.dim < p.dims.n_s**2
        assert not indirect_criterion(basis, rho_s, mixed, dims=p.dims)
        in_l, in_d = case3_containments(v, basis, sb, p.dims, tol=1e-8)
        assert in_l and in_d
    criterion.detail(f"{len(instances)} instances")


def test_criterion_04_disintegration_completeness(criterion):
    criterion(4, "block dimensions add up to dim L on random problems")
    kinds = ("generic", "intermediate", "nolocal")
    sums_ok = 0
    for seed in range(60):
        rng = np.random.default_rng(40_000 + seed)
        dims = SMALL_DIMS[seed % 4]
        p = random_problem(dims, rng, kinds[(seed // 4) % 3])
        basis = lie_closure(build_generators(p), tol=1e-9, dims=dims)
        sb = disintegrate(basis, dims, tol=1e-9)  # raises DisintegrationFailure on mismatch
        assert sb.total() == basis.dim
        sums_ok += 1
    criterion.detail(f"{sums_ok}/60 exact")
    assert sums_ok == 60


def _random_pair(rng, n):
    return random_su(n, rng), random_su(n, rng)


def test_criterion_05_sign_pattern_identities(criterion):
    criterion(5, "sign-pattern bracket identities on A")
    rng = np.random.default_rng(5)
    worst_even = worst_odd = 0.0
    for n_a in (2, 4):
        e = sigma_even(n_a)
        for _ in range(100):
            a, b = _random_pair(rng, int(rng.integers(2, 4)))
            lhs = commutator(kron(a, e), kron(b, e))
            worst_even = max(worst_even, np.abs(lhs - kron(commutator(a, b), identity(n_a))).max())
    for n_a in (3, 5):
        pats = [sigma_odd(n_a, j) for j in range(1, n_a + 1)]
        for _ in range(100):
            a, b = _random_pair(rng, int(rng.integers(2, 4)))
            lhs = sum(commutator(kron(a, d), kron(b, d)) for d in pats) / (n_a - 1)
            worst_odd = max(worst_odd, np.abs(lhs - kron(commutator(a, b), identity(n_a))).max())
    criterion.detail(f"even max {worst_even:.1e} <= 1e-12, odd max {worst_odd:.1e} <= 1e-11")
    assert worst_even <= 1e-12
    assert worst_odd <= 1e-11


def _lemma1_pairs(rng, n, count):
    # a mix of generic, commuting-independent and dependent pairs
    for k in range(count):
        kind = k % 4
        if kind == 0:
            yield _random_pair(rng, n)
        else:
            t = random_unitary(n, rng)
            dx, dy = rng.standard_normal(n), rng.standard_normal(n)
            dx -= dx.mean()
            dy -= dy.mean()
            if kind == 2:
                dy = rng.standard_normal() * dx
            elif kind == 3 and n > 2:
                # degenerate spectrum of x
                dx = np.r_[np.full(2, 1.0), -2.0 / (n - 2) * np.ones(n - 2)]
            x = t @ np.diag(1j * dx) @ t.conj().T
            y = t @ np.diag(1j * dy) @ t.conj().T
            yield x, y


def test_criterion_06_lemma1_oracle(criterion):
    criterion(6, "commutation-based dependence test agrees with the Gram oracle; witnesses work")
    rng = np.random.default_rng(6)
    disagreements, witnesses, smallest = 0, 0, np.inf
    for n in (2, 3, 4, 5):
        for x, y in _lemma1_pairs(rng, n, 500):
            dep = lemma1_dependent(x, y)
            disagreements += dep != gram_dependent(x, y)
            commuting = np.linalg.norm(commutator(x, y)) <= 1e-9
            if n >= 3 and commuting and not dep:
                a = lemma1_witness(x, y)
                assert a is not None
                val = np.linalg.norm(commutator(commutator(a, x), commutator(a, y)))
                smallest = min(smallest, val)
                witnesses += 1
    criterion.detail(f"2000 pairs, {disagreements} disagreements, {witnesses} witnesses, min {smallest:.2e} > 1e-10")
    assert disagreements == 0
    assert witnesses > 0
    assert smallest > 1e-10


def _fingerprint(r):
    return (
        r.algebra_dim,
        r.case_label,
        r.completely_controllable,
        r.generic_verdicts,
        r.indirect_criterion_holds,
        r.counterexample_verdict,
        tuple(sorted(r.block_dims.items(), key=str)) if r.block_dims else None,
    )


def test_criterion_07_local_invariance(criterion):
    criterion(7, "report fields unchanged under local unitary conjugation")
    p = example_two_qubit_case1().problem
    ref = _fingerprint(check_equivalence(p, seed=7))
    rng = np.random.default_rng(7)
    for _ in range(20):
        q = p.conjugated(random_unitary(2, rng), random_unitary(2, rng))
        assert _fingerprint(check_equivalence(q, seed=7)) == ref
    criterion.detail(f"20 conjugations, dim {ref[0]}, {ref[1]}")


def test_criterion_08_partial_trace_identities(criterion):
    criterion(8, "partial-trace covariance and local state transfer on A")
    rng = np.random.default_rng(8)
    worst_cov = worst_transfer = worst_oracle = 0.0
    for _ in range(100):
        dims = BipartiteDims(int(rng.integers(2, 5)), int(rng.integers(2, 5)))
        rho = random_density(dims.n, rng).mat
        t_s, t_a = random_unitary(dims.n_s, rng), random_unitary(dims.n_a, rng)
        t = kron(t_s, t_a)
        lhs = partial_trace_a(t @ rho @ t.conj().T, dims)
        rhs = t_s @ partial_trace_a(rho, dims) @ t_s.conj().T
        worst_cov = max(worst_cov, np.abs(lhs - rhs).max())
        worst_oracle = max(
            worst_oracle, np.abs(partial_trace_a(rho, dims) - partial_trace_a_loops(rho, dims.n_s, dims.n_a)).max()
        )
        rs, ra = random_density(dims.n_s, rng).mat, random_density(dims.n_a, rng).mat
        x = random_unitary(dims.n_a, rng)
        lift = kron(identity(dims.n_s), x)
        moved = lift @ kron(rs, ra) @ lift.conj().T
        worst_transfer = max(worst_transfer, np.abs(moved - kron(rs, x @ ra @ x.conj().T)).max())
    criterion.detail(f"covariance {worst_cov:.1e}, transfer {worst_transfer:.1e}, loop oracle {worst_oracle:.1e}")
    assert worst_cov <= 1e-12
    assert worst_transfer <= 1e-12
    assert worst_oracle <= 1e-12


def test_criterion_09_symplectic_subalgebra(criterion):
    criterion(9, "sp example: closure satisfies the symplectic constraint and stays below su(4)")
    spec = example_subalgebra_sp()
    dims = spec.dims
    basis = lie_closure(build_generators(spec.problem), dims=dims)
    jm = symplectic_form(dims)
    block = np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])
    worst = worst_literal = 0.0
    for a in basis:
        worst = max(worst, np.abs(jm @ a + a.T @ jm).max())
        b = swap_factors(a, dims)
        worst_literal = max(worst_literal, np.abs(block @ b + b.T @ block).max())
    complete = is_completely_controllable(basis, dims)
    criterion.detail(f"dim {basis.dim} < 15, residual {worst:.1e} / {worst_literal:.1e} <= 1e-10")
    assert worst <= 1e-10
    assert worst_literal <= 1e-10
    assert basis.dim < 15
    assert not complete


def _cli(*args):
    env = dict(os.environ)
    return subprocess.run(
        [sys.executable, "-m", "indcontrol", *args], capture_output=True, env=env, cwd=ROOT, check=False
    )


EXPECTED_EXIT = {
    "bad_complex_entry.json": 2,
    "string_complex_entry.json": 2,
    "unknown_field.json": 2,
    "missing_schema_version.json": 2,
    "wrong_schema_version.json": 2,
    "not_skew_hermitian.json": 2,
    "ragged_matrix.json": 2,
    "control_only.json": 2,
    "syntax_error.json": 2,
    "nan_entry.json": 2,
}


def test_criterion_10_cli_determinism(criterion, tmp_path):
    criterion(10, "CLI reports are byte-identical across runs; exit codes follow the contract")
    shipped = sorted(f for f in os.listdir(PROBLEMS) if f.endswith(".json"))
    assert shipped
    for name in shipped:
        path = os.path.join(PROBLEMS, name)
        outs = []
        for k in range(2):
            target = tmp_path / f"{name}.{k}"
            r = _cli("analyze", path, "--seed", "3", "--format", "machine", "--output", str(target))
            assert r.returncode == 0, r.stderr
            outs.append((r.stdout, target.read_bytes()))
        assert outs[0] == outs[1]
        assert outs[0][0] == outs[0][1]
    codes = {}
    for name, expected in EXPECTED_EXIT.items():
        r = _cli("analyze", os.path.join(FIXTURES, name))
        codes[name] = r.returncode
        assert r.stderr.startswith(b"error: ")
    cap = _cli("closure", os.path.join(PROBLEMS, "two_qubit_case1.json"), "--max-dim", "5").returncode
    bad_rho = _cli(
        "analyze", os.path.join(PROBLEMS, "two_qubit_case1.json"), "--rho-a", os.path.join(FIXTURES, "rho_a_not_psd.json")
    ).returncode
    criterion.detail(f"{len(shipped)} problems x 2 runs identical, {len(codes)} malformed fixtures, cap exit {cap}")
    assert codes == EXPECTED_EXIT
    assert cap == 3
    assert bad_rho == 2
