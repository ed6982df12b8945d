import numpy as np
import pytest

from parahaar.dyadic import DyadicParams, build_system
from parahaar.kernels import (GridOperator, commutator_grid_op, discretize,
                              hilbert_kernel, homogeneous_sign_kernel,
                              multiplication_grid_op, nondegenerate_probe,
                              nwo_quantity, random_admissible_family,
                              standard_check,
                              weak_factorization, KernelSpec)
from parahaar.kernels import testing_quantity as tq_separated
from parahaar.spectral import schatten_norm


def sample_triples(rng, count=200):
    out = []
    for _ in range(count):
        x = rng.uniform(0, 1)
        y = x + rng.uniform(0.05, 2.0) * rng.choice([-1, 1])
        xp = x + rng.uniform(0.001, abs(x - y) / 2 * 0.999) * rng.choice([-1, 1])
        out.append((x, xp, y))
    return out


def test_standard_check_hilbert(rng):
    rep = standard_check(hilbert_kernel(), sample_triples(rng))
    assert rep["violations"] == []
    assert rep["worst_size_ratio"] <= 1.0 + 1e-12


def test_standard_check_zero_kernel(rng):
    K = KernelSpec(lambda x, y: np.zeros(np.broadcast(x[..., 0], y[..., 0]).shape),
                   1, C=1.0, alpha=1.0)
    rep = standard_check(K, sample_triples(rng, 30))
    assert rep["worst_size_ratio"] == 0.0 and rep["violations"] == []


def test_standard_check_flags_violations(rng):
    # declare a constant far too small: violations listed, not hidden
    bad = KernelSpec(hilbert_kernel().evaluate, 1, C=0.25, alpha=1.0)
    rep = standard_check(bad, sample_triples(rng, 50))
    assert len(rep["violations"]) > 0


def test_probe_exact_hilbert():
    pr = nondegenerate_probe(hilbert_kernel(), [0.0], 1.0, 10.0)
    assert abs(pr["K00"]) == 1.0 / 10.0
    assert pr["bracket"][0] <= pr["dist"] <= pr["bracket"][1]
    eps = [nondegenerate_probe(hilbert_kernel(), [0.0], 1.0, A)["eps"]
           for A in (10.0, 30.0, 100.0)]
    assert eps[0] > eps[1] > eps[2]


def test_probe_homogeneous_direction():
    pr = nondegenerate_probe(homogeneous_sign_kernel(), [0.3], 0.01, 10.0)
    assert pr["y0"][0] == pytest.approx(0.3 + 10 * 0.01, abs=1e-15)


def test_probe_rejects_small_A():
    with pytest.raises(ValueError):
        nondegenerate_probe(hilbert_kernel(), [0.0], 1.0, 2.0)


def test_probe_failure_diagnostics():
    dead = KernelSpec(lambda x, y: 1e-9 / (x[..., 0] - y[..., 0]), 1,
                      C=1.0, alpha=1.0, nondegeneracy=("pointwise", 1.0))
    with pytest.raises(RuntimeError):
        nondegenerate_probe(dead, [0.0], 1.0, 10.0)


def test_discretize_antisymmetric():
    T = discretize(hilbert_kernel(), 4, refinement=1)
    assert np.abs(T.matrix + T.matrix.T).max() == 0.0
    assert np.abs(np.diag(T.matrix)).max() == 0.0


def test_discretize_zero_kernel():
    K = KernelSpec(lambda x, y: np.zeros(np.broadcast(x[..., 0], y[..., 0]).shape),
                   1, C=1.0, alpha=1.0)
    assert np.abs(discretize(K, 8).matrix).max() == 0.0


def test_discretize_refinement_monotone():
    entries = []
    for ref in (1, 2, 4):
        T = discretize(hilbert_kernel(), 8, refinement=ref)
        entries.append(abs(T.matrix[0, 5]))
    assert entries[0] <= entries[1] <= entries[2]


def test_weak_factorization_examples():
    T = discretize(hilbert_kernel(), 256, refinement=2)
    q = np.arange(8, 12)
    f = np.zeros(256, dtype=complex)
    f[q[:2]] = 1.0
    f[q[2:]] = -1.0
    out = weak_factorization(f, q, q + 64, T)
    assert out["residual"] < 1e-12
    assert abs(out["ftilde_mean"]) < 1e-12
    zero = weak_factorization(np.zeros(256, dtype=complex), q, q + 64, T)
    assert np.abs(zero["h"]).max() == 0.0 and np.abs(zero["ftilde"]).max() == 0.0


def test_weak_factorization_decay():
    T = discretize(hilbert_kernel(), 256, refinement=2)
    q = np.arange(8, 12)
    f = np.zeros(256, dtype=complex)
    f[q[:2]] = 1.0
    f[q[2:]] = -1.0
    ratios = [weak_factorization(f, q, q + 4 * A, T)["remainder_ratio"]
              for A in (8, 16, 32)]
    assert ratios[0] > ratios[1] > ratios[2]


def test_weak_factorization_preconditions():
    T = discretize(hilbert_kernel(), 32, refinement=1)
    q = np.arange(0, 4)
    f = np.zeros(32, dtype=complex)
    f[q] = 1.0  # nonzero mean
    with pytest.raises(ValueError):
        weak_factorization(f, q, q + 8, T)
    with pytest.raises(ValueError):
        weak_factorization(np.zeros(32, dtype=complex), q, q + 2, T)


def test_nwo_quantity_bounded(rng):
    sys = build_system(DyadicParams(2, 5))
    n = sys.n_cells
    fams = random_admissible_family(sys, rng)
    for _ in range(5):
        V = GridOperator((rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / n,
                         1, n)
        for p in (1.5, 2.0, 3.0):
            assert nwo_quantity(V, fams, p) <= 3.0 * schatten_norm(V.matrix, p)


def test_testing_quantity_positive(rng):
    sys = build_system(DyadicParams(2, 4))
    T = discretize(hilbert_kernel(), 16, refinement=2)
    vals = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    C = commutator_grid_op(T, vals)
    q = tq_separated(C, sys, vals, A=3, p=2.0)
    assert q > 0
    # constant symbols commute
    C0 = commutator_grid_op(T, np.ones(16))
    assert np.abs(C0.matrix).max() < 1e-14


def test_grid_ops_apply(rng):
    vals = rng.standard_normal(8)
    M = multiplication_grid_op(vals, 1)
    f = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    assert np.allclose(M.apply(f), vals * f)
