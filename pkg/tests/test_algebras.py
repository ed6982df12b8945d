import itertools

import numpy as np
import pytest

from parahaar.algebras import (besov_car, besov_tensor, car_generators,
                               car_paraproduct, car_sign, car_subsets,
                               car_trace, car_transference_check, car_word,
                               eta_lambda, read_car_symbol, read_tensor_symbol,
                               tensor_basis, tensor_indices, tensor_paraproduct,
                               tensor_transference_check, tensor_word,
                               write_car_symbol, write_tensor_symbol)
from parahaar.norms import block_lp


def test_pauli_construction():
    gens = car_generators(2)
    s1 = np.array([[0, 1], [1, 0]])
    s2 = np.array([[0, -1j], [1j, 0]])
    assert np.allclose(gens[0], s1)
    assert np.allclose(gens[1], s2)
    anti = gens[0] @ gens[1] + gens[1] @ gens[0]
    assert np.abs(anti).max() < 1e-15
    assert np.allclose(gens[0] @ gens[0], np.eye(2))


def test_car_relations_exhaustive():
    for ng in (3, 6):
        gens = car_generators(ng)
        for a in range(ng):
            for b in range(ng):
                anti = gens[a] @ gens[b] + gens[b] @ gens[a]
                target = 2.0 * np.eye(anti.shape[0]) if a == b else 0.0
                assert np.abs(anti - target).max() < 1e-14


def test_word_basics():
    assert np.allclose(car_word((), 2), np.eye(2))
    assert car_trace(car_word((), 2)) == 1.0
    assert abs(car_trace(car_word((1, 2), 2))) < 1e-15
    s0 = np.array([[1, 0], [0, -1]])
    assert np.allclose(car_word((1, 2), 2), 1j * s0)
    with pytest.raises(ValueError):
        car_word((5,), 2)


def test_word_orthonormality():
    ng = 4
    subs = car_subsets(ng)
    for A in subs:
        for B in subs:
            val = car_trace(car_word(A, ng).conj().T @ car_word(B, ng))
            assert abs(val - (1.0 if A == B else 0.0)) < 1e-13


def test_sign_paths_agree(rng):
    ng = 6
    for _ in range(60):
        A = tuple(sorted(rng.choice(range(1, ng + 1), size=rng.integers(0, ng + 1),
                                    replace=False)))
        B = tuple(sorted(rng.choice(range(1, ng + 1), size=rng.integers(0, ng + 1),
                                    replace=False)))
        assert car_sign(A, B, ng, fast=True) == car_sign(A, B, ng, fast=False)


def test_car_paraproduct_structure(rng):
    subs = car_subsets(3)
    pos = {s: i for i, s in enumerate(subs)}
    P = car_paraproduct({(1,): 1.0}, 3)
    assert P[pos[(1,)], pos[()]] in (1.0, -1.0)
    levels = [max(s) if s else 0 for s in subs]
    nz = np.nonzero(P)
    for i, j in zip(*nz):
        assert levels[i] > levels[j]
    total = {A: complex(rng.standard_normal(), rng.standard_normal())
             for A in subs if A}
    P2 = car_paraproduct(total, 3)
    for i, j in zip(*np.nonzero(P2)):
        assert levels[i] > levels[j]
    with pytest.raises(ValueError):
        car_paraproduct({(4,): 1.0}, 3)


def test_besov_car_single_level():
    for k in (1, 2, 3):
        bhat = {(k,): 2.0}
        dk = 2.0 * car_word((k,), 3)
        for p in (1, 2, 3):
            assert besov_car(bhat, 3, p) == pytest.approx(
                2 ** (k / p) * block_lp(dk, p))


def test_car_transference(rng):
    for ng in (2, 3):
        bhat = {A: complex(rng.standard_normal(), rng.standard_normal())
                for A in car_subsets(ng) if A}
        for p in (1, 2, 3, 4):
            lhs, rhs, resid = car_transference_check(bhat, ng, p)
            assert resid < 1e-8
    single = {(1,): 1.5}
    lhs, rhs, resid = car_transference_check(single, 2, 2)
    assert resid < 1e-12 and lhs == pytest.approx(1.5)
    assert car_transference_check({}, 2, 2)[2] == 0.0


def test_tensor_basis_d2():
    assert np.allclose(tensor_basis(2, 2, 2), np.eye(2))
    assert np.allclose(tensor_basis(1, 2, 2), np.diag([-1, 1]))
    U11 = tensor_basis(1, 1, 2)
    assert np.allclose(U11, [[0, -1], [1, 0]])
    assert np.allclose(U11.conj().T, -U11)
    with pytest.raises(ValueError):
        tensor_basis(0, 1, 2)


def test_lemma_products_exhaustive():
    for d in (2, 3):
        om = np.exp(2j * np.pi / d)
        for i, j, k, l in itertools.product(range(1, d + 1), repeat=4):
            U = tensor_basis(i, j, d)
            V = tensor_basis(k, l, d)
            ibar, jbar = (-i - 1) % d + 1, (-j - 1) % d + 1
            assert np.abs(U.conj().T - om ** (i * j) * tensor_basis(ibar, jbar, d)).max() < 1e-13
            tgt = om ** (j * k) * tensor_basis((i + k - 1) % d + 1, (j + l - 1) % d + 1, d)
            assert np.abs(U @ V - tgt).max() < 1e-13


def test_eta_lambda_identity_case():
    alpha = ((1, 2), (2, 1))
    eta, lam = eta_lambda(alpha, alpha, 2)
    assert eta == ()
    assert abs(abs(lam) - 1) < 1e-14
    prod = tensor_word(alpha, 2, 2) @ tensor_word(alpha, 2, 2).conj().T
    assert np.abs(prod - lam * np.eye(4)).max() < 1e-13


def test_eta_lambda_kronecker_oracle(rng):
    idx = tensor_indices(2, 3)
    for _ in range(100):
        a = idx[rng.integers(0, len(idx))]
        b = idx[rng.integers(0, len(idx))]
        eta, lam = eta_lambda(a, b, 2)
        assert abs(abs(lam) - 1) < 1e-14
        L = 3
        prod = tensor_word(a, 2, L) @ tensor_word(b, 2, L).conj().T
        assert np.abs(prod - lam * tensor_word(eta, 2, L)).max() < 1e-12


def test_tensor_index_family():
    idx = tensor_indices(2, 2)
    assert len(idx) == 16  # complete basis of the level-2 word algebra
    assert () in idx
    assert all(a[-1] != (2, 2) for a in idx if a)


def test_tensor_paraproduct_and_transference(rng):
    for levels in (2, 3):
        bhat = {a: complex(rng.standard_normal(), rng.standard_normal())
                for a in tensor_indices(2, levels) if a}
        P = tensor_paraproduct(bhat, 2, levels)
        idx = tensor_indices(2, levels)
        for i, j in zip(*np.nonzero(P)):
            assert len(idx[i]) > len(idx[j])
        for p in (1, 2, 3, 4):
            lhs, rhs, resid = tensor_transference_check(bhat, 2, levels, p)
            assert resid < 1e-8
    single = {((1, 2),): 0.7}
    lhs, rhs, resid = tensor_transference_check(single, 2, 1, 2)
    assert resid < 1e-12
    lhs0, rhs0, resid0 = tensor_transference_check({}, 2, 1, 2)
    assert lhs0 == rhs0 == 0.0


def test_besov_tensor_single_level():
    bhat = {((1, 1), (1, 2)): 3.0}
    for p in (1, 2):
        dk = 3.0 * tensor_word(((1, 1), (1, 2)), 2, 2)
        # single level k=2: weight d^{2k} = 2^4 inside the p-th root
        assert besov_tensor(bhat, 2, 2, p) == pytest.approx(
            2.0 ** (4.0 / p) * block_lp(dk, p))


def test_symbol_files(tmp_path, rng):
    bhat = {A: complex(rng.standard_normal(), rng.standard_normal())
            for A in car_subsets(3) if A}
    path = tmp_path / "car.txt"
    write_car_symbol(path, bhat)
    assert read_car_symbol(path) == bhat
    that = {a: complex(rng.standard_normal(), rng.standard_normal())
            for a in tensor_indices(2, 2) if a}
    path2 = tmp_path / "tensor.txt"
    write_tensor_symbol(path2, that)
    assert read_tensor_symbol(path2) == that
