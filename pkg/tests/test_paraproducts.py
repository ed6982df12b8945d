import numpy as np
import pytest

from parahaar.dyadic import (CubeId, DyadicParams, HaarIndex, StepFunction,
                             build_system, expectation, haar_function)
from parahaar.norms import block_lp
from parahaar.paraproducts import (Symbol, adjoint_paraproduct, apply_op, band,
                                   coarse_op, commutator_pieces, decompose,
                                   mult_op, paraproduct, r_op, random_symbol,
                                   rank_piece, splitting, tail_maximal,
                                   triangle_ops)
from parahaar.spectral import schatten_norm, triangular_project


def unit_symbol(sys, cube, color, value=1.0):
    return Symbol(sys, {HaarIndex(cube, color): np.array([[value]])})


def test_rank_one_paraproduct():
    sys = build_system(DyadicParams(2, 1))
    b = unit_symbol(sys, CubeId(0, (0,)), 1)
    P = paraproduct(sys, b)
    for p in (0.5, 1, 2, np.inf):
        assert schatten_norm(P, p) == pytest.approx(1.0, abs=1e-13)
    # action: pi_b(1) = h^1
    out = apply_op(P, sys, StepFunction(np.ones(2)))
    assert np.allclose(out.values[:, 0, 0], [-1.0, 1.0])


def test_zero_symbol():
    sys = build_system(DyadicParams(2, 2))
    b = Symbol(sys, {})
    assert np.abs(paraproduct(sys, b)).max() == 0.0


def test_entrywise_quadrature_oracle(rng):
    # matrix entries against brute-force cell integration of h b <1/|I|, h>
    sys = build_system(DyadicParams(3, 2))
    b = random_symbol(sys, rng)
    P = paraproduct(sys, b)
    b_fun = b.function().scalar()
    mu = sys.cell_measure
    for _ in range(40):
        r = int(rng.integers(0, len(sys.haar_indices)))
        c = int(rng.integers(0, len(sys.haar_indices)))
        hJ = sys.haar_values(sys.haar_indices[r])
        hI = sys.haar_values(sys.haar_indices[c])
        cube = sys.haar_indices[r].cube
        cells = sys.cells_of(cube)
        avg = hI[cells].mean()
        coeff = (np.conj(hJ) * b_fun).sum() * mu  # <h_J, b>
        assert P[1 + r, 1 + c] == pytest.approx(coeff * avg, abs=1e-12)


def test_adjoint_is_conjugate_transpose(rng):
    for d, m in ((2, 1), (3, 2)):
        sys = build_system(DyadicParams(d, 2))
        b = random_symbol(sys, rng, blockdim=m)
        assert np.abs(adjoint_paraproduct(sys, b) - paraproduct(sys, b).conj().T).max() < 1e-12


def test_adjoint_rank_one():
    sys = build_system(DyadicParams(2, 1))
    b = unit_symbol(sys, CubeId(0, (0,)), 1)
    A = adjoint_paraproduct(sys, b)
    # adjoint sends h^1 to the constant 1
    out = apply_op(A, sys, haar_function(sys, HaarIndex(CubeId(0, (0,)), 1)))
    assert np.allclose(out.values[:, 0, 0], 1.0)


def test_lambda_tilde_zero_d2(rng):
    sys = build_system(DyadicParams(2, 3))
    _, lt = triangle_ops(sys, random_symbol(sys, rng))
    assert np.abs(lt).max() == 0.0


def test_lambda_tilde_color_shift_d3():
    sys = build_system(DyadicParams(3, 1))
    b = unit_symbol(sys, CubeId(0, (0,)), 1)
    _, lt = triangle_ops(sys, b)
    row = sys.haar_pos[HaarIndex(CubeId(0, (0,)), 2)]
    col = sys.haar_pos[HaarIndex(CubeId(0, (0,)), 1)]
    assert lt[row, col] == pytest.approx(1.0)
    assert np.abs(lt).sum() == pytest.approx(1.0)


def test_lambda_tilde_block_diagonal(rng):
    sys = build_system(DyadicParams(3, 2))
    b = random_symbol(sys, rng)
    _, lt = triangle_ops(sys, b)
    for r, h in enumerate(sys.haar_indices):
        for c, g in enumerate(sys.haar_indices):
            if h.cube != g.cube:
                assert lt[1 + r, 1 + c] == 0.0


def test_constant_symbol_operators(rng):
    sys = build_system(DyadicParams(2, 2))
    c = 1.5 - 0.5j
    b = Symbol(sys, {}, coarse_mean=np.array([[c]]))
    lam, _ = triangle_ops(sys, b)
    assert np.abs(paraproduct(sys, b)).max() == 0.0
    assert np.abs(lam).max() == 0.0
    f = StepFunction(rng.standard_normal(4) + 1j * rng.standard_normal(4))
    rf = apply_op(r_op(sys, b), sys, f)
    target = c * (f.values - expectation(sys, f, 0).values)
    assert np.abs(rf.values - target).max() < 1e-13
    mf = apply_op(mult_op(sys, b), sys, f)
    assert np.abs(mf.values - c * f.values).max() < 1e-13


def test_multiplication_two_ways(rng):
    for m in (1, 2):
        sys = build_system(DyadicParams(3, 2))
        for _ in range(50):
            b = random_symbol(sys, rng, blockdim=m)
            bun = decompose(sys, b)
            resid = np.abs(bun.mult - bun.pi - bun.lam - bun.r - bun.coarse).max()
            assert resid < 1e-12 * max(1.0, np.abs(bun.mult).max())


def test_haar_times_haar_d2():
    sys = build_system(DyadicParams(2, 1))
    b = unit_symbol(sys, CubeId(0, (0,)), 1)
    f = haar_function(sys, HaarIndex(CubeId(0, (0,)), 1))
    bun = decompose(sys, b)
    mf = apply_op(bun.mult, sys, f)
    lf = apply_op(bun.lam, sys, f)
    assert np.allclose(mf.values[:, 0, 0], 1.0)
    assert np.allclose(lf.values[:, 0, 0], 1.0)
    assert np.abs(apply_op(bun.pi, sys, f).values).max() < 1e-14
    assert np.abs(apply_op(bun.r, sys, f).values).max() < 1e-14


def test_coarse_term():
    sys = build_system(DyadicParams(2, 2))
    b = Symbol(sys, {}, coarse_mean=np.array([[1.0]]))
    K = coarse_op(sys, b)
    f = StepFunction(np.array([1.0, 2.0, 3.0, 4.0]))
    kf = apply_op(K, sys, f)
    assert np.allclose(kf.values[:, 0, 0], 2.5)
    # mean-zero symbol: no boundary term
    b0 = unit_symbol(sys, CubeId(0, (0,)), 1)
    assert np.abs(coarse_op(sys, b0)).max() == 0.0


def test_band_vanishing_and_resolution(rng):
    sys = build_system(DyadicParams(2, 3))
    b = random_symbol(sys, rng)
    for n in range(3):
        for m in range(0, n + 1):
            assert np.abs(band(sys, b, n, m)).max() < 1e-14
    P = paraproduct(sys, b)
    acc = sum(band(sys, b, n, m) for n in range(3) for m in range(n + 1, 3))
    assert np.abs((P - acc)[:, 1:]).max() < 1e-12


def test_band_bound_small_p(rng):
    sys = build_system(DyadicParams(2, 4))
    p = 0.5
    for _ in range(20):
        b = random_symbol(sys, rng)
        n, m = 1, 3
        lhs = schatten_norm(band(sys, b, n, m), p) ** p
        rhs = (2 - 1) * 2.0 ** ((n - m) * p / 2) * sum(
            (block_lp(blk, p) / sys.measure(h.cube) ** 0.5) ** p
            for h, blk in b.coeffs.items() if h.cube.scale == m)
        assert lhs <= rhs + 1e-10


def test_splitting_shapes(rng):
    sys = build_system(DyadicParams(2, 4))
    b = random_symbol(sys, rng)
    full, diag, off = splitting(sys, b, 3, 0)
    assert np.allclose(full, diag + off)
    with pytest.raises(ValueError):
        splitting(sys, b, 1, 0)
    with pytest.raises(ValueError):
        splitting(sys, b, 3, 3)


def test_commutator_pieces_identities(rng):
    sys = build_system(DyadicParams(2, 3))
    a = random_symbol(sys, rng)
    b = random_symbol(sys, rng)
    psi, v = commutator_pieces(sys, a, b)
    pa, pb = paraproduct(sys, a), paraproduct(sys, b)
    rb = r_op(sys, b)
    lam, _ = triangle_ops(sys, b)
    haar = np.arange(sys.dim_basis) > 0
    lhs = pa @ rb - rb @ pa + psi + pa @ pb
    assert np.abs(lhs[:, haar]).max() < 1e-11
    lhs2 = pa @ rb - rb @ pa + pa @ (pb + lam) - v
    assert np.abs(lhs2[:, haar]).max() < 1e-11
    tri = triangular_project(pa @ lam, sys.scale_of_row())
    assert np.abs(psi - tri).max() < 1e-11


def test_commutator_pieces_trivial(rng):
    sys = build_system(DyadicParams(2, 2))
    const = Symbol(sys, {}, coarse_mean=np.array([[2.0]]))
    b = random_symbol(sys, rng)
    psi, v = commutator_pieces(sys, const, b)
    assert np.abs(psi).max() < 1e-14 and np.abs(v).max() < 1e-14
    psi2, v2 = commutator_pieces(sys, b, const)
    assert np.abs(psi2).max() < 1e-14 and np.abs(v2).max() < 1e-14


def test_commutator_rejects_block_outer(rng):
    sys = build_system(DyadicParams(2, 2))
    a = random_symbol(sys, rng, blockdim=2)
    with pytest.raises(ValueError):
        commutator_pieces(sys, a, a)


def test_psi_containment_pattern(rng):
    sys = build_system(DyadicParams(2, 3))
    psi, _ = commutator_pieces(sys, random_symbol(sys, rng), random_symbol(sys, rng))
    for r, h in enumerate(sys.haar_indices):
        for c, g in enumerate(sys.haar_indices):
            contained = h.cube.scale > g.cube.scale and set(
                sys.cells_of(h.cube)) <= set(sys.cells_of(g.cube))
            if not contained:
                assert abs(psi[1 + r, 1 + c]) < 1e-12


def test_rank_pieces(rng):
    sys = build_system(DyadicParams(2, 2))
    b = random_symbol(sys, rng)
    pieces = {h: rank_piece(sys, b, h.cube, h.color) for h in sys.haar_indices}
    hs = list(pieces)
    for i in range(len(hs)):
        for j in range(i + 1, len(hs)):
            assert np.abs(pieces[hs[i]].conj().T @ pieces[hs[j]]).max() < 1e-14
    single = unit_symbol(sys, CubeId(1, (1,)), 1, value=2.0 - 1j)
    assert np.allclose(paraproduct(sys, single),
                       rank_piece(sys, single, CubeId(1, (1,)), 1))
    for p in (0.5, 1, 2):
        norm = schatten_norm(paraproduct(sys, b), p)
        for h, blk in b.coeffs.items():
            assert norm >= block_lp(blk, p) / sys.measure(h.cube) ** 0.5 - 1e-10


def test_linearity_in_symbol(rng):
    sys = build_system(DyadicParams(3, 2))
    b1 = random_symbol(sys, rng)
    b2 = random_symbol(sys, rng)
    combo = Symbol(sys, {h: b1.coeffs[h] + 2 * b2.coeffs[h] for h in b1.coeffs},
                   b1.coarse_mean + 2 * b2.coarse_mean)
    for op in (paraproduct, adjoint_paraproduct, mult_op, r_op):
        assert np.abs(op(sys, combo) - op(sys, b1) - 2 * op(sys, b2)).max() < 1e-11


def test_tail_maximal(rng):
    sys = build_system(DyadicParams(2, 3))
    const = Symbol(sys, {}, coarse_mean=np.array([[3.0]]))
    f = StepFunction(rng.standard_normal(8))
    assert np.abs(tail_maximal(sys, const, f).values).max() < 1e-14
    a = random_symbol(sys, rng)
    assert np.abs(tail_maximal(sys, a, StepFunction(np.ones(8))).values).max() < 1e-14
    h = HaarIndex(CubeId(0, (0,)), 1)
    ah = unit_symbol(sys, CubeId(0, (0,)), 1)
    out = tail_maximal(sys, ah, haar_function(sys, h))
    assert out.values[:, 0, 0].real.max() == pytest.approx(1.0, abs=1e-13)


def test_matrix_free_application(rng):
    from parahaar.paraproducts import apply_paraproduct

    for d, m in ((3, 1), (2, 2)):
        sys = build_system(DyadicParams(d, 2))
        b = random_symbol(sys, rng, blockdim=m)
        f = StepFunction(rng.standard_normal((sys.n_cells, m, m))
                         + 1j * rng.standard_normal((sys.n_cells, m, m)))
        direct = apply_paraproduct(sys, b, f)
        via_matrix = apply_op(paraproduct(sys, b), sys, f)
        assert np.abs(direct.values - via_matrix.values).max() < 1e-12


def test_identities_on_shifted_system(rng):
    from parahaar.dyadic import GridShift

    sys = build_system(DyadicParams(2, 3), GridShift((1, 0, 1)))
    b = random_symbol(sys, rng)
    a = random_symbol(sys, rng)
    bun = decompose(sys, b)
    assert np.abs(bun.mult - bun.pi - bun.lam - bun.r - bun.coarse).max() < 1e-12
    assert np.abs(bun.pi_adj - bun.pi.conj().T).max() == 0.0
    psi, v = commutator_pieces(sys, a, b)
    pa, pb, rb = paraproduct(sys, a), paraproduct(sys, b), r_op(sys, b)
    lam, _ = triangle_ops(sys, b)
    haar = np.arange(sys.dim_basis) > 0
    assert np.abs((pa @ rb - rb @ pa + psi + pa @ pb)[:, haar]).max() < 1e-11
    assert np.abs((pa @ rb - rb @ pa + pa @ (pb + lam) - v)[:, haar]).max() < 1e-11
    tri = triangular_project(pa @ lam, sys.scale_of_row())
    assert np.abs(psi - tri).max() < 1e-11


def test_commutator_identities_dim2(rng):
    sys = build_system(DyadicParams(2, 2, dim=2))
    a = random_symbol(sys, rng)
    b = random_symbol(sys, rng)
    psi, v = commutator_pieces(sys, a, b)
    pa, pb, rb = paraproduct(sys, a), paraproduct(sys, b), r_op(sys, b)
    lam, _ = triangle_ops(sys, b)
    haar = np.arange(sys.dim_basis) > 0
    assert np.abs((pa @ rb - rb @ pa + psi + pa @ pb)[:, haar]).max() < 1e-11
    assert np.abs((pa @ rb - rb @ pa + pa @ (pb + lam) - v)[:, haar]).max() < 1e-11
    tri = triangular_project(pa @ lam, sys.scale_of_row())
    assert np.abs(psi - tri).max() < 1e-11
