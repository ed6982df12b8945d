"""Martingale paraproducts and companion operators on a truncated system.

All operators are dense matrices on the basis (coarse indicator first, then
Haar indices by scale/position/color), block-valued symbols entering as
Kronecker m x m factors; a function with coefficient blocks (D, m, m) is
acted on as the (D*m, m) matrix of stacked block rows.

The truncation window 1..N replaces the bi-infinite scale sums, and the
pointwise-multiplication identity picks up the coarse boundary term
K_b f = (E_0 b)(E_0 f), which the decompose() bundle carries explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from .dyadic import FiniteDyadicSystem, HaarIndex, StepFunction

__all__ = [
    "Symbol",
    "OperatorBundle",
    "random_symbol",
    "paraproduct",
    "apply_paraproduct",
    "adjoint_paraproduct",
    "triangle_ops",
    "r_op",
    "mult_op",
    "coarse_op",
    "decompose",
    "band",
    "splitting",
    "commutator_pieces",
    "rank_piece",
    "tail_maximal",
    "scale_selector",
    "expectation_projector",
    "apply_op",
]


class Symbol:
    """Haar multiplier: coefficient blocks per Haar index plus a coarse mean."""

    def __init__(self, sys: FiniteDyadicSystem, coeffs: Dict[HaarIndex, np.ndarray],
                 coarse_mean=None, blockdim: Optional[int] = None):
        if blockdim is None:
            if coeffs:
                blockdim = np.atleast_2d(next(iter(coeffs.values()))).shape[0]
            elif coarse_mean is not None:
                blockdim = np.atleast_2d(coarse_mean).shape[0]
            else:
                blockdim = 1
        self.sys = sys
        self.blockdim = blockdim
        self.coeffs = {}
        for h, block in coeffs.items():
            if h not in sys.haar_pos:
                raise KeyError(f"index {h} does not belong to the system")
            block = np.atleast_2d(np.asarray(block, dtype=complex))
            if block.shape != (blockdim, blockdim):
                raise ValueError("all blocks must share the block dimension")
            self.coeffs[h] = block
        if coarse_mean is None:
            coarse_mean = np.zeros((blockdim, blockdim), dtype=complex)
        self.coarse_mean = np.atleast_2d(np.asarray(coarse_mean, dtype=complex))

    @classmethod
    def from_function(cls, sys: FiniteDyadicSystem, f: StepFunction) -> "Symbol":
        coeffs = sys.coeffs(f)
        table = {h: coeffs[1 + r] for r, h in enumerate(sys.haar_indices)
                 if np.any(coeffs[1 + r])}
        return cls(sys, table, coeffs[0], blockdim=f.blockdim)

    def coeff_array(self) -> np.ndarray:
        out = np.zeros((self.sys.dim_basis, self.blockdim, self.blockdim), dtype=complex)
        out[0] = self.coarse_mean
        for h, block in self.coeffs.items():
            out[self.sys.haar_pos[h]] = block
        return out

    def function(self) -> StepFunction:
        return self.sys.synthesize(self.coeff_array())

    def star(self) -> "Symbol":
        """Symbol of the pointwise adjoint function b*."""
        f = self.function()
        return Symbol.from_function(self.sys, StepFunction(np.conj(np.swapaxes(f.values, 1, 2))))


@dataclass
class OperatorBundle:
    pi: np.ndarray
    pi_adj: np.ndarray
    lam: np.ndarray
    lam_tilde: np.ndarray
    r: np.ndarray
    mult: np.ndarray
    coarse: np.ndarray


def random_symbol(sys, rng, blockdim=1, scales=None, with_mean=True) -> Symbol:
    """Standard-normal complex coefficients, optionally restricted to scales."""
    table = {}
    for h in sys.haar_indices:
        if scales is not None and h.cube.scale not in scales:
            continue
        block = rng.standard_normal((blockdim, blockdim)) + 1j * rng.standard_normal((blockdim, blockdim))
        table[h] = block
    mean = None
    if with_mean:
        mean = rng.standard_normal((blockdim, blockdim)) + 1j * rng.standard_normal((blockdim, blockdim))
    return Symbol(sys, table, mean, blockdim=blockdim)


def _block_expand(blocks_rows, scalars) -> np.ndarray:
    """rows of blocks (D, m, m) times a scalar row pattern (D, D) -> (Dm, Dm)."""
    D, m, _ = blocks_rows.shape
    out = np.einsum("rij,rg->rigj", blocks_rows, scalars)
    return out.reshape(D * m, D * m)


def scale_selector(sys, cube_scale: int, blockdim: int = 1) -> np.ndarray:
    """Diagonal 0/1 matrix keeping Haar coordinates at the given cube scale."""
    mask = sys.scale_of_row() == cube_scale
    return np.repeat(mask, blockdim).astype(float)


def expectation_projector(sys, k: int, blockdim: int = 1) -> np.ndarray:
    """Diagonal of E_k in basis coordinates: coarse plus cube scales <= k-1."""
    scales = sys.scale_of_row()
    mask = (scales == -1) | (scales <= k - 1)
    return np.repeat(mask, blockdim).astype(float)


def apply_op(op: np.ndarray, sys, f: StepFunction) -> StepFunction:
    m = f.blockdim
    coeffs = sys.coeffs(f).reshape(sys.dim_basis * m, m)
    out = (op @ coeffs).reshape(sys.dim_basis, m, m)
    return sys.synthesize(out)


def apply_paraproduct(sys, b: Symbol, f: StepFunction) -> StepFunction:
    """Matrix-free action: sum over indices of h_I^i b_I^i (mean of f on I).

    Agrees with apply_op(paraproduct(sys, b), sys, f); the dense matrix stays
    canonical for norm computation.
    """
    m = b.blockdim
    if f.blockdim != m:
        raise ValueError("block dimensions of symbol and input differ")
    out = np.zeros_like(f.values)
    means = {}
    for h, block in b.coeffs.items():
        cube = h.cube
        if cube not in means:
            means[cube] = f.values[sys.cells_of(cube)].mean(axis=0)
        hv = sys.haar_values(h)
        out += np.einsum("c,ij->cij", hv, block @ means[cube])
    return StepFunction(out)


def paraproduct(sys, b: Symbol) -> np.ndarray:
    """Matrix of f -> sum h_I^i b_I^i <1_I/|I|, f> in the coarse+Haar basis."""
    m = b.blockdim
    D = sys.dim_basis
    arr = b.coeff_array()
    avg = sys.cube_average_matrix  # (haar rows, D)
    rows = np.zeros((D, D), dtype=complex)
    rows[1:, :] = avg
    blocks = arr.copy()
    blocks[0] = 0.0  # no coarse output row
    return _block_expand(blocks, rows)


def adjoint_paraproduct(sys, b: Symbol) -> np.ndarray:
    """Independent assembly of f -> sum_k E_{k-1}(d_k b^* d_k f)."""
    m = b.blockdim
    D = sys.dim_basis
    arr = b.coeff_array()
    avg = sys.cube_average_matrix
    out = np.zeros((D * m, D * m), dtype=complex)
    for r in range(len(sys.haar_indices)):
        col = 1 + r
        block = arr[col].conj().T
        # output function is (1_I/|I|) b_I^{i*}; its basis coefficients are
        # the conjugated cube averages
        pattern = avg[r].conj()
        out[:, col * m:(col + 1) * m] += np.einsum("g,ij->gij", pattern, block).reshape(D * m, m)
    return out


def mult_op(sys, b: Symbol) -> np.ndarray:
    """Pointwise left multiplication by the synthesized step function."""
    return _mult_matrix(sys, b.function())


def _mult_matrix(sys, g: StepFunction) -> np.ndarray:
    m = g.blockdim
    D = sys.dim_basis
    a2c = sys.analysis_matrix
    c2a = sys.basis_matrix
    out = np.einsum("bc,cij,cg->bigj", a2c, g.values, c2a, optimize=True)
    return out.reshape(D * m, D * m)


def _difference_function(sys, arr, k) -> StepFunction:
    """Synthesize d_k b from the coefficient array (cube scale k-1)."""
    coeffs = arr.copy()
    scales = sys.scale_of_row()
    coeffs[scales != k - 1] = 0.0
    return sys.synthesize(coeffs)


def _expectation_function(sys, arr, k) -> StepFunction:
    coeffs = arr.copy()
    scales = sys.scale_of_row()
    keep = (scales == -1) | (scales <= k - 1)
    coeffs[~keep] = 0.0
    return sys.synthesize(coeffs)


def triangle_ops(sys, b: Symbol):
    """Return (Lambda_b, LambdaTilde_b).

    Lambda_b f = sum_k d_k b . d_k f from pointwise products; LambdaTilde_b
    assembled directly from its same-cube color-convolution entries, block
    diagonal over cubes.
    """
    m = b.blockdim
    arr = b.coeff_array()
    N = sys.params.depth
    D = sys.dim_basis
    lam = np.zeros((D * m, D * m), dtype=complex)
    for k in range(1, N + 1):
        dk = _difference_function(sys, arr, k)
        sel = scale_selector(sys, k - 1, m)
        lam += _mult_matrix(sys, dk) * sel[None, :]

    lam_tilde = np.zeros((D * m, D * m), dtype=complex)
    d = sys.params.d
    dim = sys.params.dim
    for cube in (c for k in range(N) for c in sys.cubes_by_scale[k]):
        weight = sys.measure(cube) ** -0.5
        for s in range(1, sys.n_colors + 1):
            row = sys.haar_pos[HaarIndex(cube, s)]
            for t in range(1, sys.n_colors + 1):
                if s == t:
                    continue
                if dim == 1:
                    i = (s - t) % d
                    if i == 0:
                        continue
                else:
                    i = s ^ t
                block = arr[sys.haar_pos[HaarIndex(cube, i)]]
                col = sys.haar_pos[HaarIndex(cube, t)]
                lam_tilde[row * m:(row + 1) * m, col * m:(col + 1) * m] = weight * block
    return lam, lam_tilde


def r_op(sys, b: Symbol) -> np.ndarray:
    """R_b f = sum_{k=1..N} b_{k-1} . d_k f, with b_0 the coarse mean."""
    m = b.blockdim
    arr = b.coeff_array()
    N = sys.params.depth
    out = np.zeros((sys.dim_basis * m,) * 2, dtype=complex)
    for k in range(1, N + 1):
        bk = _expectation_function(sys, arr, k - 1)
        sel = scale_selector(sys, k - 1, m)
        out += _mult_matrix(sys, bk) * sel[None, :]
    return out


def coarse_op(sys, b: Symbol) -> np.ndarray:
    """K_b f = (E_0 b)(E_0 f), the truncation boundary term."""
    m = b.blockdim
    out = np.zeros((sys.dim_basis * m,) * 2, dtype=complex)
    out[:m, :m] = b.coarse_mean
    return out


def decompose(sys, b: Symbol) -> OperatorBundle:
    lam, lam_tilde = triangle_ops(sys, b)
    pi = paraproduct(sys, b)
    return OperatorBundle(
        pi=pi,
        pi_adj=adjoint_paraproduct(sys, b),
        lam=lam,
        lam_tilde=lam_tilde,
        r=r_op(sys, b),
        mult=mult_op(sys, b),
        coarse=coarse_op(sys, b),
    )


def band(sys, b: Symbol, n: int, m_scale: int) -> np.ndarray:
    """d_{m+1} pi_b d_{n+1}: input Haar scale n, output Haar scale m."""
    N = sys.params.depth
    if not (0 <= n < N and 0 <= m_scale < N):
        raise ValueError("band scales must lie inside the window")
    p = paraproduct(sys, b)
    sel_in = scale_selector(sys, n, b.blockdim)
    sel_out = scale_selector(sys, m_scale, b.blockdim)
    return sel_out[:, None] * p * sel_in[None, :]


def splitting(sys, b: Symbol, n_step: int, k: int):
    """Arithmetic-progression band sums (pi_{b,k}, diagonal, off-diagonal)."""
    if n_step < 2:
        raise ValueError("the progression step must be >= 2")
    if not (0 <= k < n_step):
        raise ValueError("k must lie in 0..n_step-1")
    N = sys.params.depth
    D = sys.dim_basis * b.blockdim
    diag = np.zeros((D, D), dtype=complex)
    off = np.zeros((D, D), dtype=complex)
    for mm in range(-N, N + 1):
        out_scale = n_step * mm + k + 1
        if not (0 <= out_scale < N):
            continue
        for nn in range(-N, mm + 1):
            in_scale = n_step * nn + k
            if not (0 <= in_scale < N):
                continue
            block = band(sys, b, in_scale, out_scale)
            if nn == mm:
                diag += block
            else:
                off += block
    return diag + off, diag, off


def commutator_pieces(sys, a: Symbol, b: Symbol):
    """(Psi_{a,b}, V_{a,b}) for scalar a; block b allowed."""
    if a.blockdim != 1:
        raise ValueError("the outer symbol must be scalar")
    m = b.blockdim
    if m > 1:
        a = Symbol(sys, {h: np.eye(m) * blk[0, 0] for h, blk in a.coeffs.items()},
                   np.eye(m) * a.coarse_mean[0, 0], blockdim=m)
    arr_a = a.coeff_array()
    arr_b = b.coeff_array()
    N = sys.params.depth
    D = sys.dim_basis * m

    md_b = []
    for k in range(1, N + 1):
        sel = scale_selector(sys, k - 1, m)
        md_b.append(_mult_matrix(sys, _difference_function(sys, arr_b, k)) * sel[None, :])
    ma = [_mult_matrix(sys, _difference_function(sys, arr_a, k)) for k in range(1, N + 1)]

    psi = np.zeros((D, D), dtype=complex)
    prefix = np.zeros((D, D), dtype=complex)
    for k in range(2, N + 1):
        prefix += md_b[k - 2]
        psi += ma[k - 1] @ prefix

    v = np.zeros((D, D), dtype=complex)
    suffix = np.zeros((D, D), dtype=complex)
    for k in range(N, 0, -1):
        suffix += md_b[k - 1]
        proj = expectation_projector(sys, k - 1, m)
        v += ma[k - 1] @ (proj[:, None] * suffix)
    return psi, v


def rank_piece(sys, b: Symbol, cube, color) -> np.ndarray:
    h = HaarIndex(cube, color)
    if h not in sys.haar_pos:
        raise KeyError(f"{h} is not an index of the system")
    m = b.blockdim
    D = sys.dim_basis
    r = sys.haar_pos[h] - 1
    block = b.coeffs.get(h, np.zeros((m, m), dtype=complex))
    out = np.zeros((D * m, D * m), dtype=complex)
    row = sys.haar_pos[h]
    pattern = sys.cube_average_matrix[r]
    out[row * m:(row + 1) * m, :] = np.einsum("ij,g->igj", block, pattern).reshape(m, D * m)
    return out


def tail_maximal(sys, a: Symbol, f: StepFunction) -> StepFunction:
    """Cellwise sup over k of |E_{k-1}((a - a_{k-1})(f - f_{k-1}))|."""
    if a.blockdim != 1:
        raise ValueError("the symbol must be scalar")
    from .dyadic import expectation

    a_fun = a.function()
    if f.blockdim > 1:
        a_vals = np.einsum("c,ij->cij", a_fun.scalar(), np.eye(f.blockdim))
        a_fun = StepFunction(a_vals)
    N = sys.params.depth
    best = np.zeros(f.n_cells)
    for k in range(1, N + 1):
        a_tail = a_fun - expectation(sys, a_fun, k - 1)
        f_tail = StepFunction(f.values) - expectation(sys, f, k - 1)
        prod = StepFunction(np.einsum("cij,cjk->cik", a_tail.values, f_tail.values))
        cond = expectation(sys, prod, k - 1)
        if f.blockdim == 1:
            mag = np.abs(cond.scalar())
        else:
            mag = np.linalg.svd(cond.values, compute_uv=False)[:, 0]
        best = np.maximum(best, mag)
    return StepFunction(best.astype(complex))
