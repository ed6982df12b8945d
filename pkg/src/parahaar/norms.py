"""Besov and BMO functionals of symbols and step functions.

Block values are measured in L_p of (M_m, normalized trace); the oscillation
form sums scales 0..N-1 (the k = 0 term replaces the vanishing k = N one),
which is exactly the windowed pair the telescoping constants control.
"""

from __future__ import annotations

from collections import namedtuple

import numpy as np

from .accel import pair_power_weights
from .dyadic import StepFunction, expectation
from .paraproducts import Symbol

__all__ = [
    "block_lp",
    "function_lp",
    "besov_haar",
    "besov_diff",
    "besov_osc",
    "bmo_dyadic",
    "bmo_operator",
    "besov_continuum",
    "besov_haar_adjacent",
    "BmoForms",
]

BmoForms = namedtuple("BmoForms", ["conditional", "coefficient"])


def block_lp(x, p) -> float:
    """L_p norm of an m x m block under the normalized trace."""
    x = np.atleast_2d(np.asarray(x, dtype=complex))
    sv = np.linalg.svd(x, compute_uv=False)
    if p == np.inf:
        return float(sv[0])
    return float((np.sum(sv ** p) / x.shape[0]) ** (1.0 / p))


def function_lp(sys, f: StepFunction, p) -> float:
    """L_p norm of a block step function, cells weighted by measure."""
    sv = np.linalg.svd(f.values, compute_uv=False)
    per_cell = (sv ** p).sum(axis=1) / f.blockdim
    return float((sys.cell_measure * per_cell.sum()) ** (1.0 / p))


def besov_haar(sys, b: Symbol, p) -> float:
    if p <= 0:
        raise ValueError("p must be positive")
    total = 0.0
    for h, block in b.coeffs.items():
        w = sys.measure(h.cube) ** -0.5
        total += (w * block_lp(block, p)) ** p
    return float(total ** (1.0 / p))


def besov_diff(sys, b: Symbol, p) -> float:
    if p <= 0:
        raise ValueError("p must be positive")
    arr = b.coeff_array()
    scales = sys.scale_of_row()
    total = 0.0
    for k in range(1, sys.params.depth + 1):
        coeffs = arr.copy()
        coeffs[scales != k - 1] = 0.0
        dk = sys.synthesize(coeffs)
        total += sys.d_eff ** k * function_lp(sys, dk, p) ** p
    return float(total ** (1.0 / p))


def besov_osc(sys, b: Symbol, p) -> float:
    if p < 1:
        raise ValueError("the oscillation form needs p >= 1")
    f = b.function()
    total = 0.0
    for k in range(0, sys.params.depth):
        diff = f - expectation(sys, f, k)
        total += sys.d_eff ** k * function_lp(sys, diff, p) ** p
    return float(total ** (1.0 / p))


def bmo_dyadic(sys, b: Symbol) -> BmoForms:
    """Scalar dyadic BMO, conditional-square-function and coefficient forms."""
    if b.blockdim != 1:
        raise ValueError("bmo_dyadic is scalar; use bmo_operator for blocks")
    f = b.function()
    N = sys.params.depth

    form_a = 0.0
    tail = np.zeros(sys.n_cells)
    from .dyadic import martingale_difference

    diffs = [np.abs(martingale_difference(sys, f, k).scalar()) ** 2 for k in range(1, N + 1)]
    for n in range(N - 1, -1, -1):
        tail = tail + diffs[n]
        cond = expectation(sys, StepFunction(tail.astype(complex)), n)
        form_a = max(form_a, float(np.sqrt(cond.scalar().real.max())))

    form_b = 0.0
    mass = {}
    for k in range(N - 1, -1, -1):
        for cube in sys.cubes_by_scale[k]:
            total = 0.0
            from .dyadic import HaarIndex

            for color in range(1, sys.n_colors + 1):
                blk = b.coeffs.get(HaarIndex(cube, color))
                if blk is not None:
                    total += abs(blk[0, 0]) ** 2
            if k < N - 1:
                total += sum(mass[kid] for kid in sys.children(cube))
            mass[cube] = total
            form_b = max(form_b, float(np.sqrt(total / sys.measure(cube))))
    return BmoForms(form_a, form_b)


def bmo_operator(sys, b: Symbol) -> float:
    """sup over cubes of the mean quadratic oscillation in the block operator norm."""
    f = b.function()
    best = 0.0
    for k in range(0, sys.params.depth):
        fk = expectation(sys, f, k)
        dev = f - fk
        sv = np.linalg.svd(dev.values, compute_uv=False)[:, 0] ** 2
        for cube in sys.cubes_by_scale[k]:
            cells = sys.cells_of(cube)
            best = max(best, float(np.sqrt(sv[cells].mean())))
    return best


_weights_cache = {}


def grid_coords(n_cells: int, cells_per_axis: int, dim: int) -> np.ndarray:
    """Axis coordinates per cell id, axis 0 fastest (the system convention)."""
    c = np.arange(n_cells)
    return np.stack([(c // cells_per_axis**t) % cells_per_axis for t in range(dim)], axis=-1)


def _grid_weights(cells_per_axis: int, dim: int, refinement: int) -> np.ndarray:
    key = (cells_per_axis, dim, refinement)
    if key not in _weights_cache:
        n_cells = cells_per_axis ** dim
        h = 1.0 / cells_per_axis
        sub = h / refinement
        lowers = grid_coords(n_cells, cells_per_axis, dim) * h
        offs = (grid_coords(refinement**dim, refinement, dim) + 0.5) * sub
        mids = lowers[:, None, :] + offs[None, :, :]
        _weights_cache[key] = pair_power_weights(
            np.ascontiguousarray(mids.astype(float)), float(sub ** dim), float(2 * dim)
        )
    return _weights_cache[key]


def besov_continuum(values, p, dim: int = 1, refinement: int = 4) -> float:
    """Double-integral Besov functional of a step function on a uniform grid.

    Same-cell pairs contribute 0 exactly; off-cell pairs use the midpoint
    rule with `refinement` subdivisions per axis (monotone increasing in the
    refinement, the kernel being convex off the diagonal).
    """
    values = np.asarray(values, dtype=complex)
    if values.ndim == 1:
        values = values[:, None, None]
    n_cells = values.shape[0]
    cells_per_axis = round(n_cells ** (1.0 / dim))
    if cells_per_axis ** dim != n_cells:
        raise ValueError("values must fill a uniform grid over the window")
    W = _grid_weights(cells_per_axis, dim, refinement)
    diffs = values[:, None] - values[None, :]
    sv = np.linalg.svd(diffs, compute_uv=False)
    dist_p = (sv ** p).sum(axis=-1) / values.shape[1]
    return float((W * dist_p).sum() ** (1.0 / p))


def _box_cell_weights(lo, hi, depth):
    """Overlap measures of the rational interval [lo, hi) with the 2^depth cells."""
    from fractions import Fraction

    n = 2**depth
    h = Fraction(1, n)
    out = {}
    first = int(lo // h)
    last = int(max(first, -(-hi // h) - 1))
    for c in range(max(first, 0), min(last, n - 1) + 1):
        a = max(lo, c * h)
        b = min(hi, (c + 1) * h)
        if b > a:
            out[c] = float(b - a)
    return out


def besov_haar_adjacent(values, p, dim: int, variant_mask: int, depth: int) -> float:
    """Haar-coefficient Besov sum of a standard-grid step function over one
    shifted lattice of the covering family (cubes fully inside the window).

    Coefficients are exact overlap integrals of the piecewise-constant input
    against the shifted wavelets; scalar values only.
    """
    from fractions import Fraction

    from .dyadic import _offset_at

    values = np.asarray(values, dtype=complex).ravel()
    n_axis = 2**depth
    if values.size != n_axis**dim:
        raise ValueError("values must fill the standard grid")
    grid = values.reshape([n_axis] * dim, order="F")  # cell id = sum c_t n^t
    total = 0.0
    for k in range(depth):
        h = Fraction(1, 2**k)
        half = h / 2
        axis_cubes = []
        for t in range(dim):
            off = _offset_at(k, (variant_mask >> t) & 1)
            ms = []
            m = int((0 - off) // h)
            while off + m * h < 1:
                if off + m * h >= 0 and off + (m + 1) * h <= 1:
                    ms.append(m)
                m += 1
            axis_cubes.append((off, ms))
        # iterate cube index tuples
        import itertools as _it

        for pos in _it.product(*(rng for (_, rng) in axis_cubes)):
            # children weights per axis: (left overlap dict, right overlap dict)
            axis_halves = []
            for t in range(dim):
                off = axis_cubes[t][0]
                start = off + pos[t] * h
                axis_halves.append(
                    (
                        _box_cell_weights(start, start + half, depth),
                        _box_cell_weights(start + half, start + h, depth),
                    )
                )
            meas = float(h) ** dim
            for eta in range(1, 2**dim):
                coeff = 0.0 + 0.0j
                for beta in range(2**dim):
                    sign = -1.0 if bin(beta & eta).count("1") % 2 else 1.0
                    if dim == 1:
                        wts = axis_halves[0][(beta >> 0) & 1]
                        acc = sum(grid[c] * w for c, w in wts.items())
                    else:
                        w0 = axis_halves[0][(beta >> 0) & 1]
                        w1 = axis_halves[1][(beta >> 1) & 1]
                        acc = sum(
                            grid[c0, c1] * u0 * u1
                            for c0, u0 in w0.items()
                            for c1, u1 in w1.items()
                        )
                    coeff += sign * acc
                coeff *= meas ** -0.5  # wavelet amplitude |Q|^{-1/2}
                total += (abs(coeff) / meas**0.5) ** p
    return float(total ** (1.0 / p))
