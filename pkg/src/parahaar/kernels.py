"""Singular-kernel validation, discretization, far-point probes, and the
scalar weak-factorization engine.

Grid operators live on the uniform cells of [0,1)^dim in the orthonormal
cell-indicator basis, so Schatten norms read off the stored matrix directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np

__all__ = [
    "KernelSpec",
    "hilbert_kernel",
    "homogeneous_sign_kernel",
    "kernel_by_name",
    "standard_check",
    "nondegenerate_probe",
    "GridOperator",
    "discretize",
    "multiplication_grid_op",
    "commutator_grid_op",
    "weak_factorization",
    "random_admissible_family",
    "nwo_quantity",
    "testing_quantity",
    "write_grid_operator",
    "read_grid_operator",
]


@dataclass
class KernelSpec:
    """K(x, y) for x != y in R^dim with declared standard-estimate constants.

    `evaluate` is vectorized over trailing axes: inputs shape (..., dim).
    nondegeneracy: ("pointwise", c0) or ("homogeneous", Omega, theta0) where
    Omega maps unit vectors to complex values and theta0 is a Lebesgue point
    with Omega(theta0) != 0.
    """

    evaluate: Callable
    dim: int
    C: float
    alpha: float
    nondegeneracy: tuple = ("pointwise", 1.0)
    name: str = "kernel"

    def __post_init__(self):
        if not (0 < self.alpha <= 1):
            raise ValueError("alpha must lie in (0, 1]")
        if self.C <= 0:
            raise ValueError("C must be positive")


def hilbert_kernel() -> KernelSpec:
    def ev(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return 1.0 / (x[..., 0] - y[..., 0])

    return KernelSpec(ev, 1, C=1.0, alpha=1.0, nondegeneracy=("pointwise", 1.0), name="hilbert")


def homogeneous_sign_kernel() -> KernelSpec:
    """Odd homogeneous kernel sign(x-y)/|x-y| with Lebesgue point theta0 = +1."""

    def ev(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return 1.0 / (x[..., 0] - y[..., 0])

    def omega(theta):
        return np.sign(np.asarray(theta, dtype=float)[..., 0]) + 0j

    return KernelSpec(ev, 1, C=1.0, alpha=1.0,
                      nondegeneracy=("homogeneous", omega, np.array([1.0])), name="sign")


def kernel_by_name(name: str, **params) -> KernelSpec:
    """Kernel registry for config files: 'hilbert' or 'sign'."""
    table = {"hilbert": hilbert_kernel, "sign": homogeneous_sign_kernel}
    if name not in table:
        raise KeyError(f"unknown kernel {name!r}; choose from {sorted(table)}")
    spec = table[name]()
    if params:
        from dataclasses import replace

        spec = replace(spec, **params)
    return spec


def _as_points(x, dim):
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x[None]
    if x.shape[-1] != dim:
        x = x[..., None] if dim == 1 else x
    return x


def standard_check(K: KernelSpec, samples: Sequence[Tuple]) -> dict:
    """Verify the size and Holder difference bounds at every sample.

    Each sample is (x, xp, y) with |x - y| > 2 |x - xp| > 0.  Returns worst
    ratios and the list of violations (empty when the declared constants
    hold).
    """
    worst_size = 0.0
    worst_diff = 0.0
    violations = []
    for (x, xp, y) in samples:
        x = _as_points(x, K.dim)
        xp = _as_points(xp, K.dim)
        y = _as_points(y, K.dim)
        dxy = np.linalg.norm(x - y)
        dxxp = np.linalg.norm(x - xp)
        if not (dxy > 2 * dxxp > 0):
            raise ValueError("sample violates |x-y| > 2|x-x'| > 0")
        def _ev(a, b):
            return complex(np.asarray(K.evaluate(a, b)).ravel()[0])

        size = abs(_ev(x, y)) * dxy**K.dim / K.C
        # under the sampling constraint each single difference obeys the
        # Holder bound with witness constant 2C (ratio normalized to 1)
        diff = max(
            abs(_ev(x, y) - _ev(xp, y)),
            abs(_ev(y, x) - _ev(y, xp)),
        ) * dxy ** (K.dim + K.alpha) / (2 * K.C * dxxp**K.alpha)
        worst_size = max(worst_size, float(size))
        worst_diff = max(worst_diff, float(diff))
        if size > 1 + 1e-12 or diff > 1 + 1e-12:
            violations.append((tuple(x.ravel()), tuple(xp.ravel()), tuple(y.ravel()), float(size), float(diff)))
    return {"worst_size_ratio": worst_size, "worst_diff_ratio": worst_diff, "violations": violations}


def _ball_samples(center, r, dim, count=5):
    center = np.asarray(center, dtype=float).reshape(dim)
    offs = [np.zeros(dim)]
    for t in range(dim):
        for s in (-1.0, 1.0):
            for frac in np.linspace(1.0 / count, 1.0, count):
                e = np.zeros(dim)
                e[t] = s * frac * r
                offs.append(e)
    if dim > 1:
        diag = np.ones(dim) / np.sqrt(dim)
        for s in (-1.0, 1.0):
            offs.append(s * r * diag)
    return center[None, :] + np.array(offs)


def nondegenerate_probe(K: KernelSpec, x0, r: float, A: float) -> dict:
    """Find the far point of the critical-decay property and its witnesses."""
    if A < 3:
        raise ValueError("A must be at least 3")
    x0 = np.asarray(x0, dtype=float).reshape(K.dim)
    kind = K.nondegeneracy[0]
    threshold = 1.0
    if kind == "pointwise":
        c0 = K.nondegeneracy[1]
        threshold = 1.0 / (c0 * (A * r) ** K.dim)
        y0 = None
        if K.dim == 1:
            dirs = [np.array([1.0]), np.array([-1.0])]
        else:
            angles = np.linspace(0, 2 * np.pi, 64, endpoint=False)
            dirs = [np.array([np.cos(a), np.sin(a)]) for a in angles]
        for scale in 1.0 + np.linspace(0.0, max(1.0, (c0 * K.C) ** (1.0 / K.dim) - 1.0), 33):
            for d in dirs:
                cand = x0 + A * r * scale * d
                if float(np.abs(K.evaluate(cand[None, :], x0[None, :]))[0]) >= threshold:
                    y0 = cand
                    break
            if y0 is not None:
                break
        if y0 is None:
            raise RuntimeError(
                "probe exhausted candidates: kernel does not realize its "
                "declared pointwise lower bound at this (x0, r, A)"
            )
    elif kind == "homogeneous":
        _, omega, theta0 = K.nondegeneracy
        theta0 = np.asarray(theta0, dtype=float).reshape(K.dim)
        y0 = x0 + A * r * theta0
        c0 = float(1.0 / np.abs(omega(theta0[None, :]))[0])
        threshold = float(np.abs(K.evaluate(y0[None, :], x0[None, :]))[0])
    else:
        raise ValueError(f"unknown nondegeneracy class {kind!r}")

    k00 = complex(np.asarray(K.evaluate(y0[None, :], x0[None, :])).ravel()[0])
    dist = float(np.linalg.norm(x0 - y0))
    bracket = (A * r, (c0 * K.C) ** (1.0 / K.dim) * A * r)

    xs = _ball_samples(x0, r, K.dim)
    ys = _ball_samples(y0, r, K.dim)
    vals = K.evaluate(ys[:, None, :], xs[None, :, :])
    diff = np.abs(vals - k00).max()
    rot = np.exp(-1j * np.angle(k00))
    rotated = rot * vals
    re = rotated.real
    rho = float(np.abs(rotated.imag).max() / re.min()) if re.min() > 0 else np.inf
    two_re = float((np.abs(rotated) / re).max()) if re.min() > 0 else np.inf
    return {
        "y0": y0,
        "K00": k00,
        "dist": dist,
        "bracket": bracket,
        "diff_scaled": float(diff * (A ** (K.dim + K.alpha)) * r**K.dim),
        # eps: relative deviation over the witness pairs, the quantity the
        # far-point argument drives to zero as A grows (strictly, even for
        # real kernels where the imaginary-part ratio rho is identically 0)
        "eps": float(diff / abs(k00)),
        "rho": rho,
        "two_re_ratio": two_re,
        "threshold": threshold,
    }


@dataclass
class GridOperator:
    matrix: np.ndarray  # orthonormal cell-indicator representation
    dim: int
    cells_per_axis: int

    @property
    def n_cells(self):
        return self.matrix.shape[0]

    @property
    def cell_measure(self):
        return float(self.cells_per_axis ** (-self.dim))

    def apply(self, values):
        values = np.asarray(values, dtype=complex)
        mu = np.sqrt(self.cell_measure)
        return (self.matrix @ (values * mu)) / mu

    def adjoint_apply(self, values):
        values = np.asarray(values, dtype=complex)
        mu = np.sqrt(self.cell_measure)
        return (self.matrix.conj().T @ (values * mu)) / mu


def _cell_midgrids(cells_per_axis, dim, refinement):
    from .norms import grid_coords

    h = 1.0 / cells_per_axis
    sub = h / refinement
    lowers = grid_coords(cells_per_axis**dim, cells_per_axis, dim) * h
    offs = (grid_coords(refinement**dim, refinement, dim) + 0.5) * sub
    return lowers[:, None, :] + offs[None, :, :]


def discretize(K: KernelSpec, cells_per_axis: int, refinement: int = 2) -> GridOperator:
    """Cell-pair midpoint averages of the kernel; diagonal set to zero.

    The zero diagonal is the principal-value surrogate, unbiased exactly for
    antisymmetric convolution kernels and a documented bias otherwise.
    """
    dim = K.dim
    mids = _cell_midgrids(cells_per_axis, dim, refinement)
    n_cells, nsub, _ = mids.shape
    avg = np.zeros((n_cells, n_cells), dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        for a in range(n_cells):
            va = K.evaluate(mids[a][:, None, :], mids.reshape(-1, dim)[None, :, :])
            avg[a] = va.reshape(nsub, n_cells, nsub).mean(axis=(0, 2))
    np.fill_diagonal(avg, 0.0)
    mu = cells_per_axis ** (-dim)
    return GridOperator(avg * mu, dim, cells_per_axis)


def multiplication_grid_op(values, dim: int) -> GridOperator:
    values = np.asarray(values, dtype=complex)
    cpa = round(values.size ** (1.0 / dim))
    return GridOperator(np.diag(values), dim, cpa)


def commutator_grid_op(T: GridOperator, b_values) -> GridOperator:
    M = np.diag(np.asarray(b_values, dtype=complex))
    return GridOperator(T.matrix @ M - M @ T.matrix, T.dim, T.cells_per_axis)


def weak_factorization(f_values, q_cells, qt_cells, T: GridOperator) -> dict:
    """Decompose f = g T(h) - h conj(T* g) + ftilde on the grid.

    f must be supported on Q with zero mean; g is the far-cube indicator and
    the remainder ftilde is supported there with zero mean.  Raises when
    T*(g) vanishes somewhere on Q (the separation parameter is too small).
    """
    f = np.asarray(f_values, dtype=complex)
    q_cells = np.asarray(q_cells, dtype=int)
    qt_cells = np.asarray(qt_cells, dtype=int)
    if np.intersect1d(q_cells, qt_cells).size:
        raise ValueError("the two cubes must be disjoint")
    outside = np.setdiff1d(np.arange(f.size), q_cells)
    if np.abs(f[outside]).max(initial=0.0) > 0:
        raise ValueError("f must be supported on the near cube")
    if abs(f[q_cells].sum()) > 1e-9 * max(1.0, np.abs(f).sum()):
        raise ValueError("f must have zero mean on the near cube")

    g = np.zeros(f.size, dtype=complex)
    g[qt_cells] = 1.0
    tsg = T.adjoint_apply(g)
    denom = np.conj(tsg)
    if np.abs(denom[q_cells]).min() < 1e-14:
        raise RuntimeError("T*(g) vanishes on the near cube: increase the separation")
    h = np.zeros_like(f)
    h[q_cells] = -f[q_cells] / denom[q_cells]
    th = T.apply(h)
    ftilde = np.zeros_like(f)
    ftilde[qt_cells] = -th[qt_cells]

    recon = g * th - h * denom + ftilde
    mu = T.cell_measure

    def l2(v):
        return float(np.sqrt((np.abs(v) ** 2).sum() * mu))

    norm_f = l2(f)
    return {
        "g": g,
        "h": h,
        "ftilde": ftilde,
        "residual": float(np.abs(recon - f).max()),
        "ftilde_mean": complex(ftilde[qt_cells].sum() * mu),
        "h_ratio": l2(h) / norm_f if norm_f else 0.0,
        "remainder_ratio": l2(ftilde) / norm_f if norm_f else 0.0,
    }


def random_admissible_family(sys, rng):
    """Per Haar cube, a random cell vector supported there with sup <= |I|^{-1/2}."""
    fams = []
    for k in range(sys.params.depth):
        for cube in sys.cubes_by_scale[k]:
            cells = sys.cells_of(cube)
            bound = sys.measure(cube) ** -0.5
            e = np.zeros(sys.n_cells, dtype=complex)
            f = np.zeros(sys.n_cells, dtype=complex)
            e[cells] = bound * np.sqrt(rng.uniform(0, 1, cells.size)) * np.exp(2j * np.pi * rng.uniform(0, 1, cells.size))
            f[cells] = bound * np.sqrt(rng.uniform(0, 1, cells.size)) * np.exp(2j * np.pi * rng.uniform(0, 1, cells.size))
            fams.append((e, f))
    return fams


def nwo_quantity(V: GridOperator, families, p) -> float:
    """(sum_I |<e_I, V f_I>|^p)^(1/p) over the supplied admissible family."""
    mu = V.cell_measure
    total = 0.0
    for e, f in families:
        pair = np.vdot(e, V.apply(f)) * mu
        total += abs(pair) ** p
    return float(total ** (1.0 / p))


def testing_quantity(C: GridOperator, sys, b_values, A: int, p) -> float:
    """Separated-cube quadrant-set pairings against the commutator.

    For every dyadic cube I with a same-scale partner at distance ~ A cells,
    builds the four quadrant-matched (E_s, F_s) test pairs of each child of
    I and sums A^{dim p} |<e, C f>|^p.
    """
    from .median import quadrant_sets

    if sys.params.dim != C.dim:
        raise ValueError("system and operator dimensions differ")
    b_values = np.asarray(b_values, dtype=complex)
    mu = C.cell_measure
    total = 0.0
    for k in range(1, sys.params.depth):
        per = sys._axis_count(k)
        if sys.params.dim == 1:
            shift = max(1, min(A, per - 1))
        else:
            shift = max(1, min(A, per - 1))
        for cube in sys.cubes_by_scale[k]:
            idx = list(cube.index)
            idx[0] = idx[0] + shift
            if idx[0] >= per:
                idx[0] = cube.index[0] - shift
                if idx[0] < 0:
                    continue
            from .dyadic import CubeId

            partner = CubeId(k, tuple(idx))
            cells_i = sys.cells_of(cube)
            cells_hat = sys.cells_of(partner)
            meas = sys.measure(cube)
            theta, alpha, e_sets, f_sets = quadrant_sets(
                b_values[cells_i], b_values[cells_hat], meas, meas
            )
            for child in sys.children(cube):
                cells_q = sys.cells_of(child)
                meas_q = sys.measure(child)
                in_child = np.isin(cells_i, cells_q)
                for s in range(4):
                    e = np.zeros(C.n_cells, dtype=complex)
                    e[cells_hat[f_sets[s]]] = np.sqrt(meas_q) / meas
                    f = np.zeros(C.n_cells, dtype=complex)
                    sel = cells_i[np.intersect1d(e_sets[s], np.nonzero(in_child)[0])]
                    f[sel] = 1.0 / np.sqrt(meas_q)
                    pair = np.vdot(e, C.apply(f)) * mu
                    total += (A ** sys.params.dim * abs(pair)) ** p
    return float(total ** (1.0 / p))


def write_grid_operator(path, T: GridOperator):
    """Dense text export: a header line, then one `row col re im` per entry."""
    with open(path, "w") as fh:
        fh.write(f"# dim {T.dim} cells_per_axis {T.cells_per_axis}\n")
        for r in range(T.n_cells):
            for c in range(T.n_cells):
                z = T.matrix[r, c]
                if z != 0:
                    fh.write(f"{r} {c} {float(z.real)!r} {float(z.imag)!r}\n")


def read_grid_operator(path) -> GridOperator:
    dim = cells_per_axis = None
    entries = []
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                parts = line.split()
                dim, cells_per_axis = int(parts[2]), int(parts[4])
                continue
            r, c, re, im = line.split()
            entries.append((int(r), int(c), float(re) + 1j * float(im)))
    n = cells_per_axis**dim
    M = np.zeros((n, n), dtype=complex)
    for r, c, z in entries:
        M[r, c] = z
    return GridOperator(M, dim, cells_per_axis)
