"""Finite d-adic systems on the unit cube.

A system enumerates the cubes of scales 0..N on [0,1)^dim, carries the Haar
wavelet basis (coarse indicator + one wavelet per cube/color), conditional
expectations and martingale differences, optional per-scale binary grid
shifts (realized cyclically on the finest cells, which keeps every parent the
exact union of its children), and the shifted-grid covering family.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "DyadicParams",
    "CubeId",
    "HaarIndex",
    "StepFunction",
    "GridShift",
    "FiniteDyadicSystem",
    "build_system",
    "haar_function",
    "expectation",
    "martingale_difference",
    "haar_transform",
    "haar_synthesize",
    "make_adjacent_family",
    "cover_cube",
    "LENGTH_RATIO_BOUND",
    "dilation_bound",
    "write_symbol_file",
    "read_symbol_file",
    "write_grid_shift",
    "read_grid_shift",
]

# Covering constants for the per-coordinate one-third-shift family: the
# returned cube never exceeds 6x the side of the input, and sits inside the
# 11-fold concentric dilation (6x side + worst-case off-centering).
LENGTH_RATIO_BOUND = 6.0


def dilation_bound(dim: int) -> float:
    """Frozen constant c such that cover_cube guarantees Q <= c*B."""
    return 11.0


@dataclass(frozen=True)
class DyadicParams:
    d: int
    depth: int
    dim: int = 1

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"branching factor must be >= 2, got {self.d}")
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if self.dim > 1 and self.d != 2:
            raise ValueError("dim > 1 requires per-coordinate branching d = 2")


@dataclass(frozen=True)
class CubeId:
    scale: int
    index: tuple

    def __post_init__(self):
        if not isinstance(self.index, tuple):
            object.__setattr__(self, "index", tuple(self.index))


@dataclass(frozen=True)
class HaarIndex:
    cube: CubeId
    color: int


class StepFunction:
    """Block-valued step function on the finest cells; values shape (cells, m, m)."""

    def __init__(self, values):
        values = np.asarray(values, dtype=complex)
        if values.ndim == 1:
            values = values[:, None, None]
        if values.ndim != 3 or values.shape[1] != values.shape[2]:
            raise ValueError("values must be (cells,) or (cells, m, m)")
        self.values = values

    @property
    def blockdim(self):
        return self.values.shape[1]

    @property
    def n_cells(self):
        return self.values.shape[0]

    def scalar(self):
        if self.blockdim != 1:
            raise ValueError("not a scalar step function")
        return self.values[:, 0, 0]

    def __add__(self, other):
        return StepFunction(self.values + other.values)

    def __sub__(self, other):
        return StepFunction(self.values - other.values)

    def __mul__(self, c):
        return StepFunction(self.values * c)

    __rmul__ = __mul__


@dataclass(frozen=True)
class GridShift:
    """Per-scale binary shift digits; omega[s] is a dim-bit mask for scale s."""

    omega: tuple

    def __post_init__(self):
        object.__setattr__(self, "omega", tuple(int(w) for w in self.omega))

    @staticmethod
    def random(depth, dim, rng):
        return GridShift(tuple(int(rng.integers(0, 2**dim)) for _ in range(depth)))


class FiniteDyadicSystem:
    def __init__(self, params: DyadicParams, shift: Optional[GridShift] = None):
        self.params = params
        d, N, dim = params.d, params.depth, params.dim
        if shift is not None:
            if d != 2:
                raise ValueError("grid shifts are defined for binary systems only")
            if len(shift.omega) != N:
                raise ValueError(
                    f"shift needs one digit per scale 0..{N-1}, got {len(shift.omega)}"
                )
            if any(w < 0 or w >= 2**dim for w in shift.omega):
                raise ValueError("shift digits must be dim-bit masks")
        self.shift = shift
        self.d_eff = d if dim == 1 else 2**dim
        self.n_colors = (d - 1) if dim == 1 else 2**dim - 1
        self.axis_cells = d**N if dim == 1 else 2**N
        self.n_cells = self.d_eff**N
        self.cell_measure = 1.0 / self.n_cells

        # per-axis cell offsets of the shifted grids, in finest-cell units
        self._axis_offset = np.zeros((dim, N + 1), dtype=np.int64)
        if shift is not None:
            for t in range(dim):
                for k in range(N, -1, -1):
                    off = 0
                    for s in range(k, N):
                        off += ((shift.omega[s] >> t) & 1) * 2 ** (N - s - 1)
                    self._axis_offset[t, k] = off

        self.cubes_by_scale = [
            [
                CubeId(k, idx)
                for idx in np.ndindex(*([self._axis_count(k)] * dim))
            ]
            for k in range(N + 1)
        ]
        self._cells = {}
        for k in range(N + 1):
            for cube in self.cubes_by_scale[k]:
                self._cells[cube] = self._compute_cells(cube)

        self.haar_indices = []
        for k in range(N):
            for cube in self.cubes_by_scale[k]:
                for color in range(1, self.n_colors + 1):
                    self.haar_indices.append(HaarIndex(cube, color))
        self.dim_basis = 1 + len(self.haar_indices)
        self.haar_pos = {h: 1 + r for r, h in enumerate(self.haar_indices)}

        self._basis = None
        self._avg = None

    def _axis_count(self, scale):
        return self.params.d**scale if self.params.dim == 1 else 2**scale

    def _axis_cell_range(self, t, scale, pos):
        per = self.axis_cells // self._axis_count(scale)
        start = pos * per + self._axis_offset[t, scale]
        return (np.arange(per) + start) % self.axis_cells

    def _compute_cells(self, cube: CubeId):
        dim = self.params.dim
        ranges = [self._axis_cell_range(t, cube.scale, cube.index[t]) for t in range(dim)]
        cells = ranges[0]
        for t in range(1, dim):
            cells = cells[:, None] + self.axis_cells**t * ranges[t][None, :]
            cells = cells.ravel()
        return np.sort(cells.astype(np.int64))

    def cells_of(self, cube: CubeId):
        return self._cells[cube]

    def measure(self, cube: CubeId):
        return float(self.d_eff ** (-cube.scale))

    def children(self, cube: CubeId):
        """Children in canonical order (Haar child q / bitmask beta order)."""
        k = cube.scale
        if k >= self.params.depth:
            raise ValueError("finest cubes have no children")
        dim = self.params.dim
        out = []
        if dim == 1:
            d = self.params.d
            base = cube.index[0] * d
            dig = 0
            if self.shift is not None:
                dig = self.shift.omega[k] & 1
            for q in range(d):
                out.append(CubeId(k + 1, ((base + dig + q) % self._axis_count(k + 1),)))
        else:
            digs = [0] * dim
            if self.shift is not None:
                digs = [(self.shift.omega[k] >> t) & 1 for t in range(dim)]
            for beta in range(2**dim):
                idx = tuple(
                    (2 * cube.index[t] + digs[t] + ((beta >> t) & 1))
                    % self._axis_count(k + 1)
                    for t in range(dim)
                )
                out.append(CubeId(k + 1, idx))
        return out

    def parent(self, cube: CubeId):
        if cube.scale == 0:
            return None
        first = self._cells[cube][0]
        for cand in self.cubes_by_scale[cube.scale - 1]:
            if first in set(self._cells[cand]):
                return cand
        raise RuntimeError("parent not found")

    def haar_values(self, h: HaarIndex):
        """Cell values of the wavelet h (unit L2 norm, zero mean)."""
        cube, color = h.cube, h.color
        if not (1 <= color <= self.n_colors):
            raise ValueError(f"color {color} out of range 1..{self.n_colors}")
        if cube.scale >= self.params.depth:
            raise ValueError("Haar cubes live at scales 0..N-1")
        vals = np.zeros(self.n_cells, dtype=complex)
        kids = self.children(cube)
        if self.params.dim == 1:
            d = self.params.d
            amp = d ** (cube.scale / 2.0)
            for q, kid in enumerate(kids):
                rot = (color * (q + 1)) % d
                if 2 * rot % d == 0:
                    phase = 1.0 if rot == 0 else -1.0  # exact for half turns
                else:
                    phase = np.exp(2j * np.pi * rot / d)
                vals[self._cells[kid]] = amp * phase
        else:
            amp = 2.0 ** (cube.scale * self.params.dim / 2.0)
            for beta, kid in enumerate(kids):
                sign = -1.0 if bin(beta & color).count("1") % 2 else 1.0
                vals[self._cells[kid]] = amp * sign
        return vals

    @property
    def basis_matrix(self):
        """Columns = basis step functions on cells (coarse first, then Haar)."""
        if self._basis is None:
            B = np.zeros((self.n_cells, self.dim_basis), dtype=complex)
            B[:, 0] = 1.0
            for r, h in enumerate(self.haar_indices):
                B[:, 1 + r] = self.haar_values(h)
            self._basis = B
        return self._basis

    @property
    def analysis_matrix(self):
        return self.basis_matrix.conj().T * self.cell_measure

    @property
    def cube_average_matrix(self):
        """avg[r, beta] = mean over Haar cube r of basis function beta."""
        if self._avg is None:
            cubes = [h.cube for h in self.haar_indices]
            # one row per Haar index; rows repeat across colors of one cube
            A = np.zeros((len(cubes), self.dim_basis), dtype=complex)
            B = self.basis_matrix
            cache = {}
            for r, cube in enumerate(cubes):
                if cube not in cache:
                    cells = self._cells[cube]
                    cache[cube] = B[cells].mean(axis=0)
                A[r] = cache[cube]
            self._avg = A
        return self._avg

    def scale_of_row(self):
        """Cube scale per basis position; -1 for the coarse slot."""
        out = np.full(self.dim_basis, -1, dtype=int)
        for r, h in enumerate(self.haar_indices):
            out[1 + r] = h.cube.scale
        return out

    def coeffs(self, f: StepFunction):
        """Basis coefficients, shape (dim_basis, m, m)."""
        return np.einsum("bc,cij->bij", self.analysis_matrix, f.values)

    def synthesize(self, coeffs):
        return StepFunction(np.einsum("cb,bij->cij", self.basis_matrix, coeffs))


def build_system(params: DyadicParams, shift: Optional[GridShift] = None):
    return FiniteDyadicSystem(params, shift)


def haar_function(sys: FiniteDyadicSystem, h: HaarIndex) -> StepFunction:
    return StepFunction(sys.haar_values(h))


def expectation(sys: FiniteDyadicSystem, f: StepFunction, k: int) -> StepFunction:
    """Conditional expectation onto scale-k cubes, broadcast to the cells."""
    if not (0 <= k <= sys.params.depth):
        raise ValueError(f"scale {k} outside 0..{sys.params.depth}")
    out = np.empty_like(f.values)
    for cube in sys.cubes_by_scale[k]:
        cells = sys.cells_of(cube)
        out[cells] = f.values[cells].mean(axis=0)
    return StepFunction(out)


def martingale_difference(sys: FiniteDyadicSystem, f: StepFunction, k: int) -> StepFunction:
    if not (1 <= k <= sys.params.depth):
        raise ValueError(f"difference scale {k} outside 1..{sys.params.depth}")
    return expectation(sys, f, k) - expectation(sys, f, k - 1)


def haar_transform(sys: FiniteDyadicSystem, f: StepFunction):
    """Return (coarse mean block, {HaarIndex: coefficient block})."""
    coeffs = sys.coeffs(f)
    table = {h: coeffs[1 + r] for r, h in enumerate(sys.haar_indices)}
    return coeffs[0], table


def haar_synthesize(sys: FiniteDyadicSystem, mean, table) -> StepFunction:
    mean = np.atleast_2d(np.asarray(mean, dtype=complex))
    m = mean.shape[0]
    coeffs = np.zeros((sys.dim_basis, m, m), dtype=complex)
    coeffs[0] = mean
    for h, block in table.items():
        coeffs[sys.haar_pos[h]] = np.atleast_2d(np.asarray(block, dtype=complex))
    return sys.synthesize(coeffs)


# ---------------------------------------------------------------------------
# Adjacent (one-third shifted) grid family and cube covering.


def _offset_at(scale: int, variant: int) -> Fraction:
    if variant == 0:
        return Fraction(0)
    h = Fraction(1, 2**scale) if scale >= 0 else Fraction(2 ** (-scale))
    return (Fraction(2, 3) if scale % 2 == 0 else Fraction(1, 3)) * h


@dataclass(frozen=True)
class AdjacentFamily:
    dim: int

    @property
    def n_grids(self):
        return 2**self.dim

    def variants(self, grid: int):
        return tuple((grid >> t) & 1 for t in range(self.dim))


@dataclass(frozen=True)
class CoveringCube:
    grid: int
    scale: int
    index: tuple
    lower: tuple  # Fractions, per axis
    side: Fraction

    def contains_point(self, x) -> bool:
        return all(lo <= xi <= lo + self.side for lo, xi in zip(self.lower, x))


def make_adjacent_family(dim: int) -> AdjacentFamily:
    if dim < 1:
        raise ValueError("dim must be >= 1")
    return AdjacentFamily(dim)


def cover_cube(lower: Sequence[float], side: float, family: AdjacentFamily) -> CoveringCube:
    """Smallest cube of the family containing B = prod [lower_t, lower_t+side).

    Guarantees side(Q) <= 6 side(B) and Q inside the 11-fold concentric
    dilation of B; fails loudly if B is not inside the unit window.
    """
    dim = family.dim
    lo = [Fraction(str(x)) if not isinstance(x, Fraction) else x for x in lower]
    L = Fraction(str(side)) if not isinstance(side, Fraction) else side
    if L <= 0:
        raise ValueError("cube side must be positive")
    if any(x < 0 or x + L > 1 for x in lo):
        raise ValueError("cube is outside the unit window")

    # largest scale k with 2^-k >= side, then walk upward in cube size; a fit
    # is guaranteed once the cell exceeds 3x the input side
    k = 0
    while Fraction(1, 2 ** (k + 1)) >= L:
        k += 1
    for scale in range(k, -5, -1):
        h = Fraction(1, 2**scale) if scale >= 0 else Fraction(2**-scale)
        for grid in range(family.n_grids):
            idx = []
            for t in range(dim):
                off = _offset_at(scale, family.variants(grid)[t])
                m0 = (lo[t] - off) // h
                # B_t fits in cell m0 iff its right endpoint stays inside
                if lo[t] + L <= off + (m0 + 1) * h:
                    idx.append(int(m0))
                else:
                    break
            if len(idx) == dim:
                return CoveringCube(
                    grid,
                    scale,
                    tuple(idx),
                    tuple(
                        _offset_at(scale, family.variants(grid)[t]) + idx[t] * h
                        for t in range(dim)
                    ),
                    h,
                )
    raise RuntimeError("no covering cube found; input exceeds the supported range")


# ---------------------------------------------------------------------------
# Text formats: symbols (Haar coefficient tables) and grid shifts.


def _cube_rank(sys: FiniteDyadicSystem, cube: CubeId) -> int:
    n = sys._axis_count(cube.scale)
    r = 0
    for t in reversed(range(sys.params.dim)):
        r = r * n + cube.index[t]
    return r


def _cube_from_rank(sys: FiniteDyadicSystem, scale: int, rank: int) -> CubeId:
    n = sys._axis_count(scale)
    idx = []
    for _ in range(sys.params.dim):
        idx.append(rank % n)
        rank //= n
    return CubeId(scale, tuple(idx))


def write_symbol_file(path, sys: FiniteDyadicSystem, mean, table):
    """Lines: `scale index color re im` (m=1) or `scale index color row col re im`."""
    mean = np.atleast_2d(np.asarray(mean, dtype=complex))
    m = mean.shape[0]
    with open(path, "w") as fh:
        fh.write(f"# blockdim {m}\n")
        if m == 1:
            fh.write(f"mean {float(mean[0,0].real)!r} {float(mean[0,0].imag)!r}\n")
        else:
            for r in range(m):
                for c in range(m):
                    fh.write(f"mean {r} {c} {float(mean[r,c].real)!r} {float(mean[r,c].imag)!r}\n")
        for h, block in table.items():
            block = np.atleast_2d(np.asarray(block, dtype=complex))
            rank = _cube_rank(sys, h.cube)
            if m == 1:
                z = block[0, 0]
                fh.write(f"{h.cube.scale} {rank} {h.color} {float(z.real)!r} {float(z.imag)!r}\n")
            else:
                for r in range(m):
                    for c in range(m):
                        z = block[r, c]
                        fh.write(
                            f"{h.cube.scale} {rank} {h.color} {r} {c} {float(z.real)!r} {float(z.imag)!r}\n"
                        )


def read_symbol_file(path, sys: FiniteDyadicSystem):
    mean = None
    m = 1
    table = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = int(line.split()[-1])
                mean = np.zeros((m, m), dtype=complex)
                continue
            parts = line.split()
            if parts[0] == "mean":
                if m == 1:
                    mean[0, 0] = float(parts[1]) + 1j * float(parts[2])
                else:
                    mean[int(parts[1]), int(parts[2])] = float(parts[3]) + 1j * float(parts[4])
                continue
            scale, rank, color = int(parts[0]), int(parts[1]), int(parts[2])
            h = HaarIndex(_cube_from_rank(sys, scale, rank), color)
            if h not in table:
                table[h] = np.zeros((m, m), dtype=complex)
            if m == 1:
                table[h][0, 0] = float(parts[3]) + 1j * float(parts[4])
            else:
                table[h][int(parts[3]), int(parts[4])] = float(parts[5]) + 1j * float(parts[6])
    return mean, table


def write_grid_shift(path, shift: GridShift, dim: int = 1):
    with open(path, "w") as fh:
        for w in shift.omega:
            fh.write(format(w, f"0{dim}b") + "\n")


def read_grid_shift(path) -> GridShift:
    digits = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                digits.append(int(line, 2))
    return GridShift(tuple(digits))
