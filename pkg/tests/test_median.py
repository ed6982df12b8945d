import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import parahaar.median as med
from parahaar.median import (QuadrantFrame, WeightedPointSet, complex_median,
                             halfplane_median, quadrant_masses, quadrant_sets,
                             quadrant_split, read_frame_file, read_point_file,
                             write_frame_file, write_point_file)


def masses_ok(pts, frame, factor=16.0):
    masses = quadrant_masses(pts, frame)
    return bool(np.all(masses >= pts.total / factor - 1e-12 * max(1.0, pts.total)))


def test_empty_rejected():
    with pytest.raises(ValueError):
        WeightedPointSet([], [])
    with pytest.raises(ValueError):
        WeightedPointSet([1.0], [0.0])


def test_halfplane_examples():
    pts = WeightedPointSet([-1.0, 1.0], [1.0, 1.0])
    assert halfplane_median(pts, 0.0) == -1.0  # the inf rule
    single = WeightedPointSet([0.3 + 0.4j], [2.0])
    a = halfplane_median(single, 0.7)
    u = med._direction(0.7)
    proj = 0.3 * u.real + 0.4 * u.imag
    assert a == pytest.approx(proj)


def test_halfplane_random(rng):
    for _ in range(300):
        n = int(rng.integers(1, 50))
        pts = WeightedPointSet(rng.standard_normal(n) + 1j * rng.standard_normal(n),
                               rng.uniform(0.1, 2.0, n))
        ang = float(rng.uniform(0, np.pi))
        a = halfplane_median(pts, ang)
        u = med._direction(ang)
        proj = pts.z.real * u.real + pts.z.imag * u.imag
        assert pts.w[proj <= a].sum() >= pts.total / 2 - 1e-12
        assert pts.w[proj >= a].sum() >= pts.total / 2 - 1e-12


def test_quadrant_split_examples(rng):
    pts = WeightedPointSet([1, -1, 1j, -1j], [1.0] * 4)
    c, a1, a2, masses = quadrant_split(pts)
    assert np.all(masses >= 1.0)
    same = WeightedPointSet([2 + 3j] * 5, [1.0] * 5)
    _, _, _, m2 = quadrant_split(same)
    assert np.all(m2 == 5.0)
    for _ in range(200):
        n = int(rng.integers(1, 60))
        p = WeightedPointSet(rng.standard_normal(n) + 1j * rng.standard_normal(n),
                             rng.uniform(0.1, 2.0, n))
        _, _, _, m = quadrant_split(p)
        assert np.all(m >= p.total / 4 - 1e-12 * p.total)


def test_median_examples():
    pts = WeightedPointSet([1, -1, 1j, -1j], [1.0] * 4)
    frame = complex_median(pts)
    assert np.all(quadrant_masses(pts, frame) >= 1.0)
    tri = WeightedPointSet([0, 1, 1 + 1j], [1.0] * 3)
    assert masses_ok(tri, complex_median(tri))
    atom = WeightedPointSet([0.5 - 0.25j], [3.0])
    f = complex_median(atom)
    assert np.all(quadrant_masses(atom, f) == 3.0)


def test_median_random_batch(rng):
    med.stats.reset()
    for _ in range(250):
        n = int(rng.integers(1, 70))
        pts = WeightedPointSet(rng.standard_normal(n) + 1j * rng.standard_normal(n),
                               rng.uniform(0.25, 2.0, n))
        assert masses_ok(pts, complex_median(pts))
    assert med.stats.fallbacks == 0


def test_median_degenerate_families(rng):
    med.stats.reset()
    for t in range(200):
        kind = t % 4
        if kind == 0:  # duplicates
            n = int(rng.integers(2, 25))
            pts = WeightedPointSet(np.repeat(complex(rng.standard_normal(),
                                                     rng.standard_normal()), n),
                                   np.full(n, 0.5))
        elif kind == 1:  # collinear, random direction
            n = int(rng.integers(2, 40))
            d = np.exp(1j * rng.uniform(0, np.pi))
            pts = WeightedPointSet(rng.standard_normal(n) * d + 1j * 0.3,
                                   rng.integers(1, 4, n) * 0.25)
        elif kind == 2:  # lattice ties
            n = int(rng.integers(4, 50))
            z = (rng.integers(-3, 4, n) + 1j * rng.integers(-3, 4, n)).astype(complex) * 0.5
            pts = WeightedPointSet(z, rng.integers(1, 4, n) * 0.5)
        else:  # near-degenerate clusters
            n = int(rng.integers(4, 30))
            centers = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            pts = WeightedPointSet(rng.choice(centers, n)
                                   + 1e-13 * rng.standard_normal(n), np.ones(n))
        assert masses_ok(pts, complex_median(pts))
    assert med.stats.fallbacks == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 40))
def test_median_property(seed, n):
    rng = np.random.default_rng(seed)
    pts = WeightedPointSet(rng.standard_normal(n) + 1j * rng.standard_normal(n),
                           rng.uniform(0.1, 3.0, n))
    assert masses_ok(pts, complex_median(pts))


def test_equivariance_certificates(rng):
    # the transformed frame of the original set certifies the transformed set
    for _ in range(40):
        n = int(rng.integers(3, 40))
        pts = WeightedPointSet(rng.standard_normal(n) + 1j * rng.standard_normal(n),
                               rng.uniform(0.5, 1.5, n))
        frame = complex_median(pts)
        a = complex(rng.standard_normal(), rng.standard_normal())
        if abs(a) < 0.1:
            a = 1.0 + 0.5j
        b = complex(rng.standard_normal(), rng.standard_normal())
        moved = WeightedPointSet(a * pts.z + b, pts.w)
        rot = np.angle(a)
        theta_new = (frame.theta + rot) % math.pi
        center_new = a * frame.center + b
        flip = (frame.theta + rot) % (2 * math.pi) >= math.pi
        new = med._normalize_frame(theta_new, center_new)
        assert masses_ok(moved, new)


def test_boundary_atom_in_all_quadrants():
    frame = QuadrantFrame(0.0, 0.0, 0.0)
    pts = WeightedPointSet([0.0, 2.0 + 2.0j], [1.0, 1.0])
    masses = quadrant_masses(pts, frame)
    assert np.allclose(masses, [2.0, 1.0, 1.0, 1.0])


def test_far_frame_single_quadrant():
    frame = QuadrantFrame(0.0, -10.0, -10.0)  # center far down-left
    pts = WeightedPointSet([1 + 1j, 2 + 3j], [1.0, 2.0])
    masses = quadrant_masses(pts, frame)
    assert masses.max() == 3.0 and sorted(masses)[:3] == [0.0, 0.0, 0.0]


def test_masses_match_sign_oracle(rng):
    for _ in range(100):
        n = int(rng.integers(1, 30))
        pts = WeightedPointSet(rng.standard_normal(n) + 1j * rng.standard_normal(n),
                               rng.uniform(0.1, 1.0, n))
        frame = QuadrantFrame(float(rng.uniform(0, np.pi)),
                              float(rng.standard_normal()),
                              float(rng.standard_normal()))
        masses = quadrant_masses(pts, frame)
        u = med._direction(frame.theta)
        s = (pts.z * np.conj(u)).real - frame.c2
        t = (pts.z * np.conj(1j * u)).real - frame.c1
        tol = 1e-12 * max(pts.scale(), abs(frame.c1), abs(frame.c2), 1.0)
        expect = [pts.w[(s >= -tol) & (t >= -tol)].sum(),
                  pts.w[(s <= tol) & (t >= -tol)].sum(),
                  pts.w[(s <= tol) & (t <= tol)].sum(),
                  pts.w[(s >= -tol) & (t <= tol)].sum()]
        assert np.allclose(masses, expect)


def test_quadrant_sets_trivial():
    theta, alpha, e_sets, f_sets = quadrant_sets(np.array([1 + 1j, 2.0]),
                                                 np.full(4, 5.0 + 1j))
    assert alpha == pytest.approx(5.0 + 1j)
    for s in range(4):
        assert len(f_sets[s]) == 4  # constant values land in every closed cone


def test_quadrant_sets_symmetric():
    vh = np.array([1.0, -1.0, 1j, -1j])
    theta, alpha, e_sets, f_sets = quadrant_sets(np.array([0.5]), vh, 1.0, 1.0)
    masses = [len(f) / 4.0 for f in f_sets]
    assert all(m >= 1 / 16 for m in masses)


def test_quadrant_sets_inequalities(rng):
    worst = -np.inf
    for _ in range(150):
        ni, nh = int(rng.integers(1, 25)), int(rng.integers(1, 25))
        vi = rng.standard_normal(ni) + 1j * rng.standard_normal(ni)
        vh = rng.standard_normal(nh) + 1j * rng.standard_normal(nh)
        theta, alpha, e_sets, f_sets = quadrant_sets(vi, vh)
        rot = np.exp(1j * theta)
        union = set()
        for s in range(4):
            union |= set(e_sets[s].tolist())
            spin = rot * np.exp(-1j * s * np.pi / 2)
            for xi in e_sets[s]:
                for xh in f_sets[s]:
                    dz = vi[xi] - vh[xh]
                    worst = max(worst, abs(vi[xi] - alpha) - 2 * abs(dz))
                    w = spin * dz
                    worst = max(worst, abs(w) - 2 * w.real)
                    worst = max(worst, abs(w.imag) - w.real)
        assert union == set(range(ni))  # the cones cover the near cube
    assert worst <= 1e-9


def test_point_and_frame_files(tmp_path, rng):
    pts = WeightedPointSet(rng.standard_normal(5) + 1j * rng.standard_normal(5),
                           rng.uniform(0.5, 1.5, 5))
    p = tmp_path / "pts.txt"
    write_point_file(p, pts)
    loaded = read_point_file(p)
    assert np.allclose(loaded.z, pts.z) and np.allclose(loaded.w, pts.w)
    frame = QuadrantFrame(1.234, -0.5, 0.75)
    fpath = tmp_path / "frame.txt"
    write_frame_file(fpath, frame)
    assert read_frame_file(fpath) == frame
