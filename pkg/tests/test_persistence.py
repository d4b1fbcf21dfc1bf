import json
import math

import numpy as np
import pytest

from topoprobe.cloud import PointCloud, pairwise_distances
from topoprobe.errors import BadThreshold, TooLarge, UnsupportedDegree
from topoprobe.persistence import (
    AUTO,
    INFINITE,
    Barcode,
    PersistenceInterval,
    brute_force_persistence,
    enclosing_radius,
    mst_h0,
    vr_persistence,
)


def _dist(pts):
    return pairwise_distances(PointCloud(np.asarray(pts, dtype=np.float64)))


def _multiset(barcode, degree=None):
    return sorted(
        (iv.degree, iv.birth, iv.death)
        for iv in barcode.intervals
        if degree is None or iv.degree == degree
    )


def test_two_points():
    bc = mst_h0(_dist([[0.0], [1.0]]))
    assert _multiset(bc) == [(0, 0.0, 1.0), (0, 0.0, INFINITE)]


def test_collinear_0_1_3():
    bc = mst_h0(_dist([[0.0], [1.0], [3.0]]))
    deaths = sorted(iv.death for iv in bc.finite_of_degree(0))
    assert deaths == pytest.approx([1.0, 2.0])
    assert sum(1 for iv in bc.of_degree(0) if not iv.is_finite) == 1
    # cross-check against the full-complex reduction
    oracle = brute_force_persistence(_dist([[0.0], [1.0], [3.0]]), 0)
    assert _multiset(bc) == _multiset(oracle)


def test_unit_square_h0(unit_square):
    bc = mst_h0(pairwise_distances(unit_square))
    deaths = sorted(iv.death for iv in bc.finite_of_degree(0))
    assert deaths == pytest.approx([1.0, 1.0, 1.0], abs=1e-12)


def test_unit_square_h1(unit_square):
    bc = vr_persistence(pairwise_distances(unit_square), 1, AUTO)
    h1 = bc.of_degree(1)
    assert len(h1) == 1
    assert h1[0].birth == pytest.approx(1.0, abs=1e-12)
    assert h1[0].death == pytest.approx(math.sqrt(2.0), abs=1e-12)
    assert h1[0].is_finite


def test_equilateral_triangle_no_h1():
    pts = [[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3.0) / 2.0]]
    bc = vr_persistence(_dist(pts), 1, AUTO)
    # the loop is born and filled at the same scale; zero-length bars dropped
    assert bc.of_degree(1) == ()


def test_hexagon_h1():
    th = np.arange(6) * (math.pi / 3.0)
    pts = np.column_stack([np.cos(th), np.sin(th)])
    bc = vr_persistence(_dist(pts), 1, AUTO)
    h1 = bc.of_degree(1)
    assert len(h1) == 1
    assert h1[0].birth == pytest.approx(1.0, abs=1e-9)
    # death at the short-diagonal scale, confirmed by the full reduction
    assert h1[0].death == pytest.approx(math.sqrt(3.0), abs=1e-9)
    oracle = brute_force_persistence(_dist(pts), 1)
    assert _multiset(bc, 1) == pytest.approx(_multiset(oracle, 1))


def test_matches_oracle_on_random_clouds():
    rng = np.random.default_rng(17)
    for _ in range(40):
        n = int(rng.integers(2, 11))
        d = int(rng.integers(1, 4))
        pts = rng.random((n, d))
        dist = _dist(pts)
        fast = vr_persistence(dist, 1, AUTO)
        oracle = brute_force_persistence(dist, 1)
        fa = _multiset(fast)
        ob = _multiset(oracle)
        assert len(fa) == len(ob)
        for x, y in zip(fa, ob):
            assert x[0] == y[0]
            assert x[1] == pytest.approx(y[1], abs=1e-9)
            assert x[2] == pytest.approx(y[2], abs=1e-9)


def test_degree0_count_is_n():
    rng = np.random.default_rng(23)
    for n in (1, 2, 7, 30):
        bc = mst_h0(_dist(rng.random((n, 2))))
        assert len(bc.of_degree(0)) == n
        assert sum(1 for iv in bc.of_degree(0) if not iv.is_finite) == 1


def test_vr_degree0_matches_mst(unit_square):
    dist = pairwise_distances(unit_square)
    assert _multiset(vr_persistence(dist, 0, AUTO)) == _multiset(mst_h0(dist))


def test_scale_equivariance():
    rng = np.random.default_rng(9)
    pts = rng.random((8, 2))
    base = vr_persistence(_dist(pts), 1, AUTO)
    scaled = vr_persistence(_dist(pts * 2.0), 1, AUTO)
    for a, b in zip(_multiset(base), _multiset(scaled)):
        assert a[0] == b[0]
        assert b[1] == pytest.approx(2.0 * a[1], rel=1e-12)
        if math.isfinite(a[2]):
            assert b[2] == pytest.approx(2.0 * a[2], rel=1e-12)


def test_permutation_invariance():
    rng = np.random.default_rng(31)
    pts = rng.random((9, 3))
    perm = rng.permutation(9)
    a = vr_persistence(_dist(pts), 1, AUTO)
    b = vr_persistence(_dist(pts[perm]), 1, AUTO)
    assert _multiset(a) == pytest.approx(_multiset(b))


def test_finite_threshold_caps_deaths():
    pts = [[0.0], [1.0], [3.0]]
    bc = mst_h0(_dist(pts))
    capped = vr_persistence(_dist(pts), 0, 1.5)
    # the merge at distance 2 is beyond the cap, so that component stays open
    finite = sorted(iv.death for iv in capped.finite_of_degree(0))
    assert finite == pytest.approx([1.0])
    assert sum(1 for iv in capped.of_degree(0) if not iv.is_finite) == 2
    assert len(bc.finite_of_degree(0)) == 2


def test_auto_equals_generous_threshold(unit_square):
    dist = pairwise_distances(unit_square)
    auto = vr_persistence(dist, 1, AUTO)
    wide = vr_persistence(dist, 1, 100.0)
    assert _multiset(auto) == pytest.approx(_multiset(wide))


def test_bad_arguments(unit_square):
    dist = pairwise_distances(unit_square)
    with pytest.raises(UnsupportedDegree):
        vr_persistence(dist, 2, AUTO)
    with pytest.raises(BadThreshold):
        vr_persistence(dist, 1, 0.0)
    with pytest.raises(BadThreshold):
        vr_persistence(dist, 1, -3.0)


def test_brute_force_too_large():
    rng = np.random.default_rng(1)
    with pytest.raises(TooLarge):
        brute_force_persistence(_dist(rng.random((13, 2))), 1)


def test_enclosing_radius():
    dist = _dist([[0.0], [1.0], [3.0]])
    # point at 1 sees max distance 2; the other two see 3
    assert enclosing_radius(dist) == pytest.approx(2.0)
    assert enclosing_radius(_dist([[4.0]])) == 0.0


def test_interval_validation():
    with pytest.raises(Exception):
        PersistenceInterval(2.0, 1.0, 0)
    with pytest.raises(UnsupportedDegree):
        PersistenceInterval(0.0, 1.0, 2)
    iv = PersistenceInterval(1.0, INFINITE, 0)
    assert not iv.is_finite


def test_barcode_json_and_csv(unit_square):
    bc = vr_persistence(pairwise_distances(unit_square), 1, AUTO)
    obj = json.loads(bc.to_json())
    assert obj["n_points"] == 4
    deaths = [iv["death"] for iv in obj["intervals"]]
    assert "inf" in deaths
    rows = bc.to_csv_rows()
    assert rows[0] == ("birth", "death", "degree")
    assert len(rows) == len(bc.intervals) + 1
    # repr round-trips every finite endpoint exactly
    for row, iv in zip(rows[1:], bc.intervals):
        assert float(row[0]) == iv.birth
        if iv.is_finite:
            assert float(row[1]) == iv.death


def test_barcode_of_degree_filters(unit_square):
    bc = vr_persistence(pairwise_distances(unit_square), 1, AUTO)
    assert {iv.degree for iv in bc.of_degree(0)} <= {0}
    assert {iv.degree for iv in bc.of_degree(1)} <= {1}
    assert len(bc.of_degree(0)) + len(bc.of_degree(1)) == len(bc.intervals)
