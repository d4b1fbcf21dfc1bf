import math

import numpy as np
import pytest

from topoprobe.cloud import PointCloud, pairwise_distances
from topoprobe.descriptors import lifespan_sum
from topoprobe.errors import DegreeUnavailable, NegativeAlpha
from topoprobe.persistence import AUTO, mst_h0, vr_persistence


def _square_barcode(unit_square):
    return vr_persistence(pairwise_distances(unit_square), 1, AUTO)


def test_unit_square_degree0_alpha1(unit_square):
    val = lifespan_sum(_square_barcode(unit_square), 0, 1.0)
    assert val.value == pytest.approx(3.0, abs=1e-12)
    assert val.n_intervals == 3


def test_unit_square_degree1_alpha1(unit_square):
    val = lifespan_sum(_square_barcode(unit_square), 1, 1.0)
    assert val.value == pytest.approx(math.sqrt(2.0) - 1.0, abs=1e-12)
    assert val.n_intervals == 1


def test_unit_square_degree0_alpha2(unit_square):
    val = lifespan_sum(_square_barcode(unit_square), 0, 2.0)
    assert val.value == pytest.approx(3.0, abs=1e-12)


def test_alpha0_counts_intervals(unit_square):
    bc = _square_barcode(unit_square)
    assert lifespan_sum(bc, 0, 0.0).value == 3.0
    assert lifespan_sum(bc, 1, 0.0).value == 1.0


def test_single_point_is_zero():
    bc = mst_h0(pairwise_distances(PointCloud(np.array([[0.0, 0.0]]))))
    val = lifespan_sum(bc, 0, 1.0)
    assert val.value == 0.0
    assert val.n_intervals == 0


def test_infinite_bars_excluded():
    bc = mst_h0(pairwise_distances(PointCloud(np.array([[0.0], [2.0]]))))
    assert lifespan_sum(bc, 0, 1.0).value == pytest.approx(2.0)


def test_degree_unavailable(unit_square):
    bc = mst_h0(pairwise_distances(unit_square))
    with pytest.raises(DegreeUnavailable):
        lifespan_sum(bc, 1, 1.0)


def test_negative_alpha(unit_square):
    bc = mst_h0(pairwise_distances(unit_square))
    with pytest.raises(NegativeAlpha):
        lifespan_sum(bc, 0, -0.5)


def test_homogeneity():
    rng = np.random.default_rng(4)
    pts = rng.random((60, 3))
    for alpha in (0.5, 1.0, 2.0):
        base = lifespan_sum(mst_h0(pairwise_distances(PointCloud(pts))), 0, alpha)
        scaled = lifespan_sum(
            mst_h0(pairwise_distances(PointCloud(pts * 3.0))), 0, alpha
        )
        assert scaled.value == pytest.approx(3.0**alpha * base.value, rel=1e-12)


def test_monotone_in_alpha_when_lifespans_exceed_one():
    # all merge distances are > 1, so raising alpha raises every term
    cloud = PointCloud(np.array([[0.0], [2.0], [5.0], [9.0]]))
    bc = mst_h0(pairwise_distances(cloud))
    vals = [lifespan_sum(bc, 0, a).value for a in (0.5, 1.0, 1.5, 2.0)]
    assert all(x < y for x, y in zip(vals, vals[1:]))


def test_mst_identity_against_scipy():
    from scipy.sparse.csgraph import minimum_spanning_tree

    rng = np.random.default_rng(8)
    for _ in range(10):
        pts = rng.random((int(rng.integers(5, 80)), int(rng.integers(1, 5))))
        dist = pairwise_distances(PointCloud(pts))
        ours = lifespan_sum(mst_h0(dist), 0, 1.0).value
        ref = minimum_spanning_tree(dist.entries).sum()
        assert ours == pytest.approx(ref, rel=1e-9)


def test_json_obj(unit_square):
    val = lifespan_sum(_square_barcode(unit_square), 1, 1.0)
    obj = val.to_json_obj()
    assert obj == {
        "alpha": 1.0,
        "degree": 1,
        "value": val.value,
        "n_intervals": 1,
    }
