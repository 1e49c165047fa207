import numpy as np
import pytest

from densitycluster.clustering import ClusterMap
from densitycluster.density import DensityMap, Viewport
from densitycluster.errors import ClusterNotFoundError, ParameterError
from densitycluster.oracles import (dense_convolution_oracle,
                                    flood_fill_components, rasterize_rings,
                                    steepest_ascent_oracle)
from densitycluster.geometry import PolygonRing


def _dm(vals):
    vals = np.asarray(vals, dtype=float)
    h, w = vals.shape
    return DensityMap(Viewport(0, w, 0, h, w, h), vals)


def test_ascent_monotone_ramp_single_cluster():
    vals = np.arange(1, 17, dtype=float).reshape(4, 4)
    cm = steepest_ascent_oracle(_dm(vals))
    assert cm.cluster_ids().tolist() == [0]
    assert (cm.ids == 0).all()


def test_ascent_plateau_single_cluster():
    vals = np.zeros((5, 5))
    vals[1:4, 1:4] = 2.0
    cm = steepest_ascent_oracle(_dm(vals))
    assert cm.cluster_ids().tolist() == [0]
    assert ((cm.ids == 0) == (vals > 0)).all()


def test_ascent_background_stays_background():
    cm = steepest_ascent_oracle(_dm(np.zeros((3, 3))))
    assert (cm.ids == -1).all()


def test_dense_oracle_zero_and_refusals():
    dm = _dm(np.zeros((4, 4)))
    assert not dense_convolution_oracle(dm, 2.0).values.any()
    big = DensityMap(Viewport(0, 200, 0, 4, 200, 4), np.zeros((4, 200)))
    with pytest.raises(ParameterError):
        dense_convolution_oracle(big, 1.0)
    with pytest.raises(ParameterError):
        dense_convolution_oracle(dm, -1.0)


def test_dense_oracle_superposition():
    vals = np.zeros((33, 33))
    vals[8, 8] = 1.0
    vals[24, 20] = 2.0
    combined = dense_convolution_oracle(_dm(vals), 2.0).values
    a = np.zeros((33, 33))
    a[8, 8] = 1.0
    b = np.zeros((33, 33))
    b[24, 20] = 2.0
    parts = (dense_convolution_oracle(_dm(a), 2.0).values
             + dense_convolution_oracle(_dm(b), 2.0).values)
    assert np.abs(combined - parts).max() <= 1e-9


def test_flood_fill_counts():
    ids = np.full((6, 6), -1, dtype=np.int32)
    ids[0:2, 0:2] = 0
    assert flood_fill_components(ClusterMap(ids), 0) == 1
    ids[4:6, 4:6] = 0
    assert flood_fill_components(ClusterMap(ids), 0, connectivity=8) == 2
    # the two blocks touch diagonally if extended
    ids2 = np.full((4, 4), -1, dtype=np.int32)
    ids2[0, 0] = 0
    ids2[1, 1] = 0
    assert flood_fill_components(ClusterMap(ids2), 0, connectivity=8) == 1
    assert flood_fill_components(ClusterMap(ids2), 0, connectivity=4) == 2
    with pytest.raises(ClusterNotFoundError):
        flood_fill_components(ClusterMap(ids2), 9)


def test_rasterize_unit_square():
    ring = PolygonRing(((3.0, 5.0), (4.0, 5.0), (4.0, 6.0), (3.0, 6.0)))
    assert rasterize_rings(ring, []) == {(3, 5)}
