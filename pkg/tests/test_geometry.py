import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from densitycluster.clustering import (ClusterGraph, ClusterMap, ClusterNode,
                                       cluster_density_map)
from densitycluster.density import Viewport
from densitycluster.errors import ClusterNotFoundError, ParameterError
from densitycluster.geometry import (color_clusters, count_color_conflicts,
                                     decompose_rectangles, shape_for_cluster,
                                     to_data_space, trace_boundary)
from densitycluster.oracles import rasterize_rings

from conftest import one_component, region_pixels


def _cmap_from_mask(mask) -> ClusterMap:
    ids = np.where(np.asarray(mask, dtype=bool), 0, -1).astype(np.int32)
    return ClusterMap(ids)


# ------------------------------------------------------------------ tracing

def test_trace_single_pixel():
    ids = np.full((8, 8), -1, dtype=np.int32)
    ids[5, 3] = 0
    shape = trace_boundary(ClusterMap(ids), 0)
    assert shape.outer.vertices == ((3.0, 5.0), (4.0, 5.0), (4.0, 6.0), (3.0, 6.0))
    assert shape.holes == []
    assert shape.outer.signed_area() == 1.0


def test_trace_solid_block():
    ids = np.full((6, 6), -1, dtype=np.int32)
    ids[1:4, 2:5] = 0
    shape = trace_boundary(ClusterMap(ids), 0)
    assert shape.outer.vertices == ((2.0, 1.0), (5.0, 1.0), (5.0, 4.0), (2.0, 4.0))
    assert shape.holes == []


def test_trace_ring_with_hole():
    mask = np.zeros((5, 5), dtype=bool)
    mask[1:4, 1:4] = True
    mask[2, 2] = False
    shape = trace_boundary(_cmap_from_mask(mask), 0)
    assert shape.outer.vertices == ((1.0, 1.0), (4.0, 1.0), (4.0, 4.0), (1.0, 4.0))
    assert len(shape.holes) == 1
    hole = shape.holes[0]
    assert set(hole.vertices) == {(2.0, 2.0), (3.0, 2.0), (3.0, 3.0), (2.0, 3.0)}
    assert hole.signed_area() == -1.0
    assert hole.is_hole and not shape.outer.is_hole
    # rasterization round trip
    pixels = rasterize_rings(shape.outer, shape.holes)
    assert pixels == region_pixels(_cmap_from_mask(mask), 0)


def test_trace_unknown_cluster():
    with pytest.raises(ClusterNotFoundError):
        trace_boundary(_cmap_from_mask(np.ones((2, 2), dtype=bool)), 7)


def test_trace_diagonal_pair_8conn_single_ring():
    mask = np.zeros((4, 4), dtype=bool)
    mask[1, 1] = mask[2, 2] = True
    shape = trace_boundary(_cmap_from_mask(mask), 0, connectivity=8)
    assert rasterize_rings(shape.outer, shape.holes) == {(1, 1), (2, 2)}


def test_trace_pinch_with_cavity_round_trips():
    # region whose boundary touches a one-pixel cavity at a corner: under
    # 8-connectivity the cavity is an enclosed hole (4-connected background),
    # under 4-connectivity it leaks out through the diagonal gap and the
    # outer ring carves it instead
    mask = np.zeros((4, 5), dtype=bool)
    for x, y in [(1, 1), (1, 0), (2, 0), (3, 0), (3, 1), (3, 2), (2, 2)]:
        mask[y, x] = True
    for conn, n_holes in ((4, 0), (8, 1)):
        shape = trace_boundary(_cmap_from_mask(mask), 0, connectivity=conn)
        assert len(shape.holes) == n_holes
        assert rasterize_rings(shape.outer, shape.holes) == \
            region_pixels(_cmap_from_mask(mask), 0)


def test_trace_checkerboard_round_trip():
    # every pixel touches its neighbors only diagonally: one 8-connected
    # region full of pinch corners
    yy, xx = np.mgrid[0:6, 0:6]
    mask = (yy + xx) % 2 == 0
    cmap = _cmap_from_mask(mask)
    shape = trace_boundary(cmap, 0, connectivity=8)
    assert rasterize_rings(shape.outer, shape.holes) == region_pixels(cmap, 0)
    area = shape.outer.signed_area() + sum(h.signed_area() for h in shape.holes)
    assert area == float(mask.sum())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from([4, 8]))
def test_trace_round_trip_random_blobs(seed, conn):
    rng = np.random.default_rng(seed)
    h, w = int(rng.integers(1, 14)), int(rng.integers(1, 14))
    mask = rng.random((h, w)) < 0.55
    if not mask.any():
        mask[0, 0] = True
    mask = one_component(mask, conn)
    cmap = _cmap_from_mask(mask)
    shape = trace_boundary(cmap, 0, connectivity=conn)
    assert rasterize_rings(shape.outer, shape.holes) == region_pixels(cmap, 0)
    # region area equals outer area minus hole areas
    area = shape.outer.signed_area() + sum(h.signed_area() for h in shape.holes)
    assert area == float(mask.sum())


# ------------------------------------------------------------------ rects

def test_rects_square_merges_to_one():
    ids = np.full((4, 4), -1, dtype=np.int32)
    ids[1:3, 1:3] = 0
    assert decompose_rectangles(ClusterMap(ids), 0) == [(1, 1, 3, 3)]


def test_rects_l_tromino_two_rects():
    ids = np.full((3, 3), -1, dtype=np.int32)
    ids[0, 0] = 0   # (x=0, y=0)
    ids[1, 0] = 0   # (x=0, y=1)
    ids[1, 1] = 0   # (x=1, y=1)
    rects = decompose_rectangles(ClusterMap(ids), 0)
    assert len(rects) == 2
    covered = {(x, y) for x0, y0, x1, y1 in rects
               for y in range(y0, y1) for x in range(x0, x1)}
    assert covered == {(0, 0), (0, 1), (1, 1)}


def test_rects_unknown_cluster():
    with pytest.raises(ClusterNotFoundError):
        decompose_rectangles(_cmap_from_mask(np.ones((2, 2), dtype=bool)), 3)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_rects_exact_disjoint_cover(seed):
    rng = np.random.default_rng(seed)
    h, w = int(rng.integers(1, 32)), int(rng.integers(1, 32))
    mask = rng.random((h, w)) < 0.5
    if not mask.any():
        mask[h // 2, w // 2] = True
    cmap = _cmap_from_mask(mask)
    rects = decompose_rectangles(cmap, 0)
    covered = set()
    total = 0
    for x0, y0, x1, y1 in rects:
        assert x0 < x1 and y0 < y1
        cells = {(x, y) for y in range(y0, y1) for x in range(x0, x1)}
        assert not (covered & cells)  # pairwise disjoint
        covered |= cells
        total += (x1 - x0) * (y1 - y0)
    assert covered == region_pixels(cmap, 0)
    assert total == int(mask.sum())


# ------------------------------------------------------------------ transform

def test_to_data_space_identity_grid():
    vp = Viewport(0, 10, 0, 10, 10, 10)
    ids = np.full((10, 10), -1, dtype=np.int32)
    ids[0, 0] = 0
    shape = shape_for_cluster(ClusterMap(ids), 0)
    data = to_data_space(shape, vp)
    assert data.rects == [(0.0, 0.0, 1.0, 1.0)]
    assert data.outer.vertices == ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))


def test_to_data_space_last_pixel():
    vp = Viewport(0, 10, 0, 10, 10, 10)
    ids = np.full((10, 10), -1, dtype=np.int32)
    ids[9, 9] = 0
    data = to_data_space(shape_for_cluster(ClusterMap(ids), 0), vp)
    assert data.rects == [(9.0, 9.0, 10.0, 10.0)]


def test_to_data_space_round_trip():
    vp = Viewport(-3.5, 12.25, 100.0, 108.0, 64, 32)
    ids = np.full((32, 64), -1, dtype=np.int32)
    ids[4:9, 10:30] = 0
    ids[6, 15] = -1
    shape = shape_for_cluster(ClusterMap(ids), 0)
    data = to_data_space(shape, vp)
    inv = Viewport(0, vp.width, 0, vp.height, vp.width, vp.height)
    for ring_px, ring_data in [(shape.outer, data.outer)] + \
            list(zip(shape.holes, data.holes)):
        for (px, py), (dx, dy) in zip(ring_px.vertices, ring_data.vertices):
            assert abs((dx - vp.x_min) / vp.sx - px) < 1e-12
            assert abs((dy - vp.y_min) / vp.sy - py) < 1e-12


# ------------------------------------------------------------------ coloring

def _graph_with_edges(n, pairs) -> ClusterGraph:
    nodes = {i: ClusterNode(i, (0, 0), 1.0, 1) for i in range(n)}
    edges = {}
    from densitycluster.clustering import ClusterEdge
    for a, b in pairs:
        edges[(a, b)] = ClusterEdge((a, b), 1, 1.0, {a: 1.0, b: 1.0},
                                    {a: (0, 0), b: (0, 0)})
    return ClusterGraph(nodes, edges)


def test_color_adjacent_distinct():
    g = _graph_with_edges(2, [(0, 1)])
    colors = color_clusters(g, 10)
    assert colors[0] != colors[1]


def test_color_no_edges_all_same():
    g = _graph_with_edges(4, [])
    colors = color_clusters(g, 10)
    assert set(colors.values()) == {0}


def test_color_path_two_colors():
    g = _graph_with_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    colors = color_clusters(g, 2)
    assert count_color_conflicts(g, colors) == 0
    assert set(colors.values()) <= {0, 1}


def test_color_degenerate_palette_counts_conflicts():
    g = _graph_with_edges(3, [(0, 1), (1, 2), (0, 2)])
    colors = color_clusters(g, 1)
    assert set(colors.values()) == {0}
    assert count_color_conflicts(g, colors) == 3
    with pytest.raises(ParameterError):
        color_clusters(g, 0)


def test_color_corpus_no_conflicts_with_big_palette(fixture_corpus):
    for name, dm, params in fixture_corpus:
        cmap, graph = cluster_density_map(dm, params)
        if not graph.nodes:
            continue
        max_degree = max((graph.degree(c) for c in graph.nodes), default=0)
        colors = color_clusters(graph, max(max_degree + 1, 1))
        assert count_color_conflicts(graph, colors) == 0, name
        colors10 = color_clusters(graph, 10)
        if max_degree < 10:
            assert count_color_conflicts(graph, colors10) == 0, name
