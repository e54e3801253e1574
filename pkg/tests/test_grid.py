from itertools import product

import pytest

from conftest import RING, SINGLE, SQUARE, closed_corpus, poly
from polyalg.errors import Disconnected, EmptyInput, InputError
from polyalg.grid import (
    HORIZONTAL,
    VERTICAL,
    Cell,
    Interval,
    Point,
    edge_intervals,
    holes,
    inner_intervals,
    is_simple,
    is_thin,
    maximal_blocks,
    parse_polyomino,
)


def brute_inner_intervals(P):
    x0, y0, x1, y1 = P.bbox
    out = []
    for ax, ay, bx, by in product(range(x0, x1 + 1), range(y0, y1 + 1), range(x0, x1 + 1), range(y0, y1 + 1)):
        if ax < bx and ay < by:
            if all(Cell(x, y) in P.cells for x in range(ax, bx) for y in range(ay, by)):
                out.append(Interval(Point(ax, ay), Point(bx, by)))
    return sorted(out)


def test_parse_single_cell():
    P = parse_polyomino(SINGLE)
    assert len(P) == 1
    assert len(P.vertices) == 4
    assert len(P.edges) == 4


def test_parse_accepts_cells_dict_and_dedups():
    P = parse_polyomino({"cells": [[0, 0], [0, 0], [1, 0]]})
    assert len(P) == 2


def test_parse_rejects_disconnected_and_empty():
    with pytest.raises(Disconnected):
        parse_polyomino([[0, 0], [5, 5]])
    with pytest.raises(EmptyInput):
        parse_polyomino([])
    with pytest.raises(InputError):
        parse_polyomino([[0, "a"]])


def test_vertex_counts():
    assert len(poly(SQUARE).vertices) == 9
    assert len(poly(RING).vertices) == 16


def test_edges_shared_once():
    for P in (poly(SQUARE), poly(RING)):
        naive = [tuple(sorted(e)) for c in P.cells for e in c.edges()]
        shared = len(naive) - len(set(naive))
        assert len(P.edges) == len(naive) - shared


def test_inner_intervals_small():
    assert len(inner_intervals(poly(SINGLE))) == 1
    sq = inner_intervals(poly(SQUARE))
    assert len(sq) == 9
    sizes = sorted((I.hi.x - I.lo.x, I.hi.y - I.lo.y) for I in sq)
    assert sizes == [(1, 1)] * 4 + [(1, 2)] * 2 + [(2, 1)] * 2 + [(2, 2)]


def test_ring_inner_intervals_match_brute_force():
    # eight cells, eight 1x2/2x1 dominoes along the sides and four 1x3/3x1 bars
    P = poly(RING)
    found = sorted(inner_intervals(P))
    assert found == brute_inner_intervals(P)
    assert len(found) == 20


@pytest.mark.parametrize("P", closed_corpus(12), ids=lambda P: f"n{len(P)}")
def test_inner_intervals_brute_force_corpus(P):
    assert sorted(inner_intervals(P)) == brute_inner_intervals(P)
    for I in inner_intervals(P):
        assert set(I.corners()) <= P.vertices


def test_maximal_blocks():
    bar = poly([[0, 0], [1, 0], [2, 0]])
    assert [b.rank for b in maximal_blocks(bar, HORIZONTAL)] == [3]
    assert [b.rank for b in maximal_blocks(bar, VERTICAL)] == [1, 1, 1]
    ring = poly(RING)
    assert sorted(b.rank for b in maximal_blocks(ring, HORIZONTAL)) == [1, 1, 3, 3]
    assert sorted(b.rank for b in maximal_blocks(ring, VERTICAL)) == [1, 1, 3, 3]
    L = poly([[0, 0], [1, 0], [0, 1]])
    h = [b for b in maximal_blocks(L, HORIZONTAL) if b.rank == 2]
    v = [b for b in maximal_blocks(L, VERTICAL) if b.rank == 2]
    assert len(h) == len(v) == 1 and len(set(h[0].cells) & set(v[0].cells)) == 1


@pytest.mark.parametrize("P", closed_corpus(12), ids=lambda P: f"n{len(P)}")
def test_maximal_blocks_partition(P):
    for direction in (HORIZONTAL, VERTICAL):
        cells = [c for b in maximal_blocks(P, direction) for c in b.cells]
        assert sorted(cells) == sorted(P.cells)


def test_edge_intervals():
    single = poly(SINGLE)
    assert len(edge_intervals(single, HORIZONTAL)) == 2
    assert len(edge_intervals(single, VERTICAL)) == 2
    domino = poly([[0, 0], [1, 0]])
    assert all(len(run) == 3 for run in edge_intervals(domino, HORIZONTAL))
    ring = poly(RING)
    bottom = [run for run in edge_intervals(ring, HORIZONTAL) if run[0].y == 0]
    assert [len(run) for run in bottom] == [4]


def test_holes_and_thin():
    sq = poly(SQUARE)
    assert is_simple(sq) and not is_thin(sq)
    ring = poly(RING)
    hs = holes(ring)
    assert len(hs) == 1 and len(hs[0]) == 1 and is_thin(ring)
    two_hole = poly([[x, y] for x in range(4) for y in range(3) if (x, y) not in ((1, 1), (2, 1))])
    assert [len(h) for h in holes(two_hole)] == [2]


def test_canonical_is_translation_invariant():
    P = poly(RING)
    assert P.translate(5, -3).canonical() == P.canonical()
    assert P.translate(5, -3).key() == P.key()
