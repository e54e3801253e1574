import random

import pytest

from conftest import RING, SINGLE, WEAKLY, closed_corpus, poly, zigzag_paths
from polyalg.complex import h_vector
from polyalg.errors import BudgetExceeded, IncompleteOrder
from polyalg.hilbert import build_pipeline
from polyalg.shelling import (
    h_from_restrictions,
    label_runs,
    search_shelling,
    shelling_order,
    verify_shelling,
)


def is_shelling_by_definition(order) -> bool:
    """For all j < i some v in F_i - F_j and k < i with F_i - F_k = {v}."""
    order = [frozenset(f) for f in order]
    for i, Fi in enumerate(order):
        for j in range(i):
            if not any(Fi - order[k] == {v} for v in Fi - order[j] for k in range(i)):
                return False
    return True


def _trim(h):
    h = list(h)
    while len(h) > 1 and h[-1] == 0:
        h.pop()
    return h


def test_verify_matches_definition_on_random_orders():
    facets = list(build_pipeline(poly(RING)).complex.facets)
    rng = random.Random(3)
    seen = {True: 0, False: 0}
    for _ in range(30):
        order = facets[:]
        rng.shuffle(order)
        ok = verify_shelling(order).ok
        assert ok == is_shelling_by_definition(order)
        seen[ok] += 1
    assert seen[False]


def test_single_cell_any_order_shells():
    facets = list(build_pipeline(poly(SINGLE)).complex.facets)
    for order in (facets, facets[::-1]):
        verdict = verify_shelling(order)
        assert verdict.ok and [len(r) for r in verdict.restriction_sets] == [0, 1]


def test_non_shelling_witness():
    # two triangles sharing only a vertex
    order = [frozenset("abc"), frozenset("cde")]
    verdict = verify_shelling(order)
    assert not verdict.ok and verdict.witness == (1, 0)


def test_search_shelling_small():
    for cells in (SINGLE, RING):
        facets = build_pipeline(poly(cells)).complex.facets
        order = search_shelling(facets)
        assert order is not None and sorted(map(sorted, order)) == sorted(map(sorted, facets))
        assert verify_shelling(order).ok


def test_search_shelling_budget_and_failure():
    facets = build_pipeline(poly(RING)).complex.facets
    with pytest.raises(BudgetExceeded):
        search_shelling(facets, budget=3)
    assert search_shelling([frozenset("abc"), frozenset("cde")]) is None


def _certify(P):
    pipe = build_pipeline(P)
    cert = shelling_order(P, pipe.lab, pipe.complex.facets, pipe.complex.graph)
    assert verify_shelling(cert.ordered_facets).ok
    assert set(cert.ordered_facets) == set(pipe.complex.facets)
    assert len(cert.ordered_facets) == len(pipe.complex.facets)
    first = cert.ordered_facets[0]
    expected_first = frozenset(pipe.lab.y2) | ({pipe.lab.extra} if pipe.lab.extra else set())
    assert first == expected_first
    assert not cert.restriction_sets[0] and not cert.steps_per_facet[0]
    h = h_from_restrictions(cert.restriction_sets)
    assert _trim(h) == _trim(h_vector(pipe.complex.f_vector(), len(pipe.complex.facets[0])))
    return cert


@pytest.mark.parametrize("P", closed_corpus(14), ids=lambda P: f"n{len(P)}")
def test_constructed_order_on_corpus(P):
    _certify(P)


@pytest.mark.slow
@pytest.mark.parametrize("P", zigzag_paths(), ids=lambda P: f"n{len(P)}")
def test_constructed_order_on_zigzag(P):
    _certify(P)


@pytest.mark.parametrize("name", sorted(WEAKLY))
def test_constructed_order_on_weakly(name):
    _certify(poly(WEAKLY[name]))


def test_runs_partition_labels():
    lab = build_pipeline(poly(RING)).lab
    runs = label_runs(lab)
    assert sorted(i for r in runs for i in r) == list(range(1, 9))


def test_missing_facet_is_reported():
    P = poly(RING)
    pipe = build_pipeline(P)
    extra = frozenset(list(pipe.complex.facets[0])[:-1])
    with pytest.raises(IncompleteOrder) as info:
        shelling_order(P, pipe.lab, list(pipe.complex.facets) + [extra], pipe.complex.graph)
    assert extra in info.value.missing


def test_list_budget():
    P = poly(RING)
    pipe = build_pipeline(P)
    with pytest.raises(BudgetExceeded):
        shelling_order(P, pipe.lab, pipe.complex.facets, pipe.complex.graph, budget=4)
