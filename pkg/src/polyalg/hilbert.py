"""Hilbert series of K[P] read off the face ring of Δ(P), and the headline checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import networkx as nx

from polyalg.algebra import PAIR_BUDGET, Binomial, VariableOrder, generators_under, initial_ideal, is_groebner
from polyalg.complex import SimplicialComplex, conflict_graph, flag_complex, h_vector
from polyalg.errors import InputError, NoOrderFound
from polyalg.grid import Polyomino
from polyalg.order import DESC, Labelling, label_vertices, monomial_order
from polyalg.rook import BLOCK, RookPolynomial, rook_polynomial


@dataclass(frozen=True)
class HilbertSeries:
    """HP(t) = h(t) / (1 - t)^d with h(1) != 0."""

    h_polynomial: tuple[int, ...]
    krull_dim: int

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.h_polynomial):
            if c == 0 and k:
                continue
            coef = "" if c == 1 and k else str(c)
            terms.append(str(c) if k == 0 else f"{coef}t" + (f"^{k}" if k > 1 else ""))
        return f"({' + '.join(terms)}) / (1 - t)^{self.krull_dim}"

    def coefficient(self, k: int) -> int:
        """dim_K of the degree-k component, from the series expansion."""
        total = Fraction(0)
        d = self.krull_dim
        for i, c in enumerate(self.h_polynomial):
            if i <= k:
                total += c * _binom(k - i + d - 1, d - 1)
        return int(total)


def _binom(a: int, b: int) -> int:
    from math import comb

    return comb(a, b) if a >= 0 and b >= 0 else 0


def series_from_f_vector(f: Sequence[int]) -> HilbertSeries:
    """sum_i f_{i-1} t^i / (1-t)^i brought over (1-t)^d, then reduced."""
    d = len(f) - 1
    while d > 0 and f[d] == 0:
        d -= 1
    h = h_vector(f, d)
    # numerator is sum_i f_{i-1} t^i (1-t)^(d-i); cancel (1-t) while h(1) = 0
    h = list(h)
    while d > 0 and sum(h) == 0:
        h = _divide_by_one_minus_t(h)
        d -= 1
    while len(h) > 1 and h[-1] == 0:
        h.pop()
    return HilbertSeries(tuple(h), d)


def _divide_by_one_minus_t(h: list[int]) -> list[int]:
    # h(t) = (1 - t) q(t): q_k = sum_{i<=k} h_i
    q, run = [], 0
    for c in h[:-1]:
        run += c
        q.append(run)
    return q


@dataclass
class Pipeline:
    """Everything the headline identities need, computed once per polyomino."""

    P: Polyomino
    lab: Optional[Labelling]
    order: VariableOrder
    gens: list[Binomial]
    complex: SimplicialComplex
    y2_rule: str = DESC
    _gb_ok: Optional[bool] = field(default=None, repr=False)
    pair_budget: int = PAIR_BUDGET

    @property
    def gb_ok(self) -> bool:
        if self._gb_ok is None:
            self._gb_ok = is_groebner(self.gens, self.order, self.pair_budget)
        return self._gb_ok


def build_pipeline(
    P: Polyomino,
    lab: Optional[Labelling] = None,
    y2_rule: str = DESC,
    facet_budget: Optional[int] = None,
    pair_budget: int = PAIR_BUDGET,
) -> Pipeline:
    """Labelling, order, generators and Δ(P) for one polyomino.

    Without a labelling the path labelling is tried first; anything else falls
    back to the order of sorted vertices, accepted only if it gives a Gröbner
    basis.
    """
    if lab is None:
        try:
            lab = label_vertices(P)
        except InputError:
            lab = None
    if lab is not None:
        order = monomial_order(lab, y2_rule)
        gens = generators_under(P, order)
        gb_ok = None
    else:
        order = VariableOrder(tuple(sorted(P.vertices)))
        gens = generators_under(P, order)
        if not is_groebner(gens, order, pair_budget):
            raise NoOrderFound("no labelling and the default order is not a Gröbner order")
        gb_ok = True
    g = conflict_graph(initial_ideal(gens, order), order)
    cx = flag_complex(g) if facet_budget is None else flag_complex(g, facet_budget)
    return Pipeline(P, lab, order, gens, cx, y2_rule, gb_ok, pair_budget)


def h_polynomial(P: Polyomino, pipeline: Optional[Pipeline] = None) -> HilbertSeries:
    pipe = pipeline or build_pipeline(P)
    return series_from_f_vector(pipe.complex.f_vector())


@dataclass(frozen=True)
class HeadlineReport:
    h: tuple[int, ...]
    d: int
    rook: tuple[int, ...]
    rook_number: int
    equal: bool
    degree_eq_rook_number: bool
    krull_expected: int
    krull_ok: bool
    convention: str

    def to_json(self) -> dict:
        return {
            "h": list(self.h),
            "d": self.d,
            "rook": list(self.rook),
            "rook_number": self.rook_number,
            "equal": self.equal,
            "degree_eq_rook_number": self.degree_eq_rook_number,
            "krull_dim": self.d,
            "krull_expected": self.krull_expected,
            "krull_ok": self.krull_ok,
            "convention": self.convention,
        }


def headline_check(
    P: Polyomino, convention: str = BLOCK, pipeline: Optional[Pipeline] = None
) -> HeadlineReport:
    hs = h_polynomial(P, pipeline)
    rp: RookPolynomial = rook_polynomial(P, convention)
    expected = len(P.vertices) - len(P)
    return HeadlineReport(
        h=hs.h_polynomial,
        d=hs.krull_dim,
        rook=rp.coefficients,
        rook_number=rp.rook_number,
        equal=hs.h_polynomial == rp.coefficients,
        degree_eq_rook_number=len(hs.h_polynomial) - 1 == rp.rook_number,
        krull_expected=expected,
        krull_ok=hs.krull_dim == expected,
        convention=convention,
    )


def _quadratic_leads(gb: Sequence, order: VariableOrder) -> list[frozenset[int]]:
    out = []
    for g in gb:
        lead = g.lead if hasattr(g, "lead") else g.poly().lead
        if len(lead) == 2 and all(e == 1 for _, e in lead):
            out.append(frozenset(r for r, _ in lead))
    return out


def konig_check(
    P: Polyomino, lab: Optional[Labelling], gb: Sequence, order: Optional[VariableOrder] = None
) -> bool:
    """True when |P| basis elements have pairwise coprime leads.

    With a labelling the leads must be exactly the pairs x_i x_i'; without one
    a maximum matching on the quadratic leads decides.
    """
    if lab is None:
        if order is None:
            raise ValueError("need an order when no labelling is given")
        graph = nx.Graph()
        graph.add_edges_from(tuple(m) for m in _quadratic_leads(gb, order))
        return len(nx.max_weight_matching(graph, maxcardinality=True)) >= len(P)
    order = order or lab.order()
    rank = order.rank
    wanted = {frozenset((rank[u], rank[v])) for u, v in zip(lab.y1, lab.y2)}
    hits = wanted & set(_quadratic_leads(gb, order))
    if len(hits) < len(P):
        return False
    used: set[int] = set()
    for m in hits:
        if m & used:
            return False
        used |= m
    return True
