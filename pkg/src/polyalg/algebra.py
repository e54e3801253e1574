"""Sparse polynomials under a lex order, inner 2-minors and Buchberger's algorithm.

Variables are identified with their rank in a :class:`VariableOrder`
(rank 0 is the greatest variable). A monomial is a tuple of ``(rank, exp)``
pairs sorted by rank, so lex comparison is a tuple comparison on
:func:`lex_key`.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from polyalg.errors import BudgetExceeded
from polyalg.grid import Interval, Point, Polyomino, inner_intervals

Monomial = tuple  # tuple[tuple[int, int], ...]

PAIR_BUDGET = 1_000_000


# ---------------------------------------------------------------- orders

@dataclass(frozen=True)
class VariableOrder:
    """Total order on vertices; ``ranked[0]`` is the greatest variable."""

    ranked: tuple[Point, ...]

    def __post_init__(self):
        if len(set(self.ranked)) != len(self.ranked):
            raise ValueError("variable order lists a vertex twice")

    @property
    def rank(self) -> dict[Point, int]:
        return {p: i for i, p in enumerate(self.ranked)}

    def __len__(self):
        return len(self.ranked)


# ---------------------------------------------------------------- monomials

def monomial(ranks: Iterable[int]) -> Monomial:
    exps: dict[int, int] = {}
    for r in ranks:
        exps[r] = exps.get(r, 0) + 1
    return tuple(sorted(exps.items()))


def lex_key(m: Monomial) -> tuple:
    return tuple((-r, e) for r, e in m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    d = dict(a)
    for r, e in b:
        d[r] = d.get(r, 0) + e
    return tuple(sorted(d.items()))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    db = dict(b)
    return all(db.get(r, 0) >= e for r, e in a)


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    """b / a, assuming a divides b."""
    d = dict(b)
    for r, e in a:
        d[r] -= e
    return tuple((r, e) for r, e in sorted(d.items()) if e)


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    d = dict(a)
    for r, e in b:
        d[r] = max(d.get(r, 0), e)
    return tuple(sorted(d.items()))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return not ({r for r, _ in a} & {r for r, _ in b})


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


# ---------------------------------------------------------------- polynomials

class Polynomial:
    """Immutable polynomial: terms sorted by strictly decreasing monomial."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | Iterable = ()):
        items = terms.items() if isinstance(terms, dict) else terms
        acc: dict = {}
        for m, c in items:
            acc[m] = acc.get(m, 0) + c
        self.terms = tuple(
            sorted(((m, c) for m, c in acc.items() if c != 0), key=lambda t: lex_key(t[0]), reverse=True)
        )

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        if not self.terms:
            return "Polynomial(0)"
        return "Polynomial(" + " + ".join(f"{c}*{m}" for m, c in self.terms) + ")"

    @property
    def lead(self) -> Monomial:
        return self.terms[0][0]

    @property
    def lead_coeff(self):
        return self.terms[0][1]

    def scale(self, c, m: Monomial = ()) -> Polynomial:
        return Polynomial([(mono_mul(t, m), k * c) for t, k in self.terms])

    def __sub__(self, other: Polynomial) -> Polynomial:
        return Polynomial(list(self.terms) + [(m, -c) for m, c in other.terms])

    def __add__(self, other: Polynomial) -> Polynomial:
        return Polynomial(list(self.terms) + list(other.terms))

    def monic(self) -> Polynomial:
        lc = self.lead_coeff
        if lc == 1:
            return self
        return Polynomial([(m, _div(c, lc)) for m, c in self.terms])


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int) and a % b == 0:
        return a // b
    return Fraction(a, b)


@dataclass(frozen=True)
class Binomial:
    lead: Monomial
    trail: Monomial
    lead_coeff: int = 1
    trail_coeff: int = -1

    def poly(self) -> Polynomial:
        return Polynomial([(self.lead, self.lead_coeff), (self.trail, self.trail_coeff)])


# ---------------------------------------------------------------- inner 2-minors

@dataclass(frozen=True)
class MinorDescriptor:
    """Order-free inner 2-minor x_a x_b - x_c x_d of an inner interval."""

    interval: Interval
    diagonal: tuple[Point, Point]
    anti_diagonal: tuple[Point, Point]


def inner_two_minors(P: Polyomino) -> list[MinorDescriptor]:
    return [MinorDescriptor(I, I.diagonal, I.anti_diagonal) for I in inner_intervals(P)]


def binomial_under(desc: MinorDescriptor, rank: dict[Point, int]) -> Binomial:
    m1 = monomial(rank[p] for p in desc.diagonal)
    m2 = monomial(rank[p] for p in desc.anti_diagonal)
    if lex_key(m1) > lex_key(m2):
        return Binomial(m1, m2, 1, -1)
    return Binomial(m2, m1, 1, -1)


def generators_under(P: Polyomino, order: VariableOrder) -> list[Binomial]:
    rank = order.rank
    return [binomial_under(d, rank) for d in inner_two_minors(P)]


# ---------------------------------------------------------------- S-polynomials and reduction

def _as_poly(f) -> Polynomial:
    return f.poly() if isinstance(f, Binomial) else f


def spoly(f, g, order: VariableOrder | None = None) -> Polynomial:
    """S-polynomial of two polynomials (already normalised under the order)."""
    f, g = _as_poly(f), _as_poly(g)
    lcm = mono_lcm(f.lead, g.lead)
    a = f.scale(Fraction(1) if f.lead_coeff != 1 else 1, mono_div(lcm, f.lead))
    b = g.scale(1, mono_div(lcm, g.lead))
    if f.lead_coeff != 1 or g.lead_coeff != 1:
        a = Polynomial([(m, _div(c, f.lead_coeff)) for m, c in a.terms])
        b = Polynomial([(m, _div(c, g.lead_coeff)) for m, c in b.terms])
    return a - b


def reduce(p, basis: Sequence, order: VariableOrder | None = None) -> Polynomial:
    """Full normal form: repeatedly rewrite the greatest reducible term by the first
    basis element whose lead divides it."""
    p = _as_poly(p)
    polys = [_as_poly(b) for b in basis]
    remainder: list = []
    current = dict(p.terms)
    while current:
        m = max(current, key=lex_key)
        c = current.pop(m)
        for b in polys:
            if mono_divides(b.lead, m):
                q = mono_div(m, b.lead)
                factor = _div(c, b.lead_coeff)
                for t, k in b.terms[1:]:
                    mt = mono_mul(t, q)
                    v = current.get(mt, 0) - factor * k
                    if v:
                        current[mt] = v
                    else:
                        current.pop(mt, None)
                break
        else:
            remainder.append((m, c))
    return Polynomial(remainder)


def monomial_normal_form(m: Monomial, basis: Sequence[Binomial]) -> tuple[Monomial, int]:
    """Normal form of a monomial under pure-difference binomials: (monomial, sign)."""
    sign = 1
    while True:
        for b in basis:
            if mono_divides(b.lead, m):
                m = mono_mul(mono_div(m, b.lead), b.trail)
                sign *= -b.trail_coeff * b.lead_coeff
                break
        else:
            return m, sign


def _binomial_spoly_reduces(f: Binomial, g: Binomial, basis: Sequence[Binomial]) -> bool:
    lcm = mono_lcm(f.lead, g.lead)
    u = mono_mul(mono_div(lcm, f.lead), f.trail)
    v = mono_mul(mono_div(lcm, g.lead), g.trail)
    if u == v:
        return True
    nu, su = monomial_normal_form(u, basis)
    nv, sv = monomial_normal_form(v, basis)
    return nu == nv and su == sv


# ---------------------------------------------------------------- Groebner bases

def _unit_binomials(gens) -> bool:
    return all(
        isinstance(g, Binomial) and g.lead_coeff == 1 and g.trail_coeff == -1 for g in gens
    )


def is_groebner(gens: Sequence, order: VariableOrder | None = None, budget: int = PAIR_BUDGET) -> bool:
    """Buchberger's criterion: every S-pair reduces to zero modulo ``gens``."""
    gens = list(gens)
    fast = _unit_binomials(gens)
    polys = [_as_poly(g) for g in gens]
    checked = 0
    for i, j in combinations(range(len(gens)), 2):
        if mono_coprime(polys[i].lead, polys[j].lead):
            continue
        checked += 1
        if checked > budget:
            raise BudgetExceeded(f"more than {budget} S-pairs")
        if fast:
            if not _binomial_spoly_reduces(gens[i], gens[j], gens):
                return False
        elif reduce(spoly(polys[i], polys[j]), polys):
            return False
    return True


def failing_pairs(gens: Sequence[Binomial], limit: int = 10) -> list[tuple[int, int]]:
    out = []
    for i, j in combinations(range(len(gens)), 2):
        if mono_coprime(gens[i].lead, gens[j].lead):
            continue
        if not _binomial_spoly_reduces(gens[i], gens[j], gens):
            out.append((i, j))
            if len(out) >= limit:
                break
    return out


def buchberger(gens: Sequence, order: VariableOrder | None = None, budget: int = PAIR_BUDGET) -> list[Polynomial]:
    """Reduced Gröbner basis (monic, inter-reduced, sorted by decreasing lead)."""
    G = [_as_poly(g).monic() for g in gens if _as_poly(g)]
    pairs: list = []
    processed: set[tuple[int, int]] = set()

    def push(i, j):
        lcm = mono_lcm(G[i].lead, G[j].lead)
        heapq.heappush(pairs, (mono_degree(lcm), lex_key(lcm), i, j))

    for i, j in combinations(range(len(G)), 2):
        push(i, j)
    popped = 0
    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        popped += 1
        if popped > budget:
            raise BudgetExceeded(f"pair queue exceeded {budget} pairs")
        processed.add((i, j))
        fi, fj = G[i], G[j]
        if mono_coprime(fi.lead, fj.lead):
            continue
        lcm = mono_lcm(fi.lead, fj.lead)
        if _chain_skip(G, i, j, lcm, processed):
            continue
        r = reduce(spoly(fi, fj), G)
        if r:
            G.append(r.monic())
            k = len(G) - 1
            for a in range(k):
                push(a, k)
    return interreduce(G)


def _chain_skip(G, i, j, lcm, processed) -> bool:
    for k in range(len(G)):
        if k in (i, j):
            continue
        if not mono_divides(G[k].lead, lcm):
            continue
        if (min(i, k), max(i, k)) in processed and (min(j, k), max(j, k)) in processed:
            return True
    return False


def interreduce(G: Sequence[Polynomial]) -> list[Polynomial]:
    G = [g.monic() for g in G if g]
    minimal = []
    for idx, g in enumerate(G):
        redundant = False
        for jdx, h in enumerate(G):
            if idx == jdx:
                continue
            if mono_divides(h.lead, g.lead) and (h.lead != g.lead or jdx < idx):
                redundant = True
                break
        if not redundant:
            minimal.append(g)
    out = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        r = Polynomial([g.terms[0]]) + reduce(Polynomial(g.terms[1:]), others)
        out.append(r.monic())
    out.sort(key=lambda p: lex_key(p.lead), reverse=True)
    return out


# ---------------------------------------------------------------- monomial ideals

@dataclass(frozen=True)
class MonomialIdeal:
    generators: frozenset  # minimal generators (antichain under divisibility)

    @classmethod
    def from_monomials(cls, monos: Iterable[Monomial]) -> MonomialIdeal:
        monos = sorted(set(monos), key=lambda m: (mono_degree(m), m))
        minimal: list[Monomial] = []
        for m in monos:
            if not any(mono_divides(g, m) for g in minimal):
                minimal.append(m)
        return cls(frozenset(minimal))

    @property
    def squarefree(self) -> bool:
        return all(e == 1 for m in self.generators for _, e in m)

    @property
    def quadratic(self) -> bool:
        return all(mono_degree(m) == 2 for m in self.generators)

    def relabel(self, order: VariableOrder) -> frozenset:
        """Generators as frozensets of vertex points (squarefree case)."""
        return frozenset(frozenset(order.ranked[r] for r, _ in m) for m in self.generators)


def initial_ideal(gb: Sequence, order: VariableOrder | None = None) -> MonomialIdeal:
    return MonomialIdeal.from_monomials(_as_poly(g).lead for g in gb)


def reduced_basis_equals_generators(gens: Sequence[Binomial], gb: Sequence[Polynomial]) -> bool:
    mine = sorted((g.poly() for g in gens), key=lambda p: p.terms)
    theirs = sorted(gb, key=lambda p: p.terms)
    return mine == theirs
