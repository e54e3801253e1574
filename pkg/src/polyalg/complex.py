"""The flag complex Δ(P) whose Stanley–Reisner ideal is in(I_P).

Faces of a flag complex are the independent sets of its conflict graph, so
facets are maximal independent sets (Bron–Kerbosch with pivoting on the
complement) and face counts come from independent-set counting. The
facet-union counter :func:`f_vector` is kept as the definitional path and is
cross-checked against the graph count in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Optional, Sequence

from polyalg.algebra import MonomialIdeal, VariableOrder, mono_degree
from polyalg.errors import BudgetExceeded, NotFlag
from polyalg.grid import Point, Polyomino

FACET_BUDGET = 1_000_000
FACE_BUDGET = 5_000_000


@dataclass(frozen=True)
class ConflictGraph:
    vertices: tuple[Point, ...]
    edges: frozenset[frozenset[Point]]

    def neighbours(self) -> dict[Point, set[Point]]:
        nb: dict[Point, set[Point]] = {v: set() for v in self.vertices}
        for e in self.edges:
            u, v = tuple(e)
            nb[u].add(v)
            nb[v].add(u)
        return nb

    def masks(self) -> tuple[list[Point], list[int]]:
        """Vertices in canonical order and neighbour bitmasks."""
        verts = sorted(self.vertices)
        pos = {v: i for i, v in enumerate(verts)}
        adj = [0] * len(verts)
        for e in self.edges:
            u, v = tuple(e)
            adj[pos[u]] |= 1 << pos[v]
            adj[pos[v]] |= 1 << pos[u]
        return verts, adj

    def is_independent(self, face: Iterable[Point]) -> bool:
        face = set(face)
        return not any(e <= face for e in self.edges)


def conflict_graph(in_ideal: MonomialIdeal, order: VariableOrder) -> ConflictGraph:
    edges = set()
    for m in in_ideal.generators:
        if mono_degree(m) != 2 or len(m) != 2:
            raise NotFlag(f"minimal generator of degree {mono_degree(m)} or not squarefree: {m}")
        (a, _), (b, _) = m
        edges.add(frozenset((order.ranked[a], order.ranked[b])))
    return ConflictGraph(tuple(order.ranked), frozenset(edges))


def _popcount(x: int) -> int:
    return bin(x).count("1")


def facets(g: ConflictGraph, budget: int = FACET_BUDGET) -> list[frozenset[Point]]:
    """All maximal independent sets, each sorted, listed in lex order."""
    verts, adj = g.masks()
    full = (1 << len(verts)) - 1
    # complement adjacency: u ~ v in the complement iff they do not conflict
    comp = [full & ~adj[i] & ~(1 << i) for i in range(len(verts))]
    out: list[int] = []

    def expand(r: int, p: int, x: int):
        if not p and not x:
            out.append(r)
            if len(out) > budget:
                raise BudgetExceeded(f"more than {budget} facets")
            return
        # pivot maximising |P ∩ N(u)|
        ux = p | x
        best, best_count = -1, -1
        while ux:
            low = ux & -ux
            u = low.bit_length() - 1
            c = _popcount(p & comp[u])
            if c > best_count:
                best, best_count = u, c
            ux ^= low
        cand = p & ~comp[best]
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            expand(r | low, p & comp[v], x & comp[v])
            p &= ~low
            x |= low
            cand ^= low

    expand(0, full, 0)
    result = [frozenset(verts[i] for i in range(len(verts)) if m >> i & 1) for m in out]
    result.sort(key=lambda f: sorted(f))
    return result


def count_independent_sets(g: ConflictGraph) -> list[int]:
    """Independent sets by size, i.e. f_{-1}, f_0, ... of the flag complex."""
    verts, adj = g.masks()
    memo: dict[int, tuple[int, ...]] = {}

    def count(mask: int) -> tuple[int, ...]:
        if not mask:
            return (1,)
        hit = memo.get(mask)
        if hit is not None:
            return hit
        # branch on the highest-degree vertex inside mask
        best, deg = -1, -1
        m = mask
        while m:
            low = m & -m
            v = low.bit_length() - 1
            d = _popcount(adj[v] & mask)
            if d > deg:
                best, deg = v, d
            m ^= low
        if deg == 0:
            k = _popcount(mask)
            res = tuple(comb(k, i) for i in range(k + 1))
        else:
            without = count(mask & ~(1 << best))
            with_ = count(mask & ~(1 << best) & ~adj[best])
            size = max(len(without), len(with_) + 1)
            acc = [0] * size
            for i, c in enumerate(without):
                acc[i] += c
            for i, c in enumerate(with_):
                acc[i + 1] += c
            res = tuple(acc)
        memo[mask] = res
        return res

    return list(count((1 << len(verts)) - 1))


def f_vector(facet_list: Sequence[Iterable[Point]], budget: int = FACE_BUDGET) -> list[int]:
    """Face counts (f_{-1}, f_0, ...) from the union of all subsets of the facets."""
    facet_list = [sorted(f) for f in facet_list]
    if not facet_list:
        raise ValueError("need at least one facet")
    seen: set[frozenset] = set()
    dim = max(len(f) for f in facet_list)
    counts = [0] * (dim + 1)
    for f in facet_list:
        k = len(f)
        for mask in range(1 << k):
            face = frozenset(f[i] for i in range(k) if mask >> i & 1)
            if face in seen:
                continue
            seen.add(face)
            counts[len(face)] += 1
            if len(seen) > budget:
                raise BudgetExceeded(f"more than {budget} faces")
    return counts


def h_vector(f: Sequence[int], d: int) -> list[int]:
    """h_k = sum_{i<=k} (-1)^(k-i) C(d-i, k-i) f_{i-1}, for k = 0..d."""
    f = list(f) + [0] * (d + 1 - len(f))
    return [sum((-1) ** (k - i) * comb(d - i, k - i) * f[i] for i in range(k + 1)) for k in range(d + 1)]


def is_pure(facet_list: Sequence[Iterable]) -> bool:
    return len({len(set(f)) for f in facet_list}) == 1


def dimension(facet_list: Sequence[Iterable]) -> int:
    return max(len(set(f)) for f in facet_list) - 1


@dataclass(frozen=True)
class SimplicialComplex:
    vertices: tuple[Point, ...]
    facets: tuple[frozenset[Point], ...]
    graph: Optional[ConflictGraph] = None

    @property
    def dimension(self) -> int:
        return dimension(self.facets)

    @property
    def pure(self) -> bool:
        return is_pure(self.facets)

    def f_vector(self) -> list[int]:
        if self.graph is not None:
            return count_independent_sets(self.graph)
        return f_vector(self.facets)

    def h_vector(self) -> list[int]:
        return h_vector(self.f_vector(), self.dimension + 1)


def flag_complex(g: ConflictGraph, budget: int = FACET_BUDGET) -> SimplicialComplex:
    return SimplicialComplex(tuple(sorted(g.vertices)), tuple(facets(g, budget)), g)


def krull_report(P: Polyomino, facet_list: Sequence[Iterable]) -> dict:
    dim_k = dimension(facet_list) + 1
    expected = len(P.vertices) - len(P)
    return {"dim_K_delta": dim_k, "expected": expected, "equal": dim_k == expected}
