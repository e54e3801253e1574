"""Recognise closed paths, weakly closed paths, L-configurations, ladders and zig-zag walks."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Optional

from polyalg.errors import BudgetExceeded, InputError, SearchBudgetExceeded
from polyalg.grid import (
    HORIZONTAL,
    VERTICAL,
    Cell,
    Interval,
    Point,
    Polyomino,
    holes,
    inner_intervals,
    is_simple,
    is_thin,
    maximal_blocks,
    on_same_edge_interval,
)

ZIGZAG_INTERVAL_CAP = 10_000


def cells_touch(a: Cell, b: Cell) -> bool:
    """True when the closed unit squares share at least one vertex."""
    return abs(a.x - b.x) <= 1 and abs(a.y - b.y) <= 1


def share_edge(a: Cell, b: Cell) -> bool:
    return abs(a.x - b.x) + abs(a.y - b.y) == 1


def direction(a: Cell, b: Cell) -> tuple[int, int]:
    return (b.x - a.x, b.y - a.y)


@dataclass(frozen=True)
class ClosedPathSequence:
    cells: tuple[Cell, ...]
    weakly: bool = False

    def __len__(self) -> int:
        return len(self.cells)

    def __getitem__(self, i: int) -> Cell:
        # 1-based and cyclic, matching A_1..A_n with A_{n+1} = A_1
        return self.cells[(i - 1) % len(self.cells)]

    def index(self, cell: Cell) -> int:
        return self.cells.index(cell) + 1


def check_closed_path_sequence(cells) -> bool:
    """Independent checker of the four defining conditions of a closed path."""
    n = len(cells)
    if n <= 5 or len(set(cells)) != n:
        return False
    for i in range(n):
        if not share_edge(cells[i], cells[(i + 1) % n]):
            return False
    for i in range(n):
        vi = set(cells[i].vertices())
        for j in range(n):
            d = min((i - j) % n, (j - i) % n)
            if d > 2 and vi & set(cells[j].vertices()):
                return False
    return True


def check_weakly_sequence(cells) -> bool:
    """Operational weakly-closed-path condition (see module docs of :func:`weakly_closed_path`)."""
    n = len(cells)
    if n <= 5 or len(set(cells)) != n:
        return False
    for i in range(n - 1):
        if not share_edge(cells[i], cells[i + 1]):
            return False
    first, last = cells[0], cells[-1]
    if share_edge(first, last) or len(set(first.vertices()) & set(last.vertices())) != 1:
        return False
    for i in range(n):
        vi = set(cells[i].vertices())
        for j in range(i + 1, n):
            d = min(j - i, n - (j - i))
            if d > 2 and vi & set(cells[j].vertices()):
                return False
            if j - i > 1 and not (i == 0 and j == n - 1) and share_edge(cells[i], cells[j]):
                return False
    return True


def _cycle_order(P: Polyomino) -> Optional[list[Cell]]:
    cells = P.cells
    nbrs = {c: [n for n in c.neighbours() if n in cells] for c in cells}
    if any(len(v) != 2 for v in nbrs.values()):
        return None
    start = min(cells)
    # lexicographically smallest cell has its neighbours east and north;
    # walking east first goes counterclockwise around the hole
    east = Cell(start.x + 1, start.y)
    if east not in cells:
        return None
    seq = [start, east]
    while True:
        a, b = seq[-2], seq[-1]
        nxt = [c for c in nbrs[b] if c != a]
        if len(nxt) != 1:
            return None
        if nxt[0] == start:
            break
        seq.append(nxt[0])
        if len(seq) > len(cells):
            return None
    if len(seq) != len(cells):
        return None
    return seq


def closed_path_sequence(P: Polyomino) -> Optional[ClosedPathSequence]:
    seq = _cycle_order(P)
    if seq is None or not check_closed_path_sequence(seq):
        return None
    return ClosedPathSequence(tuple(seq))


def weakly_closed_path(P: Polyomino) -> Optional[ClosedPathSequence]:
    """Recognise a weakly closed path.

    Operational definition: a sequence of distinct cells A_1..A_n, n > 5, in
    which consecutive cells share an edge, A_1 and A_n meet in exactly one
    vertex (the seam), no other pair of cells shares an edge, cells at cyclic
    distance at least three are vertex-disjoint, and the cycle encloses exactly
    one hole. Experimental: it is validated against |V(P)| - 1 = 2|P|.
    """
    cells = P.cells
    n = len(cells)
    if n <= 5:
        return None
    nbrs = {c: [m for m in c.neighbours() if m in cells] for c in cells}
    ends = sorted(c for c, v in nbrs.items() if len(v) == 1)
    if len(ends) != 2 or any(len(v) not in (1, 2) for v in nbrs.values()):
        return None
    if not cells_touch(ends[0], ends[1]):
        return None
    seq = [ends[0]]
    prev = None
    while len(seq) < n:
        cur = seq[-1]
        nxt = [m for m in nbrs[cur] if m != prev]
        if not nxt:
            return None
        prev = cur
        seq.append(nxt[0])
    if seq[-1] != ends[1]:
        return None
    if not check_weakly_sequence(seq):
        return None
    if len(holes(P)) != 1:
        return None
    # orient counterclockwise like the closed-path witnesses
    if _signed_area(seq) < 0:
        seq = seq[::-1]
    return ClosedPathSequence(tuple(seq), weakly=True)


def _signed_area(seq) -> float:
    pts = [(c.x + 0.5, c.y + 0.5) for c in seq]
    area = 0.0
    for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]):
        area += x1 * y2 - x2 * y1
    return area / 2


def seam_vertex(seq: ClosedPathSequence) -> Optional[Point]:
    if not seq.weakly:
        return None
    common = set(seq.cells[0].vertices()) & set(seq.cells[-1].vertices())
    return next(iter(common))


# ---------------------------------------------------------------- L and ladders

@dataclass(frozen=True)
class LConfiguration:
    cells: tuple[Cell, Cell, Cell, Cell, Cell]


@dataclass(frozen=True)
class Ladder:
    blocks: tuple[tuple[Cell, ...], ...]
    direction: str

    @property
    def steps(self) -> int:
        return len(self.blocks)


_DIRS = ((1, 0), (0, 1), (-1, 0), (0, -1))


def find_L_configurations(P: Polyomino) -> list[LConfiguration]:
    cells = P.cells
    found = set()
    for c in sorted(cells):
        for d1 in _DIRS:
            for d2 in _DIRS:
                if d1[0] * d2[0] + d1[1] * d2[1] != 0:
                    continue
                arm1 = [Cell(c.x + k * d1[0], c.y + k * d1[1]) for k in (2, 1)]
                arm2 = [Cell(c.x + k * d2[0], c.y + k * d2[1]) for k in (1, 2)]
                path = tuple(arm1 + [c] + arm2)
                if all(p in cells for p in path):
                    found.add(min(path, path[::-1]))
    return [LConfiguration(p) for p in sorted(found)]


def find_ladders(P: Polyomino, min_steps: int = 3) -> list[Ladder]:
    """Maximal ladders with at least ``min_steps`` blocks."""
    out = []
    for dirn in (HORIZONTAL, VERTICAL):
        blocks = [b for b in maximal_blocks(P, dirn) if b.rank >= 2]
        verts = [b.vertices() for b in blocks]
        adj: dict[int, list[tuple[int, tuple[Point, Point]]]] = {i: [] for i in range(len(blocks))}
        for i, j in combinations(range(len(blocks)), 2):
            common = verts[i] & verts[j]
            if len(common) == 2:
                a, b = sorted(common)
                adj[i].append((j, (a, b)))
                adj[j].append((i, (a, b)))
        chains = set()

        def extend(path, shared):
            grown = False
            for j, ab in adj[path[-1]]:
                if j in path:
                    continue
                if shared and _same_edge_interval(P, shared[-1], ab):
                    continue
                grown = True
                extend(path + [j], shared + [ab])
            if not grown and len(path) >= min_steps:
                key = tuple(path) if path[0] < path[-1] else tuple(reversed(path))
                chains.add(key)

        for i in range(len(blocks)):
            extend([i], [])
        # keep only chains not contained in a longer one
        for key in sorted(chains):
            s = set(key)
            if any(s < set(other) for other in chains):
                continue
            out.append(Ladder(tuple(blocks[i].cells for i in key), dirn))
    return out


def _same_edge_interval(P: Polyomino, e1, e2) -> bool:
    pts = list(e1) + list(e2)
    return all(on_same_edge_interval(P, pts[0], q) for q in pts[1:])


# ---------------------------------------------------------------- zig-zag walks

@dataclass(frozen=True)
class ZigZagWalk:
    intervals: tuple[Interval, ...]
    pivots: tuple[Point, ...]  # v_1..v_{l+1}, with v_{l+1} == v_1
    opposite_corners: tuple[Point, ...]  # z_i
    side_corners: tuple[Point, ...]  # u_i


def _opposite(interval: Interval, p: Point) -> Point:
    return Point(interval.lo.x + interval.hi.x - p.x, interval.lo.y + interval.hi.y - p.y)


def _intersection_points(I: Interval, J: Interval) -> Optional[tuple[Point, Point]]:
    lo = Point(max(I.lo.x, J.lo.x), max(I.lo.y, J.lo.y))
    hi = Point(min(I.hi.x, J.hi.x), min(I.hi.y, J.hi.y))
    if lo.x > hi.x or lo.y > hi.y:
        return None
    return lo, hi


def _meets_in(I: Interval, J: Interval) -> Optional[Point]:
    inter = _intersection_points(I, J)
    if inter is None or inter[0] != inter[1]:
        return None
    return inter[0]


def _zigzag_tables(P: Polyomino, cap: int):
    intervals = list(inner_intervals(P))
    if len(intervals) > cap:
        raise SearchBudgetExceeded(f"{len(intervals)} inner intervals exceed the cap of {cap}")
    # pairs of points lying together in some inner interval
    together: set[tuple[Point, Point]] = set()
    by_corner: dict[Point, list[int]] = {}
    for idx, I in enumerate(intervals):
        for p in I.corners():
            by_corner.setdefault(p, []).append(idx)
    return intervals, by_corner, together


def _jointly_contained(intervals, p: Point, q: Point) -> bool:
    lo = Point(min(p.x, q.x), min(p.y, q.y))
    hi = Point(max(p.x, q.x), max(p.y, q.y))
    # the smallest box containing p and q must fit in an inner interval;
    # inner intervals are closed under shrinking to any proper sub-box
    for I in intervals:
        if I.contains(lo) and I.contains(hi):
            return True
    return False


def has_zigzag_walk(P: Polyomino, cap: int = ZIGZAG_INTERVAL_CAP) -> Optional[ZigZagWalk]:
    """Shortest zig-zag walk of P (exhaustive, by increasing length), or None."""
    intervals, by_corner, _ = _zigzag_tables(P, cap)
    n = len(intervals)
    compat_cache: dict[tuple[Point, Point], bool] = {}

    def compatible(p: Point, q: Point) -> bool:
        key = (p, q) if p < q else (q, p)
        if key not in compat_cache:
            compat_cache[key] = not _jointly_contained(intervals, p, q)
        return compat_cache[key]

    # successor table: from (interval idx, entry corner) -> list of (exit corner, next idx)
    moves: dict[tuple[int, Point], list[tuple[Point, Point, int]]] = {}
    for i, I in enumerate(intervals):
        for v in I.corners():
            z = _opposite(I, v)
            others = [c for c in I.corners() if c not in (v, z)]
            opts = []
            for w in others:
                u = others[0] if w == others[1] else others[1]
                for j in by_corner.get(w, []):
                    if j == i:
                        continue
                    if _meets_in(I, intervals[j]) == w:
                        opts.append((w, u, j))
            moves[(i, v)] = opts

    best: Optional[ZigZagWalk] = None
    for length in range(3, n + 1):
        for start in range(n):
            I0 = intervals[start]
            for v1 in I0.corners():
                found = _zigzag_dfs(intervals, moves, compatible, start, v1, length)
                if found is not None:
                    best = found
                    break
            if best is not None:
                break
        if best is not None:
            break
        if not _any_partial(intervals, moves, compatible, length):
            break
    if best is not None and not check_zigzag_walk(P, best):
        raise AssertionError("zig-zag witness failed independent verification")
    return best


def _zigzag_dfs(intervals, moves, compatible, start, v1, length):
    """Walks of exactly ``length`` intervals starting at ``start`` (minimum index)."""
    I0 = intervals[start]
    z1 = _opposite(I0, v1)

    def rec(seq, pivots, zs, us):
        i = seq[-1]
        v = pivots[-1]
        for w, u, j in moves[(i, v)]:
            if len(seq) == length:
                # closing move: next interval must be the first one, at v1
                continue
            if j <= start and j != start:
                continue
            if j == start:
                continue
            if j in seq:
                continue
            J = intervals[j]
            zj = _opposite(J, w)
            if not all(compatible(zj, z) for z in zs):
                continue
            res = rec(seq + [j], pivots + [w], zs + [zj], us + [u])
            if res is not None:
                return res
        if len(seq) == length:
            # try to close: exit corner w of the last interval equals v1, and last meets first in v1
            I = intervals[i]
            z = _opposite(I, v)
            for w in I.corners():
                if w in (v, z) or w != v1:
                    continue
                if _meets_in(I, I0) != v1:
                    continue
                u = [c for c in I.corners() if c not in (v, z, w)][0]
                return ZigZagWalk(
                    tuple(intervals[k] for k in seq),
                    tuple(pivots) + (v1,),
                    tuple(zs),
                    tuple(us) + (u,),
                )
        return None

    return rec([start], [v1], [z1], [])


def _any_partial(intervals, moves, compatible, length) -> bool:
    """Whether some valid partial walk of ``length`` intervals exists at all."""
    n = len(intervals)

    def rec(seq, v, zs):
        if len(seq) == length:
            return True
        for w, u, j in moves[(seq[-1], v)]:
            if j in seq:
                continue
            zj = _opposite(intervals[j], w)
            if all(compatible(zj, z) for z in zs) and rec(seq + [j], w, zs + [zj]):
                return True
        return False

    for s in range(n):
        for v in intervals[s].corners():
            if rec([s], v, [_opposite(intervals[s], v)]):
                return True
    return False


def check_zigzag_walk(P: Polyomino, walk: ZigZagWalk) -> bool:
    """Re-verify conditions (1)-(3) directly from the definitions."""
    ivs = walk.intervals
    l = len(ivs)
    inner = set(inner_intervals(P))
    if l < 3 or len(set(ivs)) != l or any(I not in inner for I in ivs):
        return False
    v = walk.pivots
    if len(v) != l + 1 or v[0] != v[-1]:
        return False
    for i, I in enumerate(ivs):
        corners = {I.lo, I.hi}
        anti = set(I.anti_diagonal)
        a, b = v[i], walk.opposite_corners[i]
        c, d = walk.side_corners[i], v[i + 1]
        if not (({a, b} == corners and {c, d} == anti) or ({a, b} == anti and {c, d} == corners)):
            return False
        pts_i = _box_points(I)
        nxt = ivs[(i + 1) % l]
        if pts_i & _box_points(nxt) != {v[i + 1]}:
            return False
        if not on_same_edge_interval(P, v[i], v[i + 1]):
            return False
    allint = list(inner)
    for i, j in combinations(range(l), 2):
        zi, zj = walk.opposite_corners[i], walk.opposite_corners[j]
        if any(J.contains(zi) and J.contains(zj) for J in allint):
            return False
    return True


def _box_points(I: Interval) -> set[Point]:
    return {Point(x, y) for x in range(I.lo.x, I.hi.x + 1) for y in range(I.lo.y, I.hi.y + 1)}


# ---------------------------------------------------------------- classification

@dataclass
class Classification:
    simple: bool
    thin: bool
    closed_path: Optional[ClosedPathSequence] = None
    weakly_closed_path: Optional[ClosedPathSequence] = None
    l_configurations: list = field(default_factory=list)
    ladders: list = field(default_factory=list)
    zigzag: Optional[ZigZagWalk] = None

    @property
    def path(self) -> Optional[ClosedPathSequence]:
        return self.closed_path or self.weakly_closed_path

    def to_json(self) -> dict:
        return {
            "simple": self.simple,
            "thin": self.thin,
            "closed_path": [list(c) for c in self.closed_path.cells] if self.closed_path else None,
            "weakly_closed_path": (
                [list(c) for c in self.weakly_closed_path.cells] if self.weakly_closed_path else None
            ),
            "l_configurations": [[list(c) for c in l.cells] for l in self.l_configurations],
            "ladders": [
                {"direction": l.direction, "steps": l.steps, "blocks": [[list(c) for c in b] for b in l.blocks]}
                for l in self.ladders
            ],
            "zigzag": (
                None
                if self.zigzag is None
                else {
                    "intervals": [[list(I.lo), list(I.hi)] for I in self.zigzag.intervals],
                    "pivots": [list(p) for p in self.zigzag.pivots],
                }
            ),
            "prime_expected": self.zigzag is None,
        }


def classify(P: Polyomino, ladder_steps: int = 3) -> Classification:
    cp = closed_path_sequence(P)
    wk = None if cp is not None else weakly_closed_path(P)
    return Classification(
        simple=is_simple(P),
        thin=is_thin(P),
        closed_path=cp,
        weakly_closed_path=wk,
        l_configurations=find_L_configurations(P),
        ladders=find_ladders(P, ladder_steps),
        zigzag=has_zigzag_walk(P),
    )


# ---------------------------------------------------------------- enumeration

MAX_ENUM_CELLS = 30


def enumerate_closed_paths(max_cells: int, budget: int = 10_000_000) -> Iterator[Polyomino]:
    """All closed paths with at most ``max_cells`` cells, one per translation class.

    Depth-first self-avoiding cycle search rooted at the lexicographically
    smallest cell, heading east first, so every cycle is produced once.
    """
    if max_cells > MAX_ENUM_CELLS:
        raise InputError(f"max_cells={max_cells} exceeds the desk-scale guard {MAX_ENUM_CELLS}")
    for seq in _closed_cycles(max_cells, budget):
        yield Polyomino(frozenset(seq))


def _closed_cycles(max_cells: int, budget: int):
    origin = Cell(0, 0)
    path = [origin, Cell(1, 0)]
    used = {origin, Cell(1, 0)}
    counter = [0]
    results = []

    def admissible(c: Cell) -> bool:
        return c.x > 0 or (c.x == 0 and c.y >= 0)

    def rec(limit: int):
        counter[0] += 1
        if counter[0] > budget:
            raise BudgetExceeded(f"closed-path search exceeded {budget} nodes")
        k = len(path)
        last = path[-1]
        for nxt in last.neighbours():
            if nxt in used or not admissible(nxt):
                continue
            if nxt == origin:
                continue
            # remaining cells needed to come back next to the origin
            dist = abs(nxt.x - origin.x) + abs(nxt.y - origin.y)
            new_limit = limit
            if k + dist > new_limit:
                continue
            ok = True
            for j in range(k - 2):
                if cells_touch(nxt, path[j]):
                    # allowed only if the cycle will close within distance 2 of j
                    if j == 0:
                        new_limit = min(new_limit, k + 2)
                    elif j == 1:
                        new_limit = min(new_limit, k + 1)
                    else:
                        ok = False
                        break
                    if share_edge(nxt, path[j]) and not (j == 0):
                        ok = False
                        break
            if not ok or k + 1 > new_limit:
                continue
            path.append(nxt)
            used.add(nxt)
            if share_edge(nxt, origin) and len(path) > 5 and check_closed_path_sequence(path):
                results.append(tuple(path))
            elif not share_edge(nxt, origin):
                rec(new_limit)
            path.pop()
            used.discard(nxt)

    rec(max_cells)
    seen = set()
    for seq in sorted(results, key=lambda s: (len(s), s)):
        key = Polyomino(frozenset(seq)).key()
        if key in seen:
            continue
        seen.add(key)
        yield seq


def enumerate_weakly_closed_paths(max_cells: int, budget: int = 10_000_000) -> Iterator[Polyomino]:
    """Weakly closed paths with at most ``max_cells`` cells, up to translation."""
    if max_cells > MAX_ENUM_CELLS:
        raise InputError(f"max_cells={max_cells} exceeds the desk-scale guard {MAX_ENUM_CELLS}")
    seen = set()
    counter = [0]
    found = []

    def rec(path, used):
        counter[0] += 1
        if counter[0] > budget:
            raise BudgetExceeded(f"weakly-closed-path search exceeded {budget} nodes")
        first, last = path[0], path[-1]
        for nxt in last.neighbours():
            if nxt in used:
                continue
            bad = False
            for j, c in enumerate(path[:-2]):
                if share_edge(nxt, c):
                    bad = True
                    break
            if bad:
                continue
            new = path + [nxt]
            if len(new) > 5 and cells_touch(nxt, first) and not share_edge(nxt, first):
                if check_weakly_sequence(new):
                    P = Polyomino(frozenset(new))
                    if weakly_closed_path(P) is not None:
                        key = P.key()
                        if key not in seen:
                            seen.add(key)
                            found.append(P)
                continue
            if len(new) >= max_cells:
                continue
            dist = abs(nxt.x - first.x) + abs(nxt.y - first.y)
            if len(new) + dist - 2 > max_cells:
                continue
            # early vertex-disjointness pruning against cells far back in the path
            k = len(new) - 1
            if any(cells_touch(nxt, path[j]) for j in range(1, k - 2)):
                continue
            rec(new, used | {nxt})

    origin = Cell(0, 0)
    rec([origin], {origin})
    found.sort(key=lambda P: (len(P), P.key()))
    yield from found
