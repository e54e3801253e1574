"""Cells, vertices, intervals and blocks of polyominoes on the integer grid."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

from polyalg.errors import Disconnected, EmptyInput, InputError

HORIZONTAL = "horizontal"
VERTICAL = "vertical"


class Point(NamedTuple):
    x: int
    y: int

    def __add__(self, other):
        return Point(self.x + other[0], self.y + other[1])

    def leq(self, other: Point) -> bool:
        return self.x <= other.x and self.y <= other.y


class Cell(NamedTuple):
    """Unit cell identified by its lower-left corner."""

    x: int
    y: int

    @property
    def lower_left(self) -> Point:
        return Point(self.x, self.y)

    @property
    def upper_right(self) -> Point:
        return Point(self.x + 1, self.y + 1)

    @property
    def upper_left(self) -> Point:
        return Point(self.x, self.y + 1)

    @property
    def lower_right(self) -> Point:
        return Point(self.x + 1, self.y)

    def vertices(self) -> tuple[Point, Point, Point, Point]:
        return (self.lower_left, self.lower_right, self.upper_left, self.upper_right)

    def edges(self) -> tuple[tuple[Point, Point], ...]:
        a, d, c, b = self.vertices()
        return ((a, c), (c, b), (d, b), (a, d))

    def neighbours(self) -> tuple[Cell, Cell, Cell, Cell]:
        x, y = self
        return (Cell(x + 1, y), Cell(x, y + 1), Cell(x - 1, y), Cell(x, y - 1))


class Interval(NamedTuple):
    lo: Point
    hi: Point

    @property
    def proper(self) -> bool:
        return self.lo.x < self.hi.x and self.lo.y < self.hi.y

    @property
    def diagonal(self) -> tuple[Point, Point]:
        return (self.lo, self.hi)

    @property
    def anti_diagonal(self) -> tuple[Point, Point]:
        return (Point(self.lo.x, self.hi.y), Point(self.hi.x, self.lo.y))

    def corners(self) -> tuple[Point, Point, Point, Point]:
        return self.diagonal + self.anti_diagonal

    def cells(self) -> list[Cell]:
        return [
            Cell(x, y)
            for x in range(self.lo.x, self.hi.x)
            for y in range(self.lo.y, self.hi.y)
        ]

    def contains(self, p: Point) -> bool:
        return self.lo.x <= p.x <= self.hi.x and self.lo.y <= p.y <= self.hi.y


@dataclass(frozen=True)
class Block:
    cells: tuple[Cell, ...]
    direction: str
    maximal: bool = True

    @property
    def rank(self) -> int:
        return len(self.cells)

    def vertices(self) -> frozenset[Point]:
        return frozenset(v for c in self.cells for v in c.vertices())


def edge_key(p: Point, q: Point) -> tuple[Point, Point]:
    return (p, q) if p < q else (q, p)


def _components(cells: frozenset[Cell]) -> list[frozenset[Cell]]:
    seen: set[Cell] = set()
    out = []
    for start in sorted(cells):
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        while queue:
            c = queue.popleft()
            for n in c.neighbours():
                if n in cells and n not in comp:
                    comp.add(n)
                    queue.append(n)
        seen |= comp
        out.append(frozenset(comp))
    return out


@dataclass(frozen=True)
class Polyomino:
    """A finite, edge-connected set of cells.

    Construct through :func:`parse_polyomino` to get validation; the raw
    constructor trusts its input.
    """

    cells: frozenset[Cell]

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, cell) -> bool:
        return cell in self.cells

    def __iter__(self):
        return iter(sorted(self.cells))

    @cached_property
    def vertices(self) -> frozenset[Point]:
        return frozenset(v for c in self.cells for v in c.vertices())

    @cached_property
    def edges(self) -> frozenset[tuple[Point, Point]]:
        return frozenset(edge_key(*e) for c in self.cells for e in c.edges())

    @cached_property
    def bbox(self) -> tuple[int, int, int, int]:
        xs = [c.x for c in self.cells]
        ys = [c.y for c in self.cells]
        return min(xs), min(ys), max(xs) + 1, max(ys) + 1

    def canonical(self) -> Polyomino:
        x0, y0, _, _ = self.bbox
        return Polyomino(frozenset(Cell(c.x - x0, c.y - y0) for c in self.cells))

    def translate(self, dx: int, dy: int) -> Polyomino:
        return Polyomino(frozenset(Cell(c.x + dx, c.y + dy) for c in self.cells))

    def key(self) -> tuple[Cell, ...]:
        """Hashable translation-invariant identity."""
        return tuple(sorted(self.canonical().cells))

    def to_json(self) -> dict:
        return {"cells": [list(c) for c in sorted(self.cells)]}

    @cached_property
    def inner_intervals(self) -> tuple[Interval, ...]:
        return tuple(inner_intervals(self))


def parse_polyomino(cells: Iterable) -> Polyomino:
    """Build a validated polyomino from lower-left corners ``[[x, y], ...]``.

    Accepts a dict with a ``"cells"`` key as produced by ``Polyomino.to_json``.
    """
    if isinstance(cells, dict):
        cells = cells.get("cells", [])
    parsed = set()
    for entry in cells:
        try:
            x, y = entry
            parsed.add(Cell(int(x), int(y)))
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad cell entry {entry!r}") from exc
    if not parsed:
        raise EmptyInput("a polyomino needs at least one cell")
    frozen = frozenset(parsed)
    comps = _components(frozen)
    if len(comps) > 1:
        raise Disconnected(comps)
    return Polyomino(frozen)


def vertices(P: Polyomino) -> frozenset[Point]:
    return P.vertices


def edges(P: Polyomino) -> frozenset[tuple[Point, Point]]:
    return P.edges


def is_inner(P: Polyomino, interval: Interval) -> bool:
    return interval.proper and all(c in P.cells for c in interval.cells())


def inner_intervals(P: Polyomino) -> list[Interval]:
    """All proper intervals whose cells lie in P, sorted by (lo, hi)."""
    cells = P.cells
    out = []
    # Grow rectangles from each lower-left cell; a rectangle is inner iff every
    # column of it is, so widths can be pruned as soon as a cell is missing.
    for c in cells:
        max_w = 0
        while Cell(c.x + max_w, c.y) in cells:
            max_w += 1
        h = 0
        while max_w > 0 and Cell(c.x, c.y + h) in cells:
            w = 0
            while w < max_w and Cell(c.x + w, c.y + h) in cells:
                w += 1
            max_w = w
            for width in range(1, max_w + 1):
                out.append(Interval(c.lower_left, Point(c.x + width, c.y + h + 1)))
            h += 1
    out.sort()
    return out


def maximal_blocks(P: Polyomino, direction: str) -> list[Block]:
    if direction not in (HORIZONTAL, VERTICAL):
        raise ValueError(direction)
    step = (1, 0) if direction == HORIZONTAL else (0, 1)
    blocks = []
    for c in sorted(P.cells):
        prev = Cell(c.x - step[0], c.y - step[1])
        if prev in P.cells:
            continue
        run = [c]
        nxt = Cell(c.x + step[0], c.y + step[1])
        while nxt in P.cells:
            run.append(nxt)
            nxt = Cell(nxt.x + step[0], nxt.y + step[1])
        blocks.append(Block(tuple(run), direction, True))
    return blocks


def edge_intervals(P: Polyomino, direction: str) -> list[tuple[Point, ...]]:
    """Maximal edge intervals as tuples of collinear vertices."""
    if direction not in (HORIZONTAL, VERTICAL):
        raise ValueError(direction)
    step = Point(1, 0) if direction == HORIZONTAL else Point(0, 1)
    back = Point(-step.x, -step.y)
    unit = {e for e in P.edges if (e[1].x - e[0].x, e[1].y - e[0].y) == tuple(step)}
    out = []
    for e in sorted(unit):
        start = e[0]
        if edge_key(start + back, start) in unit:
            continue
        pts = [start]
        cur = start
        while edge_key(cur, cur + step) in unit:
            cur = cur + step
            pts.append(cur)
        out.append(tuple(pts))
    return out


def on_same_edge_interval(P: Polyomino, p: Point, q: Point) -> bool:
    if p == q:
        return True
    if p.y == q.y:
        direction = HORIZONTAL
    elif p.x == q.x:
        direction = VERTICAL
    else:
        return False
    for run in edge_intervals(P, direction):
        if p in run and q in run:
            return True
    return False


def holes(P: Polyomino) -> list[Polyomino]:
    """Bounded components of the complement, found by flood fill from outside."""
    x0, y0, x1, y1 = P.bbox
    outside = set()
    start = Cell(x0 - 1, y0 - 1)
    queue = deque([start])
    outside.add(start)
    while queue:
        c = queue.popleft()
        for n in c.neighbours():
            if n in outside or n in P.cells:
                continue
            if x0 - 1 <= n.x <= x1 and y0 - 1 <= n.y <= y1:
                outside.add(n)
                queue.append(n)
    rest = frozenset(
        Cell(x, y)
        for x in range(x0, x1)
        for y in range(y0, y1)
        if Cell(x, y) not in P.cells and Cell(x, y) not in outside
    )
    return [Polyomino(comp) for comp in _components(rest)]


def is_simple(P: Polyomino) -> bool:
    return not holes(P)


def is_thin(P: Polyomino) -> bool:
    cells = P.cells
    return not any(
        Cell(c.x + 1, c.y) in cells
        and Cell(c.x, c.y + 1) in cells
        and Cell(c.x + 1, c.y + 1) in cells
        for c in cells
    )
