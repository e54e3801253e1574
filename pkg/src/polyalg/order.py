"""Vertex labelling Y = Y1 ⊔ Y2 of a (weakly) closed path and the induced lex order.

The labelling walks the path A_1, A_2, ... and decides, for every vertex the
walk meets for the first time, whether it is unprimed (Y1) or primed (Y2).
Unprimed labels are numbered in walk order, so x_1 > x_2 > ... follows the
path, and every primed vertex ranks below every unprimed one. Each decision
is checked against the S-pairs it completes; a finished labelling is only
returned after Buchberger's criterion holds on the whole generating set, the
primed vertices form a facet, and the leads x_i x_i' pair Y1 with Y2.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterator, Optional, Sequence

from polyalg.algebra import VariableOrder, generators_under, is_groebner
from polyalg.classify import ClosedPathSequence, closed_path_sequence, weakly_closed_path
from polyalg.errors import InputError, NoOrderFound
from polyalg.grid import Cell, Point, Polyomino

DESC = "desc"
ASC = "asc"
RULES = (DESC, ASC)

SEARCH_NODE_BUDGET = 2_000_000
UNEVEN_LEVELS = (0, 2, 4, 6)


@dataclass(frozen=True)
class Labelling:
    """y1[k] carries label k+1 and y2[k] carries label (k+1)'."""

    y1: tuple[Point, ...]
    y2: tuple[Point, ...]
    extra: Optional[Point] = None
    sequence: Optional[ClosedPathSequence] = None

    def __post_init__(self):
        pts = list(self.y1) + list(self.y2) + ([self.extra] if self.extra else [])
        if len(set(pts)) != len(pts):
            raise ValueError("labelling assigns a vertex twice")

    @property
    def n(self) -> int:
        return len(self.y1)

    def points(self) -> frozenset[Point]:
        return frozenset(self.y1) | frozenset(self.y2) | ({self.extra} if self.extra else set())

    def label(self, p: Point) -> str:
        if p in self.y1:
            return str(self.y1.index(p) + 1)
        if p in self.y2:
            return f"{self.y2.index(p) + 1}'"
        if p == self.extra:
            return "w"
        raise KeyError(p)

    def point(self, label: str | int) -> Point:
        label = str(label)
        if label == "w":
            if self.extra is None:
                raise KeyError(label)
            return self.extra
        if label.endswith("'"):
            return self.y2[int(label[:-1]) - 1]
        return self.y1[int(label) - 1]

    def labels(self) -> dict[Point, str]:
        return {p: self.label(p) for p in self.points()}

    def order(self, y2_rule: str = DESC) -> VariableOrder:
        return monomial_order(self, y2_rule)

    def to_json(self) -> dict:
        return {
            "y1": [list(p) for p in self.y1],
            "y2": [list(p) for p in self.y2],
            "w": list(self.extra) if self.extra else None,
        }


def monomial_order(lab: Labelling, y2_rule: str = DESC) -> VariableOrder:
    """x_1 > ... > x_n > (primed block) > x_w.

    ``desc`` ranks the primed block x_1' > x_2' > ..., ``asc`` ranks it
    x_n' > ... > x_1'. Only the primed block differs between the rules.
    """
    if y2_rule not in RULES:
        raise ValueError(f"unknown y2 rule {y2_rule!r}")
    y2 = lab.y2 if y2_rule == DESC else tuple(reversed(lab.y2))
    ranked = lab.y1 + y2 + ((lab.extra,) if lab.extra else ())
    return VariableOrder(ranked)


# ---------------------------------------------------------------- local S-pair machinery

class _Frame:
    """Index tables for one walk over a path; vertices are small integers."""

    def __init__(self, P: Polyomino, cells: Sequence[Cell]):
        self.P = P
        self.cells = list(cells)
        seen: dict[Point, int] = {}
        self.new: list[list[Point]] = []
        for c in self.cells:
            fresh = [v for v in _side_order(self.cells, c) if v not in seen]
            for v in fresh:
                seen[v] = len(seen)
            self.new.append(fresh)
        self.vid = seen
        self.pts = sorted(seen, key=seen.get)
        self.intervals = list(P.inner_intervals)
        self.corners = [tuple(self.vid[p] for p in I.diagonal + I.anti_diagonal) for I in self.intervals]
        self.cellsets = [frozenset(I.cells()) for I in self.intervals]
        # walk position after which all corners of an interval are known
        pos = {c: i for i, c in enumerate(self.cells)}
        first = {}
        for i, fresh in enumerate(self.new):
            for v in fresh:
                first[self.vid[v]] = i
        self.corner_done = [max(first[v] for v in cs) for cs in self.corners]
        self.pairs_at: list[list[tuple[int, int, tuple[int, ...]]]] = [[] for _ in self.cells]
        by_vertex: dict[int, list[int]] = {}
        for k, cs in enumerate(self.corners):
            for v in cs:
                by_vertex.setdefault(v, []).append(k)
        done_pairs = set()
        for ks in by_vertex.values():
            for a, b in combinations(ks, 2):
                if (a, b) in done_pairs:
                    continue
                done_pairs.add((a, b))
                # reducers: every inner interval inside the joint bounding box
                union = _box_cells(self.intervals[a], self.intervals[b]) & P.cells
                local = tuple(k for k, cs in enumerate(self.cellsets) if cs <= union)
                when = max(max(self.corner_done[k] for k in local), max(pos[c] for c in union))
                self.pairs_at[when].append((a, b, local))
        self.done_at: list[list[int]] = [[] for _ in self.cells]
        for k, w in enumerate(self.corner_done):
            self.done_at[w].append(k)
        # a vertex is settled once every interval having it as a corner is done
        self.touching: dict[int, list[int]] = by_vertex
        self.settled_at: list[list[int]] = [[] for _ in self.cells]
        for v, ks in by_vertex.items():
            self.settled_at[max(self.corner_done[k] for k in ks)].append(v)


def _box_cells(I, J) -> frozenset[Cell]:
    x0, y0 = min(I.lo.x, J.lo.x), min(I.lo.y, J.lo.y)
    x1, y1 = max(I.hi.x, J.hi.x), max(I.hi.y, J.hi.y)
    return frozenset(Cell(x, y) for x in range(x0, x1) for y in range(y0, y1))


def _side_order(cells: Sequence[Cell], c: Cell) -> list[Point]:
    """Vertices of c, left of the walking direction first, then the far side."""
    i = cells.index(c)
    prev = cells[i - 1]
    dx, dy = c.x - prev.x, c.y - prev.y
    if abs(dx) + abs(dy) != 1:
        nxt = cells[(i + 1) % len(cells)]
        dx, dy = nxt.x - c.x, nxt.y - c.y
    cx, cy = c.x + 0.5, c.y + 0.5

    def key(v):
        ahead = (v.x - cx) * dx + (v.y - cy) * dy
        left = (v.x - cx) * (-dy) + (v.y - cy) * dx
        return (ahead, -left)

    return sorted(c.vertices(), key=key)


def _lead(corners: tuple[int, ...], rank: dict[int, int]) -> tuple[frozenset, tuple]:
    a, b, c, d = corners
    top = min((rank[v], v) for v in corners)[1]
    if top in (a, b):
        return frozenset((a, b)), (c, d)
    return frozenset((c, d)), (a, b)


def _normal_form(mono: list[int], table: dict) -> tuple[int, ...]:
    mono = sorted(mono)
    for _ in range(64):
        for i, j in combinations(range(len(mono)), 2):
            if mono[i] == mono[j]:
                continue
            trail = table.get(frozenset((mono[i], mono[j])))
            if trail is not None:
                rest = [m for k, m in enumerate(mono) if k not in (i, j)]
                mono = sorted(rest + list(trail))
                break
        else:
            return tuple(mono)
    return tuple(mono)


def _pair_ok(a: int, b: int, local, leads) -> bool:
    la, ta = leads[a]
    lb, tb = leads[b]
    common = la & lb
    if not common or la == lb:
        return True
    (oa,) = la - common
    (ob,) = lb - common
    table = {leads[k][0]: leads[k][1] for k in local}
    return _normal_form(list(ta) + [ob], table) == _normal_form(list(tb) + [oa], table)


# ---------------------------------------------------------------- walk search

def _choices(fresh: list[int], want_w: bool):
    """Role assignments for the vertices a cell adds, as (y1 in rank order, y2, w)."""
    k = len(fresh)
    out = []
    for mask in range(1 << k):
        ones = [v for b, v in enumerate(fresh) if mask >> b & 1]
        rest = [v for b, v in enumerate(fresh) if not mask >> b & 1]
        ws = [None] + (rest if want_w else [])
        for w in ws:
            twos = [v for v in rest if v != w]
            for perm in permutations(ones):
                out.append((list(perm), twos, w))
    # balanced, w-free options first; ties keep the side order of ``fresh``
    out.sort(key=lambda o: (o[2] is not None, abs(len(o[0]) - len(o[1]))))
    return out


def _walk_search(
    P: Polyomino, cells: Sequence[Cell], weakly: bool, budget: int, uneven: int = 0
) -> Iterator[tuple]:
    """Depth-first walk over role choices; at most ``uneven`` cells after A_1
    may split their new vertices unevenly between Y1 and Y2."""
    fr = _Frame(P, cells)
    n = len(cells)
    want_w = weakly
    if len(fr.pts) != 2 * n + int(weakly):
        return
    rank: dict[int, int] = {}
    is_y1: dict[int, bool] = {}
    y1: list[int] = []
    y2: list[int] = []
    w_box: list[Optional[int]] = [None]
    leads: dict[int, tuple] = {}
    nodes = [0]
    spent = [0]
    fresh_ids = [[fr.vid[v] for v in new] for new in fr.new]

    def consistent(i: int) -> bool:
        for k in fr.done_at[i]:
            cs = fr.corners[k]
            if not any(is_y1[v] for v in cs):
                return False
            leads[k] = _lead(cs, rank)
        for v in fr.settled_at[i]:
            # needs a lead x_v x_u with u on the other side, or no pairing exists;
            # w ranks last, so it is never in a lead
            if v == w_box[0]:
                continue
            if not any(
                v in leads[k][0] and is_y1[next(iter(leads[k][0] - {v}))] != is_y1[v]
                for k in fr.touching[v]
            ):
                return False
        return all(_pair_ok(a, b, local, leads) for a, b, local in fr.pairs_at[i])

    def assign(i: int):
        nodes[0] += 1
        if nodes[0] > budget:
            raise _Budget()
        if i == n:
            if len(y1) == n and len(y2) == n:
                yield list(y1), list(y2), w_box[0]
            return
        for ones, twos, w in _choices(fresh_ids[i], want_w and w_box[0] is None):
            if len(y1) + len(ones) > n or len(y2) + len(twos) > n:
                continue
            skew = abs(len(ones) - len(twos)) > len(fresh_ids[i]) % 2
            if skew and spent[0] >= uneven:
                continue
            spent[0] += skew
            for v in ones:
                rank[v] = len(y1)
                is_y1[v] = True
                y1.append(v)
            for v in twos:
                y2.append(v)
                rank[v] = n + len(y2)
                is_y1[v] = False
            if w is not None:
                w_box[0] = w
                rank[w] = 3 * n
                is_y1[w] = False
            if consistent(i):
                yield from assign(i + 1)
            for k in fr.done_at[i]:
                leads.pop(k, None)
            if w is not None:
                w_box[0] = None
            del y1[len(y1) - len(ones):]
            del y2[len(y2) - len(twos):]
            spent[0] -= skew

    for a, b, w in assign(0):
        yield [fr.pts[v] for v in a], [fr.pts[v] for v in b], (fr.pts[w] if w is not None else None)


class _Budget(Exception):
    pass


# ---------------------------------------------------------------- certification

def _pair_partners(P: Polyomino, y1: Sequence[Point], y2: Sequence[Point], order: VariableOrder):
    """Match each unprimed vertex with a primed one through a lead x_u x_v (Kuhn's algorithm)."""
    rank = order.rank
    y1set, y2set = set(y1), set(y2)
    adj: dict[Point, list[Point]] = {u: [] for u in y1}
    for I in P.inner_intervals:
        for diag in (I.diagonal, I.anti_diagonal):
            other = I.anti_diagonal if diag == I.diagonal else I.diagonal
            if min(rank[p] for p in diag) < min(rank[p] for p in other):
                u, v = diag
                if u in y1set and v in y2set:
                    adj[u].append(v)
                elif v in y1set and u in y2set:
                    adj[v].append(u)
    match: dict[Point, Point] = {}

    def augment(u, seen):
        for v in sorted(adj[u], key=lambda p: rank[p]):
            if v in seen:
                continue
            seen.add(v)
            if v not in match or augment(match[v], seen):
                match[v] = u
                return True
        return False

    for u in y1:
        if not augment(u, set()):
            return None
    return {u: v for v, u in match.items()}


def _f0_is_facet(
    P: Polyomino, y2: Sequence[Point], order: VariableOrder, w: Optional[Point] = None
) -> bool:
    """Y2, together with w when present, is a facet of Δ(P)."""
    rank = order.rank
    leads = []
    for I in P.inner_intervals:
        d, a = I.diagonal, I.anti_diagonal
        leads.append(d if min(rank[p] for p in d) < min(rank[p] for p in a) else a)
    face = set(y2) | ({w} if w else set())
    if any(set(l) <= face for l in leads):
        return False
    for v in P.vertices - face:
        if not any(v in l and (set(l) - {v}) <= face for l in leads):
            return False
    return True


def certify(P: Polyomino, lab: Labelling, y2_rule: str = DESC) -> bool:
    """Gröbner check, F0 facet check and the x_i x_i' pairing check."""
    order = monomial_order(lab, y2_rule)
    if set(order.ranked) != set(P.vertices):
        return False
    if not is_groebner(generators_under(P, order)):
        return False
    if not _f0_is_facet(P, lab.y2, order, lab.extra):
        return False
    partners = _pair_partners(P, lab.y1, lab.y2, order)
    return partners is not None and all(partners[u] == lab.y2[k] for k, u in enumerate(lab.y1))


def _finish(P: Polyomino, y1, y2, w, seq) -> Optional[Labelling]:
    order = VariableOrder(tuple(y1) + tuple(y2) + ((w,) if w else ()))
    if not is_groebner(generators_under(P, order)):
        return None
    if not _f0_is_facet(P, y2, order, w):
        return None
    partners = _pair_partners(P, y1, y2, order)
    if partners is None:
        return None
    return Labelling(tuple(y1), tuple(partners[u] for u in y1), w, seq)


def _sequence_for(P: Polyomino, seq: Optional[ClosedPathSequence]) -> ClosedPathSequence:
    if seq is None:
        seq = closed_path_sequence(P) or weakly_closed_path(P)
    if seq is None:
        raise InputError("not a closed path or weakly closed path")
    return seq


def label_vertices(
    P: Polyomino, seq: Optional[ClosedPathSequence] = None, budget: int = SEARCH_NODE_BUDGET
) -> Labelling:
    """Label the vertices by walking the witness sequence from A_1.

    For a weakly closed path both seam cells are tried as A_1.

    Raises NoOrderFound when no labelling of this walk survives
    certification within ``budget`` search nodes.
    """
    seq = _sequence_for(P, seq)
    # a weakly closed path may start from either seam cell
    candidates = list(_rotations(seq)) if seq.weakly else [seq]
    lab = None
    for cand in candidates:
        lab = _first_certified(P, cand, budget)
        if lab is not None:
            break
    if lab is None:
        raise NoOrderFound("no walk labelling from A_1 passes certification")
    return lab


def _first_certified(P: Polyomino, seq: ClosedPathSequence, budget: int) -> Optional[Labelling]:
    # even splits first, then allow more and more uneven cells
    for uneven in UNEVEN_LEVELS:
        try:
            for y1, y2, w in _walk_search(P, seq.cells, seq.weakly, budget, uneven):
                lab = _finish(P, y1, y2, w, seq)
                if lab is not None:
                    return lab
        except _Budget:
            continue
    return None


def _rotations(seq: ClosedPathSequence) -> Iterator[ClosedPathSequence]:
    cells = list(seq.cells)
    if seq.weakly:
        yield seq
        yield ClosedPathSequence(tuple(reversed(cells)), weakly=True)
        return
    for direction in (cells, list(reversed(cells))):
        for s in range(len(direction)):
            yield ClosedPathSequence(tuple(direction[s:] + direction[:s]))


def search_quadratic_order(
    P: Polyomino, seq: Optional[ClosedPathSequence] = None, budget: int = SEARCH_NODE_BUDGET
) -> VariableOrder:
    """Fallback: try every start cell and both walking directions."""
    return search_labelling(P, seq, budget).order()


def search_labelling(
    P: Polyomino, seq: Optional[ClosedPathSequence] = None, budget: int = SEARCH_NODE_BUDGET
) -> Labelling:
    seq = _sequence_for(P, seq)
    for cand in _rotations(seq):
        lab = _first_certified(P, cand, budget)
        if lab is not None:
            return lab
    raise NoOrderFound("no walk labelling passes certification from any start")
