"""Steps of facets, shelling orders and their verification.

Facets of Δ(P) for a certified labelling hold exactly one vertex of every
pair {i, i'}, so a facet is determined by its unprimed part D(F). The
constructed order grows a list run by run along the walk: each run of
unprimed labels extends every set already listed, sets that break a
settled conflict are dropped, and the extensions of one set follow the set's
own position in the list. ``verify_shelling`` is independent of all this and
is the only judge of the result.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from polyalg.complex import ConflictGraph
from polyalg.errors import BudgetExceeded, IncompleteOrder
from polyalg.grid import Cell, Point, Polyomino
from polyalg.order import Labelling

SHELL_BUDGET = 2_000_000
LIST_BUDGET = 5_000_000

RIGHT = "right"
LEFT = "left"
UPPER = "upper"


@dataclass(frozen=True)
class Step:
    kind: str
    corner: Point
    triple: frozenset[Point]
    step_cell: Cell


@dataclass(frozen=True)
class ShellingCertificate:
    ordered_facets: list[frozenset[Point]]
    steps_per_facet: list[list[Step]]
    restriction_sets: list[frozenset[Point]]

    def corner_sets(self) -> list[frozenset[Point]]:
        return [frozenset(s.corner for s in steps) for steps in self.steps_per_facet]


@dataclass(frozen=True)
class ShellingVerdict:
    ok: bool
    witness: Optional[tuple[int, int]]
    restriction_sets: list[frozenset]


def _index(facet_list: Sequence[Iterable]) -> tuple[list, list[int]]:
    verts = sorted({v for f in facet_list for v in f})
    pos = {v: i for i, v in enumerate(verts)}
    masks = []
    for f in facet_list:
        m = 0
        for v in f:
            m |= 1 << pos[v]
        masks.append(m)
    return verts, masks


def _members(mask: int, verts: list) -> frozenset:
    out = []
    while mask:
        low = mask & -mask
        out.append(verts[low.bit_length() - 1])
        mask ^= low
    return frozenset(out)


def verify_shelling(ordered_facets: Sequence[Iterable]) -> ShellingVerdict:
    """Check, for all j < i, that some v in F_i - F_j has F_i - F_k = {v} for a k < i.

    The set of such v (over all k < i) is the restriction set of F_i, so the
    condition reads: no earlier facet contains the whole restriction set.
    """
    verts, masks = _index(ordered_facets)
    ridges: set[int] = set()
    restrictions: list[frozenset] = []
    witness = None
    for i, m in enumerate(masks):
        r = 0
        rest = m
        while rest:
            low = rest & -rest
            if (m ^ low) in ridges:
                r |= low
            rest ^= low
        restrictions.append(_members(r, verts))
        if witness is None:
            for j in range(i):
                if masks[j] & r == r:
                    witness = (i, j)
                    break
        rest = m
        while rest:
            low = rest & -rest
            ridges.add(m ^ low)
            rest ^= low
    # F_i - F_k = {v} with equal sizes means F_i - v is a ridge of F_k, which is
    # what the ridge table records; unequal sizes cannot occur in a pure complex.
    if len({bin(m).count("1") for m in masks}) > 1 and witness is None:
        witness = _impure_witness(masks)
    return ShellingVerdict(witness is None, witness, restrictions)


def _impure_witness(masks: list[int]) -> Optional[tuple[int, int]]:
    for i, m in enumerate(masks):
        for j in range(i):
            diff = m & ~masks[j]
            ok = False
            for k in range(i):
                d = m & ~masks[k]
                if d and d & (d - 1) == 0 and d & diff:
                    ok = True
                    break
            if not ok:
                return (i, j)
    return None


def h_from_restrictions(restriction_sets: Sequence[Iterable]) -> list[int]:
    sizes = [len(set(r)) for r in restriction_sets]
    h = [0] * (max(sizes) + 1)
    for s in sizes:
        h[s] += 1
    return h


def search_shelling(facet_list: Sequence[Iterable], budget: int = SHELL_BUDGET) -> Optional[list[frozenset]]:
    """Backtracking search for a shelling, greedily extending along shared ridges.

    A facet may be appended when its restriction set is nonempty and not
    contained in any facet already placed. Candidates with small restriction
    sets are tried first; a dead end undoes the last choice.
    """
    facet_list = sorted((frozenset(f) for f in facet_list), key=sorted)
    if not facet_list:
        return []
    verts, masks = _index(facet_list)
    count = len(masks)
    ridges_of = []
    ridge_owner: dict[int, list[int]] = {}
    for i, m in enumerate(masks):
        rs = []
        rest = m
        while rest:
            low = rest & -rest
            rs.append(m ^ low)
            ridge_owner.setdefault(m ^ low, []).append(i)
            rest ^= low
        ridges_of.append(rs)
    placed_ridges: dict[int, int] = {}
    placed: list[int] = []
    in_order = [False] * count
    nodes = 0

    def place(i: int):
        placed.append(i)
        in_order[i] = True
        for r in ridges_of[i]:
            placed_ridges[r] = placed_ridges.get(r, 0) + 1

    def unplace():
        i = placed.pop()
        in_order[i] = False
        for r in ridges_of[i]:
            placed_ridges[r] -= 1
            if not placed_ridges[r]:
                del placed_ridges[r]

    def options() -> list[int]:
        seen = set()
        out = []
        for r in placed_ridges:
            for k in ridge_owner[r]:
                if in_order[k] or k in seen:
                    continue
                seen.add(k)
                m = masks[k]
                rmask = 0
                for rr, bit in zip(ridges_of[k], _bits(m)):
                    if rr in placed_ridges:
                        rmask |= bit
                if all(masks[j] & rmask != rmask for j in placed):
                    out.append((bin(rmask).count("1"), k))
        out.sort()
        return [k for _, k in out]

    place(0)
    stack = [options()]
    while stack:
        if len(placed) == count:
            result = [facet_list[i] for i in placed]
            return result if verify_shelling(result).ok else None
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"shelling search exceeded {budget} nodes")
        if not stack[-1]:
            stack.pop()
            unplace()
            continue
        place(stack[-1].pop(0))
        stack.append(options())
    return None


def _bits(m: int) -> list[int]:
    out = []
    while m:
        low = m & -m
        out.append(low)
        m ^= low
    return out


# ---------------------------------------------------------------- steps

def _diagonal_cell(P: Polyomino, u: Point, w: Point) -> Optional[Cell]:
    if abs(u.x - w.x) != 1 or abs(u.y - w.y) != 1:
        return None
    c = Cell(min(u.x, w.x), min(u.y, w.y))
    return c if c in P.cells else None


def _on_edge(P: Polyomino, a: Point, b: Point) -> bool:
    if a.x == b.x:
        y = min(a.y, b.y)
        return Cell(a.x - 1, y) in P.cells or Cell(a.x, y) in P.cells
    x = min(a.x, b.x)
    return Cell(x, a.y - 1) in P.cells or Cell(x, a.y) in P.cells


def _walk_direction(lab: Labelling, c: Cell) -> tuple[int, int]:
    cells = list(lab.sequence.cells) if lab.sequence is not None else []
    if c not in cells:
        return (0, 1)
    i = cells.index(c)
    if i + 1 < len(cells) or not lab.sequence.weakly:
        nxt = cells[(i + 1) % len(cells)]
        return (nxt.x - c.x, nxt.y - c.y)
    prev = cells[i - 1]
    return (c.x - prev.x, c.y - prev.y)


def find_steps(F: Iterable[Point], P: Polyomino, lab: Labelling) -> list[Step]:
    """Steps of a facet, read in the frame of each corner's own pair.

    The corner v is unprimed and its partner v' sits at the opposite corner
    of the step cell. With p, q the remaining corners of that cell:

    * both p, q in F: the three-corner step {p, v, q};
    * p in F, q not, the vertex two units past v through q in F and the one
      behind v not in F: the skipping step;
    * otherwise p in F and some vertex of F further along q's edge interval,
      away from p, with nothing of F in between: the upper step.

    Right versus left follows the turn from the walking direction to the
    diagonal v -> v'; right takes priority over upper.
    """
    F = frozenset(F)
    partner = dict(zip(lab.y1, lab.y2))
    steps = []
    for v in sorted(F):
        vp = partner.get(v)
        if vp is None:
            continue
        C = _diagonal_cell(P, v, vp)
        if C is None:
            continue
        dx, dy = _walk_direction(lab, C)
        turn = dx * (vp.y - v.y) - dy * (vp.x - v.x)
        side = RIGHT if turn > 0 else LEFT
        a, b = Point(vp.x, v.y), Point(v.x, vp.y)
        if a in F and b in F:
            steps.append(Step(side, v, frozenset((a, v, b)), C))
            continue
        found = None
        for q, p in ((a, b), (b, a)):
            if p not in F or q in F:
                continue
            d = Point(q.x - v.x, q.y - v.y)
            far = Point(v.x + 2 * d.x, v.y + 2 * d.y)
            back = Point(v.x - d.x, v.y - d.y)
            if far in F and back not in F:
                found = Step(side, v, frozenset((far, v, p)), C)
                break
            e = Point(v.x - p.x, v.y - p.y)
            r = q
            while True:
                nr = Point(r.x + e.x, r.y + e.y)
                if nr not in P.vertices or not _on_edge(P, r, nr):
                    break
                r = nr
                if r in F:
                    found = Step(UPPER, v, frozenset((p, v, r)), C)
                    break
            if found:
                break
        if found:
            steps.append(found)
    return steps


# ---------------------------------------------------------------- the constructed order

def label_runs(lab: Labelling) -> list[list[int]]:
    """Unprimed labels grouped by the straight stretch of the walk where they first appear."""
    cells = list(lab.sequence.cells)
    first: dict[Point, int] = {}
    for i, c in enumerate(cells):
        for v in c.vertices():
            first.setdefault(v, i)
    segment = [0] * len(cells)
    for i in range(1, len(cells)):
        d_prev = (cells[i].x - cells[i - 1].x, cells[i].y - cells[i - 1].y)
        d_before = (
            (cells[i - 1].x - cells[i - 2].x, cells[i - 1].y - cells[i - 2].y) if i >= 2 else d_prev
        )
        segment[i] = segment[i - 1] + (d_prev != d_before)
    runs: dict[int, list[int]] = {}
    for k, v in enumerate(lab.y1):
        runs.setdefault(segment[first[v]], []).append(k + 1)
    return [sorted(r) for _, r in sorted(runs.items())]


def _label_conflicts(lab: Labelling, g: ConflictGraph) -> list[tuple[int, bool, int, bool]]:
    """Conflict edges as (label, unprimed?) pairs; edges through w are dropped."""
    tag = {}
    for k, v in enumerate(lab.y1):
        tag[v] = (k + 1, True)
    for k, v in enumerate(lab.y2):
        tag[v] = (k + 1, False)
    out = []
    for e in g.edges:
        u, w = tuple(e)
        if u in tag and w in tag:
            out.append(tag[u] + tag[w])
    return out


def _patterns(run: list[int]) -> list[tuple[int, ...]]:
    """Nonempty subsets of a run, as descending tuples in lexicographic order."""
    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], below: list[int]):
        for x in below:
            t = prefix + (x,)
            out.append(t)
            rec(t, [y for y in below if y < x])

    rec((), sorted(run))
    return out


def _facet_of(D: frozenset[int], lab: Labelling, cone: frozenset[Point]) -> frozenset[Point]:
    return frozenset(
        [lab.y1[i - 1] for i in D] + [lab.y2[i - 1] for i in range(1, lab.n + 1) if i not in D]
    ) | cone


def shelling_order(
    P: Polyomino,
    lab: Labelling,
    facet_list: Sequence[Iterable[Point]],
    g: ConflictGraph,
    budget: int = LIST_BUDGET,
) -> ShellingCertificate:
    """Grow the facet list run by run and certify the result."""
    facet_set = {frozenset(f) for f in facet_list}
    cone = frozenset.intersection(*facet_set) - set(lab.y1) - set(lab.y2)
    conflicts = _label_conflicts(lab, g)
    done: set[int] = set()

    def settled_ok(D: frozenset[int]) -> bool:
        for a, a1, b, b1 in conflicts:
            if a in done and b in done and (a in D) == a1 and (b in D) == b1:
                return False
        return True

    L: list[frozenset[int]] = [frozenset()]
    for run in label_runs(lab):
        done.update(run)
        extended: list[frozenset[int]] = []
        pats = _patterns(run)
        for H in L:
            for pat in pats:
                D = H | frozenset(pat)
                if settled_ok(D):
                    extended.append(D)
                    if len(L) + len(extended) > budget:
                        raise BudgetExceeded(f"facet list exceeded {budget} sets")
        L = [D for D in L if settled_ok(D)] + extended
    ordered = [_facet_of(D, lab, cone) for D in L]
    seen = set()
    dup = [f for f in ordered if f in seen or seen.add(f)]
    missing = facet_set - set(ordered)
    stray = [f for f in ordered if f not in facet_set]
    if missing or stray or dup:
        raise IncompleteOrder(sorted(missing, key=sorted) + stray + dup)
    verdict = verify_shelling(ordered)
    return ShellingCertificate(
        ordered_facets=ordered,
        steps_per_facet=[find_steps(f, P, lab) for f in ordered],
        restriction_sets=verdict.restriction_sets,
    )
