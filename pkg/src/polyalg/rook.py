"""Non-attacking rook configurations on a polyomino and the rook polynomial."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from polyalg.errors import BudgetExceeded, InputError
from polyalg.grid import HORIZONTAL, VERTICAL, Cell, Polyomino, maximal_blocks

BLOCK = "block"
GRID_LINE = "grid-line"
CONVENTIONS = (BLOCK, GRID_LINE)
ROOK_BUDGET = 5_000_000


@dataclass(frozen=True)
class RookConfig:
    rooks: frozenset[Cell]

    def __len__(self) -> int:
        return len(self.rooks)


@dataclass(frozen=True)
class RookPolynomial:
    coefficients: tuple[int, ...]

    @property
    def rook_number(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, t: int) -> int:
        return sum(c * t**k for k, c in enumerate(self.coefficients))

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coefficients):
            if k == 0:
                terms.append(str(c))
            else:
                coef = "" if c == 1 else str(c)
                terms.append(f"{coef}t" + (f"^{k}" if k > 1 else ""))
        return " + ".join(terms)


def _check_convention(convention: str):
    if convention not in CONVENTIONS:
        raise InputError(f"unknown attack convention {convention!r}; use one of {CONVENTIONS}")


def _block_of(P: Polyomino) -> dict[tuple[str, Cell], int]:
    """Cell -> index of its maximal horizontal and vertical block."""
    out: dict[tuple[str, Cell], int] = {}
    for direction in (HORIZONTAL, VERTICAL):
        for k, B in enumerate(maximal_blocks(P, direction)):
            for c in B.cells:
                out[(direction, c)] = k
    return out


def attacks(c1: Cell, c2: Cell, P: Polyomino, convention: str = BLOCK) -> bool:
    _check_convention(convention)
    if c1 == c2:
        return False
    if convention == GRID_LINE:
        return c1.x == c2.x or c1.y == c2.y
    blocks = _block_of(P)
    if c1.y == c2.y and blocks[(HORIZONTAL, c1)] == blocks[(HORIZONTAL, c2)]:
        return True
    return c1.x == c2.x and blocks[(VERTICAL, c1)] == blocks[(VERTICAL, c2)]


def attack_masks(P: Polyomino, convention: str = BLOCK) -> tuple[list[Cell], list[int]]:
    """Cells in canonical order and, per cell, the bitmask of cells it attacks."""
    _check_convention(convention)
    cells = sorted(P.cells)
    pos = {c: i for i, c in enumerate(cells)}
    masks = [0] * len(cells)
    if convention == GRID_LINE:
        for i, a in enumerate(cells):
            for j, b in enumerate(cells):
                if i != j and (a.x == b.x or a.y == b.y):
                    masks[i] |= 1 << j
        return cells, masks
    for direction in (HORIZONTAL, VERTICAL):
        for B in maximal_blocks(P, direction):
            m = 0
            for c in B.cells:
                m |= 1 << pos[c]
            for c in B.cells:
                masks[pos[c]] |= m & ~(1 << pos[c])
    return cells, masks


def rook_polynomial(P: Polyomino, convention: str = BLOCK) -> RookPolynomial:
    """Exact r_k by branching on the lowest remaining cell, memoised on the free set."""
    cells, attack = attack_masks(P, convention)
    memo: dict[int, tuple[int, ...]] = {}

    def count(free: int) -> tuple[int, ...]:
        if not free:
            return (1,)
        hit = memo.get(free)
        if hit is not None:
            return hit
        low = free & -free
        i = low.bit_length() - 1
        skip = count(free ^ low)
        take = count(free & ~low & ~attack[i])
        acc = list(skip) + [0] * max(0, len(take) + 1 - len(skip))
        for k, c in enumerate(take):
            acc[k + 1] += c
        memo[free] = res = tuple(acc)
        if len(memo) > ROOK_BUDGET:
            raise BudgetExceeded(f"rook count exceeded {ROOK_BUDGET} states")
        return res

    coeffs = list(count((1 << len(cells)) - 1))
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return RookPolynomial(tuple(coeffs))


def rook_number(P: Polyomino, convention: str = BLOCK) -> int:
    return rook_polynomial(P, convention).rook_number


def rook_configurations(P: Polyomino, convention: str = BLOCK, k: int | None = None) -> Iterator[RookConfig]:
    """Every non-attacking configuration (of size k, if given) in canonical DFS order."""
    cells, attack = attack_masks(P, convention)

    def rec(start: int, free: int, chosen: list[int]):
        if k is None or len(chosen) == k:
            yield RookConfig(frozenset(cells[i] for i in chosen))
            if k is not None:
                return
        for i in range(start, len(cells)):
            if free >> i & 1:
                chosen.append(i)
                yield from rec(i + 1, free & ~attack[i] & ~(1 << i), chosen)
                chosen.pop()

    yield from rec(0, (1 << len(cells)) - 1, [])


def is_non_attacking(rooks: Sequence[Cell], P: Polyomino, convention: str = BLOCK) -> bool:
    cells, attack = attack_masks(P, convention)
    pos = {c: i for i, c in enumerate(cells)}
    idx = [pos[c] for c in rooks]
    if len(set(idx)) != len(idx):
        return False
    return all(not attack[i] >> j & 1 for i in idx for j in idx if i != j)


@dataclass(frozen=True)
class PhiReport:
    counts_by_steps: tuple[int, ...]
    counts_by_rooks: tuple[int, ...]
    injective: bool
    non_attacking: bool
    convention: str

    @property
    def bijection_ok(self) -> bool:
        return self.injective and self.non_attacking and self.counts_by_steps == self.counts_by_rooks

    def to_json(self) -> dict:
        return {
            "counts_by_steps": list(self.counts_by_steps),
            "counts_by_rooks": list(self.counts_by_rooks),
            "injective": self.injective,
            "non_attacking": self.non_attacking,
            "bijection_ok": self.bijection_ok,
            "convention": self.convention,
        }


def phi_check(P: Polyomino, lab, facets: Sequence, convention: str = BLOCK) -> PhiReport:
    """Send each facet to the rooks on its step cells and test the map against r_k."""
    from polyalg.shelling import find_steps

    cells, attack = attack_masks(P, convention)
    pos = {c: i for i, c in enumerate(cells)}
    images: set[frozenset[Cell]] = set()
    by_size: list[int] = []
    injective = non_attacking = True
    for F in facets:
        step_cells = [s.step_cell for s in find_steps(F, P, lab)]
        rooks = frozenset(step_cells)
        if len(rooks) != len(step_cells):
            non_attacking = False
        if rooks in images:
            injective = False
        images.add(rooks)
        idx = [pos[c] for c in rooks]
        if any(attack[i] >> j & 1 for i in idx for j in idx):
            non_attacking = False
        k = len(step_cells)
        by_size += [0] * (k + 1 - len(by_size))
        by_size[k] += 1
    return PhiReport(
        tuple(by_size), rook_polynomial(P, convention).coefficients, injective, non_attacking, convention
    )
