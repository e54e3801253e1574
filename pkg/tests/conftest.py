import json
from functools import lru_cache
from pathlib import Path

import pytest

from polyalg.classify import enumerate_closed_paths
from polyalg.grid import Cell, Polyomino, parse_polyomino

DATA = Path(__file__).parent / "data"

SINGLE = [[0, 0]]
SQUARE = [[0, 0], [1, 0], [0, 1], [1, 1]]
RING = [[x, y] for x in range(3) for y in range(3) if (x, y) != (1, 1)]

# weakly closed paths: a ring with one corner cell removed, and two staircase seams
WEAKLY = {
    "ring3-corner": [[0, 0], [0, 1], [0, 2], [1, 0], [1, 2], [2, 0], [2, 1]],
    "ring4-corner": [[x, y] for x in range(4) for y in range(4) if (x in (0, 3) or y in (0, 3)) and (x, y) != (0, 0)],
    "stair-vertical": [[0, 0], [0, 1], [0, 2], [0, 3], [1, 0], [1, 3], [2, 0], [2, 1], [2, 3], [3, 2], [3, 3]],
    "stair-horizontal": [[0, 0], [0, 1], [0, 2], [0, 3], [1, 0], [1, 3], [2, 0], [2, 2], [3, 0], [3, 1], [3, 2]],
}


def poly(cells) -> Polyomino:
    return parse_polyomino(cells)


@lru_cache(maxsize=None)
def closed_corpus(max_cells: int) -> tuple[Polyomino, ...]:
    return tuple(enumerate_closed_paths(max_cells))


@lru_cache(maxsize=None)
def zigzag_paths() -> tuple[Polyomino, ...]:
    data = json.loads((DATA / "zigzag_paths.json").read_text())
    return tuple(Polyomino(frozenset(Cell(*c) for c in cells)) for cells in data["paths"])


@pytest.fixture
def single():
    return poly(SINGLE)


@pytest.fixture
def square():
    return poly(SQUARE)


@pytest.fixture
def ring():
    return poly(RING)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
