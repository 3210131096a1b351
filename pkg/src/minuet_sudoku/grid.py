"""Grid topology, candidate-set algebra, consistency checking, and puzzle text I/O.

Cells are indexed 0..80 row-major.  A candidate set is a 9-bit mask with bit
``d-1`` standing for digit ``d``, so membership, union, intersection, removal
and cardinality are single int operations.  The 27 structures (9 rows, 9
columns, 9 boxes) also have a flat id used internally: rows 0-8, columns
9-17, boxes 18-26.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .trace import TraceEvent

ALL_DIGITS = 0b111111111  # mask of {1..9}
BIT = (0, 1, 2, 4, 8, 16, 32, 64, 128, 256)  # BIT[d] for digit d

DIGITS_OF: tuple[tuple[int, ...], ...] = tuple(
    tuple(d for d in range(1, 10) if m & BIT[d]) for m in range(512)
)


def mask_of(digits) -> int:
    m = 0
    for d in digits:
        m |= BIT[d]
    return m


class Structure(NamedTuple):
    kind: str  # "row" | "col" | "box"
    index: int  # 0..8


ROW_OF = tuple(i // 9 for i in range(81))
COL_OF = tuple(i % 9 for i in range(81))
BOX_OF = tuple(3 * (i // 27) + (i % 9) // 3 for i in range(81))

STRUCTURES: tuple[Structure, ...] = tuple(
    [Structure("row", i) for i in range(9)]
    + [Structure("col", i) for i in range(9)]
    + [Structure("box", i) for i in range(9)]
)

CELLS_OF: tuple[tuple[int, ...], ...] = tuple(
    [tuple(9 * r + c for c in range(9)) for r in range(9)]
    + [tuple(9 * r + c for r in range(9)) for c in range(9)]
    + [
        tuple(9 * (3 * (b // 3) + dr) + 3 * (b % 3) + dc for dr in range(3) for dc in range(3))
        for b in range(9)
    ]
)

CELLSET_OF: tuple[frozenset[int], ...] = tuple(frozenset(cs) for cs in CELLS_OF)

STRUCTS_OF = tuple((ROW_OF[i], 9 + COL_OF[i], 18 + BOX_OF[i]) for i in range(81))

PEERS: tuple[tuple[int, ...], ...] = tuple(
    tuple(sorted((set(CELLS_OF[r]) | set(CELLS_OF[c]) | set(CELLS_OF[b])) - {i}))
    for i, (r, c, b) in enumerate(STRUCTS_OF)
)


def flat_structure(s: Structure) -> int:
    offset = {"row": 0, "col": 9, "box": 18}[s.kind]
    return offset + s.index


class GridError(Exception):
    """Base for puzzle-text and placement errors."""


class WrongLength(GridError):
    pass


class BadChar(GridError):
    pass


class InconsistentGivens(GridError):
    pass


class NotACandidate(GridError):
    pass


class AlreadySolved(GridError):
    pass


class ContradictionFound(Exception):
    """A grid state that admits no solution (empty cell, starved structure, or conflict)."""

    def __init__(self, kind: str, structure: Structure | None = None,
                 cell: int | None = None, digit: int | None = None):
        self.kind = kind
        self.structure = structure
        self.cell = cell
        self.digit = digit
        where = []
        if structure is not None:
            where.append(f"{structure.kind} {structure.index}")
        if cell is not None:
            where.append(f"cell {cell}")
        if digit is not None:
            where.append(f"digit {digit}")
        super().__init__(f"{kind}: " + ", ".join(where) if where else kind)


@dataclass(frozen=True, slots=True)
class ConsistencyIssue:
    kind: str  # "conflict" | "starved" | "empty_cell"
    structure: Structure | None = None
    digit: int | None = None
    cell: int | None = None


class Grid:
    """81 cells, each inked (solved) or carrying a pencil candidate mask.

    ``solved[i]`` is 0 for unsolved cells, otherwise the inked digit.
    ``given[i]`` marks original clues.  ``masks[i]`` is the candidate mask of
    an unsolved cell and 0 for inked cells.  Ink never reverts to pencil and
    no operation ever adds a candidate back; erasing is one-way.
    """

    __slots__ = ("solved", "given", "masks")

    def __init__(self, solved: list[int] | None = None,
                 given: list[bool] | None = None,
                 masks: list[int] | None = None):
        self.solved = [0] * 81 if solved is None else solved
        self.given = [False] * 81 if given is None else given
        self.masks = [ALL_DIGITS] * 81 if masks is None else masks

    def copy(self) -> "Grid":
        return Grid(self.solved.copy(), self.given.copy(), self.masks.copy())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return (self.solved == other.solved and self.masks == other.masks
                and self.given == other.given)

    def fingerprint(self) -> tuple:
        return (tuple(self.solved), tuple(self.masks))

    def candidates(self, cell: int) -> set[int]:
        return set(DIGITS_OF[self.masks[cell]])

    def cell_state(self, cell: int):
        """("ink", digit, "given"|"deduced") for solved cells, ("pencil", frozenset) otherwise."""
        d = self.solved[cell]
        if d:
            return ("ink", d, "given" if self.given[cell] else "deduced")
        return ("pencil", frozenset(DIGITS_OF[self.masks[cell]]))

    def is_complete(self) -> bool:
        return 0 not in self.solved

    def inked_count(self) -> int:
        return 81 - self.solved.count(0)

    def unsolved_cells(self) -> list[int]:
        return [i for i in range(81) if not self.solved[i]]

    def __repr__(self) -> str:
        return f"Grid({serialize_grid(self)!r})"

    def pretty(self) -> str:
        lines = []
        for r in range(9):
            if r in (3, 6):
                lines.append("------+-------+------")
            row = []
            for c in range(9):
                if c in (3, 6):
                    row.append("|")
                d = self.solved[9 * r + c]
                row.append(str(d) if d else ".")
            lines.append(" ".join(row))
        return "\n".join(lines)


def parse_grid(text: str) -> Grid:
    """Parse an 81-character puzzle (digits 1-9 are givens; '.' or '0' empty).

    Whitespace and newlines are ignored.  Every empty cell starts with the
    full candidate set minus the digits already inked in its row, column and
    box.  Raises WrongLength, BadChar, or InconsistentGivens.
    """
    chars = []
    for ch in text:
        if ch.isspace():
            continue
        if ch not in "0123456789.":
            raise BadChar(f"invalid character {ch!r}")
        chars.append(ch)
    if len(chars) != 81:
        raise WrongLength(f"expected 81 significant characters, got {len(chars)}")

    solved = [0] * 81
    given = [False] * 81
    used = [0] * 27  # inked-digit mask per flat structure
    for i, ch in enumerate(chars):
        if ch in ".0":
            continue
        d = int(ch)
        b = BIT[d]
        for s in STRUCTS_OF[i]:
            if used[s] & b:
                raise InconsistentGivens(
                    f"digit {d} appears twice in {STRUCTURES[s].kind} {STRUCTURES[s].index}")
            used[s] |= b
        solved[i] = d
        given[i] = True

    masks = [0] * 81
    for i in range(81):
        if not solved[i]:
            r, c, b = STRUCTS_OF[i]
            masks[i] = ALL_DIGITS & ~(used[r] | used[c] | used[b])
    return Grid(solved, given, masks)


def serialize_grid(grid: Grid) -> str:
    """81 characters: digits for inked cells, '.' for unsolved."""
    return "".join(str(d) if d else "." for d in grid.solved)


def cells_of_structure(s: Structure) -> list[int]:
    """The 9 cell indices of a structure, ascending."""
    return list(CELLS_OF[flat_structure(s)])


def place_ink(grid: Grid, cell: int, digit: int, *, step: str = "", rule: str = "ink",
              view: str | None = None, structure: Structure | None = None) -> TraceEvent:
    """Ink ``digit`` into ``cell`` and erase it from all 20 peers (Rule 19).

    Raises AlreadySolved or NotACandidate.  Returns the event recording the
    placement and every peer elimination it caused.
    """
    if grid.solved[cell]:
        raise AlreadySolved(f"cell {cell} already inked with {grid.solved[cell]}")
    b = BIT[digit]
    if not grid.masks[cell] & b:
        raise NotACandidate(f"digit {digit} is not a candidate of cell {cell}")
    grid.solved[cell] = digit
    grid.masks[cell] = 0
    erased = []
    masks = grid.masks
    for p in PEERS[cell]:
        if masks[p] & b:
            masks[p] &= ~b
            erased.append((p, digit))
    return TraceEvent(step=step, rule=rule, view=view, structure=structure,
                      cells=(cell,), digits=(digit,),
                      inked=((cell, digit),), erased=tuple(erased))


def check_consistency(grid: Grid) -> ConsistencyIssue | None:
    """First violation of the basic rule, or None if the grid is consistent.

    Scan order is fixed: inked conflicts over all structures, then starved
    structures (a digit neither inked nor a candidate anywhere), then cells
    with empty candidate sets.
    """
    for s in range(27):
        seen = 0
        for c in CELLS_OF[s]:
            d = grid.solved[c]
            if not d:
                continue
            b = BIT[d]
            if seen & b:
                return ConsistencyIssue("conflict", structure=STRUCTURES[s], digit=d)
            seen |= b
    for s in range(27):
        inked = 0
        present = 0
        for c in CELLS_OF[s]:
            d = grid.solved[c]
            if d:
                inked |= BIT[d]
            else:
                present |= grid.masks[c]
        missing = ALL_DIGITS & ~(inked | present)
        if missing:
            return ConsistencyIssue("starved", structure=STRUCTURES[s],
                                    digit=DIGITS_OF[missing][0])
    for c in range(81):
        if not grid.solved[c] and not grid.masks[c]:
            return ConsistencyIssue("empty_cell", cell=c)
    return None
