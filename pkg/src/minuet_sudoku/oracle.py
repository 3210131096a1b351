"""Independent brute-force backtracking oracle.

Used to verify well-posedness, supply ground-truth solutions for soundness
tests, and validate counterexample reports.  Deliberately shares nothing with
the deduction modules beyond the grid type itself: the search looks only at
inked cells and re-derives everything from the basic rule, so it is a
genuinely independent check on the solver.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grid import (ALL_DIGITS, BIT, BOX_OF, COL_OF, DIGITS_OF, ROW_OF,
                   Grid, check_consistency)

MIN_CLUES_FOR_UNIQUE = 17  # no 16-clue puzzle has a unique solution


class NotWellPosed(Exception):
    pass


@dataclass(frozen=True)
class WellPosedness:
    status: str  # "well_posed" | "no_solution" | "multiple_solutions"
    solution: Grid | None = None

    @property
    def is_well_posed(self) -> bool:
        return self.status == "well_posed"


def _search(values: list[int], cap: int, most_constrained: bool) -> tuple[int, list[int] | None]:
    """Count completions of the inked cells up to ``cap``; return (count, first solution)."""
    row_used = [0] * 9
    col_used = [0] * 9
    box_used = [0] * 9
    for i, d in enumerate(values):
        if not d:
            continue
        b = BIT[d]
        r, c, x = ROW_OF[i], COL_OF[i], BOX_OF[i]
        if (row_used[r] | col_used[c] | box_used[x]) & b:
            return 0, None
        row_used[r] |= b
        col_used[c] |= b
        box_used[x] |= b

    empties = [i for i in range(81) if not values[i]]
    first: list[list[int]] = []

    def dfs(budget: int) -> int:
        pick = -1
        pick_opts = 0
        if most_constrained:
            best = 10
            for i in empties:
                if values[i]:
                    continue
                opts = ALL_DIGITS & ~(row_used[ROW_OF[i]] | col_used[COL_OF[i]] | box_used[BOX_OF[i]])
                n = opts.bit_count()
                if n == 0:
                    return 0
                if n < best:
                    best = n
                    pick = i
                    pick_opts = opts
                    if n == 1:
                        break
        else:
            for i in empties:
                if not values[i]:
                    pick = i
                    pick_opts = ALL_DIGITS & ~(
                        row_used[ROW_OF[i]] | col_used[COL_OF[i]] | box_used[BOX_OF[i]])
                    break
        if pick < 0:
            if not first:
                first.append(values.copy())
            return 1
        r, c, x = ROW_OF[pick], COL_OF[pick], BOX_OF[pick]
        count = 0
        for d in DIGITS_OF[pick_opts]:
            b = BIT[d]
            values[pick] = d
            row_used[r] |= b
            col_used[c] |= b
            box_used[x] |= b
            count += dfs(budget - count)
            values[pick] = 0
            row_used[r] &= ~b
            col_used[c] &= ~b
            box_used[x] &= ~b
            if count >= budget:
                break
        return count

    n = dfs(cap)
    return n, (first[0] if first else None)


def count_solutions(grid: Grid, cap: int = 2, *, most_constrained: bool = True) -> int:
    """min(cap, number of completions of the inked cells).

    Deterministic: most-constrained cell first (ties by ascending index),
    digits ascending.  Pass ``most_constrained=False`` for naive ascending
    cell order; counts agree either way.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    n, _ = _search(grid.solved.copy(), cap, most_constrained)
    return n


def brute_solve(grid: Grid) -> Grid:
    """The unique completion of a well-posed grid.  Raises NotWellPosed otherwise."""
    n, sol = _search(grid.solved.copy(), 2, True)
    if n != 1 or sol is None:
        raise NotWellPosed(f"solution count is {'0' if n == 0 else '>= 2'}")
    return Grid(sol, grid.given.copy(), [0] * 81)


def verify_well_posed(grid: Grid) -> WellPosedness:
    """Classify a puzzle as WellPosed / NoSolution / MultipleSolutions.

    Fast path: an inconsistent grid is NoSolution and a consistent grid with
    fewer than 17 givens is MultipleSolutions, both without any search.
    """
    if check_consistency(grid) is not None:
        return WellPosedness("no_solution")
    if grid.inked_count() < MIN_CLUES_FOR_UNIQUE:
        return WellPosedness("multiple_solutions")
    n, sol = _search(grid.solved.copy(), 2, True)
    if n == 0:
        return WellPosedness("no_solution")
    if n > 1:
        return WellPosedness("multiple_solutions")
    return WellPosedness("well_posed", Grid(sol, grid.given.copy(), [0] * 81))
