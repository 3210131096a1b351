"""Phase I: populate the grid with candidates.

Step 1 hunts hidden singles, half doubles and hidden doubles box by box
(rows and columns are deliberately left to Step 3).  Step 2 then fills every
cell with all digits not blocked by ink, half doubles, or doubles/triples.

The registry plays the role of the pencil marks: ``entries`` are the small
corner digits (a half double per box and digit), ``claim_groups`` the big
penciled hidden doubles/triples, which make their cells unavailable to every
other digit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .grid import (BIT, CELLS_OF, COL_OF, DIGITS_OF, ROW_OF, STRUCTS_OF,
                   ContradictionFound, Grid, Structure, place_ink)
from .trace import TraceEvent


BOX_FLAT = tuple(STRUCTS_OF[i][2] for i in range(81))


@dataclass(frozen=True, slots=True)
class Phase1Find:
    kind: str  # hidden_single | half_double | hidden_double | hidden_triple | passive_single
    box: int
    cells: tuple[int, ...]
    digits: tuple[int, ...]


@dataclass(slots=True)
class Phase1Run:
    finds: list[Phase1Find] = field(default_factory=list)
    finds_per_pass: list[int] = field(default_factory=list)
    events: list[TraceEvent] = field(default_factory=list)

    @property
    def passes(self) -> int:
        return len(self.finds_per_pass)


class HalfDoubleRegistry:
    """Phase I record of small-corner marks and big-pencil claims.

    ``entries`` maps (box, digit) to the exactly-two cells still available to
    the digit in that box.  Entries are purged as soon as the digit is inked
    or a cell becomes unavailable (Rule 22 fires at that moment).
    ``claim_groups`` holds hidden doubles/triples: their cells are closed to
    all other digits (Rule 21).
    """

    def __init__(self):
        self.entries: dict[tuple[int, int], tuple[int, int]] = {}
        self.claim_groups: list[tuple[tuple[int, ...], int]] = []
        self.claimed: dict[int, int] = {}

    def claim(self, cells: tuple[int, ...], mask: int) -> None:
        self.claim_groups.append((cells, mask))
        for c in cells:
            self.claimed[c] = mask

    def half_doubles(self) -> list[tuple[Structure, int, int, int]]:
        return [(Structure("box", bx), d, a, b)
                for (bx, d), (a, b) in sorted(self.entries.items())]


def _digit_blockers(grid: Grid, registry: HalfDoubleRegistry, d: int):
    """Rows/columns closed to ``d``: by ink, or by a half double / claimed
    double whose cells all lie in the line (Rules 19/20/21)."""
    row_ink = 0
    col_ink = 0
    for i, dg in enumerate(grid.solved):
        if dg == d:
            row_ink |= 1 << ROW_OF[i]
            col_ink |= 1 << COL_OF[i]
    line_pairs: list[tuple[str, int, tuple[int, ...]]] = []
    b = BIT[d]
    for (_, dd), pair in registry.entries.items():
        if dd != d:
            continue
        if ROW_OF[pair[0]] == ROW_OF[pair[1]]:
            line_pairs.append(("row", ROW_OF[pair[0]], pair))
        elif COL_OF[pair[0]] == COL_OF[pair[1]]:
            line_pairs.append(("col", COL_OF[pair[0]], pair))
    for cells, m in registry.claim_groups:
        if not m & b:
            continue
        rows = {ROW_OF[c] for c in cells}
        cols = {COL_OF[c] for c in cells}
        if len(rows) == 1:
            line_pairs.append(("row", rows.pop(), cells))
        elif len(cols) == 1:
            line_pairs.append(("col", cols.pop(), cells))
    return row_ink, col_ink, line_pairs


def _is_available(grid: Grid, registry: HalfDoubleRegistry, c: int, d: int,
                  blockers) -> bool:
    if grid.solved[c]:
        return False
    cm = registry.claimed.get(c)
    if cm is not None and not cm & BIT[d]:
        return False
    row_ink, col_ink, line_pairs = blockers
    if row_ink >> ROW_OF[c] & 1 or col_ink >> COL_OF[c] & 1:
        return False
    for kind, idx, cells in line_pairs:
        if c in cells:
            continue
        if kind == "row" and ROW_OF[c] == idx:
            return False
        if kind == "col" and COL_OF[c] == idx:
            return False
    return True


def available_cells(grid: Grid, registry: HalfDoubleRegistry, box: Structure,
                    d: int) -> set[int]:
    """Cells of the box still open to ``d``: not inked, not closed off by a
    claimed double/triple, and not covered by a row/column that blocks ``d``."""
    if box.kind != "box":
        raise ValueError("available_cells scans boxes only")
    bx = box.index
    if any(grid.solved[c] == d for c in CELLS_OF[18 + bx]):
        raise ValueError(f"digit {d} is already inked in box {bx}")
    blockers = _digit_blockers(grid, registry, d)
    return {c for c in CELLS_OF[18 + bx] if _is_available(grid, registry, c, d, blockers)}


def _eager_rule22(grid: Grid, registry: HalfDoubleRegistry, events: list,
                  finds: list) -> None:
    """Rule 22, applied as soon as a half-double (or claimed) cell becomes
    unavailable: the surviving cell and digit are a hidden single."""
    changed = True
    while changed:
        changed = False
        for (bx, d), (a, b) in list(registry.entries.items()):
            satisfied = False
            for c in CELLS_OF[18 + bx]:
                if grid.solved[c] == d:
                    satisfied = True
            if satisfied:
                registry.entries.pop((bx, d))
                continue
            blockers = _digit_blockers(grid, registry, d)
            a_ok = _is_available(grid, registry, a, d, blockers)
            b_ok = _is_available(grid, registry, b, d, blockers)
            if a_ok and b_ok:
                continue
            registry.entries.pop((bx, d))
            if not a_ok and not b_ok:
                raise ContradictionFound("starved", structure=Structure("box", bx), digit=d)
            target = a if a_ok else b
            ev = place_ink(grid, target, d, step="1.1", rule="passive single",
                           structure=Structure("box", bx))
            events.append(ev)
            finds.append(Phase1Find("passive_single", bx, (target,), (d,)))
            changed = True
        for c in sorted(registry.claimed):
            if grid.solved[c]:
                continue
            m = grid.masks[c]
            if not m:
                raise ContradictionFound("empty_cell", cell=c)
            if not m & (m - 1):
                d = DIGITS_OF[m][0]
                ev = place_ink(grid, c, d, step="1.1", rule="passive single",
                               structure=Structure("box", BOX_FLAT[c] - 18))
                events.append(ev)
                finds.append(Phase1Find("passive_single", BOX_FLAT[c] - 18, (c,), (d,)))
                changed = True


def _try_corollaries(grid: Grid, registry: HalfDoubleRegistry, bx: int, d: int,
                     pair: tuple[int, int], triples_enabled: bool,
                     events: list, finds: list) -> None:
    """Corollary 13a (two half doubles on the same two cells are a hidden
    double) and, optionally, Corollary 16a for hidden triples."""
    if any(c in registry.claimed for c in pair):
        return
    for d2 in range(1, 10):
        if d2 == d or registry.entries.get((bx, d2)) != pair:
            continue
        gm = BIT[d] | BIT[d2]
        erased = []
        for c in pair:
            for dx in DIGITS_OF[grid.masks[c] & ~gm]:
                grid.masks[c] &= ~BIT[dx]
                erased.append((c, dx))
        registry.claim(pair, gm)
        digits = tuple(sorted((d, d2)))
        finds.append(Phase1Find("hidden_double", bx, pair, digits))
        events.append(TraceEvent("1.3", "hidden double", structure=Structure("box", bx),
                                 cells=pair, digits=digits, erased=tuple(erased)))
        _eager_rule22(grid, registry, events, finds)
        return
    if not triples_enabled:
        return
    others = [(dd, p) for (bb, dd), p in registry.entries.items()
              if bb == bx and dd != d]
    for (d2, p2), (d3, p3) in combinations(others, 2):
        spots = set(pair) | set(p2) | set(p3)
        if len(spots) != 3 or any(c in registry.claimed for c in spots):
            continue
        trio = tuple(sorted(spots))
        gm = BIT[d] | BIT[d2] | BIT[d3]
        erased = []
        for c in trio:
            for dx in DIGITS_OF[grid.masks[c] & ~gm]:
                grid.masks[c] &= ~BIT[dx]
                erased.append((c, dx))
        registry.claim(trio, gm)
        digits = tuple(sorted((d, d2, d3)))
        finds.append(Phase1Find("hidden_triple", bx, trio, digits))
        events.append(TraceEvent("1.3", "hidden triple", structure=Structure("box", bx),
                                 cells=trio, digits=digits, erased=tuple(erased)))
        _eager_rule22(grid, registry, events, finds)
        return


def step1_scan(grid: Grid, registry: HalfDoubleRegistry, triples_enabled: bool = False,
               *, trace: list | None = None) -> list[Phase1Find]:
    """One full pass over (digit 1..9) x (box 0..8), applying finds in place.

    An unchanged half double re-registers silently; only new registrations,
    inks and claims count as finds.  Raises ContradictionFound when a digit
    has no available cell in a box that does not contain it.
    """
    events = trace if trace is not None else []
    finds: list[Phase1Find] = []
    for d in range(1, 10):
        for bx in range(9):
            if any(grid.solved[c] == d for c in CELLS_OF[18 + bx]):
                registry.entries.pop((bx, d), None)
                continue
            blockers = _digit_blockers(grid, registry, d)
            avail = [c for c in CELLS_OF[18 + bx]
                     if _is_available(grid, registry, c, d, blockers)]
            if not avail:
                raise ContradictionFound("starved", structure=Structure("box", bx), digit=d)
            if len(avail) == 1:
                registry.entries.pop((bx, d), None)
                ev = place_ink(grid, avail[0], d, step="1.1", rule="hidden single",
                               structure=Structure("box", bx))
                events.append(ev)
                finds.append(Phase1Find("hidden_single", bx, (avail[0],), (d,)))
                _eager_rule22(grid, registry, events, finds)
            elif len(avail) == 2:
                pair = (avail[0], avail[1])
                if registry.entries.get((bx, d)) == pair:
                    continue
                registry.entries[(bx, d)] = pair
                finds.append(Phase1Find("half_double", bx, pair, (d,)))
                events.append(TraceEvent("1.2", "half double",
                                         structure=Structure("box", bx),
                                         cells=pair, digits=(d,)))
                _try_corollaries(grid, registry, bx, d, pair, triples_enabled,
                                 events, finds)
    return finds


def step1_fixpoint(grid: Grid, registry: HalfDoubleRegistry,
                   triples_enabled: bool = False, *, trace: list | None = None) -> Phase1Run:
    """Repeat step1_scan until a pass yields no new finds (usually 2-3 passes)."""
    events = trace if trace is not None else []
    start = len(events)
    run = Phase1Run(events=events)
    while True:
        finds = step1_scan(grid, registry, triples_enabled, trace=events)
        run.finds.extend(finds)
        run.finds_per_pass.append(len(finds))
        if not finds:
            break
    run.events = events[start:]
    return run


def step2_fill(grid: Grid, registry: HalfDoubleRegistry,
               *, trace: list | None = None) -> list[TraceEvent]:
    """Prune every cell down to its non-blocked candidates and ink naked singles.

    Ink blockages are already reflected in the masks; this applies the
    pencil-mark blockages: a half double erases its digit from every
    structure containing both of its cells (Rule 20), and a claimed double or
    triple erases its digits from every structure containing all of its cells
    (Rule 21).  It is very important not to miss any candidates, so nothing
    else is erased.  Raises ContradictionFound if a cell ends up empty.
    """
    events = trace if trace is not None else []
    masks = grid.masks
    for (bx, d), pair in registry.entries.items():
        b = BIT[d]
        common = set(STRUCTS_OF[pair[0]]) & set(STRUCTS_OF[pair[1]])
        erased = []
        for s in sorted(common):
            for c in CELLS_OF[s]:
                if c in pair or grid.solved[c] or not masks[c] & b:
                    continue
                masks[c] &= ~b
                erased.append((c, d))
                if not masks[c]:
                    raise ContradictionFound("empty_cell", cell=c)
        if erased:
            events.append(TraceEvent("2", "half double block",
                                     structure=Structure("box", bx),
                                     cells=pair, digits=(d,), erased=tuple(erased)))
    for cells, gm in registry.claim_groups:
        common = set(STRUCTS_OF[cells[0]])
        for c in cells[1:]:
            common &= set(STRUCTS_OF[c])
        erased = []
        for s in sorted(common):
            for c in CELLS_OF[s]:
                if c in cells or grid.solved[c]:
                    continue
                for dx in DIGITS_OF[masks[c] & gm]:
                    masks[c] &= ~BIT[dx]
                    erased.append((c, dx))
                if not masks[c]:
                    raise ContradictionFound("empty_cell", cell=c)
        if erased:
            rule = "double block" if len(cells) == 2 else "triple block"
            events.append(TraceEvent("2", rule, cells=cells,
                                     digits=DIGITS_OF[gm], erased=tuple(erased)))
    for c in range(81):
        if grid.solved[c]:
            continue
        m = masks[c]
        if not m:
            raise ContradictionFound("empty_cell", cell=c)
        if not m & (m - 1):
            ev = place_ink(grid, c, DIGITS_OF[m][0], step="2", rule="naked single")
            events.append(ev)
    return events
