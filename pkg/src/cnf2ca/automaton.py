"""Cell states, local correctness rules, and the automaton A_phi.

A formula phi with n clauses and m variables induces a finite state set
S(n, m) and a cellular automaton on the (n+1) x (m+2) rectangle of cells
whose non-quiescent part encodes computation tables of phi.  This module
holds the state algebra, the local correctness rules (A)-(E), blue/red cell
classification, the snake direction/successor geometry, and one synchronous
application of the automaton to a bounded configuration.

Conventions: a cell state is a 7-tuple (row, col, flag, a, pd, pc, label)
with None as the blank component; rows grow downward, so "below" a cell at
(r, c) is (r+1, c).  The rectangle spans rows 0..n and columns 0..m+1.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional

from .formula import CnfFormula

BLUE = "blue"
RED = "red"

RIGHT = "right"
LEFT = "left"
UP = "up"
DOWN = "down"

# Neighbourhood slot order used everywhere: centre, right, left, below, above.
NEIGHBOURHOOD_OFFSETS = ((0, 0), (0, 1), (0, -1), (1, 0), (-1, 0))

_DIRECTION_OFFSET = {RIGHT: (0, 1), LEFT: (0, -1), DOWN: (1, 0), UP: (-1, 0)}
# Neighbourhood slot (1-based within the 5-tuple) holding a given direction.
_DIRECTION_SLOT = {RIGHT: 1, LEFT: 2, DOWN: 3, UP: 4}


class CellState(NamedTuple):
    """One cell state; None stands for the blank component."""

    row: Optional[int]
    col: Optional[int]
    flag: Optional[int]
    a: Optional[int]
    pd: Optional[int]
    pc: Optional[int]
    label: Optional[int]

    @property
    def coord(self) -> tuple[Optional[int], Optional[int]]:
        return (self.row, self.col)


QUIESCENT = CellState(None, None, None, None, None, None, None)


def is_quiescent(s: CellState) -> bool:
    return all(v is None for v in s)


def _blank(v) -> str:
    return "_" if v is None else str(v)


def state_to_text(s: CellState) -> str:
    """Canonical one-line rendering used by dumps and digests."""
    return (
        f"coord=({_blank(s.row)},{_blank(s.col)}) flag={_blank(s.flag)} "
        f"a={_blank(s.a)} pd={_blank(s.pd)} pc={_blank(s.pc)} label={_blank(s.label)}"
    )


def state_pattern(s: CellState, n: int, m: int) -> Optional[int]:
    """Pattern number 1-7 of s within S(n, m), or None if s is not a member."""
    if is_quiescent(s):
        return 7
    if s.label not in (0, 1):
        return None
    r, c = s.row, s.col
    if not (isinstance(r, int) and isinstance(c, int)):
        return None
    rest = (s.flag, s.a, s.pd, s.pc)
    if (r, c) == (0, 0):
        return 1 if rest == (None, None, None, None) else None
    if c == 0 and 1 <= r <= n:
        return 2 if rest == (None, None, None, None) else None
    if r == 0 and 1 <= c <= m:
        return 3 if s.a in (0, 1) and (s.flag, s.pd, s.pc) == (None, None, None) else None
    if (r, c) == (0, m + 1):
        return 4 if rest == (None, None, None, None) else None
    if c == m + 1 and 1 <= r <= n:
        return 5 if s.pc in (0, 1) and (s.flag, s.a, s.pd) == (None, None, None) else None
    if 1 <= r <= n and 1 <= c <= m:
        ok = s.flag in (-1, 0, 1) and s.a in (0, 1) and s.pd in (0, 1) and s.pc is None
        return 6 if ok else None
    return None


def _component_key(v) -> tuple[int, int]:
    return (0, 0) if v is None else (1, v)


def state_sort_key(s: CellState, n: int, m: int) -> tuple:
    """Canonical ordering key: pattern, coord, then components, blank first."""
    pat = state_pattern(s, n, m)
    if pat is None:
        raise ValueError(f"state not in S({n},{m}): {state_to_text(s)}")
    return (pat,) + tuple(_component_key(v) for v in s)


@dataclass(frozen=True)
class StateSet:
    """Canonical enumeration of S(n, m) with index lookup."""

    n: int
    m: int
    states: tuple[CellState, ...]
    index: dict[CellState, int] = field(compare=False, repr=False)

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def q_index(self) -> int:
        return len(self.states) - 1

    def digest(self) -> str:
        """sha256 over the canonical state dump, in enumeration order."""
        text = "\n".join(state_to_text(s) for s in self.states) + "\n"
        return hashlib.sha256(text.encode("ascii")).hexdigest()

    def skeleton_states(self) -> list[CellState]:
        """The label-0 representative of every non-quiescent state."""
        return [s for s in self.states if not is_quiescent(s) and s.label == 0]


def enumerate_states(n: int, m: int) -> StateSet:
    """Enumerate S(n, m) in canonical order; n must be odd."""
    if n % 2 == 0:
        raise ValueError("clause count n must be odd (normalize first)")
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    states: list[CellState] = []
    for label in (0, 1):  # pattern 1: top-left corner
        states.append(CellState(0, 0, None, None, None, None, label))
    for i in range(1, n + 1):  # pattern 2: column 0
        for label in (0, 1):
            states.append(CellState(i, 0, None, None, None, None, label))
    for j in range(1, m + 1):  # pattern 3: assignment row
        for a in (0, 1):
            for label in (0, 1):
                states.append(CellState(0, j, None, a, None, None, label))
    for label in (0, 1):  # pattern 4: top-right corner
        states.append(CellState(0, m + 1, None, None, None, None, label))
    for i in range(1, n + 1):  # pattern 5: partial-conjunction column
        for pc in (0, 1):
            for label in (0, 1):
                states.append(CellState(i, m + 1, None, None, None, pc, label))
    for i in range(1, n + 1):  # pattern 6: main body
        for j in range(1, m + 1):
            for flag in (-1, 0, 1):
                for a in (0, 1):
                    for pd in (0, 1):
                        for label in (0, 1):
                            states.append(CellState(i, j, flag, a, pd, None, label))
    states.append(QUIESCENT)  # pattern 7
    assert len(states) == 24 * n * m + 6 * n + 4 * m + 5
    return StateSet(n, m, tuple(states), {s: k for k, s in enumerate(states)})


@dataclass(frozen=True)
class Configuration:
    """A bounded configuration: no rectangle cell is quiescent.

    The grid holds rows 0..n top to bottom, columns 0..m+1 left to right;
    everything outside the rectangle is implicitly quiescent.  Cells must be
    well-formed (components in their domains, written coordinates inside the
    rectangle) but need not satisfy the state patterns — the local rules are
    what detect pattern violations.
    """

    n: int
    m: int
    grid: tuple[tuple[CellState, ...], ...]

    def __post_init__(self) -> None:
        if len(self.grid) != self.n + 1 or any(len(r) != self.m + 2 for r in self.grid):
            raise ValueError("grid shape disagrees with (n, m)")
        for r, row in enumerate(self.grid):
            for c, s in enumerate(row):
                problem = self._cell_problem(s)
                if problem:
                    raise ValueError(f"cell ({r},{c}): {problem}")

    def _cell_problem(self, s: CellState) -> Optional[str]:
        if not isinstance(s, CellState):
            return "not a CellState"
        if is_quiescent(s):
            return "quiescent cell inside the rectangle"
        if not (isinstance(s.row, int) and 0 <= s.row <= self.n):
            return f"written row {s.row!r} out of range"
        if not (isinstance(s.col, int) and 0 <= s.col <= self.m + 1):
            return f"written column {s.col!r} out of range"
        if s.flag not in (-1, 0, 1, None):
            return f"flag {s.flag!r} out of domain"
        for name in ("a", "pd", "pc"):
            if getattr(s, name) not in (0, 1, None):
                return f"{name} {getattr(s, name)!r} out of domain"
        if s.label not in (0, 1):
            return f"label {s.label!r} out of domain"
        return None

    def state_at(self, pos: tuple[int, int]) -> CellState:
        """State at an arbitrary position; quiescent outside the rectangle."""
        r, c = pos
        if 0 <= r <= self.n and 0 <= c <= self.m + 1:
            return self.grid[r][c]
        return QUIESCENT

    def positions(self) -> Iterator[tuple[int, int]]:
        for r in range(self.n + 1):
            for c in range(self.m + 2):
                yield (r, c)


def neighbourhood_of(pos: tuple[int, int]) -> list[tuple[int, int]]:
    """Positions (self, right, left, below, above) of pos."""
    r, c = pos
    return [(r + dr, c + dc) for dr, dc in NEIGHBOURHOOD_OFFSETS]


def window_at(C: Configuration, pos: tuple[int, int]) -> tuple[CellState, ...]:
    """The 5-tuple of states in the neighbourhood of pos."""
    return tuple(C.state_at(p) for p in neighbourhood_of(pos))


def direction(n: int, m: int, i: int, j: int) -> str:
    """Snake direction of written coordinate (i, j); n must be odd."""
    if n % 2 == 0:
        raise ValueError("clause count n must be odd (normalize first)")
    if not (0 <= i <= n and 0 <= j <= m + 1):
        raise ValueError(f"({i},{j}) outside the rectangle")
    if (i, j) == (n, 1):  # takes precedence over the odd-row descent
        return LEFT
    if (i, j) == (0, 0) or (i % 2 == 0 and 1 <= j <= m):
        return RIGHT
    if i % 2 == 1 and 2 <= j <= m + 1:
        return LEFT
    if (i % 2 == 1 and j == 1) or (i % 2 == 0 and j == m + 1):
        return DOWN
    assert i >= 1 and j == 0
    return UP


def suc(n: int, m: int, i: int, j: int) -> tuple[int, int]:
    """Successor coordinate: one step from (i, j) in its direction."""
    dr, dc = _DIRECTION_OFFSET[direction(n, m, i, j)]
    return (i + dr, j + dc)


def direction_slot(n: int, m: int, i: int, j: int) -> int:
    """Neighbourhood slot index (1..4) that direction(i, j) points at."""
    return _DIRECTION_SLOT[direction(n, m, i, j)]


def local_violation(
    phi: CnfFormula,
    s1: CellState,
    s2: CellState,
    s3: CellState,
    s4: CellState,
    s5: CellState,
) -> Optional[str]:
    """First local rule violated by centre s1 with neighbours (right, left,
    below, above) = (s2, s3, s4, s5), or None when s1 is locally correct.

    Rules in evaluation order: (A) index consistency, (B) formula
    consistency, (C1)-(C3) vertical, (D1)-(D2) horizontal, (E1)-(E4) blank
    placement, and finally (S) membership of s1 in the state set.  The centre
    must be non-quiescent.
    """
    if is_quiescent(s1):
        raise ValueError("local rules are defined for non-quiescent centres")
    n, m = phi.n, phi.m
    i, j = s1.row, s1.col

    # (A) index consistency: each neighbour carries the shifted written
    # coordinate when that coordinate is inside the rectangle, else is q.
    for t, (dr, dc) in zip((s2, s3, s4, s5), NEIGHBOURHOOD_OFFSETS[1:]):
        ti, tj = i + dr, j + dc
        if 0 <= ti <= n and 0 <= tj <= m + 1:
            if is_quiescent(t) or (t.row, t.col) != (ti, tj):
                return "A"
        elif not is_quiescent(t):
            return "A"

    in_main = 1 <= i <= n and 1 <= j <= m

    # (B) formula consistency: main-body flag encodes the clause relation.
    if in_main and s1.flag != phi.sign(i, j):
        return "B"

    # (C1) the a-value is constant along columns 1..m (non-quiescent
    # vertical neighbours only; the rows beyond the rectangle are exempt).
    if 1 <= j <= m:
        for t in (s4, s5):
            if not is_quiescent(t) and t.a != s1.a:
                return "C1"

    # (C2)/(C3) partial conjunctions down the last column.
    if j == m + 1 and i >= 1:
        want = None
        if i >= 2:
            want = 1 if (s5.pc == 1 and s3.pd == 1) else 0
            rule = "C2"
        else:
            want = 1 if s3.pd == 1 else 0
            rule = "C3"
        if s1.pc != want:
            return rule

    # (D1)/(D2) partial disjunctions along main-body rows.
    if in_main:
        lit = (s1.flag == 1 and s1.a == 1) or (s1.flag == -1 and s1.a == 0)
        if j >= 2:
            want = 1 if (s3.pd == 1 or lit) else 0
            rule = "D1"
        else:
            want = 1 if lit else 0
            rule = "D2"
        if s1.pd != want:
            return rule

    # (E1)-(E4) blank placement by region.
    if j == 0 or (i, j) in ((0, 0), (0, m + 1)):
        if (s1.flag, s1.a, s1.pd, s1.pc) != (None, None, None, None):
            return "E1"
    elif i == 0 and 1 <= j <= m:
        if (s1.flag, s1.pd, s1.pc) != (None, None, None):
            return "E2"
    elif j == m + 1 and i >= 1:
        if (s1.flag, s1.a, s1.pd) != (None, None, None):
            return "E3"
    elif in_main and s1.pc is not None:
        return "E4"

    # (S) anything else that keeps s1 outside S(n, m), e.g. a blank a in the
    # main body, which no rule above inspects.
    if state_pattern(s1, n, m) is None:
        return "S"
    return None


def local_rule_violation(
    phi: CnfFormula, C: Configuration, pos: tuple[int, int]
) -> Optional[str]:
    """First rule violated at pos in C, or None."""
    return local_violation(phi, *window_at(C, pos))


def is_locally_correct(phi: CnfFormula, C: Configuration, pos: tuple[int, int]) -> bool:
    return local_rule_violation(phi, C, pos) is None


def state_color(
    phi: CnfFormula,
    s1: CellState,
    s2: CellState,
    s3: CellState,
    s4: CellState,
    s5: CellState,
) -> str:
    """Blue/red classification of centre s1 given its neighbours."""
    if local_violation(phi, s1, s2, s3, s4, s5) is not None:
        return RED
    if (s1.row, s1.col) == (phi.n, phi.m + 1) and s1.pc != 1:
        return RED
    return BLUE


def color(phi: CnfFormula, C: Configuration, pos: tuple[int, int]) -> str:
    """Blue/red classification of the cell at pos."""
    return state_color(phi, *window_at(C, pos))


def cell_classification(
    phi: CnfFormula, C: Configuration
) -> tuple[list[list[str]], dict[tuple[int, int], tuple[int, int]]]:
    """Colors of all cells plus successor positions of the blue ones.

    Labels never enter the local rules, so this classification is shared by
    the whole similarity class of C.  The successor of a blue cell at pos is
    the actual neighbour in the direction of its written coordinate.
    """
    n, m = C.n, C.m
    colors = [[RED] * (m + 2) for _ in range(n + 1)]
    successors: dict[tuple[int, int], tuple[int, int]] = {}
    for pos in C.positions():
        if color(phi, C, pos) == BLUE:
            r, c = pos
            colors[r][c] = BLUE
            s = C.grid[r][c]
            dr, dc = _DIRECTION_OFFSET[direction(n, m, s.row, s.col)]
            successors[pos] = (r + dr, c + dc)
    return colors, successors


def successor_of(phi: CnfFormula, C: Configuration, pos: tuple[int, int]) -> tuple[int, int]:
    """Position of the unique successor neighbour of a blue cell.

    Scans all four neighbours for the written successor coordinate and
    asserts exactly one match (rule (A) guarantees this for blue cells).
    """
    if color(phi, C, pos) != BLUE:
        raise ValueError(f"cell {pos} is red: no successor")
    s = C.state_at(pos)
    target = suc(C.n, C.m, s.row, s.col)
    matches = [
        p
        for p in neighbourhood_of(pos)[1:]
        if not is_quiescent(C.state_at(p)) and C.state_at(p).coord == target
    ]
    assert len(matches) == 1, f"blue cell {pos} has {len(matches)} successors"
    return matches[0]


def step(phi: CnfFormula, C: Configuration) -> Configuration:
    """One synchronous application of A_phi to C.

    Blue cells replace their label by label XOR label(successor); red cells
    are left unchanged.  The result is similar to C.
    """
    if (C.n, C.m) != (phi.n, phi.m):
        raise ValueError(
            f"configuration is {C.n}x{C.m}, formula needs {phi.n}x{phi.m}"
        )
    _, successors = cell_classification(phi, C)
    rows = []
    for r in range(C.n + 1):
        row = []
        for c in range(C.m + 2):
            s = C.grid[r][c]
            spos = successors.get((r, c))
            if spos is not None:
                row.append(s._replace(label=s.label ^ C.state_at(spos).label))
            else:
                row.append(s)
        rows.append(tuple(row))
    return Configuration(C.n, C.m, tuple(rows))


def is_similar(C1: Configuration, C2: Configuration) -> bool:
    """True when C1 and C2 agree everywhere except possibly on labels."""
    if (C1.n, C1.m) != (C2.n, C2.m):
        return False
    return all(
        C1.grid[r][c]._replace(label=0) == C2.grid[r][c]._replace(label=0)
        for r, c in C1.positions()
    )


def relabel(C: Configuration, labels: int) -> Configuration:
    """Copy of C with labels taken from an integer bit vector.

    Bit k of labels (row-major cell order) becomes the label of cell k.
    """
    rows = []
    k = 0
    for r in range(C.n + 1):
        row = []
        for c in range(C.m + 2):
            row.append(C.grid[r][c]._replace(label=(labels >> k) & 1))
            k += 1
        rows.append(tuple(row))
    return Configuration(C.n, C.m, tuple(rows))


def labels_of(C: Configuration) -> int:
    """The label bits of C packed row-major into an integer."""
    bits = 0
    for k, pos in enumerate(C.positions()):
        if C.state_at(pos).label:
            bits |= 1 << k
    return bits


def canonical_representative(C: Configuration) -> Configuration:
    """The all-labels-0 member of C's similarity class."""
    return relabel(C, 0)


_CONFIG_LINE = re.compile(
    r"^(\d+) (\d+) \| coord=\((\d+|_),(\d+|_)\) flag=(-1|0|1|_) "
    r"a=(0|1|_) pd=(0|1|_) pc=(0|1|_) label=(0|1|_)$"
)


class ConfigFormatError(ValueError):
    """Raised for unparseable configuration documents."""


def write_config(C: Configuration) -> str:
    """Render C in the line-per-cell text format."""
    lines = [f"config {C.n} {C.m}"]
    for r, c in C.positions():
        lines.append(f"{r} {c} | {state_to_text(C.grid[r][c])}")
    return "\n".join(lines) + "\n"


def parse_config(text: str) -> Configuration:
    """Parse the write_config text format back into a Configuration."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ConfigFormatError("empty document")
    header = lines[0].split()
    if len(header) != 3 or header[0] != "config":
        raise ConfigFormatError("expected header 'config n m'")
    try:
        n, m = int(header[1]), int(header[2])
    except ValueError:
        raise ConfigFormatError("expected header 'config n m'") from None
    expected = (n + 1) * (m + 2)
    if len(lines) - 1 != expected:
        raise ConfigFormatError(f"expected {expected} cell lines, got {len(lines) - 1}")
    cells: dict[tuple[int, int], CellState] = {}
    for ln in lines[1:]:
        match = _CONFIG_LINE.match(ln.strip())
        if not match:
            raise ConfigFormatError(f"malformed cell line: {ln!r}")
        r, c = int(match.group(1)), int(match.group(2))
        if (r, c) in cells:
            raise ConfigFormatError(f"duplicate cell ({r},{c})")
        parts = [None if g == "_" else int(g) for g in match.groups()[2:]]
        cells[(r, c)] = CellState(*parts)
    try:
        grid = tuple(
            tuple(cells[(r, c)] for c in range(m + 2)) for r in range(n + 1)
        )
    except KeyError as missing:
        raise ConfigFormatError(f"missing cell {missing.args[0]}") from None
    try:
        return Configuration(n, m, grid)
    except ValueError as exc:
        raise ConfigFormatError(str(exc)) from None
