"""Canonical computation tables and non-injectivity witness pairs.

Table(phi, a) is the configuration that carries out the column-by-column
evaluation of phi under the assignment a: row 0 spells out a, the main body
tracks the running disjunction of each clause, and the last column tracks
the running conjunction of the clauses.  All labels are 0, making the table
the canonical representative of its similarity class.
"""

from __future__ import annotations

from .automaton import CellState, Configuration, is_similar, relabel, state_to_text
from .formula import CnfFormula


def build_table(phi: CnfFormula, a: tuple[int, ...]) -> Configuration:
    """The computation table of phi under assignment a, labels all 0."""
    if len(a) != phi.m or any(v not in (0, 1) for v in a):
        raise ValueError("assignment must be a 0/1 vector of length m")
    n, m = phi.n, phi.m
    rows = []
    for i in range(n + 1):
        row = []
        for j in range(m + 2):
            if i == 0:
                if j == 0 or j == m + 1:
                    row.append(CellState(i, j, None, None, None, None, 0))
                else:
                    row.append(CellState(i, j, None, a[j - 1], None, None, 0))
            elif j == 0:
                row.append(CellState(i, j, None, None, None, None, 0))
            elif j == m + 1:
                pc = phi.partial_conjunction(i, a)
                row.append(CellState(i, j, None, None, None, pc, 0))
            else:
                flag = phi.sign(i, j)
                pd = phi.partial_disjunction(i, j, a)
                row.append(CellState(i, j, flag, a[j - 1], pd, None, 0))
        rows.append(tuple(row))
    return Configuration(n, m, tuple(rows))


def similar(C1: Configuration, C2: Configuration) -> bool:
    """The similarity relation: equal except possibly on labels."""
    return is_similar(C1, C2)


def with_labels(C: Configuration, labels: int) -> Configuration:
    """Copy of C with row-major label bits taken from an integer."""
    return relabel(C, labels)


def witness_pair(
    phi: CnfFormula, a: tuple[int, ...]
) -> tuple[Configuration, Configuration]:
    """Two distinct configurations with equal images under A_phi.

    For a satisfying assignment a, every cell of Table(phi, a) is blue and
    the successor relation closes into a cycle, so the all-0 and all-1 label
    vectors both map to the all-0 table.  phi must have an odd clause count
    (normalize first) for the automaton to be defined.
    """
    if phi.n % 2 == 0:
        raise ValueError("clause count n must be odd (normalize first)")
    if not phi.is_satisfied(a):
        raise ValueError(
            f"assignment {a} does not satisfy the formula; "
            "the output cell would be red and labels would not collapse"
        )
    table = build_table(phi, a)
    cells = (phi.n + 1) * (phi.m + 2)
    return table, relabel(table, (1 << cells) - 1)


def render_table(C: Configuration) -> str:
    """Aligned text rendering of a configuration, one row of cells per line."""
    cell_texts = [
        [_cell_text(C.grid[r][c]) for c in range(C.m + 2)] for r in range(C.n + 1)
    ]
    widths = [
        max(len(cell_texts[r][c]) for r in range(C.n + 1)) for c in range(C.m + 2)
    ]
    header = "     " + "  ".join(f"j={c}".ljust(widths[c]) for c in range(C.m + 2))
    lines = [header]
    for r in range(C.n + 1):
        body = "  ".join(cell_texts[r][c].ljust(widths[c]) for c in range(C.m + 2))
        lines.append(f"i={r}  {body}")
    return "\n".join(lines) + "\n"


def _cell_text(s: CellState) -> str:
    def b(v):
        return "_" if v is None else str(v)

    parts = [f"({b(s.row)},{b(s.col)})"]
    if s.flag is not None or s.a is not None or s.pd is not None:
        flag = {1: "+", -1: "-", 0: "0", None: "_"}[s.flag]
        parts.append(f"f{flag} a{b(s.a)} d{b(s.pd)}")
    if s.pc is not None:
        parts.append(f"c{b(s.pc)}")
    parts.append(f"l{b(s.label)}")
    return " ".join(parts)


__all__ = [
    "build_table",
    "similar",
    "with_labels",
    "witness_pair",
    "render_table",
    "state_to_text",
]
