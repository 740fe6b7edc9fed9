"""Explicit transition tables for A_phi and their bit-exact encoding.

The local transition function is total on 5-tuples of states; a table lists
one output state per 5-tuple, rows ordered lexicographically by the
canonical state enumeration.  Encoded form: each output as a ceil(log2 s)-
bit big-endian state index, rows concatenated, zero-padded to a whole byte.
Materialization is budget-gated; the build is vectorized since row counts
grow as s^5 (already ~9*10^7 for the smallest state set).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analysis import BudgetExceeded
from .automaton import (
    CellState,
    Configuration,
    NEIGHBOURHOOD_OFFSETS,
    StateSet,
    direction_slot,
    enumerate_states,
    is_quiescent,
    window_at,
)
from .formula import CnfFormula

_ENCODE_CHUNK_ROWS = 1 << 20  # multiple of 8, so chunks pack independently


@dataclass(frozen=True)
class CaTable:
    """Explicit table for the local transition function on S^5."""

    states: StateSet
    outputs: np.ndarray  # shape (size**5,), dtype uint8/uint16

    @property
    def size(self) -> int:
        return self.states.size

    @property
    def rows(self) -> int:
        return len(self.outputs)

    @property
    def index_bits(self) -> int:
        return max(1, (self.size - 1).bit_length())

    @property
    def bit_length(self) -> int:
        return self.rows * self.index_bits

    def row_index(self, window: tuple[CellState, ...]) -> int:
        """Lexicographic row number of a 5-tuple of states."""
        idx = self.states.index
        row = 0
        for s in window:
            row = row * self.size + idx[s]
        return row

    def lookup(self, window: tuple[CellState, ...]) -> CellState:
        """Table output for (centre, right, left, below, above)."""
        return self.states.states[int(self.outputs[self.row_index(window)])]


def materialize_table(phi: CnfFormula, budget_rows: int = 2**28) -> CaTable:
    """Build the full transition table of A_phi (n must be odd).

    Vectorized over the s^4 neighbour combinations for each centre state:
    the local rules reduce to comparisons between per-slot component arrays,
    and the output index is sibling arithmetic on the label bit (label-0 and
    label-1 variants of a state are adjacent in the canonical enumeration).
    """
    states = enumerate_states(phi.n, phi.m)
    s = states.size
    if s**5 > budget_rows:
        raise BudgetExceeded(f"{s}^5 rows exceed the {budget_rows}-row budget")
    n, m = phi.n, phi.m

    comp = _component_arrays(states)
    k4 = np.arange(s**4, dtype=np.int64)
    slots = []  # per neighbour slot: component arrays over the s^4 tuples
    for power in (3, 2, 1, 0):
        idx = (k4 // s**power) % s
        slots.append({name: arr[idx] for name, arr in comp.items()})

    dtype = np.uint8 if s <= 0xFF else np.uint16
    outputs = np.empty(s**5, dtype=dtype)
    for i1, centre in enumerate(states.states):
        block = slice(i1 * s**4, (i1 + 1) * s**4)
        if is_quiescent(centre):
            outputs[block] = states.q_index
            continue
        blue = _blue_mask(phi, centre, slots)
        if blue is None:
            outputs[block] = i1
            continue
        succ = slots[direction_slot(n, m, centre.row, centre.col) - 1]
        image = i1 - centre.label + (centre.label ^ succ["label"])
        outputs[block] = np.where(blue, image, i1).astype(dtype)
    return CaTable(states, outputs)


def _component_arrays(states: StateSet) -> dict[str, np.ndarray]:
    """Per-state component vectors; -1 encodes a blank (or -2 for flag)."""
    def vec(getter, blank, dt):
        return np.array(
            [blank if getter(s) is None else getter(s) for s in states.states],
            dtype=dt,
        )

    return {
        "row": vec(lambda s: s.row, -1, np.int16),
        "col": vec(lambda s: s.col, -1, np.int16),
        "a": vec(lambda s: s.a, -1, np.int8),
        "pd": vec(lambda s: s.pd, -1, np.int8),
        "pc": vec(lambda s: s.pc, -1, np.int8),
        "label": vec(lambda s: s.label, -1, np.int8),
        "isq": np.array([is_quiescent(s) for s in states.states], dtype=bool),
    }


def _blue_mask(phi, centre, slots):
    """Boolean mask of neighbour tuples making the centre blue, or None when
    the centre is red regardless of its neighbours."""
    n, m = phi.n, phi.m
    i, j = centre.row, centre.col
    in_main = 1 <= i <= n and 1 <= j <= m

    # Scalar short-circuits: rules that read the centre alone.
    if in_main and centre.flag != phi.sign(i, j):
        return None  # (B)
    if in_main:
        lit = (centre.flag == 1 and centre.a == 1) or (
            centre.flag == -1 and centre.a == 0
        )
        if j == 1 and centre.pd != int(lit):
            return None  # (D2)
    if (i, j) == (n, m + 1) and centre.pc != 1:
        return None  # the output cell must report 1 to be blue

    blue = np.ones(len(slots[0]["row"]), dtype=bool)
    for t, (dr, dc) in zip(slots, NEIGHBOURHOOD_OFFSETS[1:]):
        ti, tj = i + dr, j + dc
        if 0 <= ti <= n and 0 <= tj <= m + 1:  # (A)
            blue &= ~t["isq"] & (t["row"] == ti) & (t["col"] == tj)
        else:
            blue &= t["isq"]
    right, left, below, above = slots
    if 1 <= j <= m:  # (C1)
        ca = -1 if centre.a is None else centre.a
        blue &= below["isq"] | (below["a"] == ca)
        blue &= above["isq"] | (above["a"] == ca)
    if j == m + 1 and i >= 1:  # (C2)/(C3)
        want = (left["pd"] == 1) if i == 1 else ((above["pc"] == 1) & (left["pd"] == 1))
        if centre.pc == 1:
            blue &= want
        elif centre.pc == 0:
            blue &= ~want
        else:
            return None
    if in_main and j >= 2:  # (D1)
        want = (left["pd"] == 1) | lit
        blue &= want if centre.pd == 1 else ~want
    return blue


def step_with_table(table: CaTable, C: Configuration) -> Configuration:
    """Apply A_phi to C by table lookup instead of rule evaluation."""
    if (C.n, C.m) != (table.states.n, table.states.m):
        raise ValueError("configuration dimensions disagree with the table")
    rows = tuple(
        tuple(table.lookup(window_at(C, (r, c))) for c in range(C.m + 2))
        for r in range(C.n + 1)
    )
    return Configuration(C.n, C.m, rows)


def encode_ca(table: CaTable) -> bytes:
    """Pack the table into bytes: w-bit big-endian indices, row order.

    Chunks are multiples of 8 rows, so every chunk packs to whole bytes and
    only the final partial chunk contributes the trailing zero padding.
    """
    w = table.index_bits
    out = bytearray()
    outputs = table.outputs
    for start in range(0, len(outputs), _ENCODE_CHUNK_ROWS):
        chunk = outputs[start : start + _ENCODE_CHUNK_ROWS]
        octets = chunk.astype(">u2").view(np.uint8).reshape(-1, 2)
        bits = np.unpackbits(octets, axis=1)
        out += np.packbits(bits[:, 16 - w :]).tobytes()
    return bytes(out)


def decode_ca(data: bytes, n: int, m: int) -> CaTable:
    """Rebuild a table from its encoded bytes; inverse of encode_ca."""
    states = enumerate_states(n, m)
    s = states.size
    w = max(1, (s - 1).bit_length())
    rows = s**5
    nbits = rows * w
    if len(data) != (nbits + 7) // 8:
        raise ValueError(
            f"encoded table must be {(nbits + 7) // 8} bytes, got {len(data)}"
        )
    weights = 1 << np.arange(w - 1, -1, -1, dtype=np.int64)
    dtype = np.uint8 if s <= 0xFF else np.uint16
    outputs = np.empty(rows, dtype=dtype)
    bytes_per_chunk = _ENCODE_CHUNK_ROWS * w // 8
    raw = np.frombuffer(data, dtype=np.uint8)
    for ci, start in enumerate(range(0, rows, _ENCODE_CHUNK_ROWS)):
        count = min(_ENCODE_CHUNK_ROWS, rows - start)
        nb = (count * w + 7) // 8
        bits = np.unpackbits(raw[ci * bytes_per_chunk : ci * bytes_per_chunk + nb])
        if bits[count * w :].any():
            raise ValueError("nonzero padding bits after the table payload")
        vals = bits[: count * w].reshape(count, w).astype(np.int64) @ weights
        if vals.max(initial=0) >= s:
            raise ValueError("encoded index out of state-set range")
        outputs[start : start + count] = vals.astype(dtype)
    return CaTable(states, outputs)


def write_catable(table: CaTable, path: str) -> None:
    """Write header 'catable n m s w' plus the packed payload."""
    header = (
        f"catable {table.states.n} {table.states.m} {table.size} "
        f"{table.index_bits}\n"
    )
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(encode_ca(table))


def read_catable(path: str) -> CaTable:
    """Read a write_catable file back; strict about header and length."""
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii", errors="replace").split()
        if len(header) != 5 or header[0] != "catable":
            raise ValueError("expected header 'catable n m s w'")
        n, m, s, w = (int(f) for f in header[1:])
        table = decode_ca(fh.read(), n, m)
    if table.size != s or table.index_bits != w:
        raise ValueError("header size/width disagree with (n, m)")
    return table


__all__ = [
    "CaTable",
    "decode_ca",
    "encode_ca",
    "materialize_table",
    "read_catable",
    "step_with_table",
    "write_catable",
]
