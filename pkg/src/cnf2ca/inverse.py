"""Inverse automata for A_phi, the bounded invertibility predicate, and
refutation objects with their verifier.

An inverse automaton B sees, through a window of offsets M, the image
configuration around a cell and must return the cell's pre-image state.
The synthesized inverse uses the full window spanning every position the
rectangle can occupy relative to a cell; its transition g reconstructs the
image configuration from the window, recovers pre-image labels backward
along successor chains (red cells keep their labels, blue ones satisfy
label = image-label XOR label(successor)), and returns the centre cell's
recovered state.  A refutation packages such an automaton with a declared
encoding size t; verification checks the size gate |S|^(10*mu) < t and the
per-cell inversion condition, probing computation tables deterministically
before random sampling.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Optional

from .analysis import (
    BudgetExceeded,
    decompose,
    random_configuration,
)
from .automaton import (
    CellState,
    Configuration,
    QUIESCENT,
    StateSet,
    enumerate_states,
    is_quiescent,
    relabel,
    step,
)
from .formula import (
    CnfFormula,
    enumerate_assignments,
    gen_onto_php,
    normalize_odd,
    parse_dimacs,
    satisfying_assignments,
)
from .tableau import build_table
from .translate import pairing

STRUCTURAL = "structural"
TABLE = "table"


class SatisfiableFormulaError(Exception):
    """The formula admits a satisfying assignment, so A_phi has no inverse.

    Carries the assignment, the witness table configuration, and the
    all-covering successor cycle of that table.
    """

    def __init__(self, assignment, witness, cycle):
        self.assignment = assignment
        self.witness = witness
        self.cycle = cycle
        super().__init__(
            f"formula is satisfied by {assignment}; "
            f"its table closes a successor cycle of length {len(cycle)}"
        )


def full_window_offsets(n: int, m: int) -> tuple[tuple[int, int], ...]:
    """Offsets covering every position of the rectangle relative to a cell:
    rows -n..n, columns -(m+1)..m+1, row-major."""
    return tuple(
        (dr, dc) for dr in range(-n, n + 1) for dc in range(-(m + 1), m + 2)
    )


@dataclass
class InverseAutomaton:
    """A candidate inverse: state set, window offsets, transition g.

    g is total on window tuples; `overrides` is a sparse overlay mapping
    row numbers (the mixed-radix index of a window tuple under the
    canonical state enumeration) to replacement output state indices, which
    is how single table rows are edited without materializing the table.
    """

    states: StateSet
    offsets: tuple[tuple[int, int], ...]
    g: Callable[[tuple[CellState, ...]], CellState]
    kind: str = STRUCTURAL
    overrides: dict[int, int] = field(default_factory=dict)
    formula: Optional[CnfFormula] = None  # the formula g was built for

    @property
    def mu(self) -> int:
        return len(self.offsets)

    @property
    def centre_slot(self) -> int:
        return self.offsets.index((0, 0))

    def row_index(self, window: tuple[CellState, ...]) -> int:
        """Lexicographic row number of a window tuple."""
        idx = self.states.index
        row = 0
        for s in window:
            row = row * self.states.size + idx[s]
        return row

    def effective_g(self, window: tuple[CellState, ...]) -> CellState:
        """g with the override overlay applied."""
        if self.overrides:
            row = self.row_index(window)
            if row in self.overrides:
                return self.states.states[self.overrides[row]]
        return self.g(window)

    def window_at(
        self, C: Configuration, pos: tuple[int, int]
    ) -> tuple[CellState, ...]:
        """The window tuple B reads at pos in configuration C."""
        r, c = pos
        return tuple(C.state_at((r + dr, c + dc)) for dr, dc in self.offsets)


@lru_cache(maxsize=65536)
def invert_configuration(phi: CnfFormula, D: Configuration) -> Configuration:
    """The pre-image of D under A_phi within D's similarity class.

    Red cells keep their labels; along each pointed chain the pre-image
    labels are recovered backward from the red sink via
    label(c) = image-label(c) XOR label(successor(c)).  Cells on a cycle
    (which exists only when the class is non-injective) keep their labels,
    making the map total but the identity there.
    """
    dec = decompose(phi, D)
    labels: dict[tuple[int, int], int] = {}
    for chain in dec.chains:
        lab = D.state_at(chain[-1]).label
        labels[chain[-1]] = lab
        for pos in reversed(chain[:-1]):
            lab = D.state_at(pos).label ^ lab
            labels[pos] = lab
    for pos in dec.cycle or ():
        labels[pos] = D.state_at(pos).label
    for pos in dec.isolated:
        labels[pos] = D.state_at(pos).label
    rows = tuple(
        tuple(
            D.grid[r][c]._replace(label=labels[(r, c)]) for c in range(D.m + 2)
        )
        for r in range(D.n + 1)
    )
    return Configuration(D.n, D.m, rows)


def structural_automaton(phi: CnfFormula) -> InverseAutomaton:
    """The full-window structural automaton for A_phi (normalized inside).

    No injectivity check is made: on classes with a successor cycle the
    label recovery degenerates to the identity.  Use structural_inverse for
    the checked constructor.
    """
    phi_n = normalize_odd(phi)
    n, m = phi_n.n, phi_n.m
    states = enumerate_states(n, m)
    offsets = full_window_offsets(n, m)
    centre_slot = offsets.index((0, 0))
    cells = (n + 1) * (m + 2)

    def g(window: tuple[CellState, ...]) -> CellState:
        centre = window[centre_slot]
        if is_quiescent(centre):
            return QUIESCENT
        nonq = [
            (offsets[k], s) for k, s in enumerate(window) if not is_quiescent(s)
        ]
        if len(nonq) != cells:
            return centre
        minr = min(o[0] for o, _ in nonq)
        minc = min(o[1] for o, _ in nonq)
        maxr = max(o[0] for o, _ in nonq)
        maxc = max(o[1] for o, _ in nonq)
        if (maxr - minr, maxc - minc) != (n, m + 1):
            return centre
        grid: dict[tuple[int, int], CellState] = {
            (o[0] - minr, o[1] - minc): s for o, s in nonq
        }
        try:
            D = Configuration(
                n,
                m,
                tuple(
                    tuple(grid[(r, c)] for c in range(m + 2))
                    for r in range(n + 1)
                ),
            )
        except ValueError:
            return centre
        return invert_configuration(phi_n, D).grid[-minr][-minc]

    return InverseAutomaton(
        states, offsets, g, kind=STRUCTURAL, formula=phi_n
    )


def structural_inverse(phi: CnfFormula) -> InverseAutomaton:
    """Synthesize the inverse of A_phi; phi must be unsatisfiable.

    On a satisfiable phi this raises SatisfiableFormulaError carrying the
    satisfying assignment, its table, and the table's successor cycle (the
    non-injectivity obstruction).
    """
    phi_n = normalize_odd(phi)
    a = next(satisfying_assignments(phi_n), None)
    if a is not None:
        witness = build_table(phi_n, a)
        dec = decompose(phi_n, witness)
        assert dec.cycle is not None, "satisfying table must close a cycle"
        raise SatisfiableFormulaError(a, witness, dec.cycle)
    return structural_automaton(phi_n)


def apply_inverse(B: InverseAutomaton, C: Configuration) -> Configuration:
    """One synchronous application of B to C."""
    n, m = B.states.n, B.states.m
    if (C.n, C.m) != (n, m):
        raise ValueError(f"configuration is {C.n}x{C.m}, B expects {n}x{m}")
    rows = tuple(
        tuple(B.effective_g(B.window_at(C, (r, c))) for c in range(m + 2))
        for r in range(n + 1)
    )
    return Configuration(n, m, rows)


# --------------------------------------------------------------- checking ---


@dataclass(frozen=True)
class Counterexample:
    """A violated inversion instance: at `cell` of `config`, B applied to
    the window of the step image returned `got` instead of `expected`."""

    config: Configuration
    cell: tuple[int, int]
    window: tuple[CellState, ...]
    expected: CellState
    got: CellState


def _find_counterexample(
    phi: CnfFormula, B: InverseAutomaton, C: Configuration
) -> Optional[Counterexample]:
    """First cell of C where B fails to invert the step image, if any."""
    image = step(phi, C)
    for pos in C.positions():
        window = B.window_at(image, pos)
        expected = C.state_at(pos)
        got = B.effective_g(window)
        if got != expected:
            return Counterexample(C, pos, window, expected, got)
    return None


def structured_probe_configs(
    phi: CnfFormula, seed: int = 0, random_variants: int = 1
):
    """Deterministic probe corpus: every computation table with all-0,
    all-1, and seeded-random label vectors, in assignment order.

    Verifiers always run these before random sampling, so any corruption
    on a table-reachable row is caught deterministically.
    """
    rng = random.Random(seed)
    cells = (phi.n + 1) * (phi.m + 2)
    for a in enumerate_assignments(phi.m):
        table = build_table(phi, a)
        yield table
        yield relabel(table, (1 << cells) - 1)
        for _ in range(random_variants):
            yield relabel(table, rng.getrandbits(cells))


@dataclass(frozen=True)
class GlobalCheckResult:
    ok: bool
    mode: str
    configs_checked: int
    space_size: int  # size of the checked space (exhaustive) or 0
    counterexample: Optional[Counterexample]
    seed: Optional[int] = None


def check_inverse_global(
    phi: CnfFormula,
    B: InverseAutomaton,
    mode: str = "sampled",
    samples: int = 10000,
    seed: int = 0,
    budget: int = 2**24,
    state_pool: Optional[list[CellState]] = None,
) -> GlobalCheckResult:
    """Check B(step(C)) = C, exhaustively or on a sampled corpus.

    Exhaustive mode enumerates every configuration whose cells come from
    state_pool (default: all non-quiescent states) within the budget; the
    default pool is astronomically over budget for every instance, so
    exhaustive runs are for restricted pools.  Sampled mode runs the
    deterministic table probes first, then uniform random configurations;
    a pass is probabilistic evidence, any counterexample is definitive.
    """
    phi = normalize_odd(phi)
    n, m = B.states.n, B.states.m
    if (phi.n, phi.m) != (n, m):
        raise ValueError("formula dimensions disagree with B's state set")
    cells = (n + 1) * (m + 2)
    if mode == "exhaustive":
        pool = state_pool if state_pool is not None else [
            s for s in B.states.states if not is_quiescent(s)
        ]
        space = len(pool) ** cells
        if space > budget:
            raise BudgetExceeded(
                f"{len(pool)}^{cells} configurations exceed the budget {budget}"
            )
        checked = 0
        for combo in itertools.product(pool, repeat=cells):
            rows = tuple(
                tuple(combo[r * (m + 2) + c] for c in range(m + 2))
                for r in range(n + 1)
            )
            C = Configuration(n, m, rows)
            checked += 1
            cex = _find_counterexample(phi, B, C)
            if cex is not None:
                return GlobalCheckResult(False, mode, checked, space, cex)
        return GlobalCheckResult(True, mode, checked, space, None)
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    checked = 0
    for C in structured_probe_configs(phi, seed=seed):
        checked += 1
        cex = _find_counterexample(phi, B, C)
        if cex is not None:
            return GlobalCheckResult(False, mode, checked, 0, cex, seed)
    while checked < samples:
        C = random_configuration(B.states, rng)
        checked += 1
        cex = _find_counterexample(phi, B, C)
        if cex is not None:
            return GlobalCheckResult(False, mode, checked, 0, cex, seed)
    return GlobalCheckResult(True, mode, checked, 0, None, seed)


@dataclass(frozen=True)
class LocalCheckResult:
    ok: bool
    reason: str  # "ok" | "size-gate" | "counterexample"
    size: int
    mu: int
    t: int
    mode: str  # "exhaustive" | "sampled"
    configs_checked: int
    tuples_checked: int
    counterexample: Optional[Counterexample]
    seed: Optional[int] = None


def check_inv_local(
    phi: CnfFormula,
    B: InverseAutomaton,
    t: int,
    budget: Optional[int] = None,
    samples: int = 10000,
    seed: int = 0,
    state_pool: Optional[list[CellState]] = None,
) -> LocalCheckResult:
    """The bounded invertibility predicate: the size gate |S|^(10*mu) < t,
    then per-cell inversion over assignments of states to the cells the
    window can see.

    With the full-region window the visible cells of every position are the
    whole rectangle, so each per-cell instance quantifies over exactly the
    bounded configurations and the condition coincides with the global
    check; the two share their evaluator.  Exhaustive when the restricted
    space fits the budget; otherwise deterministic table probes plus random
    sampling until `samples` cell instances are evaluated.
    """
    phi = normalize_odd(phi)
    n, m = B.states.n, B.states.m
    if (phi.n, phi.m) != (n, m):
        raise ValueError("formula dimensions disagree with B's state set")
    size, mu = B.states.size, B.mu
    cells = (n + 1) * (m + 2)
    if not size ** (10 * mu) < t:
        return LocalCheckResult(
            False, "size-gate", size, mu, t, "none", 0, 0, None, seed
        )
    pool = state_pool if state_pool is not None else [
        s for s in B.states.states if not is_quiescent(s)
    ]
    space = len(pool) ** cells
    if budget is not None and space <= budget:
        checked = tuples = 0
        for combo in itertools.product(pool, repeat=cells):
            rows = tuple(
                tuple(combo[r * (m + 2) + c] for c in range(m + 2))
                for r in range(n + 1)
            )
            C = Configuration(n, m, rows)
            checked += 1
            tuples += cells
            cex = _find_counterexample(phi, B, C)
            if cex is not None:
                return LocalCheckResult(
                    False, "counterexample", size, mu, t,
                    "exhaustive", checked, tuples, cex, seed,
                )
        return LocalCheckResult(
            True, "ok", size, mu, t, "exhaustive", checked, tuples, None, seed
        )
    rng = random.Random(seed)
    checked = tuples = 0
    for C in structured_probe_configs(phi, seed=seed):
        checked += 1
        tuples += cells
        cex = _find_counterexample(phi, B, C)
        if cex is not None:
            return LocalCheckResult(
                False, "counterexample", size, mu, t,
                "sampled", checked, tuples, cex, seed,
            )
    while tuples < samples:
        C = random_configuration(B.states, rng)
        checked += 1
        tuples += cells
        cex = _find_counterexample(phi, B, C)
        if cex is not None:
            return LocalCheckResult(
                False, "counterexample", size, mu, t,
                "sampled", checked, tuples, cex, seed,
            )
    return LocalCheckResult(
        True, "ok", size, mu, t, "sampled", checked, tuples, None, seed
    )


def mutate_table_row(
    B: InverseAutomaton, row: int, state_index: int
) -> InverseAutomaton:
    """Copy of B with one table row overridden to a new output state."""
    if not 0 <= row < B.states.size**B.mu:
        raise ValueError(f"row {row} outside the table")
    if not 0 <= state_index < B.states.size:
        raise ValueError(f"state index {state_index} outside the state set")
    overrides = dict(B.overrides)
    overrides[row] = state_index
    return replace(B, overrides=overrides)


# ------------------------------------------------------------- refutations ---


@dataclass
class Refutation:
    """A proof object: an inverse automaton for A_phi plus the declared
    encoded size t (the zero padding up to t is implicit in t itself)."""

    B: InverseAutomaton
    t: int
    phi: CnfFormula


def default_t(states: StateSet, mu: int) -> int:
    """The smallest t passing the size gate: |S|^(10*mu) + 1."""
    return states.size ** (10 * mu) + 1


def make_refutation(phi: CnfFormula, t: Optional[int] = None) -> Refutation:
    """Synthesize a refutation of an unsatisfiable phi."""
    B = structural_inverse(phi)
    if t is None:
        t = default_t(B.states, B.mu)
    return Refutation(B, t, phi)


def corrupt_refutation(ref: Refutation) -> tuple[Refutation, int]:
    """Copy of ref with one deterministically reachable table row flipped.

    The row is the window the verifier's very first probe evaluates at cell
    (0, 0); its output label is flipped, so verification fails there with a
    concrete counterexample tuple.  Returns (corrupted, row).
    """
    phi_n = normalize_odd(ref.phi)
    first = next(structured_probe_configs(phi_n))
    image = step(phi_n, first)
    window = ref.B.window_at(image, (0, 0))
    row = ref.B.row_index(window)
    correct = ref.B.effective_g(window)
    flipped = correct._replace(label=1 - correct.label)
    mutated = mutate_table_row(ref.B, row, ref.B.states.index[flipped])
    return Refutation(mutated, ref.t, ref.phi), row


@dataclass(frozen=True)
class RefutationVerdict:
    accepted: bool
    reason: str  # "ok" | "state-set" | "size-gate" | "counterexample"
    local: Optional[LocalCheckResult] = None

    @property
    def counterexample(self) -> Optional[Counterexample]:
        return self.local.counterexample if self.local else None


def verify_refutation(
    ref: Refutation, samples: int = 10000, seed: int = 0
) -> RefutationVerdict:
    """Accept iff ref.B verifiably inverts A_phi within the declared size.

    Checks, in order: the state set equals the canonical enumeration for
    the normalized formula; the size gate; the local inversion condition
    (table probes + sampling).  Acceptance certifies unsatisfiability of
    phi up to the sampling confidence of the local check.
    """
    phi_n = normalize_odd(ref.phi)
    try:
        expected = enumerate_states(phi_n.n, phi_n.m)
    except ValueError:
        return RefutationVerdict(False, "state-set")
    if ref.B.states.states != expected.states:
        return RefutationVerdict(False, "state-set")
    local = check_inv_local(phi_n, ref.B, ref.t, samples=samples, seed=seed)
    if not local.ok:
        reason = "size-gate" if local.reason == "size-gate" else "counterexample"
        return RefutationVerdict(False, reason, local)
    return RefutationVerdict(True, "ok", local)


# ---------------------------------------------------------------- file I/O ---


class RefutationFormatError(ValueError):
    """Raised for unparseable or truncated refutation files."""


def write_refutation(ref: Refutation, path: str) -> None:
    """Serialize a refutation; byte-exact round trip with read_refutation.

    The encoding stores the window, the declared t, the state-set digest,
    the formula, and the transition: either `structural` (recomputed from
    the formula on read) or an explicit table payload, plus row overrides.
    The zero padding up to t bits is declared, never materialized.
    """
    B = ref.B
    lines = [
        "pcaref 1",
        f"dims {B.states.n} {B.states.m}",
        f"t {ref.t}",
        f"mu {B.mu}",
        "offsets " + " ".join(f"{dr}:{dc}" for dr, dc in B.offsets),
        f"states {B.states.size} {B.states.digest()}",
        f"formula {ref.phi.n} {ref.phi.m}",
    ]
    for clause in ref.phi.clauses():
        lines.append(" ".join(str(l) for l in clause) + " 0")
    if B.kind == STRUCTURAL:
        lines.append("g structural")
    else:
        payload = encode_g_table(B)
        lines.append(f"g table {B.states.size ** B.mu} {_index_bits(B.states.size)}")
        lines.append(payload.hex())
    lines.append(f"overrides {len(B.overrides)}")
    for row in sorted(B.overrides):
        lines.append(f"{row} {B.overrides[row]}")
    lines.append("end")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_refutation(path: str) -> Refutation:
    """Parse a write_refutation file; strict about structure and digests."""
    with open(path, encoding="ascii") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    cursor = _Cursor(lines)
    if cursor.take() != "pcaref 1":
        raise RefutationFormatError("not a refutation file (bad magic)")
    n, m = _expect_ints(cursor.take(), "dims", 2)
    (t,) = _expect_ints(cursor.take(), "t", 1)
    (mu,) = _expect_ints(cursor.take(), "mu", 1)
    offs_line = cursor.take()
    if not offs_line.startswith("offsets "):
        raise RefutationFormatError("expected offsets line")
    try:
        offsets = tuple(
            (int(p.split(":")[0]), int(p.split(":")[1]))
            for p in offs_line.split()[1:]
        )
    except (ValueError, IndexError):
        raise RefutationFormatError("malformed offsets line") from None
    if len(offsets) != mu or (0, 0) not in offsets:
        raise RefutationFormatError("offsets disagree with mu or omit (0,0)")
    st_fields = cursor.take().split()
    if len(st_fields) != 3 or st_fields[0] != "states":
        raise RefutationFormatError("expected states line")
    try:
        states = enumerate_states(n, m)
    except ValueError as exc:
        raise RefutationFormatError(str(exc)) from None
    if int(st_fields[1]) != states.size or st_fields[2] != states.digest():
        raise RefutationFormatError("state-set count/digest mismatch")
    n_orig, m_orig = _expect_ints(cursor.take(), "formula", 2)
    clause_lines = [cursor.take() for _ in range(n_orig)]
    try:
        phi = parse_dimacs(
            f"p cnf {m_orig} {n_orig}\n" + "\n".join(clause_lines) + "\n"
        )
    except ValueError as exc:
        raise RefutationFormatError(f"bad formula section: {exc}") from None
    if (normalize_odd(phi).n, phi.m) != (n, m):
        raise RefutationFormatError("formula dimensions disagree with header")
    g_fields = cursor.take().split()
    if g_fields[:1] != ["g"]:
        raise RefutationFormatError("expected g line")
    if g_fields[1:] == ["structural"]:
        B = structural_automaton(phi)
        if B.offsets != offsets:
            raise RefutationFormatError("offsets disagree with the structural window")
    elif len(g_fields) == 4 and g_fields[1] == "table":
        rows, width = int(g_fields[2]), int(g_fields[3])
        if rows != states.size**mu or width != _index_bits(states.size):
            raise RefutationFormatError("table geometry disagrees with header")
        try:
            payload = bytes.fromhex(cursor.take())
        except ValueError:
            raise RefutationFormatError("bad table payload hex") from None
        B = table_automaton(states, offsets, payload)
    else:
        raise RefutationFormatError(f"unknown g kind {g_fields[1:]}")
    (n_over,) = _expect_ints(cursor.take(), "overrides", 1)
    for _ in range(n_over):
        fields = cursor.take().split()
        if len(fields) != 2:
            raise RefutationFormatError("malformed override line")
        try:
            row, sidx = int(fields[0]), int(fields[1])
        except ValueError:
            raise RefutationFormatError("malformed override line") from None
        B = mutate_table_row(B, row, sidx)
    if cursor.take() != "end":
        raise RefutationFormatError("missing end marker (truncated file?)")
    return Refutation(B, t, phi)


class _Cursor:
    def __init__(self, lines):
        self.lines = lines
        self.at = 0

    def take(self) -> str:
        if self.at >= len(self.lines):
            raise RefutationFormatError("unexpected end of file (truncated)")
        line = self.lines[self.at]
        self.at += 1
        return line


def _expect_ints(line: str, key: str, count: int) -> tuple[int, ...]:
    fields = line.split()
    if len(fields) != count + 1 or fields[0] != key:
        raise RefutationFormatError(f"expected '{key}' line, got {line!r}")
    try:
        return tuple(int(f) for f in fields[1:])
    except ValueError:
        raise RefutationFormatError(f"expected '{key}' integers") from None


def _index_bits(size: int) -> int:
    return max(1, (size - 1).bit_length())


def encode_g_table(B: InverseAutomaton, budget_rows: int = 2**20) -> bytes:
    """Materialize g as packed bits: one index of width ceil(log2 |S|) per
    window tuple, rows in lexicographic order.  Toy windows only."""
    size, mu = B.states.size, B.mu
    rows = size**mu
    if rows > budget_rows:
        raise BudgetExceeded(f"{size}^{mu} rows exceed the {budget_rows}-row budget")
    w = _index_bits(size)
    index = B.states.index
    bits = []
    for combo in itertools.product(B.states.states, repeat=mu):
        out = index[B.g(combo)]
        bits.extend((out >> k) & 1 for k in range(w - 1, -1, -1))
    payload = bytearray()
    for at in range(0, len(bits), 8):
        byte = 0
        for b in bits[at : at + 8]:
            byte = (byte << 1) | b
        byte <<= max(0, 8 - len(bits[at : at + 8]))
        payload.append(byte)
    return bytes(payload)


def table_automaton(
    states: StateSet, offsets: tuple[tuple[int, int], ...], payload: bytes
) -> InverseAutomaton:
    """Inverse automaton backed by an explicit encoded table."""
    size, mu = states.size, len(offsets)
    rows = size**mu
    w = _index_bits(size)
    nbits = rows * w
    if len(payload) != (nbits + 7) // 8:
        raise RefutationFormatError(
            f"table payload must be {(nbits + 7) // 8} bytes, got {len(payload)}"
        )
    index = states.index

    def g(window: tuple[CellState, ...]) -> CellState:
        row = 0
        for s in window:
            row = row * size + index[s]
        at = row * w
        out = 0
        for k in range(w):
            bit = (payload[(at + k) // 8] >> (7 - (at + k) % 8)) & 1
            out = (out << 1) | bit
        if out >= size:
            raise ValueError(f"table row {row} holds index {out} >= |S|")
        return states.states[out]

    return InverseAutomaton(states, offsets, g, kind=TABLE)


# ---------------------------------------------------------- sequence coding ---


def sequence_code(
    indices: list[int], width: int, limit: Optional[int] = None
) -> int:
    """Code a tuple of width-bit numbers into one number: bit pairing(i, j)
    of the code is bit i of indices[j].

    limit bounds the highest usable bit position (default 10 * len * width,
    the declared-size budget); exceeding it raises OverflowError.
    """
    if width < 1:
        raise ValueError("width must be >= 1")
    if limit is None:
        limit = 10 * len(indices) * width
    code = 0
    for j, idx in enumerate(indices):
        if not 0 <= idx < (1 << width):
            raise ValueError(f"index {idx} does not fit in {width} bits")
        for i in range(width):
            if (idx >> i) & 1:
                pos = pairing(i, j)
                if pos >= limit:
                    raise OverflowError(
                        f"bit position {pos} exceeds the {limit}-bit budget"
                    )
                code |= 1 << pos
    return code


def sequence_decode(code: int, count: int, width: int) -> list[int]:
    """Inverse of sequence_code; rejects stray bits outside the i,j grid."""
    if code < 0:
        raise ValueError("codes are naturals")
    valid = set()
    out = []
    for j in range(count):
        idx = 0
        for i in range(width):
            pos = pairing(i, j)
            valid.add(pos)
            idx |= ((code >> pos) & 1) << i
        out.append(idx)
    for pos in range(code.bit_length()):
        if (code >> pos) & 1 and pos not in valid:
            raise ValueError(f"stray bit at position {pos}")
    return out


# ------------------------------------------------------------- size report ---


@dataclass(frozen=True)
class SizeRow:
    k: int
    n_raw: int
    n: int
    m: int
    size: int
    mu: int
    cells: int
    table_bits_expr: str
    table_bits_log10: float
    gate_expr: str
    gate_log10: float


def size_report(k_max: int) -> list[SizeRow]:
    """Construction sizes for the onto pigeonhole family, k = 1..k_max.

    Table bit counts and the size gate are reported as expressions and
    log10 magnitudes; materializing them is impossible by design.
    """
    rows = []
    for k in range(1, k_max + 1):
        phi = gen_onto_php(k)
        phi_n = normalize_odd(phi)
        n, m = phi_n.n, phi_n.m
        size = 24 * n * m + 6 * n + 4 * m + 5
        mu = (2 * n + 1) * (2 * m + 3)
        w = _index_bits(size)
        log_size = math.log10(size)
        rows.append(
            SizeRow(
                k=k,
                n_raw=phi.n,
                n=n,
                m=m,
                size=size,
                mu=mu,
                cells=(n + 1) * (m + 2),
                table_bits_expr=f"{size}^{mu}*{w}",
                table_bits_log10=mu * log_size + math.log10(w),
                gate_expr=f"{size}^{10 * mu}",
                gate_log10=10 * mu * log_size,
            )
        )
    return rows


__all__ = [
    "Counterexample",
    "GlobalCheckResult",
    "InverseAutomaton",
    "LocalCheckResult",
    "Refutation",
    "RefutationFormatError",
    "RefutationVerdict",
    "SatisfiableFormulaError",
    "SizeRow",
    "apply_inverse",
    "check_inv_local",
    "check_inverse_global",
    "corrupt_refutation",
    "default_t",
    "encode_g_table",
    "full_window_offsets",
    "invert_configuration",
    "make_refutation",
    "mutate_table_row",
    "read_refutation",
    "sequence_code",
    "sequence_decode",
    "size_report",
    "structural_automaton",
    "structural_inverse",
    "structured_probe_configs",
    "table_automaton",
    "verify_refutation",
    "write_refutation",
]
