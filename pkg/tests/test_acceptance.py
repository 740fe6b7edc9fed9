"""Acceptance gate: ten end-to-end criteria with pinned budgets.

Each test asserts the substantive property first and its wall-clock budget
last, so a functional regression is reported as such rather than as a
timeout.  All randomness is seeded; every expected value is frozen.
"""

import random
import time

import pytest

from cnf2ca.analysis import (
    class_injective,
    class_injective_bruteforce,
    collision_search,
    decide_injectivity,
    random_configuration,
    random_skeleton_configuration,
)
from cnf2ca.automaton import enumerate_states, step
from cnf2ca.catable import decode_ca, encode_ca, materialize_table
from cnf2ca.formula import (
    enumerate_assignments,
    from_clauses,
    gen_onto_php,
    gen_weak_php,
    is_unsatisfiable,
    normalize_odd,
)
from cnf2ca.inverse import (
    SatisfiableFormulaError,
    apply_inverse,
    check_inv_local,
    corrupt_refutation,
    default_t,
    make_refutation,
    sequence_code,
    sequence_decode,
    structural_inverse,
    verify_refutation,
)
from cnf2ca.tableau import build_table, witness_pair
from cnf2ca.translate import (
    Exists,
    PropAnd,
    PropNot,
    PropOr,
    PropVar,
    Rel,
    Var,
    depth,
    pw_translate,
    size,
    size_depth_scan,
)

# (x1) & (x2 | ~x3) & (~x1 | ~x3) & (x1 | x2) -- the worked example table
TABLE1 = from_clauses([[1], [2, -3], [-1, -3], [1, 2]])
X1 = from_clauses([[1]])
MICRO_UNSAT = from_clauses([[1], [-1], [1]])


def test_criterion_01_table_reproduction():
    start = time.monotonic()
    a = (0, 1, 1)
    C = build_table(TABLE1, a)
    flags = tuple(
        tuple(C.grid[i][j].flag for j in (1, 2, 3)) for i in range(1, 5)
    )
    assert flags == ((1, 0, 0), (0, 1, -1), (-1, 0, -1), (1, 1, 0))
    pd = tuple(tuple(C.grid[i][j].pd for j in (1, 2, 3)) for i in range(1, 5))
    assert pd == ((0, 0, 0), (0, 1, 1), (1, 1, 1), (0, 1, 1))
    # The per-row clause values are (0, 1, 1, 1), and a well-known rendering
    # of this example prints exactly those numbers in its "and" column.  The
    # column is defined cumulatively -- pc_i = (clause_1 and ... and
    # clause_i) -- and rule (C2) enforces the cumulative reading on every
    # blue configuration, so once clause 1 fails under a = (0,1,1) the whole
    # column is pinned to zero.  Both readings are asserted here to document
    # the difference.
    clause_values = tuple(TABLE1.clause_value(i, a) for i in range(1, 5))
    assert clause_values == (0, 1, 1, 1)
    pc = tuple(C.grid[i][4].pc for i in range(1, 5))
    assert pc == (0, 0, 0, 0)
    assert time.monotonic() - start < 1.0


def test_criterion_02_tables_are_fixed_points():
    from tests.test_formula import random_formula

    start = time.monotonic()
    rng = random.Random(20260818)
    for _ in range(100):
        phi = normalize_odd(random_formula(rng, 7, 7))
        assert phi.n <= 7 and phi.m <= 7
        a = tuple(rng.getrandbits(1) for _ in range(phi.m))
        table = build_table(phi, a)
        assert step(phi, table) == table
    assert time.monotonic() - start < 10.0


def test_criterion_03_witness_round_trip():
    start = time.monotonic()
    phi = normalize_odd(TABLE1)
    a = (1, 1, 0)
    C1, C2 = witness_pair(phi, a)
    assert C1 != C2
    table = build_table(phi, a)
    assert step(phi, C1) == step(phi, C2) == table
    assert time.monotonic() - start < 1.0


def test_criterion_04_red_cell_theorem_vs_bruteforce():
    start = time.monotonic()
    rng = random.Random(11)
    states = enumerate_states(1, 1)
    agreements = 0
    for _ in range(10_000):
        C = random_skeleton_configuration(states, rng)
        assert class_injective(X1, C) == class_injective_bruteforce(X1, C)
        agreements += 1
    for a in ((0,), (1,)):
        C = build_table(X1, a)
        assert class_injective(X1, C) == class_injective_bruteforce(X1, C)
        agreements += 1
    assert agreements == 10_002  # 100% agreement, no skips
    assert time.monotonic() - start < 60.0


def test_criterion_05_injectivity_decision():
    for phi, injective in (
        (gen_onto_php(1), True),
        (gen_weak_php(1), True),
        (X1, False),
        (TABLE1, False),
    ):
        start = time.monotonic()
        res = decide_injectivity(phi)
        assert res.injective == injective
        if not injective:
            C1, C2 = res.witness
            assert C1 != C2
            assert step(res.formula, C1) == step(res.formula, C2)
        assert time.monotonic() - start < 1.0

    start = time.monotonic()
    assert collision_search(gen_onto_php(1), trials=100_000, seed=0) is None
    assert time.monotonic() - start < 60.0


def test_criterion_06_inverse_round_trip():
    start = time.monotonic()
    B = structural_inverse(MICRO_UNSAT)
    rng = random.Random(31)
    for _ in range(10_000):
        C = random_configuration(B.states, rng)
        assert apply_inverse(B, step(MICRO_UNSAT, C)) == C
    res = check_inv_local(
        MICRO_UNSAT, B, default_t(B.states, B.mu), samples=10_000
    )
    assert res.ok and res.reason == "ok"
    assert res.tuples_checked >= 10_000
    assert res.counterexample is None

    with pytest.raises(SatisfiableFormulaError) as exc:
        structural_inverse(X1)
    phi_n = normalize_odd(X1)
    assert len(exc.value.cycle) == (phi_n.n + 1) * (phi_n.m + 2)
    assert time.monotonic() - start < 120.0


def test_criterion_07_refutation_corpus_cross_check():
    start = time.monotonic()
    corpus = [MICRO_UNSAT, gen_onto_php(1), gen_weak_php(1)]
    for phi in corpus:
        # acceptance must coincide with exhaustive unsatisfiability
        assert is_unsatisfiable(phi)
        ref = make_refutation(phi)
        verdict = verify_refutation(ref, samples=2400, seed=0)
        assert verdict.accepted and verdict.reason == "ok"

        bad, row = corrupt_refutation(ref)
        rejected = verify_refutation(bad, samples=2400, seed=0)
        assert not rejected.accepted
        assert rejected.reason == "counterexample"
        cex = rejected.counterexample
        assert cex is not None  # a concrete violated tuple, not a verdict
        assert cex.got != cex.expected
        assert bad.B.row_index(cex.window) == row
    assert time.monotonic() - start < 120.0


def test_criterion_08_encodings_round_trip_and_gate():
    start = time.monotonic()
    table = materialize_table(X1)
    blob = encode_ca(table)
    assert table.bit_length == 39**5 * 6
    assert len(blob) == (39**5 * 6 + 7) // 8
    back = decode_ca(blob, 1, 1)
    assert (back.outputs == table.outputs).all()

    rng = random.Random(47)
    for _ in range(100):
        count = rng.randint(0, 20)
        width = rng.randint(1, 7)
        seq = [rng.randrange(1 << width) for _ in range(count)]
        assert sequence_decode(sequence_code(seq, width, limit=1 << 16),
                               count, width) == seq

    B = structural_inverse(MICRO_UNSAT)
    gate = B.states.size ** (10 * B.mu)
    for t in (gate, gate - 1, 1):
        res = check_inv_local(MICRO_UNSAT, B, t, samples=10)
        assert not res.ok and res.reason == "size-gate"
    assert check_inv_local(MICRO_UNSAT, B, gate + 1, samples=10).ok
    assert time.monotonic() - start < 60.0


def test_criterion_09_paris_wilkie_translation():
    start = time.monotonic()
    f = Exists("y", Var("x"), Rel(Var("x"), Var("y")))
    assert pw_translate(f, {"x": 2}) == PropOr(
        (PropVar.of(2, 0), PropVar.of(2, 1), PropVar.of(2, 2))
    )
    rows = size_depth_scan(f, "x", range(1, 51))
    assert [r["depth"] for r in rows] == [1] * 50  # constant depth
    assert [r["size"] for r in rows] == [x + 2 for x in range(1, 51)]  # linear

    x, y, z = PropVar(0), PropVar(1), PropVar(2)
    assert depth(PropNot(PropNot(x))) == 1
    assert depth(PropOr((PropAnd((x, y)), z))) == 2
    assert size(pw_translate(f, {"x": 2})) == 4
    assert time.monotonic() - start < 1.0


def test_criterion_10_php_generators():
    start = time.monotonic()
    php2 = gen_onto_php(2)
    assert php2.m == 6
    assert php2.n == 14
    for k in (1, 2):
        phi = gen_onto_php(k)
        assert all(
            not phi.is_satisfied(a) for a in enumerate_assignments(phi.m)
        )
    assert time.monotonic() - start < 30.0
