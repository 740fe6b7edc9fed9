"""Explicit transition tables: materialization, packing, table-driven step."""

import hashlib
import random

import pytest

from cnf2ca.analysis import BudgetExceeded, random_configuration
from cnf2ca.automaton import enumerate_states, relabel, step, window_at
from cnf2ca.catable import (
    decode_ca,
    encode_ca,
    materialize_table,
    read_catable,
    step_with_table,
    write_catable,
)
from cnf2ca.formula import from_clauses
from cnf2ca.tableau import build_table

X1 = from_clauses([[1]])

# the smallest automaton is the only one whose 39^5-row table fits a test run
BLOB_SHA256 = "7e9a2cc9ae3372b53219404292825dedf6942dde43797e8f7eda50c375edc09b"


@pytest.fixture(scope="module")
def table():
    return materialize_table(X1)


@pytest.fixture(scope="module")
def blob(table):
    return encode_ca(table)


def test_row_count_and_width(table):
    assert table.size == 39
    assert table.rows == 39**5 == 90224199
    assert table.index_bits == 6
    assert table.bit_length == 39**5 * 6 == 541345194


def test_budget_gate():
    with pytest.raises(BudgetExceeded):
        materialize_table(X1, budget_rows=10**6)


def test_quiescent_centre_row(table):
    q = table.states.q_index
    w = (table.states.states[q],) * 5
    assert table.row_index(w) == table.rows - 1
    assert table.lookup(w) == table.states.states[q]


def test_lookup_agrees_with_step(table):
    rng = random.Random(51)
    for a in ((0,), (1,)):
        base = build_table(X1, a)
        for _ in range(10):
            C = relabel(base, rng.getrandbits(6))
            D = step(X1, C)
            for pos in C.positions():
                assert table.lookup(window_at(C, pos)) == D.grid[pos[0]][pos[1]]


def test_step_with_table_equals_step(table):
    rng = random.Random(52)
    states = enumerate_states(1, 1)
    for _ in range(25):
        C = random_configuration(states, rng)
        assert step_with_table(table, C) == step(X1, C)
    other = build_table(from_clauses([[1], [1], [1]]), (1,))
    with pytest.raises(ValueError):
        step_with_table(table, other)


def test_encode_length_and_digest(blob):
    assert len(blob) == (39**5 * 6 + 7) // 8 == 67668150
    assert hashlib.sha256(blob).hexdigest() == BLOB_SHA256


def test_decode_round_trip(table, blob):
    back = decode_ca(blob, 1, 1)
    assert (back.outputs == table.outputs).all()
    assert back.states.digest() == table.states.digest()


def test_decode_rejects_malformed(blob):
    with pytest.raises(ValueError):
        decode_ca(blob[:-1], 1, 1)
    tampered = bytearray(blob)
    tampered[-1] |= 0b11  # trailing padding must stay zero
    with pytest.raises(ValueError):
        decode_ca(bytes(tampered), 1, 1)
    tampered = bytearray(blob)
    tampered[0] = 0xFF  # first index becomes 63 >= 39
    with pytest.raises(ValueError):
        decode_ca(bytes(tampered), 1, 1)


def test_write_read_round_trip(table, tmp_path):
    path = tmp_path / "x1.catable"
    write_catable(table, str(path))
    with open(path, "rb") as fh:
        assert fh.readline() == b"catable 1 1 39 6\n"
    back = read_catable(str(path))
    assert (back.outputs == table.outputs).all()

    bad = tmp_path / "bad.catable"
    bad.write_bytes(b"catble 1 1 39 6\n")
    with pytest.raises(ValueError):
        read_catable(str(bad))
