"""State algebra, local rules, colors, directions, and the step map."""

import itertools
import random

import pytest

from cnf2ca.automaton import (
    BLUE,
    RED,
    CellState,
    Configuration,
    ConfigFormatError,
    QUIESCENT,
    cell_classification,
    color,
    direction,
    direction_slot,
    enumerate_states,
    is_quiescent,
    is_similar,
    labels_of,
    local_rule_violation,
    local_violation,
    parse_config,
    relabel,
    state_pattern,
    state_sort_key,
    state_to_text,
    step,
    suc,
    successor_of,
    window_at,
    write_config,
)
from cnf2ca.formula import from_clauses, normalize_odd
from cnf2ca.tableau import build_table

DEMO4X3 = from_clauses([[1], [2, -3], [-1, -3], [1, 2]])
DEMO5X3 = normalize_odd(DEMO4X3)


def random_table(rng, max_n=7, max_m=7):
    from tests.test_formula import random_formula

    phi = normalize_odd(random_formula(rng, max_n, max_m))
    a = tuple(rng.getrandbits(1) for _ in range(phi.m))
    return phi, a, build_table(phi, a)


# ------------------------------------------------------------- state sets ---


def test_state_count_formula():
    assert enumerate_states(1, 1).size == 39
    assert enumerate_states(3, 1).size == 99
    assert enumerate_states(5, 2).size == 283
    assert enumerate_states(5, 3).size == 407
    for n, m in ((1, 1), (3, 2), (5, 3), (7, 4)):
        assert enumerate_states(n, m).size == 24 * n * m + 6 * n + 4 * m + 5


def test_state_set_rejects_even_or_tiny():
    with pytest.raises(ValueError):
        enumerate_states(2, 1)
    with pytest.raises(ValueError):
        enumerate_states(3, 0)


def test_quiescent_is_last():
    states = enumerate_states(3, 2)
    assert states.states[-1] == QUIESCENT
    assert states.q_index == states.size - 1
    assert is_quiescent(QUIESCENT)
    assert not is_quiescent(CellState(0, 0, None, None, None, None, 0))


def test_state_set_digest_frozen():
    assert (
        enumerate_states(1, 1).digest()
        == "7d7b730db8b2b2b645fe84707e09dbbf2367ce659fc27e91d305d08948256ca5"
    )
    assert (
        enumerate_states(3, 1).digest()
        == "26ed4989b5ddde54aa8fde1bbaf77eb3aee0fd1eaf30e78ec768d38b8698d926"
    )


def test_enumeration_matches_pattern_bruteforce():
    # independent oracle: generate every domain tuple and keep the ones the
    # pattern classifier admits; must equal the enumerated set exactly.
    for n, m in ((1, 1), (3, 2)):
        states = enumerate_states(n, m)
        brute = set()
        domains = itertools.product(
            (None, *range(n + 1)),
            (None, *range(m + 2)),
            (None, -1, 0, 1),
            (None, 0, 1),
            (None, 0, 1),
            (None, 0, 1),
            (None, 0, 1),
        )
        for parts in domains:
            s = CellState(*parts)
            if state_pattern(s, n, m) is not None:
                brute.add(s)
        assert brute == set(states.states)
        assert len(states.states) == len(brute)


def test_enumeration_is_sorted_by_canonical_key():
    states = enumerate_states(3, 2)
    key = lambda s: state_sort_key(s, 3, 2)
    assert list(states.states) == sorted(states.states, key=key)


def test_pattern_counts():
    n, m = 3, 2
    states = enumerate_states(n, m)
    counts = {}
    for s in states.states:
        counts[state_pattern(s, n, m)] = counts.get(state_pattern(s, n, m), 0) + 1
    assert counts == {1: 2, 2: 2 * n, 3: 4 * m, 4: 2, 5: 4 * n, 6: 24 * n * m, 7: 1}


def test_label_siblings_adjacent():
    # canonical order keeps the label-0/label-1 variants of a skeleton next
    # to each other; table construction relies on this arithmetic.
    states = enumerate_states(3, 2)
    for k, s in enumerate(states.states):
        if is_quiescent(s):
            continue
        sibling = s._replace(label=1 - s.label)
        assert states.index[sibling] == k - s.label + (1 - s.label)


def test_skeleton_states():
    states = enumerate_states(1, 1)
    skels = states.skeleton_states()
    assert len(skels) == (states.size - 1) // 2 == 19
    assert all(s.label == 0 and not is_quiescent(s) for s in skels)


def test_state_to_text_frozen():
    assert state_to_text(QUIESCENT) == "coord=(_,_) flag=_ a=_ pd=_ pc=_ label=_"
    s = CellState(2, 1, -1, 0, 1, None, 1)
    assert state_to_text(s) == "coord=(2,1) flag=-1 a=0 pd=1 pc=_ label=1"


def test_index_lookup():
    states = enumerate_states(1, 1)
    for k, s in enumerate(states.states):
        assert states.index[s] == k


# -------------------------------------------------------------- directions ---


def test_snake_at_1x1_frozen():
    # single 6-cycle through the 2x3 rectangle
    path = [(0, 0)]
    for _ in range(5):
        path.append(suc(1, 1, *path[-1]))
    assert path == [(0, 0), (0, 1), (0, 2), (1, 2), (1, 1), (1, 0)]
    assert suc(1, 1, 1, 0) == (0, 0)


def test_direction_down_left_precedence():
    # (n, 1) turns left even on the odd (descending) rows
    assert direction(3, 2, 3, 1) == "left"
    assert direction(3, 2, 1, 1) == "down"
    assert direction(3, 2, 0, 0) == "right"
    assert direction(3, 2, 0, 3) == "down"
    assert direction(3, 2, 2, 3) == "down"
    assert direction(3, 2, 1, 3) == "left"
    assert direction(3, 2, 2, 0) == "up"
    with pytest.raises(ValueError):
        direction(2, 2, 0, 0)
    with pytest.raises(ValueError):
        direction(3, 2, 4, 0)


def test_suc_is_a_single_full_cycle():
    for n, m in ((1, 1), (3, 2), (5, 3), (7, 1)):
        span = (n + 1) * (m + 2)
        seen = [(0, 0)]
        for _ in range(span - 1):
            seen.append(suc(n, m, *seen[-1]))
        assert len(set(seen)) == span
        assert set(seen) == {(i, j) for i in range(n + 1) for j in range(m + 2)}
        assert suc(n, m, *seen[-1]) == (0, 0)


def test_direction_slot_mapping():
    # slots: 1 = right, 2 = left, 3 = below, 4 = above
    assert direction_slot(1, 1, 0, 0) == 1
    assert direction_slot(1, 1, 1, 1) == 2
    assert direction_slot(1, 1, 0, 2) == 3
    assert direction_slot(1, 1, 1, 0) == 4


# -------------------------------------------------------------- local rules ---


def demo_window(pos):
    table = build_table(DEMO5X3, (0, 1, 1))
    return table, window_at(table, pos)


def test_rule_a_wrong_neighbour_coordinate():
    table, (s1, s2, s3, s4, s5) = demo_window((2, 2))
    bad = s2._replace(col=0)  # right neighbour claims a shifted column
    assert local_violation(DEMO5X3, s1, bad, s3, s4, s5) == "A"
    assert local_violation(DEMO5X3, s1, QUIESCENT, s3, s4, s5) == "A"


def test_rule_a_border_must_see_quiescent():
    table, (s1, s2, s3, s4, s5) = demo_window((0, 0))
    assert s5 == QUIESCENT  # above the rectangle
    intruder = CellState(0, 0, None, None, None, None, 0)
    assert local_violation(DEMO5X3, s1, s2, s3, s4, intruder) == "A"


def test_rule_b_flag_disagrees_with_formula():
    table, (s1, s2, s3, s4, s5) = demo_window((2, 2))
    assert DEMO5X3.sign(2, 2) == 1
    assert local_violation(DEMO5X3, s1._replace(flag=0), s2, s3, s4, s5) == "B"


def test_rule_c1_vertical_assignment_mismatch():
    table, (s1, s2, s3, s4, s5) = demo_window((2, 2))
    assert local_violation(DEMO5X3, s1._replace(a=0, pd=0), s2, s3, s4, s5) == "C1"


def test_rule_c2_conjunction_recurrence():
    table, (s1, s2, s3, s4, s5) = demo_window((2, 4))
    assert s1.pc == 0
    assert local_violation(DEMO5X3, s1._replace(pc=1), s2, s3, s4, s5) == "C2"


def test_rule_c3_first_conjunction_copies_disjunction():
    table, (s1, s2, s3, s4, s5) = demo_window((1, 4))
    assert s3.pd == 0  # clause 1 fails under a = (0,1,1)
    assert local_violation(DEMO5X3, s1._replace(pc=1), s2, s3, s4, s5) == "C3"


def test_rule_d1_disjunction_recurrence():
    table, (s1, s2, s3, s4, s5) = demo_window((2, 2))
    assert s1.pd == 1
    assert local_violation(DEMO5X3, s1._replace(pd=0), s2, s3, s4, s5) == "D1"


def test_rule_d2_first_disjunction_is_the_literal():
    table, (s1, s2, s3, s4, s5) = demo_window((3, 1))
    assert s1.pd == 1  # ~x1 holds under x1 = 0
    assert local_violation(DEMO5X3, s1._replace(pd=0), s2, s3, s4, s5) == "D2"


def test_rules_e_blank_placement():
    table = build_table(DEMO5X3, (0, 1, 1))
    w = window_at(table, (2, 0))
    assert local_violation(DEMO5X3, w[0]._replace(a=0), *w[1:]) == "E1"
    w = window_at(table, (0, 2))
    assert local_violation(DEMO5X3, w[0]._replace(pd=1), *w[1:]) == "E2"
    w = window_at(table, (2, 4))
    assert local_violation(DEMO5X3, w[0]._replace(a=1), *w[1:]) == "E3"
    w = window_at(table, (2, 2))
    assert local_violation(DEMO5X3, w[0]._replace(pc=0), *w[1:]) == "E4"


def test_rule_s_membership_backstop():
    # a blank main-body assignment escapes (A)-(E) when the whole column
    # agrees; the final membership rule still rejects it
    centre = CellState(2, 1, 0, None, 0, None, 0)
    right = CellState(2, 2, 1, 1, 1, None, 0)
    left = CellState(2, 0, None, None, None, None, 0)
    below = CellState(3, 1, -1, None, 0, None, 0)
    above = CellState(1, 1, 1, None, 0, None, 0)
    assert DEMO5X3.sign(2, 1) == 0
    assert local_violation(DEMO5X3, centre, right, left, below, above) == "S"


def test_quiescent_centre_rejected():
    table, (s1, s2, s3, s4, s5) = demo_window((0, 0))
    with pytest.raises(ValueError):
        local_violation(DEMO5X3, QUIESCENT, s2, s3, s4, s5)


def test_table_cells_locally_correct():
    rng = random.Random(202)
    for _ in range(20):
        phi, a, table = random_table(rng, max_n=5, max_m=5)
        for pos in table.positions():
            assert local_rule_violation(phi, table, pos) is None


# ------------------------------------------------------------------- colors ---


def test_satisfying_table_all_blue():
    table = build_table(DEMO5X3, (1, 0, 0))
    colors, successors = cell_classification(DEMO5X3, table)
    assert all(col == BLUE for row in colors for col in row)
    assert len(successors) == 30


def test_falsifying_table_red_exactly_at_output():
    table = build_table(DEMO5X3, (0, 1, 1))
    colors, _ = cell_classification(DEMO5X3, table)
    reds = [
        (r, c) for r in range(6) for c in range(5) if colors[r][c] == RED
    ]
    assert reds == [(5, 4)]  # the output cell carries pc = 0
    assert color(DEMO5X3, table, (5, 4)) == RED


def test_colors_are_label_independent():
    rng = random.Random(7)
    phi, a, table = random_table(rng, max_n=3, max_m=3)
    base, _ = cell_classification(phi, table)
    for _ in range(10):
        cells = (phi.n + 1) * (phi.m + 2)
        flipped, _ = cell_classification(phi, relabel(table, rng.getrandbits(cells)))
        assert flipped == base


def test_successor_of_agrees_with_classification():
    # successor_of scans neighbours for the written target (definitional);
    # cell_classification walks the direction offset (arithmetic)
    rng = random.Random(11)
    for _ in range(10):
        phi, a, table = random_table(rng, max_n=5, max_m=3)
        colors, successors = cell_classification(phi, table)
        for pos in table.positions():
            if colors[pos[0]][pos[1]] == BLUE:
                assert successor_of(phi, table, pos) == successors[pos]
            else:
                with pytest.raises(ValueError):
                    successor_of(phi, table, pos)


# --------------------------------------------------------------------- step ---


def test_step_fixed_point_on_tables():
    rng = random.Random(303)
    for _ in range(25):
        phi, a, table = random_table(rng)
        assert step(phi, table) == table


def test_step_xor_against_successor_oracle():
    rng = random.Random(404)
    for _ in range(10):
        phi, a, table = random_table(rng, max_n=5, max_m=3)
        cells = (phi.n + 1) * (phi.m + 2)
        C = relabel(table, rng.getrandbits(cells))
        D = step(phi, C)
        colors, _ = cell_classification(phi, C)
        for r, c in C.positions():
            before, after = C.grid[r][c], D.grid[r][c]
            assert after._replace(label=0) == before._replace(label=0)
            if colors[r][c] == BLUE:
                spos = successor_of(phi, C, (r, c))
                assert after.label == before.label ^ C.state_at(spos).label
            else:
                assert after.label == before.label


def test_step_preserves_similarity_class():
    rng = random.Random(15)
    phi, a, table = random_table(rng)
    cells = (phi.n + 1) * (phi.m + 2)
    C = relabel(table, rng.getrandbits(cells))
    assert is_similar(step(phi, C), C)


def test_step_checks_dimensions():
    other = build_table(normalize_odd(from_clauses([[1]])), (1,))
    with pytest.raises(ValueError):
        step(DEMO5X3, other)


def test_relabel_labels_of_round_trip():
    rng = random.Random(23)
    phi, a, table = random_table(rng)
    cells = (phi.n + 1) * (phi.m + 2)
    for _ in range(20):
        bits = rng.getrandbits(cells)
        assert labels_of(relabel(table, bits)) == bits
    assert labels_of(table) == 0


# ------------------------------------------------------------- text format ---


def test_config_round_trip():
    rng = random.Random(31)
    for _ in range(10):
        phi, a, table = random_table(rng, max_n=5, max_m=4)
        cells = (phi.n + 1) * (phi.m + 2)
        C = relabel(table, rng.getrandbits(cells))
        text = write_config(C)
        assert parse_config(text) == C
        assert write_config(parse_config(text)) == text


def test_config_format_errors():
    table = build_table(DEMO5X3, (0, 1, 1))
    text = write_config(table)
    lines = text.splitlines()
    with pytest.raises(ConfigFormatError):
        parse_config("")
    with pytest.raises(ConfigFormatError):
        parse_config("config x 3\n")
    with pytest.raises(ConfigFormatError):
        parse_config("\n".join(lines[:-1]) + "\n")  # one cell missing
    mangled = lines[:]
    mangled[1] = mangled[1].replace("label=0", "label=9")
    with pytest.raises(ConfigFormatError):
        parse_config("\n".join(mangled) + "\n")
    dup = lines[:]
    dup[2] = dup[1]
    with pytest.raises(ConfigFormatError):
        parse_config("\n".join(dup) + "\n")
    # a fully blank cell parses as quiescent, which may not sit inside
    blank = lines[:]
    blank[1] = "0 0 | coord=(_,_) flag=_ a=_ pd=_ pc=_ label=_"
    with pytest.raises(ConfigFormatError):
        parse_config("\n".join(blank) + "\n")


def test_configuration_validation():
    table = build_table(DEMO5X3, (0, 1, 1))
    grid = list(map(list, table.grid))
    grid[0][0] = QUIESCENT
    with pytest.raises(ValueError):
        Configuration(5, 3, tuple(map(tuple, grid)))
    grid = list(map(list, table.grid))
    grid[2][2] = grid[2][2]._replace(row=9)
    with pytest.raises(ValueError):
        Configuration(5, 3, tuple(map(tuple, grid)))
    grid = list(map(list, table.grid))
    grid[2][2] = grid[2][2]._replace(label=None)
    with pytest.raises(ValueError):
        Configuration(5, 3, tuple(map(tuple, grid)))


def test_state_at_outside_is_quiescent():
    table = build_table(DEMO5X3, (0, 1, 1))
    assert table.state_at((-1, 0)) == QUIESCENT
    assert table.state_at((0, 99)) == QUIESCENT
    assert table.state_at((0, 0)) == table.grid[0][0]
