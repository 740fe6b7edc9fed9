"""Chain decomposition and injectivity analysis for A_phi.

Colors and successor links depend only on the skeleton (the label-stripped
part) of a configuration, so a single classification serves a whole
similarity class: blue cells form disjoint successor paths ending in red
cells, or one all-covering cycle.  A class maps injectively under A_phi
exactly when it contains a red cell, and A_phi is injective on all bounded
configurations exactly when phi is unsatisfiable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .automaton import (
    BLUE,
    Configuration,
    RED,
    StateSet,
    cell_classification,
    enumerate_states,
    relabel,
    step,
)
from .formula import CnfFormula, normalize_odd, satisfying_assignments
from .tableau import build_table, witness_pair


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would overrun its configured budget."""


@dataclass(frozen=True)
class ChainDecomposition:
    """Partition of the rectangle into pointed chains, a cycle and isolated
    red cells.

    Every chain is a successor path whose cells are blue except the final,
    red one; the cycle (if present) is blue and successor-closed; isolated
    cells are red cells that terminate no chain.
    """

    chains: tuple[tuple[tuple[int, int], ...], ...]
    cycle: Optional[tuple[tuple[int, int], ...]]
    isolated: tuple[tuple[int, int], ...]


def decompose(phi: CnfFormula, C: Configuration) -> ChainDecomposition:
    """Chain/cycle decomposition of C under A_phi's successor relation."""
    colors, successors = cell_classification(phi, C)
    predecessors: dict[tuple[int, int], tuple[int, int]] = {}
    for pos, spos in successors.items():
        assert spos not in predecessors, f"two cells point at {spos}"
        predecessors[spos] = pos

    chains = []
    on_chain: set[tuple[int, int]] = set()
    for pos in C.positions():
        if pos in successors and pos not in predecessors:
            # A chain start: walk forward to the red terminal.
            chain = [pos]
            while chain[-1] in successors:
                chain.append(successors[chain[-1]])
            chains.append(tuple(chain))
            on_chain.update(chain)

    cycle_cells = [
        pos for pos in successors if pos not in on_chain
    ]
    cycle: Optional[tuple[tuple[int, int], ...]] = None
    if cycle_cells:
        start = cycle_cells[0]
        orbit = [start]
        while successors[orbit[-1]] != start:
            orbit.append(successors[orbit[-1]])
        assert len(orbit) == len(cycle_cells), "blue leftovers form several cycles"
        cycle = tuple(orbit)

    isolated = tuple(
        (r, c)
        for r in range(C.n + 1)
        for c in range(C.m + 2)
        if colors[r][c] == RED and (r, c) not in on_chain
    )
    return ChainDecomposition(tuple(chains), cycle, isolated)


def class_injective(phi: CnfFormula, C: Configuration) -> bool:
    """True iff A_phi is injective on the similarity class of C.

    By the red-cell criterion this holds exactly when some cell is red.
    """
    colors, _ = cell_classification(phi, C)
    return any(color == RED for row in colors for color in row)


def class_injective_bruteforce(
    phi: CnfFormula, C: Configuration, budget: int = 24
) -> bool:
    """Independent oracle: enumerate every labeling of C's skeleton and
    report whether all 2^cells step images are distinct."""
    cells = (C.n + 1) * (C.m + 2)
    if cells > budget:
        raise BudgetExceeded(f"{cells} cells exceed the {budget}-cell budget")
    succ_idx = _successor_indices(phi, C)
    seen = set()
    for labels in range(1 << cells):
        image = _image_labels(labels, succ_idx)
        if image in seen:
            return False
        seen.add(image)
    return True


def _successor_indices(
    phi: CnfFormula, C: Configuration
) -> list[Optional[int]]:
    """Row-major cell index of each cell's successor; None for red cells."""
    _, successors = cell_classification(phi, C)
    width = C.m + 2
    out: list[Optional[int]] = []
    for pos in C.positions():
        spos = successors.get(pos)
        out.append(None if spos is None else spos[0] * width + spos[1])
    return out


def _image_labels(labels: int, succ_idx: list[Optional[int]]) -> int:
    """Step-image label bits for a label vector over a fixed skeleton."""
    image = 0
    for k, sk in enumerate(succ_idx):
        bit = (labels >> k) & 1
        if sk is not None:
            bit ^= (labels >> sk) & 1
        if bit:
            image |= 1 << k
    return image


@dataclass(frozen=True)
class InjectivityResult:
    injective: bool
    formula: CnfFormula  # the normalized formula actually analyzed
    assignment: Optional[tuple[int, ...]] = None
    witness: Optional[tuple[Configuration, Configuration]] = None


def decide_injectivity(phi: CnfFormula, budget: int = 24) -> InjectivityResult:
    """Decide injectivity of A_phi on bounded configurations.

    A_phi is injective iff phi is unsatisfiable, so this scans all 2^m
    assignments; the first satisfying one (lexicographic order) yields a
    colliding witness pair.
    """
    if phi.m > budget:
        raise BudgetExceeded(f"{phi.m} variables exceed the {budget}-variable budget")
    phi_n = normalize_odd(phi)
    a = next(satisfying_assignments(phi_n), None)
    if a is None:
        return InjectivityResult(injective=True, formula=phi_n)
    return InjectivityResult(
        injective=False,
        formula=phi_n,
        assignment=a,
        witness=witness_pair(phi_n, a),
    )


def random_skeleton_configuration(
    states: StateSet, rng: random.Random
) -> Configuration:
    """Uniform random skeleton: each cell drawn from the non-quiescent
    label-0 states, labels left at 0."""
    skeletons = states.skeleton_states()
    rows = tuple(
        tuple(rng.choice(skeletons) for _ in range(states.m + 2))
        for _ in range(states.n + 1)
    )
    return Configuration(states.n, states.m, rows)


def random_configuration(states: StateSet, rng: random.Random) -> Configuration:
    """Uniform random configuration: random skeleton plus random labels."""
    C = random_skeleton_configuration(states, rng)
    cells = (states.n + 1) * (states.m + 2)
    return relabel(C, rng.getrandbits(cells))


@dataclass(frozen=True)
class CollisionResult:
    first: Configuration
    second: Configuration
    image: Configuration
    trials_used: int
    seed: int


_CLASS_DICT_CAP = 1 << 16  # per-class birthday dictionary size bound


def collision_search(
    phi: CnfFormula, trials: int, seed: int = 0, table_bias: float = 0.5
) -> Optional[CollisionResult]:
    """Randomized birthday search for step-image collisions.

    Each trial flips a coin (probability table_bias) between two samplers:
    the similarity class of Table(phi, a) for a uniform random assignment a
    (the classes where collisions live when phi is satisfiable), or a fresh
    uniform random skeleton.  One label vector is drawn on the chosen
    skeleton and its image recorded in a per-class dictionary; a collision
    is a repeated image under a different labeling.  Memory per class is
    capped (further images are still probed against the stored ones).  A
    returned pair is re-verified definitionally with step before being
    reported; an empty result is evidence, not proof.
    """
    phi = normalize_odd(phi)
    rng = random.Random(seed)
    cells = (phi.n + 1) * (phi.m + 2)
    states = enumerate_states(phi.n, phi.m)
    table_cache: dict[tuple[int, ...], tuple[Configuration, list[Optional[int]]]] = {}
    seen: dict[tuple[int, ...], dict[int, int]] = {}  # per class: image -> label
    for trial in range(1, trials + 1):
        if rng.random() < table_bias:
            a = tuple(rng.getrandbits(1) for _ in range(phi.m))
            if a not in table_cache:
                table = build_table(phi, a)
                table_cache[a] = (table, _successor_indices(phi, table))
            skeleton, succ_idx = table_cache[a]
            images = seen.setdefault(a, {})
        else:
            skeleton = random_skeleton_configuration(states, rng)
            succ_idx = _successor_indices(phi, skeleton)
            images = {}  # fresh class, nothing accumulated to collide with
        labels = rng.getrandbits(cells)
        image = _image_labels(labels, succ_idx)
        other = images.get(image)
        if other is not None and other != labels:
            C1 = relabel(skeleton, other)
            C2 = relabel(skeleton, labels)
            img = step(phi, C1)
            assert C1 != C2 and img == step(phi, C2), "collision failed re-check"
            return CollisionResult(C1, C2, img, trial, seed)
        if other is None and len(images) < _CLASS_DICT_CAP:
            images[image] = labels
    return None


__all__ = [
    "BLUE",
    "RED",
    "BudgetExceeded",
    "ChainDecomposition",
    "CollisionResult",
    "InjectivityResult",
    "class_injective",
    "class_injective_bruteforce",
    "collision_search",
    "decide_injectivity",
    "decompose",
    "random_configuration",
    "random_skeleton_configuration",
]
