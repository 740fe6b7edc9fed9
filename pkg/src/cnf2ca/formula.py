"""CNF formulas represented as a clause/variable sign matrix.

A formula with n clauses over m variables is stored as the total relation
rel: {1..n} x {1..m} -> {POS, NEG, ABSENT} where POS means the variable
occurs positively in the clause, NEG negatively and ABSENT not at all.
Clauses containing a complementary pair of literals are rejected (they are
tautological and would break the single-valuedness of rel); duplicate
literals collapse.  Both n >= 1 and m >= 1 are required, and every clause
must contain at least one literal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

POS = 1
NEG = -1
ABSENT = 0


class FormulaError(ValueError):
    """Raised for malformed formulas or unparseable formula files."""


@dataclass(frozen=True)
class CnfFormula:
    """An n-clause, m-variable CNF formula as an immutable sign matrix.

    rel is a tuple of n rows; row i-1 holds the signs of variables 1..m in
    clause i.
    """

    n: int
    m: int
    rel: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1:
            raise FormulaError("formula needs at least one clause and one variable")
        if len(self.rel) != self.n or any(len(row) != self.m for row in self.rel):
            raise FormulaError("sign matrix shape disagrees with (n, m)")
        for i, row in enumerate(self.rel, start=1):
            if any(s not in (POS, NEG, ABSENT) for s in row):
                raise FormulaError(f"clause {i} has a sign outside {{-1, 0, 1}}")
            if all(s == ABSENT for s in row):
                raise FormulaError(f"clause {i} is empty")

    def sign(self, i: int, j: int) -> int:
        """Sign of variable j in clause i (1-based)."""
        if not (1 <= i <= self.n and 1 <= j <= self.m):
            raise IndexError(f"({i}, {j}) outside clause/variable range")
        return self.rel[i - 1][j - 1]

    def clause_value(self, i: int, a: tuple[int, ...]) -> int:
        """Truth value (0/1) of clause i under assignment a."""
        row = self.rel[i - 1]
        for j in range(self.m):
            if row[j] == POS and a[j] == 1:
                return 1
            if row[j] == NEG and a[j] == 0:
                return 1
        return 0

    def is_satisfied(self, a: tuple[int, ...]) -> bool:
        """True when every clause evaluates to 1 under a."""
        if len(a) != self.m or any(v not in (0, 1) for v in a):
            raise FormulaError("assignment must be a 0/1 vector of length m")
        return all(self.clause_value(i, a) == 1 for i in range(1, self.n + 1))

    def partial_disjunction(self, i: int, j: int, a: tuple[int, ...]) -> int:
        """Value of the prefix disjunction of clause i over variables 1..j."""
        if not (1 <= j <= self.m):
            raise IndexError(f"variable prefix {j} out of range")
        row = self.rel[i - 1]
        for u in range(j):
            if row[u] == POS and a[u] == 1:
                return 1
            if row[u] == NEG and a[u] == 0:
                return 1
        return 0

    def partial_conjunction(self, i: int, a: tuple[int, ...]) -> int:
        """Value of the conjunction of clauses 1..i under a."""
        if not (1 <= i <= self.n):
            raise IndexError(f"clause prefix {i} out of range")
        return int(all(self.clause_value(v, a) == 1 for v in range(1, i + 1)))

    def clauses(self) -> list[list[int]]:
        """Clauses as signed 1-based variable lists (DIMACS style)."""
        out = []
        for row in self.rel:
            out.append([j * s for j, s in enumerate(row, start=1) if s != ABSENT])
        return out


def from_clauses(clauses: list[list[int]], m: int | None = None) -> CnfFormula:
    """Build a formula from DIMACS-style signed literal lists.

    m defaults to the largest variable index mentioned.  Duplicate literals
    collapse; complementary literals in one clause raise FormulaError.
    """
    if not clauses:
        raise FormulaError("formula needs at least one clause")
    maxvar = max((abs(l) for c in clauses for l in c), default=0)
    if m is None:
        m = maxvar
    if m < 1:
        raise FormulaError("formula needs at least one variable")
    if maxvar > m:
        raise FormulaError(f"literal mentions variable {maxvar} > m = {m}")
    rows = []
    for i, clause in enumerate(clauses, start=1):
        row = [ABSENT] * m
        for lit in clause:
            if lit == 0:
                raise FormulaError(f"clause {i} contains literal 0")
            j, s = abs(lit), (POS if lit > 0 else NEG)
            if row[j - 1] == -s:
                raise FormulaError(
                    f"clause {i} contains complementary literals on variable {j}"
                )
            row[j - 1] = s
        rows.append(tuple(row))
    return CnfFormula(len(clauses), m, tuple(rows))


def parse_dimacs(text: str) -> CnfFormula:
    """Parse a DIMACS CNF document into a CnfFormula."""
    n_decl = m_decl = None
    lits: list[int] = []
    clauses: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise FormulaError(f"line {lineno}: malformed problem line")
            try:
                m_decl, n_decl = int(fields[2]), int(fields[3])
            except ValueError:
                raise FormulaError(f"line {lineno}: malformed problem line") from None
            continue
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise FormulaError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                clauses.append(lits)
                lits = []
            else:
                lits.append(lit)
    if lits:
        raise FormulaError("final clause not terminated by 0")
    if n_decl is None or m_decl is None:
        raise FormulaError("missing problem line")
    if len(clauses) != n_decl:
        raise FormulaError(f"declared {n_decl} clauses, found {len(clauses)}")
    return from_clauses(clauses, m=m_decl)


def write_dimacs(phi: CnfFormula) -> str:
    """Render a formula as a DIMACS CNF document."""
    lines = [f"p cnf {phi.m} {phi.n}"]
    for clause in phi.clauses():
        lines.append(" ".join(str(l) for l in clause) + " 0")
    return "\n".join(lines) + "\n"


def dump_rel(phi: CnfFormula) -> str:
    """Dump the full sign matrix, one 'i j sign' line per entry."""
    lines = [
        f"{i} {j} {phi.sign(i, j)}"
        for i in range(1, phi.n + 1)
        for j in range(1, phi.m + 1)
    ]
    return "\n".join(lines) + "\n"


def parse_rel(text: str) -> CnfFormula:
    """Rebuild a formula from a dump_rel document."""
    entries: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 3:
            raise FormulaError(f"line {lineno}: expected 'i j sign'")
        try:
            i, j, s = (int(f) for f in fields)
        except ValueError:
            raise FormulaError(f"line {lineno}: expected integers") from None
        if (i, j) in entries:
            raise FormulaError(f"line {lineno}: duplicate entry ({i}, {j})")
        entries[(i, j)] = s
    if not entries:
        raise FormulaError("empty sign matrix")
    n = max(i for i, _ in entries)
    m = max(j for _, j in entries)
    if len(entries) != n * m:
        raise FormulaError("sign matrix has missing entries")
    rows = tuple(tuple(entries[(i, j)] for j in range(1, m + 1)) for i in range(1, n + 1))
    return CnfFormula(n, m, rows)


def normalize_odd(phi: CnfFormula) -> CnfFormula:
    """Ensure an odd clause count by duplicating the last clause once."""
    if phi.n % 2 == 1:
        return phi
    return CnfFormula(phi.n + 1, phi.m, phi.rel + (phi.rel[-1],))


def enumerate_assignments(m: int):
    """Yield all 0/1 assignments of length m in lexicographic order."""
    return itertools.product((0, 1), repeat=m)


def satisfying_assignments(phi: CnfFormula):
    """Yield satisfying assignments in lexicographic order (exhaustive scan)."""
    for a in enumerate_assignments(phi.m):
        if phi.is_satisfied(a):
            yield a


def is_unsatisfiable(phi: CnfFormula) -> bool:
    """Exhaustively check that no assignment satisfies phi (2^m scan)."""
    return next(satisfying_assignments(phi), None) is None


def _php_var(i: int, j: int, k: int) -> int:
    """1-based index of pigeon/hole variable p(i, j): i*k + j + 1."""
    return i * k + j + 1


def gen_onto_php(k: int) -> CnfFormula:
    """Onto pigeonhole principle for k+1 pigeons and k holes.

    Variables p(i, j) for pigeon i in 0..k and hole j in 0..k-1 are
    flattened to index i*k + j + 1.  Clause groups, in order: every pigeon
    sits somewhere; no two pigeons share a hole; no pigeon sits in two
    holes; every hole is used.  Unsatisfiable for every k >= 1.
    """
    if k < 1:
        raise FormulaError("pigeonhole size k must be >= 1")
    clauses: list[list[int]] = []
    for i in range(k + 1):
        clauses.append([_php_var(i, j, k) for j in range(k)])
    for j in range(k):
        for i1, i2 in itertools.combinations(range(k + 1), 2):
            clauses.append([-_php_var(i1, j, k), -_php_var(i2, j, k)])
    for i in range(k + 1):
        for j1, j2 in itertools.combinations(range(k), 2):
            clauses.append([-_php_var(i, j1, k), -_php_var(i, j2, k)])
    for j in range(k):
        clauses.append([_php_var(i, j, k) for i in range(k + 1)])
    return from_clauses(clauses, m=(k + 1) * k)


def gen_weak_php(k: int) -> CnfFormula:
    """Weak pigeonhole principle: placement and no-sharing clauses only."""
    if k < 1:
        raise FormulaError("pigeonhole size k must be >= 1")
    clauses: list[list[int]] = []
    for i in range(k + 1):
        clauses.append([_php_var(i, j, k) for j in range(k)])
    for j in range(k):
        for i1, i2 in itertools.combinations(range(k + 1), 2):
            clauses.append([-_php_var(i1, j, k), -_php_var(i2, j, k)])
    return from_clauses(clauses, m=(k + 1) * k)
