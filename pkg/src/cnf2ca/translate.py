"""Bounded arithmetic formulas over a binary relation symbol R and their
propositional translation.

Terms are built from the constants, number variables, + and *; formulas from
the atoms t=s, t<=s and R(t,s) with negation, n-ary conjunction/disjunction
and bounded quantifiers.  Under an environment assigning naturals to the
free variables, a formula translates to a constant-depth propositional
formula: closed arithmetic atoms collapse to their truth value, R(t,s)
becomes the variable r_{i,j} (stored under the pairing-flattened index),
and bounded quantifiers expand to disjunctions/conjunctions over all values
up to the bound.  Connectives are kept n-ary so the depth definition's
same-connective flattening applies directly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union


def pairing(x: int, y: int) -> int:
    """Cantor pairing <x,y> = (x+y)(x+y+1)/2 + x."""
    if x < 0 or y < 0:
        raise ValueError("pairing is defined on naturals")
    return (x + y) * (x + y + 1) // 2 + x


def unpair(z: int) -> tuple[int, int]:
    """Inverse of pairing."""
    if z < 0:
        raise ValueError("unpair is defined on naturals")
    w = (math.isqrt(8 * z + 1) - 1) // 2
    x = z - w * (w + 1) // 2
    return (x, w - x)


# ---------------------------------------------------------------- terms ---


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Mul:
    left: "Term"
    right: "Term"


Term = Union[Num, Var, Add, Mul]


def eval_term(t: Term, env: dict[str, int]) -> int:
    """Value of a term under env; every variable must be bound."""
    if isinstance(t, Num):
        return t.value
    if isinstance(t, Var):
        if t.name not in env:
            raise ValueError(f"unbound variable {t.name!r}")
        return env[t.name]
    if isinstance(t, Add):
        return eval_term(t.left, env) + eval_term(t.right, env)
    if isinstance(t, Mul):
        return eval_term(t.left, env) * eval_term(t.right, env)
    raise TypeError(f"not a term: {t!r}")


# ------------------------------------------------------- bounded formulas ---


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Le:
    left: Term
    right: Term


@dataclass(frozen=True)
class Rel:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    arg: "Delta0"


@dataclass(frozen=True)
class And:
    args: tuple["Delta0", ...]


@dataclass(frozen=True)
class Or:
    args: tuple["Delta0", ...]


@dataclass(frozen=True)
class Exists:
    var: str
    bound: Term
    body: "Delta0"


@dataclass(frozen=True)
class Forall:
    var: str
    bound: Term
    body: "Delta0"


Delta0 = Union[Eq, Le, Rel, Not, And, Or, Exists, Forall]


# ------------------------------------------------- propositional formulas ---


@dataclass(frozen=True)
class PropConst:
    value: int


@dataclass(frozen=True)
class PropVar:
    """The variable r_{i,j}, stored under its pairing-flattened index."""

    index: int

    @classmethod
    def of(cls, i: int, j: int) -> "PropVar":
        return cls(pairing(i, j))

    @property
    def pair(self) -> tuple[int, int]:
        return unpair(self.index)


@dataclass(frozen=True)
class PropNot:
    arg: "Prop"


@dataclass(frozen=True)
class PropAnd:
    args: tuple["Prop", ...]


@dataclass(frozen=True)
class PropOr:
    args: tuple["Prop", ...]


Prop = Union[PropConst, PropVar, PropNot, PropAnd, PropOr]


def make_and(args) -> Prop:
    """N-ary conjunction with same-connective flattening and singleton
    collapse; the empty conjunction is the constant 1."""
    flat: list[Prop] = []
    for f in args:
        flat.extend(f.args if isinstance(f, PropAnd) else (f,))
    if not flat:
        return PropConst(1)
    if len(flat) == 1:
        return flat[0]
    return PropAnd(tuple(flat))


def make_or(args) -> Prop:
    """N-ary disjunction, dual to make_and; empty disjunction is 0."""
    flat: list[Prop] = []
    for f in args:
        flat.extend(f.args if isinstance(f, PropOr) else (f,))
    if not flat:
        return PropConst(0)
    if len(flat) == 1:
        return flat[0]
    return PropOr(tuple(flat))


def pw_translate(f: Delta0, env: dict[str, int] | None = None) -> Prop:
    """Propositional translation of f under env.

    Closed arithmetic atoms become the constant of their truth value;
    R(t,s) becomes r_{t(env),s(env)}; negation/conjunction/disjunction
    commute; bounded quantifiers expand over 0..bound inclusive.
    """
    env = dict(env or {})
    if isinstance(f, Eq):
        return PropConst(int(eval_term(f.left, env) == eval_term(f.right, env)))
    if isinstance(f, Le):
        return PropConst(int(eval_term(f.left, env) <= eval_term(f.right, env)))
    if isinstance(f, Rel):
        return PropVar.of(eval_term(f.left, env), eval_term(f.right, env))
    if isinstance(f, Not):
        return PropNot(pw_translate(f.arg, env))
    if isinstance(f, And):
        return make_and(pw_translate(g, env) for g in f.args)
    if isinstance(f, Or):
        return make_or(pw_translate(g, env) for g in f.args)
    if isinstance(f, (Exists, Forall)):
        bound = eval_term(f.bound, env)
        parts = []
        for v in range(bound + 1):
            inner = dict(env)
            inner[f.var] = v
            parts.append(pw_translate(f.body, inner))
        return make_or(parts) if isinstance(f, Exists) else make_and(parts)
    raise TypeError(f"not a formula: {f!r}")


def depth(f: Prop) -> int:
    """Formula depth: variables/constants 0, consecutive negations merge,
    maximal same-connective blocks count once."""
    if isinstance(f, (PropConst, PropVar)):
        return 0
    if isinstance(f, PropNot):
        return depth(f.arg) if isinstance(f.arg, PropNot) else 1 + depth(f.arg)
    block_type = type(f)
    leaves: list[Prop] = []
    stack = list(f.args)
    while stack:
        g = stack.pop()
        if isinstance(g, block_type):
            stack.extend(g.args)
        else:
            leaves.append(g)
    return 1 + max(depth(g) for g in leaves)


def size(f: Prop) -> int:
    """Node count of a propositional formula."""
    if isinstance(f, (PropConst, PropVar)):
        return 1
    if isinstance(f, PropNot):
        return 1 + size(f.arg)
    return 1 + sum(size(g) for g in f.args)


def size_depth_scan(
    f: Delta0, var: str, values, env: dict[str, int] | None = None
) -> list[dict[str, int]]:
    """Size/depth of the translation of f as var ranges over values."""
    rows = []
    for v in values:
        inner = dict(env or {})
        inner[var] = v
        prop = pw_translate(f, inner)
        rows.append({var: v, "size": size(prop), "depth": depth(prop)})
    return rows


def format_prop(f: Prop) -> str:
    """Standard infix rendering with r_{i,j} variable names."""
    if isinstance(f, PropConst):
        return str(f.value)
    if isinstance(f, PropVar):
        i, j = f.pair
        return f"r_{{{i},{j}}}"
    if isinstance(f, PropNot):
        return f"~{format_prop(f.arg)}"
    sep = " & " if isinstance(f, PropAnd) else " | "
    return "(" + sep.join(format_prop(g) for g in f.args) + ")"


# ------------------------------------------------------------ text syntax ---

_TOKEN = re.compile(r"\(|\)|[^\s()]+")

_GRAMMAR = """\
term    := NAT | SYMBOL | (+ term term) | (* term term)
formula := (= term term) | (<= term term) | (R term term)
         | (not formula) | (and formula ...) | (or formula ...)
         | (exists SYMBOL term formula) | (forall SYMBOL term formula)
"""


class FormulaSyntaxError(ValueError):
    """Raised for unparseable bounded-formula text."""


def parse_delta0(text: str) -> Delta0:
    """Parse the s-expression syntax for bounded formulas:

    term    := NAT | SYMBOL | (+ term term) | (* term term)
    formula := (= term term) | (<= term term) | (R term term)
             | (not formula) | (and formula ...) | (or formula ...)
             | (exists SYMBOL term formula) | (forall SYMBOL term formula)
    """
    tokens = _TOKEN.findall(text)
    if not tokens:
        raise FormulaSyntaxError("empty input")
    sexpr, rest = _read_sexpr(tokens)
    if rest:
        raise FormulaSyntaxError(f"trailing input near {rest[0]!r}")
    return _formula_of(sexpr)


def _read_sexpr(tokens: list[str]):
    tok, rest = tokens[0], tokens[1:]
    if tok == "(":
        items = []
        while rest and rest[0] != ")":
            item, rest = _read_sexpr(rest)
            items.append(item)
        if not rest:
            raise FormulaSyntaxError("unbalanced parentheses")
        return items, rest[1:]
    if tok == ")":
        raise FormulaSyntaxError("unexpected ')'")
    return tok, rest


def _term_of(sexpr) -> Term:
    if isinstance(sexpr, str):
        if sexpr.isdigit():
            return Num(int(sexpr))
        if re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", sexpr):
            return Var(sexpr)
        raise FormulaSyntaxError(f"bad term token {sexpr!r}")
    if len(sexpr) == 3 and sexpr[0] in ("+", "*"):
        cls = Add if sexpr[0] == "+" else Mul
        return cls(_term_of(sexpr[1]), _term_of(sexpr[2]))
    raise FormulaSyntaxError(f"bad term {sexpr!r}")


def _formula_of(sexpr) -> Delta0:
    if isinstance(sexpr, str) or not sexpr:
        raise FormulaSyntaxError(f"bad formula {sexpr!r}")
    head = sexpr[0]
    if head in ("=", "<=", "R") and len(sexpr) == 3:
        cls = {"=": Eq, "<=": Le, "R": Rel}[head]
        return cls(_term_of(sexpr[1]), _term_of(sexpr[2]))
    if head == "not" and len(sexpr) == 2:
        return Not(_formula_of(sexpr[1]))
    if head in ("and", "or") and len(sexpr) >= 2:
        cls = And if head == "and" else Or
        return cls(tuple(_formula_of(g) for g in sexpr[1:]))
    if head in ("exists", "forall") and len(sexpr) == 4:
        if not isinstance(sexpr[1], str):
            raise FormulaSyntaxError("quantifier variable must be a symbol")
        cls = Exists if head == "exists" else Forall
        return cls(sexpr[1], _term_of(sexpr[2]), _formula_of(sexpr[3]))
    raise FormulaSyntaxError(f"bad formula head {head!r}")
