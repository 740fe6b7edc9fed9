"""Command-line front end for the CNF -> cellular automaton pipeline.

Exit codes: 0 = success / affirmative verdict, 1 = negative verdict
(non-injective, reject, oracle disagreement), 2 = usage or format error.
Randomized subcommands print their seed and default to a fixed constant, so
reruns with identical inputs produce byte-identical reports.  `--out FILE`
writes a JSON report; subcommands whose result is naturally tabular (sizes,
translate --scan, color, decompose) also render a CSV and a PNG figure next
to the report.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import __version__
from .analysis import (
    BudgetExceeded,
    class_injective,
    class_injective_bruteforce,
    decide_injectivity,
    decompose,
    random_skeleton_configuration,
)
from .automaton import (
    BLUE,
    Configuration,
    ConfigFormatError,
    cell_classification,
    enumerate_states,
    local_rule_violation,
    parse_config,
    relabel,
    state_to_text,
    step,
    write_config,
)
from .catable import materialize_table, read_catable, step_with_table, write_catable
from .formula import (
    FormulaError,
    gen_onto_php,
    gen_weak_php,
    normalize_odd,
    parse_dimacs,
    write_dimacs,
)
from .inverse import (
    RefutationFormatError,
    SatisfiableFormulaError,
    make_refutation,
    read_refutation,
    size_report,
    verify_refutation,
    write_refutation,
)
from .tableau import build_table, render_table, witness_pair
from .translate import (
    FormulaSyntaxError,
    depth,
    format_prop,
    parse_delta0,
    pw_translate,
    size,
    size_depth_scan,
)

DEFAULT_SEED = 1729


# ------------------------------------------------------------------ helpers ---


def _load_formula(path: str):
    with open(path, encoding="ascii") as fh:
        return parse_dimacs(fh.read())


def _load_config(path: str) -> Configuration:
    with open(path, encoding="ascii") as fh:
        return parse_config(fh.read())


def _parse_assignment(text: str, m: int) -> tuple[int, ...]:
    if len(text) != m or any(ch not in "01" for ch in text):
        raise ValueError(f"assignment must be {m} bits of 0/1, got {text!r}")
    return tuple(int(ch) for ch in text)


def _parse_labels(text: str, cells: int) -> int:
    if len(text) != cells or any(ch not in "01" for ch in text):
        raise ValueError(f"labels must be {cells} bits of 0/1, got {text!r}")
    # leftmost character = cell (0,0), row-major
    return sum(int(ch) << k for k, ch in enumerate(text))


def _config_json(C: Configuration) -> dict:
    return {"n": C.n, "m": C.m, "text": write_config(C)}


def _write_report(args, command: str, seed, result, renderer=None) -> None:
    if not getattr(args, "out", None):
        return
    arguments = {
        k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out")
    }
    report = {
        "tool": "cnf2ca",
        "version": __version__,
        "command": command,
        "seed": seed,
        "arguments": arguments,
        "result": result,
    }
    with open(args.out, "w", encoding="ascii") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if renderer is not None:
        renderer(os.path.splitext(args.out)[0])


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


# -------------------------------------------------------------- subcommands ---


def cmd_compile(args) -> int:
    phi = normalize_odd(_load_formula(args.cnf))
    states = enumerate_states(phi.n, phi.m)
    rows = states.size**5
    bits = rows * max(1, (states.size - 1).bit_length())
    print(f"clauses (normalized): {phi.n}")
    print(f"variables: {phi.m}")
    print(f"states: {states.size}")
    print(f"state-set digest: {states.digest()}")
    print(f"table rows: {rows}")
    print(f"table bits: {bits}")
    result = {
        "n": phi.n,
        "m": phi.m,
        "size": states.size,
        "digest": states.digest(),
        "rows": rows,
        "bits": bits,
        "encoded": None,
    }
    if args.encode:
        table = materialize_table(phi, budget_rows=args.budget_rows)
        write_catable(table, args.encode)
        print(f"table written: {args.encode} ({table.bit_length} bits)")
        result["encoded"] = args.encode
    _write_report(args, "compile", None, result)
    return 0


def cmd_table(args) -> int:
    phi = normalize_odd(_load_formula(args.cnf))
    a = _parse_assignment(args.assignment, phi.m)
    C = build_table(phi, a)
    if args.labels is not None:
        C = relabel(C, _parse_labels(args.labels, (phi.n + 1) * (phi.m + 2)))
    sys.stdout.write(render_table(C))
    if args.config:
        with open(args.config, "w", encoding="ascii") as fh:
            fh.write(write_config(C))
    _write_report(
        args, "table", None, {"assignment": list(a), "config": _config_json(C)}
    )
    return 0


def cmd_step(args) -> int:
    phi = normalize_odd(_load_formula(args.cnf))
    C = _load_config(args.config)
    if args.catable:
        table = read_catable(args.catable)
        D = step_with_table(table, C)
    else:
        D = step(phi, C)
    sys.stdout.write(render_table(D))
    if args.save:
        with open(args.save, "w", encoding="ascii") as fh:
            fh.write(write_config(D))
    _write_report(args, "step", None, {"image": _config_json(D)})
    return 0


def cmd_color(args) -> int:
    phi = normalize_odd(_load_formula(args.cnf))
    C = _load_config(args.config)
    colors, successors = cell_classification(phi, C)
    reasons = {}
    for pos in C.positions():
        r, c = pos
        if colors[r][c] == BLUE:
            continue
        why = local_rule_violation(phi, C, pos)
        if why is None:
            why = "output-pc"  # output cell with pc != 1
        reasons[pos] = why
    for r, row in enumerate(colors):
        print("".join("b" if col == BLUE else "r" for col in row))
    for pos in sorted(reasons):
        print(f"red {pos[0]},{pos[1]}: {reasons[pos]}")

    def render(stem: str) -> None:
        rows = [
            [r, c, colors[r][c], reasons.get((r, c), "")]
            for r, c in C.positions()
        ]
        _write_csv(stem + ".csv", ["row", "col", "color", "violation"], rows)
        plt = _pyplot()
        fig, ax = plt.subplots(figsize=(1.2 * (C.m + 2) + 1, 1.2 * (C.n + 1) + 1))
        data = [[0 if col == BLUE else 1 for col in row] for row in colors]
        ax.imshow(data, cmap="coolwarm", vmin=0, vmax=1)
        for r, c in C.positions():
            ax.text(c, r, "b" if colors[r][c] == BLUE else "r",
                    ha="center", va="center", color="white")
        ax.set_xlabel("j")
        ax.set_ylabel("i")
        ax.set_title("cell colors")
        fig.savefig(stem + ".png", dpi=120, bbox_inches="tight")
        plt.close(fig)

    _write_report(
        args,
        "color",
        None,
        {
            "colors": colors,
            "violations": {f"{r},{c}": why for (r, c), why in sorted(reasons.items())},
            "successors": {
                f"{r},{c}": list(successors[(r, c)]) for r, c in sorted(successors)
            },
        },
        renderer=render,
    )
    return 0


def cmd_decompose(args) -> int:
    phi = normalize_odd(_load_formula(args.cnf))
    C = _load_config(args.config)
    dec = decompose(phi, C)
    print(f"chains: {len(dec.chains)}")
    for k, chain in enumerate(dec.chains):
        print(f"  chain {k}: " + " -> ".join(f"({r},{c})" for r, c in chain))
    if dec.cycle is not None:
        print("cycle: " + " -> ".join(f"({r},{c})" for r, c in dec.cycle))
    else:
        print("cycle: none")
    print("isolated red: " + (" ".join(f"({r},{c})" for r, c in dec.isolated) or "none"))

    roles = {}
    for k, chain in enumerate(dec.chains):
        for at, pos in enumerate(chain):
            roles[pos] = (f"chain-{k}", at)
    for at, pos in enumerate(dec.cycle or ()):
        roles[pos] = ("cycle", at)
    for pos in dec.isolated:
        roles[pos] = ("isolated", 0)

    def render(stem: str) -> None:
        rows = [[r, c, roles[(r, c)][0], roles[(r, c)][1]] for r, c in C.positions()]
        _write_csv(stem + ".csv", ["row", "col", "role", "position"], rows)
        plt = _pyplot()
        fig, ax = plt.subplots(figsize=(1.2 * (C.m + 2) + 1, 1.2 * (C.n + 1) + 1))
        code = {"cycle": 2, "isolated": 0}
        data = [
            [code.get(roles[(r, c)][0], 1) for c in range(C.m + 2)]
            for r in range(C.n + 1)
        ]
        ax.imshow(data, cmap="viridis", vmin=0, vmax=2)
        _, successors = cell_classification(phi, C)
        for (r, c), (r2, c2) in successors.items():
            ax.annotate(
                "",
                xy=(c2, r2),
                xytext=(c, r),
                arrowprops={"arrowstyle": "->", "color": "white"},
            )
        for r, c in C.positions():
            ax.text(c, r + 0.35, roles[(r, c)][0], ha="center", va="center",
                    color="white", fontsize=6)
        ax.set_xlabel("j")
        ax.set_ylabel("i")
        ax.set_title("successor decomposition")
        fig.savefig(stem + ".png", dpi=120, bbox_inches="tight")
        plt.close(fig)

    _write_report(
        args,
        "decompose",
        None,
        {
            "chains": [[list(p) for p in chain] for chain in dec.chains],
            "cycle": [list(p) for p in dec.cycle] if dec.cycle is not None else None,
            "isolated": [list(p) for p in dec.isolated],
        },
        renderer=render,
    )
    return 0


def cmd_decide(args) -> int:
    phi = _load_formula(args.cnf)
    res = decide_injectivity(phi, budget=args.budget)
    result = {
        "verdict": "injective" if res.injective else "non_injective",
        "n": res.formula.n,
        "m": res.formula.m,
        "assignment": list(res.assignment) if res.assignment else None,
        "witness": None,
    }
    if res.injective:
        print("injective")
    else:
        print(f"non_injective (satisfied by {''.join(map(str, res.assignment))})")
        C1, C2 = res.witness
        result["witness"] = {"first": _config_json(C1), "second": _config_json(C2)}
    _write_report(args, "decide", None, result)
    return 0 if res.injective else 1


def cmd_witness(args) -> int:
    phi = normalize_odd(_load_formula(args.cnf))
    a = _parse_assignment(args.assignment, phi.m)
    C1, C2 = witness_pair(phi, a)
    img1, img2 = step(phi, C1), step(phi, C2)
    table = build_table(phi, a)
    verified = C1 != C2 and img1 == img2 == table
    assert verified, "witness pair failed the definitional re-check"
    first = args.prefix + ".c1.txt"
    second = args.prefix + ".c2.txt"
    with open(first, "w", encoding="ascii") as fh:
        fh.write(write_config(C1))
    with open(second, "w", encoding="ascii") as fh:
        fh.write(write_config(C2))
    print(f"witness configurations: {first} {second}")
    print("verified collision: step(C1) = step(C2) = Table(a)")
    _write_report(
        args,
        "witness",
        None,
        {
            "assignment": list(a),
            "files": [first, second],
            "verified": True,
            "image": _config_json(img1),
        },
    )
    return 0


def cmd_oracle(args) -> int:
    phi = normalize_odd(_load_formula(args.cnf))
    states = enumerate_states(phi.n, phi.m)
    cells = (phi.n + 1) * (phi.m + 2)
    if cells > args.budget:
        raise BudgetExceeded(
            f"{cells} cells exceed the {args.budget}-cell brute-force budget"
        )
    import random

    rng = random.Random(args.seed)
    print(f"seed {args.seed}")
    disagreements = 0
    for _ in range(args.samples):
        C = random_skeleton_configuration(states, rng)
        if class_injective(phi, C) != class_injective_bruteforce(phi, C, budget=cells):
            disagreements += 1
    print(f"agreement {args.samples - disagreements}/{args.samples}")
    _write_report(
        args,
        "oracle",
        args.seed,
        {
            "samples": args.samples,
            "disagreements": disagreements,
            "all_agree": disagreements == 0,
        },
    )
    return 0 if disagreements == 0 else 1


def cmd_invert(args) -> int:
    phi = _load_formula(args.cnf)
    try:
        ref = make_refutation(phi, t=args.t)
    except SatisfiableFormulaError as exc:
        print(
            f"no inverse: satisfied by "
            f"{''.join(map(str, exc.assignment))}, "
            f"cycle length {len(exc.cycle)}"
        )
        _write_report(
            args,
            "invert",
            None,
            {
                "invertible": False,
                "assignment": list(exc.assignment),
                "cycle_length": len(exc.cycle),
            },
        )
        return 1
    B = ref.B
    print(f"states: {B.states.size}  window: {B.mu} offsets")
    print(f"declared t: {len(str(ref.t))} decimal digits")
    result = {
        "invertible": True,
        "n": B.states.n,
        "m": B.states.m,
        "size": B.states.size,
        "mu": B.mu,
        "t": str(ref.t),
        "kind": B.kind,
        "file": None,
    }
    if args.refutation:
        write_refutation(ref, args.refutation)
        print(f"refutation written: {args.refutation}")
        result["file"] = args.refutation
    _write_report(args, "invert", None, result)
    return 0


def cmd_verify(args) -> int:
    ref = read_refutation(args.refutation)
    print(f"seed {args.seed}")
    verdict = verify_refutation(ref, samples=args.samples, seed=args.seed)
    result = {
        "accepted": verdict.accepted,
        "reason": verdict.reason,
        "mode": verdict.local.mode if verdict.local else None,
        "configs_checked": verdict.local.configs_checked if verdict.local else 0,
        "tuples_checked": verdict.local.tuples_checked if verdict.local else 0,
        "counterexample": None,
    }
    if verdict.accepted:
        mode = verdict.local.mode
        print(f"accept ({mode}, {verdict.local.tuples_checked} cell instances)")
    else:
        print(f"reject ({verdict.reason})")
        cex = verdict.counterexample
        if cex is not None:
            print(f"counterexample at cell {cex.cell}:")
            print(f"  expected {state_to_text(cex.expected)}")
            print(f"  got      {state_to_text(cex.got)}")
            result["counterexample"] = {
                "cell": list(cex.cell),
                "config": _config_json(cex.config),
                "expected": state_to_text(cex.expected),
                "got": state_to_text(cex.got),
            }
    _write_report(args, "verify", args.seed, result)
    return 0 if verdict.accepted else 1


def cmd_phpgen(args) -> int:
    phi = gen_weak_php(args.k) if args.weak else gen_onto_php(args.k)
    text = write_dimacs(phi)
    if args.cnf:
        with open(args.cnf, "w", encoding="ascii") as fh:
            fh.write(text)
        print(f"written: {args.cnf} ({phi.n} clauses, {phi.m} variables)")
    else:
        sys.stdout.write(text)
    _write_report(
        args, "phpgen", None, {"k": args.k, "weak": args.weak, "n": phi.n, "m": phi.m}
    )
    return 0


def cmd_translate(args) -> int:
    f = parse_delta0(args.expr)
    env = {}
    if args.env:
        for part in args.env.split(","):
            name, _, value = part.partition("=")
            if not name or not value.lstrip("-").isdigit():
                raise ValueError(f"bad --env entry {part!r} (want name=number)")
            env[name.strip()] = int(value)
    if args.scan:
        var, lo, hi = args.scan[0], int(args.scan[1]), int(args.scan[2])
        rows = size_depth_scan(f, var, range(lo, hi + 1), env)
        for row in rows:
            print(f"{var}={row[var]} size={row['size']} depth={row['depth']}")

        def render(stem: str) -> None:
            _write_csv(
                stem + ".csv",
                [var, "size", "depth"],
                [[row[var], row["size"], row["depth"]] for row in rows],
            )
            plt = _pyplot()
            fig, ax = plt.subplots(figsize=(7, 4))
            xs = [row[var] for row in rows]
            ax.plot(xs, [row["size"] for row in rows], marker="o", label="size")
            ax.set_xlabel(var)
            ax.set_ylabel("size")
            ax2 = ax.twinx()
            ax2.plot(
                xs,
                [row["depth"] for row in rows],
                marker="s",
                color="tab:red",
                label="depth",
            )
            ax2.set_ylabel("depth")
            fig.legend(loc="upper left")
            ax.set_title("translation size and depth")
            fig.savefig(stem + ".png", dpi=120, bbox_inches="tight")
            plt.close(fig)

        _write_report(args, "translate", None, {"scan": rows}, renderer=render)
        return 0
    p = pw_translate(f, env)
    print(format_prop(p))
    print(f"size {size(p)}  depth {depth(p)}")
    _write_report(
        args,
        "translate",
        None,
        {"prop": format_prop(p), "size": size(p), "depth": depth(p)},
    )
    return 0


def cmd_sizes(args) -> int:
    rows = size_report(args.k_max)
    header = (
        f"{'k':>3} {'n':>6} {'m':>5} {'|S|':>10} {'mu':>8} "
        f"{'cells':>7} {'log10(bits)':>12} {'log10(gate)':>12}"
    )
    print(header)
    for row in rows:
        print(
            f"{row.k:>3} {row.n:>6} {row.m:>5} {row.size:>10} {row.mu:>8} "
            f"{row.cells:>7} {row.table_bits_log10:>12.1f} {row.gate_log10:>12.1f}"
        )

    def render(stem: str) -> None:
        _write_csv(
            stem + ".csv",
            [
                "k", "n_raw", "n", "m", "size", "mu", "cells",
                "table_bits_expr", "table_bits_log10", "gate_expr", "gate_log10",
            ],
            [
                [
                    row.k, row.n_raw, row.n, row.m, row.size, row.mu, row.cells,
                    row.table_bits_expr, row.table_bits_log10,
                    row.gate_expr, row.gate_log10,
                ]
                for row in rows
            ],
        )
        plt = _pyplot()
        fig, ax = plt.subplots(figsize=(7, 4))
        ks = [row.k for row in rows]
        ax.plot(ks, [row.table_bits_log10 for row in rows], marker="o",
                label="table bits")
        ax.plot(ks, [row.gate_log10 for row in rows], marker="s",
                label="size gate")
        ax.set_xlabel("k")
        ax.set_ylabel("log10(bits)")
        ax.legend()
        ax.set_title("pigeonhole construction growth")
        fig.savefig(stem + ".png", dpi=120, bbox_inches="tight")
        plt.close(fig)

    _write_report(
        args,
        "sizes",
        None,
        {
            "rows": [
                {
                    "k": row.k,
                    "n_raw": row.n_raw,
                    "n": row.n,
                    "m": row.m,
                    "size": row.size,
                    "mu": row.mu,
                    "cells": row.cells,
                    "table_bits_expr": row.table_bits_expr,
                    "table_bits_log10": row.table_bits_log10,
                    "gate_expr": row.gate_expr,
                    "gate_log10": row.gate_log10,
                }
                for row in rows
            ]
        },
        renderer=render,
    )
    return 0


# ------------------------------------------------------------------- parser ---


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cnf2ca",
        description="CNF-to-cellular-automaton reduction compiler and analyzer",
    )
    parser.add_argument("--version", action="version", version=f"cnf2ca {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("compile", help="summarize A_phi; optionally encode its table")
    p.add_argument("cnf", help="DIMACS file")
    p.add_argument("--encode", metavar="FILE", help="write the binary table encoding")
    p.add_argument("--budget-rows", type=int, default=2**28)
    p.add_argument("--out", metavar="FILE", help="JSON report")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("table", help="emit the computation table of an assignment")
    p.add_argument("cnf")
    p.add_argument("--assignment", required=True, metavar="BITS")
    p.add_argument("--labels", metavar="BITS", help="row-major label bits")
    p.add_argument("--config", metavar="FILE", help="also write the config file")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("step", help="apply A_phi once to a configuration")
    p.add_argument("cnf")
    p.add_argument("config")
    p.add_argument("--catable", metavar="FILE", help="use an encoded table")
    p.add_argument("--save", metavar="FILE", help="write the image config")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_step)

    p = sub.add_parser("color", help="blue/red classification of a configuration")
    p.add_argument("cnf")
    p.add_argument("config")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("decompose", help="chains/cycle/isolated decomposition")
    p.add_argument("cnf")
    p.add_argument("config")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("decide", help="decide injectivity of A_phi")
    p.add_argument("cnf")
    p.add_argument("--budget", type=int, default=24, metavar="VARS")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("witness", help="write a verified colliding pair")
    p.add_argument("cnf")
    p.add_argument("--assignment", required=True, metavar="BITS")
    p.add_argument("--prefix", default="witness", metavar="PATH")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("oracle", help="theorem-vs-bruteforce agreement run")
    p.add_argument("cnf")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--budget", type=int, default=24, metavar="CELLS")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("invert", help="synthesize an inverse automaton / refutation")
    p.add_argument("cnf")
    p.add_argument("--refutation", metavar="FILE", help="write the refutation file")
    p.add_argument("--t", type=int, default=None, help="declared size (default gate+1)")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("verify", help="verify a refutation file")
    p.add_argument("refutation")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("phpgen", help="generate a pigeonhole CNF")
    p.add_argument("k", type=int)
    p.add_argument("--weak", action="store_true", help="drop the onto clauses")
    p.add_argument("--cnf", metavar="FILE", help="write instead of printing")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_phpgen)

    p = sub.add_parser("translate", help="Paris-Wilkie propositional translation")
    p.add_argument("expr", help="s-expression, e.g. '(exists y x (R x y))'")
    p.add_argument("--env", metavar="x=2,y=3", help="values for free variables")
    p.add_argument("--scan", nargs=3, metavar=("VAR", "LO", "HI"),
                   help="tabulate size/depth over a range")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("sizes", help="construction sizes for the pigeonhole family")
    p.add_argument("k_max", type=int)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_sizes)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        FormulaError,
        ConfigFormatError,
        RefutationFormatError,
        FormulaSyntaxError,
        BudgetExceeded,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
