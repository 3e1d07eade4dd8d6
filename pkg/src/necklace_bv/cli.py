"""``necklace-bv``: run the checks on JSON inputs and print reports.

Exit codes: 0 pass, 1 a mathematical check failed, 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import bv as BV
from . import graded as G
from . import graphs as GR
from . import master as MS
from . import necklace as NK
from . import stringy as ST
from . import suites
from .reports import finish, to_json, to_text
from .selftest import run_selftest


class InputError(ValueError):
    pass


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _algebra(doc, check=True):
    return G.algebra_from_json(doc, check=check)


def _element(neck, space, terms):
    """Necklace element from [{word: [letters], coeff}], letters as indices or names."""
    if not isinstance(terms, list):
        raise InputError("necklace elements are lists of {word, coeff}")
    out = {}
    for t in terms:
        try:
            word = tuple(x if isinstance(x, int) else space.index(x) for x in t["word"])
            c = Fraction(t["coeff"]) if not isinstance(t["coeff"], str) else G.parse_q(t["coeff"])
        except (KeyError, TypeError) as exc:
            raise InputError("necklace terms need 'word' and 'coeff'") from exc
        if any(not 0 <= x < space.dim for x in word):
            raise InputError(f"letter out of range in {list(word)}")
        out[word] = out.get(word, 0) + c
    return NK.NecklaceElement(neck, out)


def _series_from_input(doc):
    """R(α) from a category description or, for an algebra, its raised structure tensor."""
    if "objects" in doc:
        cat = ST.category_from_json(doc)
        bad = ST.noncomposable_support(cat)
        if bad:
            raise InputError(f"R contains non-composable words: {bad[:3]}")
        return cat.R
    alg = _algebra(doc, check=False)
    return suites.frobenius_series(alg)


# -- subcommands ---------------------------------------------------------------

def cmd_frobenius_check(args):
    doc = _load(args.input)
    space = G.space_from_json(doc)
    G.form_from_json(space, doc)
    try:
        alg = _algebra(doc, check=True)
    except G.StructureError as exc:
        return {"check": "frobenius", "status": "fail", "message": str(exc)}
    nondeg = alg.form.is_nondegenerate()
    rep = {"check": "frobenius", "status": "pass" if nondeg else "fail", "nondegenerate": nondeg}
    if nondeg:
        c = G.raised_structure_tensor(alg)
        rep["raised_tensor"] = [{"word": list(k), "coeff": G.format_q(v)} for k, v in sorted(c.items())]
    return rep


def _necklace_setup(doc):
    space = G.space_from_json(doc)
    form = G.form_from_json(space, doc)
    return space, NK.Necklaces(form)


def cmd_necklace_bracket(args):
    doc = _load(args.input)
    space, neck = _necklace_setup(doc)
    try:
        H, K = doc["H"], doc["G"]
    except KeyError as exc:
        raise InputError("bracket input needs 'H' and 'G'") from exc
    out = NK.bracket(_element(neck, space, H), _element(neck, space, K))
    return {"check": "necklace-bracket", "status": "pass", "result": out.to_json()}


def cmd_necklace_cobracket(args):
    doc = _load(args.input)
    space, neck = _necklace_setup(doc)
    if "H" not in doc:
        raise InputError("cobracket input needs 'H'")
    L = NK.cobracket(_element(neck, space, doc["H"]), keep_const=not doc.get("reduced", False))
    return {"check": "necklace-cobracket", "status": "pass",
            "result": [{"left": list(x), "right": list(y), "coeff": G.format_q(c)}
                       for (x, y), c in sorted(L.items())]}


def cmd_master_check(args):
    R = _series_from_input(_load(args.input))
    rep = MS.check_master_full(R, args.gmax)
    rep["tree"] = MS.check_master_tree(R[0])["status"]
    return rep


def cmd_exp_check(args):
    R = _series_from_input(_load(args.input))
    try:
        return MS.exp_closedness_check(R, args.gmax, args.truncation)
    except MS.TruncationError as exc:
        raise InputError(str(exc)) from exc


def cmd_bv_suite(args):
    N = args.truncation if args.truncation is not None else 4
    return suites.bv_suite(args.seed, args.count or 50, N)


def cmd_cyclic_oracle(args):
    qmax = args.qmax
    if args.input:
        algs = {"input": _algebra(_load(args.input))}
    else:
        algs = {"k": G.ground_field(), "dual-numbers": G.dual_numbers(3)}
    checks = [dict(suites.cyclic_comparison(a, qmax), check=name) for name, a in algs.items()]
    status = "pass" if all(c["status"] == "pass" for c in checks) else "fail"
    return {"check": "cyclic-oracle", "status": status, "checks": checks, "truncation": qmax}


def cmd_stringy_validate(args):
    cat = ST.category_from_json(_load(args.input))
    rep = ST.validate_stringy(cat, args.gmax)
    if rep["status"] == "error":
        raise InputError(f"R contains non-composable words: {rep['noncomposable'][:3]}")
    if cat.sums:
        add = ST.additivity_check(cat)
        rep["additivity"] = add
        if add["status"] != "pass":
            rep["status"] = "fail"
    return rep


def cmd_graphs_enumerate(args):
    rows = []
    for k in range(args.kmax + 1):
        for j in range(args.jmax + 1):
            b = GR.enumerate_graphs(k, j, args.colored, args.connected)
            if not b.basis and not b.killed:
                continue
            row = {"k": k, "j": j, "basis": len(b.basis), "killed": len(b.killed)}
            if args.list:
                row["graphs"] = [g.to_json() for g in b.basis]
            rows.append(row)
    return {"check": "graphs-enumerate", "status": "pass", "colored": args.colored,
            "connected": args.connected, "table": rows, "truncation": args.jmax}


def cmd_graphs_homology(args):
    parities = [args.parity] if args.parity is not None else [0, 1]
    tables, ok = [], True
    for p in parities:
        t1 = GR.diagonal_homology(p, args.jmax, Fraction(args.alpha), args.colored)
        t2 = GR.diagonal_homology(p, args.jmax, Fraction(args.alpha) + 1, args.colored)
        same = [r["rank"] for r in t1["ranks"]] == [r["rank"] for r in t2["ranks"]]
        ok = ok and same
        tables.append(dict(t1, alpha_independent=same))
    return {"check": "graphs-homology", "status": "pass" if ok else "fail", "tables": tables,
            "truncation": args.jmax}


def cmd_selftest(args):
    counts = {k: args.count for k in ("lie", "wedge", "bv")} if args.count else None
    return run_selftest(args.seed, counts)


COMMANDS = {
    "frobenius-check": (cmd_frobenius_check, "validate a Frobenius algebra table and print its raised tensor"),
    "necklace-bracket": (cmd_necklace_bracket, "bracket of two necklace elements"),
    "necklace-cobracket": (cmd_necklace_cobracket, "cobracket of a necklace element"),
    "master-check": (cmd_master_check, "master equation for an algebra's raised tensor or a category's R"),
    "exp-check": (cmd_exp_check, "δ_α-closedness of exp(R/α) in a truncated Laurent window"),
    "bv-suite": (cmd_bv_suite, "seeded BV identities"),
    "cyclic-oracle": (cmd_cyclic_oracle, "necklace deformation cohomology against the Connes complex"),
    "stringy-validate": (cmd_stringy_validate, "validate a stringy category description"),
    "graphs-enumerate": (cmd_graphs_enumerate, "fat-graph chain-group sizes"),
    "graphs-homology": (cmd_graphs_homology, "diagonal homology ranks of the graph bicomplex"),
    "selftest": (cmd_selftest, "the full seeded invariant suite"),
}

NEEDS_INPUT = {"frobenius-check", "necklace-bracket", "necklace-cobracket", "master-check", "exp-check",
               "stringy-validate"}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--fixtures", metavar="DIR", help="also write the JSON report to DIR/<subcommand>.json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--gmax", type=int, default=3)
    common.add_argument("--truncation", type=int, default=None)
    common.add_argument("--jmax", type=int, default=3)
    common.add_argument("--kmax", type=int, default=4)
    common.add_argument("--parity", type=int, choices=(0, 1), default=None)
    common.add_argument("--colored", action="store_true")

    parser = argparse.ArgumentParser(prog="necklace-bv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_)
        if name in NEEDS_INPUT:
            p.add_argument("input")
        elif name == "cyclic-oracle":
            p.add_argument("input", nargs="?")
            p.add_argument("--qmax", type=int, default=3)
        if name in ("bv-suite", "selftest"):
            p.add_argument("--count", type=int, default=None)
        if name == "graphs-enumerate":
            p.add_argument("--connected", action="store_true")
            p.add_argument("--list", action="store_true")
        if name == "graphs-homology":
            p.add_argument("--alpha", default="1")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    fn = COMMANDS[args.command][0]
    try:
        report = fn(args)
    except (InputError, G.StructureError, GR.GraphError, BV.BVError, KeyError, TypeError, ValueError) as exc:
        report = {"check": args.command, "status": "error", "message": str(exc)}
    finish(report, seed=args.seed, truncation=args.truncation)
    text = to_json(report) if args.format == "json" else to_text(report)
    sys.stdout.write(text)
    if args.fixtures:
        os.makedirs(args.fixtures, exist_ok=True)
        with open(os.path.join(args.fixtures, f"{args.command}.json"), "w", encoding="utf-8") as fh:
            fh.write(to_json(report))
    if report["status"] == "error":
        print(f"error: {report['message']}", file=sys.stderr)
        return 2
    return 0 if report["status"] == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
