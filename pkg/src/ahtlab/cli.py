"""Command-line entry point.

Exit codes: 0 success, 1 no witness / failed verification, 2 usage or
parse error, 3 search budget exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

from . import bits
from .certificates import (
    Certificate,
    aht_certificate,
    hil_certificate,
    ipt2_certificate,
    read_certificate,
    rt2_certificate,
    verify_certificate,
    write_certificate,
)
from .coloring import Coloring, PairColoring, load_word, parse_pair_table, parse_point_table
from .errors import AhtLabError, BudgetError, CertificateFormatError, ExprSyntaxError, NoWitnessFound, SearchBudgetExceeded
from .reductions import chain_rt2_to_ipt2, reduce_aht_to_ipt2, reduce_rt2_to_aht, word_highest_letter
from .solvers import SearchBudget, default_threads, solve_aht, solve_hil, solve_ipt2, solve_rt2

EXIT_OK, EXIT_NONE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_PAIR_BOUND = 16


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _nonnegative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


def load_coloring(uri: str, kind: str, colors: int | None, bound: int | None):
    """Build a coloring from ``expr:SRC`` or ``table:PATH``.

    ``kind`` is ``point``, ``pair`` or ``set``; for ``set`` the bound is the base.
    """
    scheme, sep, rest = uri.partition(":")
    if not sep or scheme not in ("expr", "table"):
        raise UsageError(f"coloring must be expr:SRC or table:PATH, got {uri!r}")
    if scheme == "expr":
        if colors is None:
            raise UsageError("--colors is required for expr: colorings")
        if bound is None:
            raise UsageError("--bound is required for expr: colorings")
        if kind == "pair":
            return PairColoring.from_expr(rest, colors, bound)
        return Coloring.from_expr(rest, colors, bound, kind=kind)
    try:
        text = Path(rest).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read table: {exc}") from None
    try:
        obj = parse_pair_table(text) if kind == "pair" else parse_point_table(text, kind=kind)
    except ValueError as exc:
        raise UsageError(f"bad table file {rest}: {exc}") from None
    if colors is not None and colors != obj.num_colors:
        raise UsageError(f"--colors {colors} disagrees with the table header k={obj.num_colors}")
    return obj


def _save(cert: Certificate, out: str | None) -> Path:
    text = write_certificate(cert)
    path = Path(out) if out else Path(f"{cert.principle.lower()}-{hashlib.sha256(text.encode()).hexdigest()[:12]}.cert")
    path.write_text(text)
    return path


def _emit(fields: list[tuple[str, object]], cert: Certificate, out: str | None) -> int:
    if cert.status != "verified":
        print(f"error: produced certificate failed verification: {verify_certificate(cert)}", file=sys.stderr)
        return EXIT_NONE
    for key, value in fields:
        if isinstance(value, (list, tuple)):
            value = ",".join(map(str, value))
        print(f"{key} = {value}")
    print(f"certificate = {_save(cert, out)}")
    return EXIT_OK


# -- util -------------------------------------------------------------------


def cmd_util(args) -> int:
    if args.op in ("lam", "mu"):
        fn = bits.lam if args.op == "lam" else bits.mu
        for n in args.values:
            print(fn(n))
    elif args.op == "apart":
        print("true" if bits.is_apart(args.list) else "false")
    else:
        # grouped by run length, shortest first
        top = len(args.list) if args.max is None else min(args.max, len(args.list))
        sums = [r.sum for t in range(args.min, top + 1) for r in bits.adjacent_sums(args.list, t, t)]
        print(" ".join(map(str, sums)))
    return EXIT_OK


# -- solve ------------------------------------------------------------------


def cmd_solve(args) -> int:
    kind = {"aht": "point", "rt2": "pair", "ipt2": "pair", "hil": "set"}[args.principle]
    obj = load_coloring(args.coloring, kind, args.colors, args.bound)
    if args.no_apart and args.principle != "aht":
        raise UsageError("--no-apart only applies to aht")
    if args.bound is None:
        bound = obj.source.bound
    else:
        bound = args.bound
    threads = args.threads or default_threads()
    budget = SearchBudget(bound, args.size, args.node_limit, not args.no_apart, threads)
    if args.principle == "aht":
        w = solve_aht(obj, budget)
        if w is None:
            return _none()
        cert = aht_certificate(obj, w, search_bound=bound, require_apart=budget.require_apart)
        return _emit([("H", w.H), ("color", w.color)], cert, args.out)
    if args.principle == "rt2":
        w = solve_rt2(obj, budget)
        if w is None:
            return _none()
        return _emit([("J", w.J), ("color", w.color)], rt2_certificate(obj, w, search_bound=bound), args.out)
    if args.principle == "ipt2":
        w = solve_ipt2(obj, budget)
        if w is None:
            return _none()
        return _emit([("H1", w.H1), ("H2", w.H2), ("color", w.color)], ipt2_certificate(obj, w, search_bound=bound), args.out)
    w = solve_hil(obj, budget)
    if w is None:
        return _none()
    sets = " ".join("{" + ",".join(map(str, sorted(s))) + "}" for s in w.sets())
    return _emit([("X", w.X), ("sets", sets), ("color", w.color)], hil_certificate(obj, w), args.out)


def _none() -> int:
    print("none within bound")
    return EXIT_NONE


# -- reduce -----------------------------------------------------------------


def cmd_reduce(args) -> int:
    threads = args.threads or default_threads()
    if args.pipeline == "word":
        if args.word is None:
            raise UsageError("reduce word needs --word PATH")
        try:
            w = load_word(args.word)
        except (OSError, ValueError) as exc:
            raise UsageError(f"bad word file {args.word}: {exc}") from None
        budget = SearchBudget(args.bound, args.size, args.node_limit, True, threads) if args.bound else None
        if budget is None and (args.node_limit is not None or threads > 1):
            from .reductions import word_search_bound

            budget = SearchBudget(word_search_bound(w, args.size), args.size, args.node_limit, True, threads)
        letter, aht, cert = word_highest_letter(w, args.size, budget)
        claim = cert.witness["claim"]
        return _emit([("letter", letter), ("H", aht.H), ("claim", claim)], cert, args.out)

    if args.coloring is None:
        raise UsageError(f"reduce {args.pipeline} needs --coloring")
    if args.pipeline == "rt2-to-aht":
        rt2_bound = args.rt2_bound or 12
        bound = args.bound if args.bound is not None else (1 << rt2_bound) - 2
        c = load_coloring(args.coloring, "point", args.colors, bound)
        aht, cert = reduce_rt2_to_aht(c, args.size, rt2_bound, node_limit=args.node_limit, threads=threads)
        return _emit([("J", cert.witness["J"]), ("H", aht.H), ("color", aht.color)], cert, args.out)

    f = load_coloring(args.coloring, "pair", args.colors, args.bound or DEFAULT_PAIR_BOUND)
    if args.pipeline == "chain":
        ipt, cert = chain_rt2_to_ipt2(f, args.size, args.rt2_bound, node_limit=args.node_limit, threads=threads)
    else:
        budget = None
        if args.aht_stage == "search" or args.node_limit is not None:
            aht_bound = args.aht_bound or min((1 << f.bound) - 1, bits.max_value())
            budget = SearchBudget(aht_bound, args.size, args.node_limit, True, threads)
        ipt, cert = reduce_aht_to_ipt2(
            f, args.size, budget, aht_stage=args.aht_stage, rt2_bound=args.rt2_bound, witness=args.aht_witness,
        )
    fields = [("H", cert.witness["H"]), ("H1", ipt.H1), ("H2", ipt.H2), ("color", ipt.color)]
    return _emit(fields, cert, args.out)


# -- verify -----------------------------------------------------------------


def cmd_verify(args) -> int:
    try:
        text = Path(args.path).read_text()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        cert = read_certificate(text)
    except CertificateFormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    verdict = verify_certificate(cert)
    print(verdict)
    return EXIT_OK if verdict.ok else EXIT_NONE


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ahtlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    util = sub.add_parser("util", help="bit-level utilities")
    usub = util.add_subparsers(dest="op", required=True)
    for op in ("lam", "mu"):
        p = usub.add_parser(op)
        p.add_argument("values", type=_positive, nargs="+")
    p = usub.add_parser("apart")
    p.add_argument("list", type=_int_list)
    p = usub.add_parser("as")
    p.add_argument("list", type=_int_list)
    p.add_argument("--min", type=_positive, default=1)
    p.add_argument("--max", type=_positive, default=None)
    util.set_defaults(func=cmd_util)

    def common(p):
        p.add_argument("--colors", type=_positive)
        p.add_argument("--coloring", help="expr:SRC or table:PATH")
        p.add_argument("--size", type=_positive, required=True)
        p.add_argument("--bound", type=_positive)
        p.add_argument("--node-limit", type=_nonnegative)
        p.add_argument("--threads", type=_positive)
        p.add_argument("--out")

    solve = sub.add_parser("solve", help="search for the least witness")
    solve.add_argument("principle", choices=("aht", "rt2", "ipt2", "hil"))
    common(solve)
    solve.add_argument("--no-apart", action="store_true")
    solve.set_defaults(func=cmd_solve)

    reduce = sub.add_parser("reduce", help="run a reduction pipeline")
    reduce.add_argument("pipeline", choices=("rt2-to-aht", "aht-to-ipt2", "chain", "word"))
    common(reduce)
    reduce.add_argument("--rt2-bound", type=_positive)
    reduce.add_argument("--aht-stage", choices=("search", "chain"), default="search")
    reduce.add_argument("--aht-bound", type=_positive)
    reduce.add_argument("--aht-witness", type=_int_list)
    reduce.add_argument("--word")
    reduce.set_defaults(func=cmd_reduce)

    verify = sub.add_parser("verify", help="re-check a certificate")
    verify.add_argument("path")
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SearchBudgetExceeded as exc:
        stage = getattr(exc, "stage", None)
        print(f"{exc}{f' (stage {stage})' if stage else ''}", file=sys.stderr)
        return EXIT_BUDGET
    except NoWitnessFound as exc:
        print("none within bound")
        print(f"stage {exc}", file=sys.stderr)
        return EXIT_NONE
    except ExprSyntaxError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, BudgetError, AhtLabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
