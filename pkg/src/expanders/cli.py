"""Command-line interface.

Subcommands: sample, certify, mc-tail, bound, pt-curve, algo-pt, feasible,
rip1. Results go to stdout or --out as CSV with 17-significant-digit
numbers, LF endings, and empty cells for unsolved points; identical
invocations produce byte-identical output. Exit codes: 0 success, 1
validation error, 2 runtime error (budget exceeded, unsolved under
--strict).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Sequence

import numpy as np

from . import bounds, ensemble, phase_transition as pt
from .domain import BETA_MODES, BoundConfig, ExpanderParams, ProblemSize, ValidationError
from .ensemble import BudgetExceededError, Seed
from .splitting import constrained_chain, expected_chain


class _Parser(argparse.ArgumentParser):
    # validation failures (including unknown flags) exit 1, not argparse's 2
    def error(self, message: str) -> None:  # type: ignore[override]
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(x) -> str:
    value = float(x)
    if math.isnan(value):
        return ""
    return format(value, ".17g")


def _emit(rows: list[list[str]], out: str | None) -> None:
    text = "\n".join(",".join(row) for row in rows) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def _note(message: str) -> None:
    print(f"note: {message}", file=sys.stderr)


def _threads(value: int) -> int:
    return value if value > 0 else (os.cpu_count() or 1)


def _config_from(args: argparse.Namespace) -> BoundConfig:
    return BoundConfig(
        eta=args.eta,
        alpha=args.alpha,
        c_n=args.cn,
        nu=args.nu,
        beta_mode=args.beta_mode,
    )


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--eta", type=float, default=1.0)
    parser.add_argument("--alpha", type=float, default=1.0)
    parser.add_argument("--cn", type=float, default=2.0)
    parser.add_argument("--nu", type=float, default=1.0)
    parser.add_argument("--beta-mode", choices=BETA_MODES, default="approx_one_plus_eps")


def _build_parser() -> _Parser:
    parser = _Parser(prog="expanders", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw a matrix and write its text form")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=int, default=None, help="sparsity recorded for validation (default d)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("certify", help="exhaustively certify expansion")
    p.add_argument("--matrix", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--top-level-only", action="store_true")
    p.add_argument("--out", default=None)

    p = sub.add_parser("mc-tail", help="Monte Carlo small-neighborhood estimate")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--N", type=int, default=None, help="required with --all-sets")
    p.add_argument("--a-s", dest="a_s", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--all-sets", action="store_true")
    p.add_argument("--threads", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("bound", help="evaluate a probability bound")
    p.add_argument(
        "--kind",
        choices=("dyadic-old", "dyadic-new", "epsilon", "union"),
        required=True,
    )
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--chain", choices=("expected", "constrained"), default="constrained")
    p.add_argument("--beta", type=float, default=None, help="override the chain constant")
    _add_config_flags(p)
    p.add_argument("--out", default=None)

    p = sub.add_parser("pt-curve", help="construction phase-transition curve(s)")
    p.add_argument("--kind", choices=("bt", "bi", "bm", "all"), required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    _add_config_flags(p)
    p.add_argument("--classify", default=None, metavar="DELTA,RHO",
                   help="classify one point against the curve instead of emitting it")
    p.add_argument("--gamma", type=float, default=0.01)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--out", default=None)

    p = sub.add_parser("algo-pt", help="algorithm-comparison phase transitions")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--e", dest="e_slack", type=float, default=1e-15)
    p.add_argument("--ssmp-k", choices=("3", "2+e"), default="3")
    _add_config_flags(p)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--out", default=None)

    p = sub.add_parser("feasible", help="finite-size feasibility of (s, n, N, d, eps)")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    _add_config_flags(p)
    p.add_argument("--out", default=None)

    p = sub.add_parser("rip1", help="empirical RIP-1 ratio range")
    p.add_argument("--matrix", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=0)
    p.add_argument("--out", default=None)

    return parser


def _cmd_sample(args) -> int:
    s = args.s if args.s is not None else args.d
    size = ProblemSize(s=s, n=args.n, N=args.N, d=args.d)
    matrix = ensemble.sample(size, Seed(args.seed))
    text = ensemble.to_text(matrix)
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    return 0


def _cmd_certify(args) -> int:
    matrix = ensemble.read_matrix_file(args.matrix)
    params = ExpanderParams(
        ProblemSize(s=args.s, n=matrix.n, N=matrix.N, d=matrix.d), args.eps
    )
    report = ensemble.certify(matrix, params, top_level_only=args.top_level_only)
    rows = [
        ["is_expander", "worst_ratio", "sets_checked", "worst_set"],
        [
            "true" if report.is_expander else "false",
            _fmt(report.worst_ratio),
            str(report.sets_checked),
            " ".join(str(j) for j in report.worst_set),
        ],
    ]
    _emit(rows, args.out)
    return 0


def _cmd_mc_tail(args) -> int:
    N = args.N
    if N is None:
        if args.all_sets:
            raise ValidationError("--N is required with --all-sets")
        N = max(args.n, args.s)
    size = ProblemSize(s=args.s, n=args.n, N=N, d=args.d)
    estimate = ensemble.mc_tail(
        size,
        args.a_s,
        fixed_set=not args.all_sets,
        trials=args.trials,
        seed=Seed(args.seed),
        threads=_threads(args.threads),
    )
    rows = [
        ["p_hat", "std_err", "trials", "successes"],
        [_fmt(estimate.p_hat), _fmt(estimate.std_err), str(estimate.trials), str(estimate.successes)],
    ]
    _emit(rows, args.out)
    return 0


def _cmd_bound(args) -> int:
    size = ProblemSize(s=args.s, n=args.n, N=args.N, d=args.d)
    params = ExpanderParams(size, args.eps)
    config = _config_from(args)
    s_eval = bounds.ceil_pow2(args.s)
    if s_eval != args.s:
        _note(f"s rounded up to {s_eval} (next power of two)")
    if args.kind in ("dyadic-old", "dyadic-new"):
        if args.chain == "expected":
            chain = expected_chain(args.d, args.n, s_eval)
        else:
            beta = args.beta if args.beta is not None else bounds.beta_value(
                config, args.eps, args.d
            )
            chain = constrained_chain(args.d, args.n, s_eval, beta)
        result = bounds.prob_bound_dyadic(params, chain, version=args.kind.split("-")[1])
    elif args.kind == "epsilon":
        result = bounds.prob_bound_epsilon(params, config)
    else:
        result = bounds.prob_bound_union(params, config)
    rows = [
        ["poly_factor", "exponent", "log_prob_bound", "probability"],
        [
            _fmt(result.poly_factor),
            _fmt(result.exponent),
            _fmt(result.log_prob_bound),
            _fmt(result.probability),
        ],
    ]
    _emit(rows, args.out)
    return 0


def _curves_to_rows(curves: Sequence[pt.PTCurve]) -> list[list[str]]:
    rows = [["delta"] + [c.label for c in curves]]
    for i in range(len(pt.DELTA_GRID)):
        row = [_fmt(pt.DELTA_GRID[i])]
        row.extend(_fmt(c.rhos[i]) for c in curves)
        rows.append(row)
    return rows


def _cmd_pt_curve(args) -> int:
    config = _config_from(args)
    if args.classify is not None:
        delta_str, rho_str = args.classify.split(",")
        delta, rho = float(delta_str), float(rho_str)
        kind = args.kind if args.kind != "all" else "bt"
        f = pt._residual_for(kind, args.d, args.eps, config)
        root = pt.solve_rho(f, delta)
        if not root.solved:
            print("error: curve unsolved at requested delta", file=sys.stderr)
            return 2
        below = pt.is_safely_below(rho, root.rho, gamma=args.gamma)
        rows = [
            ["delta", "rho", "rho_curve", "safely_below"],
            [_fmt(delta), _fmt(rho), _fmt(root.rho), "true" if below else "false"],
        ]
        _emit(rows, args.out)
        return 0
    if args.kind == "all":
        curves = [pt.curve(kind, args.d, args.eps, config) for kind in pt.CURVE_KINDS]
        rows = _curves_to_rows(curves)
        unsolved = any(not bool(flag) for c in curves for flag in c.solved)
    else:
        one = pt.curve(args.kind, args.d, args.eps, config)
        rows = [["delta", "rho", "residual", "iters"]]
        for i in range(len(one.deltas)):
            solved = bool(one.solved[i])
            rows.append(
                [
                    _fmt(one.deltas[i]),
                    _fmt(one.rhos[i]),
                    _fmt(one.residuals[i]) if solved else "",
                    str(int(one.iterations[i])),
                ]
            )
        unsolved = not bool(one.solved.all())
    _emit(rows, args.out)
    if args.strict and unsolved:
        print("error: unsolved grid points under --strict", file=sys.stderr)
        return 2
    return 0


def _cmd_algo_pt(args) -> int:
    config = _config_from(args)
    sparsity = "3s" if args.ssmp_k == "3" else "2s+e"
    curves = pt.algo_curves(args.d, args.e_slack, config, ssmp_sparsity=sparsity)
    _emit(_curves_to_rows(curves), args.out)
    if args.strict and any(not bool(flag) for c in curves for flag in c.solved):
        print("error: unsolved grid points under --strict", file=sys.stderr)
        return 2
    return 0


def _cmd_feasible(args) -> int:
    config = _config_from(args)
    s_eval = bounds.ceil_pow2(args.s)
    if s_eval != args.s:
        _note(f"s rounded up to {s_eval} (next power of two)")
    verdict = pt.feasible(args.s, args.n, args.N, args.d, args.eps, config)
    rows = [
        ["feasible", "margin", "exponent"],
        ["true" if verdict.feasible else "false", _fmt(verdict.margin), _fmt(verdict.exponent)],
    ]
    _emit(rows, args.out)
    return 0


def _cmd_rip1(args) -> int:
    matrix = ensemble.read_matrix_file(args.matrix)
    low, high = ensemble.rip1_ratio(
        matrix, args.s, args.trials, Seed(args.seed), threads=_threads(args.threads)
    )
    rows = [["min_ratio", "max_ratio"], [_fmt(low), _fmt(high)]]
    _emit(rows, args.out)
    return 0


_COMMANDS = {
    "sample": _cmd_sample,
    "certify": _cmd_certify,
    "mc-tail": _cmd_mc_tail,
    "bound": _cmd_bound,
    "pt-curve": _cmd_pt_curve,
    "algo-pt": _cmd_algo_pt,
    "feasible": _cmd_feasible,
    "rip1": _cmd_rip1,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
