"""Command-line interface: one binary, reproducible seeds, machine-readable output.

Output is newline-delimited JSON; the first record always echoes the resolved
run configuration so any result is reproducible from its own artifact. Exit
codes: 0 success, 2 validation error, 3 budget refusal.
"""
from __future__ import annotations

import argparse
import json
import secrets
import sys
from fractions import Fraction
from typing import Optional

from . import __version__
from .counting import (CountReport, compatibility_report, joint_circularity_report,
                       moment_reconstruction_check)
from .ensemble import dump_matrix_csv, sample_product
from .errors import BudgetExceeded
from .links import joint_injectivity, parse_link, regularity_report
from .moments import circular_star_moment, empirical_star_moment
from .rng import DEFAULT_SEED, parse_distribution
from .spectrum import esm_stats, eigenvalues, figure_data
from .words import Word

OUTPUT_SCHEMA = 1
_FLOPS_GUESS = 2e9


def _emit(record: dict) -> None:
    print(json.dumps(record, sort_keys=True))


def _config_record(args: argparse.Namespace, seed: Optional[int]) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items())
           if k not in ("func", "seed") and v is not None}
    out = {"record": "config", "schema": OUTPUT_SCHEMA, "version": __version__}
    out.update(cfg)
    if seed is not None:
        out["seed"] = seed
    return out


def _resolve_seed(text: str) -> int:
    if text == "random":
        return secrets.randbits(63)
    try:
        return int(text)
    except ValueError:
        raise ValueError(f"--seed must be an integer or 'random', got {text!r}") from None


def _parse_grid(text: str) -> list[int]:
    try:
        grid = [int(x) for x in text.split(",")]
    except ValueError:
        raise ValueError(f"--grid must be comma-separated integers, got {text!r}") from None
    return grid


def _check_budget(args: argparse.Namespace, est_seconds: float) -> None:
    budget = getattr(args, "budget_seconds", None)
    if budget is not None and est_seconds > budget:
        raise BudgetExceeded(
            f"estimated runtime {est_seconds:.1f}s exceeds --budget-seconds {budget}")


def _frac(f: Fraction) -> dict:
    return {"num": f.numerator, "den": f.denominator, "float": float(f)}


def _report_records(report: CountReport) -> list[dict]:
    records = []
    for row in report.rows:
        records.append({
            "record": "count",
            "pi_x": row.pi_x.to_string(),
            "pi_y": row.pi_y.to_string(),
            "n": row.n,
            "count": row.count,
            "denominator": row.denom,
            "ratio": _frac(row.ratio),
            "predicted_limit": None if row.predicted_limit is None else _frac(row.predicted_limit),
        })
    for s in report.summaries:
        records.append({
            "record": "summary",
            "pi_x": s.pi_x.to_string(),
            "pi_y": s.pi_y.to_string(),
            "predicted_limit": None if s.predicted_limit is None else _frac(s.predicted_limit),
            "slope": s.slope,
            "decays": s.decays,
            "exact_match": s.exact_match,
        })
    records.append({"record": "flags", "flags": report.flags})
    return records


def _report_csv(report: CountReport) -> str:
    lines = ["pi_x,pi_y,n,count,denominator,ratio,predicted_limit"]
    for row in report.rows:
        pred = "" if row.predicted_limit is None else f"{float(row.predicted_limit):.17g}"
        lines.append(f"{row.pi_x},{row.pi_y},{row.n},{row.count},{row.denom},"
                     f"{float(row.ratio):.17g},{pred}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_sample(args) -> int:
    seed = _resolve_seed(args.seed)
    lx, ly = parse_link(args.link_x), parse_link(args.link_y)
    dx, dy = parse_distribution(args.dist_x), parse_distribution(args.dist_y)
    _check_budget(args, args.n ** 2 / _FLOPS_GUESS)
    m = sample_product(lx, ly, dx, dy, args.n, seed)
    if args.out:
        dump_matrix_csv(m.entries, args.out)
        _emit(_config_record(args, seed))
        _emit({"record": "sample", "n": args.n, "csv": args.out})
    else:
        _emit(_config_record(args, seed))
        sys.stdout.write(dump_matrix_csv(m.entries))
    return 0


def _cmd_regularity(args) -> int:
    grid = _parse_grid(args.grid)
    _emit(_config_record(args, None))
    links = []
    if args.link:
        links.append(parse_link(args.link))
    if args.link_x and args.link_y:
        links = [parse_link(args.link_x), parse_link(args.link_y)]
    if not links:
        raise ValueError("pass --link, or both --link-x and --link-y")
    for link in links:
        rep = regularity_report(link, grid)
        _emit({
            "record": "regularity",
            "link": link.name,
            "delta_at_n": {str(n): d for n, d in rep.delta_at_n.items()},
            "verdict": "Bounded" if rep.verdict == "bounded" else "GrowsWithN",
            "bound": rep.bound,
        })
    if len(links) == 2:
        ok, cex = joint_injectivity(links[0], links[1], grid[-1])
        _emit({
            "record": "joint-injectivity",
            "n": grid[-1],
            "injective": ok,
            "counterexample": None if cex is None else [list(cex[0]), list(cex[1])],
        })
    return 0


def _cmd_moments(args) -> int:
    seed = _resolve_seed(args.seed)
    word = Word.from_string(args.word)
    lx, ly = parse_link(args.link_x), parse_link(args.link_y)
    dx, dy = parse_distribution(args.dist_x), parse_distribution(args.dist_y)
    _check_budget(args, 2.0 * args.n ** 3 * len(word) * args.trials / _FLOPS_GUESS)
    est = empirical_star_moment(lx, ly, dx, dy, args.n, word, trials=args.trials, seed=seed)
    _emit(_config_record(args, seed))
    _emit({
        "record": "moment",
        "word": str(word),
        "n": est.n,
        "trials": est.trials,
        "mean": est.mean,
        "std_error": est.std_error,
        "theory_circular": circular_star_moment(word),
    })
    return 0


def _verify_common(args):
    word = Word.from_string(args.word)
    lx, ly = parse_link(args.link_x), parse_link(args.link_y)
    return word, lx, ly


def _cmd_verify_joint(args) -> int:
    word, lx, ly = _verify_common(args)
    grid = _parse_grid(args.grid)
    _check_budget(args, sum(float(n) ** (1 + len(word) / 2) for n in grid) * 15 / _FLOPS_GUESS)
    report = joint_circularity_report(lx, ly, word, grid)
    _emit(_config_record(args, None))
    if args.csv:
        sys.stdout.write(_report_csv(report))
    else:
        for rec in _report_records(report):
            _emit(rec)
    return 0


def _cmd_verify_compat(args) -> int:
    word, lx, ly = _verify_common(args)
    grid = _parse_grid(args.grid)
    _check_budget(args, sum(float(n) ** (1 + len(word) / 2) for n in grid) * 30 / _FLOPS_GUESS)
    report = compatibility_report(lx, ly, word, grid)
    _emit(_config_record(args, None))
    if args.csv:
        sys.stdout.write(_report_csv(report))
    else:
        for rec in _report_records(report):
            _emit(rec)
    return 0


def _cmd_verify_reconstruct(args) -> int:
    seed = _resolve_seed(args.seed)
    word, lx, ly = _verify_common(args)
    dx, dy = parse_distribution(args.dist_x), parse_distribution(args.dist_y)
    _check_budget(args, 2.0 * args.n ** 3 * len(word) * args.trials / _FLOPS_GUESS + 5)
    check = moment_reconstruction_check(lx, ly, dx, dy, word, args.n,
                                        trials=args.trials, seed=seed)
    _emit(_config_record(args, seed))
    _emit({
        "record": "reconstruction",
        "word": str(word),
        "n": check.n,
        "combinatorial_sum": _frac(check.combinatorial_sum),
        "monte_carlo_mean": check.monte_carlo.mean,
        "monte_carlo_std_error": check.monte_carlo.std_error,
        "abs_diff": check.abs_diff,
        "tolerance": check.tolerance,
        "agrees": check.agrees,
    })
    return 0


def _cmd_spectrum(args) -> int:
    seed = _resolve_seed(args.seed)
    lx, ly = parse_link(args.link_x), parse_link(args.link_y)
    dist = parse_distribution(args.dist)
    _check_budget(args, 30.0 * args.n ** 3 / _FLOPS_GUESS)
    m = sample_product(lx, ly, dist, dist, args.n, seed)
    eigs = eigenvalues(m.entries, allow_large=args.allow_large)
    stats = esm_stats(eigs, scale=args.n ** -0.5)
    for link in (lx, ly):
        rep = regularity_report(link, [8, 16, 32])
        if rep.verdict == "grows":
            stats.flags.append(f"assumption2-violation:{link.name}")
    _emit(_config_record(args, seed))
    _emit({"record": "spectrum", **stats.to_json_dict(seed=seed)})
    return 0


def _cmd_figure(args) -> int:
    seed = _resolve_seed(args.seed)
    lx, ly = parse_link(args.link_x), parse_link(args.link_y)
    dist = parse_distribution(args.dist)
    _check_budget(args, 30.0 * args.n ** 3 / _FLOPS_GUESS)
    csv_path = f"{args.out_prefix}_eigs.csv"
    json_path = f"{args.out_prefix}_stats.json"
    stats = figure_data(lx, ly, dist, args.n, seed=seed,
                        csv_path=csv_path, json_path=json_path,
                        allow_large=args.allow_large)
    _emit(_config_record(args, seed))
    _emit({"record": "figure", "csv": csv_path, "stats": json_path,
           **stats.to_json_dict(seed=seed)})
    return 0


# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, json_flag: bool = False) -> None:
    p.add_argument("--seed", default=str(DEFAULT_SEED),
                   help="integer seed or 'random' (default: fixed constant for reproducibility)")
    p.add_argument("--budget-seconds", type=float, default=None,
                   help="refuse up front (exit 3) if the estimated runtime exceeds this")
    if json_flag:
        p.add_argument("--json", action="store_true",
                       help="newline-delimited JSON output (the default)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schurhad",
        description="Patterned random matrix products: ensembles, *-moments, "
                    "exact index-class counts, and spectral diagnostics.")
    parser.add_argument("--version", action="version",
                        version=f"schurhad {__version__} (output schema {OUTPUT_SCHEMA})")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("sample", help="sample a product matrix and dump it as CSV")
    p.add_argument("--link-x", required=True)
    p.add_argument("--link-y", required=True)
    p.add_argument("--dist-x", default="gaussian")
    p.add_argument("--dist-y", default="gaussian")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default=None, help="CSV output path (default: stdout)")
    _add_common(p)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("regularity", help="row/column multiplicity verdicts and joint injectivity")
    p.add_argument("--link", default=None)
    p.add_argument("--link-x", default=None)
    p.add_argument("--link-y", default=None)
    p.add_argument("--grid", required=True, help="comma-separated sizes, e.g. 10,20,40")
    _add_common(p)
    p.set_defaults(func=_cmd_regularity)

    p = sub.add_parser("moments", help="Monte-Carlo *-moment estimate with theory value")
    p.add_argument("--word", required=True)
    p.add_argument("--link-x", required=True)
    p.add_argument("--link-y", required=True)
    p.add_argument("--dist-x", default="gaussian")
    p.add_argument("--dist-y", default="gaussian")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=20)
    _add_common(p, json_flag=True)
    p.set_defaults(func=_cmd_moments)

    p = sub.add_parser("verify", help="exact-counting verifications")
    vsub = p.add_subparsers(dest="verify_kind", required=True)

    for name, handler, needs in (
        ("joint-circularity", _cmd_verify_joint, "grid"),
        ("compatibility", _cmd_verify_compat, "grid"),
        ("reconstruct", _cmd_verify_reconstruct, "n"),
    ):
        q = vsub.add_parser(name)
        q.add_argument("--word", required=True)
        q.add_argument("--link-x", required=True)
        q.add_argument("--link-y", required=True)
        if needs == "grid":
            q.add_argument("--grid", required=True)
            q.add_argument("--csv", action="store_true")
        else:
            q.add_argument("--n", type=int, required=True)
            q.add_argument("--trials", type=int, default=2000)
            q.add_argument("--dist-x", default="gaussian")
            q.add_argument("--dist-y", default="gaussian")
        _add_common(q, json_flag=True)
        q.set_defaults(func=handler)

    p = sub.add_parser("spectrum", help="eigenvalues + disk-law diagnostics for one sample")
    p.add_argument("--link-x", required=True)
    p.add_argument("--link-y", required=True)
    p.add_argument("--dist", default="gaussian")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--allow-large", action="store_true")
    _add_common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("figure", help="dump a scaled eigenvalue cloud as CSV plus a stats sidecar")
    p.add_argument("--link-x", required=True)
    p.add_argument("--link-y", required=True)
    p.add_argument("--dist", default="gaussian")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--out-prefix", default="figure")
    p.add_argument("--allow-large", action="store_true")
    _add_common(p)
    p.set_defaults(func=_cmd_figure)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as e:
        print(f"budget: {e}", file=sys.stderr)
        return 3
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
