"""Command line entry point: ``genrank {rank,strata,check,mc}``.

Exit codes: 0 success or affirmative verdict, 1 negative verdict (check),
2 usage or input errors, 3 internal oracle mismatch.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import io as gio
from .errors import GenRankError, OracleMismatch
from .gentest import (
    FiniteFiberAlgebra,
    brute_force_generates,
    fibered_from_json,
    generates_direct_sum,
)
from .matalg import DEFAULT_SEED, OrbitType
from .montecarlo import (
    ExperimentConfig,
    finite_dim_gr_experiment,
    frontier_probe,
    genericity_experiment,
    oracle_agreement_experiment,
    repair_experiment,
    stratum_dim_survey,
)
from .rank import DimensionProfile, gr_subhomogeneous, profile_from_json
from .strata import (
    enumerate_orbit_types,
    max_nontrivial_stratum_dim,
    normalizer_dim_numeric,
    stratum_dim,
    tangent_rank_dim,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def _emit(text: str, out):
    out.write(text)
    if not text.endswith("\n"):
        out.write("\n")


def _render(rows, fmt, columns=None) -> str:
    if fmt == "csv":
        return gio.to_csv(rows, columns)
    if fmt == "table":
        return gio.to_table(rows, columns)
    return gio.dumps(rows)


def cmd_rank(args, out) -> int:
    if args.profile:
        profile = profile_from_json(_load_json(args.profile))
    elif args.dim:
        entries = {}
        for item in args.dim:
            try:
                d, loc = item.split("=")
                entries[int(d)] = float("inf") if loc in ("inf", "infinity") else int(loc)
            except ValueError:
                raise UsageError(f"--dim expects D=LOCDIM, got {item!r}") from None
        if args.square is None:
            profile = DimensionProfile.basic(entries)
        else:
            profile = DimensionProfile(entries, args.square)
    else:
        raise UsageError("rank needs --profile FILE or at least one --dim D=LOCDIM")
    res = gr_subhomogeneous(profile)
    if args.format == "json":
        _emit(gio.dumps({"profile": profile.to_dict(), "result": res.to_dict()}), out)
    else:
        rows = [{"d": d, "locdim": profile.entries[d], "contribution": c}
                for d, c in res.per_d_contributions.items()]
        _emit(_render(rows, args.format), out)
        if args.format == "table":
            note = " (square dimension defaulted to basic type)" if res.square_defaulted else ""
            _emit(f"gr = {gio._clean(res.gr)}, attained at d = {res.dominating_d}{note}", out)
    return EXIT_OK


STRATA_COLUMNS = ["orbit_type", "dim_F", "dim_N_formula", "dim_N_numeric", "dim_stratum_formula",
                  "dim_stratum_tangent", "dim_N_match", "dim_stratum_match"]


def cmd_strata(args, out) -> int:
    d, n = args.d, args.n
    rows = []
    for k, ot in enumerate(enumerate_orbit_types(d)):
        info = stratum_dim(ot, d, n)
        n_num = normalizer_dim_numeric(ot, d)
        try:
            tangent = tangent_rank_dim(ot, d, n, args.samples, args.seed + k)
        except GenRankError:
            tangent = None
        rows.append({
            "orbit_type": str(ot), "dim_F": info.dim_F, "dim_N_formula": info.dim_N,
            "dim_N_numeric": n_num, "dim_stratum_formula": info.dim_stratum,
            "dim_stratum_tangent": "" if tangent is None else tangent,
            "dim_N_match": n_num == info.dim_N,
            "dim_stratum_match": tangent is None or tangent == info.dim_stratum,
        })
    summary = {}
    if d >= 2 and n >= 1:
        top, witness = max_nontrivial_stratum_dim(d, n)
        summary = {"max_nontrivial_dim": top, "witness": str(witness),
                   "codimension": (n + 1) * d * d - top}
    if args.format == "json":
        _emit(gio.dumps({"d": d, "n": n, "rows": rows, "summary": summary}), out)
    else:
        _emit(_render(rows, args.format, STRATA_COLUMNS), out)
        if args.format == "table" and summary:
            _emit(f"max non-trivial stratum dim = {summary['max_nontrivial_dim']} "
                  f"at {summary['witness']}", out)
    if not all(r["dim_N_match"] and r["dim_stratum_match"] for r in rows):
        logging.error("closed-form and numerical dimensions disagree")
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_check(args, out) -> int:
    alg, t = fibered_from_json(_load_json(args.file))
    report = generates_direct_sum(alg, t, unital=args.unital)
    doc = report.to_dict()
    if args.oracle:
        oracle = brute_force_generates(alg, t, unital=args.unital)
        doc["oracle_generates"] = oracle
        if oracle != report.generates:
            _emit(gio.dumps(doc), out)
            raise OracleMismatch("intertwiner test and brute-force saturation disagree")
    _emit(gio.dumps(doc), out)
    return EXIT_OK if report.generates else EXIT_NEGATIVE


def cmd_mc(args, out) -> int:
    cfg = ExperimentConfig(d=args.d, n=args.n, trials=args.trials, seed=args.seed,
                           epsilon=args.epsilon)
    exp = args.experiment
    if exp == "genericity":
        report = genericity_experiment(cfg)
    elif exp == "repair":
        report = repair_experiment(cfg, args.sizes)
    elif exp == "frontier":
        if not args.orbit_type:
            raise UsageError("mc frontier needs --orbit-type, e.g. '[(1,1),(1,1)]'")
        report = frontier_probe(OrbitType.parse(args.orbit_type), cfg)
    elif exp == "oracle":
        report = oracle_agreement_experiment(cfg)
    elif exp == "finite-dim":
        if not args.fibers:
            raise UsageError("mc finite-dim needs --fibers, e.g. --fibers 2 3")
        report = finite_dim_gr_experiment(FiniteFiberAlgebra(tuple(args.fibers)), cfg)
    else:
        rows = stratum_dim_survey(args.d, args.n, cfg)
        _emit(gio.dumps({"experiment": "survey", "d": args.d, "n": args.n, "rows": rows}), out)
        return EXIT_OK
    _emit(gio.dumps(report.to_dict()), out)
    if args.csv:
        try:
            Path(args.csv).write_text(gio.to_csv(report.per_trial))
        except OSError as exc:
            raise UsageError(f"cannot write {args.csv}: {exc.strerror or exc}") from None
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="genrank", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("rank", help="generator rank from a dimension profile")
    r.add_argument("--profile", help="profile JSON file")
    r.add_argument("--dim", action="append", metavar="D=LOCDIM",
                   help="inline entry, repeatable; LOCDIM may be 'inf'")
    r.add_argument("--square", type=int, help="locdim(X_1 x X_1) for inline profiles")
    r.add_argument("--format", choices=["json", "table", "csv"], default="json")
    r.set_defaults(func=cmd_rank)

    s = sub.add_parser("strata", help="orbit types and stratum dimensions")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--samples", type=int, default=5)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--format", choices=["json", "table", "csv"], default="table")
    s.set_defaults(func=cmd_strata)

    c = sub.add_parser("check", help="does a tuple generate a direct sum of matrix algebras")
    c.add_argument("file", help='JSON {"fibers": [...], "tuple": [...]}')
    c.add_argument("--unital", action="store_true", help="test unital generation per fiber")
    c.add_argument("--oracle", action="store_true", help="also run the brute-force oracle")
    c.set_defaults(func=cmd_check)

    m = sub.add_parser("mc", help="seeded Monte Carlo experiments")
    m.add_argument("experiment", choices=["genericity", "repair", "frontier", "finite-dim",
                                                "oracle", "survey"])
    m.add_argument("--d", type=int, default=2)
    m.add_argument("--n", type=int, default=1)
    m.add_argument("--trials", type=int, default=1000)
    m.add_argument("--seed", type=int, default=DEFAULT_SEED)
    m.add_argument("--epsilon", type=float, default=1e-3)
    m.add_argument("--orbit-type", help="frontier: orbit type such as '[(1,1),(1,1)]'")
    m.add_argument("--fibers", type=int, nargs="+", help="finite-dim: fiber sizes")
    m.add_argument("--sizes", type=int, nargs="+", help="repair: cycle through these sizes")
    m.add_argument("--csv", help="write per-trial outcomes to this CSV file")
    m.set_defaults(func=cmd_mc)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args, out)
    except OracleMismatch as exc:
        print(f"genrank: internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (UsageError, GenRankError, ValueError) as exc:
        print(f"genrank {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
