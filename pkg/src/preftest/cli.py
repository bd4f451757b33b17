"""Command line interface.

Subcommands: gen, lb-gen, distance, test, experiment. Exit code 0 on success,
2 on configuration errors. The ``test`` subcommand prints one machine-readable
line: ``decision statistic threshold queries sample_size``.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .errors import PreftestError
from .domains import get_domain
from .distances import alt_distance, combined_feasible, pref_distance
from .expharness import (
    emit_csv,
    emit_summary_csv,
    preset_config,
    replace_config,
    run_experiment,
)
from .oracle import QueryOracle
from .prefcore import (
    gen_lb_sc_profile,
    gen_lb_sp_profile,
    gen_prop3_profile,
    gen_type1_profile,
    gen_uniform_profile,
    profile_to_text,
    read_profile,
)
from .testers import (
    test_alt_outliers,
    test_combined_outliers,
    test_random_outliers,
    test_worst_outliers_any_eps,
    test_worst_outliers_small_eps,
    test_worst_worst_pref,
)


def _write_out(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _cmd_gen(args) -> int:
    domain = get_domain(args.domain)
    if args.kind == "uniform":
        profile, _ = gen_uniform_profile(args.m, args.n, args.seed)
    elif args.kind == "prop3":
        profile = gen_prop3_profile(domain, args.m, args.n)
    else:
        profile, _ = gen_type1_profile(
            domain, args.m, args.n, args.eps_v, args.eps_a,
            outlier_mode=args.outlier_mode, seed=args.seed, adversary=args.adversary,
        )
    _write_out(profile_to_text(profile), args.out)
    return 0


def _cmd_lb_gen(args) -> int:
    gen = gen_lb_sp_profile if args.family == "sp" else gen_lb_sc_profile
    p, p_prime = gen(args.blocks, args.n)
    _write_out(profile_to_text(p_prime if args.variant == "p-prime" else p), args.out)
    return 0


def _cmd_distance(args) -> int:
    domain = get_domain(args.domain)
    profile = read_profile(args.infile)
    if args.kind == "pref":
        rep = pref_distance(profile, domain)
    elif args.kind == "alt":
        rep = alt_distance(profile, domain)
    else:
        witness = combined_feasible(profile, domain, args.eps_v, args.eps_a)
        if witness is None:
            print("feasible 0")
        else:
            agents, alts = witness
            print("feasible 1")
            print("agents " + " ".join(str(i) for i in sorted(agents)))
            print("alternatives " + " ".join(str(a) for a in sorted(alts)))
        return 0
    print(f"value {rep.value}")
    print("removed " + " ".join(str(i) for i in sorted(rep.witness_removed)))
    return 0


def _cmd_test(args) -> int:
    domain = get_domain(args.domain)
    profile = read_profile(args.infile)
    oracle = QueryOracle(profile, seed=args.seed)
    kw = dict(sample_override=args.sample_override)
    if args.algo == "alg1":
        verdict = test_random_outliers(oracle, domain, args.eps_v, args.delta, **kw)
    elif args.algo == "worst":
        verdict = test_worst_outliers_small_eps(oracle, domain, args.eps_v, args.delta, **kw)
    elif args.algo == "any-eps":
        verdict = test_worst_outliers_any_eps(oracle, domain, args.eps_v, args.delta, **kw)
    elif args.algo == "worst-worst":
        if args.eps_v_prime is None:
            raise PreftestError("--eps-v-prime is required for --algo worst-worst")
        verdict = test_worst_worst_pref(
            oracle, domain, args.eps_v, args.eps_v_prime, args.delta, **kw
        )
    elif args.algo == "alt":
        verdict = test_alt_outliers(oracle, domain, args.eps_a, args.delta, **kw)
    else:
        verdict = test_combined_outliers(
            oracle, domain, args.eps_v, args.eps_a, args.delta,
            worst_pref=args.worst_pref, **kw,
        )
    print(
        f"{verdict.decision} {verdict.statistic:g} {verdict.threshold:g} "
        f"{verdict.queries} {verdict.sample_size}"
    )
    return 0


def _cmd_experiment(args) -> int:
    config = preset_config(args.preset, paper_scale=args.paper_scale, seed=args.seed)
    overrides = {}
    if args.n is not None:
        overrides["n"] = args.n
    if args.profiles is not None:
        overrides["profiles_per_point"] = args.profiles
    if args.samples is not None:
        overrides["samples_per_profile"] = args.samples
    if args.eps_list is not None:
        overrides["eps_list"] = tuple(float(tok) for tok in args.eps_list.split(","))
    if args.grid is not None:
        overrides["fraction_grid"] = tuple(float(tok) for tok in args.grid.split(","))
    if overrides:
        config = replace_config(config, **overrides)
    records, summary = run_experiment(config)
    emit_csv(records, args.out)
    if args.summary_out:
        emit_summary_csv(summary, args.summary_out)
    for row in summary:
        print(
            f"{row.scenario} eps={row.eps:.3f} f={row.fraction:.2f} "
            f"rho={row.rho:.6f} rho1={row.rho_kind1:.6f} rho0={row.rho_kind0:.6f}"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="preftest",
        description="Sampling-based closeness testers for preference profiles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a profile in the text format")
    p.add_argument("--kind", choices=("uniform", "type1", "prop3"), required=True)
    p.add_argument("--domain", default="single-peaked")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps-v", type=float, default=0.0)
    p.add_argument("--eps-a", type=float, default=0.0)
    p.add_argument("--outlier-mode", choices=("random", "adversarial"), default="random")
    p.add_argument("--adversary", default="missing-order-flood")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("lb-gen", help="generate the adversarial lower-bound fixtures")
    p.add_argument("--family", choices=("sp", "sc"), required=True)
    p.add_argument("--blocks", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--variant", choices=("p", "p-prime"), default="p")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_lb_gen)

    p = sub.add_parser("distance", help="exact distance oracles")
    p.add_argument("--kind", choices=("pref", "alt", "combined"), required=True)
    p.add_argument("--domain", default="single-peaked")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--eps-v", type=float, default=0.0)
    p.add_argument("--eps-a", type=float, default=0.0)
    p.set_defaults(func=_cmd_distance)

    p = sub.add_parser("test", help="run one tester against a profile file")
    p.add_argument(
        "--algo",
        choices=("alg1", "worst", "any-eps", "worst-worst", "alt", "combined"),
        required=True,
    )
    p.add_argument("--domain", default="single-peaked")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--eps-v", type=float, default=0.0)
    p.add_argument("--eps-a", type=float, default=0.0)
    p.add_argument("--eps-v-prime", type=float, default=None)
    p.add_argument("--worst-pref", action="store_true")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--sample-override", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_test)

    p = sub.add_parser("experiment", help="Monte Carlo correct-classification sweeps")
    p.add_argument("--preset", choices=("fig1", "fig2", "fig3"), required=True)
    p.add_argument("--paper-scale", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--summary-out", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--profiles", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--eps-list", default=None)
    p.add_argument("--grid", default=None)
    p.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PreftestError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
