"""Command-line front end.

    renyitherm thermal --beta 0.5 --alpha 2 --H diag:0,1
    renyitherm carnot --Th 2 --Tc 1 --alpha 2 --out cycle.csv
    renyitherm clausius --dq 0.001 --out clausius.csv
    renyitherm dpi --seed 0
    renyitherm selftest

CSV goes to ``--out`` (or standard output when omitted); summaries go to
standard output and errors to standard error.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from .channels import dpi_check, random_thermal_fixing_channel
from .clausius import DEFAULT_ALPHAS, DEFAULT_ETA, clausius_csv, clausius_sweep
from .errors import ConfigError, RenyiThermoError
from .io import format_matrix, parse_hamiltonian
from .measures import renyi_entropy
from .operators import random_density
from .processes import (
    StateFamily,
    coherent_mixing_factory,
    cycle_report_csv,
    qubit_gap_family,
    qubit_rotation,
    run_carnot_cycle,
)
from .selftest import run_selftest
from .thermal import solve_thermal_state


def _alpha_list(text):
    try:
        vals = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad alpha list {text!r}") from exc
    if not vals:
        raise argparse.ArgumentTypeError("empty alpha list")
    return vals


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)
        print(f"wrote {out}")


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise ConfigError("missing required option(s): " + ", ".join("--" + n for n in missing))


def cmd_thermal(args):
    _require(args, "beta", "alpha", "H")
    th = solve_thermal_state(parse_hamiltonian(args.H), args.beta, args.alpha)
    print(f"alpha = {th.alpha!r}")
    print(f"beta = {th.beta!r}")
    print(f"U = {th.U!r}")
    print(f"Z = {th.Z!r}")
    print(f"S = {th.S!r}")
    print(f"F = {th.F!r}")
    print(f"cutoff_applied = {th.cutoff_applied}")
    print("state =")
    sys.stdout.write(format_matrix(th.state))
    return 0


def cmd_entropy(args):
    _require(args, "alpha", "rho")
    rho = parse_hamiltonian(args.rho)
    print(repr(renyi_entropy(rho, args.alpha)))
    return 0


def cmd_carnot(args):
    _require(args, "Th", "Tc", "alpha")
    lo, hi = sorted((args.gamma1, args.gamma2))
    r = args.Tc / args.Th
    # wide enough to contain both adiabat partners
    fam = qubit_gap_family((0.25 * min(lo, lo * r), 4.0 * max(hi, hi * r)))
    factory = None
    if args.deformed:
        factory = coherent_mixing_factory(qubit_rotation(np.pi / 5), 0.2)
    rep = run_carnot_cycle(StateFamily(fam, args.alpha, factory), args.gamma1, args.gamma2, args.Th, args.Tc,
                           args.steps, route=args.route)
    _emit(cycle_report_csv(rep), args.out)
    print(f"efficiency = {rep.efficiency!r} (1 - Tc/Th = {rep.carnot_efficiency!r})", file=sys.stderr)
    return 0


def cmd_clausius(args):
    _require(args, "dq")
    recs = clausius_sweep(args.p0, args.E1, args.dq, DEFAULT_ETA, args.alphas)
    _emit(clausius_csv(recs), args.out)
    bound = -10 * args.dq**2
    bad = sum(1 for r in recs for g in r.clausius_gaps() if not g >= bound)
    print(f"{bad} of {3 * len(recs)} Clausius gaps below -10 dq^2", file=sys.stderr)
    return 0


def cmd_dpi(args):
    rng = np.random.default_rng(args.seed)
    counts = {}
    for d in (2, 4):
        for k in range(args.count):
            th = solve_thermal_state(np.diag(np.linspace(0, 1, d)), rng.uniform(0.1, 0.9), 2.0)
            ch = random_thermal_fixing_channel(th.state, int(rng.integers(2**31)))
            rho = random_density(d, rng)
            for variant, alphas in (("traditional", (0.1, 0.5, 1.0, 1.5, 2.0)),
                                    ("sandwiched", (0.5, 1.0, 2.0, 3.0, 5.0, 10.0))):
                for a in alphas:
                    res = dpi_check(ch, rho, th.state, a, variant)
                    counts[variant] = counts.get(variant, 0) + (not res.monotone)
    for variant, n in counts.items():
        print(f"{variant}: {n} violations")
    return int(any(counts.values()))


def cmd_selftest(args):
    results = run_selftest(args.seed)
    for c in results:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}")
    failed = sum(not c.passed for c in results)
    print(f"{len(results) - failed} passed, {failed} failed")
    return int(failed > 0)


def build_parser():
    p = argparse.ArgumentParser(prog="renyitherm", description="Rényi-alpha quantum thermodynamics toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        s = sub.add_parser(name, help=help)
        s.set_defaults(func=fn)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--out", default=None, help="output CSV path (default: stdout)")
        return s

    s = add("thermal", cmd_thermal, "solve a Rényi thermal state")
    s.add_argument("--alpha", type=float)
    s.add_argument("--beta", type=float)
    s.add_argument("--H", help="diag:a,b,... or a matrix file")

    s = add("entropy", cmd_entropy, "Rényi entropy of a state")
    s.add_argument("--alpha", type=float)
    s.add_argument("--rho", help="diag:a,b,... or a matrix file")

    s = add("carnot", cmd_carnot, "qubit Carnot cycle, stroke CSV")
    s.add_argument("--alpha", type=float)
    s.add_argument("--Th", type=float)
    s.add_argument("--Tc", type=float)
    s.add_argument("--gamma1", type=float, default=2.0)
    s.add_argument("--gamma2", type=float, default=1.0)
    s.add_argument("--steps", type=int, default=1000)
    s.add_argument("--route", choices=("traditional", "sandwiched"), default="traditional")
    s.add_argument("--deformed", action="store_true", help="use the coherently mixed state family")

    s = add("clausius", cmd_clausius, "Clausius sweep over alpha, CSV")
    s.add_argument("--dq", type=float)
    s.add_argument("--p0", type=float, default=0.7)
    s.add_argument("--E1", type=float, default=1.0)
    s.add_argument("--alphas", type=_alpha_list, default=DEFAULT_ALPHAS)

    s = add("dpi", cmd_dpi, "seeded data-processing batches")
    s.add_argument("--count", type=int, default=200)

    add("selftest", cmd_selftest, "run the invariant suite")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except RenyiThermoError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
