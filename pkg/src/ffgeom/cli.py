"""Command-line harness: tables and sweeps over the exact-counting library.

Subcommands: spheres, charsum, hinges, triangles, counterexample, sweep.
All output is CSV with a header row and LF endings, written to --out or
stdout; every run is a pure function of its flags and config file.

Exit codes: 0 all asserted inequalities held, 2 an asserted bound failed
(the violating rows are printed to stderr), 1 usage or IO error.  Bounds
whose statements carry a density or size hypothesis are only asserted
inside that regime; out-of-regime rows are still emitted.

Flag values override config-file entries, which override defaults.  The
--group flag restricts which orbit statistics are computed; modes that do
not use a flag accept and ignore it, so one config file can drive several
subcommands.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from fractions import Fraction
from typing import IO, Dict, List, Optional, Sequence, TextIO

import numpy as np

from . import experiments as exp
from .charsums import gauss_sum, kloosterman, sphere_size_table
from .circles import build_counterexample, midpoint_exclusion_check
from .congruence import distinct_signature_count, t3_orbit_count
from .counting import HingeSweep
from .experiments import ExperimentConfig, density_in_hinge_regime, random_set
from .field import PrimeField
from .fourier import BudgetError, CapacityError


class _CliError(Exception):
    """Usage-level failure; rendered to stderr and mapped to exit code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is reserved for bound violations
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _CliError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ffgeom", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    specs = (
        ("spheres", "sphere sizes per radius, checked against the d=2 closed form"),
        ("charsum", "Gauss sums, Kloosterman sums, and sphere counts as a table"),
        ("hinges", "exact hinge counts with main term, remainder, and bound ratio"),
        ("triangles", "signature and orbit counts per random set"),
        ("counterexample", "dense set whose midpoints avoid it; verifies exclusion"),
        ("sweep", "full statistic sweep over a (q, density, seed) grid"),
    )
    for name, help_text in specs:
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--q", help="comma-separated odd primes")
        sp.add_argument("--density", help="comma-separated densities in (0, 1]")
        sp.add_argument("--seed", help="comma-separated 64-bit seeds")
        sp.add_argument("--out", help="output CSV path (default: stdout)")
        sp.add_argument("--budget", help="work budget in elementary steps")
        sp.add_argument("--group", choices=("so", "o"), help="orbit group filter")
        sp.add_argument("--config", help="flat key=value config file")
        if name == "counterexample":
            sp.add_argument("--samples", help="random midpoint pairs to check")
            sp.add_argument("--exhaustive", action="store_true",
                            help="check every pair instead of sampling")
    return parser


def _gather_config(args: argparse.Namespace) -> ExperimentConfig:
    pairs: Dict[str, str] = {}
    if args.config:
        pairs.update(exp.parse_config_file(args.config))
    flag_values = (
        ("q", args.q),
        ("density", args.density),
        ("seed", args.seed),
        ("out", args.out),
        ("budget", args.budget),
        ("group", args.group),
        ("samples", getattr(args, "samples", None)),
    )
    for key, value in flag_values:
        if value is not None:
            pairs[key] = str(value)
    if getattr(args, "exhaustive", False):
        pairs["exhaustive"] = "true"
    pairs["mode"] = args.command
    return exp.config_from_pairs(args.command, pairs)


def _fmt(x) -> str:
    if isinstance(x, int):
        return str(x)
    return "%.12g" % float(x)


class _CsvOut:
    """CSV sink tracking rows that violated an asserted bound."""

    def __init__(self, stream: TextIO) -> None:
        import csv

        self.writer = csv.writer(stream, lineterminator="\n")
        self.violations: List[List[str]] = []

    def header(self, columns: Sequence[str]) -> None:
        self.writer.writerow(columns)

    def row(self, record: Sequence[str], violated: bool = False) -> None:
        record = list(record)
        self.writer.writerow(record)
        if violated:
            self.violations.append(record)


def _run_spheres(config: ExperimentConfig, out: _CsvOut) -> None:
    out.header(("q", "d", "t", "count", "reference", "status"))
    for q in config.qs:
        field = PrimeField(q)
        sizes = sphere_size_table(field, 2)
        eta_m1 = field.legendre(q - 1)
        for t in range(q):
            count = int(sizes[t])
            if t == 0:
                out.row((str(q), "2", "0", str(count), "", "info"))
                continue
            ref = q - eta_m1
            ok = count == ref
            out.row((str(q), "2", str(t), str(count), str(ref),
                     "pass" if ok else "fail"), violated=not ok)


def _run_charsum(config: ExperimentConfig, out: _CsvOut) -> None:
    out.header(("q", "kind", "param", "re", "im", "modulus", "reference", "status"))
    tol = 1e-9
    for q in config.qs:
        field = PrimeField(q)
        sizes = sphere_size_table(field, 2)
        eta_m1 = field.legendre(q - 1)
        root_q = q**0.5
        for j in range(q):
            val = gauss_sum(field, j)
            mod = abs(val)
            if j == 0:
                ok = abs(val - q) <= tol
                out.row((str(q), "gauss", "0", _fmt(val.real), _fmt(val.imag),
                         _fmt(mod), str(q), "pass" if ok else "fail"),
                        violated=not ok)
            else:
                ok = abs(mod - root_q) <= tol
                out.row((str(q), "gauss", str(j), _fmt(val.real), _fmt(val.imag),
                         _fmt(mod), _fmt(root_q), "pass" if ok else "fail"),
                        violated=not ok)
        for psi in ("trivial", "quadratic"):
            kind = f"kloosterman_{psi}"
            for a in range(q):
                val = kloosterman(field, a, psi)
                mod = abs(val)
                if a == 0:
                    out.row((str(q), kind, "0", _fmt(val.real), _fmt(val.imag),
                             _fmt(mod), "", "info"))
                    continue
                ref = 2 * root_q
                ok = mod <= ref + tol
                out.row((str(q), kind, str(a), _fmt(val.real), _fmt(val.imag),
                         _fmt(mod), _fmt(ref), "pass" if ok else "fail"),
                        violated=not ok)
        for t in range(q):
            count = int(sizes[t])
            if t == 0:
                out.row((str(q), "sphere", "0", str(count), "0",
                         str(count), "", "info"))
                continue
            ref = q - eta_m1
            ok = count == ref
            out.row((str(q), "sphere", str(t), str(count), "0", str(count),
                     str(ref), "pass" if ok else "fail"), violated=not ok)


def _run_hinges(config: ExperimentConfig, out: _CsvOut) -> None:
    out.header(("q", "|E|", "a", "b", "exact", "I", "R", "bound_ratio"))
    for q, rho, seed in config.cells():
        if q**4 > config.budget:
            raise BudgetError(f"hinge table at q={q} needs {q**4} steps, "
                              f"budget {config.budget}")
        E = random_set(q, 2, rho, seed)
        hs = HingeSweep(E)
        card = E.cardinality
        in_regime = density_in_hinge_regime(q, rho)
        main = hs.pair_counts[:, None] * (card * hs.sphere_sizes[None, :])
        numer = hs.exact * q**2 - main
        for a in range(1, q):
            for b in range(1, q):
                n_ab = int(numer[a - 1, b - 1])
                main_term = Fraction(int(main[a - 1, b - 1]), q**2)
                remainder = Fraction(n_ab, q**2)
                ratio = Fraction(abs(n_ab), q**3 * card)
                violated = in_regime and abs(n_ab) > 8 * q**3 * card
                out.row((str(q), str(card), str(a), str(b),
                         str(int(hs.exact[a - 1, b - 1])),
                         _fmt(float(main_term)), _fmt(float(remainder)),
                         _fmt(float(ratio))), violated=violated)


def _run_triangles(config: ExperimentConfig, out: _CsvOut) -> None:
    out.header(("q", "|E|", "rho", "signatures_all", "signatures_nondeg",
                "orbits_SO", "orbits_O", "ratio_to_rho_q3"))
    for q, rho, seed in config.cells():
        E = random_set(q, 2, rho, seed)
        card = E.cardinality
        sig_all = distinct_signature_count(E, mode="all")
        sig_nd = distinct_signature_count(E, mode="nondegenerate")
        orbits_so: Optional[int] = None
        orbits_o: Optional[int] = None
        if config.group in ("so", "both"):
            orbits_so = t3_orbit_count(E, group="SO", budget=config.budget)
        if config.group in ("o", "both"):
            orbits_o = t3_orbit_count(E, group="O", budget=config.budget)
        ratio = float(Fraction(sig_all) / (rho * q**3))
        violated = (orbits_so is not None and sig_all > orbits_so) or (
            orbits_so is not None and orbits_o is not None and orbits_o > orbits_so
        )
        out.row((str(q), str(card), _fmt(float(rho)), str(sig_all), str(sig_nd),
                 "" if orbits_so is None else str(orbits_so),
                 "" if orbits_o is None else str(orbits_o),
                 _fmt(ratio)), violated=violated)


def _run_counterexample(config: ExperimentConfig, out: _CsvOut) -> None:
    out.header(("q", "|A|", "|E|", "rho", "sumset_size", "sumset_full",
                "violations"))
    for q in config.qs:
        field = PrimeField(q)
        cs = build_counterexample(field)
        report = midpoint_exclusion_check(
            cs,
            samples=config.samples,
            seed=config.seeds[0],
            exhaustive=config.exhaustive,
            budget=config.budget,
        )
        bad = cs.sumset_is_full or report.violations > 0
        out.row((str(q), str(len(cs.A)), str(cs.E.cardinality),
                 _fmt(float(cs.density)), str(cs.sumset_size),
                 "true" if cs.sumset_is_full else "false",
                 str(report.violations)), violated=bad)


def _run_sweep(config: ExperimentConfig, stream: TextIO) -> List[List[str]]:
    result = exp.run_sweep(config, stream)
    return [r.record() for r in result.failures]


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        config = _gather_config(args)
        with contextlib.ExitStack() as stack:
            if config.out:
                stream: TextIO = stack.enter_context(
                    open(config.out, "w", newline="")
                )
            else:
                stream = sys.stdout
            if args.command == "sweep":
                violations = _run_sweep(config, stream)
            else:
                out = _CsvOut(stream)
                runner = {
                    "spheres": _run_spheres,
                    "charsum": _run_charsum,
                    "hinges": _run_hinges,
                    "triangles": _run_triangles,
                    "counterexample": _run_counterexample,
                }[args.command]
                runner(config, out)
                violations = out.violations
    except _CliError as err:
        print(f"ffgeom: error: {err}", file=sys.stderr)
        return 1
    except (OSError, ValueError, BudgetError, CapacityError) as err:
        print(f"ffgeom: error: {err}", file=sys.stderr)
        return 1
    if violations:
        for record in violations:
            print(",".join(record), file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
