"""Command-line front end.

    entdist measures STATE.json [--bits]
    entdist ree STATE.json [--distance relent|bures] [--tol 1e-6] [--json]
    entdist bell-sweep --steps N [--out sweep.csv]
    entdist check --suite axioms|monotonicity|pure-conjecture|all [--trials N] [--out log.csv]
    entdist split STATE.json

Exit codes: 0 ok, 1 invariant violation, 2 parse error, 3 invalid state,
4 solver did not reach the requested gap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import checks
from .errors import EntDistError
from .measures import fidelity, marginals, mutual_information, von_neumann_entropy
from .separable import bell_diagonal_ree
from .solver import SolverConfig, bures_entanglement, quantum_classical_split, ree
from .states import BellDiagonalSpec, DensityMatrix, bell_diagonal

log = logging.getLogger("entdist")

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_NOT_CONVERGED = 4

SWEEP_HEADER = ["lambda1", "closed_form", "numerical", "gap", "abs_err"]


class ParseError(Exception):
    pass


ROUNDOFF = 1e-12


def fmt(x: float) -> str:
    """Six significant digits; magnitudes below round-off print as 0."""
    x = float(x)
    return "0" if abs(x) < ROUNDOFF else f"{x:.6g}"


def load_state(path: str | Path) -> tuple[DensityMatrix, str | None]:
    """Read a state file: JSON with "dims", "matrix" ([re, im] pairs, row-major)
    and an optional "label"."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top level must be an object")
    for key in ("dims", "matrix"):
        if key not in data:
            raise ParseError(f"{path}: missing key {key!r}")
    dims = data["dims"]
    if not isinstance(dims, list) or not dims or not all(isinstance(d, int) and d > 0 for d in dims):
        raise ParseError(f"{path}: 'dims' must be a nonempty list of positive integers")
    rows = data["matrix"]
    try:
        mat = np.array([[complex(float(e[0]), float(e[1])) for e in row] for row in rows])
        if any(len(e) != 2 for row in rows for e in row):
            raise ValueError("entries must be [re, im] pairs")
    except (TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"{path}: 'matrix' must be rows of [re, im] pairs ({exc})") from exc
    if mat.ndim != 2:
        raise ParseError(f"{path}: 'matrix' rows have unequal lengths")
    label = data.get("label")
    return DensityMatrix(mat, tuple(dims)), label


def dump_state(rho, path: str | Path, label: str | None = None):
    m = np.asarray(rho.matrix)
    data = {"dims": list(rho.dims), "matrix": [[[z.real, z.imag] for z in row] for row in m]}
    if label is not None:
        data["label"] = label
    Path(path).write_text(json.dumps(data, indent=1), encoding="utf-8")


def _config(args) -> SolverConfig:
    return SolverConfig(gap_tolerance=args.tol, seed=args.seed)


def _unit(args) -> tuple[float, str]:
    return (math.log(2), "bits") if args.bits else (1.0, "nats")


def cmd_measures(args) -> int:
    rho, label = load_state(args.state)
    scale, unit = _unit(args)
    report = {"label": label, "unit": unit, "entropy": von_neumann_entropy(rho) / scale}
    if len(rho.dims) == 2:
        ra, rb = marginals(rho)
        report["entropy_a"] = von_neumann_entropy(DensityMatrix(ra, check=False)) / scale
        report["entropy_b"] = von_neumann_entropy(DensityMatrix(rb, check=False)) / scale
        report["mutual_information"] = mutual_information(rho) / scale
    mixed = DensityMatrix(np.eye(rho.dim) / rho.dim, rho.dims)
    report["fidelity_to_maximally_mixed"] = fidelity(rho, mixed)
    if args.json:
        print(json.dumps(report, indent=1))
        return EXIT_OK
    if label:
        print(f"label: {label}")
    print(f"S(rho)            = {fmt(report['entropy'])} {unit}")
    if "mutual_information" in report:
        print(f"S(rho_A)          = {fmt(report['entropy_a'])} {unit}")
        print(f"S(rho_B)          = {fmt(report['entropy_b'])} {unit}")
        print(f"I(A:B)            = {fmt(report['mutual_information'])} {unit}")
    print(f"F(rho, I/d)       = {fmt(report['fidelity_to_maximally_mixed'])}")
    return EXIT_OK


def _fmt_complex(z: complex) -> str:
    return fmt(z.real) if z.imag == 0 else f"{z.real:.6g}{z.imag:+.6g}j"


def _print_ensemble(ens):
    print("minimizer ensemble:")
    for t in ens.terms:
        facs = " x ".join("(" + ", ".join(_fmt_complex(z) for z in f.amplitudes) + ")" for f in t.factors)
        print(f"  {fmt(t.weight)}  {facs}")


def cmd_ree(args) -> int:
    rho, _ = load_state(args.state)
    scale, unit = _unit(args)
    config = _config(args)
    if args.distance == "bures":
        res = bures_entanglement(rho, config)
        unit, scale = "bures", 1.0
    else:
        res = ree(rho, config)
    converged = res.converged
    if args.json:
        text = json.dumps(res.to_dict(), indent=1)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        print(text)
    else:
        print(f"value      = {fmt(res.value / scale)} {unit}")
        print(f"gap        = {fmt(res.gap / scale)}  ({res.certificate})")
        print(f"lower      = {fmt(max(res.value - res.gap, 0.0) / scale)}")
        print(f"iterations = {res.iterations}")
        _print_ensemble(res.minimizer)
    if not converged:
        log.error("gap %.3g above tolerance %.3g after %d iterations", res.gap, args.tol, res.iterations)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def bell_sweep_rows(steps: int, config: SolverConfig | None = None) -> list[dict]:
    rows = []
    for l1 in np.linspace(0.25, 1.0, steps):
        r = (1.0 - l1) / 3.0
        spec = BellDiagonalSpec((l1, r, r, 1.0 - l1 - 2 * r))
        closed, _ = bell_diagonal_ree(spec)
        res = ree(bell_diagonal(spec), config)
        rows.append({"lambda1": float(l1), "closed_form": closed, "numerical": res.value,
                     "gap": res.gap, "abs_err": abs(res.value - closed)})
    return rows


def cmd_bell_sweep(args) -> int:
    if args.steps < 2:
        raise ParseError("--steps must be at least 2")
    rows = bell_sweep_rows(args.steps, _config(args))
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_HEADER, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: fmt(v) for k, v in row.items()})
    if args.out:
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8")
        print(f"wrote {len(rows)} rows to {args.out}; max abs_err {fmt(max(r['abs_err'] for r in rows))}")
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_check(args) -> int:
    names = ["axioms", "monotonicity", "pure-conjecture"] if args.suite == "all" else [args.suite]
    config = _config(args)
    all_rows = []
    ok = True
    for name in names:
        report = checks.run_suite(name, args.trials, args.seed, config)
        for w in report.warnings:
            print(f"warning: {w}")
        for rec in report.failures():
            print(f"VIOLATION {name}/{rec.check} trial {rec.trial} seed {rec.seed}: {rec.values}")
            if rec.state is not None:
                print("  state: " + json.dumps([[[z.real, z.imag] for z in row] for row in rec.state]))
        for req, met in report.requirements.items():
            print(f"{name}: {req}: {'yes' if met else 'NO'}")
        if name == "monotonicity":
            wit = [r for r in report.records if r.values.get("mi_increase", 0) > checks.MI_INCREASE]
            if wit:
                r = wit[0]
                print(f"mutual information increase witness: trial {r.trial} ({r.values['kind']} state), "
                      f"I {fmt(r.values['mi_in'])} -> {fmt(r.values['mi_out'])}")
        status = "PASS" if report.passed else "FAIL"
        print(f"{name}: {status} ({len(report.records)} trials)")
        ok = ok and report.passed
        all_rows += [r.row() for r in report.records]
    if args.out:
        keys = []
        for row in all_rows:
            keys += [k for k in row if k not in keys]
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=keys or ["suite"], lineterminator="\n")
            w.writeheader()
            w.writerows(all_rows)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_split(args) -> int:
    rho, _ = load_state(args.state)
    scale, unit = _unit(args)
    quantum, classical, res = quantum_classical_split(rho, _config(args))
    if args.json:
        print(json.dumps({"quantum": quantum, "classical": classical, "closest_separable": res.to_dict()}, indent=1))
        return EXIT_OK
    print(f"quantum   = {fmt(quantum / scale)} {unit}")
    print(f"classical = {fmt(classical / scale)} {unit}")
    print("closest separable state (real parts):")
    for row in np.asarray(res.realized_minimizer.matrix):
        print("  " + "  ".join(f"{z.real:+.6f}" for z in row))
    _print_ensemble(res.minimizer)
    return EXIT_OK


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # Subcommands repeat the global flags with suppressed defaults so that a
    # flag given before the subcommand is not overwritten.
    def d(value):
        return argparse.SUPPRESS if suppress else value

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=d(0))
    common.add_argument("--tol", type=float, default=d(1e-6), help="Frank-Wolfe gap tolerance")
    common.add_argument("--json", action="store_true", default=d(False), help="structured output")
    common.add_argument("--out", type=str, default=d(None), help="output file")
    common.add_argument("--bits", action="store_true", default=d(False), help="report entropies in bits")
    return common


def build_parser() -> argparse.ArgumentParser:
    top, common = _global_flags(False), _global_flags(True)

    p = argparse.ArgumentParser(prog="entdist", description=__doc__.split("\n")[0], parents=[top])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("measures", parents=[common], help="entropies and mutual information")
    s.add_argument("state")
    s.set_defaults(func=cmd_measures)

    s = sub.add_parser("ree", parents=[common], help="entanglement by distance to separable states")
    s.add_argument("state")
    s.add_argument("--distance", choices=["relent", "bures"], default="relent")
    s.set_defaults(func=cmd_ree)

    s = sub.add_parser("bell-sweep", parents=[common], help="closed form vs solver on Bell-diagonal states")
    s.add_argument("--steps", type=int, default=31)
    s.set_defaults(func=cmd_bell_sweep)

    s = sub.add_parser("check", parents=[common], help="run invariant suites")
    s.add_argument("--suite", choices=["axioms", "monotonicity", "pure-conjecture", "all"], default="all")
    s.add_argument("--trials", type=int, default=None)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("split", parents=[common], help="quantum/classical correlation split")
    s.add_argument("state")
    s.set_defaults(func=cmd_split)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except EntDistError as exc:
        print(f"invalid state: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
