"""Command-line front end: ``scqm run | reproduce-tables | list-models | validate-config``.

Exit codes: 0 success, 1 reference mismatch in ``reproduce-tables``,
2 invalid configuration, 3 numerical failure. Errors are also printed to
stderr as one JSON record.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import OUTPUT_ROOT_ENV, load_config
from .exceptions import ConfigError, ScqmError
from .linalg import eigvalsh
from .models import MODEL_LABELS, build_model, cms_exact_ground_energy

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

MODEL_DESCRIPTIONS = {
    "scqm_basis": "one boson, H = H_minus / 2m on a chosen basis (params: m, omega, g, dim, basis)",
    "scqm_aop": "one boson, H = A^dagger A from truncated oscillator ladders (params: m, omega, g, dim)",
    "scqm_boson_fermion": "boson x fermion, H = {Q, Q^dagger} / 2 (params: m, omega, g, dim)",
    "cms_bosonic": "three-particle Calogero-Moser-Sutherland, position basis (params: omega, g, per_boson_dim, coincident)",
    "cms_susy": "supersymmetric three-particle CMS with Jordan-Wigner fermions (params: omega, g, per_boson_dim, coincident)",
}


def _bosonic_continuum() -> float:
    return cms_exact_ground_energy(3, 1.0, float(np.sqrt(2.0)))


#: (row name, thunk computing the value, reference, absolute tolerance)
REFERENCE_ROWS = (
    ("scqm_aop dim 16", lambda: eigvalsh(build_model("scqm_aop", dim=16).matrix)[0], 0.001904019686, 1e-9),
    ("scqm_boson_fermion dim 32", lambda: eigvalsh(build_model("scqm_boson_fermion", dim=16).matrix)[0],
     0.00190358, 1e-6),
    ("cms_bosonic dim 64", lambda: eigvalsh(build_model("cms_bosonic").matrix)[0], 6.59198266, 1e-6),
    ("cms_bosonic continuum", _bosonic_continuum, 7.0, 1e-12),
    ("cms_susy dim 512", lambda: eigvalsh(build_model("cms_susy").matrix)[0], -0.04716555, 1e-6),
)


def _error(kind: str, exc: BaseException, code: int) -> int:
    print(json.dumps({"error": kind, "type": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
    return code


def cmd_run(args) -> int:
    from .runner import run
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    result = run(cfg, args.out)
    if not args.quiet:
        out = cfg.output_dir(args.out)
        for key, value in result.headline.items():
            print(f"{key}: {value!r}")
        print(f"artifacts: {out}  ({', '.join(result.artifacts)})")
        print(f"wall clock: {result.wall_clock:.3f} s")
    return EXIT_OK


def reproduce_tables(parallel: bool = True) -> list[dict]:
    """Evaluate every reference row; rows are independent and run concurrently."""
    def one(row):
        name, fn, ref, tol = row
        t0 = time.perf_counter()
        value = float(fn())
        return {"row": name, "value": value, "reference": ref, "abs_diff": abs(value - ref),
                "tolerance": tol, "passed": abs(value - ref) <= tol, "seconds": time.perf_counter() - t0}
    if parallel:
        with ThreadPoolExecutor() as pool:
            return list(pool.map(one, REFERENCE_ROWS))
    return [one(row) for row in REFERENCE_ROWS]


def cmd_reproduce(args) -> int:
    rows = reproduce_tables()
    if not args.quiet:
        print(f"{'row':<28}{'value':>18}{'reference':>18}{'|diff|':>12}{'tol':>9}  status")
        for r in rows:
            print(f"{r['row']:<28}{r['value']:>18.10f}{r['reference']:>18.10f}{r['abs_diff']:>12.3e}"
                  f"{r['tolerance']:>9.0e}  {'PASS' if r['passed'] else 'FAIL'}")
    failed = [r for r in rows if not r["passed"]]
    if failed:
        print(json.dumps({"mismatch": [{k: r[k] for k in ("row", "value", "reference", "abs_diff")}
                                        for r in failed]}), file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_list_models(args) -> int:
    for label in MODEL_LABELS:
        print(f"{label:<20} {MODEL_DESCRIPTIONS[label]}")
    return EXIT_OK


def cmd_validate(args) -> int:
    from .runner import build_from_config
    cfg = load_config(args.config)
    build_from_config(cfg)
    if not args.quiet:
        print(f"{args.config}: ok ({cfg.model}, {cfg.algorithm})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scqm", description="Superconformal and Calogero-type Hamiltonians: diagonalization, VQE and Trotter evolution.",
        epilog=f"Outputs default to ${OUTPUT_ROOT_ENV}/<model>-<algorithm>-seed<seed> (root 'runs' if unset).")
    parser.add_argument("--quiet", action="store_true", help="suppress normal output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a run configuration")
    p.add_argument("--config", required=True, help="YAML run configuration")
    p.add_argument("--out", help="output directory (overrides the configuration)")
    p.add_argument("--seed", type=int, help="seed (overrides the configuration)")
    p.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("reproduce-tables", help="check ground energies against reference values")
    p.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("list-models", help="list model labels")
    p.set_defaults(func=cmd_list_models)

    p = sub.add_parser("validate-config", help="validate a configuration without running it")
    p.add_argument("--config", required=True)
    p.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        return _error("validation", exc, EXIT_CONFIG)
    except (ScqmError, ArithmeticError, np.linalg.LinAlgError, ValueError) as exc:
        return _error("numerical", exc, EXIT_NUMERICAL)


if __name__ == "__main__":
    sys.exit(main())
