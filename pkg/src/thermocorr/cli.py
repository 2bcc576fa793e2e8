"""Command-line entry point: thresholds, protocol runs, sweeps and the optimizer.

Every command writes one deterministic document (JSON with ``inputs``,
``results``, ``diagnostics`` and ``version``, or CSV with a header row).
Exit status is 0 on success, 2 on invalid input and 1 on internal errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .errors import ThermocorrError

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID = 0, 1, 2

FAMILIES = ("two-qubit", "all-bip", "single-bip", "gme-ghz", "gme-dicke", "upper-qubit-qudit")
PROTOCOLS = ("bell", "verstraete", "ghz", "single-bip", "xstate", "dicke", "circulant")
KINDS = ("mi-vs-energy", "concurrence-vs-energy")


class UsageError(ThermocorrError):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="-", help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default=None,
                        help="output format (default: csv for sweep, json otherwise)")

    parser = argparse.ArgumentParser(prog="thermocorr", description=__doc__.splitlines()[0])
    parser.add_argument("--selftest", action="store_true", help="run the randomized invariant suite")
    parser.add_argument("--version", action="version", version=f"thermocorr {__version__}")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("threshold", parents=[common], help="critical temperature of a protocol family")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--k", type=int, default=1)

    p = sub.add_parser("protocol", parents=[common], help="run one protocol on thermal qubits/qudits")
    p.add_argument("--name", choices=PROTOCOLS, required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--k", type=int, default=1, help="excitations (dicke) or cut size (single-bip)")
    p.add_argument("--d", type=int, default=2, help="local dimension (bell, circulant)")
    p.add_argument("--kT", type=float, required=True)
    p.add_argument("--deltaE", type=float, default=None, help="work budget (circulant)")

    p = sub.add_parser("sweep", parents=[common], help="measure versus available energy for two qubits")
    p.add_argument("--kind", choices=KINDS, default="mi-vs-energy")
    p.add_argument("--kT", type=float, required=True)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--seed", type=int, default=42)

    p = sub.add_parser("optimize", parents=[common], help="energy-constrained two-qubit concurrence")
    p.add_argument("--kT", type=float, required=True)
    p.add_argument("--deltaE", type=float, required=True)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--seed", type=int, default=42)
    return parser


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def _positive_kT(kT: float) -> float:
    if not kT > 0 or math.isinf(kT):
        raise UsageError("--kT must be a positive finite number")
    return kT


def cmd_threshold(args) -> dict:
    from . import thresholds as th

    fam, n, k = args.family, args.n, args.k
    solvers = {
        "two-qubit": lambda: th.threshold_two_qubit(),
        "all-bip": lambda: th.threshold_all_bip(n),
        "single-bip": lambda: th.threshold_single_bip(n),
        "gme-ghz": lambda: th.threshold_gme_ghz(n),
        "gme-dicke": lambda: th.threshold_gme_dicke(n, k),
        "upper-qubit-qudit": lambda: th.boundary_temperature(n),
    }
    r = solvers[fam]()
    results = {"family": r.family, "n": r.n, "kT_over_E": r.kT_over_E, "p": r.p,
               "closed_form": r.closed_form}
    if fam == "gme-dicke":
        results["k"] = k
    if fam == "upper-qubit-qudit":
        results["leading_order_bound"] = th.upper_bound_temperatures(n)[0]
    inputs = {"family": fam, "n": r.n} | ({"k": k} if fam == "gme-dicke" else {})
    return {"inputs": inputs, "results": results,
            "diagnostics": {"residual": r.residual, "iterations": r.iterations}}


def cmd_protocol(args) -> dict:
    from . import protocols as pr
    from .energycost import protocol_work_closed_form
    from .thermal import ThermalSystem, solve_beta_prime

    kT = _positive_kT(args.kT)
    name, n, k = args.name, args.n, args.k
    inputs = {"name": name, "n": n, "kT": kT}
    levels = tuple(float(i) for i in range(args.d))
    diag: dict = {}
    closed = None
    if name == "bell":
        sys_ = ThermalSystem.from_temperature(n, kT, levels)
        out = pr.bell_protocol(sys_)
        inputs["d"] = args.d
    elif name == "circulant":
        sys_ = ThermalSystem.from_temperature(2, kT, levels)
        if args.deltaE is None:
            raise UsageError("circulant needs --deltaE")
        inputs.update(n=2, d=args.d, deltaE=args.deltaE)
        out = pr.circulant_heating_protocol(sys_, solve_beta_prime(sys_, args.deltaE))
        closed = None
    else:
        sys_ = ThermalSystem.from_temperature(n, kT)
        if name == "verstraete":
            out = pr.verstraete_protocol(sys_)
        elif name == "ghz":
            out = pr.ghz_subspace_protocol(sys_, "all-bip")
            closed = protocol_work_closed_form("ghz", sys_)
        elif name == "single-bip":
            out = pr.ghz_subspace_protocol(sys_, "single-bip", k)
            inputs["k"] = k
        elif name == "xstate":
            out = pr.xstate_protocol(sys_)
            closed = protocol_work_closed_form("ghz", sys_)
        else:
            out = pr.dicke_protocol(sys_, k)
            inputs["k"] = k
            if k == 1:
                w_cf = protocol_work_closed_form("wstate", sys_)
                diag["wstate_closed_form_work"] = w_cf
                diag["wstate_work_discrepancy"] = w_cf - out.work
    results = {"work": out.work, "spectrum_deviation": pr.spectrum_deviation(out, sys_)}
    results.update(out.measures)
    if closed is not None:
        results["work_closed_form"] = closed
    diag.update(out.diagnostics)
    return {"inputs": inputs, "results": results, "diagnostics": diag}


def _cfg(args):
    from .energycost import OptimizerConfig
    if args.restarts < 1:
        raise UsageError("--restarts must be >= 1")
    return OptimizerConfig(restarts=args.restarts, seed=args.seed)


def cmd_sweep(args) -> dict:
    from .energycost import sweep_curve

    kT = _positive_kT(args.kT)
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    inputs = {"kind": args.kind, "kT": kT, "points": args.points}
    cfg = None
    if args.kind == "concurrence-vs-energy":
        cfg = _cfg(args)
        inputs.update(restarts=args.restarts, seed=args.seed)
    curve = sweep_curve(args.kind, kT, args.points, cfg)
    rows = {"x": curve.x.tolist(), "y": curve.y.tolist()}
    rows.update({name: np.asarray(v).tolist() for name, v in curve.series.items()})
    return {"inputs": inputs, "results": rows, "diagnostics": dict(curve.meta)}


def cmd_optimize(args) -> dict:
    from .energycost import ansatz_two_angle, optimize_concurrence_constrained, unitary_from_params
    from .energycost import _TwoQubitOrbit
    from .thermal import ThermalSystem

    kT = _positive_kT(args.kT)
    if args.deltaE < 0:
        raise UsageError("--deltaE must be >= 0")
    sys_ = ThermalSystem.from_temperature(2, kT)
    cfg = _cfg(args)
    c, u = optimize_concurrence_constrained(sys_, args.deltaE, cfg)
    c_ans, angles = ansatz_two_angle(sys_, args.deltaE)
    orbit = _TwoQubitOrbit(sys_)
    results = {"concurrence": c, "work": orbit.work(u), "ansatz_concurrence": c_ans,
               "ansatz_theta1": angles[0], "ansatz_theta2": angles[1]}
    diag = {"unitary_real": u.real.tolist(), "unitary_imag": u.imag.tolist()}
    inputs = {"kT": kT, "deltaE": args.deltaE, "restarts": args.restarts, "seed": args.seed}
    return {"inputs": inputs, "results": results, "diagnostics": diag}


def cmd_selftest(args) -> dict:
    from .selftest import run_selftest

    rep = run_selftest()
    return {"inputs": {"trials": rep.trials},
            "results": {"violations": len(rep.violations), "checks": rep.checks},
            "diagnostics": {"violations": rep.violations}}


COMMANDS = {"threshold": cmd_threshold, "protocol": cmd_protocol,
            "sweep": cmd_sweep, "optimize": cmd_optimize}


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else ("inf" if f > 0 else "-inf" if f < 0 else "nan")
    return obj


def render_json(doc: dict) -> str:
    payload = {"inputs": doc["inputs"], "results": doc["results"],
               "diagnostics": doc["diagnostics"], "version": __version__}
    return json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"


def _fmt(value) -> str:
    if isinstance(value, bool) or value is None:
        return str(value).lower() if value is not None else ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


def render_csv(doc: dict) -> str:
    """Columns for list-valued results (one row per point), else one row of scalars."""
    res = doc["results"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    columns = [k for k, v in res.items() if isinstance(v, list)]
    if columns:
        w.writerow(columns)
        for row in zip(*(res[c] for c in columns)):
            w.writerow([_fmt(v) for v in row])
    else:
        keys = [k for k, v in res.items() if not isinstance(v, dict)]
        w.writerow(keys)
        w.writerow([_fmt(res[k]) for k in keys])
    return buf.getvalue()


def _emit(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    if not args.selftest and args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_INVALID
    try:
        if args.selftest:
            doc = cmd_selftest(args)
            _emit(render_json(doc), getattr(args, "out", "-"))
            return EXIT_OK if doc["results"]["violations"] == 0 else EXIT_INTERNAL
        doc = COMMANDS[args.command](args)
        fmt = args.format or ("csv" if args.command == "sweep" else "json")
        _emit(render_csv(doc) if fmt == "csv" else render_json(doc), args.out)
        return EXIT_OK
    except ValueError as exc:  # ThermocorrError is a ValueError
        print(f"thermocorr: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001 - reported and mapped to exit status 1
        print(f"thermocorr: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
