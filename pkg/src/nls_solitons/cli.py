"""Command line front end.

Six subcommands cover the library surface: ``analyze`` (sphere minimum
and critical orbits), ``ground-state`` (explicit standing waves with
certification), ``profile`` (scalar radial profile and its norms),
``simulate`` (split-step experiments), ``classify`` (admissibility and
standard-form matching) and ``gn-check`` (stress test of the sharp
interpolation bound).

Structured results go to stdout as JSON with sorted keys and floats
printed to 17 significant digits, so a fixed input and seed produce
byte-identical output.  Tabular data (time series, profile samples)
goes to ``--out`` as CSV, or to stdout with ``--format csv``.

Exit codes: 0 success, 2 usage or validation error, 3 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .classify import (NotInClassError, admissible_direction,
                       match_standard_form, rank_and_kernel)
from .dynamics import (blowup_experiment, pseudoconformal_experiment,
                       soliton_experiment, stability_experiment,
                       write_snapshot)
from .profiles import ConvergenceError, solve_Q
from .sphere import critical_points, gmin_analytic, gmin_numeric
from .states import (action_min, build_ground_states, gn_check, gn_constant,
                     stability_verdict, verify_excited)
from .systems import (System, lambdas_to_cv, make_standard, system_from_dict)

SCHEMA = "nls-solitons/1"

_FORM_PARAMS = {
    "NLS1": ("alpha", "beta"),
    "NLS2": ("alpha", "beta", "sigma"),
    "NLS3": ("alpha1", "alpha2", "r"),
    "NLS4": ("alpha1", "alpha2", "alpha3", "r"),
    "NLS5": ("alpha1", "alpha2", "alpha3", "eta", "r"),
    "CO": ("kappa", "gamma"),
}
_DISCRETE = frozenset(("alpha", "beta", "sigma"))
_EXPERIMENTS = ("soliton", "stability", "blowup", "pseudoconformal")


# ---------------------------------------------------------------------------
# Deterministic JSON


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(x, ".17g")


def dumps(obj) -> str:
    """Serialise to JSON with sorted keys and a fixed float format."""
    buf: list[str] = []
    _emit(obj, buf)
    return "".join(buf)


def _emit(obj, buf):
    if obj is None:
        buf.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        buf.append("true" if obj else "false")
    elif isinstance(obj, str):
        buf.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        buf.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        buf.append(_fmt_float(float(obj)))
    elif isinstance(obj, complex):
        _emit((obj.real, obj.imag), buf)
    elif isinstance(obj, dict):
        buf.append("{")
        for i, key in enumerate(sorted(obj)):
            if i:
                buf.append(",")
            buf.append(json.dumps(str(key)))
            buf.append(":")
            _emit(obj[key], buf)
        buf.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        buf.append("[")
        for i, item in enumerate(list(obj)):
            if i:
                buf.append(",")
            _emit(item, buf)
        buf.append("]")
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")


def _print_json(payload) -> None:
    sys.stdout.write(dumps(payload) + "\n")


def _write_table(args, text: str) -> bool:
    """Route CSV text per --out/--format; True when it went to stdout."""
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
        return False
    if args.format == "csv":
        sys.stdout.write(text)
        return True
    return False


def _no_csv(args) -> None:
    if args.format == "csv":
        raise ValueError("this subcommand emits JSON only")


# ---------------------------------------------------------------------------
# System selection


def _load_system(args) -> System:
    if getattr(args, "system", None):
        with open(args.system, encoding="utf-8") as fh:
            data = json.load(fh)
        return system_from_dict(data)
    form = getattr(args, "form", None)
    if form is None:
        raise ValueError(
            "no system given: use --system FILE or --form TAG with flags")
    params = {}
    for name in _FORM_PARAMS[form]:
        value = getattr(args, name)
        if value is None:
            raise ValueError(f"form {form} needs --{name}")
        if name in _DISCRETE:
            if value != round(value):
                raise ValueError(f"--{name} must be an integer for {form}")
            value = int(value)
        params[name] = value
    return make_standard(form, params, d=args.d)


def _add_system_arguments(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("system selection")
    g.add_argument("--system", metavar="FILE",
                   help="JSON definition (coefficient list or named form)")
    g.add_argument("--form", choices=sorted(_FORM_PARAMS),
                   help="named form, parametrised by the flags below")
    for name in ("alpha", "beta", "sigma", "alpha1", "alpha2", "alpha3",
                 "eta", "r", "kappa", "gamma"):
        g.add_argument(f"--{name}", type=float)
    g.add_argument("--d", type=int, default=1, help="space dimension")


def _family_dict(fam) -> dict:
    return {
        "kind": fam.kind,
        "label": fam.label,
        "generator": [complex(z) for z in fam.generator],
        "value": float(fam.value),
    }


# ---------------------------------------------------------------------------
# Subcommands


def cmd_analyze(args) -> int:
    _no_csv(args)
    system = _load_system(args)
    sm = gmin_analytic(system) if system.form else gmin_numeric(system)
    payload = {
        "schema": SCHEMA,
        "form": system.form,
        "d": system.d,
        "g_min": float(sm.value),
        "method": sm.method,
        "ground_state_exists": bool(sm.value < 0),
        "T0": [_family_dict(f) for f in sm.families],
        "critical_sets": [
            dict(_family_dict(f), existence_condition_satisfied=True)
            for f in critical_points(system)
        ],
    }
    _print_json(payload)
    return 0


def cmd_ground_state(args) -> int:
    _no_csv(args)
    system = _load_system(args)
    states = build_ground_states(system, args.omega)
    checks = [verify_excited(system, st.w, st.a, args.omega) for st in states]
    verdict = stability_verdict(system.d, system.p, system.n)
    payload = {
        "schema": SCHEMA,
        "omega": float(args.omega),
        "g_min": float(-states[0].a),
        "a": float(states[0].a),
        "generators": [[complex(z) for z in st.w] for st in states],
        "action": float(action_min(system, args.omega)),
        "C_GN": float(gn_constant(system)),
        "verdict": {
            "regime": verdict.regime,
            "route": verdict.route,
            "route_available": verdict.route_available,
        },
        "residuals": [float(c.residual) for c in checks],
        "all_passed": all(c.passed for c in checks),
    }
    if args.dump_profile:
        st = states[0]
        r = np.linspace(0.0, st.profile.base.r_cut / math.sqrt(st.omega),
                        args.samples)
        u1, u2 = st(r)
        lines = ["r,Q,u1_re,u1_im,u2_re,u2_im"]
        for i in range(r.size):
            q = st.profile(r[i])
            lines.append(",".join(
                f"{v:.17g}" for v in (r[i], q, u1[i].real, u1[i].imag,
                                      u2[i].real, u2[i].imag)))
        with open(args.dump_profile, "w", encoding="ascii") as fh:
            fh.write("\n".join(lines) + "\n")
    _print_json(payload)
    return 0


def cmd_profile(args) -> int:
    prof = solve_Q(args.d, args.p)
    nrm = prof.norms()
    payload = {
        "schema": SCHEMA,
        "d": args.d,
        "p": float(args.p),
        "q0": float(prof.q0),
        "l2_sq": float(nrm["l2_sq"]),
        "grad_sq": float(nrm["grad_sq"]),
        "p_int": float(nrm["p_int"]),
        "residual": float(prof.ode_residual()),
        "r_cut": float(prof.r_cut),
    }
    r = np.linspace(0.0, prof.r_cut, args.samples)
    q = prof(r)
    table = "r,Q\n" + "".join(
        f"{r[i]:.17g},{q[i]:.17g}\n" for i in range(r.size))
    to_stdout = _write_table(args, table)
    if not to_stdout:
        _print_json(payload)
    return 0


def _diag_text(diag) -> str:
    lines = [",".join(diag.columns)]
    for row in diag.as_array():
        lines.append(",".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"


def cmd_simulate(args) -> int:
    kw = {}
    for flag, key in (("grid", "grid_n"), ("box", "box"), ("dt", "dt")):
        value = getattr(args, flag)
        if value is not None:
            kw[key] = value
    name = args.experiment
    if name == "pseudoconformal":
        system = (None if not (args.system or args.form)
                  else _load_system(args))
        if args.b is not None:
            kw["b"] = args.b
        res = pseudoconformal_experiment(system, **kw)
    elif name == "soliton":
        if args.T is not None:
            kw["T"] = args.T
        res = soliton_experiment(_load_system(args), omega=args.omega, **kw)
    elif name == "stability":
        if args.T is not None:
            kw["T"] = args.T
        if args.eps is not None:
            kw["eps"] = args.eps
        res = stability_experiment(_load_system(args), omega=args.omega,
                                   seed=args.seed, **kw)
    else:
        if args.T is not None:
            kw["t_max"] = args.T
        if args.inflation is not None:
            kw["c"] = args.inflation
        res = blowup_experiment(_load_system(args), omega=args.omega, **kw)

    if args.snapshot:
        write_snapshot(args.snapshot, res.final_state)
    payload = {
        "schema": SCHEMA,
        "experiment": name,
        "t_final": float(res.final_state.t),
        "rows": len(res.diagnostics.rows),
        "info": res.info,
    }
    to_stdout = _write_table(args, _diag_text(res.diagnostics))
    if not to_stdout:
        _print_json(payload)
    return 0


def cmd_classify(args) -> int:
    _no_csv(args)
    system = _load_system(args)
    if system.kind != "lambda":
        raise ValueError("classification needs a coefficient system")
    rep = rank_and_kernel(lambdas_to_cv(system.lambdas))
    abc = admissible_direction(system)
    match = None
    if abc is not None:
        try:
            m = match_standard_form(system, search_budget=args.budget)
        except NotInClassError:
            m = None
        if m is not None:
            match = {
                "form": m.form,
                "params": dict(m.params),
                "M": [[float(x) for x in row] for row in m.M],
                "residual": float(m.residual),
            }
    payload = {
        "schema": SCHEMA,
        "rank_C": int(rep.rank),
        "admissible_abc": None if abc is None else [float(v) for v in abc],
        "match": match,
    }
    _print_json(payload)
    return 0


def cmd_gn_check(args) -> int:
    _no_csv(args)
    system = _load_system(args)
    rep = gn_check(system, n_fields=args.fields, seed=args.seed)
    payload = {
        "schema": SCHEMA,
        "constant": float(rep.constant),
        "violations": int(rep.violations),
        "worst_ratio": float(rep.worst_ratio),
        "equality_gap": float(rep.equality_gap),
    }
    _print_json(payload)
    return 0


# ---------------------------------------------------------------------------
# Wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nls-solitons",
        description="Standing waves of coupled cubic Schrodinger systems: "
                    "construction, certification, classification and "
                    "dynamics.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed")
    common.add_argument("--out", metavar="PATH",
                        help="write tabular output to this file")
    common.add_argument("--format", choices=("json", "csv"), default="json",
                        help="stdout format (default json)")

    p = sub.add_parser("analyze", parents=[common],
                       help="sphere minimum and critical orbit families")
    _add_system_arguments(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("ground-state", parents=[common],
                       help="explicit standing waves at a given frequency")
    _add_system_arguments(p)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--dump-profile", dest="dump_profile", metavar="PATH",
                   help="write the state's radial samples as CSV")
    p.add_argument("--samples", type=int, default=2001)
    p.set_defaults(func=cmd_ground_state)

    p = sub.add_parser("profile", parents=[common],
                       help="scalar radial profile, norms and residual")
    p.add_argument("--d", type=int, default=1, help="space dimension")
    p.add_argument("--p", type=float, default=4.0, help="nonlinearity power")
    p.add_argument("--samples", type=int, default=2001)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("simulate", parents=[common],
                       help="split-step experiments with CSV diagnostics")
    _add_system_arguments(p)
    p.add_argument("--experiment", choices=_EXPERIMENTS, required=True)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--grid", type=int, help="points per axis (power of two)")
    p.add_argument("--box", type=float, help="periodic box side length")
    p.add_argument("--dt", type=float, help="time step")
    p.add_argument("--T", type=float, help="final time (blowup: time cap)")
    p.add_argument("--eps", type=float, help="perturbation size (stability)")
    p.add_argument("--b", type=float, help="collapse parameter "
                                           "(pseudoconformal)")
    p.add_argument("--inflation", type=float,
                   help="mass inflation factor (blowup)")
    p.add_argument("--snapshot", metavar="PATH",
                   help="write the final field snapshot here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("classify", parents=[common],
                       help="admissibility and standard-form matching")
    _add_system_arguments(p)
    p.add_argument("--budget", type=int, default=40000,
                   help="coarse search budget")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("gn-check", parents=[common],
                       help="stress test of the sharp interpolation bound")
    _add_system_arguments(p)
    p.add_argument("--fields", type=int, default=10000,
                   help="number of random fields")
    p.set_defaults(func=cmd_gn_check)
    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        return 0 if code == 0 else 2
    if getattr(args, "func", None) is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except BrokenPipeError:
        return 0
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
