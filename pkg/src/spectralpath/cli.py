"""Command-line interface.

Commands: `analyze` (structure and spectrum of a matrix file), `check`
(path- or distance-form equivalence at one entry position), `scheme`
(association scheme info, polynomial detection, endpoint checks) and
`selftest` (randomized property suites).

Exit codes: 0 the check passed or the verdict is true, 1 the verdict is
false, 2 malformed input, 3 a numerical identity or property failed.
Output is deterministic for fixed inputs, flags and seed; `--json` emits
full-precision machine-readable reports, the default rendering rounds to
six significant digits.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

import numpy as np

from . import schemes, selftest
from .equivalence import (
    NegativeEntryError,
    analyze_matrix,
    check_distance_characterization,
    check_path_characterization,
)
from .linalg import (
    JacobiConvergenceError,
    MatrixParseError,
    SingularMatrixError,
    Tolerance,
    read_matrix,
)
from .spectra import (
    MultiplicityFreeRequiredError,
    SpectralIdentityError,
    SpectralKind,
)
from .symmetrize import Symmetrizer

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

_INPUT_ERRORS = (
    MatrixParseError,
    schemes.SchemeParseError,
    schemes.SchemeValidationError,
    NegativeEntryError,
    SingularMatrixError,
    MultiplicityFreeRequiredError,
    OSError,
    ValueError,
)
_NUMERICAL_ERRORS = (
    SpectralIdentityError,
    JacobiConvergenceError,
    schemes.EigenvalueCollisionError,
    RuntimeError,
)


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _fmt(x) -> str:
    return f"{float(x):.6g}"


def _fmt_vec(v) -> str:
    return "(" + ", ".join(_fmt(x) for x in v) + ")"


def _fmt_matrix(M, indent="  ") -> str:
    return "\n".join(indent + "  ".join(f"{x:>10.6g}" for x in row) for row in np.asarray(M))


def _emit(report: dict, as_json: bool, human_lines):
    if as_json:
        print(json.dumps(_jsonable(report), indent=2, sort_keys=True))
    else:
        for line in human_lines:
            print(line)


def _tol_from_args(args) -> Tolerance:
    return Tolerance(
        zero_tol=args.zero_tol, eig_tol=args.eig_tol, residual_tol=args.residual_tol
    )


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("SPECTRALPATH_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"SPECTRALPATH_SEED must be an integer, got {env!r}") from None
    return 0


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--zero-tol", type=float, default=1e-10, help="structural zero threshold")
    parser.add_argument("--eig-tol", type=float, default=1e-8, help="eigenvalue distinctness threshold")
    parser.add_argument(
        "--residual-tol", type=float, default=1e-8, help="verified identity residual bound"
    )
    parser.add_argument("--seed", type=int, default=None, help="random seed (default: $SPECTRALPATH_SEED or 0)")
    parser.add_argument("--json", action="store_true", help="emit a full-precision JSON report")


def _profile_dict(profile):
    if profile is None:
        return None
    return {
        "values": profile.values,
        "is_constant": profile.is_constant,
        "common_value": profile.common_value,
        "constant_zero": profile.constant_zero,
        "spread": profile.spread,
        "threshold": profile.threshold,
    }


def _tol_dict(tol: Tolerance) -> dict:
    return {"zero_tol": tol.zero_tol, "eig_tol": tol.eig_tol, "residual_tol": tol.residual_tol}


def _cmd_analyze(args) -> int:
    tol = _tol_from_args(args)
    A = read_matrix(args.matrix)
    analysis = analyze_matrix(A, tol)
    n = analysis.graph.n
    sym = analysis.symmetrizer
    spectral = analysis.spectral

    constant_positions = []
    if spectral.kind is SpectralKind.MULTIPLICITY_FREE:
        for s in range(n):
            for t in range(n):
                prof = analysis.profile(s, t)
                if prof.is_constant and prof.common_value is not None:
                    constant_positions.append({"s": s, "t": t, "value": prof.common_value})

    requested = None
    if args.s is not None and args.t is not None:
        requested = {"s": args.s, "t": args.t, "profile": _profile_dict(analysis.profile(args.s, args.t))}

    report = {
        "command": "analyze",
        "tolerances": _tol_dict(tol),
        "result": {
            "order": n,
            "arc_count": analysis.graph.arc_count(),
            "path_order": list(analysis.path_order) if analysis.path_order else None,
            "spectral_kind": spectral.kind.value,
            "eigenvalues": [[v, m] for v, m in spectral.eigenvalues],
            "symmetrizable": isinstance(sym, Symmetrizer),
            "kappa": sym.kappa if isinstance(sym, Symmetrizer) else None,
            "not_symmetrizable": None
            if isinstance(sym, Symmetrizer)
            else {"reason": sym.reason, "witness": list(sym.witness)},
            "constant_profile_positions": constant_positions,
            "requested": requested,
        },
        "verdict": f"order-{n} matrix classified {spectral.kind.value}",
    }

    lines = [
        f"order: {n}   arcs: {analysis.graph.arc_count()}",
        f"path order: {' -> '.join(map(str, analysis.path_order)) if analysis.path_order else 'not a bidirected path'}",
        f"spectral class: {spectral.kind.value}",
        "eigenvalues: " + ", ".join(f"{_fmt(v)} (x{m})" for v, m in spectral.eigenvalues),
    ]
    if isinstance(sym, Symmetrizer):
        lines.append(f"symmetrizer weights: {_fmt_vec(sym.kappa)}")
    else:
        lines.append(f"not symmetrizable: {sym.reason} at {sym.witness}")
    if spectral.kind is SpectralKind.MULTIPLICITY_FREE:
        if constant_positions:
            for item in constant_positions:
                lines.append(
                    f"constant profile at ({item['s']}, {item['t']}): {_fmt(item['value'])}"
                )
        else:
            lines.append("constant profile positions: none")
    if requested is not None and requested["profile"] is not None:
        p = requested["profile"]
        lines.append(
            f"profile ({args.s}, {args.t}): {_fmt_vec(p['values'])} "
            f"spread {_fmt(p['spread'])} threshold {_fmt(p['threshold'])}"
        )
    _emit(report, args.json, lines)
    return EXIT_TRUE


def _cmd_check(args) -> int:
    tol = _tol_from_args(args)
    A = read_matrix(args.matrix)
    checker = (
        check_path_characterization if args.form == "path" else check_distance_characterization
    )
    rep = checker(A, args.s, args.t, tol)
    profile = _profile_dict(rep.profile)
    if rep.condition_i and rep.condition_ii:
        verdict, code = "both sides hold", EXIT_TRUE
    elif not rep.condition_i and not rep.condition_ii:
        verdict, code = "both sides fail", EXIT_FALSE
    else:
        verdict, code = "sides disagree: numerical inconsistency", EXIT_NUMERICAL
    report = {
        "command": "check",
        "tolerances": _tol_dict(tol),
        "result": {
            "form": rep.form,
            "s": rep.s,
            "t": rep.t,
            "condition_i": rep.condition_i,
            "condition_ii": rep.condition_ii,
            "equivalent": rep.equivalent,
            "spectral_kind": rep.spectral_kind.value,
            "symmetrizable": rep.symmetrizable,
            "path_order": list(rep.path_order) if rep.path_order else None,
            "distance": rep.distance,
            "profile": profile,
        },
        "verdict": verdict,
    }
    lines = [
        f"form: {rep.form}   position: ({rep.s}, {rep.t})",
        f"pattern side: {rep.condition_i}   spectral side: {rep.condition_ii}",
        f"spectral class: {rep.spectral_kind.value}   distance: {rep.distance}",
    ]
    if profile is not None:
        lines.append(
            f"profile: {_fmt_vec(profile['values'])}"
            + (
                f" constant {_fmt(profile['common_value'])}"
                if profile["common_value"] is not None
                else " (not a nonzero constant)"
            )
        )
    lines.append(f"verdict: {verdict}")
    _emit(report, args.json, lines)
    return code


_BUILTIN_RE = re.compile(r"^builtin:(hypercube|complete)\((\d+)\)$")


def _load_scheme(source: str) -> schemes.AssociationScheme:
    match = _BUILTIN_RE.match(source)
    if match:
        return schemes.builtin_scheme(match.group(1), int(match.group(2)))
    return schemes.read_scheme(source)


def _characterization_payload(rep):
    return {
        "kind": rep.kind,
        "generator": rep.generator,
        "last": rep.last,
        "side_i": rep.side_i,
        "side_ii": rep.side_ii,
        "equivalent": rep.equivalent,
        "theta": rep.theta,
        "expected": rep.expected,
        "actual": rep.actual,
        "max_deviation": rep.max_deviation,
    }


def _cmd_scheme(args) -> int:
    tol = _tol_from_args(args)
    seed = _resolve_seed(args)
    scheme = _load_scheme(args.source)
    action = args.action
    extra = args.indices

    if action in ("info", "q-poly", "p-check", "q-check") or action == "p-poly":
        pass
    if action in ("p-check", "q-check"):
        if len(extra) != 2:
            raise ValueError(f"{action} expects two indices, got {extra}")
    elif extra:
        raise ValueError(f"{action} takes no indices, got {extra}")

    if action == "p-poly":
        structures = schemes.detect_p_polynomial(scheme, tol)
        payload = [
            {"generator": st.generator, "ordering": list(st.ordering), "last": st.last}
            for st in structures
        ]
        verdict = (
            f"{len(structures)} P-polynomial structure(s)" if structures else "no P-polynomial structure"
        )
        report = {
            "command": "scheme p-poly",
            "tolerances": _tol_dict(tol),
            "result": {"size": scheme.size, "d": scheme.d, "structures": payload},
            "verdict": verdict,
        }
        lines = [f"|X| = {scheme.size}   d = {scheme.d}"]
        for st in structures:
            lines.append(
                f"P-polynomial: generator {st.generator}, ordering "
                f"{' -> '.join(map(str, st.ordering))}, last {st.last}"
            )
        lines.append(f"verdict: {verdict}")
        _emit(report, args.json, lines)
        return EXIT_TRUE if structures else EXIT_FALSE

    ed = schemes.eigendata(scheme, tol, seed=seed)

    if action == "info":
        kmin = float(np.min(ed.q))
        kmax = float(np.max(ed.q))
        report = {
            "command": "scheme info",
            "tolerances": _tol_dict(tol),
            "seed": seed,
            "result": {
                "size": scheme.size,
                "d": scheme.d,
                "valencies": ed.k,
                "multiplicities": ed.m,
                "P": ed.P,
                "Q": ed.Q,
                "krein_min": kmin,
                "krein_max": kmax,
                "residuals": ed.residuals,
            },
            "verdict": f"scheme on {scheme.size} points with {scheme.d} classes",
        }
        lines = [
            f"|X| = {scheme.size}   d = {scheme.d}",
            f"valencies k: {_fmt_vec(ed.k)}",
            f"multiplicities m: {_fmt_vec(ed.m)}",
            "P:",
            _fmt_matrix(ed.P),
            "Q:",
            _fmt_matrix(ed.Q),
            f"Krein parameter range: [{_fmt(kmin)}, {_fmt(kmax)}]",
        ]
        _emit(report, args.json, lines)
        return EXIT_TRUE

    if action == "q-poly":
        structures = schemes.detect_q_polynomial(ed, tol)
        payload = [
            {"generator": st.generator, "ordering": list(st.ordering), "last": st.last}
            for st in structures
        ]
        verdict = (
            f"{len(structures)} Q-polynomial structure(s)" if structures else "no Q-polynomial structure"
        )
        report = {
            "command": "scheme q-poly",
            "tolerances": _tol_dict(tol),
            "seed": seed,
            "result": {"size": scheme.size, "d": scheme.d, "structures": payload},
            "verdict": verdict,
        }
        lines = [f"|X| = {scheme.size}   d = {scheme.d}"]
        for st in structures:
            lines.append(
                f"Q-polynomial: generator {st.generator}, ordering "
                f"{' -> '.join(map(str, st.ordering))}, last {st.last}"
            )
        lines.append(f"verdict: {verdict}")
        _emit(report, args.json, lines)
        return EXIT_TRUE if structures else EXIT_FALSE

    b, c = int(extra[0]), int(extra[1])
    if action == "p-check":
        rep = schemes.check_p_polynomial_characterization(ed, b, c, tol)
    else:
        rep = schemes.check_q_polynomial_characterization(ed, b, c, tol)
    if rep.side_i and rep.side_ii:
        verdict, code = "both sides hold", EXIT_TRUE
    elif not rep.side_i and not rep.side_ii:
        verdict, code = "both sides fail", EXIT_FALSE
    else:
        verdict, code = "sides disagree: numerical inconsistency", EXIT_NUMERICAL
    report = {
        "command": f"scheme {action}",
        "tolerances": _tol_dict(tol),
        "seed": seed,
        "result": _characterization_payload(rep),
        "verdict": verdict,
    }
    lines = [
        f"{action} generator {b} last {c}",
        f"structure side: {rep.side_i}   eigenvalue side: {rep.side_ii}",
        f"eigenvalue column: {_fmt_vec(rep.theta)}",
    ]
    if rep.expected is not None:
        lines.append(f"expected ratios: {_fmt_vec(rep.expected)}")
        lines.append(f"actual column:   {_fmt_vec(rep.actual)}")
        lines.append(f"max deviation: {_fmt(rep.max_deviation)}")
    lines.append(f"verdict: {verdict}")
    _emit(report, args.json, lines)
    return code


def _cmd_selftest(args) -> int:
    tol = _tol_from_args(args)
    seed = _resolve_seed(args)
    results = selftest.run_all_suites(
        trials=args.trials, d_max=args.d_max, seed=seed, tol=tol, force_fail=args.force_fail
    )
    all_passed = all(r.passed for r in results)
    report = {
        "command": "selftest",
        "tolerances": _tol_dict(tol),
        "seed": seed,
        "result": [
            {
                "suite": r.name,
                "cases": r.cases,
                "passed": r.passed,
                "failures": r.failures,
                "worst_residuals": r.worst,
            }
            for r in results
        ],
        "verdict": "all suites passed" if all_passed else "suite failures",
    }
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        worst = " ".join(f"{k}={v:.3e}" for k, v in sorted(r.worst.items()))
        lines.append(f"{status} {r.name}: cases={r.cases} {worst}".rstrip())
        for msg in r.failures:
            lines.append(f"    {msg}")
    lines.append(f"verdict: {'all suites passed' if all_passed else 'suite failures'}")
    _emit(report, args.json, lines)
    return EXIT_TRUE if all_passed else EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectralpath",
        description="Structure checks linking matrix nonzero patterns to spectral projector profiles.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_analyze = sub.add_parser("analyze", help="analyze a matrix file")
    p_analyze.add_argument("matrix", help="matrix file (first line order n, then n rows)")
    p_analyze.add_argument("--s", type=int, default=None, help="row of a position to profile")
    p_analyze.add_argument("--t", type=int, default=None, help="column of a position to profile")
    _add_common(p_analyze)
    p_analyze.set_defaults(func=_cmd_analyze)

    p_check = sub.add_parser("check", help="two-sided equivalence check at one position")
    p_check.add_argument("matrix")
    p_check.add_argument("--form", choices=("path", "distance"), required=True)
    p_check.add_argument("--s", type=int, required=True)
    p_check.add_argument("--t", type=int, required=True)
    _add_common(p_check)
    p_check.set_defaults(func=_cmd_check)

    p_scheme = sub.add_parser("scheme", help="association scheme operations")
    p_scheme.add_argument("source", help="scheme file or builtin:<name>(<n>)")
    p_scheme.add_argument(
        "action", choices=("info", "p-poly", "q-poly", "p-check", "q-check")
    )
    p_scheme.add_argument("indices", nargs="*", type=int, help="generator and last index for *-check")
    _add_common(p_scheme)
    p_scheme.set_defaults(func=_cmd_scheme)

    p_self = sub.add_parser("selftest", help="randomized property suites")
    p_self.add_argument("--trials", type=int, default=25)
    p_self.add_argument("--d-max", type=int, default=6)
    p_self.add_argument("--force-fail", action="store_true", help=argparse.SUPPRESS)
    _add_common(p_self)
    p_self.set_defaults(func=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _NUMERICAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def console_main():  # entry point wrapper
    sys.exit(main())
