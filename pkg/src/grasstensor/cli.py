"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 unreadable input,
3 semantically invalid input, 4 random generation gave up.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import (
    canonical_tensor,
    commuting_diagram_residual,
    decomposition_to_json,
    hosvd_core,
    numerical_frank,
    pullback_core,
    verify_core_axioms,
)
from .errors import DimensionError, GenericityError, ParseError, ProfileError
from .geometry import (
    DimensionInvariants,
    ProjectionSetup,
    canonical_matrix,
    canonicalize,
    check_genericity,
    generate_generic_setup,
    invariants,
)
from .grassmann import build
from .mlrank import multilinear_rank, oracle_frank
from .tensor3 import Tensor3, equal_up_to_scale, from_json, nonzero_slices, to_json

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_SEMANTIC, EXIT_GEN = 0, 1, 2, 3, 4
DEFAULT_TOL = 1e-9


class _GenerationExhausted(Exception):
    pass


def default_tol() -> float:
    raw = os.environ.get("GRASSTENSOR_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        return _positive_float(raw)
    except argparse.ArgumentTypeError as exc:
        raise ParseError(f"GRASSTENSOR_TOL: {exc}") from exc


def _positive_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not x > 0:
        raise argparse.ArgumentTypeError(f"tolerance must be positive, got {text}")
    return x


def _int_triple(text: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(p) for p in text.replace(" ", "").split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected three comma-separated integers, got {text!r}") from exc
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated integers, got {text!r}")
    return parts


def _read_json(path: str | None):
    try:
        if path is None or path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc


def _write_json(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load_setup(path: str | None) -> ProjectionSetup:
    obj = _read_json(path)
    if not isinstance(obj, dict):
        raise ParseError("setup file must hold a JSON object")
    return ProjectionSetup.from_json(obj)


def _sidecar_path(output: str) -> str:
    p = Path(output)
    return str(p.with_name(p.stem + ".sidecar.json"))


# -- commands -----------------------------------------------------------------


def cmd_build(args) -> int:
    setup = _load_setup(args.input)
    gt = build(setup, method=args.method or "auto")
    if args.output and args.output != "-":
        _write_json(to_json(gt.tensor), args.output)
        _write_json(gt.sidecar(), _sidecar_path(args.output))
    else:
        _write_json({"tensor": to_json(gt.tensor), "sidecar": gt.sidecar()}, None)
    return EXIT_OK


def _rank_report(setup: ProjectionSetup, modes) -> dict:
    gt = build(setup)
    oracle = oracle_frank(gt)
    verdict = check_genericity(setup)
    out = {"generic": bool(verdict), "frank_formula": None, "frank_oracle": list(oracle), "per_mode": []}
    if not verdict:
        out["formula_error"] = f"formula refused: {verdict.reason}"
        for r in modes:
            out["per_mode"].append({"mode": r, "n": gt.tensor.dims[r - 1], "oracle_rank": oracle[r - 1]})
        return out
    inv = invariants(setup)
    ranks, reports = multilinear_rank(inv)
    out["frank_formula"] = list(ranks)
    for rep in reports:
        if rep.mode in modes:
            rep.oracle_rank = oracle[rep.mode - 1]
            out["per_mode"].append(rep.to_dict())
    return out


def cmd_rank(args) -> int:
    setup = _load_setup(args.input)
    modes = (args.mode,) if args.mode else (1, 2, 3)
    _write_json(_rank_report(setup, modes), args.output)
    return EXIT_OK


def cmd_canonical(args) -> int:
    setup = _load_setup(args.input)
    ct = canonicalize(setup)
    out = ct.to_json()
    out["Phi"] = canonical_matrix(ct.invariants).to_strings()
    _write_json(out, args.output)
    return EXIT_OK


def cmd_core(args) -> int:
    obj = _read_json(args.input)
    if not isinstance(obj, dict):
        raise ParseError("input must hold a JSON object")
    method = args.method or "hosvd"
    if "entries" in obj:
        t = from_json(obj)
        if method != "hosvd":
            raise DimensionError("the canonical route needs a setup file, not a bare tensor")
        cd = hosvd_core(t)
    else:
        setup = ProjectionSetup.from_json(obj)
        t = build(setup).tensor
        if method == "hosvd":
            cd = hosvd_core(t, ranks=oracle_frank(t))
        elif method == "canonical":
            cd, _ = pullback_core(canonicalize(setup), t, tol=args.tol)
        else:
            raise DimensionError(f"unknown core method {method!r}")
    report = verify_core_axioms(t, cd, tol=args.tol)
    _write_json(decomposition_to_json(cd, report), args.output)
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_gen(args) -> int:
    if args.k is None or args.h is None or args.profile is None:
        raise ParseError("gen needs --k, --h and --profile")
    DimensionInvariants.from_dims(args.k, args.h, args.profile)
    rng = np.random.default_rng(args.seed)
    try:
        setup, attempts = generate_generic_setup(args.k, args.h, args.profile, rng, max_attempts=args.max_attempts)
    except GenericityError as exc:
        raise _GenerationExhausted(str(exc)) from exc
    out = setup.to_json()
    out["generation"] = {"seed": args.seed, "attempts": attempts}
    _write_json(out, args.output)
    return EXIT_OK


def _verify_report(setup: ProjectionSetup, tensor: Tensor3 | None, tol: float) -> dict:
    checks: dict[str, dict] = {}
    gt = build(setup)
    t = gt.tensor
    if tensor is not None:
        if tensor.dims != t.dims:
            raise DimensionError(f"tensor dims {tensor.dims} do not match the setup ({t.dims})")
        ok, _ = equal_up_to_scale(tensor, t)
        checks["tensor_matches_setup"] = {"passed": bool(ok)}
        t = tensor
    oracle = oracle_frank(t) if t.is_exact else numerical_frank(t, tol=min(tol, 1e-10))
    verdict = check_genericity(setup)
    checks["genericity"] = {"passed": bool(verdict), "reason": verdict.reason, "intersections": verdict.intersection_dims}
    report = {"frank_oracle": list(oracle), "checks": checks}
    if not verdict:
        report["skipped"] = ["formula_rank", "zero_rows", "hosvd_core", "canonical_core", "diagram"]
        return report
    inv = invariants(setup)
    ranks, reports = multilinear_rank(inv)
    checks["formula_rank"] = {"passed": tuple(ranks) == tuple(oracle), "formula": list(ranks), "oracle": list(oracle)}
    ct = canonicalize(setup)
    tc = canonical_tensor(ct, t)
    zr_ok = all(
        [x for x in range(1, rep.n + 1) if x not in set(nonzero_slices(tc, rep.mode))] == rep.zero_rows
        for rep in reports
    )
    checks["zero_rows"] = {"passed": zr_ok}
    hc = hosvd_core(t, ranks=oracle)
    checks["hosvd_core"] = verify_core_axioms(t, hc, tol=tol, frank=oracle).to_dict()
    try:
        pc, data = pullback_core(ct, t, tol=tol)
        checks["canonical_core"] = verify_core_axioms(t, pc, tol=tol, frank=oracle).to_dict()
        diag = commuting_diagram_residual(ct, data, t)
        checks["diagram"] = {"passed": diag <= tol, "residual": diag}
    except ArithmeticError as exc:
        checks["canonical_core"] = {"passed": False, "failures": [f"reconstruction: {exc}"]}
        checks["diagram"] = {"passed": False, "residual": None}
    return report


def cmd_verify(args) -> int:
    setup = _load_setup(args.input)
    tensor = None
    if args.tensor:
        obj = _read_json(args.tensor)
        if not isinstance(obj, dict):
            raise ParseError("tensor file must hold a JSON object")
        tensor = from_json(obj)
    report = _verify_report(setup, tensor, args.tol)
    failed = [name for name, c in report["checks"].items() if not c.get("passed", False)]
    report["failed"] = failed
    report["passed"] = not failed
    _write_json(report, args.output)
    for name in failed:
        print(f"verify: check failed: {name}", file=sys.stderr)
    return EXIT_OK if not failed else EXIT_VERIFY


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grasstensor", description="Trifocal Grassmann tensor toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, method_choices=None):
        p.add_argument("--input", "-i", help="input JSON file ('-' or omitted for stdin)")
        p.add_argument("--output", "-o", help="output JSON file (default: stdout)")
        p.add_argument("--tol", type=_positive_float, default=None, help="numerical tolerance (default 1e-9)")
        p.add_argument("--seed", type=int, default=None)
        if method_choices:
            p.add_argument("--method", choices=method_choices, default=None)
        return p

    common(sub.add_parser("build", help="build the Grassmann tensor of a setup"), ("auto", "minors", "monomial"))
    p = common(sub.add_parser("rank", help="formula and exact multilinear rank"))
    p.add_argument("--mode", type=int, choices=(1, 2, 3), default=None)
    common(sub.add_parser("canonical", help="canonical change of basis"))
    common(sub.add_parser("core", help="core tensor"), ("hosvd", "canonical"))
    p = common(sub.add_parser("gen", help="random generic setup"))
    p.add_argument("--k", type=int)
    p.add_argument("--h", type=_int_triple, help="view dimensions, e.g. 2,4,4")
    p.add_argument("--profile", type=_int_triple, help="profile, e.g. 2,2,2")
    p.add_argument("--max-attempts", type=int, default=1000)
    p = common(sub.add_parser("verify", help="run every consistency check on one setup"))
    p.add_argument("--tensor", help="optional tensor file to check against the setup")
    return parser


COMMANDS = {
    "build": cmd_build,
    "rank": cmd_rank,
    "canonical": cmd_canonical,
    "core": cmd_core,
    "gen": cmd_gen,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.tol is None:
            args.tol = default_tol()
        return COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"grasstensor: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except _GenerationExhausted as exc:
        print(f"grasstensor: generation failed: {exc}", file=sys.stderr)
        return EXIT_GEN
    except (DimensionError, ProfileError, GenericityError) as exc:
        print(f"grasstensor: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
