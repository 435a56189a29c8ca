# app/cli.py
"""
Command-line surface: one subcommand per computation, JSON or CSV output.

Exit codes: 0 success, 2 invalid input (including usage errors), 3 numerical
failure. Diagnostics go to stderr; stdout carries only the result.
"""

import argparse
import csv
import io
import json
import math
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from app.asymptotics import expansion, volume_scan
from app.errors import InvalidInput, TorusKnotError
from app.exact_sum import jones_ratio, kashaev_exact
from app.knot import alexander, torsion, validate_knot
from app.models import ComplexValue, ContourSpec, RunConfig, TorusKnot
from app.quadrature import default_lemma1_phi, verify_lemma1, verify_lemma2, verify_shift
from app.series import default_order, x_tau_series
from app.utils.config import ConfigError, default_jobs, default_precision
from app.utils.logger import setup_logger

logger = setup_logger("cli")

EXIT_OK = 0
EXIT_INVALID = InvalidInput.exit_code

Table = Tuple[List[str], List[List[Any]]]
Output = Tuple[Dict[str, Any], Table]


def parse_complex(text: str) -> complex:
    """Parse "re,im" (or a bare real) into a complex number."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're,im' (got {text!r})")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-m", type=int, required=True, help="First winding number")
    common.add_argument("-p", type=int, required=True, help="Second winding number")
    common.add_argument("-k", type=int, help="Color")
    common.add_argument("--kmin", type=int, help="First color of a range")
    common.add_argument("--kmax", type=int, help="Last color of a range")
    common.add_argument("--kstep", type=int, default=1, help="Color step of a range")
    common.add_argument("--h", type=parse_complex, help="Deformation parameter as re,im")
    common.add_argument("--t", type=parse_complex, help="Alexander variable as re,im")
    common.add_argument("--z", type=parse_complex, help="Torsion argument as re,im")
    common.add_argument("--phi", type=float, help="Contour angle")
    common.add_argument("--n-max", dest="n_max", type=int, default=3, help="Number of tail terms")
    common.add_argument("--order", type=int, help="Series truncation order (even, >= 4)")
    common.add_argument("--tol", type=float, default=1e-12, help="Relative quadrature tolerance")
    common.add_argument("--precision", type=int, help="Working precision in bits (default TORUS_PRECISION_BITS)")
    common.add_argument("--jobs", type=int, help="Worker threads (default TORUS_JOBS)")
    common.add_argument("--format", choices=("json", "csv"), default="json", help="Output format")
    common.add_argument("--out", help="Write the result to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="knots", description="Quantum invariants of torus knots")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    descriptions = {
        "jones": "Normalised colored Jones ratio J_L/J_O at h",
        "kashaev": "Kashaev invariant <L>_k",
        "alexander": "Alexander polynomial at t",
        "torsion": "Torsion function tau(z)",
        "series": "Exact Taylor coefficients of x*tau(x)",
        "expand": "Large-k expansion against the exact invariant",
        "verify-lemma1": "Gaussian sum against its contour integral",
        "verify-lemma2": "Kashaev invariant against its contour integral",
        "verify-shift": "Contour shift across the poles",
        "volume-scan": "|<L>_k| growth over a range of colors",
    }
    for name, description in descriptions.items():
        sub.add_parser(name, parents=[common], help=description, description=description)
    return parser


def _complex_fields(z: complex, prefix: str = "") -> Dict[str, float]:
    z = complex(z)
    return {f"{prefix}re": z.real, f"{prefix}im": z.imag, f"{prefix}abs": abs(z)}


def _value_object(value: ComplexValue) -> Dict[str, float]:
    return _complex_fields(value.to_complex())


def _knot_fields(knot: TorusKnot) -> Dict[str, int]:
    return {"m": knot.m, "p": knot.p}


def _rows_output(knot: TorusKnot, rows: List[Dict[str, Any]]) -> Output:
    header = list(rows[0].keys())
    table = (header, [[row[key] for key in header] for row in rows])
    if len(rows) == 1:
        return rows[0], table
    return {**_knot_fields(knot), "rows": rows}, table


def _single_output(document: Dict[str, Any]) -> Output:
    header = list(document.keys())
    return document, (header, [[document[key] for key in header]])


def _jones(knot: TorusKnot, config: RunConfig) -> Output:
    rows = []
    for k in config.k_values():
        value = jones_ratio(knot, k, config.h, config.jobs)
        rows.append({**_knot_fields(knot), "k": k, **_complex_fields(config.h, "h_"), **_complex_fields(value)})
    return _rows_output(knot, rows)


def _kashaev(knot: TorusKnot, config: RunConfig) -> Output:
    rows = []
    for k in config.k_values():
        value = kashaev_exact(knot, k, config.precision, config.jobs)
        rows.append({**_knot_fields(knot), "k": k, **_complex_fields(value)})
    return _rows_output(knot, rows)


def _alexander(knot: TorusKnot, config: RunConfig) -> Output:
    t = config.t
    return _single_output({
        **_knot_fields(knot), "t_re": t.real, "t_im": t.imag, **_complex_fields(alexander(knot, t)),
    })


def _torsion(knot: TorusKnot, config: RunConfig) -> Output:
    z = config.z
    return _single_output({
        **_knot_fields(knot), "z_re": z.real, "z_im": z.imag, **_complex_fields(torsion(knot, z)),
    })


def _series(knot: TorusKnot, config: RunConfig) -> Output:
    order = config.order or default_order(config.n_max)
    coefficients = x_tau_series(knot, order).fraction_strings()
    document = {**_knot_fields(knot), "order": order, "coefficients": coefficients}
    return document, (["n", "coefficient"], [[n, c] for n, c in enumerate(coefficients)])


def _expand(knot: TorusKnot, config: RunConfig) -> Output:
    report = expansion(knot, config.k, config.n_max, config.precision)
    document = {
        **_knot_fields(knot),
        "k": report.k,
        "n_max": report.n_max,
        "exact": _value_object(report.exact),
        "prefactor": _value_object(report.prefactor),
        "residue_terms": [{"j": t.index, **_value_object(t.value)} for t in report.residue_terms],
        "tail_terms": [{"n": t.index, **_value_object(t.value)} for t in report.tail_terms],
        "reconstructed": _value_object(report.reconstructed),
        "abs_error": report.abs_error,
        "rel_error": report.rel_error,
        "optimal_truncation": report.optimal_truncation.model_dump(),
    }
    rows = [["exact", "", *_value_object(report.exact).values()],
            ["prefactor", "", *_value_object(report.prefactor).values()]]
    rows += [["residue", t.index, *_value_object(t.value).values()] for t in report.residue_terms]
    rows += [["tail", t.index, *_value_object(t.value).values()] for t in report.tail_terms]
    rows.append(["reconstructed", "", *_value_object(report.reconstructed).values()])
    return document, (["kind", "index", "re", "im", "abs"], rows)


def _contour(config: RunConfig, default_phi: float) -> ContourSpec:
    phi = config.phi if config.phi is not None else default_phi
    return ContourSpec(phi=phi, tol=config.tol)


def _check_output(knot: TorusKnot, config: RunConfig, check) -> Output:
    document = {
        **_knot_fields(knot),
        "k": config.k,
        "lhs": _value_object(check.lhs),
        "rhs": _value_object(check.rhs),
        "rel_diff": check.rel_diff,
        "phi": check.phi,
        "X": check.truncation,
        "panels": check.panels,
        "precision": check.precision,
    }
    flat = {
        **_knot_fields(knot), "k": config.k,
        **_complex_fields(check.lhs.to_complex(), "lhs_"),
        **_complex_fields(check.rhs.to_complex(), "rhs_"),
        "rel_diff": check.rel_diff, "phi": check.phi, "X": check.truncation,
        "panels": check.panels, "precision": check.precision,
    }
    return document, (list(flat.keys()), [list(flat.values())])


def _verify_lemma1(knot: TorusKnot, config: RunConfig) -> Output:
    check = verify_lemma1(knot, config.k, config.h, _contour(config, default_lemma1_phi(config.h)), config.precision)
    return _check_output(knot, config, check)


def _verify_lemma2(knot: TorusKnot, config: RunConfig) -> Output:
    check = verify_lemma2(knot, config.k, _contour(config, math.pi / 4), config.precision)
    return _check_output(knot, config, check)


def _verify_shift(knot: TorusKnot, config: RunConfig) -> Output:
    check = verify_shift(knot, config.k, _contour(config, math.pi / 4), config.precision)
    document = {
        **_knot_fields(knot),
        "k": config.k,
        "direct": _value_object(check.direct),
        "shifted": _value_object(check.shifted),
        "residue_sum": _value_object(check.residue_sum),
        "rel_diff": check.rel_diff,
        "phi": check.phi,
        "X": check.truncation,
        "panels": check.panels,
        "precision": check.precision,
    }
    flat = {
        **_knot_fields(knot), "k": config.k,
        **_complex_fields(check.direct.to_complex(), "direct_"),
        **_complex_fields(check.shifted.to_complex(), "shifted_"),
        **_complex_fields(check.residue_sum.to_complex(), "residue_sum_"),
        "rel_diff": check.rel_diff, "phi": check.phi, "X": check.truncation,
        "panels": check.panels, "precision": check.precision,
    }
    return document, (list(flat.keys()), [list(flat.values())])


def _volume_scan(knot: TorusKnot, config: RunConfig) -> Output:
    scan = volume_scan(knot, config.k_values(), config.precision, config.jobs)
    rows = [row.model_dump() for row in scan.rows]
    document = {
        **_knot_fields(knot),
        "rows": rows,
        "fitted_exponent": scan.fitted_exponent,
        "fitted_limit": scan.fitted_limit,
    }
    return document, (["k", "abs", "log_abs_over_k"], [[r["k"], r["abs"], r["log_abs_over_k"]] for r in rows])


COMMANDS: Dict[str, Callable[[TorusKnot, RunConfig], Output]] = {
    "jones": _jones,
    "kashaev": _kashaev,
    "alexander": _alexander,
    "torsion": _torsion,
    "series": _series,
    "expand": _expand,
    "verify-lemma1": _verify_lemma1,
    "verify-lemma2": _verify_lemma2,
    "verify-shift": _verify_shift,
    "volume-scan": _volume_scan,
}


def format_float(value: float) -> str:
    return format(value, ".17g")


def to_json(obj: Any) -> str:
    """JSON text with every float written as format(v, '.17g'); non-finite floats become null."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, float):
        return format_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(key))}: {to_json(value)}" for key, value in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(item) for item in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def to_csv(table: Table) -> str:
    header, rows = table
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, float) else v for v in row])
    return buffer.getvalue()


def _namespace_to_config(args: argparse.Namespace) -> RunConfig:
    fields = vars(args).copy()
    if fields.get("precision") is None:
        fields["precision"] = default_precision()
    if fields.get("jobs") is None:
        fields["jobs"] = default_jobs()
    return RunConfig(**fields)


def _validation_message(exc: ValidationError) -> str:
    messages = []
    for error in exc.errors():
        location = ".".join(str(part) for part in error.get("loc", ()))
        message = error.get("msg", "").removeprefix("Value error, ")
        messages.append(f"--{location.replace('_', '-')}: {message}" if location else message)
    return "; ".join(messages)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, compute, and write the result.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID

    try:
        config = _namespace_to_config(args)
    except ValidationError as exc:
        print(f"error: {_validation_message(exc)}", file=sys.stderr)
        return EXIT_INVALID
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    try:
        knot = validate_knot(config.m, config.p)
        document, table = COMMANDS[config.subcommand](knot, config)
    except TorusKnotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code

    text = to_json(document) + "\n" if config.format == "json" else to_csv(table)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as handle:
            handle.write(text)
        logger.info(f"wrote {config.subcommand} result to {config.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run())
