"""Document (de)serialization.

Configurations travel as JSON with full-precision decimal strings; binary
floating point is never the wire format.  Report values are serialized as
shortest round-trip decimal strings.  ``canonical_json`` gives the
byte-stable rendering used for cache entries and --stable-output.
"""

from __future__ import annotations

import json

import mpmath as mp

from .analysis import HamiltonianReport, PropertyReport, verify_properties
from .errors import InvariantViolationError, SchemaError
from .metrics import DistanceReport
from .solver import Configuration

SCHEMA_VERSION = 1


def numstr(x) -> str:
    """Decimal string for a float-valued quantity (shortest round-trip)."""
    return repr(float(x))


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def configuration_to_document(cfg: Configuration) -> dict:
    with mp.workdps(cfg.precision_digits):
        values = [mp.nstr(v, cfg.precision_digits) for v in cfg.values]
    return {
        "schema_version": SCHEMA_VERSION,
        "N": cfg.N,
        "precision_digits": cfg.precision_digits,
        "residual": numstr(cfg.residual),
        "values": values,
    }


def validate_document(doc) -> None:
    if not isinstance(doc, dict):
        raise SchemaError("configuration document must be a JSON object")
    required = {"schema_version", "N", "precision_digits", "residual", "values"}
    missing = required - doc.keys()
    if missing:
        raise SchemaError(f"missing fields: {sorted(missing)}")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {doc['schema_version']!r}")
    if not isinstance(doc["N"], int) or doc["N"] < 3:
        raise SchemaError("N must be an integer >= 3")
    if not isinstance(doc["precision_digits"], int) or doc["precision_digits"] < 1:
        raise SchemaError("precision_digits must be a positive integer")
    if not isinstance(doc["residual"], str):
        raise SchemaError("residual must be a decimal string")
    vals = doc["values"]
    if not isinstance(vals, list) or len(vals) != doc["N"]:
        raise SchemaError("values must be a list of N decimal strings")
    if not all(isinstance(v, str) for v in vals):
        raise SchemaError("values must be decimal strings")


def document_to_configuration(doc) -> Configuration:
    """Rebuild a Configuration from its document (schema errors raise
    SchemaError; structural invariants are NOT checked here, see
    ``check_loaded_configuration``)."""
    validate_document(doc)
    dps = doc["precision_digits"]
    try:
        with mp.workdps(dps):
            values = tuple(mp.mpf(s) for s in doc["values"])
            cumsums = []
            total = mp.mpf(0)
            for v in values:
                total += v
                cumsums.append(total)
        residual = float(doc["residual"])
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"unparseable numeric field: {exc}")
    return Configuration(
        N=doc["N"],
        values=values,
        cumsums=tuple(cumsums),
        x1=values[0],
        residual=residual,
        precision_digits=dps,
        solver_iterations=0,
    )


def check_loaded_configuration(cfg: Configuration, tol: float = 1e-8) -> None:
    """Re-check the four structural identities on a deserialized
    configuration; raises InvariantViolationError naming the failures."""
    report = verify_properties(cfg, tol=tol)
    core = ["zero_mean", "sum_of_squares", "symmetry", "monotone"]
    failures = [name for name in core if not report.checks[name]]
    if failures:
        raise InvariantViolationError(
            f"configuration fails on load: {', '.join(failures)} "
            f"(sum={report.sum:.3e}, sum_sq_defect={report.sum_of_squares_minus:.3e}, "
            f"symmetry_defect={report.max_symmetry_defect:.3e})",
            failures=failures,
        )


def property_report_dict(r: PropertyReport) -> dict:
    return {
        "N": r.N,
        "sum": numstr(r.sum),
        "sum_of_squares_minus": numstr(r.sum_of_squares_minus),
        "max_symmetry_defect": numstr(r.max_symmetry_defect),
        "monotone": r.monotone,
        "mesh": numstr(r.mesh),
        "mesh_bound": numstr(r.mesh_bound),
        "x1_lower_bound_ok": r.x1_lower_bound_ok,
        "tolerance": numstr(r.tolerance),
        "checks": r.checks,
    }


def hamiltonian_report_dict(r: HamiltonianReport) -> dict:
    return {
        "V": numstr(r.V),
        "U": numstr(r.U),
        "H": numstr(r.H),
        "ground_state_energy": numstr(r.ground_state_energy),
        "defect": numstr(r.defect),
    }


def distance_report_dict(r: DistanceReport) -> dict:
    return {
        "N": r.N,
        "dW_to_normal": numstr(r.dW_to_normal),
        "dW_empirical_to_zerobias": numstr(r.dW_empirical_to_zerobias),
        "stein_upper": numstr(r.stein_upper),
        "sawtooth_lower": numstr(r.sawtooth_lower),
        "mesh_upper": numstr(r.mesh_upper),
        "ks_to_normal": numstr(r.ks_to_normal),
        "sup_density_gap": numstr(r.sup_density_gap),
    }


def flat_csv(header: list[str], rows: list[list[str]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"
