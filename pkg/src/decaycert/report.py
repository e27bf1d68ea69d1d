"""Structured JSON reports.

One schema covers every subcommand's output; sections a subcommand did
not run are simply absent.  Complex numbers are serialized as
{"re": ..., "im": ...} objects, all numerics must be finite (dumps
refuses NaN/Infinity), and serialization is deterministic: sorted keys,
repr-based float formatting, so identical runs produce identical bytes
except for the ``timings`` section.
"""

import json

import jsonschema

from ._version import __version__
from .certificate import Certificate, VerificationResult
from .decomposition import AssumptionReport
from .pencil import SpectrumReport
from .simulate import Trajectory

SCHEMA_VERSION = 1

_COMPLEX = {
    "type": "object",
    "properties": {"re": {"type": "number"}, "im": {"type": "number"}},
    "required": ["re", "im"],
    "additionalProperties": False,
}

_ERROR = {
    "type": "object",
    "properties": {"type": {"type": "string"}, "message": {"type": "string"}},
    "required": ["type", "message"],
    "additionalProperties": False,
}

_NUMBER_OR_NULL = {"type": ["number", "null"]}

_CERTIFICATE = {
    "type": "object",
    "properties": {
        "variant": {"enum": ["theorem1", "theorem2"]},
        "k": {"type": "number"},
        "m": _NUMBER_OR_NULL,
        "p": _NUMBER_OR_NULL,
        "q": _NUMBER_OR_NULL,
        "omega1": {"type": "number"},
        "omega2": {"type": "number"},
        "theta": {"type": "number"},
        "rate": {"type": "number"},
        "valid": {"type": "boolean"},
        "equivalence_lower": {"type": "number"},
        "equivalence_upper": {"type": "number"},
    },
    "required": [
        "variant",
        "k",
        "m",
        "p",
        "q",
        "omega1",
        "omega2",
        "theta",
        "rate",
        "valid",
        "equivalence_lower",
        "equivalence_upper",
    ],
    "additionalProperties": False,
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "tool": {
            "type": "object",
            "properties": {"name": {"type": "string"}, "version": {"type": "string"}},
            "required": ["name", "version"],
            "additionalProperties": False,
        },
        "input": {
            "type": "object",
            "properties": {"kind": {"enum": ["files", "generator"]}},
            "required": ["kind"],
        },
        "assumptions": {
            "type": "object",
            "properties": {
                "holds_A": {"type": "boolean"},
                "holds_B": {"type": "boolean"},
                "holds_C": {"type": "boolean"},
                "a0": {"type": "number"},
                "beta": {"type": "number"},
                "delta": {"type": "number"},
                "sector_tan": {"type": "number"},
                "n": {"type": "integer"},
            },
            "required": ["holds_A", "holds_B", "holds_C", "a0", "beta", "delta", "sector_tan"],
            "additionalProperties": False,
        },
        "certificates": {
            "type": "object",
            "properties": {
                "theorem1": {"oneOf": [_CERTIFICATE, _ERROR]},
                "theorem2": {"oneOf": [_CERTIFICATE, _ERROR]},
            },
            "additionalProperties": False,
        },
        "best_variant": {"enum": ["theorem1", "theorem2", None]},
        "spectrum": {
            "type": "object",
            "properties": {
                "abscissa": {"type": "number"},
                "localized": {"type": ["boolean", "null"]},
                "gap": _NUMBER_OR_NULL,
                "eigenvalues": {"type": "array", "items": _COMPLEX},
                "max_residual": {"type": "number"},
            },
            "required": ["abscissa", "eigenvalues", "max_residual"],
            "additionalProperties": False,
        },
        "verification": {
            "type": "object",
            "properties": {
                "accretivity": {
                    "oneOf": [
                        {
                            "type": "object",
                            "properties": {
                                "lambda_max": {"type": "number"},
                                "rate": {"type": "number"},
                                "margin": {"type": "number"},
                                "tol": {"type": "number"},
                            },
                            "required": ["lambda_max", "rate", "margin", "tol"],
                            "additionalProperties": False,
                        },
                        _ERROR,
                    ]
                },
                "norm_equivalence": {
                    "type": "object",
                    "properties": {
                        "lower": {"type": "number"},
                        "upper": {"type": "number"},
                        "guaranteed_lower": {"type": "number"},
                    },
                    "required": ["lower", "upper"],
                    "additionalProperties": False,
                },
                "contraction": {
                    "type": "object",
                    "properties": {
                        "times": {"type": "array", "items": {"type": "number"}},
                        "factors": {"type": "array", "items": {"type": "number"}},
                        "ok": {"type": "boolean"},
                    },
                    "required": ["times", "factors", "ok"],
                    "additionalProperties": False,
                },
            },
            "additionalProperties": False,
        },
        "simulation": {
            "type": "object",
            "properties": {
                "fitted_rate": _NUMBER_OR_NULL,
                "envelope_ok": {"type": ["boolean", "null"]},
                "stepwise_ok": {"type": ["boolean", "null"]},
                "envelope_constant": _NUMBER_OR_NULL,
                "samples": {"type": "integer"},
                "horizon": {"type": "number"},
                "energy_initial": {"type": "number"},
                "energy_final": {"type": "number"},
                "csv": {"type": ["string", "null"]},
            },
            "required": ["samples", "horizon"],
            "additionalProperties": False,
        },
        "error": _ERROR,
        "timings": {
            "type": "object",
            "additionalProperties": {"type": "number"},
        },
    },
    "required": ["schema_version", "tool"],
    "additionalProperties": False,
}


def complex_obj(z) -> dict:
    z = complex(z)
    return {"re": float(z.real), "im": float(z.imag)}


def error_obj(exc: BaseException) -> dict:
    return {"type": type(exc).__name__, "message": str(exc)}


def new_report(input_doc: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "decaycert", "version": __version__},
        "input": input_doc,
    }


def assumptions_doc(rep: AssumptionReport, n: int | None = None) -> dict:
    doc = {
        "holds_A": rep.holds_A,
        "holds_B": rep.holds_B,
        "holds_C": rep.holds_C,
        "a0": rep.a0,
        "beta": rep.beta,
        "delta": rep.delta,
        "sector_tan": rep.sector_tan,
    }
    if n is not None:
        doc["n"] = int(n)
    return doc


def certificate_doc(cert: Certificate) -> dict:
    return {
        "variant": cert.variant.value,
        "k": cert.k,
        "m": cert.m,
        "p": cert.p,
        "q": cert.q,
        "omega1": cert.omega1_value,
        "omega2": cert.omega2_value,
        "theta": cert.theta,
        "rate": cert.rate,
        "valid": cert.valid,
        "equivalence_lower": cert.equivalence_lower,
        "equivalence_upper": cert.equivalence_upper,
    }


def spectrum_doc(rep: SpectrumReport) -> dict:
    return {
        "abscissa": rep.spectral_abscissa,
        "localized": rep.localized,
        "gap": rep.gap,
        "eigenvalues": [complex_obj(z) for z in rep.eigenvalues],
        "max_residual": float(rep.residuals.max()),
    }


def accretivity_doc(vr: VerificationResult) -> dict:
    return {
        "lambda_max": vr.lambda_max,
        "rate": vr.rate,
        "margin": vr.margin,
        "tol": vr.tol,
    }


def simulation_doc(
    traj: Trajectory,
    envelope_ok: bool | None = None,
    stepwise_ok: bool | None = None,
    envelope_constant: float | None = None,
    csv_path: str | None = None,
) -> dict:
    return {
        "fitted_rate": traj.fitted_rate,
        "envelope_ok": envelope_ok,
        "stepwise_ok": stepwise_ok,
        "envelope_constant": envelope_constant,
        "samples": int(traj.times.size),
        "horizon": float(traj.times[-1]),
        "energy_initial": float(traj.energies[0]),
        "energy_final": float(traj.energies[-1]),
        "csv": csv_path,
    }


def validate(doc: dict) -> None:
    """Raise jsonschema.ValidationError if the document violates SCHEMA."""
    jsonschema.validate(instance=doc, schema=SCHEMA)


def dumps(doc: dict) -> str:
    """Deterministic serialization: sorted keys, no NaN/Infinity allowed."""
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"
