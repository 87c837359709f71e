"""JSON schemas for experiment and suite report files."""

SCHEMA_VERSION = "1.0"

_VERDICT = {"enum": ["PASS", "FAIL", "EXPLORATORY"]}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "hup-lab experiment report",
    "type": "object",
    "required": ["schema_version", "experiment", "inputs", "results", "calibration", "verdict", "timing"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "experiment": {"type": "string"},
        "inputs": {
            "type": "object",
            "required": ["kind", "seed", "params", "tolerances"],
            "properties": {
                "kind": {"type": "string"},
                "seed": {"type": "integer", "minimum": 0},
                "params": {"type": "object"},
                "tolerances": {"type": "object"},
                "expect": {"type": ["string", "null"]},
                "config_path": {"type": ["string", "null"]},
            },
        },
        "results": {
            "type": "object",
            "required": ["kind", "outcome", "singular_values", "nullspace", "residuals", "details"],
        },
        "calibration": {
            "type": "object",
            "required": ["bessel_form", "hecke_bochner"],
            "properties": {
                "bessel_form": {"type": "object", "required": ["frequency_scale", "prefactor", "phase_base"]},
                "hecke_bochner": {"type": "array", "minItems": 1},
            },
        },
        "verdict": _VERDICT,
        "verdict_reasons": {"type": "array", "items": {"type": "string"}},
        "warnings": {"type": "array", "items": {"type": "string"}},
        "timing": {
            "type": "object",
            "required": ["wall_time_s"],
            "properties": {"wall_time_s": {"type": "number", "minimum": 0}},
        },
    },
}

SUITE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "hup-lab suite report",
    "type": "object",
    "required": ["schema_version", "suite", "seed", "members", "verdict", "calibration", "timing"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "suite": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "overrides": {"type": "object"},
        "members": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "experiment", "verdict", "results", "timing"],
                "properties": {
                    "name": {"type": "string"},
                    "experiment": {"type": "string"},
                    "verdict": _VERDICT,
                    "verdict_reasons": {"type": "array"},
                    "results": {"type": "object"},
                    "timing": {"type": "object", "required": ["wall_time_s"]},
                },
            },
        },
        "calibration": {"type": "object", "required": ["bessel_form", "hecke_bochner"]},
        "verdict": _VERDICT,
        "timing": {"type": "object", "required": ["wall_time_s"]},
    },
}
