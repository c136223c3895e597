"""Published JSON Schema for result documents (version ``v1``)."""

SCHEMA_VERSION = "v1"

_number = {"type": "number"}
_nullable_number = {"type": ["number", "null"]}
_pair = {"type": "array", "items": _number, "minItems": 2, "maxItems": 2}
_union = {"type": "array", "items": _pair}

ENERGY = {
    "type": "object",
    "required": ["surface", "potential", "total"],
    "properties": {"surface": {"type": "integer", "minimum": 0}, "potential": _number, "total": _number},
}

MINIMIZER = {
    "type": "object",
    "required": ["case", "alpha_lo", "alpha_hi", "alpha", "interval", "energy", "residual", "origin_in_closure"],
    "properties": {
        "case": {"enum": ["ZeroOnRightHalfLine", "ZeroOnLeftPositiveOnRight", "PositiveOnBothSides"]},
        "mass": _number,
        "alpha_lo": _number,
        "alpha_hi": _number,
        "alpha": _number,
        "interval": _pair,
        "energy": ENERGY,
        "residual": {"type": "number", "minimum": 0},
        "origin_in_closure": {"type": "boolean"},
    },
}

ADMISSIBILITY = {
    "type": "object",
    "required": ["is_admissible", "samples_used", "violations"],
    "properties": {
        "is_admissible": {"type": "boolean"},
        "samples_used": {"type": "integer"},
        "violations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["x", "kind"],
                "properties": {
                    "x": _number,
                    "kind": {"enum": ["negative-value", "nonzero-at-origin",
                                      "monotonicity-break-right", "monotonicity-break-left"]},
                },
            },
        },
    },
}

ORACLE = {
    "type": "object",
    "required": ["config", "candidates_evaluated", "best_union", "best_energy", "best_is_single_interval",
                 "analytic_energy", "gap", "tolerance_bound", "dominance", "verified"],
    "properties": {
        "config": {"type": "object"},
        "candidates_evaluated": {"type": "integer", "minimum": 0},
        "best_union": _union,
        "best_energy": ENERGY,
        "best_is_single_interval": {"type": "boolean"},
        "analytic_energy": _number,
        "analytic_alpha": _number,
        "gap": _number,
        "tolerance_bound": _number,
        "dominance": {
            "type": "object",
            "required": ["checked", "violations"],
            "properties": {"checked": {"type": "integer"}, "violations": {"type": "integer"},
                           "min_margin": _nullable_number},
        },
        "boundary_touching": {"type": "boolean"},
        "verified": {"type": "boolean"},
    },
}

PLAN = {
    "type": "array",
    "items": {"type": "object", "required": ["source", "shift"],
              "properties": {"source": _pair, "shift": _number}},
}

ERROR = {
    "type": "object",
    "required": ["kind", "message"],
    "properties": {"kind": {"enum": ["input-error", "not-admissible", "verification-failed", "numerical-error"]},
                   "message": {"type": "string"}},
}

RESULT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "crystal1d result document",
    "type": "object",
    "required": ["schema_version"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"enum": ["validate", "minimize", "oracle", "transport", "sweep"]},
        "potential": {"type": "object"},
        "admissibility": ADMISSIBILITY,
        "zero_structure": {"type": ["object", "null"]},
        "results": {"type": "array", "items": MINIMIZER},
        "oracle": {"type": "array", "items": ORACLE},
        "transport": {"type": "object"},
        "plans": {"type": "object", "additionalProperties": PLAN},
        "figures": {"type": "array", "items": {"type": "string"}},
        "error": ERROR,
    },
    "oneOf": [
        {"required": ["error"]},
        {"required": ["command"], "not": {"required": ["error"]}},
    ],
}


def validate(doc: dict) -> None:
    """Raise ``jsonschema.ValidationError`` if ``doc`` is not a valid v1 result document."""
    import jsonschema

    jsonschema.validate(doc, RESULT_SCHEMA)
