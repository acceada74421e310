"""JSON Schemas for the ``--json`` output of each CLI command.

docs/json-output.md describes the same documents in prose.
"""

_number_or_null = {"type": ["number", "null"]}

_config = {
    "type": "object",
    "required": ["tolerance", "max_steps", "subsamples", "divergence_threshold", "ratio", "resolution"],
    "properties": {
        "tolerance": {"type": "number", "exclusiveMinimum": 0},
        "max_steps": {"type": "integer", "minimum": 2},
        "subsamples": {"type": "integer", "minimum": 1},
        "divergence_threshold": {"type": "number", "exclusiveMinimum": 0},
        "ratio": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "resolution": {"type": "number", "exclusiveMinimum": 0},
    },
    "additionalProperties": False,
}

_trace = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["x", "m", "M", "samples"],
        "properties": {
            "x": {"type": "number"},
            "m": {"type": "number"},
            "M": {"type": "number"},
            "samples": {"type": "integer", "minimum": 0},
        },
        "additionalProperties": False,
    },
}

_verdicts = ["converges", "diverges_to_plus_infinity", "diverges_to_minus_infinity",
             "oscillates", "inconclusive"]

LIMIT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "netlimit limit / riemann output",
    "type": "object",
    "required": ["command", "expression", "direction", "verdict", "value", "error_bound",
                 "trace", "stop_reason", "config"],
    "properties": {
        "command": {"enum": ["limit", "riemann"]},
        "expression": {"type": "string"},
        "integrator": {"type": "string"},
        "tag": {"enum": ["left", "midpoint", "right"]},
        "direction": {"type": "string"},
        "verdict": {"enum": _verdicts},
        "value": _number_or_null,
        "error_bound": _number_or_null,
        "liminf": {"type": "number"},
        "limsup": {"type": "number"},
        "reason": {"type": "string"},
        "final_mesh": {"type": "number"},
        "stop_reason": {"enum": ["max_steps", "horizon", "noise_floor", "non_finite"]},
        "trace": _trace,
        "config": _config,
    },
    "additionalProperties": False,
}

CERTIFY = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "netlimit certify output",
    "type": "object",
    "required": ["command", "expression", "direction", "limit", "certified", "entries"],
    "properties": {
        "command": {"const": "certify"},
        "expression": {"type": "string"},
        "direction": {"type": "string"},
        "limit": {"type": "number"},
        "certified": {"type": "boolean"},
        "failed_epsilon": {"type": "number"},
        "entries": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["epsilon", "anchor", "samples"],
                "properties": {
                    "epsilon": {"type": "number", "exclusiveMinimum": 0},
                    "anchor": {"type": "number"},
                    "delta": {"type": "number"},
                    "N": {"type": "number"},
                    "mesh": {"type": "number"},
                    "samples": {"type": "integer", "minimum": 0},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

AXIOMS = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "netlimit axioms output",
    "type": "object",
    "required": ["command", "seed", "directions", "passed", "axiom_reports"],
    "properties": {
        "command": {"const": "axioms"},
        "seed": {"type": "integer"},
        "directions": {"type": "array", "items": {"type": "string"}},
        "passed": {"type": "boolean"},
        "axiom_reports": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["axiom", "direction", "operator", "cases", "passed", "violations", "notes"],
                "properties": {
                    "axiom": {"enum": ["constants", "inequality", "inequality_theorem", "mb",
                                       "sandwich", "uniqueness"]},
                    "direction": {"type": "string"},
                    "operator": {"type": "string"},
                    "cases": {"type": "integer", "minimum": 0},
                    "passed": {"type": "boolean"},
                    "violations": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["function", "direction", "expected", "observed"],
                            "properties": {k: {"type": "string"} for k in
                                           ("function", "direction", "expected", "observed")},
                            "additionalProperties": False,
                        },
                    },
                    "notes": {"type": "array", "items": {"type": "string"}},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

SCHEMAS = {"limit": LIMIT, "riemann": LIMIT, "certify": CERTIFY, "axioms": AXIOMS}
