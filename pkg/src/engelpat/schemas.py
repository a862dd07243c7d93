"""JSON Schemas (draft 2020-12) for every JSON document the CLI emits."""

_INT_STR = {"type": "string", "pattern": r"^-?[0-9]+$"}
_RATIONAL = {"type": "string", "pattern": r"^-?[0-9]+/[0-9]+$"}
_DIGITS = {"type": "array", "items": _INT_STR}

PATTERN_SEQ = {
    "type": "object",
    "required": ["family", "enumeration", "a", "K", "thresholds", "values", "provenance"],
    "properties": {
        "family": {"type": "string"},
        "enumeration": {"enum": ["binary", "full-first"]},
        "a": {"type": "integer", "minimum": 5},
        "K": {"type": "integer", "minimum": 0},
        "thresholds": _DIGITS,
        "values": _DIGITS,
        "provenance": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["value", "k", "function"],
                "properties": {
                    "value": _INT_STR,
                    "k": {"type": "integer", "minimum": 1},
                    "function": {"type": "string"},
                },
            },
        },
    },
}

MERGED_POINT = {
    "type": "object",
    "required": ["a", "seed", "depth", "source_digits", "inserted", "merged", "value"],
    "properties": {
        "a": {"type": "integer", "minimum": 5},
        "seed": {"type": ["integer", "null"]},
        "depth": {"type": "integer", "minimum": 1},
        "source_digits": _DIGITS,
        "inserted": _DIGITS,
        "merged": _DIGITS,
        "value": _RATIONAL,
    },
}

_B_COUNT = {
    "type": "object",
    "required": ["ok", "N", "counts", "scope"],
    "properties": {
        "ok": {"type": "boolean"},
        "N": {"type": "integer"},
        "counts": {"type": "array", "items": {"type": "integer"}},
        "scope": {"type": "string"},
    },
}

EXPAND = {
    "type": "object",
    "required": ["command", "x", "depth", "digits", "cylinder"],
    "properties": {
        "command": {"const": "expand"},
        "x": _RATIONAL,
        "depth": {"type": "integer", "minimum": 1},
        "digits": _DIGITS,
        "cylinder": {
            "type": "object",
            "required": ["left", "right", "length", "log_length"],
            "properties": {
                "left": {"oneOf": [_RATIONAL, {"type": "null"}]},
                "right": {"oneOf": [_RATIONAL, {"type": "null"}]},
                "length": {"oneOf": [_RATIONAL, {"type": "null"}]},
                "log_length": {"type": "number"},
            },
        },
    },
}

FAMILY = {
    "type": "object",
    "required": ["command", "pattern", "b_count"],
    "properties": {
        "command": {"const": "family"},
        "pattern": PATTERN_SEQ,
        "b_count": _B_COUNT,
    },
}

CONSTRUCT = {
    "type": "object",
    "required": ["command", "version", "parameters", "pattern", "point", "verification"],
    "properties": {
        "command": {"const": "construct"},
        "version": {"type": "string"},
        "parameters": {"type": "object"},
        "pattern": PATTERN_SEQ,
        "point": MERGED_POINT,
        "verification": {
            "type": "object",
            "required": ["containment", "b_count", "dn_bound", "sample_in_E0",
                         "strictly_increasing", "all_pass"],
            "properties": {
                "containment": {
                    "type": "object",
                    "required": ["ok", "witnesses", "violated"],
                    "properties": {
                        "ok": {"type": "boolean"},
                        "witnesses": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["k", "t", "functions", "values", "present"],
                            },
                        },
                        "violated": {"type": "array", "items": {"type": "integer"}},
                    },
                },
                "b_count": _B_COUNT,
                "dn_bound": {
                    "type": "object",
                    "required": ["ok", "N", "margins"],
                    "properties": {"margins": {"type": "array", "items": {"type": "number"}}},
                },
                "sample_in_E0": {"type": "boolean"},
                "strictly_increasing": {"type": "boolean"},
                "all_pass": {"type": "boolean"},
            },
        },
    },
}

DETECT = {
    "type": "object",
    "required": ["query", "parameters", "found", "witness", "bound_searched"],
    "properties": {
        "query": {"enum": ["density", "ap", "gp", "translate", "scalar", "power"]},
        "parameters": {"type": "object"},
        "found": {"type": "boolean"},
        "witness": {"oneOf": [_INT_STR, {"type": "null"}]},
        "bound_searched": {"oneOf": [_INT_STR, {"type": "null"}]},
        "length": {"type": "integer", "minimum": 0},
        "profile": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["window", "start", "count", "density"],
                "properties": {"density": {"type": "number", "minimum": 0, "maximum": 1}},
            },
        },
    },
}

VERIFY_ALL = {
    "type": "object",
    "required": ["command", "version", "checks", "all_pass"],
    "properties": {
        "command": {"const": "verify-all"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "ok", "detail"],
                "properties": {"ok": {"type": "boolean"}},
            },
        },
        "all_pass": {"type": "boolean"},
    },
}

REPLAY = {
    "type": "object",
    "required": ["command", "manifest", "expected_sha256", "actual_sha256", "identical"],
    "properties": {"command": {"const": "replay"}, "identical": {"type": "boolean"}},
}

MANIFEST = {
    "type": "object",
    "required": ["command", "argv", "parameters", "version", "output_sha256"],
    "properties": {
        "command": {"type": "string"},
        "argv": {"type": "array", "items": {"type": "string"}},
        "parameters": {"type": "object"},
        "version": {"type": "string"},
        "output_sha256": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
    },
}

BY_COMMAND = {
    "expand": EXPAND,
    "family": FAMILY,
    "construct": CONSTRUCT,
    "detect": DETECT,
    "verify-all": VERIFY_ALL,
    "replay": REPLAY,
}
