"""JSON schemas for every JSON document the command line emits."""

_EMBEDDING = {
    "type": "object",
    "required": ["a_map", "b_map", "swapped", "induced"],
    "properties": {
        "a_map": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "b_map": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "swapped": {"type": "boolean"},
        "induced": {"type": "boolean"},
        "body_target": {
            "type": "object",
            "required": ["part", "subset"],
            "properties": {
                "part": {"enum": ["A", "B"]},
                "subset": {"type": ["array", "null"], "items": {"type": "integer"}},
            },
        },
    },
}

_VERDICT = {
    "type": "object",
    "required": ["ok", "kind", "pair"],
    "properties": {
        "ok": {"type": "boolean"},
        "kind": {"type": ["string", "null"]},
        "pair": {"type": ["array", "null"]},
    },
}

SCHEMAS = {
    "embed_search": {
        "type": "object",
        "required": ["status", "embedding"],
        "properties": {
            "status": {"enum": ["found", "absent", "inconclusive"]},
            "embedding": {"oneOf": [{"type": "null"}, _EMBEDDING]},
            "verdict": {"oneOf": [{"type": "null"}, _VERDICT]},
            "nodes": {"type": "integer"},
        },
    },
    "biclique": {
        "type": "object",
        "required": ["found"],
        "properties": {
            "found": {"type": ["boolean", "null"]},
            "a_set": {"type": "array", "items": {"type": "integer"}},
            "b_set": {"type": "array", "items": {"type": "integer"}},
            "inconclusive": {"type": "boolean"},
        },
    },
    "vc": {
        "type": "object",
        "required": ["dimension", "witness", "realizers", "exhaustive"],
        "properties": {
            "dimension": {"type": "integer", "minimum": -1},
            "witness": {"type": "array", "items": {"type": "integer"}},
            "realizers": {"type": "array"},
            "exhaustive": {"type": "boolean"},
        },
    },
    "count": {
        "type": "object",
        "required": ["count"],
        "properties": {"count": {"type": "integer", "minimum": 0}},
    },
    "verdict": _VERDICT,
    "deletion_report": {
        "type": "object",
        "required": ["n", "p", "gamma", "sampled_edges", "copies_found", "edges_deleted", "final_edges", "status"],
        "properties": {
            "n": {"type": "integer"},
            "p": {"type": "number"},
            "gamma": {"type": "string"},
            "sampled_edges": {"type": "integer"},
            "copies_found": {"type": "integer"},
            "edges_deleted": {"type": "integer"},
            "final_edges": {"type": "integer"},
            "status": {"enum": ["ok", "partial"]},
        },
    },
    "embedding_certificate": {
        "type": "object",
        "required": ["embedding", "verified"],
        "properties": {"embedding": _EMBEDDING, "verified": {"type": "boolean"}},
    },
    "pipeline": {
        "type": "object",
        "required": ["status", "embedding", "diagnostics"],
        "properties": {
            "status": {"enum": ["found", "absent", "inconclusive", "biclique"]},
            "path": {"type": ["string", "null"]},
            "embedding": {"oneOf": [{"type": "null"}, _EMBEDDING]},
            "certificate": {"type": ["array", "null"]},
            "diagnostics": {"type": "object"},
        },
    },
    "hypergraph": {
        "type": "object",
        "required": ["edges", "red", "blue", "ledger"],
        "properties": {
            "edges": {"type": "integer"},
            "red": {"type": "integer"},
            "blue": {"type": "integer"},
            "ledger": {"type": "object"},
            "collection": {"type": "object"},
        },
    },
    "bounds": {
        "type": "object",
        "required": ["value"],
        "properties": {"value": {"type": ["number", "string"]}},
    },
    "regularize": {
        "type": "object",
        "required": ["status", "n", "m", "edges", "rounds", "met_contract"],
        "properties": {
            "status": {"enum": ["ok", "hypothesis_unmet", "empty"]},
            "met_contract": {"type": "boolean"},
        },
    },
    "manifest": {
        "type": "object",
        "required": ["name", "kind", "version", "config", "outputs"],
    },
}
