"""JSON rendering of witnesses that mix indices with field vectors."""

VECTOR_KEYS = {"w", "image", "vector", "missing", "u", "v", "value", "left", "right"}
VECTOR_LIST_KEYS = {"b", "annihilator", "closure", "rows"}


def vector_to_json(field, v):
    return [field.format(x) for x in v]


def _plain(obj):
    if isinstance(obj, (tuple, list)):
        return [_plain(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    return obj


def witness_to_json(field, witness):
    if witness is None:
        return None
    out = {}
    for key, val in witness.items():
        if key in VECTOR_KEYS and val is not None:
            out[key] = vector_to_json(field, val)
        elif key in VECTOR_LIST_KEYS and val is not None:
            out[key] = [vector_to_json(field, v) for v in val]
        else:
            out[key] = _plain(val)
    return out
