"""Tensor and matrix file formats.

Tensor document::

    {"field": "Q" | {"GF": p}, "dim": d, "arity": n,
     "entries": [{"args": [i1, ..., in], "out": {"k": "scalar", ...}}, ...],
     "name": optional, "source": optional}

Indices are 0-based.  Duplicate argument tuples and zero coefficients are
rejected.  A matrix file is a JSON array of rows of scalar strings.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from importlib import resources
from fractions import Fraction
from pathlib import Path

from .errors import FormatError, ScalarFormatError
from .scalars import QQ, Field, parse_raw
from .tensor import BasisChange, StructureTensor


@dataclass(frozen=True)
class TensorDocument:
    tensor: StructureTensor
    name: str | None = None
    source: str | None = None


def parse_field(value):
    if value == "Q":
        return QQ
    if isinstance(value, dict) and set(value) == {"GF"}:
        p = value["GF"]
        if isinstance(p, bool) or not isinstance(p, int):
            raise FormatError("field", f"GF characteristic must be an integer, got {p!r}")
        try:
            return Field(p)
        except ValueError as e:
            raise FormatError("field", str(e)) from None
    raise FormatError("field", f'expected "Q" or {{"GF": p}}, got {value!r}')


def _int(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(where, f"expected an integer, got {value!r}")
    return value


def tensor_from_json(doc):
    if not isinstance(doc, dict):
        raise FormatError("document", "expected a JSON object")
    for key in ("field", "dim", "arity", "entries"):
        if key not in doc:
            raise FormatError(key, "missing")
    field = parse_field(doc["field"])
    dim = _int(doc["dim"], "dim")
    if dim < 1:
        raise FormatError("dim", f"must be >= 1, got {dim}")
    arity = _int(doc["arity"], "arity")
    if arity < 2:
        raise FormatError("arity", f"must be >= 2, got {arity}")
    if not isinstance(doc["entries"], list):
        raise FormatError("entries", "expected a list")
    entries = {}
    for n, e in enumerate(doc["entries"]):
        where = f"entries[{n}]"
        if not isinstance(e, dict) or "args" not in e or "out" not in e:
            raise FormatError(where, 'expected {"args": [...], "out": {...}}')
        args = e["args"]
        if not isinstance(args, list) or len(args) != arity:
            raise FormatError(f"{where}.args", f"expected {arity} indices")
        args = tuple(_int(a, f"{where}.args") for a in args)
        if any(not 0 <= a < dim for a in args):
            raise FormatError(f"{where}.args", f"index out of range [0, {dim})")
        if args in entries:
            raise FormatError(f"{where}.args", f"duplicate argument tuple {list(args)}")
        out = e["out"]
        if not isinstance(out, dict):
            raise FormatError(f"{where}.out", "expected an object")
        coeffs = {}
        for k, text in out.items():
            try:
                ki = int(k)
            except ValueError:
                raise FormatError(f"{where}.out", f"output index {k!r} is not an integer") from None
            if not 0 <= ki < dim:
                raise FormatError(f"{where}.out", f"output index {ki} out of range")
            if not isinstance(text, str):
                raise FormatError(f"{where}.out[{k}]", "coefficients must be scalar strings")
            try:
                c = parse_raw(text, field)
            except ScalarFormatError as err:
                raise FormatError(f"{where}.out[{k}]", str(err)) from None
            if c == 0:
                raise FormatError(f"{where}.out[{k}]", "zero coefficient (sparsity is canonical)")
            coeffs[ki] = c
        entries[args] = coeffs
    tensor = StructureTensor(field, dim, arity, entries)
    return TensorDocument(tensor, doc.get("name"), doc.get("source"))


def tensor_to_json(f, name=None, source=None):
    doc = {}
    if name is not None:
        doc["name"] = name
    if source is not None:
        doc["source"] = source
    doc.update(
        {
            "field": f.field.to_json(),
            "dim": f.dim,
            "arity": f.arity,
            "entries": [
                {"args": list(args), "out": {str(k): f.field.format(c) for k, c in out}}
                for args, out in f.entries
            ],
        }
    )
    return doc


def dumps_tensor(f, name=None, source=None):
    return json.dumps(tensor_to_json(f, name, source), indent=1, ensure_ascii=False) + "\n"


def load_tensor(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise FormatError("input", str(e)) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError("document", f"invalid JSON: {e}") from None
    return tensor_from_json(doc)


def matrix_from_json(data, field):
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise FormatError("matrix", "expected a non-empty array of rows")
    d = len(data)
    rows = []
    for r, row in enumerate(data):
        if len(row) != d:
            raise FormatError(f"matrix[{r}]", f"expected {d} entries (square matrix)")
        try:
            rows.append(tuple(parse_raw(x, field) if isinstance(x, str) else field.coerce(_int(x, f"matrix[{r}]")) for x in row))
        except ScalarFormatError as e:
            raise FormatError(f"matrix[{r}]", str(e)) from None
    return tuple(rows)


def load_basis_change(path, field):
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise FormatError("g", str(e)) from None
    except json.JSONDecodeError as e:
        raise FormatError("g", f"invalid JSON: {e}") from None
    m = matrix_from_json(data, field)
    try:
        return BasisChange(field, m)
    except ValueError as e:
        raise FormatError("g", str(e)) from None


def matrix_to_json(field, M):
    return [[field.format(x) for x in row] for row in M]


# -- bundled corpus ------------------------------------------------------------


def _corpus_dir():
    return resources.files("narydec") / "corpus"


def corpus_names():
    """Names of the bundled tensors (matrix files excluded)."""
    return sorted(
        e.name[: -len(".json")]
        for e in _corpus_dir().iterdir()
        if e.name.endswith(".json") and not e.name.startswith("matrix-")
    )


def _corpus_entry(stem):
    for e in _corpus_dir().iterdir():
        if e.name.lower() == stem.lower() + ".json":
            return e
    return None


def load_corpus(name):
    entry = _corpus_entry(name)
    if entry is None or entry.name.startswith("matrix-"):
        raise FormatError("input", f"no corpus tensor named {name!r}")
    return tensor_from_json(json.loads(entry.read_text(encoding="utf-8")))


def corpus_matrix(name, field):
    entry = _corpus_entry("matrix-" + name)
    if entry is None:
        raise FormatError("g", f"no corpus matrix named {name!r}")
    return BasisChange(field, matrix_from_json(json.loads(entry.read_text(encoding="utf-8")), field))


def resolve_input(arg):
    """A path to a tensor file, or the name of a bundled corpus tensor."""
    if Path(arg).is_file():
        return load_tensor(arg)
    if _corpus_entry(arg) is not None:
        return load_corpus(arg)
    raise FormatError("input", f"{arg!r} is neither a file nor a corpus name")


def resolve_matrix(arg, field):
    if Path(arg).is_file():
        return load_basis_change(arg, field)
    if _corpus_entry("matrix-" + arg) is not None:
        return corpus_matrix(arg, field)
    raise FormatError("g", f"{arg!r} is neither a file nor a corpus matrix")


# -- random instances ------------------------------------------------------------


_Q_COEFFS = (Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2), Fraction(-3))


def random_tensor(field, dim, arity, density, seed):
    """Seeded sparse tensor: each tuple present with probability density."""
    rng = random.Random(seed)
    entries = {}
    for args in itertools.product(range(dim), repeat=arity):
        if rng.random() >= density:
            continue
        support = [k for k in range(dim) if rng.random() < 0.5] or [rng.randrange(dim)]
        out = {}
        for k in support:
            out[k] = rng.randrange(1, field.p) if field.is_finite else rng.choice(_Q_COEFFS)
        entries[args] = out
    return StructureTensor(field, dim, arity, entries)
