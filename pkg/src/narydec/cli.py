"""Command-line interface: ``narydec <command> --input TENSOR ...``.

Exit codes: 0 success or pass, 1 a verified negative or failed check,
2 invalid input.  Output depends only on the inputs and flags.
"""

from __future__ import annotations

import argparse
import itertools
import json
import re
import sys

from .connection import connected, reverse_connection, verify_connection
from .decomposition import MODES, decompose, to_dot, verify_decomposition
from .equivariance import in_orbit, induced_isomorphism
from .errors import (
    FormatError,
    InternalInconsistencyError,
    NarydecError,
    OrbitHypothesisError,
    SearchExhausted,
    UnsupportedFieldError,
)
from .io import dumps_tensor, random_tensor, resolve_input, resolve_matrix
from .linalg import Subspace
from .scalars import QQ, Field
from .serialize import vector_to_json
from .simplicity import cross_check_ane100, is_f_simple, is_i_division_basis, restrict
from .tensor import annihilator, check_pair_orthogonal

ROUTES = ("characterization", "direct", "both")


class Failure(Exception):
    """A verified negative: print the message and exit 1."""


def _dump(obj):
    return json.dumps(obj, indent=1, ensure_ascii=False) + "\n"


def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _blocks(p):
    return "[" + ", ".join("{" + ",".join(map(str, b)) + "}" for b in p.blocks) + "]"


def _describe(doc):
    f = doc.tensor
    name = doc.name or "tensor"
    return f"{name}: field {f.field}, dim {f.dim}, arity {f.arity}, {len(f.entries)} nonzero entries"


def _vec(field, v):
    return "(" + ", ".join(vector_to_json(field, v)) + ")"


def _span(field, rows):
    if not rows:
        return "0"
    return "span{" + ", ".join(_vec(field, r) for r in rows) + "}"


def _verdict_line(field, v):
    line = v.outcome
    w = v.witness
    if w is not None:
        reason = w.get("reason", "")
        if reason in ("nonzero annihilator", "zero product") and "annihilator" in w:
            line += f" ({reason}; annihilator {_span(field, w['annihilator'])})"
        elif reason == "proper invariant subspace":
            line += f" ({reason}; I{_vec(field, w['vector'])} = {_span(field, w['closure'])})"
        elif reason == "not an i-division basis":
            line += (
                f" ({reason}; i={w['basis_index']} slot={w['slot']} w={_vec(field, w['w'])}"
                f" misses {_vec(field, w['missing'])})"
            )
        elif reason:
            line += f" ({reason})"
    if v.outcome == "unknown":
        line += f" (refutation search found nothing; seed {v.seed}, budget {v.budget})"
    return line


# -- commands ------------------------------------------------------------------


def cmd_decompose(args, out):
    doc = resolve_input(args.input)
    f = doc.tensor
    try:
        D = decompose(f, args.mode)
    except UnsupportedFieldError as e:
        raise FormatError("mode", str(e)) from None
    report = verify_decomposition(f, D.stage2)
    out.append(_describe(doc))
    out.append(f"mode: {D.mode}")
    out.append(f"stage 1 (~ classes): {D.stage1}")
    out.append(f"stage 2 (merged): {D.stage2}")
    out.append(f"blocks: {D.stage2}")
    out.append(
        "verification: "
        + ("orthogonal" if report.orthogonal else "NOT orthogonal")
        + ", "
        + ("strongly invariant" if report.invariant else "NOT strongly invariant")
        + f", {len(report.violations)} violations"
    )
    if args.emit_json:
        _write(args.emit_json, _dump({**D.to_json(), "verification": report.to_json()}))
    if args.emit_dot:
        _write(args.emit_dot, to_dot(f, D.stage2, doc.name or "interaction"))
    if not report.ok:
        raise InternalInconsistencyError("decomposition failed verification")


def _select_blocks(D, label):
    if label is None:
        return list(D.blocks)
    for b in D.blocks:
        if b[0] == label:
            return [b]
    raise FormatError("block", f"{label} is not a block label; labels are {[b[0] for b in D.blocks]}")


def cmd_simplicity(args, out):
    doc = resolve_input(args.input)
    f = doc.tensor
    D = decompose(f, "pipeline")
    blocks = _select_blocks(D, args.block)
    out.append(_describe(doc))
    out.append(f"blocks: {D.stage2}")
    results = []
    disagree = False
    for b in blocks:
        rm = restrict(f, b, D.stage2)
        entry = {"block": list(b)}
        head = f"block {{{','.join(map(str, b))}}}"
        if args.route == "both":
            cc = cross_check_ane100(rm, seed=args.seed)
            entry.update(cc.to_json(f.field))
            out.append(f"{head} characterization: {_verdict_line(f.field, cc.characterization)}")
            out.append(f"{head} direct: {_verdict_line(f.field, cc.direct)}")
            agree = {True: "yes", False: "NO", None: "undetermined"}[cc.agree]
            out.append(f"{head} routes agree: {agree}")
            disagree |= cc.agree is False
        else:
            v = is_f_simple(rm, args.route, seed=args.seed)
            entry[args.route] = v.to_json(f.field)
            out.append(f"{head} {args.route}: {_verdict_line(f.field, v)}")
        results.append(entry)
    out.append("witness vectors are in block coordinates (block member t is coordinate t)")
    if args.emit_json:
        _write(args.emit_json, _dump({"blocks": results}))
    if disagree:
        raise Failure("the two simplicity routes disagree")


def cmd_compare_bases(args, out):
    doc = resolve_input(args.input)
    f = doc.tensor
    g = resolve_matrix(args.g, f.field)
    if g.dim != f.dim:
        raise FormatError("g", f"matrix is {g.dim}x{g.dim}, tensor dimension is {f.dim}")
    out.append(_describe(doc))
    orb = in_orbit(f, g)
    data = {"orbit": orb.to_json(f.field)}
    if not orb:
        out.append(
            f"in orbit: no; witness tuple ({','.join(map(str, orb.witness))}): "
            f"f(g e..) = {_vec(f.field, orb.left)} but g f(e..) = {_vec(f.field, orb.right)}"
        )
        if args.emit_json:
            _write(args.emit_json, _dump(data))
        raise Failure("g is not in the orbit group of f")
    out.append("in orbit: yes")
    try:
        rep = induced_isomorphism(f, g, args.mode)
    except OrbitHypothesisError as e:  # pragma: no cover - in_orbit already passed
        raise InternalInconsistencyError(str(e)) from None
    data["isomorphism"] = rep.to_json(f.field)
    sigma = ", ".join(f"{k} -> {v}" for k, v in sorted(rep.sigma.items()))
    out.append(f"sigma: {sigma}")
    out.append("isomorphism: " + ("pass" if rep.passed else f"FAIL {rep.witness}"))
    if args.emit_json:
        _write(args.emit_json, _dump(data))
    if not rep.passed:
        raise InternalInconsistencyError("g is in the orbit but the decompositions do not correspond")


def cmd_connect(args, out):
    doc = resolve_input(args.input)
    f = doc.tensor
    for name, x in (("from", args.source), ("to", args.target)):
        if not 0 <= x < f.dim:
            raise FormatError(name, f"index {x} out of range [0, {f.dim})")
    out.append(_describe(doc))
    try:
        c = connected(f, args.source, args.target, args.max_depth, args.max_set_size)
    except SearchExhausted:
        out.append(f"e{args.source} -> e{args.target}: not found within limits")
        raise Failure("search exhausted") from None
    if c is None:
        out.append(f"e{args.source} -> e{args.target}: not connected")
        if args.emit_json:
            _write(args.emit_json, _dump({"from": args.source, "to": args.target, "connection": None}))
        raise Failure("not connected")
    r = reverse_connection(c)
    ok, rok = verify_connection(f, c), verify_connection(f, r)
    out.append(f"connection e{c.source} -> e{c.target}: {c}  ({'verified' if ok else 'REPLAY FAILED'})")
    out.append(f"reversed e{r.source} -> e{r.target}: {r}  ({'verified' if rok else 'REPLAY FAILED'})")
    if args.emit_json:
        _write(
            args.emit_json,
            _dump({"connection": c.to_json(f.field), "reversed": r.to_json(f.field), "verified": [ok, rok]}),
        )
    if not (ok and rok):
        raise InternalInconsistencyError("connection replay failed")


def cmd_report(args, out):
    doc = resolve_input(args.input)
    f = doc.tensor
    D = decompose(f, "pipeline")
    ver = verify_decomposition(f, D.stage2)
    spaces = {b: Subspace.coordinate(f.field, f.dim, b) for b in D.blocks}
    pairs_ok = all(
        check_pair_orthogonal(f, spaces[a], spaces[b]) for a, b in itertools.combinations(D.blocks, 2)
    )
    out.append(_describe(doc))
    out.append(f"the algebra is the direct sum of {len(D.blocks)} ideals: {D.stage2}")
    out.append("ideals pairwise annihilate each other: " + ("yes" if pairs_ok and ver.ok else "NO"))
    ideals = []
    for b in D.blocks:
        rm = restrict(f, b, D.stage2)
        ann = annihilator(rm.tensor)
        div = is_i_division_basis(rm, seed=args.seed)
        simple = is_f_simple(rm, "characterization", seed=args.seed)
        label = "{" + ",".join(f"e{i}" for i in b) + "}"
        product = "zero" if rm.tensor.is_zero else "nonzero"
        out.append(f"ideal {label}:")
        out.append(f"  product: {product}")
        out.append(f"  annihilator: {_span(f.field, ann.rows)}")
        out.append(f"  basis is an i-division basis: {div.outcome}")
        out.append(f"  simple: {simple.outcome}")
        ideals.append(
            {
                "ideal": list(b),
                "product_nonzero": not rm.tensor.is_zero,
                "annihilator": [vector_to_json(f.field, r) for r in ann.rows],
                "i_division": div.to_json(f.field),
                "simple": simple.to_json(f.field),
            }
        )
    if args.emit_json:
        _write(
            args.emit_json,
            _dump({"ideals": ideals, "pairwise_orthogonal": pairs_ok, "verification": ver.to_json()}),
        )
    if not (pairs_ok and ver.ok):
        raise InternalInconsistencyError("ideals fail the orthogonality check")


def parse_field_flag(text):
    t = text.strip()
    if t.upper() == "Q":
        return QQ
    m = re.fullmatch(r"(?:GF\(?)?(\d+)\)?", t, flags=re.IGNORECASE)
    if m is None:
        raise FormatError("field", f"expected Q or GF(p), got {text!r}")
    try:
        return Field(int(m.group(1)))
    except ValueError as e:
        raise FormatError("field", str(e)) from None


def cmd_gen_random(args, out):
    field = parse_field_flag(args.field)
    if args.dim < 1:
        raise FormatError("dim", "must be >= 1")
    if args.arity < 2:
        raise FormatError("arity", "must be >= 2")
    if not 0 < args.density <= 1:
        raise FormatError("density", "must lie in (0, 1]")
    f = random_tensor(field, args.dim, args.arity, args.density, args.seed)
    name = f"random-{args.field}-d{args.dim}-n{args.arity}-s{args.seed}"
    text = dumps_tensor(f, name=name, source=f"gen-random density={args.density} seed={args.seed}")
    if args.output:
        _write(args.output, text)
        out.append(f"wrote {args.output}: {len(f.entries)} nonzero entries")
    else:
        sys.stdout.write(text)


# -- parser ----------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="narydec", description="Decompose n-linear maps given by structure constants.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, modes=True):
        p.add_argument("--input", required=True, help="tensor JSON file or bundled corpus name")
        p.add_argument("--emit-json", metavar="PATH", help="write machine-readable results (- for stdout)")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized refutation over Q")
        if modes:
            p.add_argument("--mode", choices=MODES, default="pipeline")

    p = sub.add_parser("decompose", help="blocks of the basis-induced decomposition")
    common(p)
    p.add_argument("--emit-dot", metavar="PATH", help="write the interaction hypergraph as DOT")
    p.set_defaults(run=cmd_decompose)

    p = sub.add_parser("simplicity", help="simplicity verdict for each block")
    common(p, modes=False)
    p.add_argument("--block", type=int, help="block label (its smallest index)")
    p.add_argument("--route", choices=ROUTES, default="both")
    p.set_defaults(run=cmd_simplicity)

    p = sub.add_parser("compare-bases", help="check a basis change against f and match blocks")
    common(p)
    p.add_argument("--g", required=True, help="matrix JSON file (columns are g(e_i)) or bundled matrix name")
    p.set_defaults(run=cmd_compare_bases)

    p = sub.add_parser("connect", help="search for a connection between two basis vectors")
    common(p, modes=False)
    p.add_argument("--from", dest="source", type=int, required=True)
    p.add_argument("--to", dest="target", type=int, required=True)
    p.add_argument("--max-depth", type=int)
    p.add_argument("--max-set-size", type=int)
    p.set_defaults(run=cmd_connect)

    p = sub.add_parser("report", help="ideals and their simplicity, in algebra vocabulary")
    common(p, modes=False)
    p.set_defaults(run=cmd_report)

    p = sub.add_parser("gen-random", help="write a seeded random tensor")
    p.add_argument("--field", default="GF(2)", help="Q or GF(p)")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--arity", type=int, default=2)
    p.add_argument("--density", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", metavar="PATH")
    p.set_defaults(run=cmd_gen_random)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    out = []
    code = 0
    try:
        args.run(args, out)
    except Failure:
        code = 1
    except FormatError as e:
        sys.stdout.write("".join(line + "\n" for line in out))
        print(f"narydec: invalid input: {e}", file=sys.stderr)
        return 2
    except InternalInconsistencyError as e:
        out.append(f"internal inconsistency: {e}")
        code = 1
    except (NarydecError, ValueError) as e:
        sys.stdout.write("".join(line + "\n" for line in out))
        print(f"narydec: {e}", file=sys.stderr)
        return 2
    sys.stdout.write("".join(line + "\n" for line in out))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
