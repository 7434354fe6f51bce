"""Basis-induced decompositions into orthogonal, strongly invariant blocks.

Stage 1 partitions the basis by connectivity (~), stage 2 merges stage-1
classes whose same-class products project onto each other (the refinement
written ``approx_refine`` below).  ``pipeline`` mode builds stage 1 from two
rules read off the sparse entries; ``exact-bfs`` mode decides ~ by
exhaustive search over GF(p)^d.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .connection import tilde_exact_union_find
from .errors import InternalInconsistencyError, UnsupportedFieldError
from .linalg import Subspace
from .partition import Partition, UnionFind
from .tensor import check_pair_orthogonal, is_strongly_invariant

MODES = ("pipeline", "exact-bfs")


def tilde_generators(f):
    """Sound under-approximation of ~.

    Co-arguments of a nonzero entry are connected (two steps: the product,
    then back through the barred tuple), and an entry whose value is
    exactly e_j connects each argument to j in one step.
    """
    uf = UnionFind(f.dim)
    one = f.field.one
    for args, out in f.entries:
        uf.union_all(args)
        if len(out) == 1 and out[0][1] == one:
            for a in args:
                uf.union(a, out[0][0])
    return uf.partition()


def tilde_exact(f):
    """~ decided exactly by connection search (prime fields, small q^d)."""
    if not f.field.is_finite:
        raise UnsupportedFieldError("exact ~ needs a prime field")
    return tilde_exact_union_find(f).partition()


def approx_refine(f, p):
    """Merge class C with every class its same-class products project onto.

    Classes are those of the input partition; the chain clause of the
    relation is the transitive closure done by the union-find.
    """
    uf = p.union_find()
    lab = {i: b[0] for b in p.blocks for i in b}
    n = f.arity
    for args, out in f.entries:
        pair = next(
            ((a, b) for a in range(n) for b in range(a + 1, n) if lab[args[a]] == lab[args[b]]),
            None,
        )
        if pair is None:
            continue
        c = args[pair[0]]
        for k, _ in out:
            uf.union(c, k)
    return uf.partition()


def hyperedge_partition(f):
    """Components of the hypergraph with one edge per entry: args plus output support."""
    uf = UnionFind(f.dim)
    for args, out in f.entries:
        uf.union_all(list(args) + [k for k, _ in out])
    return uf.partition()


@dataclass(frozen=True)
class Violation:
    kind: str  # "orthogonality" or "invariance"
    args: tuple
    detail: str

    def to_json(self):
        return {"kind": self.kind, "args": list(self.args), "detail": self.detail}


@dataclass(frozen=True)
class VerificationReport:
    violations: tuple = ()

    @property
    def ok(self):
        return not self.violations

    @property
    def orthogonal(self):
        return not any(v.kind == "orthogonality" for v in self.violations)

    @property
    def invariant(self):
        return not any(v.kind == "invariance" for v in self.violations)

    def to_json(self):
        return {
            "orthogonal": self.orthogonal,
            "invariant": self.invariant,
            "violations": [v.to_json() for v in self.violations],
        }


def verify_decomposition(f, p):
    """Per-entry check of a basis-aligned partition.

    A nonzero entry must have all its arguments in one block (orthogonality)
    and its output support inside the block of each argument (invariance).
    """
    lab = {i: b[0] for b in p.blocks for i in b}
    found = []
    for args, out in f.entries:
        arg_labels = sorted({lab[a] for a in args})
        if len(arg_labels) > 1:
            found.append(Violation("orthogonality", args, f"arguments span blocks {arg_labels}"))
        support = [k for k, _ in out]
        escaping = sorted({k for k in support for L in arg_labels if lab[k] != L})
        if escaping:
            found.append(Violation("invariance", args, f"output support {escaping} leaves the argument block"))
    return VerificationReport(tuple(found))


@dataclass(frozen=True)
class Decomposition:
    tensor: object = dc_field(repr=False)
    mode: str
    stage1: Partition
    stage2: Partition

    @property
    def blocks(self):
        return self.stage2.blocks

    def to_json(self):
        return {
            "mode": self.mode,
            "stage1": self.stage1.as_lists(),
            "stage2": self.stage2.as_lists(),
            "blocks": self.stage2.as_lists(),
        }


def self_check(f, p):
    """Subspace-level orthogonality and invariance of every block, or raise."""
    spaces = [Subspace.coordinate(f.field, f.dim, b) for b in p.blocks]
    for b, W in zip(p.blocks, spaces):
        res = is_strongly_invariant(f, W)
        if not res:
            raise InternalInconsistencyError(f"block {list(b)} is not strongly invariant: {res.witness}")
    for x in range(len(spaces)):
        for y in range(x + 1, len(spaces)):
            res = check_pair_orthogonal(f, spaces[x], spaces[y])
            if not res:
                raise InternalInconsistencyError(
                    f"blocks {list(p.blocks[x])} and {list(p.blocks[y])} are not orthogonal: {res.witness}"
                )


def decompose(f, mode="pipeline"):
    if mode == "pipeline":
        stage1 = tilde_generators(f)
    elif mode == "exact-bfs":
        stage1 = tilde_exact(f)
    else:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    stage2 = approx_refine(f, stage1)
    if not stage1.refines(stage2):
        raise InternalInconsistencyError("stage 2 does not coarsen stage 1")
    self_check(f, stage2)
    return Decomposition(f, mode, stage1, stage2)


def to_dot(f, p, name="interaction"):
    """DOT text of the interaction hypergraph with blocks drawn as clusters."""
    lines = [f'graph "{name}" {{', "  node [shape=circle];"]
    for b in p.blocks:
        lines.append(f"  subgraph cluster_{b[0]} {{")
        lines.append(f'    label="block {b[0]}";')
        for i in b:
            lines.append(f"    e{i};")
        lines.append("  }")
    for n, (args, out) in enumerate(f.entries):
        members = sorted(set(args) | {k for k, _ in out})
        label = "(" + ",".join(map(str, args)) + ")"
        lines.append(f'  h{n} [shape=point, xlabel="{label}"];')
        for i in members:
            lines.append(f"  h{n} -- e{i};")
    lines.append("}")
    return "\n".join(lines) + "\n"
