"""Basis changes that commute with f, and the block bijection they induce."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .decomposition import decompose
from .errors import InternalInconsistencyError, OrbitHypothesisError
from .linalg import Subspace, mat_mul
from .serialize import vector_to_json
from .simplicity import Verdict
from .tensor import BasisChange, _check_compatible, change_of_basis, evaluate, pushed_products


@dataclass(frozen=True)
class OrbitCheck:
    verdict: bool
    witness: tuple | None = None  # basis tuple
    left: tuple | None = None  # f(g e_i1, ..., g e_in)
    right: tuple | None = None  # g f(e_i1, ..., e_in)

    def __bool__(self):
        return self.verdict

    def to_json(self, field):
        return {
            "in_orbit": self.verdict,
            "witness": None if self.witness is None else list(self.witness),
            "left": None if self.left is None else vector_to_json(field, self.left),
            "right": None if self.right is None else vector_to_json(field, self.right),
        }


def in_orbit(f, g):
    """Does f(g e_i1, ..., g e_in) = g f(e_i1, ..., e_in) on every basis tuple?

    Tuples outside both the expansion support and the stored entries have
    zero on both sides and are skipped.
    """
    _check_compatible(f, g)
    lhs = pushed_products(f, g)
    zero = (f.field.zero,) * f.dim
    for js in sorted(set(lhs) | set(f.entry_map)):
        left = lhs.get(js, zero)
        right = g.apply(f.output(js))
        if left != right:
            return OrbitCheck(False, js, left, right)
    return OrbitCheck(True)


@dataclass(frozen=True)
class IsoReport:
    sigma: dict  # block label -> block label
    images: dict  # block label -> RREF rows of g(span of block)
    passed: bool
    witness: dict | None = None

    def to_json(self, field):
        wit = None
        if self.witness is not None:
            wit = dict(self.witness)
            if "image" in wit:
                wit["image"] = [vector_to_json(field, r) for r in wit["image"]]
        return {
            "sigma": {str(k): v for k, v in sorted(self.sigma.items())},
            "pass": self.passed,
            "witness": wit,
        }


def induced_isomorphism(f, g, mode="pipeline"):
    """Match each block of decompose(f) with the block of the transported map it is sent to.

    Blocks are compared as subspaces in canonical RREF.  When g permutes the
    standard basis, the new basis is the old one relabelled, so block B goes
    to the block B' of change_of_basis(f, g) with g(span e_B) = span e_B'.
    For any other g the blocks of the transported map live in the basis
    {g(e_i)}, and B goes to the B' with g(span e_B) = span{g(e_j) : j in B'}.
    """
    orb = in_orbit(f, g)
    if not orb:
        raise OrbitHypothesisError(f"g does not commute with f on basis tuple {orb.witness}")
    D = decompose(f, mode)
    D2 = decompose(change_of_basis(f, g), mode)
    if g.as_permutation() is not None:
        targets = {Subspace.coordinate(f.field, f.dim, b): b[0] for b in D2.blocks}
    else:
        targets = {Subspace.span(f.field, f.dim, [g.column(j) for j in b]): b[0] for b in D2.blocks}
    sigma, images = {}, {}
    for b in D.blocks:
        img = Subspace.span(f.field, f.dim, [g.column(i) for i in b])
        images[b[0]] = img.rows
        lab = targets.get(img)
        if lab is None:
            return IsoReport(sigma, images, False, {"block": list(b), "image": img.rows})
        sigma[b[0]] = lab
    if len(set(sigma.values())) != len(D2.blocks) or len(sigma) != len(D.blocks):
        return IsoReport(sigma, images, False, {"reason": "block map is not a bijection"})
    return IsoReport(sigma, images, True)


def map_from_bases(B1, B2, mu):
    """The g with g(B1 column i) = B2 column mu[i]."""
    F = B1.field
    d = B1.dim
    if sorted(mu) != list(range(d)):
        raise ValueError("mu must be a permutation of range(d)")
    cols = [B2.column(mu[i]) for i in range(d)]
    # g = [u_mu(0) ... u_mu(d-1)] * B1^{-1}
    U = tuple(zip(*cols))
    return BasisChange(F, mat_mul(F, U, B1.inverse))


def check_corollary_premise(f, B1, B2, mu):
    """Check the corollary's identity for g(e_i) = u_mu(i), then its conclusion.

    Works in the coordinates of B1: the identity is checked on every tuple of
    B1 vectors, and a Yes is followed by induced_isomorphism on f written in
    B1 with g written in B1, whose pass is asserted.
    """
    _check_compatible(f, B1)
    _check_compatible(f, B2)
    F = f.field
    g = map_from_bases(B1, B2, mu)
    gb = [g.apply(B1.column(i)) for i in range(f.dim)]
    for idx in itertools.product(range(f.dim), repeat=f.arity):
        left = evaluate(f, *[gb[i] for i in idx])
        right = g.apply(evaluate(f, *[B1.column(i) for i in idx]))
        if left != right:
            return Verdict("no", {"tuple": list(idx), "left": left, "right": right})
    f1 = change_of_basis(f, B1)
    g1 = BasisChange(F, mat_mul(F, B1.inverse, mat_mul(F, g.matrix, B1.matrix)))
    report = induced_isomorphism(f1, g1)
    if not report.passed:
        raise InternalInconsistencyError(f"corollary premise holds but blocks do not correspond: {report.witness}")
    return Verdict("yes", {"sigma": report.sigma})


def permutation_orbit(f):
    """All coordinate permutations (as tuples) lying in the orbit group of f."""
    out = []
    for perm in itertools.permutations(range(f.dim)):
        if in_orbit(f, BasisChange.permutation(f.field, perm)):
            out.append(perm)
    return out
