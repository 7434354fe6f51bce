"""Sparse structure-constant tensors of n-linear maps and their linear algebra.

A map f on F^d is stored by its values on basis tuples,
``f(e_{i1}, ..., e_{in}) = sum_k c_k e_k``, keeping only nonzero
coefficients.  Every "for all v in V" quantifier below (annihilator, strong
invariance, orthogonality) is reduced to basis fills: f is multilinear, so a
linear condition that holds on a basis of each free slot holds everywhere.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .errors import FieldMismatchError
from .linalg import (
    Subspace,
    add_scaled,
    identity_matrix,
    is_zero,
    mat_inverse,
    mat_mul,
    mat_vec,
    nullspace,
    unit_vector,
    zero_vector,
)
from .scalars import Field


@dataclass(frozen=True)
class StructureTensor:
    """Structure constants of an n-linear map on a d-dimensional space.

    ``entries`` may be given as a mapping ``{args: {k: coeff}}`` or as an
    iterable of pairs; it is normalised to a sorted tuple
    ``((args, ((k, c), ...)), ...)`` with zero coefficients and empty outputs
    dropped, so two tensors compare equal iff they define the same map.
    """

    field: Field
    dim: int
    arity: int
    entries: tuple = ()

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dim}")
        if self.arity < 2:
            raise ValueError(f"arity must be >= 2, got {self.arity}")
        items = self.entries.items() if hasattr(self.entries, "items") else self.entries
        norm = {}
        for args, out in items:
            args = tuple(int(a) for a in args)
            if len(args) != self.arity:
                raise ValueError(f"argument tuple {args} does not have arity {self.arity}")
            if any(not 0 <= a < self.dim for a in args):
                raise ValueError(f"argument index out of range in {args}")
            if args in norm:
                raise ValueError(f"duplicate argument tuple {args}")
            out_items = out.items() if hasattr(out, "items") else out
            coeffs = {}
            for k, c in out_items:
                k = int(k)
                if not 0 <= k < self.dim:
                    raise ValueError(f"output index {k} out of range in entry {args}")
                c = self.field.add(coeffs.get(k, self.field.zero), self.field.coerce(c))
                coeffs[k] = c
            coeffs = tuple(sorted((k, c) for k, c in coeffs.items() if c != 0))
            if coeffs:
                norm[args] = coeffs
        object.__setattr__(self, "entries", tuple(sorted(norm.items())))

    @classmethod
    def zero(cls, field, dim, arity=2):
        return cls(field, dim, arity, ())

    @cached_property
    def entry_map(self):
        return {args: dict(out) for args, out in self.entries}

    def output(self, args):
        """Dense output vector of f on the basis tuple ``args``."""
        v = [self.field.zero] * self.dim
        for k, c in self.entry_map.get(tuple(args), {}).items():
            v[k] = c
        return tuple(v)

    @property
    def is_zero(self):
        return not self.entries

    @cached_property
    def slot_columns(self):
        """Nonzero slot operators in sparse column form.

        Key ``(slot, fill)`` with 0-based slot and the n-1 indices of the other
        slots in order; value ``{j: output of f with e_j at slot}``.
        """
        ops = defaultdict(dict)
        for args, out in self.entries:
            for s in range(self.arity):
                fill = args[:s] + args[s + 1:]
                ops[(s, fill)][args[s]] = self._dense(out)
        return dict(sorted(ops.items()))

    def _dense(self, out):
        v = [self.field.zero] * self.dim
        for k, c in out:
            v[k] = c
        return tuple(v)

    def apply_slot(self, key, u):
        """Image of u under the slot operator ``key``."""
        cols = self.slot_columns.get(key)
        v = zero_vector(self.field, self.dim)
        if not cols:
            return v
        for j, col in cols.items():
            if u[j] != 0:
                v = add_scaled(self.field, v, u[j], col)
        return v

    def __str__(self):
        return f"StructureTensor({self.field}, dim={self.dim}, arity={self.arity}, {len(self.entries)} entries)"


def _check_vector(f, v):
    if len(v) != f.dim:
        raise ValueError(f"vector of length {len(v)} for a map on dimension {f.dim}")


def evaluate(f, *args):
    """f(v1, ..., vn) by multilinear expansion over the stored entries."""
    if len(args) != f.arity:
        raise ValueError(f"expected {f.arity} arguments, got {len(args)}")
    args = [tuple(f.field.coerce(x) for x in v) for v in args]
    for v in args:
        _check_vector(f, v)
    F = f.field
    acc = [F.zero] * f.dim
    for idx, out in f.entries:
        c = F.one
        for v, i in zip(args, idx):
            c = c * v[i]
            if c == 0:
                break
        if c == 0:
            continue
        for k, x in out:
            acc[k] = F.reduce(acc[k] + c * x)
    return tuple(acc)


def slot_operator(f, fill, slot):
    """Matrix of ``u -> f(fill with u inserted at slot)``; slot is 1-based."""
    if not 1 <= slot <= f.arity:
        raise ValueError(f"slot {slot} outside [1, {f.arity}]")
    fill = tuple(fill)
    if len(fill) != f.arity - 1:
        raise ValueError(f"fill must have {f.arity - 1} indices")
    if any(not 0 <= i < f.dim for i in fill):
        raise ValueError(f"fill index out of range in {fill}")
    cols = f.slot_columns.get((slot - 1, fill), {})
    z = f.field.zero
    return tuple(
        tuple(cols[j][r] if j in cols else z for j in range(f.dim)) for r in range(f.dim)
    )


def annihilator(f):
    """Ann(f) as the common kernel of every slot operator."""
    rows = []
    for cols in f.slot_columns.values():
        for r in range(f.dim):
            row = tuple(cols[j][r] if j in cols else f.field.zero for j in range(f.dim))
            if any(row):
                rows.append(row)
    return Subspace.span(f.field, f.dim, nullspace(f.field, rows, f.dim))


def _slot_images(f, v):
    for key in f.slot_columns:
        yield key, f.apply_slot(key, v)


def invariant_closure(f, seeds):
    """Smallest strongly f-invariant subspace containing every seed."""
    F = f.field
    basis = []  # echelon rows, pivot first nonzero and equal to 1
    pivots = []

    def reduce(v):
        for row, pc in zip(basis, pivots):
            if v[pc] != 0:
                v = add_scaled(F, v, F.neg(v[pc]), row)
        return v

    queue = [tuple(F.coerce(x) for x in s) for s in seeds]
    for s in queue:
        _check_vector(f, s)
    while queue:
        v = reduce(queue.pop())
        if is_zero(v):
            continue
        pc = next(i for i, x in enumerate(v) if x != 0)
        inv = F.inv(v[pc])
        v = tuple(F.reduce(x * inv) for x in v)
        basis.append(v)
        pivots.append(pc)
        if len(basis) == f.dim:
            break
        queue.extend(img for _, img in _slot_images(f, v) if not is_zero(img))
    return Subspace.span(F, f.dim, basis)


@dataclass(frozen=True)
class CheckResult:
    """Boolean outcome plus a replayable witness when it is False."""

    ok: bool
    witness: dict | None = dc_field(default=None)

    def __bool__(self):
        return self.ok


def is_strongly_invariant(f, W):
    """True iff every slot operator maps W into W.

    Witness: ``{"slot": 1-based, "fill", "w", "image"}``.
    """
    for w in W.rows:
        for (s, fill), img in _slot_images(f, w):
            if img not in W:
                return CheckResult(False, {"slot": s + 1, "fill": fill, "w": w, "image": img})
    return CheckResult(True)


def check_pair_orthogonal(f, W1, W2):
    """True iff f vanishes with a W1 vector and a W2 vector in distinct slots.

    Witness: ``{"slots": (i, j) 1-based, "u", "v", "fill", "value"}`` where
    ``fill`` gives the basis indices of the remaining slots.
    """
    F = f.field
    n = f.arity
    for i, j in itertools.permutations(range(n), 2):
        rest = [t for t in range(n) if t not in (i, j)]
        grouped = defaultdict(list)
        for args, out in f.entries:
            grouped[tuple(args[t] for t in rest)].append((args[i], args[j], out))
        for u in W1.rows:
            for v in W2.rows:
                for fill, items in grouped.items():
                    acc = [F.zero] * f.dim
                    for a, b, out in items:
                        c = u[a] * v[b]
                        if c == 0:
                            continue
                        for k, x in out:
                            acc[k] = F.reduce(acc[k] + c * x)
                    if any(acc):
                        return CheckResult(
                            False,
                            {"slots": (i + 1, j + 1), "u": u, "v": v, "fill": fill, "value": tuple(acc)},
                        )
    return CheckResult(True)


@dataclass(frozen=True)
class BasisChange:
    """Invertible matrix g whose columns are the new basis vectors g(e_i)."""

    field: Field
    matrix: tuple
    inverse: tuple = None

    def __post_init__(self):
        F = self.field
        m = tuple(tuple(F.coerce(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        inv = mat_inverse(F, m)
        if self.inverse is not None:
            given = tuple(tuple(F.coerce(x) for x in row) for row in self.inverse)
            if mat_mul(F, m, given) != identity_matrix(F, len(m)):
                raise ValueError("supplied inverse does not invert the matrix")
            inv = given
        object.__setattr__(self, "inverse", inv)

    @classmethod
    def identity(cls, field, d):
        return cls(field, identity_matrix(field, d))

    @classmethod
    def from_columns(cls, field, columns):
        return cls(field, tuple(zip(*[tuple(field.coerce(x) for x in c) for c in columns])))

    @classmethod
    def permutation(cls, field, perm):
        """g(e_i) = e_{perm[i]}."""
        d = len(perm)
        return cls.from_columns(field, [unit_vector(field, d, perm[i]) for i in range(d)])

    @property
    def dim(self):
        return len(self.matrix)

    def column(self, i):
        return tuple(row[i] for row in self.matrix)

    def apply(self, v):
        return mat_vec(self.field, self.matrix, v)

    def apply_inverse(self, v):
        return mat_vec(self.field, self.inverse, v)

    def compose(self, other):
        """self o other."""
        return BasisChange(self.field, mat_mul(self.field, self.matrix, other.matrix))

    def inverted(self):
        return BasisChange(self.field, self.inverse, self.matrix)

    def as_permutation(self):
        """The index permutation if g permutes the standard basis, else None."""
        perm = []
        for i in range(self.dim):
            col = self.column(i)
            nz = [k for k, x in enumerate(col) if x != 0]
            if len(nz) != 1 or col[nz[0]] != self.field.one:
                return None
            perm.append(nz[0])
        return tuple(perm) if len(set(perm)) == self.dim else None


def _check_compatible(f, g):
    if g.field != f.field:
        raise FieldMismatchError(f"basis change over {g.field}, tensor over {f.field}")
    if g.dim != f.dim:
        raise ValueError(f"basis change of size {g.dim} for dimension {f.dim}")


def pushed_products(f, g):
    """``{(j1..jn): f(g e_j1, ..., g e_jn)}`` for every tuple where it can be nonzero.

    Only tuples whose expansion meets a stored entry are visited; the
    remaining tuples evaluate to zero.
    """
    F = f.field
    supports = [[j for j, x in enumerate(row) if x != 0] for row in g.matrix]
    acc = {}
    for args, out in f.entries:
        for js in itertools.product(*(supports[a] for a in args)):
            c = F.one
            for a, j in zip(args, js):
                c = c * g.matrix[a][j]
            c = F.reduce(c)
            v = acc.get(js)
            if v is None:
                v = [F.zero] * f.dim
                acc[js] = v
            for k, x in out:
                v[k] = F.reduce(v[k] + c * x)
    return {js: tuple(v) for js, v in sorted(acc.items())}


def change_of_basis(f, g):
    """Structure constants of f with respect to the basis {g(e_i)}."""
    _check_compatible(f, g)
    new = {}
    for js, v in pushed_products(f, g).items():
        if is_zero(v):
            continue
        w = g.apply_inverse(v)
        new[js] = {k: c for k, c in enumerate(w) if c != 0}
    return StructureTensor(f.field, f.dim, f.arity, new)


def project_block(v, block):
    """Zero every coordinate outside ``block``."""
    block = set(block)
    z = 0 * v[0] if v else 0
    return tuple(x if i in block else z for i, x in enumerate(v))
