"""Row reduction, nullspaces and canonical subspaces over an exact field.

Vectors are tuples of raw field values; matrices are tuples of row tuples.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FieldMismatchError, SingularMatrixError
from .scalars import Field


def zero_vector(field, d):
    return (field.zero,) * d


def unit_vector(field, d, i):
    v = [field.zero] * d
    v[i] = field.one
    return tuple(v)


def is_zero(v):
    return not any(v)


def add_scaled(field, u, c, v):
    """u + c*v."""
    return tuple(field.reduce(a + c * b) for a, b in zip(u, v))


def scale(field, c, v):
    return tuple(field.reduce(c * a) for a in v)


def mat_vec(field, M, v):
    return tuple(field.reduce(sum(a * b for a, b in zip(row, v))) for row in M)


def mat_mul(field, A, B):
    cols = list(zip(*B))
    return tuple(tuple(field.reduce(sum(a * b for a, b in zip(row, col))) for col in cols) for row in A)


def transpose(M):
    return tuple(zip(*M))


def identity_matrix(field, d):
    return tuple(unit_vector(field, d, i) for i in range(d))


def rref(field, rows, ncols):
    """Reduced row-echelon form.  Returns ``(rows, pivots)``, zero rows dropped."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.reduce(x * inv) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                k = m[i][c]
                m[i] = [field.reduce(a - k * b) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def nullspace(field, rows, ncols):
    """Basis of {x : M x = 0}, one vector per free column, in column order."""
    red, pivots = rref(field, rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [field.zero] * ncols
        x[fc] = field.one
        for row, pc in zip(red, pivots):
            x[pc] = field.neg(row[fc])
        basis.append(tuple(x))
    return basis


def mat_inverse(field, M):
    d = len(M)
    if any(len(row) != d for row in M):
        raise SingularMatrixError("matrix is not square")
    aug = [tuple(row) + unit_vector(field, d, i) for i, row in enumerate(M)]
    red, pivots = rref(field, aug, 2 * d)
    if pivots[:d] != tuple(range(d)) or len(red) < d:
        raise SingularMatrixError("matrix is singular")
    return tuple(tuple(row[d:]) for row in red)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of F^dim stored by its canonical RREF basis."""

    field: Field
    dim: int
    rows: tuple = ()

    @classmethod
    def span(cls, field, dim, vectors):
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != dim:
                raise ValueError(f"vector of length {len(v)} in ambient dimension {dim}")
        red, _ = rref(field, vectors, dim)
        return cls(field, dim, red)

    @classmethod
    def zero(cls, field, dim):
        return cls(field, dim, ())

    @classmethod
    def full(cls, field, dim):
        return cls(field, dim, identity_matrix(field, dim))

    @classmethod
    def coordinate(cls, field, dim, indices):
        return cls(field, dim, tuple(unit_vector(field, dim, i) for i in sorted(set(indices))))

    @property
    def rank(self):
        return len(self.rows)

    @property
    def pivots(self):
        return tuple(next(c for c, x in enumerate(row) if x != 0) for row in self.rows)

    @property
    def is_zero(self):
        return not self.rows

    @property
    def is_full(self):
        return len(self.rows) == self.dim

    def reduce(self, v):
        """Residual of v after eliminating the pivot columns."""
        v = tuple(v)
        for row, pc in zip(self.rows, self.pivots):
            if v[pc] != 0:
                v = add_scaled(self.field, v, self.field.neg(v[pc]), row)
        return v

    def __contains__(self, v):
        return is_zero(self.reduce(v))

    def _same_space(self, other):
        if self.field != other.field or self.dim != other.dim:
            raise FieldMismatchError("subspaces of different ambient spaces")

    def __add__(self, other):
        self._same_space(other)
        return Subspace.span(self.field, self.dim, self.rows + other.rows)

    def __le__(self, other):
        self._same_space(other)
        return all(r in other for r in self.rows)

    def intersection(self, other):
        self._same_space(other)
        # x = sum a_i r_i = sum b_j s_j  <=>  (a, -b) in the left kernel.
        k = self.rank
        stacked = [r for r in self.rows] + [tuple(self.field.neg(x) for x in s) for s in other.rows]
        if not stacked:
            return Subspace.zero(self.field, self.dim)
        coeffs = nullspace(self.field, transpose(stacked), len(stacked))
        vecs = []
        for c in coeffs:
            v = zero_vector(self.field, self.dim)
            for a, r in zip(c[:k], self.rows):
                if a:
                    v = add_scaled(self.field, v, a, r)
            vecs.append(v)
        return Subspace.span(self.field, self.dim, vecs)

    def image(self, M):
        return Subspace.span(self.field, len(M), [mat_vec(self.field, M, r) for r in self.rows])

    def complement_check_rows(self):
        """Rows h spanning the annihilator: v in self iff h.v = 0 for all h."""
        return nullspace(self.field, self.rows, self.dim) if self.rows else list(identity_matrix(self.field, self.dim))
