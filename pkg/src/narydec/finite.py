"""Enumeration of GF(p)^d with integer indices, for the exhaustive procedures.

Vector ``(c_0, ..., c_{d-1})`` has index ``sum c_j p^(d-1-j)``, so index
order is lexicographic coordinate order and index 0 is the zero vector.
All arithmetic is integer arithmetic mod p.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import UnsupportedFieldError

MAX_TABLE_SIZE = 1 << 20


class VectorTable:
    def __init__(self, field, dim):
        if not field.is_finite:
            raise UnsupportedFieldError(f"cannot enumerate vectors over {field}")
        self.field = field
        self.p = field.p
        self.dim = dim
        self.size = self.p ** dim
        if self.size > MAX_TABLE_SIZE:
            raise UnsupportedFieldError(f"{field}^{dim} has {self.size} vectors; too many to enumerate")
        self.vectors = np.array(
            list(itertools.product(range(self.p), repeat=dim)), dtype=np.int64
        ).reshape(self.size, dim)
        self.weights = self.p ** np.arange(dim - 1, -1, -1, dtype=np.int64)

    def index(self, v):
        return int(sum(int(x) * int(w) for x, w in zip(v, self.weights)))

    def vector(self, i):
        return tuple(int(x) for x in self.vectors[i])

    def indices_of(self, arr):
        """Indices of the rows of an integer array of vectors."""
        return (np.asarray(arr, dtype=np.int64) % self.p) @ self.weights

    def image_table(self, M):
        """``table[i]`` is the index of ``M @ vector(i)``."""
        M = np.asarray(M, dtype=np.int64).reshape(self.dim, self.dim)
        return self.indices_of(self.vectors @ M.T)

    def membership(self, rows):
        """Boolean mask over all vectors: membership in span(rows).

        ``rows`` must be in RREF; uses the check rows of the annihilator.
        """
        from .linalg import Subspace

        sub = Subspace(self.field, self.dim, tuple(tuple(r) for r in rows))
        checks = sub.complement_check_rows()
        if not checks:
            return np.ones(self.size, dtype=bool)
        H = np.array(checks, dtype=np.int64)
        return ~((self.vectors @ H.T) % self.p).any(axis=1)

    def normalized(self):
        """Indices of nonzero vectors whose first nonzero coordinate is 1."""
        v = self.vectors
        nz = v != 0
        has = nz.any(axis=1)
        first = np.argmax(nz, axis=1)
        lead = v[np.arange(self.size), first]
        return np.nonzero(has & (lead == 1))[0]


def dense_operator(f, cols):
    """Dense integer matrix of a slot operator given in sparse column form."""
    M = np.zeros((f.dim, f.dim), dtype=np.int64)
    for j, col in cols.items():
        M[:, j] = [int(x) for x in col]
    return M


def dense_tensor(f):
    """Integer array of shape (d,)*n + (d,) holding the structure constants."""
    T = np.zeros((f.dim,) * f.arity + (f.dim,), dtype=np.int64)
    for args, out in f.entries:
        for k, c in out:
            T[args + (k,)] = int(c)
    return T
