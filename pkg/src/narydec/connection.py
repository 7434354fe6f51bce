"""The set-valued operator F and connections between basis vectors.

``apply_F(f, U, X)`` with an unbarred tuple X collects the nonzero products
``f(x_s(1), ..., u, ..., x_s(n-1))`` over every slot for u and every ordering
of X; with a barred tuple it collects the nonzero preimages of U under the
same family of slot operators.  Preimages live in all of V, so the barred
case is only computed over prime fields, by enumerating GF(p)^d.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SearchExhausted, UnsupportedFieldError
from .finite import VectorTable, dense_operator
from .linalg import is_zero, unit_vector
from .partition import UnionFind


@dataclass(frozen=True, order=True)
class BarredSymbol:
    index: int
    barred: bool = False

    def bar(self):
        return BarredSymbol(self.index, not self.barred)

    def __str__(self):
        return f"ē{self.index}" if self.barred else f"e{self.index}"


@dataclass(frozen=True)
class StepTuple:
    """An (n-1)-tuple of symbols from B and its barred copy."""

    symbols: tuple

    @classmethod
    def plain(cls, *indices):
        return cls(tuple(BarredSymbol(i) for i in indices))

    @classmethod
    def barred(cls, *indices):
        return cls(tuple(BarredSymbol(i, True) for i in indices))

    @property
    def indices(self):
        return tuple(s.index for s in self.symbols)

    @property
    def is_homogeneous(self):
        return len({s.barred for s in self.symbols}) <= 1

    @property
    def is_barred(self):
        return bool(self.symbols) and all(s.barred for s in self.symbols)

    def bar(self):
        return StepTuple(tuple(s.bar() for s in self.symbols))

    def permuted(self, order):
        return StepTuple(tuple(self.symbols[i] for i in order))

    def __len__(self):
        return len(self.symbols)

    def __str__(self):
        return "(" + ", ".join(map(str, self.symbols)) + ")"

    def to_json(self):
        return [{"index": s.index, "barred": s.barred} for s in self.symbols]

    @classmethod
    def from_json(cls, data):
        return cls(tuple(BarredSymbol(int(s["index"]), bool(s["barred"])) for s in data))


@dataclass(frozen=True)
class VectorSet:
    """Finite set of nonzero vectors, stored sorted."""

    field: object
    dim: int
    elements: tuple = ()

    def __post_init__(self):
        elems = set()
        for v in self.elements:
            v = tuple(self.field.coerce(x) for x in v)
            if len(v) != self.dim:
                raise ValueError(f"vector of length {len(v)} in dimension {self.dim}")
            if is_zero(v):
                raise ValueError("a VectorSet never contains the zero vector")
            elems.add(v)
        object.__setattr__(self, "elements", tuple(sorted(elems)))

    @classmethod
    def basis(cls, field, dim, i):
        return cls(field, dim, (unit_vector(field, dim, i),))

    def __contains__(self, v):
        return tuple(v) in set(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __bool__(self):
        return bool(self.elements)

    def __or__(self, other):
        return VectorSet(self.field, self.dim, self.elements + other.elements)

    def __and__(self, other):
        return VectorSet(self.field, self.dim, tuple(set(self.elements) & set(other.elements)))

    def map(self, g):
        return VectorSet(self.field, self.dim, tuple(g.apply(v) for v in self.elements))


def arrangement_keys(arity, indices):
    """Slot-operator keys ``(slot, fill)`` reached by permuting the tuple."""
    keys = set()
    for perm in set(itertools.permutations(indices)):
        for s in range(arity):
            keys.add((s, perm))
    return sorted(keys)


def _active_keys(f, X):
    return [k for k in arrangement_keys(f.arity, X.indices) if k in f.slot_columns]


def _check_tuple(f, X):
    if len(X) != f.arity - 1:
        raise ValueError(f"step tuple must have {f.arity - 1} symbols, got {len(X)}")
    if any(not 0 <= i < f.dim for i in X.indices):
        raise ValueError(f"symbol index out of range in {X}")


def apply_F(f, U, X):
    """F(U, X) as a VectorSet (zero stripped; mixed tuples give the empty set)."""
    _check_tuple(f, X)
    empty = VectorSet(f.field, f.dim)
    if not U or not X.is_homogeneous:
        return empty
    keys = _active_keys(f, X)
    if not X.is_barred:
        out = {f.apply_slot(k, u) for k in keys for u in U}
        return VectorSet(f.field, f.dim, tuple(v for v in out if not is_zero(v)))
    if not f.field.is_finite:
        raise UnsupportedFieldError("barred F is only computable over prime fields")
    eng = indexed(f)
    mask = np.zeros(eng.table.size, dtype=bool)
    mask[[eng.table.index(u) for u in U]] = True
    hits = eng.backward(mask, [eng.images[k] for k in keys])
    return VectorSet(f.field, f.dim, tuple(eng.table.vector(i) for i in hits))


class IndexedF:
    """F on integer vector indices of GF(p)^d, for exhaustive search."""

    def __init__(self, f):
        self.f = f
        self.table = VectorTable(f.field, f.dim)
        self.images = {k: self.table.image_table(dense_operator(f, cols)) for k, cols in f.slot_columns.items()}
        steps = []
        for barred in (False, True):
            for idx in itertools.combinations_with_replacement(range(f.dim), f.arity - 1):
                X = StepTuple.barred(*idx) if barred else StepTuple.plain(*idx)
                imgs = [self.images[k] for k in _active_keys(f, X)]
                if imgs:
                    steps.append((X, imgs))
        self.steps = steps

    def forward(self, idx, imgs):
        out = np.unique(np.concatenate([img[idx] for img in imgs]))
        return out[out != 0]

    def backward(self, mask, imgs):
        hit = np.zeros(self.table.size, dtype=bool)
        for img in imgs:
            hit |= mask[img]
        hit[0] = False
        return np.nonzero(hit)[0]

    def step(self, state, X, imgs):
        if X.is_barred:
            mask = np.zeros(self.table.size, dtype=bool)
            mask[list(state)] = True
            out = self.backward(mask, imgs)
        else:
            out = self.forward(np.fromiter(state, dtype=np.int64), imgs)
        return tuple(out.tolist())


@lru_cache(maxsize=32)
def indexed(f):
    return IndexedF(f)


@dataclass(frozen=True)
class Connection:
    """A list of step tuples leading from e_source to e_target.

    ``trace`` optionally records one vector per stage, ``trace[t]`` being in
    the t-th F-image and ``trace[t+1]`` in F({trace[t]}, steps[t]).
    """

    source: int
    target: int
    steps: tuple = ()
    trace: tuple | None = None

    def __str__(self):
        return "[" + ", ".join(map(str, self.steps)) + "]"

    def to_json(self, field=None):
        data = {"from": self.source, "to": self.target, "steps": [X.to_json() for X in self.steps]}
        if self.trace is not None and field is not None:
            data["trace"] = [[field.format(x) for x in v] for v in self.trace]
        return data


def reverse_connection(c):
    """The barred, reversed list, which connects target back to source."""
    trace = tuple(reversed(c.trace)) if c.trace is not None else None
    return Connection(c.target, c.source, tuple(X.bar() for X in reversed(c.steps)), trace)


def replay(f, c):
    """Sets F(...F({e_source}, X_1)...), one per step."""
    U = VectorSet.basis(f.field, f.dim, c.source)
    stages = []
    for X in c.steps:
        U = apply_F(f, U, X)
        stages.append(U)
    return stages


def _in_single_step(f, v, w, X):
    """w in F({v}, X), decided without enumerating V."""
    keys = _active_keys(f, X)
    if X.is_barred:
        return not is_zero(w) and any(f.apply_slot(k, w) == v for k in keys)
    return not is_zero(w) and any(f.apply_slot(k, v) == w for k in keys)


def verify_connection(f, c):
    """Replay a connection: every stage nonempty and e_target in the last."""
    if not c.steps:
        return c.source == c.target
    if any(not X.is_homogeneous or len(X) != f.arity - 1 for X in c.steps):
        return False
    target = unit_vector(f.field, f.dim, c.target)
    if f.field.is_finite:
        # same replay as apply_F, on vector indices; barred stages can hold
        # a large share of GF(p)^d
        eng = indexed(f)
        state = (eng.table.index(unit_vector(f.field, f.dim, c.source)),)
        for X in c.steps:
            _check_tuple(f, X)
            imgs = [eng.images[k] for k in _active_keys(f, X)]
            state = eng.step(state, X, imgs) if imgs else ()
            if not state:
                return False
        return eng.table.index(target) in state
    if not any(X.is_barred for X in c.steps):
        stages = replay(f, c)
        return all(stages) and target in stages[-1]
    # Over Q a barred stage is infinite; a witness chain proves every stage
    # nonempty (F is monotone in U) and e_target reachable.
    t = c.trace
    if t is None or len(t) != len(c.steps) + 1:
        return False
    if tuple(t[0]) != unit_vector(f.field, f.dim, c.source) or tuple(t[-1]) != target:
        return False
    return all(_in_single_step(f, t[s], t[s + 1], X) for s, X in enumerate(c.steps))


def _trace_back(eng, states, steps, target_idx):
    """Pick y_t in each stage with y_{t+1} in F({y_t}, X_{t+1}), smallest index first."""
    ys = [target_idx]
    for t in range(len(steps) - 1, -1, -1):
        X, imgs = steps[t]
        prev = set(states[t])
        y = ys[-1]
        if X.is_barred:
            cands = {int(img[y]) for img in imgs} & prev
        else:
            cands = {u for u in prev if any(int(img[u]) == y for img in imgs)}
        ys.append(min(cands))
    ys.reverse()
    return tuple(eng.table.vector(i) for i in ys)


def _limit_default(f, max_depth, max_set_size):
    if not f.field.is_finite:
        max_depth = 6 if max_depth is None else max_depth
        max_set_size = 256 if max_set_size is None else max_set_size
    return max_depth, max_set_size


def connected(f, i, j, max_depth=None, max_set_size=None):
    """Find a connection from e_i to e_j by breadth-first search.

    Over GF(p) with no limits the answer is exact: ``None`` means e_i is not
    connected to e_j.  Over Q only unbarred steps are explored, and a failed
    search raises :class:`SearchExhausted` rather than returning ``None``.
    Limits that cut the GF(p) search short also raise SearchExhausted.
    """
    for x in (i, j):
        if not 0 <= x < f.dim:
            raise ValueError(f"index {x} out of range for dimension {f.dim}")
    if i == j:
        return Connection(i, j, (), (unit_vector(f.field, f.dim, i),))
    max_depth, max_set_size = _limit_default(f, max_depth, max_set_size)
    if f.field.is_finite:
        return _connected_exact(f, i, j, max_depth, max_set_size)
    return _connected_forward(f, i, j, max_depth, max_set_size)


def _connected_exact(f, i, j, max_depth, max_set_size):
    eng = indexed(f)
    start = (eng.table.index(unit_vector(f.field, f.dim, i)),)
    goal = eng.table.index(unit_vector(f.field, f.dim, j))
    parent = {start: None}
    frontier = [start]
    depth = 0
    cut = False
    while frontier:
        if max_depth is not None and depth >= max_depth:
            cut = True
            break
        depth += 1
        nxt = []
        for S in frontier:
            for si, (X, imgs) in enumerate(eng.steps):
                T = eng.step(S, X, imgs)
                if not T or T in parent:
                    continue
                if max_set_size is not None and len(T) > max_set_size:
                    cut = True
                    continue
                parent[T] = (S, si)
                if goal in T:
                    return _build(eng, parent, T, i, j, goal)
                nxt.append(T)
        frontier = nxt
    if cut:
        raise SearchExhausted(f"no connection from e{i} to e{j} within the given limits")
    return None


def _build(eng, parent, T, i, j, goal):
    states, steps = [T], []
    node = T
    while parent[node] is not None:
        prev, si = parent[node]
        steps.append(eng.steps[si])
        states.append(prev)
        node = prev
    states.reverse()
    steps.reverse()
    trace = _trace_back(eng, states, steps, goal)
    return Connection(i, j, tuple(X for X, _ in steps), trace)


def _connected_forward(f, i, j, max_depth, max_set_size):
    start = VectorSet.basis(f.field, f.dim, i)
    goal = unit_vector(f.field, f.dim, j)
    tuples = [StepTuple.plain(*idx) for idx in itertools.combinations_with_replacement(range(f.dim), f.arity - 1)]
    tuples = [X for X in tuples if _active_keys(f, X)]
    parent = {start: None}
    queue = deque([(start, 0)])
    while queue:
        S, depth = queue.popleft()
        if depth >= max_depth:
            continue
        for X in tuples:
            T = apply_F(f, S, X)
            if not T or T in parent or len(T) > max_set_size:
                continue
            parent[T] = (S, X)
            if goal in T:
                chain, steps, node = [T], [], T
                while parent[node] is not None:
                    node, Y = parent[node]
                    chain.append(node)
                    steps.append(Y)
                chain.reverse()
                steps.reverse()
                ys = [goal]
                for t in range(len(steps) - 1, -1, -1):
                    ys.append(min(u for u in chain[t] if _in_single_step(f, u, ys[-1], steps[t])))
                return Connection(i, j, tuple(steps), tuple(reversed(ys)))
            queue.append((T, depth + 1))
    raise SearchExhausted(f"no forward connection from e{i} to e{j} found within limits (Q is semi-decidable)")


def reachable_basis(f, i):
    """Indices j != i with e_j in some F-image reachable from {e_i} (GF(p) only)."""
    if not f.field.is_finite:
        raise UnsupportedFieldError("exact connection search needs a prime field")
    eng = indexed(f)
    basis_idx = {eng.table.index(unit_vector(f.field, f.dim, k)): k for k in range(f.dim)}
    start = (eng.table.index(unit_vector(f.field, f.dim, i)),)
    seen = {start}
    found = set()
    frontier = [start]
    while frontier and len(found | {i}) < f.dim:
        nxt = []
        for S in frontier:
            for X, imgs in eng.steps:
                T = eng.step(S, X, imgs)
                if not T or T in seen:
                    continue
                seen.add(T)
                found.update(basis_idx[v] for v in T if v in basis_idx)
                nxt.append(T)
        frontier = nxt
    found.discard(i)
    return found


def tilde_exact_union_find(f):
    uf = UnionFind(f.dim)
    done = []
    for i in range(f.dim):
        if any(uf.find(r) == uf.find(i) for r in done):
            continue
        for j in reachable_basis(f, i):
            uf.union(i, j)
        done.append(i)
    return uf
