import itertools
import random

import pytest

import oracles
from narydec.connection import (
    Connection,
    StepTuple,
    VectorSet,
    apply_F,
    connected,
    replay,
    reverse_connection,
    verify_connection,
)
from narydec.decomposition import approx_refine, hyperedge_partition, tilde_exact, tilde_generators
from narydec.errors import SearchExhausted, UnsupportedFieldError
from narydec.io import load_corpus, random_tensor
from narydec.partition import Partition
from narydec.scalars import GF

T1 = load_corpus("t1").tensor
P1 = load_corpus("paper-r4-n2").tensor
P1_GF5 = load_corpus("paper-r4-gf5").tensor


def vs(f, *vecs):
    return VectorSet(f.field, f.dim, vecs)


def as_pairs(X):
    return tuple((s.index, s.barred) for s in X.symbols)


def test_vectorset_rejects_zero():
    with pytest.raises(ValueError):
        vs(T1, (0, 0))
    assert vs(T1, (1, 0), (1, 0)).elements == ((1, 0),)


def test_apply_F_examples():
    assert apply_F(T1, vs(T1, (1, 0)), StepTuple.plain(0)) == vs(T1, (0, 1))
    assert apply_F(T1, vs(T1, (0, 1)), StepTuple.barred(0)) == vs(T1, (1, 0), (1, 1))
    assert not apply_F(T1, VectorSet(T1.field, 2), StepTuple.plain(0))
    f = random_tensor(GF(2), 2, 3, 1.0, 0)
    mixed = StepTuple((StepTuple.plain(0).symbols[0], StepTuple.barred(1).symbols[0]))
    assert not mixed.is_homogeneous
    assert not apply_F(f, vs(f, (1, 0)), mixed)


def test_apply_F_barred_over_Q_unsupported():
    with pytest.raises(UnsupportedFieldError):
        apply_F(P1, vs(P1, (1, 0, 0, 0)), StepTuple.barred(0))


def suite(p, count=12):
    rng = random.Random(p)
    for s in range(count):
        yield random_tensor(GF(p), rng.randint(1, 3), rng.choice((2, 3)), rng.choice((0.2, 0.4)), s)


def all_tuples(f):
    for idx in itertools.product(range(f.dim), repeat=f.arity - 1):
        for bars in itertools.product((False, True), repeat=f.arity - 1):
            yield StepTuple(tuple(StepTuple.barred(i).symbols[0] if b else StepTuple.plain(i).symbols[0] for i, b in zip(idx, bars)))


@pytest.mark.parametrize("p", [2, 3])
def test_apply_F_matches_definition(p):
    for f in suite(p, 8):
        rng = random.Random(f.dim)
        nz = oracles.nonzero_vectors(p, f.dim)
        for X in all_tuples(f):
            U = frozenset(rng.sample(nz, min(len(nz), 2)))
            got = apply_F(f, vs(f, *U), X)
            assert frozenset(got) == oracles.F(f, U, as_pairs(X))


def test_permutation_invariance_and_union():
    for f in suite(3, 10):
        rng = random.Random(7)
        nz = oracles.nonzero_vectors(3, f.dim)
        for X in all_tuples(f):
            U = vs(f, *rng.sample(nz, min(len(nz), 2)))
            U2 = vs(f, *rng.sample(nz, 1))
            base = apply_F(f, U, X)
            for order in itertools.permutations(range(len(X))):
                assert apply_F(f, U, X.permuted(order)) == base
            assert apply_F(f, U | U2, X) == base | apply_F(f, U2, X)


def test_duality_single_vectors():
    for f in suite(2, 10):
        nz = oracles.nonzero_vectors(2, f.dim)
        for idx in itertools.combinations_with_replacement(range(f.dim), f.arity - 1):
            X = StepTuple.plain(*idx)
            for v in nz:
                fwd = apply_F(f, vs(f, v), X)
                for w in nz:
                    assert (w in fwd) == (v in apply_F(f, vs(f, w), X.bar()))


def test_connected_examples():
    c = connected(T1, 0, 1)
    assert c.steps == (StepTuple.plain(0),)
    assert verify_connection(T1, c)
    r = reverse_connection(c)
    assert r.steps == (StepTuple.barred(0),) and (r.source, r.target) == (1, 0)
    assert verify_connection(T1, r)
    assert reverse_connection(r).steps == c.steps
    assert connected(P1_GF5, 0, 1) is None
    triv = connected(P1, 2, 2)
    assert triv.steps == () and verify_connection(P1, triv)
    assert reverse_connection(triv).steps == ()


def test_connected_over_Q_is_semi_decidable():
    with pytest.raises(SearchExhausted):
        connected(P1, 0, 1)
    c = connected(load_corpus("annihilator-demo").tensor, 0, 2)
    assert c is not None and verify_connection(load_corpus("annihilator-demo").tensor, c)


def test_limits_reported_distinctly():
    f = random_tensor(GF(3), 3, 2, 0.3, 4)
    pairs = [(i, j) for i in range(3) for j in range(3) if i != j and oracles.connected(f, i, j)]
    for i, j in pairs:
        c = connected(f, i, j)
        if len(c.steps) > 1:
            with pytest.raises(SearchExhausted):
                connected(f, i, j, max_depth=1)


def test_verify_rejects_bad_connections():
    assert not verify_connection(T1, Connection(1, 0, (StepTuple.plain(0),)))
    assert not verify_connection(T1, Connection(0, 1, ()))


@pytest.mark.parametrize("p", [2, 3])
def test_connected_matches_oracle_and_reverses(p):
    for f in suite(p, 10):
        for i, j in itertools.product(range(f.dim), repeat=2):
            c = connected(f, i, j)
            assert (c is not None) == oracles.connected(f, i, j)
            if c is not None:
                stages = replay(f, c)
                assert all(stages) and (not stages or oracles.basis(f.dim, j) in stages[-1])
                assert verify_connection(f, reverse_connection(c))


def test_tilde_examples():
    assert tilde_generators(P1) == Partition.singletons(4)
    assert tilde_generators(T1) == Partition.whole(2)
    assert tilde_exact(T1) == Partition.whole(2)
    assert tilde_exact(P1_GF5) == Partition.singletons(4)
    z = load_corpus("zero-d3").tensor
    assert tilde_generators(z) == Partition.singletons(3)
    with pytest.raises(UnsupportedFieldError):
        tilde_exact(P1)


def test_approx_refine_and_hyperedges():
    assert approx_refine(P1, Partition.singletons(4)) == Partition.from_blocks([[0, 1], [2], [3]])
    z = load_corpus("zero-d3").tensor
    p = Partition.from_blocks([[0, 2], [1]])
    assert approx_refine(z, p) == p
    assert approx_refine(T1, Partition.whole(2)) == Partition.whole(2)
    assert hyperedge_partition(P1) == Partition.from_blocks([[0, 1], [2], [3]])
    assert hyperedge_partition(load_corpus("paper-r4-n3").tensor) == Partition.whole(4)
    assert hyperedge_partition(z) == Partition.singletons(3)


def test_generators_are_sound_and_exact_is_an_equivalence():
    for f in itertools.chain(oracles.all_gf_tensors(2, 2, 2), suite(2, 20)):
        te = tilde_exact(f)
        assert tilde_generators(f).refines(te)
        for i, j in itertools.product(range(f.dim), repeat=2):
            assert (te.label(i) == te.label(j)) == oracles.connected(f, i, j)
