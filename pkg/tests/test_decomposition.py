import random

import pytest

import oracles
from narydec.decomposition import decompose, hyperedge_partition, to_dot, verify_decomposition
from narydec.errors import UnsupportedFieldError
from narydec.io import corpus_names, load_corpus, random_tensor
from narydec.partition import Partition
from narydec.scalars import GF
from narydec.tensor import BasisChange, change_of_basis

P1 = load_corpus("paper-r4-n2").tensor


def blocks(D):
    return [list(b) for b in D.blocks]


def test_four_dim_example_both_bases():
    assert blocks(decompose(P1)) == [[0, 1], [2], [3]]
    g = BasisChange.from_columns(P1.field, [(1, 0, 1, 0), (1, 0, -1, 0), (0, 1, 0, 0), (0, 0, 0, 1)])
    assert blocks(decompose(change_of_basis(P1, g))) == [[0, 1, 2], [3]]


def test_zero_tensor_and_n3_variant():
    assert blocks(decompose(load_corpus("zero-d3").tensor)) == [[0], [1], [2]]
    assert blocks(decompose(load_corpus("paper-r4-n3").tensor)) == [[0, 1, 2, 3]]


def test_stage_two_coarsens_stage_one():
    D = decompose(load_corpus("paper-r4-n2-basisBprime").tensor)
    assert D.stage1 == Partition.from_blocks([[0, 1], [2], [3]])
    assert D.stage1.refines(D.stage2)


def test_exact_mode():
    D = decompose(load_corpus("paper-r4-gf5").tensor, "exact-bfs")
    assert blocks(D) == [[0, 1], [2], [3]]
    assert D.stage1 == Partition.singletons(4)
    with pytest.raises(UnsupportedFieldError):
        decompose(P1, "exact-bfs")
    with pytest.raises(ValueError):
        decompose(P1, "nonsense")


def test_verify_decomposition_examples():
    assert verify_decomposition(P1, Partition.from_blocks([[0, 1], [2], [3]])).ok
    rep = verify_decomposition(P1, Partition.singletons(4))
    assert len(rep.violations) == 1
    (v,) = rep.violations
    assert v.kind == "invariance" and v.args == (0, 0)
    assert verify_decomposition(P1, Partition.whole(4)).ok


def test_orthogonality_violation_reported():
    f = load_corpus("annihilator-demo").tensor
    rep = verify_decomposition(f, Partition.singletons(3))
    assert not rep.orthogonal and not rep.invariant


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition.from_blocks([[0, 1], [1, 2]])
    with pytest.raises(ValueError):
        Partition.from_blocks([[0], [2]])
    assert str(Partition.from_blocks([[3], [1, 0], [2]])) == "[[0,1],[2],[3]]"


def test_corpus_decompositions_verify():
    for name in corpus_names():
        f = load_corpus(name).tensor
        D = decompose(f)
        assert verify_decomposition(f, D.stage2).ok
        assert D.stage2 == hyperedge_partition(f)


def test_pipeline_equals_brute_force_finest():
    """Stage 2 is the finest orthogonal, strongly invariant basis-aligned partition."""
    rng = random.Random(9)
    for s in range(60):
        f = random_tensor(GF(rng.choice((2, 3))), rng.randint(1, 4), rng.choice((2, 3)), rng.choice((0.03, 0.08, 0.2)), s)
        got = [tuple(b) for b in decompose(f).blocks]
        assert got == oracles.finest_invariant_orthogonal(f)


def test_dot_export_is_deterministic():
    D = decompose(P1)
    dot = to_dot(P1, D.stage2, "p1")
    assert dot == to_dot(P1, D.stage2, "p1")
    assert dot.startswith('graph "p1" {') and "subgraph cluster_0" in dot and "h0 -- e1;" in dot


def test_exact_connectivity_can_be_coarser_than_the_sparse_rules():
    """f(e0, e0) = e0, f(e1, e1) = e1 over GF(2).

    A barred step from e0 reaches e0 + e1, and f(e0 + e1, e1) = e1, so e0 ~ e1
    although the two coordinate lines are already orthogonal, invariant blocks.
    """
    from narydec.connection import StepTuple, connected, verify_connection
    from narydec.tensor import StructureTensor

    f = StructureTensor(GF(2), 2, 2, {(0, 0): {0: 1}, (1, 1): {1: 1}})
    c = connected(f, 0, 1)
    assert c.steps == (StepTuple.barred(0), StepTuple.plain(1))
    assert verify_connection(f, c)
    exact, pipeline = decompose(f, "exact-bfs"), decompose(f)
    assert blocks(exact) == [[0, 1]] and blocks(pipeline) == [[0], [1]]
    assert verify_decomposition(f, exact.stage2).ok and verify_decomposition(f, pipeline.stage2).ok
