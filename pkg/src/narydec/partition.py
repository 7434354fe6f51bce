"""Union-find and canonical partitions of basis indices."""

from __future__ import annotations

from dataclasses import dataclass


class UnionFind:
    """Disjoint sets over ``range(n)`` with path halving and union by size."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, a):
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def union_all(self, items):
        items = list(items)
        for b in items[1:]:
            self.union(items[0], b)

    def partition(self):
        groups = {}
        for i in range(len(self.parent)):
            groups.setdefault(self.find(i), []).append(i)
        return Partition.from_blocks(groups.values())


@dataclass(frozen=True)
class Partition:
    """Blocks of ``range(dim)``, each sorted, ordered by minimum member.

    The canonical label of a block is its minimum index.
    """

    blocks: tuple

    @classmethod
    def from_blocks(cls, blocks, dim=None):
        blocks = tuple(sorted(tuple(sorted(b)) for b in blocks if b))
        members = [i for b in blocks for i in b]
        n = len(members) if dim is None else dim
        if sorted(members) != list(range(n)):
            raise ValueError("blocks must be disjoint and cover range(dim)")
        return cls(blocks)

    @classmethod
    def singletons(cls, dim):
        return cls(tuple((i,) for i in range(dim)))

    @classmethod
    def whole(cls, dim):
        return cls((tuple(range(dim)),))

    @property
    def dim(self):
        return sum(len(b) for b in self.blocks)

    @property
    def labels(self):
        return tuple(b[0] for b in self.blocks)

    def label(self, i):
        return self._label_map[i]

    @property
    def _label_map(self):
        return {i: b[0] for b in self.blocks for i in b}

    def block_of(self, i):
        lab = self.label(i)
        return next(b for b in self.blocks if b[0] == lab)

    def union_find(self):
        uf = UnionFind(self.dim)
        for b in self.blocks:
            uf.union_all(b)
        return uf

    def refines(self, other):
        """Every block of self lies inside a block of other."""
        lab = other._label_map
        return all(len({lab[i] for i in b}) == 1 for b in self.blocks)

    def as_lists(self):
        return [list(b) for b in self.blocks]

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __str__(self):
        return "[" + ",".join("[" + ",".join(map(str, b)) + "]" for b in self.blocks) + "]"
