"""Persistent homology over GF(2) by boundary-matrix column reduction.

Only dimension-1 diagrams are computed (loops in planar clouds). Columns
are stored as Python integer bitsets, which keeps the reduction fast for
the ~10^5-simplex complexes produced by pixel clouds. Connectivity (the
dimension-0 part of the reduction) is handled by union-find, so only the
triangle-against-edge block is reduced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import NoDeathSimplex, TooLarge
from .filtration import FilteredComplex


@dataclass(frozen=True)
class PersistencePair:
    birth: float
    death: float  # math.inf for classes alive at the end of the filtration
    dim: int = 1
    birth_simplex: tuple | None = None
    death_simplex: tuple | None = None

    @property
    def persistence(self) -> float:
        return self.death - self.birth

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.death)


@dataclass
class PersistenceDiagram:
    """Multiset of (birth, death) pairs of one dimension."""

    dim: int
    pairs: list = field(default_factory=list)

    def sorted_pairs(self) -> list:
        return sorted(self.pairs, key=lambda p: (p.birth, p.death))

    def as_tuples(self) -> list:
        return sorted((p.birth, p.death) for p in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        p = self.parent
        while p[i] != i:
            p[i] = p[p[i]]
            i = p[i]
        return i

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def _reduce_complex(cx: FilteredComplex):
    """Run the dimension-1 reduction once.

    Returns (edges, tris, positive_rows, pairs_rows, columns) where
    edges/tris are (simplex, value) lists in filtration order, positive_rows
    are edge rows that create cycles, pairs_rows maps edge row -> triangle
    column index, and columns holds the reduced bitset of each triangle.
    """
    n_vertices = sum(1 for s, _ in cx.entries if len(s) == 1)
    edges = []
    tris = []
    for s, v in cx.entries:
        if len(s) == 2:
            edges.append((s, v))
        elif len(s) == 3:
            tris.append((s, v))
    edge_row = {s: i for i, (s, _) in enumerate(edges)}

    uf = _UnionFind(n_vertices)
    positive = set()
    for row, (s, _) in enumerate(edges):
        if not uf.union(s[0], s[1]):
            positive.add(row)

    low_owner: dict[int, int] = {}
    columns: dict[int, int] = {}
    pairs_rows: dict[int, int] = {}
    for j, (s, _) in enumerate(tris):
        col = (
            (1 << edge_row[(s[0], s[1])])
            | (1 << edge_row[(s[0], s[2])])
            | (1 << edge_row[(s[1], s[2])])
        )
        while col:
            low = col.bit_length() - 1
            k = low_owner.get(low)
            if k is None:
                low_owner[low] = j
                columns[j] = col
                pairs_rows[low] = j
                break
            col ^= columns[k]
    return edges, tris, positive, pairs_rows, columns


def compute_persistence(cx: FilteredComplex, dim: int = 1) -> PersistenceDiagram:
    """Dimension-1 persistence diagram of a filtered complex.

    Zero-persistence pairs (birth == death) are discarded. Classes never
    killed are reported with death = +inf.
    """
    if dim != 1:
        raise ValueError("only dimension-1 diagrams are supported")
    edges, tris, positive, pairs_rows, _ = _reduce_complex(cx)
    pairs = []
    paired = set()
    for row, j in pairs_rows.items():
        paired.add(row)
        birth_s, birth_v = edges[row]
        death_s, death_v = tris[j]
        if birth_v == death_v:
            continue
        pairs.append(
            PersistencePair(
                birth=birth_v,
                death=death_v,
                dim=1,
                birth_simplex=birth_s,
                death_simplex=death_s,
            )
        )
    for row in sorted(positive - paired):
        birth_s, birth_v = edges[row]
        pairs.append(
            PersistencePair(
                birth=birth_v,
                death=math.inf,
                dim=1,
                birth_simplex=birth_s,
                death_simplex=None,
            )
        )
    pairs.sort(key=lambda p: (p.birth, p.death))
    return PersistenceDiagram(dim=1, pairs=pairs)


def representative_cycle(cx: FilteredComplex, pair: PersistencePair) -> list:
    """One representative 1-cycle of the class dying at ``pair.death``: the
    reduced column at the death simplex. Its edges all enter the filtration
    at or before ``pair.birth``."""
    if pair.death_simplex is None:
        raise NoDeathSimplex("pair has no death simplex")
    edges, tris, _, _, columns = _reduce_complex(cx)
    j = next(
        (i for i, (s, _) in enumerate(tris) if s == pair.death_simplex), None
    )
    if j is None or j not in columns:
        raise NoDeathSimplex(f"death simplex {pair.death_simplex} not paired")
    col = columns[j]
    cycle = []
    row = 0
    while col:
        if col & 1:
            cycle.append(edges[row][0])
        col >>= 1
        row += 1
    return cycle


def gf2_rank(rows) -> int:
    """Rank over GF(2) of a matrix given as an iterable of row bitsets."""
    pivots: dict[int, int] = {}
    rank = 0
    for row in rows:
        while row:
            lead = row.bit_length() - 1
            other = pivots.get(lead)
            if other is None:
                pivots[lead] = row
                rank += 1
                break
            row ^= other
    return rank


def betti_curve(cx: FilteredComplex, dim: int = 1, max_simplices: int = 2000):
    """beta_1 as a step function over the radius, evaluated at every
    critical value by fresh rank-nullity elimination (independent of the
    column reduction). Returns [(value, beta_1 on [value, next)), ...]."""
    if dim != 1:
        raise ValueError("only dimension 1 is supported")
    if len(cx) > max_simplices:
        raise TooLarge(f"betti_curve guard: {len(cx)} > {max_simplices} simplices")
    edges = [(s, v) for s, v in cx.entries if len(s) == 2]
    tris = [(s, v) for s, v in cx.entries if len(s) == 3]
    edge_col = {s: i for i, (s, _) in enumerate(edges)}
    criticals = sorted({v for _, v in cx.entries})
    out = []
    for r in criticals:
        e_in = [s for s, v in edges if v <= r]
        t_in = [s for s, v in tris if v <= r]
        # rank of the vertex-edge boundary block
        d1 = [(1 << s[0]) | (1 << s[1]) for s in e_in]
        rank1 = gf2_rank(d1)
        # rank of the edge-triangle boundary block
        d2 = [
            (1 << edge_col[(s[0], s[1])])
            | (1 << edge_col[(s[0], s[2])])
            | (1 << edge_col[(s[1], s[2])])
            for s in t_in
        ]
        rank2 = gf2_rank(d2)
        out.append((r, len(e_in) - rank1 - rank2))
    return out


def alive_count(diagram: PersistenceDiagram, r: float) -> int:
    """Number of diagram pairs with birth <= r < death."""
    return sum(1 for p in diagram.pairs if p.birth <= r < p.death)
