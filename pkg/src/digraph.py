# Digraph core: immutable labeled digraph with neighborhood queries
#
# Vertices are dense integers 0..n-1. Vertex sets are handed out as frozensets;
# internally every neighborhood is also kept as an int bitmask so that the
# exact-cover search can test coverage and disjointness with single AND ops.

import logging
from dataclasses import dataclass
from enum import Flag, auto
from functools import cached_property
from typing import FrozenSet, Iterable, Iterator, List, Sequence, Tuple

import networkx as nx

from .errors import InvalidVertexError, PreconditionError

logger = logging.getLogger(__name__)

Arc = Tuple[int, int]

# ==================== Bitmask helpers ====================


def mask_of(vertices: Iterable[int]) -> int:
    """Bitmask with bit v set for every v in vertices"""
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions in ascending order"""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def vertices_of(mask: int) -> FrozenSet[int]:
    return frozenset(iter_bits(mask))


def popcount(mask: int) -> int:
    return bin(mask).count("1")


# ==================== Vertex classification ====================


class VertexClass(Flag):
    """Degree-based vertex flags; a vertex may carry several"""
    SINK = auto()
    SOURCE = auto()
    ISOLATED = auto()
    LEAF_SINK = auto()
    LEAF_SOURCE = auto()
    OUT_UNIVERSAL = auto()
    IN_UNIVERSAL = auto()
    ORDINARY = auto()


# ==================== Digraph ====================


@dataclass(frozen=True)
class Digraph:
    """
    Labeled digraph on vertices 0..n-1

    Loops (v, v) are allowed and count once toward both the out-degree and
    the in-degree of v. Double arcs u->v, v->u are two distinct arcs.
    """
    n: int
    arcs: FrozenSet[Arc] = frozenset()

    def __post_init__(self):
        if self.n < 0:
            raise PreconditionError(f"vertex count must be >= 0, got {self.n}")
        arcs = frozenset((int(u), int(v)) for u, v in self.arcs)
        for u, v in arcs:
            self._check(u)
            self._check(v)
        object.__setattr__(self, "arcs", arcs)

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[Arc]) -> "Digraph":
        """Build from an arc sequence, rejecting duplicate ordered pairs"""
        seen = set()
        for arc in arcs:
            arc = (int(arc[0]), int(arc[1]))
            if arc in seen:
                raise PreconditionError(f"duplicate arc {arc}")
            seen.add(arc)
        return cls(n, frozenset(seen))

    @classmethod
    def empty(cls, n: int) -> "Digraph":
        """Arcless digraph on n vertices"""
        return cls(n)

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, arcs={self.sorted_arcs()})"

    # ---------- validation ----------

    def _check(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise InvalidVertexError(v, self.n)
        return v

    def vertex_set(self, vertices: Iterable[int]) -> FrozenSet[int]:
        """Validate and freeze a vertex set"""
        return frozenset(self._check(int(v)) for v in vertices)

    # ---------- bitmask views ----------

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def out_masks(self) -> Tuple[int, ...]:
        masks = [0] * self.n
        for u, v in self.arcs:
            masks[u] |= 1 << v
        return tuple(masks)

    @cached_property
    def in_masks(self) -> Tuple[int, ...]:
        masks = [0] * self.n
        for u, v in self.arcs:
            masks[v] |= 1 << u
        return tuple(masks)

    @cached_property
    def closed_out_masks(self) -> Tuple[int, ...]:
        return tuple(m | (1 << v) for v, m in enumerate(self.out_masks))

    @cached_property
    def closed_in_masks(self) -> Tuple[int, ...]:
        return tuple(m | (1 << v) for v, m in enumerate(self.in_masks))

    # ---------- neighborhoods and degrees ----------

    def out_neighbors(self, v: int) -> FrozenSet[int]:
        """N+(v)"""
        return vertices_of(self.out_masks[self._check(v)])

    def in_neighbors(self, v: int) -> FrozenSet[int]:
        """N-(v)"""
        return vertices_of(self.in_masks[self._check(v)])

    def closed_out_neighborhood(self, v: int) -> FrozenSet[int]:
        """N+[v]; always contains v"""
        return vertices_of(self.closed_out_masks[self._check(v)])

    def closed_in_neighborhood(self, v: int) -> FrozenSet[int]:
        """N-[v]; always contains v"""
        return vertices_of(self.closed_in_masks[self._check(v)])

    def out_degree(self, v: int) -> int:
        return popcount(self.out_masks[self._check(v)])

    def in_degree(self, v: int) -> int:
        return popcount(self.in_masks[self._check(v)])

    def degree(self, v: int) -> int:
        return self.out_degree(v) + self.in_degree(v)

    def has_loop(self, v: int) -> bool:
        return (self._check(v), v) in self.arcs

    @cached_property
    def has_loops(self) -> bool:
        return any(u == v for u, v in self.arcs)

    @property
    def is_arcless(self) -> bool:
        return not self.arcs

    def sinks(self) -> List[int]:
        return [v for v in range(self.n) if not self.out_masks[v]]

    def sources(self) -> List[int]:
        return [v for v in range(self.n) if not self.in_masks[v]]

    def is_out_universal(self, v: int) -> bool:
        """Every other vertex is an out-neighbor of v (a loop at v is irrelevant)"""
        return self.closed_out_masks[self._check(v)] == self.full_mask

    def out_universal_vertices(self) -> List[int]:
        return [v for v in range(self.n) if self.closed_out_masks[v] == self.full_mask]

    def classify(self, v: int) -> VertexClass:
        out_deg, in_deg = self.out_degree(v), self.in_degree(v)
        flags = VertexClass(0)
        if out_deg == 0:
            flags |= VertexClass.SINK
        if in_deg == 0:
            flags |= VertexClass.SOURCE
        if out_deg + in_deg == 0:
            flags |= VertexClass.ISOLATED
        if out_deg + in_deg == 1:
            flags |= VertexClass.LEAF_SINK if out_deg == 0 else VertexClass.LEAF_SOURCE
        if self.closed_out_masks[v] == self.full_mask:
            flags |= VertexClass.OUT_UNIVERSAL
        if self.closed_in_masks[v] == self.full_mask:
            flags |= VertexClass.IN_UNIVERSAL
        return flags or VertexClass.ORDINARY

    # ---------- derived digraphs ----------

    def reverse(self) -> "Digraph":
        """D^-: every arc turned around"""
        return Digraph(self.n, frozenset((v, u) for u, v in self.arcs))

    def without_loops(self) -> "Digraph":
        if not self.has_loops:
            return self
        return Digraph(self.n, frozenset((u, v) for u, v in self.arcs if u != v))

    def induced(self, vertices: Iterable[int]) -> Tuple["Digraph", Tuple[int, ...]]:
        """
        D[S] relabeled onto 0..|S|-1

        Returns:
            (subdigraph, index_map) where index_map[i] is the original label of
            vertex i; members keep their ascending order
        """
        index_map = tuple(sorted(self.vertex_set(vertices)))
        position = {v: i for i, v in enumerate(index_map)}
        arcs = frozenset(
            (position[u], position[v])
            for u, v in self.arcs
            if u in position and v in position
        )
        return Digraph(len(index_map), arcs), index_map

    def components(self) -> List[FrozenSet[int]]:
        """Weak components, ordered by their smallest vertex"""
        parts = [frozenset(c) for c in nx.weakly_connected_components(self.to_networkx())]
        return sorted(parts, key=min)

    def underlying_edges(self) -> FrozenSet[FrozenSet[int]]:
        """Edges of G_D; double arcs collapse to one edge, loops are dropped"""
        return frozenset(frozenset(arc) for arc in self.arcs if arc[0] != arc[1])

    def relabel(self, mapping: Sequence[int]) -> "Digraph":
        """Apply the vertex bijection v -> mapping[v]"""
        if sorted(mapping) != list(range(self.n)):
            raise PreconditionError("relabeling is not a permutation of the vertex set")
        return Digraph(self.n, frozenset((mapping[u], mapping[v]) for u, v in self.arcs))

    # ---------- interop ----------

    def sorted_arcs(self) -> List[Arc]:
        return sorted(self.arcs)

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.arcs)
        return graph

    @classmethod
    def from_networkx(cls, graph: nx.DiGraph) -> "Digraph":
        """Import a networkx digraph whose nodes are 0..n-1"""
        return cls(graph.number_of_nodes(), frozenset(graph.edges()))


def disjoint_union(*digraphs: Digraph) -> Digraph:
    """Place the digraphs side by side, shifting labels in argument order"""
    arcs = set()
    offset = 0
    for d in digraphs:
        arcs.update((u + offset, v + offset) for u, v in d.arcs)
        offset += d.n
    return Digraph(offset, frozenset(arcs))


def symmetric_closure(n: int, edges: Iterable[Tuple[int, int]]) -> Digraph:
    """Undirected graph as a symmetric digraph (each edge becomes a double arc)"""
    arcs = set()
    for u, v in edges:
        arcs.add((u, v))
        arcs.add((v, u))
    return Digraph(n, frozenset(arcs))


# ==================== Functional API ====================


def closed_out_neighborhood(digraph: Digraph, v: int) -> FrozenSet[int]:
    return digraph.closed_out_neighborhood(v)


def reverse(digraph: Digraph) -> Digraph:
    return digraph.reverse()


def classify(digraph: Digraph, v: int) -> VertexClass:
    return digraph.classify(v)


def induced(digraph: Digraph, vertices: Iterable[int]) -> Tuple[Digraph, Tuple[int, ...]]:
    return digraph.induced(vertices)


def components(digraph: Digraph) -> List[FrozenSet[int]]:
    return digraph.components()
