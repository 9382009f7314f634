# Digraph products with row-major flat labeling
#
# The pair (d, f) with d in V(D), f in V(F) is vertex d * |V(F)| + f.
# n-fold products fold left, so the labels compose as a mixed-radix number
# with the first factor most significant.

import logging
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import FrozenSet, Iterable, Sequence, Set, Tuple

from .digraph import Arc, Digraph
from .errors import InvalidVertexError, PreconditionError

logger = logging.getLogger(__name__)


class ProductKind(str, Enum):
    CARTESIAN = "cartesian"
    DIRECT = "direct"
    STRONG = "strong"
    LEXICOGRAPHIC = "lexicographic"

    @classmethod
    def parse(cls, name: str) -> "ProductKind":
        aliases = {"lex": cls.LEXICOGRAPHIC, "tensor": cls.DIRECT, "box": cls.CARTESIAN}
        key = name.strip().lower()
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise PreconditionError(f"unknown product kind '{name}'") from None


class Axis(str, Enum):
    """Which factor a layer copies, or which factor a projection lands in"""
    D = "D"
    F = "F"


def _cartesian_arcs(d: Digraph, f: Digraph) -> Set[Arc]:
    m = f.n
    arcs = {(a * m + y, b * m + y) for a, b in d.arcs for y in range(m)}
    arcs.update((x * m + a, x * m + b) for x in range(d.n) for a, b in f.arcs)
    return arcs


def _direct_arcs(d: Digraph, f: Digraph) -> Set[Arc]:
    m = f.n
    return {(a * m + x, b * m + y) for a, b in d.arcs for x, y in f.arcs}


def _lexicographic_arcs(d: Digraph, f: Digraph) -> Set[Arc]:
    m = f.n
    arcs = {(a * m + x, b * m + y) for a, b in d.arcs for x in range(m) for y in range(m)}
    arcs.update((x * m + a, x * m + b) for x in range(d.n) for a, b in f.arcs)
    return arcs


def product(kind: ProductKind, d: Digraph, f: Digraph) -> Digraph:
    """Product digraph of D and F in the flat labeling"""
    kind = ProductKind(kind)
    if d.n < 1 or f.n < 1:
        raise PreconditionError("product factors must have at least one vertex")
    if kind is ProductKind.CARTESIAN:
        arcs = _cartesian_arcs(d, f)
    elif kind is ProductKind.DIRECT:
        arcs = _direct_arcs(d, f)
    elif kind is ProductKind.STRONG:
        arcs = _cartesian_arcs(d, f) | _direct_arcs(d, f)
    else:
        arcs = _lexicographic_arcs(d, f)
    return Digraph(d.n * f.n, frozenset(arcs))


@dataclass(frozen=True)
class Product:
    """A binary product together with its pair index"""
    kind: ProductKind
    left: Digraph
    right: Digraph
    digraph: Digraph

    @classmethod
    def build(cls, kind: ProductKind, d: Digraph, f: Digraph) -> "Product":
        kind = ProductKind(kind)
        return cls(kind, d, f, product(kind, d, f))

    # ---------- pair index ----------

    def flat(self, d: int, f: int) -> int:
        if not 0 <= d < self.left.n:
            raise InvalidVertexError(d, self.left.n)
        if not 0 <= f < self.right.n:
            raise InvalidVertexError(f, self.right.n)
        return d * self.right.n + f

    def pair(self, vertex: int) -> Tuple[int, int]:
        if not 0 <= vertex < self.digraph.n:
            raise InvalidVertexError(vertex, self.digraph.n)
        return divmod(vertex, self.right.n)

    # ---------- layers and projections ----------

    def layer(self, axis: Axis, index: int) -> FrozenSet[int]:
        """
        D-layer through f ({(x, f)}) for axis D, F-layer through d ({(d, y)}) for axis F
        """
        if Axis(axis) is Axis.D:
            return frozenset(self.flat(x, index) for x in range(self.left.n))
        return frozenset(self.flat(index, y) for y in range(self.right.n))

    def project(self, vertices: Iterable[int], onto: Axis) -> FrozenSet[int]:
        coordinate = 0 if Axis(onto) is Axis.D else 1
        return frozenset(self.pair(v)[coordinate] for v in vertices)

    def lift(self, left_set: Iterable[int], right_set: Iterable[int]) -> FrozenSet[int]:
        """Flat labels of the Cartesian set product left_set x right_set"""
        return frozenset(self.flat(d, f) for d in left_set for f in right_set)


def layer(p: Product, axis: Axis, index: int) -> FrozenSet[int]:
    return p.layer(axis, index)


def project(p: Product, vertices: Iterable[int], onto: Axis) -> FrozenSet[int]:
    return p.project(vertices, onto)


# ==================== n-fold products ====================


def fold_product(kind: ProductKind, factors: Sequence[Digraph]) -> Digraph:
    """((D1 * D2) * D3) * ... ; a single factor is returned as is"""
    if not factors:
        raise PreconditionError("fold_product needs at least one factor")
    return reduce(lambda acc, nxt: product(kind, acc, nxt), factors[1:], factors[0])


def fold_flat(sizes: Sequence[int], coordinates: Sequence[int]) -> int:
    """Flat label of a coordinate tuple in a left-folded product"""
    if len(sizes) != len(coordinates):
        raise PreconditionError("coordinate tuple does not match the factor count")
    label = 0
    for size, c in zip(sizes, coordinates):
        if not 0 <= c < size:
            raise InvalidVertexError(c, size)
        label = label * size + c
    return label


def fold_coordinates(sizes: Sequence[int], label: int) -> Tuple[int, ...]:
    coordinates = []
    for size in reversed(sizes):
        label, c = divmod(label, size)
        coordinates.append(c)
    return tuple(reversed(coordinates))


def swap_factors(kind: ProductKind, d: Digraph, f: Digraph) -> Digraph:
    """F * D relabeled into the (d, f) labeling of D * F"""
    swapped = product(kind, f, d)
    mapping = [0] * swapped.n
    for y in range(f.n):
        for x in range(d.n):
            mapping[y * d.n + x] = x * f.n + y
    return swapped.relabel(mapping)
