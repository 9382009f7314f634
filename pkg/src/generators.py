# Generators: oriented cycles, paths and stars, the independent-set
# orientation, and small-digraph corpora used by tests and sweeps

import itertools
import logging
import random
import re
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

import networkx as nx

from .digraph import Digraph, symmetric_closure
from .errors import PatternError, PreconditionError

logger = logging.getLogger(__name__)

CW, CCW = "cw", "ccw"
FWD, BWD = "fwd", "bwd"

_CYCLE_TOKENS = re.compile(r"ccw|cw")
_PATH_TOKENS = re.compile(r"fwd|bwd")


def _tokenize(text: str, pattern: "re.Pattern[str]", kind: str) -> Tuple[str, ...]:
    """Split 'cwccwcw' or 'cw,ccw,cw' (whitespace/commas optional) into tokens"""
    compact = re.sub(r"[\s,]+", "", text.lower())
    tokens = []
    pos = 0
    while pos < len(compact):
        match = pattern.match(compact, pos)
        if not match:
            raise PatternError(f"unrecognized {kind} symbol at '{compact[pos:]}'")
        tokens.append(match.group(0))
        pos = match.end()
    return tuple(tokens)


# ==================== Cycles ====================


@dataclass(frozen=True)
class CyclePattern:
    """
    Orientation word of a cycle on k vertices

    Symbol i orients the edge between positions i and i+1 (mod k):
    'cw' is the arc i -> i+1, 'ccw' is the arc i+1 -> i.
    """
    word: Tuple[str, ...]

    def __post_init__(self):
        word = tuple(self.word)
        if not word:
            raise PatternError("cycle word must be nonempty")
        bad = [s for s in word if s not in (CW, CCW)]
        if bad:
            raise PatternError(f"cycle symbols must be 'cw' or 'ccw', got {bad[0]!r}")
        if len(word) == 2 and word[0] != word[1]:
            # both symbols would name the same arc twice
            raise PatternError("a 2-cycle with a sink needs parallel arcs; use [cw, cw]")
        object.__setattr__(self, "word", word)

    @classmethod
    def parse(cls, text: str) -> "CyclePattern":
        return cls(_tokenize(text, _CYCLE_TOKENS, "cycle"))

    @classmethod
    def directed(cls, k: int) -> "CyclePattern":
        """C_k^0"""
        if k < 1:
            raise PatternError(f"cycle length must be >= 1, got {k}")
        return cls((CW,) * k)

    @property
    def k(self) -> int:
        return len(self.word)

    def sources(self) -> List[int]:
        if self.k <= 2:
            return []
        return [i for i in range(self.k) if self.word[i - 1] == CCW and self.word[i] == CW]

    def sinks(self) -> List[int]:
        if self.k <= 2:
            return []
        return [i for i in range(self.k) if self.word[i - 1] == CW and self.word[i] == CCW]

    @property
    def p(self) -> int:
        return len(self.sources())

    def rotations(self) -> Iterator["CyclePattern"]:
        for shift in range(self.k):
            yield CyclePattern(self.word[shift:] + self.word[:shift])

    def canonical(self) -> "CyclePattern":
        """Lexicographically least rotation"""
        return min(self.rotations(), key=lambda pattern: pattern.word)

    def __str__(self) -> str:
        return ",".join(self.word)


def gen_cycle(pattern: CyclePattern) -> Digraph:
    k = pattern.k
    if k == 1:
        return Digraph(1, frozenset({(0, 0)}))
    arcs = set()
    for i, symbol in enumerate(pattern.word):
        j = (i + 1) % k
        arcs.add((i, j) if symbol == CW else (j, i))
    return Digraph(k, frozenset(arcs))


def all_cycle_patterns(k: int, rotation_classes: bool = True) -> List[CyclePattern]:
    """Every valid orientation word of length k, optionally one per rotation class"""
    if rotation_classes and k <= 2:
        # [ccw] and [ccw, ccw] repeat the loop and the digon
        return [CyclePattern.directed(k)]
    patterns = {}
    for word in itertools.product((CW, CCW), repeat=k):
        if k == 2 and word[0] != word[1]:
            continue
        pattern = CyclePattern(word)
        key = pattern.canonical() if rotation_classes else pattern
        patterns.setdefault(key.word, key)
    return [patterns[w] for w in sorted(patterns)]


# ==================== Paths ====================


@dataclass(frozen=True)
class PathPattern:
    """
    Orientation word of a path on k = len(word) + 1 vertices

    'fwd' at position i is the arc i -> i+1, 'bwd' is the arc i+1 -> i.
    """
    word: Tuple[str, ...] = ()

    def __post_init__(self):
        word = tuple(self.word)
        bad = [s for s in word if s not in (FWD, BWD)]
        if bad:
            raise PatternError(f"path symbols must be 'fwd' or 'bwd', got {bad[0]!r}")
        object.__setattr__(self, "word", word)

    @classmethod
    def parse(cls, text: str) -> "PathPattern":
        return cls(_tokenize(text, _PATH_TOKENS, "path"))

    @classmethod
    def directed(cls, k: int) -> "PathPattern":
        if k < 1:
            raise PatternError(f"path must have >= 1 vertex, got {k}")
        return cls((FWD,) * (k - 1))

    @property
    def k(self) -> int:
        return len(self.word) + 1

    def internal_sinks(self) -> List[int]:
        """Sinks of degree 2"""
        return [i for i in range(1, self.k - 1) if self.word[i - 1] == FWD and self.word[i] == BWD]

    def internal_sources(self) -> List[int]:
        return [i for i in range(1, self.k - 1) if self.word[i - 1] == BWD and self.word[i] == FWD]

    @property
    def has_internal_sink(self) -> bool:
        return bool(self.internal_sinks())

    def __str__(self) -> str:
        return ",".join(self.word)


def gen_path(pattern: PathPattern) -> Digraph:
    arcs = frozenset(
        (i, i + 1) if symbol == FWD else (i + 1, i)
        for i, symbol in enumerate(pattern.word)
    )
    return Digraph(pattern.k, arcs)


def all_path_patterns(k: int) -> List[PathPattern]:
    return [PathPattern(word) for word in itertools.product((FWD, BWD), repeat=k - 1)]


# ==================== Stars ====================


class StarMode(str, Enum):
    CENTER_SOURCE = "center-source"
    CENTER_SINK = "center-sink"
    MIXED = "mixed"


@dataclass(frozen=True)
class StarOrientation:
    """
    Orientation of K_{1,t}; the center is vertex 0, leaves are 1..t

    In mixed mode leaves 1..t1 are sources (arcs leaf -> center) and
    leaves t1+1..t are sinks (arcs center -> leaf).
    """
    t: int
    mode: StarMode = StarMode.CENTER_SOURCE
    t1: int = 0
    t2: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mode", StarMode(self.mode))
        if self.t < 1:
            raise PatternError(f"star needs t >= 1 leaves, got {self.t}")
        if self.mode is StarMode.MIXED:
            if self.t1 < 0 or self.t2 < 0 or self.t1 + self.t2 != self.t:
                raise PatternError(f"mixed star needs t1 + t2 = t, got {self.t1} + {self.t2} != {self.t}")

    @classmethod
    def center_source(cls, t: int) -> "StarOrientation":
        return cls(t, StarMode.CENTER_SOURCE)

    @classmethod
    def center_sink(cls, t: int) -> "StarOrientation":
        return cls(t, StarMode.CENTER_SINK)

    @classmethod
    def mixed(cls, t1: int, t2: int) -> "StarOrientation":
        return cls(t1 + t2, StarMode.MIXED, t1, t2)

    def source_leaves(self) -> List[int]:
        if self.mode is StarMode.CENTER_SINK:
            return list(range(1, self.t + 1))
        if self.mode is StarMode.MIXED:
            return list(range(1, self.t1 + 1))
        return []

    def __str__(self) -> str:
        if self.mode is StarMode.MIXED:
            return f"K1,{self.t}[mixed {self.t1}/{self.t2}]"
        return f"K1,{self.t}[{self.mode.value}]"


def gen_star(orientation: StarOrientation) -> Digraph:
    inward = set(orientation.source_leaves())
    arcs = frozenset(
        (leaf, 0) if leaf in inward else (0, leaf)
        for leaf in range(1, orientation.t + 1)
    )
    return Digraph(orientation.t + 1, arcs)


# ==================== Orientation from an independent dominating set ====================


def _check_undirected(graph: Digraph) -> None:
    for u, v in graph.arcs:
        if u == v:
            raise PreconditionError(f"graph has a loop at {u}")
        if (v, u) not in graph.arcs:
            raise PreconditionError(f"graph is not symmetric: arc ({u}, {v}) has no reverse")


def orient_from_independent_set(graph: Digraph, independent: Iterable[int]) -> Digraph:
    """
    Orient an undirected graph so that a given independent dominating set
    becomes an ECD set

    Args:
        graph: Undirected graph given as a symmetric loopless digraph
        independent: Independent set of the graph dominating every other vertex

    Returns:
        An orientation of the graph in which every vertex outside the set has
        exactly one in-neighbor inside it
    """
    _check_undirected(graph)
    members = graph.vertex_set(independent)
    for u in members:
        clash = graph.out_neighbors(u) & members
        if clash:
            raise PreconditionError(f"set is not independent: {u} and {min(clash)} are adjacent")
    for v in range(graph.n):
        if v not in members and not graph.out_neighbors(v) & members:
            raise PreconditionError(f"set does not dominate vertex {v}")

    claimed = set()
    arcs = set()
    for u in sorted(members):
        for v in sorted(graph.out_neighbors(u)):
            if v in claimed:
                arcs.add((v, u))
            else:
                arcs.add((u, v))
                claimed.add(v)
    for edge in graph.underlying_edges():
        u, v = sorted(edge)
        if u not in members and v not in members:
            arcs.add((u, v))
    return Digraph(graph.n, frozenset(arcs))


def greedy_independent_dominating_set(graph: Digraph) -> FrozenSet[int]:
    """Maximal independent set built by scanning vertices in ascending order"""
    chosen = set()
    blocked = set()
    for v in range(graph.n):
        if v in blocked:
            continue
        chosen.add(v)
        blocked.add(v)
        blocked.update(graph.out_neighbors(v))
    return frozenset(chosen)


def random_graph(n: int, edge_probability: float, seed: Optional[int] = None) -> Digraph:
    """G(n, p) random graph as a symmetric digraph"""
    graph = nx.gnp_random_graph(n, edge_probability, seed=seed)
    return symmetric_closure(n, graph.edges())


# ==================== Corpora ====================


def all_digraphs(n: int, loops: bool = False) -> Iterator[Digraph]:
    """Every labeled digraph on n vertices (2^(n(n-1)) of them without loops)"""
    slots = [(u, v) for u in range(n) for v in range(n) if loops or u != v]
    for mask in range(1 << len(slots)):
        yield Digraph(n, frozenset(slot for i, slot in enumerate(slots) if mask >> i & 1))


def all_small_digraphs(max_n: int, loops: bool = False) -> List[Digraph]:
    corpus: List[Digraph] = []
    for n in range(1, max_n + 1):
        corpus.extend(all_digraphs(n, loops))
    return corpus


def random_digraph(n: int, arc_probability: float, rng: random.Random) -> Digraph:
    """Uniform arc sampling over ordered pairs of distinct vertices"""
    arcs = frozenset(
        (u, v) for u in range(n) for v in range(n)
        if u != v and rng.random() < arc_probability
    )
    return Digraph(n, arcs)


def demo_factors() -> Dict[str, Digraph]:
    """
    The two small factors used to illustrate the four products

    D: a=0, b=1, c=2, d=3 with arcs b->a, b->c, d->b
    E: source-centered star on three vertices, center 1
    """
    return {
        "D": Digraph(4, frozenset({(1, 0), (1, 2), (3, 1)})),
        "E": Digraph(3, frozenset({(1, 0), (1, 2)})),
    }
