# ECD solver: exact cover over closed out-neighborhoods
#
# An ECD set S is a selection of closed out-neighborhoods N+[s] covering every
# vertex exactly once. The search branches on the uncovered vertex with the
# fewest remaining candidate dominators (ties -> lowest label) and tries the
# candidates in ascending label order, so the first solution is deterministic.

import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Iterator, List, Optional, Tuple

from .config import Bounds
from .digraph import Digraph, iter_bits, mask_of, popcount
from .errors import BoundExceededError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EcdCertificate:
    """
    ECD set S with its dominator map

    dominator[u] is the unique s in S with u in N+[s]; dominator[s] == s.
    """
    s: FrozenSet[int]
    dominator: Tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.s)

    def members(self) -> List[int]:
        return sorted(self.s)


@dataclass(frozen=True)
class DominationNumbers:
    gamma: int
    gamma_a: int


def _mask(digraph: Digraph, vertices: Iterable[int]) -> int:
    return mask_of(digraph.vertex_set(vertices))


def _union_of_closed(digraph: Digraph, mask: int) -> int:
    union = 0
    for s in iter_bits(mask):
        union |= digraph.closed_out_masks[s]
    return union


# ==================== Set predicates ====================


def is_dominating_set(digraph: Digraph, vertices: Iterable[int]) -> bool:
    """Closed out-neighborhoods of the set cover V(D)"""
    return _union_of_closed(digraph, _mask(digraph, vertices)) == digraph.full_mask


def is_absorbing_set(digraph: Digraph, vertices: Iterable[int]) -> bool:
    """Closed in-neighborhoods of the set cover V(D)"""
    return is_dominating_set(digraph.reverse(), vertices)


def covers(digraph: Digraph, q: Iterable[int], r: Iterable[int]) -> bool:
    """Q -> R: every vertex of R lies in some N+[x], x in Q"""
    target = _mask(digraph, r)
    return _union_of_closed(digraph, _mask(digraph, q)) & target == target


def no_arcs_from(digraph: Digraph, q: Iterable[int], r: Iterable[int]) -> bool:
    """No arc starts in Q and ends in R"""
    source_mask, target_mask = _mask(digraph, q), _mask(digraph, r)
    return not any(digraph.out_masks[x] & target_mask for x in iter_bits(source_mask))


def no_arcs_between(digraph: Digraph, q: Iterable[int], r: Iterable[int]) -> bool:
    q, r = list(q), list(r)
    return no_arcs_from(digraph, q, r) and no_arcs_from(digraph, r, q)


def check_ecd_set(digraph: Digraph, vertices: Iterable[int]) -> Optional[EcdCertificate]:
    """Certificate if the closed out-neighborhoods of the set partition V(D)"""
    members = digraph.vertex_set(vertices)
    covered = 0
    dominator = [-1] * digraph.n
    for s in sorted(members):
        closed = digraph.closed_out_masks[s]
        if closed & covered:
            return None
        covered |= closed
        for u in iter_bits(closed):
            dominator[u] = s
    if covered != digraph.full_mask:
        return None
    return EcdCertificate(members, tuple(dominator))


def is_ecd_set(digraph: Digraph, vertices: Iterable[int]) -> bool:
    return check_ecd_set(digraph, vertices) is not None


def is_eca_set(digraph: Digraph, vertices: Iterable[int]) -> bool:
    """Closed in-neighborhoods of the set partition V(D)"""
    return check_ecd_set(digraph.reverse(), vertices) is not None


def sources_in_certificate(digraph: Digraph, vertices: Iterable[int]) -> bool:
    """Every source of D belongs to the set"""
    members = digraph.vertex_set(vertices)
    return set(digraph.sources()) <= members


# ==================== Exact-cover search ====================


def _exact_covers(digraph: Digraph) -> Iterator[List[int]]:
    """Yield every ECD set (as a list in selection order), first one deterministic"""
    closed_out = digraph.closed_out_masks
    closed_in = digraph.closed_in_masks
    full = digraph.full_mask
    chosen: List[int] = []

    def search(covered: int) -> Iterator[List[int]]:
        if covered == full:
            yield list(chosen)
            return
        best: Optional[List[int]] = None
        for u in iter_bits(full & ~covered):
            candidates = [w for w in iter_bits(closed_in[u]) if not closed_out[w] & covered]
            if not candidates:
                return
            if best is None or len(candidates) < len(best):
                best = candidates
                if len(best) == 1:
                    break
        for w in best:
            chosen.append(w)
            yield from search(covered | closed_out[w])
            chosen.pop()

    yield from search(0)


def _require(what: str, n: int, bound: int) -> None:
    if n > bound:
        raise BoundExceededError(what, n, bound)


def find_ecd_set(digraph: Digraph, bounds: Optional[Bounds] = None) -> Optional[EcdCertificate]:
    bounds = bounds or Bounds()
    _require("ECD search", digraph.n, bounds.search)
    solution = next(_exact_covers(digraph), None)
    if solution is None:
        logger.debug(f"No ECD set for digraph on {digraph.n} vertices")
        return None
    return check_ecd_set(digraph, solution)


def enumerate_ecd_sets(digraph: Digraph, bounds: Optional[Bounds] = None) -> List[FrozenSet[int]]:
    """All ECD sets, ordered lexicographically by their sorted member lists"""
    bounds = bounds or Bounds()
    _require("ECD enumeration", digraph.n, bounds.enum)
    solutions = sorted(sorted(solution) for solution in _exact_covers(digraph))
    return [frozenset(solution) for solution in solutions]


def find_eca_set(digraph: Digraph, bounds: Optional[Bounds] = None) -> Optional[EcdCertificate]:
    """
    ECA set of D, found as an ECD set of the reversed digraph

    The certificate's dominator map names, for every vertex, the member whose
    closed in-neighborhood contains it.
    """
    return find_ecd_set(digraph.reverse(), bounds)


# ==================== Domination numbers ====================


def _dominating_set_of_size(digraph: Digraph, size: int) -> Optional[List[int]]:
    closed_out = digraph.closed_out_masks
    closed_in = digraph.closed_in_masks
    widest = max((popcount(m) for m in closed_out), default=1)
    chosen: List[int] = []

    def search(uncovered: int, left: int) -> bool:
        if not uncovered:
            return True
        if left == 0 or popcount(uncovered) > left * widest:
            return False
        low = uncovered & -uncovered
        u = low.bit_length() - 1
        for w in iter_bits(closed_in[u]):
            chosen.append(w)
            if search(uncovered & ~closed_out[w], left - 1):
                return True
            chosen.pop()
        return False

    return chosen if search(digraph.full_mask, size) else None


def minimum_dominating_set(digraph: Digraph, bounds: Optional[Bounds] = None) -> FrozenSet[int]:
    """A dominating set of minimum size, by iterative deepening"""
    bounds = bounds or Bounds()
    _require("domination search", digraph.n, bounds.enum)
    for size in range(digraph.n + 1):
        found = _dominating_set_of_size(digraph, size)
        if found is not None:
            return frozenset(found)
    return frozenset(range(digraph.n))


def domination_number(digraph: Digraph, bounds: Optional[Bounds] = None) -> DominationNumbers:
    gamma = len(minimum_dominating_set(digraph, bounds))
    gamma_a = len(minimum_dominating_set(digraph.reverse(), bounds))
    return DominationNumbers(gamma=gamma, gamma_a=gamma_a)
