# Vertex-partition families behind the Cartesian-product characterizations
#
#   D1  W, Z, V' with W and Z each an ECD set of their union with V' and no
#       arc between W and Z; also the one-vertex loopless digraph
#   D2  U1, U2, U3 where U_i is an ECD set of U_i + U_(i+1) and every arc
#       runs U1 -> U2 -> U3 -> U1
#   D3  a D1 part and a D2 part joined only by arcs from V' into the D2 part
#   D0  an ECD set S with an ECD set S' of the rest and no arc S' -> S
#
# Recognizers ignore loops: closed neighborhoods do not see them.

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .config import Bounds
from .digraph import Digraph, mask_of
from .ecd_solver import enumerate_ecd_sets, is_ecd_set, no_arcs_between, no_arcs_from
from .errors import BoundExceededError, PreconditionError

logger = logging.getLogger(__name__)


class Family(str, Enum):
    D0 = "D0"
    D1 = "D1"
    D2 = "D2"
    D3 = "D3"


@dataclass(frozen=True)
class D1Witness:
    W: FrozenSet[int]
    Z: FrozenSet[int]
    Vp: FrozenSet[int]
    trivial: bool = False

    family = Family.D1


@dataclass(frozen=True)
class D2Witness:
    U1: FrozenSet[int]
    U2: FrozenSet[int]
    U3: FrozenSet[int]

    family = Family.D2

    @property
    def blocks(self) -> Tuple[FrozenSet[int], FrozenSet[int], FrozenSet[int]]:
        return self.U1, self.U2, self.U3


@dataclass(frozen=True)
class D3Witness:
    part1: FrozenSet[int]
    part2: FrozenSet[int]
    d1: D1Witness
    d2: D2Witness

    family = Family.D3


@dataclass(frozen=True)
class D0Witness:
    S: FrozenSet[int]
    Sp: FrozenSet[int]

    family = Family.D0


FamilyWitness = Union[D0Witness, D1Witness, D2Witness, D3Witness]


def _relabel_set(vertices: Iterable[int], index_map: Sequence[int]) -> FrozenSet[int]:
    return frozenset(index_map[v] for v in vertices)


def relabel_witness(witness: FamilyWitness, index_map: Sequence[int]) -> FamilyWitness:
    """Carry a witness found on an induced subdigraph back to the parent labels"""
    if isinstance(witness, D1Witness):
        return D1Witness(_relabel_set(witness.W, index_map), _relabel_set(witness.Z, index_map),
                         _relabel_set(witness.Vp, index_map), witness.trivial)
    if isinstance(witness, D2Witness):
        return D2Witness(*(_relabel_set(block, index_map) for block in witness.blocks))
    if isinstance(witness, D3Witness):
        return D3Witness(_relabel_set(witness.part1, index_map), _relabel_set(witness.part2, index_map),
                         relabel_witness(witness.d1, index_map), relabel_witness(witness.d2, index_map))
    return D0Witness(_relabel_set(witness.S, index_map), _relabel_set(witness.Sp, index_map))


def _family_bound(digraph: Digraph, bounds: Optional[Bounds], family: Family) -> None:
    bounds = bounds or Bounds()
    if digraph.n > bounds.family:
        raise BoundExceededError(f"{family.value} partition search", digraph.n, bounds.family)


def _is_partition(n: int, blocks: Sequence[FrozenSet[int]]) -> bool:
    seen = set()
    for block in blocks:
        if seen & block:
            return False
        seen |= block
    return seen == set(range(n))


def _ecd_in_induced(digraph: Digraph, members: FrozenSet[int], universe: FrozenSet[int]) -> bool:
    """members is an ECD set of D[universe]"""
    if not members <= universe:
        return False
    sub, index_map = digraph.induced(universe)
    position = {v: i for i, v in enumerate(index_map)}
    return is_ecd_set(sub, [position[v] for v in members])


# ==================== Witness checks ====================


def verify_witness(digraph: Digraph, witness: FamilyWitness) -> bool:
    """Check every defining condition of the witness against the digraph"""
    d = digraph.without_loops()
    if isinstance(witness, D1Witness):
        if witness.trivial:
            return d.n == 1 and witness.W == {0} and not witness.Z and not witness.Vp
        blocks = (witness.W, witness.Z, witness.Vp)
        return (all(blocks) and _is_partition(d.n, blocks)
                and _ecd_in_induced(d, witness.W, witness.W | witness.Vp)
                and _ecd_in_induced(d, witness.Z, witness.Z | witness.Vp)
                and no_arcs_between(d, witness.W, witness.Z))
    if isinstance(witness, D2Witness):
        u = witness.blocks
        if not (all(u) and _is_partition(d.n, u)):
            return False
        if any(not _ecd_in_induced(d, u[i], u[i] | u[(i + 1) % 3]) for i in range(3)):
            return False
        # only forward arcs U_i -> U_(i+1)
        label = {v: i for i, block in enumerate(u) for v in block}
        return all(label[y] == (label[x] + 1) % 3 for x, y in d.arcs)
    if isinstance(witness, D3Witness):
        if not (witness.part1 and witness.part2 and _is_partition(d.n, (witness.part1, witness.part2))):
            return False
        sub1, map1 = d.induced(witness.part1)
        sub2, map2 = d.induced(witness.part2)
        pos1 = {v: i for i, v in enumerate(map1)}
        pos2 = {v: i for i, v in enumerate(map2)}
        local_d1 = D1Witness(*(frozenset(pos1[v] for v in block)
                               for block in (witness.d1.W, witness.d1.Z, witness.d1.Vp)),
                             witness.d1.trivial)
        local_d2 = D2Witness(*(frozenset(pos2[v] for v in block) for block in witness.d2.blocks))
        if not (verify_witness(sub1, local_d1) and verify_witness(sub2, local_d2)):
            return False
        cross = [(x, y) for x, y in d.arcs if (x in witness.part1) != (y in witness.part1)]
        return bool(cross) and all(x in witness.d1.Vp and y in witness.part2 for x, y in cross)
    if isinstance(witness, D0Witness):
        if not is_ecd_set(digraph, witness.S):
            return False
        rest = frozenset(range(digraph.n)) - witness.S
        if not rest:
            return not witness.Sp
        return (_ecd_in_induced(digraph, witness.Sp, rest)
                and no_arcs_from(digraph, witness.Sp, witness.S))
    raise PreconditionError(f"unknown witness type {type(witness).__name__}")


# ==================== Recognizers ====================

_W, _Z, _V = 0, 1, 2


def _search_d1(d: Digraph, forced_inner: FrozenSet[int] = frozenset()) -> Optional[D1Witness]:
    """
    Backtracking over labels W < Z < V' per vertex in ascending order

    Every V' vertex needs exactly one in-neighbor in W and one in Z;
    W and Z are independent and no arc joins them.
    """
    n = d.n
    out = [d.out_neighbors(v) - {v} for v in range(n)]
    into = [d.in_neighbors(v) - {v} for v in range(n)]
    label = [-1] * n
    w_count = [0] * n
    z_count = [0] * n

    def assign_ok(x: int, lab: int) -> bool:
        if lab == _V:
            return w_count[x] <= 1 and z_count[x] <= 1
        for y in out[x] | into[x]:
            if label[y] in (_W, _Z):
                return False
        counts = w_count if lab == _W else z_count
        return all(not (label[y] == _V and counts[y] >= 1) for y in out[x])

    def apply(x: int, lab: int, delta: int) -> None:
        label[x] = lab if delta > 0 else -1
        if lab == _V:
            return
        counts = w_count if lab == _W else z_count
        for y in out[x]:
            counts[y] += delta

    def complete() -> bool:
        used = set(label)
        if used != {_W, _Z, _V}:
            return False
        return all(w_count[v] == 1 and z_count[v] == 1 for v in range(n) if label[v] == _V)

    def search(x: int) -> bool:
        if x == n:
            return complete()
        choices = (_V,) if x in forced_inner else (_W, _Z, _V)
        for lab in choices:
            if not assign_ok(x, lab):
                continue
            apply(x, lab, 1)
            if search(x + 1):
                return True
            apply(x, lab, -1)
        return False

    if not search(0):
        return None
    blocks = [frozenset(v for v in range(n) if label[v] == lab) for lab in (_W, _Z, _V)]
    return D1Witness(*blocks)


def recognize_d1(digraph: Digraph, bounds: Optional[Bounds] = None,
                 forced_inner: Iterable[int] = ()) -> Optional[D1Witness]:
    _family_bound(digraph, bounds, Family.D1)
    d = digraph.without_loops()
    forced = digraph.vertex_set(forced_inner)
    if d.n == 1 and not digraph.has_loops and not forced:
        return D1Witness(frozenset({0}), frozenset(), frozenset(), trivial=True)
    if d.n < 3:
        return None
    return _search_d1(d, forced)


def recognize_d2(digraph: Digraph, bounds: Optional[Bounds] = None) -> Optional[D2Witness]:
    """Label propagation mod 3 along arcs, lowest vertex of each component gets U1"""
    _family_bound(digraph, bounds, Family.D2)
    d = digraph.without_loops()
    if d.n == 0 or any(d.in_degree(v) != 1 for v in range(d.n)):
        return None
    label: Dict[int, int] = {}
    for component in d.components():
        root = min(component)
        label[root] = 0
        frontier = [root]
        while frontier:
            x = frontier.pop()
            for y in sorted(d.out_neighbors(x)):
                want = (label[x] + 1) % 3
                if y not in label:
                    label[y] = want
                    frontier.append(y)
                elif label[y] != want:
                    return None
            for y in sorted(d.in_neighbors(x)):
                want = (label[x] - 1) % 3
                if y not in label:
                    label[y] = want
                    frontier.append(y)
                elif label[y] != want:
                    return None
    blocks = [frozenset(v for v in range(d.n) if label[v] == i) for i in range(3)]
    if not all(blocks):
        return None
    return D2Witness(*blocks)


def recognize_d3(digraph: Digraph, bounds: Optional[Bounds] = None) -> Optional[D3Witness]:
    """Scan candidate D2 parts by ascending bitmask; tails of cross arcs are forced into V'"""
    _family_bound(digraph, bounds, Family.D3)
    d = digraph.without_loops()
    n = d.n
    full = d.full_mask
    for part2_mask in range(1, full):
        part2 = frozenset(v for v in range(n) if part2_mask >> v & 1)
        part1 = frozenset(range(n)) - part2
        # D2 part must be closed under out-arcs
        if any(d.out_masks[v] & ~part2_mask for v in part2):
            continue
        tails = frozenset(x for x in part1 if d.out_masks[x] & part2_mask)
        if not tails:
            continue
        sub2, map2 = d.induced(part2)
        d2 = recognize_d2(sub2, bounds)
        if d2 is None:
            continue
        sub1, map1 = d.induced(part1)
        pos1 = {v: i for i, v in enumerate(map1)}
        d1 = recognize_d1(sub1, bounds, forced_inner=[pos1[x] for x in tails])
        if d1 is None or d1.trivial:
            continue
        return D3Witness(part1, part2, relabel_witness(d1, map1), relabel_witness(d2, map2))
    return None


def recognize_d0(digraph: Digraph, bounds: Optional[Bounds] = None) -> Optional[D0Witness]:
    """First (S, S') in enumeration order with S' -> S arc-free"""
    everything = frozenset(range(digraph.n))
    for s in enumerate_ecd_sets(digraph, bounds):
        rest = everything - s
        if not rest:
            return D0Witness(s, frozenset())
        sub, index_map = digraph.induced(rest)
        for local in enumerate_ecd_sets(sub, bounds):
            sp = _relabel_set(local, index_map)
            if no_arcs_from(digraph, sp, s):
                return D0Witness(s, sp)
    return None


_RECOGNIZERS = {
    Family.D0: recognize_d0,
    Family.D1: recognize_d1,
    Family.D2: recognize_d2,
    Family.D3: recognize_d3,
}


def recognize(family: Family, digraph: Digraph, bounds: Optional[Bounds] = None) -> Optional[FamilyWitness]:
    family = Family(family)
    witness = _RECOGNIZERS[family](digraph, bounds)
    logger.debug(f"recognize {family.value} on n={digraph.n}: {'member' if witness else 'none'}")
    return witness


# ==================== Constructors ====================


def _check_blocks(blocks: Sequence[Iterable[int]], n: int, what: str) -> List[FrozenSet[int]]:
    frozen = [frozenset(block) for block in blocks]
    if not frozen:
        raise PreconditionError(f"{what} must have at least one block")
    if any(not block for block in frozen):
        raise PreconditionError(f"{what} has an empty block")
    if not _is_partition(n, frozen):
        raise PreconditionError(f"{what} is not a partition of 0..{n - 1}")
    return frozen


def _check_extra_arcs(arcs: Iterable[Tuple[int, int]], tails: range, heads: range, what: str) -> FrozenSet[Tuple[int, int]]:
    checked = set()
    for x, y in arcs:
        if x not in tails or y not in heads:
            raise PreconditionError(
                f"{what} arc ({x}, {y}) must run from {tails.start}..{tails.stop - 1} "
                f"to {heads.start}..{heads.stop - 1}")
        checked.add((x, y))
    return frozenset(checked)


def construct_d1(dp: Digraph, pi1: Sequence[Iterable[int]], pi2: Sequence[Iterable[int]],
                 extra: Iterable[Tuple[int, int]] = ()) -> Tuple[Digraph, D1Witness]:
    """
    D' plus external dominators w_i over the blocks of pi1 and z_j over pi2

    Labels: V(D') keeps 0..m-1, then w_1..w_p, then z_1..z_r. The extra arcs
    (B) must start in V(D') and end at some w_i or z_j.
    """
    m = dp.n
    w_blocks = _check_blocks(pi1, m, "pi1")
    z_blocks = _check_blocks(pi2, m, "pi2")
    p, r = len(w_blocks), len(z_blocks)
    n = m + p + r
    arcs = set(dp.arcs)
    arcs.update((m + i, v) for i, block in enumerate(w_blocks) for v in block)
    arcs.update((m + p + j, v) for j, block in enumerate(z_blocks) for v in block)
    arcs |= _check_extra_arcs(extra, range(m), range(m, n), "B")
    witness = D1Witness(frozenset(range(m, m + p)), frozenset(range(m + p, n)), frozenset(range(m)))
    return Digraph(n, frozenset(arcs)), witness


def construct_d2(sizes: Tuple[int, int, int],
                 assignments: Sequence[Iterable[Tuple[int, int]]]) -> Tuple[Digraph, D2Witness]:
    """
    Three blocks with dominator arcs U1 -> U2 -> U3 -> U1

    assignments[i] lists (dominator, target) as indices within U_i and
    U_(i+1); every target must appear exactly once.
    """
    if len(sizes) != 3 or len(assignments) != 3:
        raise PreconditionError("D2 construction needs three block sizes and three assignment lists")
    if any(size < 1 for size in sizes):
        raise PreconditionError(f"D2 block sizes must be >= 1, got {tuple(sizes)}")
    offsets = (0, sizes[0], sizes[0] + sizes[1])
    arcs = set()
    for i in range(3):
        j = (i + 1) % 3
        hits = [0] * sizes[j]
        for dom, target in assignments[i]:
            if not (0 <= dom < sizes[i] and 0 <= target < sizes[j]):
                raise PreconditionError(f"assignment ({dom}, {target}) outside blocks U{i + 1} -> U{j + 1}")
            hits[target] += 1
            arcs.add((offsets[i] + dom, offsets[j] + target))
        for target, count in enumerate(hits):
            if count != 1:
                raise PreconditionError(
                    f"vertex {target} of U{j + 1} has {count} dominators in U{i + 1}, expected 1")
    n = sum(sizes)
    blocks = [frozenset(range(offsets[i], offsets[i] + sizes[i])) for i in range(3)]
    return Digraph(n, frozenset(arcs)), D2Witness(*blocks)


def construct_dp(d: Digraph, w_partition: Sequence[Iterable[int]],
                 b: Iterable[Tuple[int, int]] = ()) -> Tuple[Digraph, FrozenSet[int]]:
    """First stage: external w_i over the blocks of V(D); returns (D_p, W)"""
    m = d.n
    if d.is_arcless:
        return d, frozenset(range(m))
    blocks = _check_blocks(w_partition, m, "W-partition")
    p = len(blocks)
    arcs = set(d.arcs)
    arcs.update((m + i, v) for i, block in enumerate(blocks) for v in block)
    arcs |= _check_extra_arcs(b, range(m), range(m, m + p), "B")
    return Digraph(m + p, frozenset(arcs)), frozenset(range(m, m + p))


def construct_dpr(d: Digraph, w_partition: Sequence[Iterable[int]], b: Iterable[Tuple[int, int]],
                  z_partition: Sequence[Iterable[int]],
                  bp: Iterable[Tuple[int, int]] = ()) -> Tuple[Digraph, D0Witness]:
    """
    Two-stage construction over D

    Labels: V(D) is 0..m-1, then w_1..w_p, then z_1..z_r. B ends at the w_i,
    B' ends at the z_j; both start in V(D). An arcless D is returned as is.
    """
    m = d.n
    if d.is_arcless:
        return d, D0Witness(frozenset(range(m)), frozenset())
    dp, w_set = construct_dp(d, w_partition, b)
    z_blocks = _check_blocks(z_partition, dp.n, "Z-partition")
    r = len(z_blocks)
    n = dp.n + r
    arcs = set(dp.arcs)
    arcs.update((dp.n + j, u) for j, block in enumerate(z_blocks) for u in block)
    arcs |= _check_extra_arcs(bp, range(m), range(dp.n, n), "B'")
    witness = D0Witness(frozenset(range(dp.n, n)), w_set)
    return Digraph(n, frozenset(arcs)), witness


def construct_d3(first: Tuple[Digraph, D1Witness], second: Tuple[Digraph, D2Witness],
                 cross: Iterable[Tuple[int, int]]) -> Tuple[Digraph, D3Witness]:
    """
    Join a D1 member and a D2 member by arcs from V' into the D2 part

    The D1 member keeps its labels, the D2 member is shifted past it; cross
    arcs are given in the joined labeling and must be nonempty.
    """
    (d1, w1), (d2, w2) = first, second
    if w1.trivial:
        raise PreconditionError("the trivial D1 member has no V' to send cross arcs from")
    offset = d1.n
    n = d1.n + d2.n
    cross = frozenset(cross)
    if not cross:
        raise PreconditionError("D3 construction needs at least one cross arc")
    for x, y in cross:
        if x not in w1.Vp or not offset <= y < n:
            raise PreconditionError(f"cross arc ({x}, {y}) must run from V' into the D2 part")
    arcs = set(d1.arcs)
    arcs.update((x + offset, y + offset) for x, y in d2.arcs)
    arcs |= cross
    shifted = D2Witness(*(frozenset(v + offset for v in block) for block in w2.blocks))
    witness = D3Witness(frozenset(range(offset)), frozenset(range(offset, n)), w1, shifted)
    return Digraph(n, frozenset(arcs)), witness


# ==================== Constructed corpora ====================


def set_partitions(items: Sequence[int]) -> List[List[FrozenSet[int]]]:
    """All set partitions, blocks ordered by their smallest element"""
    if not items:
        return [[]]
    first, rest = items[0], items[1:]
    result = []
    for partial in set_partitions(rest):
        result.append([frozenset({first})] + partial)
        for i, block in enumerate(partial):
            result.append(partial[:i] + [block | {first}] + partial[i + 1:])
    return [sorted(p, key=min) for p in result]


def d2_members(max_block: int) -> List[Tuple[Digraph, D2Witness]]:
    """Every D2 construction with block sizes up to max_block"""
    members = []
    for sizes in itertools.product(range(1, max_block + 1), repeat=3):
        choices = []
        for i in range(3):
            j = (i + 1) % 3
            per_block = [
                list(zip(doms, range(sizes[j])))
                for doms in itertools.product(range(sizes[i]), repeat=sizes[j])
            ]
            choices.append(per_block)
        for assignment in itertools.product(*choices):
            members.append(construct_d2(sizes, assignment))
    return members


def d1_members(bases: Iterable[Digraph], max_n: int) -> List[Tuple[Digraph, D1Witness]]:
    """D1 constructions over the given bases with all partition pairs, B empty, at most max_n vertices"""
    members = []
    for base in bases:
        partitions = set_partitions(list(range(base.n)))
        for pi1, pi2 in itertools.product(partitions, repeat=2):
            if base.n + len(pi1) + len(pi2) > max_n:
                continue
            members.append(construct_d1(base, pi1, pi2))
    return members
