# Theorem-based deciders and ECD-set builders for product digraphs
#
# Every decider builds the product explicitly; positive decisions carry a
# certificate checked against that product, in its flat labeling.

import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .config import Bounds
from .digraph import Digraph
from .ecd_solver import EcdCertificate, check_ecd_set, find_ecd_set, is_ecd_set, no_arcs_from
from .errors import BoundExceededError, PreconditionError
from .families import (
    D0Witness, D1Witness, D2Witness, D3Witness, Family, FamilyWitness,
    _ecd_in_induced, recognize, recognize_d0, relabel_witness, verify_witness,
)
from .generators import (
    CyclePattern, PathPattern, StarMode, StarOrientation, gen_cycle, gen_path, gen_star,
)
from .products import ProductKind, fold_product, product

logger = logging.getLogger(__name__)


class Method(str, Enum):
    THEOREM = "theorem"
    BRUTE_FORCE = "brute-force"


@dataclass(frozen=True)
class DecisionReport:
    """Outcome of a decider, with the product it speaks about"""
    decision: bool
    method: Method
    construction: str
    product: Optional[Digraph] = None
    certificate: Optional[EcdCertificate] = None
    witnesses: Tuple[FamilyWitness, ...] = ()
    refutation: Optional[str] = None
    claimed: Optional[FrozenSet[int]] = None

    @property
    def certificate_valid(self) -> bool:
        return self.certificate is not None and self.product is not None and \
            is_ecd_set(self.product, self.certificate.s)


def _describe(name: str, d: Digraph) -> str:
    return f"{name}[n={d.n},m={len(d.arcs)}]"


def _positive(product_d: Digraph, claimed: Iterable[int], construction: str,
              witnesses: Sequence[FamilyWitness] = (), method: Method = Method.THEOREM) -> DecisionReport:
    claimed = frozenset(claimed)
    certificate = check_ecd_set(product_d, claimed)
    if certificate is None:
        logger.error(f"Builder produced a set that is not ECD for {construction}")
    return DecisionReport(True, method, construction, product_d, certificate,
                          tuple(witnesses), None, claimed)


def _negative(product_d: Digraph, construction: str, refutation: str,
              witnesses: Sequence[FamilyWitness] = (), method: Method = Method.THEOREM) -> DecisionReport:
    return DecisionReport(False, method, construction, product_d, None,
                          tuple(witnesses), refutation)


def _brute_force(product_d: Digraph, construction: str, bounds: Optional[Bounds], why: str) -> DecisionReport:
    logger.info(f"Falling back to exact search for {construction}: {why}")
    certificate = find_ecd_set(product_d, bounds)
    refutation = None if certificate else "exact search found no ECD set"
    return DecisionReport(certificate is not None, Method.BRUTE_FORCE, construction, product_d,
                          certificate, (), refutation,
                          certificate.s if certificate else None)


# ==================== Neighboring sources ====================


def _check_cycle_or_path(c: Digraph) -> None:
    if c.n == 0:
        raise PreconditionError("empty digraph is not a cycle or path")
    if c.n > 1 and c.has_loops:
        raise PreconditionError("cycle/path digraph on more than one vertex has a loop")
    degree = [0] * c.n
    for edge in c.underlying_edges():
        for v in edge:
            degree[v] += 1
    if max(degree) > 2 or len(c.components()) != 1:
        raise PreconditionError("digraph is not an oriented cycle or path")


def neighboring_source_distances(c: Digraph, v: int) -> List[Tuple[int, int]]:
    """
    (source, length) for every source reaching v along a path with no
    intermediate sink or source; a source reports (v, 0), a cycle with no
    sources reports nothing
    """
    _check_cycle_or_path(c)
    (v,) = c.vertex_set([v])
    preds = c.in_neighbors(v) - {v}
    if not preds:
        return [] if c.has_loop(v) else [(v, 0)]
    found = []
    for u in sorted(preds):
        cur, dist = u, 1
        # cur has an arc toward v's side, so it has at most one other in-neighbor;
        # walking more than n steps means the cycle has no source
        while dist <= c.n:
            back = c.in_neighbors(cur) - {cur}
            if not back:
                found.append((cur, dist))
                break
            cur, dist = min(back), dist + 1
    return found


# ==================== Cartesian product with a sink-free cycle ====================

_CLAUSES = ((Family.D1, 2), (Family.D2, 3), (Family.D3, 6))


def _layered(phases: Sequence[FrozenSet[int]], k: int) -> FrozenSet[int]:
    """phase j mod len(phases) of the cycle carries phases[j mod len] (label v*k + j)"""
    m = len(phases)
    return frozenset(v * k + j for j in range(k) for v in phases[j % m])


def build_ecd_cartesian_cycle(component: Digraph, witness: FamilyWitness, k: int) -> FrozenSet[int]:
    """
    ECD set of component [] C_k^0, labels c * k + j

    D1: W on even, Z on odd positions; D2: U1, U2, U3 on positions 0, 1, 2
    mod 3; D3: both on their parts.
    """
    modulus = {Family.D1: 2, Family.D2: 3, Family.D3: 6}.get(getattr(witness, "family", None))
    if modulus is None:
        raise PreconditionError(f"no Cartesian-cycle construction for {type(witness).__name__}")
    if k < 2 or k % modulus:
        raise PreconditionError(f"{witness.family.value} construction needs {modulus} | k, got k={k}")
    if not verify_witness(component, witness):
        raise PreconditionError(f"{witness.family.value} witness does not match the component")
    if isinstance(witness, D1Witness):
        return _layered((witness.W, witness.Z), k)
    if isinstance(witness, D2Witness):
        return _layered(witness.blocks, k)
    return _layered((witness.d1.W, witness.d1.Z), k) | _layered(witness.d2.blocks, k)


def decide_cartesian_cycle(d: Digraph, pattern: CyclePattern, bounds: Optional[Bounds] = None) -> DecisionReport:
    bounds = bounds or Bounds()
    if pattern.p:
        raise PreconditionError("Cartesian-cycle characterization needs a cycle without sinks")
    k = pattern.k
    construction = f"cartesian({_describe('D', d)}, C{k}^0)"
    cycle = gen_cycle(pattern)
    product_d = product(ProductKind.CARTESIAN, d, cycle)

    if k == 1:
        certificate = find_ecd_set(d, bounds)
        if certificate is None:
            return _negative(product_d, construction, "D is not ECD")
        return _positive(product_d, certificate.s, construction)

    # family membership is sufficient, not necessary: a component outside
    # every admissible family is settled by exact search on its own product
    stripped = d.without_loops()
    claimed = set()
    witnesses = []
    method = Method.THEOREM
    for component in stripped.components():
        if len(component) > bounds.family:
            return _brute_force(product_d, construction, bounds,
                                f"component of size {len(component)} exceeds family bound {bounds.family}")
        sub, index_map = stripped.induced(component)
        found = None
        for family, modulus in _CLAUSES:
            if k % modulus == 0:
                found = recognize(family, sub, bounds)
                if found is not None:
                    break
        if found is None:
            logger.info(f"Component containing {min(component)} is in no family admissible for k={k}, "
                        f"searching its product")
            method = Method.BRUTE_FORCE
            certificate = find_ecd_set(product(ProductKind.CARTESIAN, sub, cycle), bounds)
            if certificate is None:
                return _negative(product_d, construction,
                                 f"exact search found no ECD set for the component containing {min(component)}",
                                 method=method)
            local = certificate.s
        else:
            local = build_ecd_cartesian_cycle(sub, found, k)
            witnesses.append(relabel_witness(found, index_map))
        for label in local:
            c, j = divmod(label, k)
            claimed.add(index_map[c] * k + j)
    return _positive(product_d, claimed, construction, witnesses, method)


# ==================== Cartesian product with a star ====================


def build_ecd_cartesian_star(f: Digraph, witness: D0Witness, orientation: StarOrientation) -> FrozenSet[int]:
    """S x {center} plus S' x {every leaf}, labels x * (t + 1) + s"""
    if orientation.mode is not StarMode.CENTER_SOURCE:
        raise PreconditionError("star construction needs the center to be a source")
    if not verify_witness(f, witness):
        raise PreconditionError("D0 witness does not match F")
    width = orientation.t + 1
    center = frozenset(x * width for x in witness.S)
    leaves = frozenset(x * width + leaf for x in witness.Sp for leaf in range(1, width))
    return center | leaves


def decide_cartesian_star(f: Digraph, orientation: StarOrientation,
                          bounds: Optional[Bounds] = None) -> DecisionReport:
    construction = f"cartesian({_describe('F', f)}, {orientation})"
    product_d = product(ProductKind.CARTESIAN, f, gen_star(orientation))
    if orientation.mode is not StarMode.CENTER_SOURCE:
        return _brute_force(product_d, construction, bounds, f"no characterization for {orientation.mode.value} stars")
    witness = recognize_d0(f, bounds)
    if witness is None:
        return _negative(product_d, construction, "F is not in D0")
    return _positive(product_d, build_ecd_cartesian_star(f, witness, orientation), construction, [witness])


@dataclass(frozen=True)
class MixedStarOutcome:
    s: FrozenSet[int]
    verified: bool
    certificate: Optional[EcdCertificate] = None


def mixed_star_violation(f: Digraph, blocks: Sequence[Iterable[int]], t1: int) -> Optional[str]:
    """First failed condition of a (t1 + 3)-block partition, None if all hold"""
    if t1 < 1:
        return "needs at least one source leaf"
    if len(blocks) != t1 + 3:
        return f"needs {t1 + 3} blocks, got {len(blocks)}"
    w = [f.vertex_set(block) for block in blocks]
    seen = set()
    for block in w:
        if seen & block:
            return "blocks overlap"
        seen |= block
    if seen != set(range(f.n)):
        return "blocks do not cover V(F)"
    plain = f.without_loops()
    everything = frozenset(range(f.n))
    for i in range(t1):
        if not is_ecd_set(f, w[i]):
            return f"block {i + 1} is not an ECD set of F"
    top, mid, rest = w[t1], w[t1 + 1], w[t1 + 2]
    if not _ecd_in_induced(plain, top, top | mid | rest):
        return f"block {t1 + 1} is not an ECD set of its induced digraph"
    if not no_arcs_from(plain, top, everything - mid - rest):
        return f"block {t1 + 1} has out-arcs leaving blocks {t1 + 2}, {t1 + 3}"
    sources = frozenset().union(*w[:t1])
    if not _ecd_in_induced(plain, mid, mid | rest | sources):
        return f"block {t1 + 2} is not an ECD set of its induced digraph"
    if not no_arcs_from(plain, mid, top):
        return f"block {t1 + 2} has arcs into block {t1 + 1}"
    return None


def build_mixed_star_ecd(f: Digraph, blocks: Sequence[Iterable[int]], t1: int, t2: int) -> MixedStarOutcome:
    """
    Candidate ECD set of F [] K_{1,t} with leaves 1..t1 sources and the rest sinks

    The set is checked on the explicit product; verified reports the outcome.
    """
    violation = mixed_star_violation(f, blocks, t1)
    if violation is not None:
        raise PreconditionError(f"mixed-star partition rejected: {violation}")
    if t2 < 0:
        raise PreconditionError(f"t2 must be >= 0, got {t2}")
    w = [frozenset(block) for block in blocks]
    t = t1 + t2
    width = t + 1
    claimed = set()
    for i in range(t1):
        claimed.update(x * width + i + 1 for x in w[i])
    claimed.update(x * width for x in w[t1])
    claimed.update(x * width + leaf for x in w[t1 + 1] for leaf in range(t1 + 1, width))
    star_product = product(ProductKind.CARTESIAN, f, gen_star(StarOrientation.mixed(t1, t2)))
    certificate = check_ecd_set(star_product, claimed)
    return MixedStarOutcome(frozenset(claimed), certificate is not None, certificate)


def search_mixed_star_partition(f: Digraph, t1: int, t2: int,
                                bounds: Optional[Bounds] = None) -> Optional[List[FrozenSet[int]]]:
    """First block assignment, in lexicographic order, meeting every mixed-star condition"""
    bounds = bounds or Bounds()
    if f.n > bounds.family:
        raise BoundExceededError("mixed-star partition search", f.n, bounds.family)
    if t1 < 1:
        return None
    for assignment in itertools.product(range(t1 + 3), repeat=f.n):
        blocks = [frozenset(v for v in range(f.n) if assignment[v] == b) for b in range(t1 + 3)]
        if mixed_star_violation(f, blocks, t1) is None:
            return blocks
    return None


# ==================== Direct products of cycles ====================


@dataclass(frozen=True)
class DirectCycleWitness:
    """Vertex classes of the one cycle with sinks; S' = A + R + Q'"""
    A: FrozenSet[int]
    R: FrozenSet[int]
    Qp: FrozenSet[int]
    distances: Dict[int, Tuple[Tuple[int, int], ...]] = field(default_factory=dict)

    @property
    def s_prime(self) -> FrozenSet[int]:
        return self.A | self.R | self.Qp


def odd_sinks(pattern: CyclePattern) -> List[int]:
    """Sinks at odd distance from both neighboring sources"""
    c = gen_cycle(pattern)
    return [q for q in pattern.sinks()
            if all(dist % 2 for _, dist in neighboring_source_distances(c, q))]


def direct_cycle_witness(pattern: CyclePattern) -> Optional[DirectCycleWitness]:
    if pattern.p == 0:
        raise PreconditionError("direct-cycle witness needs a cycle with sinks")
    c = gen_cycle(pattern)
    sinks = set(pattern.sinks())
    sources = frozenset(pattern.sources())
    even = set()
    qp = set()
    distances = {}
    for v in range(c.n):
        if v in sources:
            continue
        entries = tuple(neighboring_source_distances(c, v))
        if v in sinks:
            distances[v] = entries
            evens = [dist for _, dist in entries if dist % 2 == 0]
            if not evens:
                return None
            if len(evens) == len(entries):
                qp.add(v)
        elif entries[0][1] % 2 == 0:
            even.add(v)
    return DirectCycleWitness(frozenset(even), sources, frozenset(qp), distances)


def direct_cycle_structure(ks: Sequence[int]) -> Tuple[int, int]:
    """(number of components, component length) of C_k1^0 x ... x C_kt^0"""
    if not ks:
        raise PreconditionError("need at least one cycle length")
    if any(k < 1 for k in ks):
        raise PreconditionError(f"cycle lengths must be >= 1, got {list(ks)}")
    if len(ks) == 1:
        return 1, ks[0]
    length = math.lcm(*ks)
    return math.prod(ks) // length, length


def verify_direct_cycle_structure(ks: Sequence[int]) -> bool:
    count, length = direct_cycle_structure(ks)
    folded = fold_product(ProductKind.DIRECT, [gen_cycle(CyclePattern.directed(k)) for k in ks])
    parts = folded.components()
    if len(parts) != count or any(len(part) != length for part in parts):
        return False
    return all(folded.out_degree(v) == 1 and folded.in_degree(v) == 1 for v in range(folded.n))


def _alternate_along_cycles(d: Digraph) -> FrozenSet[int]:
    """Every other vertex of each directed cycle component, starting at its lowest vertex"""
    chosen = set()
    for part in d.components():
        start = min(part)
        if len(part) == 1:
            chosen.add(start)
            continue
        v, step = start, 0
        while True:
            if step % 2 == 0:
                chosen.add(v)
            (v,) = d.out_neighbors(v)
            step += 1
            if v == start:
                break
    return frozenset(chosen)


def _order_sinks_last(patterns: Sequence[CyclePattern]) -> List[CyclePattern]:
    return [p for p in patterns if p.p == 0] + [p for p in patterns if p.p > 0]


def build_ecd_direct_cycles(patterns: Sequence[CyclePattern],
                            witness: Optional[DirectCycleWitness] = None) -> FrozenSet[int]:
    """ECD set of the left-folded direct product in the given factor order"""
    if not patterns:
        raise PreconditionError("need at least one cycle")
    if any(p.p for p in patterns[:-1]):
        raise PreconditionError("only the last factor may have sinks")
    last = patterns[-1]
    if last.p == 0:
        length = math.lcm(*(p.k for p in patterns))
        if length % 2 and length != 1:
            raise PreconditionError(f"sink-free product with odd lcm {length} has no ECD set")
        folded = fold_product(ProductKind.DIRECT, [gen_cycle(p) for p in patterns])
        return _alternate_along_cycles(folded)
    witness = witness or direct_cycle_witness(last)
    if witness is None:
        raise PreconditionError("last factor has a sink at odd distance from both neighboring sources")
    width = math.prod(p.k for p in patterns[:-1])
    return frozenset(x * last.k + s for x in range(width) for s in witness.s_prime)


def decide_direct_cycles(patterns: Sequence[CyclePattern]) -> DecisionReport:
    if not patterns:
        raise PreconditionError("need at least one cycle")
    ordered = _order_sinks_last(patterns)
    construction = "direct(" + "; ".join(f"C{p.k}[{p}]" for p in ordered) + ")"
    product_d = fold_product(ProductKind.DIRECT, [gen_cycle(p) for p in ordered])
    with_sinks = [p for p in ordered if p.p > 0]
    if len(with_sinks) >= 2:
        return _negative(product_d, construction, f"{len(with_sinks)} factors have sinks")
    if not with_sinks:
        length = math.lcm(*(p.k for p in ordered))
        if length % 2 and length != 1:
            return _negative(product_d, construction, f"all factors sink-free and lcm {length} is odd")
        return _positive(product_d, build_ecd_direct_cycles(ordered), construction)
    witness = direct_cycle_witness(ordered[-1])
    if witness is None:
        bad = odd_sinks(ordered[-1])
        return _negative(product_d, construction,
                         f"sink {bad[0]} is at odd distance from both neighboring sources")
    return _positive(product_d, build_ecd_direct_cycles(ordered, witness), construction)


# ==================== Direct products of paths ====================


def _even_depth_vertices(d: Digraph) -> FrozenSet[int]:
    """Vertices at even distance from the source of their in-tree (in-degree <= 1 everywhere)"""
    depth: Dict[int, int] = {}
    for v in range(d.n):
        trail = []
        cur = v
        while cur not in depth:
            preds = d.in_neighbors(cur)
            if not preds:
                depth[cur] = 0
                break
            trail.append(cur)
            (cur,) = preds
        base = depth[cur]
        for offset, u in enumerate(reversed(trail), start=1):
            depth[u] = base + offset
    return frozenset(v for v, level in depth.items() if level % 2 == 0)


def decide_direct_paths(patterns: Sequence[PathPattern]) -> DecisionReport:
    if not patterns:
        raise PreconditionError("need at least one path")
    construction = "direct(" + "; ".join(f"P{p.k}[{p}]" for p in patterns) + ")"
    product_d = fold_product(ProductKind.DIRECT, [gen_path(p) for p in patterns])
    if any(p.k == 1 for p in patterns):
        return _positive(product_d, range(product_d.n), construction)
    for i, p in enumerate(patterns):
        sinks = p.internal_sinks()
        if sinks:
            return _negative(product_d, construction, f"factor {i + 1} has a sink of degree 2 at {sinks[0]}")
    return _positive(product_d, _even_depth_vertices(product_d), construction)


# ==================== Strong and lexicographic products ====================


def decide_strong(d: Digraph, f: Digraph, bounds: Optional[Bounds] = None) -> DecisionReport:
    construction = f"strong({_describe('D', d)}, {_describe('F', f)})"
    product_d = product(ProductKind.STRONG, d, f)
    cert_d = find_ecd_set(d, bounds)
    if cert_d is None:
        return _negative(product_d, construction, "factor D not ECD")
    cert_f = find_ecd_set(f, bounds)
    if cert_f is None:
        return _negative(product_d, construction, "factor F not ECD")
    claimed = (x * f.n + y for x in cert_d.s for y in cert_f.s)
    return _positive(product_d, claimed, construction)


def decide_lex(d: Digraph, f: Digraph, bounds: Optional[Bounds] = None) -> DecisionReport:
    construction = f"lexicographic({_describe('D', d)}, {_describe('F', f)})"
    product_d = product(ProductKind.LEXICOGRAPHIC, d, f)
    if d.has_loops:
        return _brute_force(product_d, construction, bounds, "factor D has loops")
    if d.is_arcless:
        cert_f = find_ecd_set(f, bounds)
        if cert_f is None:
            return _negative(product_d, construction, "D arcless but F not ECD")
        return _positive(product_d, (x * f.n + y for x in range(d.n) for y in cert_f.s), construction)
    cert_d = find_ecd_set(d, bounds)
    if cert_d is None:
        return _negative(product_d, construction, "factor D not ECD")
    universal = f.out_universal_vertices()
    if not universal:
        return _negative(product_d, construction, "F has no out-universal vertex")
    f0 = universal[0]
    return _positive(product_d, (x * f.n + f0 for x in cert_d.s), construction)
