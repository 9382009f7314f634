# Cross-validation harness
#
# Each suite enumerates a corpus of instances, runs the theorem-based decider
# and compares it to exact search on an independently rebuilt product
# (networkx product functions, flattened row-major). Positive certificates
# are re-verified, and every ECD instance within the enumeration bound is
# checked for equal-size ECD sets.

import itertools
import logging
import random
import time
from abc import ABC, abstractmethod
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Type

import networkx as nx
import pandas as pd

from .config import Bounds
from .digraph import Digraph, disjoint_union
from .ecd_solver import (
    domination_number, enumerate_ecd_sets, find_ecd_set, is_ecd_set,
    minimum_dominating_set, sources_in_certificate,
)
from .errors import BoundExceededError, EcdLabError, PreconditionError
from .families import construct_d1, construct_d3, construct_dpr, d1_members, d2_members, set_partitions
from .generators import (
    CyclePattern, PathPattern, StarOrientation, all_cycle_patterns, all_digraphs,
    all_path_patterns, all_small_digraphs, gen_cycle, gen_path, gen_star,
    greedy_independent_dominating_set, orient_from_independent_set, random_digraph, random_graph,
)
from .products import ProductKind
from .theorems import (
    DecisionReport, build_mixed_star_ecd, decide_cartesian_cycle, decide_cartesian_star,
    decide_direct_cycles, decide_direct_paths, decide_lex, decide_strong,
    direct_cycle_structure, search_mixed_star_partition, verify_direct_cycle_structure,
)

logger = logging.getLogger(__name__)

STATUS_OK = "ok"
STATUS_MISMATCH = "mismatch"
STATUS_CERTIFICATE = "certificate-failure"
STATUS_SOURCES = "source-failure"
STATUS_ECD_TOTAL = "ecd-total-failure"
STATUS_BOUND = "bound-exceeded"
STATUS_FINDING = "finding"
STATUS_ERROR = "error"

FAILURE_STATUSES = (STATUS_MISMATCH, STATUS_CERTIFICATE, STATUS_SOURCES, STATUS_ECD_TOTAL, STATUS_ERROR)


@dataclass(frozen=True)
class CorpusSpec:
    """Which suite to sweep and how far"""
    suite: str
    max_n: int = 3
    max_k: int = 8
    max_t: int = 3
    samples: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        for name in ("max_n", "max_k", "max_t"):
            if getattr(self, name) < 1:
                raise PreconditionError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.samples is not None and self.samples < 0:
            raise PreconditionError(f"samples must be >= 0, got {self.samples}")


@dataclass(frozen=True)
class Instance:
    key: str
    payload: Tuple[Any, ...]


@dataclass(frozen=True)
class InstanceResult:
    key: str
    theorem: Optional[bool] = None
    oracle: Optional[bool] = None
    size: Optional[int] = None
    gamma: Optional[int] = None
    wall_ms: float = 0.0
    status: str = STATUS_OK
    note: str = ""

    @property
    def failed(self) -> bool:
        return self.status in FAILURE_STATUSES


def digraph_code(d: Digraph) -> str:
    """Compact stable key: n:u>v,u>v"""
    return f"{d.n}:" + ",".join(f"{u}>{v}" for u, v in d.sorted_arcs())


# ==================== Independent product reconstruction ====================

_NX_PRODUCTS = {
    ProductKind.CARTESIAN: nx.cartesian_product,
    ProductKind.DIRECT: nx.tensor_product,
    ProductKind.STRONG: nx.strong_product,
    ProductKind.LEXICOGRAPHIC: nx.lexicographic_product,
}


def rebuild_product(kind: ProductKind, factors: Sequence[Digraph]) -> Digraph:
    """Left-folded product built with networkx and flattened row-major"""
    combine = _NX_PRODUCTS[ProductKind(kind)]
    acc = factors[0].to_networkx()
    for factor in factors[1:]:
        width = factor.n
        joined = combine(acc, factor.to_networkx())
        acc = nx.relabel_nodes(joined, {node: node[0] * width + node[1] for node in joined.nodes})
    return Digraph.from_networkx(acc)


# ==================== Suites ====================


class ValidationSuite(ABC):
    """A corpus plus the check run on each of its instances"""

    name: str = ""
    default_samples: int = 0

    def __init__(self, spec: CorpusSpec, bounds: Bounds):
        self.spec = spec
        self.bounds = bounds
        self.logger = logging.getLogger(__name__)

    @property
    def samples(self) -> int:
        return self.default_samples if self.spec.samples is None else self.spec.samples

    def rng(self) -> random.Random:
        return random.Random(self.spec.seed)

    @abstractmethod
    def instances(self) -> Iterator[Instance]:
        """Enumerate the corpus in a deterministic order"""

    @abstractmethod
    def evaluate(self, instance: Instance) -> InstanceResult:
        """Run the decider and the oracle on one instance"""

    def judge(self, key: str, report: DecisionReport, kind: ProductKind,
              factors: Sequence[Digraph]) -> InstanceResult:
        """Compare a decision with exact search on the rebuilt product"""
        rebuilt = rebuild_product(kind, factors)
        oracle = find_ecd_set(rebuilt, self.bounds) is not None
        status, notes = STATUS_OK, []
        size = gamma = None

        if report.decision != oracle:
            status = STATUS_MISMATCH
            notes.append(f"{report.method.value} says {report.decision}, exact search says {oracle}")
        if report.decision and report.claimed is not None:
            size = len(report.claimed)
            if not is_ecd_set(rebuilt, report.claimed):
                status = STATUS_CERTIFICATE
                notes.append("certificate does not verify on rebuilt product")
            elif not sources_in_certificate(rebuilt, report.claimed):
                status = STATUS_SOURCES
                notes.append("a source of the product is missing from the certificate")
        if oracle and rebuilt.n <= self.bounds.enum:
            gamma = len(minimum_dominating_set(rebuilt, self.bounds))
            sizes = {len(s) for s in enumerate_ecd_sets(rebuilt, self.bounds)}
            if min(sizes) < gamma:
                status = STATUS_ECD_TOTAL
                notes.append(f"ECD set of size {min(sizes)} is smaller than gamma {gamma}")
            elif sizes != {gamma} and status == STATUS_OK:
                # without symmetric neighborhoods an ECD set may be larger than gamma
                status = STATUS_FINDING
                notes.append(f"ECD set sizes {sorted(sizes)} exceed gamma {gamma}")
        if report.refutation and not notes:
            notes.append(report.refutation)
        return InstanceResult(key, report.decision, oracle, size, gamma, status=status, note="; ".join(notes))


class _ProductPairSuite(ValidationSuite):
    kind: ProductKind = ProductKind.STRONG

    def instances(self) -> Iterator[Instance]:
        corpus = all_small_digraphs(self.spec.max_n)
        for d, f in itertools.product(corpus, repeat=2):
            yield Instance(f"{self.name}/{digraph_code(d)}/{digraph_code(f)}", (d, f))

    @abstractmethod
    def decide(self, d: Digraph, f: Digraph) -> DecisionReport:
        """Theorem-based decision for the pair"""

    def evaluate(self, instance: Instance) -> InstanceResult:
        d, f = instance.payload
        return self.judge(instance.key, self.decide(d, f), self.kind, (d, f))


class StrongSuite(_ProductPairSuite):
    name = "strong"
    kind = ProductKind.STRONG

    def decide(self, d: Digraph, f: Digraph) -> DecisionReport:
        return decide_strong(d, f, self.bounds)


class LexSuite(_ProductPairSuite):
    name = "lex"
    kind = ProductKind.LEXICOGRAPHIC

    def decide(self, d: Digraph, f: Digraph) -> DecisionReport:
        return decide_lex(d, f, self.bounds)


class CartesianCycleSuite(ValidationSuite):
    """
    Small digraphs, constructed family members, mixed-clause unions and a
    random sample of 4 and 5 vertex digraphs against C_k^0

    An explicit sample size also subsamples the constructed members.
    """
    name = "cartesian-cycle"
    default_samples = 200

    def constructed(self) -> List[Tuple[str, Digraph]]:
        members: List[Tuple[str, Digraph]] = []
        small_bases = all_small_digraphs(2)
        d1_small = d1_members(small_bases, max_n=8)
        three_bases = list(all_digraphs(3))
        single_block = [frozenset(range(3))]
        d1_three = [construct_d1(base, single_block, single_block) for base in three_bases]
        d2_all = d2_members(2)

        members += [("d1", d) for d, _ in d1_small + d1_three]
        members += [("d2", d) for d, _ in d2_all]

        # D3: a D1 member sending one arc from V' into a D2 member
        for first in d1_small:
            if first[0].n > 5:
                continue
            for second in d2_all:
                if first[0].n + second[0].n > 8:
                    continue
                tail = min(first[1].Vp)
                members.append(("d3", construct_d3(first, second, [(tail, first[0].n)])[0]))

        # components satisfying different clauses
        d1_tiny = [Digraph(1)] + [d for d, _ in d1_small if d.n <= 4]
        d2_tiny = [d for d, _ in d2_all if d.n <= 4]
        members += [("mixed", disjoint_union(a, b)) for a in d1_tiny for b in d2_tiny]

        if self.spec.samples is not None and self.spec.samples < len(members):
            members = self.rng().sample(members, self.spec.samples)
        return members

    def random_sample(self) -> List[Tuple[str, Digraph]]:
        rng = self.rng()
        return [("sample", random_digraph(rng.choice((4, 5)), rng.uniform(0.2, 0.6), rng))
                for _ in range(self.samples)]

    def instances(self) -> Iterator[Instance]:
        corpus = [("small", d) for d in all_small_digraphs(self.spec.max_n)] + self.constructed()
        corpus += self.random_sample()
        seen = set()
        for tag, d in corpus:
            code = digraph_code(d)
            if code in seen:
                continue
            seen.add(code)
            for k in range(2, self.spec.max_k + 1):
                yield Instance(f"{self.name}/{tag}/{code}/k={k:02d}", (d, k))

    def evaluate(self, instance: Instance) -> InstanceResult:
        d, k = instance.payload
        cycle = CyclePattern.directed(k)
        report = decide_cartesian_cycle(d, cycle, self.bounds)
        return self.judge(instance.key, report, ProductKind.CARTESIAN, (d, gen_cycle(cycle)))


class CartesianStarSuite(ValidationSuite):
    """Small digraphs, constructed two-stage members and a random sample against K_{1,t}"""
    name = "cartesian-star"
    default_samples = 1000

    def constructed(self) -> List[Digraph]:
        members = []
        for base in all_small_digraphs(2):
            if base.is_arcless:
                continue
            for w_partition in set_partitions(list(range(base.n))):
                p = len(w_partition)
                dp_vertices = list(range(base.n + p))
                for z_partition in (set_partitions(dp_vertices)[:3]):
                    members.append(construct_dpr(base, w_partition, (), z_partition)[0])
        return members

    def instances(self) -> Iterator[Instance]:
        t_values = range(1, self.spec.max_t + 1)
        pool = [("small", f) for f in all_small_digraphs(self.spec.max_n)]
        pool += [("dpr", f) for f in self.constructed()]
        for (tag, f), t in itertools.product(pool, t_values):
            yield Instance(f"{self.name}/{tag}/{digraph_code(f)}/t={t}", (f, t))
        rng = self.rng()
        for i in range(self.samples):
            n = rng.choice((4, 5))
            f = random_digraph(n, rng.uniform(0.1, 0.5), rng)
            t = rng.choice(list(t_values))
            yield Instance(f"{self.name}/sample{i:05d}/{digraph_code(f)}/t={t}", (f, t))

    def evaluate(self, instance: Instance) -> InstanceResult:
        f, t = instance.payload
        star = StarOrientation.center_source(t)
        report = decide_cartesian_star(f, star, self.bounds)
        return self.judge(instance.key, report, ProductKind.CARTESIAN, (f, gen_star(star)))


class DirectCyclesSuite(ValidationSuite):
    """
    All rotation classes of cycle words: pairs up to max_k, triples up to
    length 3 and a seeded sample of triples up to length 4
    """
    name = "direct-cycles"
    default_samples = 50

    def instances(self) -> Iterator[Instance]:
        def patterns_up_to(limit: int) -> List[CyclePattern]:
            return [p for k in range(1, limit + 1) for p in all_cycle_patterns(k)]

        pairs = patterns_up_to(min(self.spec.max_k, 6))
        for combo in itertools.combinations_with_replacement(pairs, 2):
            yield self._instance(combo)
        triples = patterns_up_to(min(self.spec.max_k, 3))
        seen = set()
        for combo in itertools.combinations_with_replacement(triples, 3):
            seen.add(combo)
            yield self._instance(combo)
        rng = self.rng()
        spot = patterns_up_to(min(self.spec.max_k, 4))
        for _ in range(self.samples):
            combo = tuple(rng.choice(spot) for _ in range(3))
            if combo not in seen:
                seen.add(combo)
                yield self._instance(combo)

    def _instance(self, patterns: Tuple[CyclePattern, ...]) -> Instance:
        key = "/".join(f"C{p.k}[{p}]" for p in patterns)
        return Instance(f"{self.name}/{key}", patterns)

    def evaluate(self, instance: Instance) -> InstanceResult:
        patterns = list(instance.payload)
        report = decide_direct_cycles(patterns)
        ordered = [p for p in patterns if p.p == 0] + [p for p in patterns if p.p > 0]
        return self.judge(instance.key, report, ProductKind.DIRECT, [gen_cycle(p) for p in ordered])


class DirectPathsSuite(ValidationSuite):
    """All pairs of path words on at most max_n vertices"""
    name = "direct-paths"

    def instances(self) -> Iterator[Instance]:
        words = [p for k in range(1, self.spec.max_n + 1) for p in all_path_patterns(k)]
        for a, b in itertools.combinations_with_replacement(words, 2):
            yield Instance(f"{self.name}/P{a.k}[{a}]/P{b.k}[{b}]", (a, b))

    def evaluate(self, instance: Instance) -> InstanceResult:
        patterns = list(instance.payload)
        report = decide_direct_paths(patterns)
        return self.judge(instance.key, report, ProductKind.DIRECT, [gen_path(p) for p in patterns])


class ParitySuite(ValidationSuite):
    """C_k^0 is ECD exactly for even k and for the loop"""
    name = "parity"

    def instances(self) -> Iterator[Instance]:
        for k in range(1, self.spec.max_k + 1):
            yield Instance(f"{self.name}/k={k:02d}", (k,))

    def evaluate(self, instance: Instance) -> InstanceResult:
        (k,) = instance.payload
        pattern = CyclePattern.directed(k)
        report = decide_direct_cycles([pattern])
        sets = enumerate_ecd_sets(gen_cycle(pattern), self.bounds)
        expected = k % 2 == 0 or k == 1
        oracle = bool(sets)
        status = STATUS_OK if report.decision == oracle == expected else STATUS_MISMATCH
        size = len(sets[0]) if sets else None
        return InstanceResult(instance.key, report.decision, oracle, size, size, status=status)


class StructureSuite(ValidationSuite):
    """Component count and length of direct products of sink-free cycles"""
    name = "structure"

    def instances(self) -> Iterator[Instance]:
        for ks in itertools.combinations_with_replacement(range(1, self.spec.max_k + 1), 2):
            yield Instance(f"{self.name}/" + ",".join(f"{k:02d}" for k in ks), ks)
        for ks in itertools.combinations_with_replacement(range(1, min(self.spec.max_k, 5) + 1), 3):
            yield Instance(f"{self.name}/" + ",".join(f"{k:02d}" for k in ks), ks)

    def evaluate(self, instance: Instance) -> InstanceResult:
        ks = list(instance.payload)
        count, length = direct_cycle_structure(ks)
        holds = verify_direct_cycle_structure(ks)
        return InstanceResult(instance.key, True, holds, size=length,
                              status=STATUS_OK if holds else STATUS_MISMATCH,
                              note=f"{count} components of length {length}")


class StarDominationSuite(ValidationSuite):
    """Source-centered stars: gamma = 1, gamma_a = t"""
    name = "star-domination"

    def instances(self) -> Iterator[Instance]:
        for t in range(1, self.spec.max_k + 1):
            yield Instance(f"{self.name}/t={t:02d}", (t,))

    def evaluate(self, instance: Instance) -> InstanceResult:
        (t,) = instance.payload
        numbers = domination_number(gen_star(StarOrientation.center_source(t)), self.bounds)
        holds = numbers.gamma == 1 and numbers.gamma_a == t
        return InstanceResult(instance.key, True, holds, gamma=numbers.gamma,
                              status=STATUS_OK if holds else STATUS_MISMATCH,
                              note=f"gamma={numbers.gamma} gamma_a={numbers.gamma_a}")


class OrientationSuite(ValidationSuite):
    """Random graphs oriented around a greedy independent dominating set"""
    name = "orientation"
    default_samples = 500

    def instances(self) -> Iterator[Instance]:
        rng = self.rng()
        for i in range(self.samples):
            n = rng.randint(1, 10)
            graph = random_graph(n, rng.uniform(0.1, 0.7), seed=rng.randrange(2 ** 31))
            yield Instance(f"{self.name}/{i:05d}", (graph,))

    def evaluate(self, instance: Instance) -> InstanceResult:
        (graph,) = instance.payload
        chosen = greedy_independent_dominating_set(graph)
        oriented = orient_from_independent_set(graph, chosen)
        holds = is_ecd_set(oriented, chosen)
        return InstanceResult(instance.key, True, holds, size=len(chosen),
                              status=STATUS_OK if holds else STATUS_MISMATCH,
                              note=f"n={graph.n} edges={len(graph.underlying_edges())}")


class MixedStarSuite(ValidationSuite):
    """
    Both directions of the mixed-orientation star construction; violations
    are reported as findings
    """
    name = "mixed-star"

    def instances(self) -> Iterator[Instance]:
        for f in all_small_digraphs(self.spec.max_n):
            yield Instance(f"{self.name}/{digraph_code(f)}/t1=1,t2=1", (f, 1, 1))

    def evaluate(self, instance: Instance) -> InstanceResult:
        f, t1, t2 = instance.payload
        blocks = search_mixed_star_partition(f, t1, t2, self.bounds)
        star = gen_star(StarOrientation.mixed(t1, t2))
        oracle = find_ecd_set(rebuild_product(ProductKind.CARTESIAN, (f, star)), self.bounds) is not None
        status, note, size = STATUS_OK, "", None
        if blocks is not None:
            outcome = build_mixed_star_ecd(f, blocks, t1, t2)
            size = len(outcome.s)
            if not outcome.verified:
                status, note = STATUS_FINDING, "partition passes the conditions but the set is not ECD"
        if oracle and blocks is None:
            status, note = STATUS_FINDING, "product is ECD but no partition meets the conditions"
        return InstanceResult(instance.key, blocks is not None, oracle, size, status=status, note=note)


SUITES: Dict[str, Type[ValidationSuite]] = {
    suite.name: suite
    for suite in (
        StrongSuite, LexSuite, CartesianCycleSuite, CartesianStarSuite, DirectCyclesSuite,
        DirectPathsSuite, ParitySuite, StructureSuite, StarDominationSuite, OrientationSuite,
        MixedStarSuite,
    )
}


def get_suite(spec: CorpusSpec, bounds: Optional[Bounds] = None) -> ValidationSuite:
    try:
        suite_cls = SUITES[spec.suite]
    except KeyError:
        raise PreconditionError(f"unknown suite '{spec.suite}' (choose from {', '.join(sorted(SUITES))})") from None
    return suite_cls(spec, bounds or Bounds())


# ==================== Sweep ====================


def _evaluate_task(task: Tuple[CorpusSpec, Bounds, Instance]) -> InstanceResult:
    """Top-level so worker processes can unpickle it"""
    spec, bounds, instance = task
    suite = get_suite(spec, bounds)
    start = time.perf_counter()
    try:
        result = suite.evaluate(instance)
    except BoundExceededError as e:
        result = InstanceResult(instance.key, status=STATUS_BOUND, note=str(e))
    except EcdLabError as e:
        result = InstanceResult(instance.key, status=STATUS_ERROR, note=str(e))
    return replace(result, wall_ms=(time.perf_counter() - start) * 1000.0)


@dataclass
class SweepReport:
    suite: str
    results: List[InstanceResult] = field(default_factory=list)
    elapsed_s: float = 0.0

    def count(self, status: str) -> int:
        return sum(1 for r in self.results if r.status == status)

    @property
    def mismatches(self) -> int:
        return self.count(STATUS_MISMATCH)

    @property
    def failures(self) -> int:
        return sum(1 for r in self.results if r.failed)

    @property
    def agreements(self) -> int:
        return sum(1 for r in self.results if r.theorem is not None and r.theorem == r.oracle)

    def summary(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "instances": len(self.results),
            "agreements": self.agreements,
            "mismatches": self.mismatches,
            "certificate_failures": self.count(STATUS_CERTIFICATE),
            "source_failures": self.count(STATUS_SOURCES),
            "ecd_total_failures": self.count(STATUS_ECD_TOTAL),
            "bound_exceeded": self.count(STATUS_BOUND),
            "findings": self.count(STATUS_FINDING),
            "errors": self.count(STATUS_ERROR),
            "elapsed_s": round(self.elapsed_s, 3),
        }

    def to_frame(self, deterministic: bool = False) -> pd.DataFrame:
        columns = ["key", "theorem", "oracle", "size", "gamma", "wall_ms", "status", "note"]
        rows = [
            {
                "key": r.key,
                "theorem": "" if r.theorem is None else str(r.theorem).lower(),
                "oracle": "" if r.oracle is None else str(r.oracle).lower(),
                "size": "" if r.size is None else r.size,
                "gamma": "" if r.gamma is None else r.gamma,
                "wall_ms": f"{r.wall_ms:.3f}",
                "status": r.status,
                "note": r.note,
            }
            for r in self.results
        ]
        frame = pd.DataFrame(rows, columns=columns)
        if deterministic:
            frame = frame.drop(columns=["wall_ms"])
        return frame

    def to_tsv(self, deterministic: bool = False) -> str:
        return self.to_frame(deterministic).to_csv(sep="\t", index=False, lineterminator="\n")

    def summary_text(self) -> str:
        s = self.summary()
        lines = [
            f"=== {s['suite']} ===",
            f"Instances:      {s['instances']}",
            f"Agreements:     {s['agreements']}",
            f"Mismatches:     {s['mismatches']}",
            f"Cert failures:  {s['certificate_failures']}",
            f"ECD-total fail: {s['ecd_total_failures']}",
            f"Bound exceeded: {s['bound_exceeded']}",
            f"Findings:       {s['findings']}",
            f"Errors:         {s['errors']}",
            f"Elapsed:        {s['elapsed_s']}s",
        ]
        return "\n".join(lines)


def cross_validate(spec: CorpusSpec, bounds: Optional[Bounds] = None, workers: int = 1,
                   recorder=None) -> SweepReport:
    """
    Run one suite over its corpus

    Args:
        spec: Suite and corpus bounds
        bounds: Search bounds handed to every solver call
        workers: Process count; 1 runs in-process
        recorder: Optional SweepRecorder receiving one trace per instance

    Returns:
        SweepReport with results sorted by instance key
    """
    bounds = bounds or Bounds()
    suite = get_suite(spec, bounds)
    tasks = [(spec, bounds, instance) for instance in suite.instances()]
    logger.info(f"Sweeping suite '{spec.suite}' over {len(tasks)} instances with {workers} worker(s)")

    start = time.perf_counter()
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate_task, tasks, chunksize=max(1, len(tasks) // (workers * 8))))
    else:
        results = [_evaluate_task(task) for task in tasks]
    results.sort(key=lambda r: r.key)
    report = SweepReport(spec.suite, results, time.perf_counter() - start)

    for result in results:
        if result.failed or result.status == STATUS_FINDING:
            logger.warning(f"{result.status}: {result.key} ({result.note})")
        if recorder is not None:
            recorder.log_instance(spec.suite, result)
    if recorder is not None:
        recorder.log_sweep_summary(report.summary())
    logger.info(f"Suite '{spec.suite}' finished: {report.summary()}")
    return report
