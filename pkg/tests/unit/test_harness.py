import pytest

from src.config import Bounds
from src.digraph import Digraph
from src.errors import PreconditionError
from src.harness import (
    STATUS_CERTIFICATE, STATUS_MISMATCH, STATUS_OK, SUITES, CorpusSpec, InstanceResult,
    SweepReport, cross_validate, digraph_code, get_suite,
)
from src.products import ProductKind
from src.run_metrics import SweepRecorder
from src.theorems import DecisionReport, Method


class TestCorpusSpec:
    def test_defaults(self):
        spec = CorpusSpec("parity")
        assert (spec.max_n, spec.max_k, spec.max_t, spec.samples) == (3, 8, 3, None)

    @pytest.mark.parametrize("field", ["max_n", "max_k", "max_t"])
    def test_rejects_zero(self, field):
        with pytest.raises(PreconditionError):
            CorpusSpec("parity", **{field: 0})

    def test_unknown_suite(self):
        with pytest.raises(PreconditionError, match="unknown suite"):
            get_suite(CorpusSpec("modular"))

    def test_registry(self):
        assert set(SUITES) == {
            "strong", "lex", "cartesian-cycle", "cartesian-star", "direct-cycles", "direct-paths",
            "parity", "structure", "star-domination", "orientation", "mixed-star",
        }

    def test_digraph_code(self, demo_e):
        assert digraph_code(demo_e) == "3:1>0,1>2"


class TestCorpora:
    def test_cartesian_cycle_random_sample(self):
        spec = CorpusSpec("cartesian-cycle", max_n=1, max_k=2, samples=5, seed=3)
        keys = [instance.key for instance in get_suite(spec).instances()]
        sampled = [key for key in keys if key.startswith("cartesian-cycle/sample/")]
        assert 1 <= len(sampled) <= 5
        assert all(key.split("/")[2][:2] in ("4:", "5:") for key in sampled)
        assert keys == [instance.key for instance in get_suite(spec).instances()]

    def test_default_sample_sizes(self):
        assert get_suite(CorpusSpec("cartesian-cycle")).samples == 200
        assert get_suite(CorpusSpec("direct-cycles")).samples == 50

    def test_direct_cycles_spot_triples(self):
        keys = [instance.key for instance in get_suite(CorpusSpec("direct-cycles", max_k=4, seed=5)).instances()]
        triples = [key for key in keys if key.count("/") == 3]
        assert any("C4[" in key for key in triples)
        assert len(keys) == len(set(keys))


class TestJudge:
    @pytest.fixture
    def suite(self):
        return get_suite(CorpusSpec("strong"), Bounds())

    def test_agreement(self, suite, c4):
        report = DecisionReport(True, Method.THEOREM, "c4", claimed=frozenset({0, 2}))
        result = suite.judge("k", report, ProductKind.STRONG, (c4, Digraph(1)))
        assert result.status == STATUS_OK
        assert (result.size, result.gamma) == (2, 2)

    def test_wrong_decision(self, suite, c4):
        report = DecisionReport(False, Method.THEOREM, "c4", refutation="claimed")
        result = suite.judge("k", report, ProductKind.STRONG, (c4, Digraph(1)))
        assert result.status == STATUS_MISMATCH
        assert result.failed

    def test_bad_certificate(self, suite, c4):
        report = DecisionReport(True, Method.THEOREM, "c4", claimed=frozenset({0, 1}))
        result = suite.judge("k", report, ProductKind.STRONG, (c4, Digraph(1)))
        assert result.status == STATUS_CERTIFICATE

    def test_refutation_becomes_note(self, suite, c3):
        report = DecisionReport(False, Method.THEOREM, "c3", refutation="factor D not ECD")
        result = suite.judge("k", report, ProductKind.STRONG, (c3, Digraph(1)))
        assert result.status == STATUS_OK
        assert result.note == "factor D not ECD"


class TestSweeps:
    def test_parity(self):
        report = cross_validate(CorpusSpec("parity", max_k=8))
        assert len(report.results) == 8
        assert report.failures == 0
        assert [r.theorem for r in report.results] == [True, True, False, True, False, True, False, True]

    def test_structure(self):
        report = cross_validate(CorpusSpec("structure", max_k=4))
        # 10 pairs and 20 triples over lengths 1..4
        assert len(report.results) == 30
        assert report.failures == 0

    def test_star_domination(self):
        report = cross_validate(CorpusSpec("star-domination", max_k=5))
        assert report.count(STATUS_OK) == 5

    def test_strong_small(self, small_bounds):
        report = cross_validate(CorpusSpec("strong", max_n=2), small_bounds)
        assert len(report.results) == 25
        assert report.mismatches == 0
        assert report.failures == 0

    def test_direct_paths(self):
        report = cross_validate(CorpusSpec("direct-paths", max_n=3))
        assert len(report.results) == 28
        assert report.failures == 0

    def test_orientation_samples(self):
        report = cross_validate(CorpusSpec("orientation", samples=20, seed=7))
        assert len(report.results) == 20
        assert report.failures == 0

    def test_results_sorted(self):
        report = cross_validate(CorpusSpec("star-domination", max_k=10))
        keys = [r.key for r in report.results]
        assert keys == sorted(keys)

    def test_recorder(self):
        recorder = SweepRecorder(deterministic=True)
        cross_validate(CorpusSpec("parity", max_k=4), recorder=recorder)
        assert len(recorder.traces) == 4
        assert recorder.metrics["parity"]["instances"] == 4
        assert "elapsed_s" not in recorder.metrics["parity"]


class TestReport:
    @pytest.fixture
    def report(self):
        return SweepReport("demo", [
            InstanceResult("demo/a", True, True, 2, 2, 1.5),
            InstanceResult("demo/b", False, True, wall_ms=0.25, status=STATUS_MISMATCH, note="x"),
        ], 0.1234)

    def test_tsv(self, report):
        lines = report.to_tsv().split("\n")
        assert lines[0] == "key\ttheorem\toracle\tsize\tgamma\twall_ms\tstatus\tnote"
        assert lines[1] == "demo/a\ttrue\ttrue\t2\t2\t1.500\tok\t"
        assert lines[2] == "demo/b\tfalse\ttrue\t\t\t0.250\tmismatch\tx"

    def test_deterministic_tsv_drops_timing(self, report):
        assert report.to_tsv(deterministic=True).split("\n")[0] == "key\ttheorem\toracle\tsize\tgamma\tstatus\tnote"

    def test_summary(self, report):
        summary = report.summary()
        assert summary["instances"] == 2
        assert summary["agreements"] == 1
        assert summary["mismatches"] == 1
        assert summary["elapsed_s"] == 0.123
        assert report.failures == 1
        assert "Mismatches:     1" in report.summary_text()
