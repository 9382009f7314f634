"""
Harness sweeps end to end

The quick sweeps run on every test invocation; the full corpora are marked
slow (pytest -m slow).
"""
import pytest

from src.config import Bounds
from src.harness import STATUS_BOUND, STATUS_ECD_TOTAL, STATUS_FINDING, CorpusSpec, cross_validate


def _clean(report):
    assert report.results
    assert report.mismatches == 0
    assert report.failures == 0, [r for r in report.results if r.failed][:5]


class TestQuickSweeps:
    def test_lex(self):
        report = cross_validate(CorpusSpec("lex", max_n=2))
        assert len(report.results) == 25
        _clean(report)

    def test_cartesian_star(self):
        _clean(cross_validate(CorpusSpec("cartesian-star", max_n=2, max_t=2, samples=5, seed=1)))

    def test_cartesian_cycle_sample(self):
        bounds = Bounds(enum=12, search=64, family=12)
        report = cross_validate(CorpusSpec("cartesian-cycle", max_n=1, max_k=3, samples=10, seed=2), bounds)
        _clean(report)
        assert report.count(STATUS_BOUND) == 0

    def test_direct_cycles(self):
        # C1 and C2 only: 3 pairs and 4 triples
        report = cross_validate(CorpusSpec("direct-cycles", max_k=2, samples=0))
        assert len(report.results) == 7
        _clean(report)

    def test_mixed_star_reports_findings(self):
        report = cross_validate(CorpusSpec("mixed-star", max_n=2))
        assert report.failures == 0
        # K1 [] K_{1,2} is ECD although no block assignment exists
        single = [r for r in report.results if r.key == "mixed-star/1:/t1=1,t2=1"]
        assert single[0].status == STATUS_FINDING

    def test_workers_do_not_change_the_report(self):
        spec = CorpusSpec("direct-paths", max_n=3)
        serial = cross_validate(spec, workers=1)
        parallel = cross_validate(spec, workers=2)
        assert serial.to_tsv(deterministic=True) == parallel.to_tsv(deterministic=True)


@pytest.mark.slow
class TestAcceptanceSweeps:
    @pytest.mark.parametrize("spec", [
        CorpusSpec("strong", max_n=3),
        CorpusSpec("lex", max_n=3),
        CorpusSpec("cartesian-cycle", max_n=3, max_k=8),
        CorpusSpec("cartesian-star", max_n=3, max_t=3, samples=1000),
        CorpusSpec("direct-cycles", max_k=6),
        CorpusSpec("direct-paths", max_n=5),
        CorpusSpec("parity", max_k=12),
        CorpusSpec("structure", max_k=8),
        CorpusSpec("star-domination", max_k=8),
        CorpusSpec("orientation", samples=500),
    ], ids=lambda spec: spec.suite)
    def test_suite(self, spec):
        report = cross_validate(spec, workers=4)
        _clean(report)
        assert report.count(STATUS_ECD_TOTAL) == 0

    def test_mixed_star(self):
        report = cross_validate(CorpusSpec("mixed-star", max_n=3), workers=4)
        assert report.failures == 0
        assert len(report.results) == 1 + 4 + 64
