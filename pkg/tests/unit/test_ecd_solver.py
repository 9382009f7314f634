import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.config import Bounds
from src.digraph import Digraph
from src.ecd_solver import (
    check_ecd_set, covers, domination_number, enumerate_ecd_sets, find_eca_set, find_ecd_set,
    is_absorbing_set, is_dominating_set, is_eca_set, is_ecd_set, minimum_dominating_set,
    no_arcs_between, no_arcs_from, sources_in_certificate,
)
from src.errors import BoundExceededError, InvalidVertexError
from src.generators import StarOrientation, gen_star


@st.composite
def digraphs(draw, max_n=6):
    n = draw(st.integers(min_value=1, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    arcs = draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    return Digraph(n, frozenset(arcs))


def _brute_ecd_sets(d):
    return sorted(
        sorted(subset)
        for size in range(d.n + 1)
        for subset in itertools.combinations(range(d.n), size)
        if is_ecd_set(d, subset)
    )


class TestPredicates:
    def test_check_builds_dominator_map(self, c4):
        certificate = check_ecd_set(c4, [0, 2])
        assert certificate.members() == [0, 2]
        assert certificate.dominator == (0, 0, 2, 2)
        assert certificate.size == 2

    def test_overlap_rejected(self, c4):
        assert check_ecd_set(c4, [0, 1]) is None

    def test_uncovered_rejected(self, c4):
        assert not is_ecd_set(c4, [0])

    def test_invalid_member(self, c4):
        with pytest.raises(InvalidVertexError):
            is_ecd_set(c4, [7])

    def test_eca(self, demo_e):
        # closed in-neighborhoods of the leaves share the center
        assert is_ecd_set(demo_e, [1])
        assert not is_eca_set(demo_e, [1])
        assert not is_eca_set(demo_e, [0, 2])
        assert is_eca_set(demo_e.reverse(), [1])

    def test_dominating_and_absorbing(self, demo_d):
        assert is_dominating_set(demo_d, [1, 3])
        assert not is_dominating_set(demo_d, [1])
        assert is_absorbing_set(demo_d, [0, 1, 2])
        assert not is_absorbing_set(demo_d, [0, 2])

    def test_relational_notation(self, demo_d):
        assert covers(demo_d, [1], [0, 2])
        assert not covers(demo_d, [1], [3])
        assert no_arcs_from(demo_d, [0, 2], [1, 3])
        assert not no_arcs_from(demo_d, [3], [1])
        assert no_arcs_between(demo_d, [0], [2])
        assert not no_arcs_between(demo_d, [0], [1])

    def test_sources_in_certificate(self, demo_d):
        assert sources_in_certificate(demo_d, [3, 0, 2])
        assert not sources_in_certificate(demo_d, [1])


class TestSearch:
    def test_first_solution_is_deterministic(self, directed_cycle):
        certificate = find_ecd_set(directed_cycle(6))
        assert certificate.members() == [0, 2, 4]

    def test_enumerate_four_cycle(self, c4):
        assert enumerate_ecd_sets(c4) == [frozenset({0, 2}), frozenset({1, 3})]

    def test_odd_cycle_has_none(self, c3):
        assert find_ecd_set(c3) is None
        assert enumerate_ecd_sets(c3) == []

    def test_loop_is_ecd(self, directed_cycle):
        assert find_ecd_set(directed_cycle(1)).members() == [0]

    @pytest.mark.parametrize("k", range(1, 13))
    def test_cycle_parity(self, directed_cycle, k):
        sets = enumerate_ecd_sets(directed_cycle(k))
        assert bool(sets) == (k % 2 == 0 or k == 1)

    def test_arcless(self):
        assert enumerate_ecd_sets(Digraph(3)) == [frozenset({0, 1, 2})]

    def test_eca_search(self, demo_e):
        assert find_eca_set(demo_e) is None
        assert find_eca_set(gen_star(StarOrientation.center_sink(2))).members() == [0]

    @settings(max_examples=80, deadline=None)
    @given(digraphs())
    def test_enumeration_matches_subset_scan(self, d):
        assert [sorted(s) for s in enumerate_ecd_sets(d)] == _brute_ecd_sets(d)

    @settings(max_examples=80, deadline=None)
    @given(digraphs())
    def test_find_agrees_with_enumerate(self, d):
        certificate = find_ecd_set(d)
        sets = enumerate_ecd_sets(d)
        assert (certificate is None) == (not sets)
        if certificate is not None:
            assert certificate.s in sets

    @settings(max_examples=60, deadline=None)
    @given(digraphs())
    def test_ecd_of_reverse_is_eca(self, d):
        for s in enumerate_ecd_sets(d):
            assert is_eca_set(d.reverse(), s)

    @settings(max_examples=60, deadline=None)
    @given(digraphs())
    def test_every_ecd_set_contains_sources(self, d):
        for s in enumerate_ecd_sets(d):
            assert sources_in_certificate(d, s)

    def test_search_bound(self, directed_cycle):
        with pytest.raises(BoundExceededError) as exc:
            find_ecd_set(directed_cycle(10), Bounds(search=8))
        assert exc.value.n == 10 and exc.value.bound == 8

    def test_enum_bound(self, directed_cycle):
        with pytest.raises(BoundExceededError):
            enumerate_ecd_sets(directed_cycle(10), Bounds(enum=9))


class TestDomination:
    @pytest.mark.parametrize("t", range(1, 9))
    def test_source_centered_star(self, t):
        numbers = domination_number(gen_star(StarOrientation.center_source(t)))
        assert numbers.gamma == 1
        assert numbers.gamma_a == t

    def test_cycle(self, directed_cycle):
        assert domination_number(directed_cycle(7)).gamma == 4

    def test_minimum_set_dominates(self, demo_d):
        chosen = minimum_dominating_set(demo_d)
        assert len(chosen) == 2
        assert is_dominating_set(demo_d, chosen)

    @settings(max_examples=60, deadline=None)
    @given(digraphs())
    def test_no_ecd_set_below_gamma(self, d):
        gamma = domination_number(d).gamma
        for s in enumerate_ecd_sets(d):
            assert len(s) >= gamma

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=1, max_value=6).flatmap(
        lambda n: st.tuples(st.just(n), st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))
    ))
    def test_symmetric_ecd_sets_have_minimum_size(self, case):
        n, edges = case
        d = Digraph(n, frozenset((u, v) for u, v in edges if u != v) | frozenset((v, u) for u, v in edges if u != v))
        gamma = domination_number(d).gamma
        assert all(len(s) == gamma for s in enumerate_ecd_sets(d))

    def test_ecd_set_larger_than_gamma(self):
        # x=0 dominates everything, yet {1, 2} also partitions V
        d = Digraph(3, [(0, 1), (0, 2), (1, 0)])
        assert domination_number(d).gamma == 1
        assert enumerate_ecd_sets(d) == [frozenset({0}), frozenset({1, 2})]

    def test_bound(self, directed_cycle):
        with pytest.raises(BoundExceededError):
            domination_number(directed_cycle(12), Bounds(enum=11))
