import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.digraph import Digraph
from src.edgelist import parse_edgelist, read_edgelist, serialize_edgelist, write_edgelist
from src.errors import DigraphFormatError


class TestSerialize:
    def test_directed_four_cycle(self, c4):
        assert serialize_edgelist(c4) == "4 4\n0 1\n1 2\n2 3\n3 0\n"

    def test_arcs_sorted(self, demo_d):
        assert serialize_edgelist(demo_d) == "4 3\n1 0\n1 2\n3 1\n"

    def test_empty_digraph(self):
        assert serialize_edgelist(Digraph(0)) == "0 0\n"


class TestParse:
    def test_comments_and_blank_lines(self):
        text = "# triangle\n\n3 3  # header\n0 1\n1 2\n\n2 0 # closing arc\n"
        assert parse_edgelist(text) == Digraph(3, [(0, 1), (1, 2), (2, 0)])

    def test_loop_allowed(self):
        assert parse_edgelist("1 1\n0 0\n").has_loop(0)

    @pytest.mark.parametrize("text, line, fragment", [
        ("", 1, "missing header"),
        ("# only a comment\n", 1, "missing header"),
        ("3\n", 1, "expected two integers"),
        ("3 x\n", 1, "non-integer"),
        ("-1 0\n", 1, "negative"),
        ("2 1\n0 2\n", 2, "out of range"),
        ("2 2\n0 1\n0 1\n", 3, "duplicate"),
        ("2 1\n0 1\n1 0\n", 3, "more arcs"),
        ("3 3\n0 1\n1 2\n", 3, "declares 3 arcs"),
    ])
    def test_errors_carry_line_number(self, text, line, fragment):
        with pytest.raises(DigraphFormatError, match=fragment) as exc:
            parse_edgelist(text)
        assert exc.value.line_number == line
        assert str(exc.value).startswith(f"line {line}: ")

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=0, max_value=5).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.sets(st.tuples(st.integers(0, max(n - 1, 0)), st.integers(0, max(n - 1, 0))))
            if n else st.just(set()),
        )
    ))
    def test_parse_inverts_serialize(self, case):
        n, arcs = case
        d = Digraph(n, frozenset(arcs))
        assert parse_edgelist(serialize_edgelist(d)) == d


class TestFiles:
    def test_write_then_read(self, tmp_path, demo_e):
        path = write_edgelist(demo_e, str(tmp_path / "e.el"))
        assert read_edgelist(path) == demo_e
