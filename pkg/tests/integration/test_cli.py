import json

import pytest
from click.testing import CliRunner

from src.main import EXIT_BOUND, EXIT_INPUT, EXIT_NEGATIVE, cli

C3 = "3 3\n0 1\n1 2\n2 0\n"
C4 = "4 4\n0 1\n1 2\n2 3\n3 0\n"
C6 = "6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n"
DEMO_E = "3 2\n1 0\n1 2\n"


@pytest.fixture
def runner():
    try:
        return CliRunner(mix_stderr=False)
    except TypeError:
        # newer click always keeps stderr apart
        return CliRunner()


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def run(runner, args, **kwargs):
    return runner.invoke(cli, args, obj={}, **kwargs)


class TestGen:
    def test_cycle(self, runner):
        result = run(runner, ["gen", "cycle", "--word", "cwcwcwcw"])
        assert result.exit_code == 0
        assert result.stdout == C4

    def test_cycle_with_sink(self, runner):
        result = run(runner, ["gen", "cycle", "--word", "cw,ccw,ccw,ccw"])
        assert result.stdout == "4 4\n0 1\n0 3\n2 1\n3 2\n"

    def test_star(self, runner):
        result = run(runner, ["gen", "star", "--t", "2", "--mode", "mixed", "--t1", "1", "--t2", "1"])
        assert result.stdout == "3 2\n0 2\n1 0\n"

    def test_demo(self, runner):
        assert run(runner, ["gen", "demo", "E"]).stdout == DEMO_E

    def test_d2(self, runner):
        result = run(runner, ["gen", "d2", "--sizes", "1,1,1", "--assign", "0>0;0>0;0>0"])
        assert result.exit_code == 0
        assert result.stdout == C3

    def test_d1_with_witness(self, runner, tmp_path):
        witness_path = tmp_path / "w.json"
        result = run(runner, ["gen", "d1", "--pi1", "0", "--pi2", "0", "--witness-out", str(witness_path)],
                     input="1 0\n")
        assert result.stdout == "3 2\n1 0\n2 0\n"
        assert json.loads(witness_path.read_text()) == {"family": "D1", "blocks": {"W": [1], "Z": [2], "Vp": [0]}}

    def test_orient_is_ecd(self, runner):
        oriented = run(runner, ["gen", "orient", "--n", "8", "--p", "0.4", "--seed", "3"]).stdout
        assert json.loads(run(runner, ["ecd", "find"], input=oriented).stdout) is not None

    def test_missing_word(self, runner):
        result = run(runner, ["gen", "cycle"])
        assert result.exit_code == EXIT_INPUT
        assert result.stderr.startswith("error: give --word or --k")

    def test_bad_pattern(self, runner):
        result = run(runner, ["gen", "cycle", "--word", "cw,up"])
        assert result.exit_code == EXIT_INPUT
        assert result.stderr.startswith("error:")


class TestEcd:
    def test_pipeline(self, runner):
        cycle = run(runner, ["gen", "cycle", "--word", "cwcwcwcw"]).stdout
        result = run(runner, ["ecd", "find"], input=cycle)
        assert result.exit_code == 0
        assert json.loads(result.stdout) == {"s": [0, 2], "dominator": [0, 0, 2, 2]}

    def test_find_none(self, runner):
        result = run(runner, ["ecd", "find"], input=C3)
        assert result.exit_code == 0
        assert result.stdout.strip() == "null"

    def test_eca(self, runner):
        assert run(runner, ["ecd", "find", "--eca"], input=DEMO_E).stdout.strip() == "null"

    def test_enumerate(self, runner):
        result = run(runner, ["ecd", "enumerate"], input=C4)
        assert json.loads(result.stdout) == {"count": 2, "sets": [[0, 2], [1, 3]]}

    def test_check(self, runner):
        assert run(runner, ["ecd", "check", "--set", "1,3"], input=C4).exit_code == 0
        result = run(runner, ["ecd", "check", "--set", "0,1"], input=C4)
        assert result.exit_code == EXIT_NEGATIVE
        assert result.stdout.strip() == "null"

    def test_gamma(self, runner):
        star = run(runner, ["gen", "star", "--t", "3"]).stdout
        assert json.loads(run(runner, ["gamma"], input=star).stdout) == {"gamma": 1, "gamma_a": 3}

    def test_family(self, runner):
        result = run(runner, ["family", "d0"], input=DEMO_E)
        assert json.loads(result.stdout) == {"family": "D0", "blocks": {"S": [1], "Sp": [0, 2]}}
        assert run(runner, ["family", "D2"], input=DEMO_E).stdout.strip() == "null"

    def test_product(self, runner, files):
        d = files("d.el", run(runner, ["gen", "demo", "D"]).stdout)
        e = files("e.el", DEMO_E)
        result = run(runner, ["product", "cartesian", "--d", d, "--f", e])
        assert result.stdout.splitlines()[0] == "12 17"


class TestErrors:
    def test_malformed_input(self, runner):
        result = run(runner, ["ecd", "find"], input="3 1\n0 5\n")
        assert result.exit_code == EXIT_INPUT
        assert result.stderr.startswith("error: line 2:")

    def test_search_bound_flag(self, runner):
        result = run(runner, ["--search-bound", "4", "ecd", "find"], input=C6)
        assert result.exit_code == EXIT_BOUND
        assert result.stderr.startswith("error:")

    def test_bounds_from_environment(self, runner):
        result = run(runner, ["ecd", "find"], input=C6, env={"ECDLAB_BOUNDS": "search=4"})
        assert result.exit_code == EXIT_BOUND

    def test_flag_beats_environment(self, runner):
        result = run(runner, ["--search-bound", "8", "ecd", "find"], input=C6, env={"ECDLAB_BOUNDS": "search=4"})
        assert result.exit_code == 0

    @pytest.mark.parametrize("env", [{"ECDLAB_BOUNDS": "depth=1"}, {"ECDLAB_WORKERS": "0"}])
    def test_bad_settings(self, runner, env):
        result = run(runner, ["gamma"], input=C4, env=env)
        assert result.exit_code == EXIT_INPUT
        assert result.stderr.startswith("error:")

    def test_bad_log_level(self, runner):
        assert run(runner, ["--log-level", "chatty", "gamma"], input=C4).exit_code == EXIT_INPUT


class TestDecide:
    def test_strong_negative(self, runner, files):
        result = run(runner, ["decide", "strong", "--d", files("c3.el", C3), "--f", files("c4.el", C4)])
        assert result.exit_code == EXIT_NEGATIVE
        payload = json.loads(result.stdout)
        assert payload["decision"] is False
        assert payload["refutation"] == "factor D not ECD"

    def test_lex_positive(self, runner, files):
        result = run(runner, ["decide", "lex", "--d", files("c4.el", C4), "--f", files("e.el", DEMO_E)])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["certificate"]["s"] == [1, 7]

    def test_cartesian_cycle(self, runner, files):
        d = files("d1.el", "3 2\n1 0\n2 0\n")
        result = run(runner, ["decide", "cartesian-cycle", "--d", d, "--k", "4"])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["witnesses"][0]["family"] == "D1"
        assert run(runner, ["decide", "cartesian-cycle", "--d", d, "--k", "3"]).exit_code == EXIT_NEGATIVE

    def test_cartesian_cycle_rejects_sinks(self, runner, files):
        result = run(runner, ["decide", "cartesian-cycle", "--d", files("c4.el", C4), "--word", "cw,ccw,ccw,ccw"])
        assert result.exit_code == EXIT_INPUT

    def test_cartesian_star(self, runner, files):
        result = run(runner, ["decide", "cartesian-star", "--f", files("e.el", DEMO_E), "--t", "2"])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["witnesses"][0]["family"] == "D0"

    def test_mixed_star(self, runner, files):
        f = files("f.el", "3 4\n0 1\n0 2\n1 2\n2 0\n")
        result = run(runner, ["decide", "mixed-star", "--f", f, "--t1", "1", "--t2", "1"])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["verified"] is True

    def test_mixed_star_without_partition(self, runner, files):
        result = run(runner, ["decide", "mixed-star", "--f", files("k1.el", "1 0\n"), "--t1", "1", "--t2", "1"])
        assert result.exit_code == EXIT_NEGATIVE
        assert json.loads(result.stdout)["blocks"] is None

    def test_direct_cycles(self, runner):
        result = run(runner, ["decide", "direct-cycles", "--word", "cwcwcw", "--word", "cw,cw,ccw,ccw,ccw,ccw"])
        assert result.exit_code == 0
        assert len(json.loads(result.stdout)["certificate"]["s"]) == 9

    def test_direct_paths(self, runner):
        result = run(runner, ["decide", "direct-paths", "--word", "fwd,bwd", "--word", "fwd"])
        assert result.exit_code == EXIT_NEGATIVE
        assert json.loads(result.stdout)["refutation"].startswith("factor 1 has a sink")

    def test_direct_paths_needs_words(self, runner):
        assert run(runner, ["decide", "direct-paths"]).exit_code == EXIT_INPUT


class TestValidate:
    def test_tsv_to_stdout(self, runner):
        result = run(runner, ["validate", "--suite", "parity", "--max-k", "6", "--deterministic"])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == "key\ttheorem\toracle\tsize\tgamma\tstatus\tnote"
        assert len(lines) == 7
        assert "Mismatches:     0" in result.stderr

    def test_fixed_seed_is_reproducible(self, runner, tmp_path):
        outputs = []
        for name in ("a.tsv", "b.tsv"):
            path = tmp_path / name
            args = ["validate", "--suite", "orientation", "--samples", "15", "--seed", "11",
                    "--deterministic", "--out", str(path)]
            assert run(runner, args).exit_code == 0
            outputs.append(path.read_bytes())
        assert outputs[0] == outputs[1]

    def test_timings_unless_deterministic(self, runner):
        result = run(runner, ["validate", "--suite", "parity", "--max-k", "2"])
        assert result.exit_code == 0
        assert result.stdout.splitlines()[0] == "key\ttheorem\toracle\tsize\tgamma\twall_ms\tstatus\tnote"
        help_text = run(runner, ["validate", "--help"]).stdout
        assert "wall_ms" in help_text and "--deterministic" in help_text

    def test_metrics_out(self, runner, tmp_path):
        metrics = tmp_path / "metrics.json"
        args = ["validate", "--suite", "star-domination", "--max-k", "4", "--metrics-out", str(metrics),
                "--out", str(tmp_path / "r.tsv")]
        assert run(runner, args).exit_code == 0
        payload = json.loads(metrics.read_text())
        assert payload["total_instances"] == 4
        assert payload["summary_metrics"]["star-domination"]["mismatches"] == 0

    def test_unknown_suite(self, runner):
        assert run(runner, ["validate", "--suite", "modular"]).exit_code == 2
