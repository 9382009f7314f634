#!/usr/bin/env python3
"""
ecdlab command line

Digraphs travel between commands as edge-list text on stdin/stdout; results
are JSON (certificates, witnesses, decision reports) or TSV (sweeps). Logs
and errors go to stderr.
"""

import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import click
from dotenv import load_dotenv
from pydantic import ValidationError

from .config import Bounds, Settings
from .digraph import Digraph
from .ecd_solver import (
    check_ecd_set, domination_number, enumerate_ecd_sets, find_eca_set, find_ecd_set,
)
from .edgelist import parse_edgelist, serialize_edgelist
from .errors import BoundExceededError, EcdLabError
from .families import (
    Family, construct_d1, construct_d2, construct_dpr, recognize,
)
from .generators import (
    CyclePattern, PathPattern, StarMode, StarOrientation, demo_factors, gen_cycle, gen_path,
    gen_star, greedy_independent_dominating_set, orient_from_independent_set, random_graph,
)
from .harness import SUITES, CorpusSpec, cross_validate
from .products import ProductKind, product
from .run_metrics import SweepRecorder
from .schemas import (
    EnumerationModel, MixedStarModel, certificate_model, domination_model, report_model,
    to_json, witness_model,
)
from .theorems import (
    build_mixed_star_ecd, decide_cartesian_cycle, decide_cartesian_star, decide_direct_cycles,
    decide_direct_paths, decide_lex, decide_strong, search_mixed_star_partition,
)

logger = logging.getLogger(__name__)

EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_BOUND = 3

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def _load_environment() -> None:
    """Load .env, falling back to .env.example"""
    root = Path(__file__).parent.parent
    env_path = root / ".env"
    if env_path.exists():
        load_dotenv(env_path)
    else:
        example_path = root / ".env.example"
        if example_path.exists():
            load_dotenv(example_path)


def _fail(ctx: click.Context, message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    ctx.exit(code)


class EcdGroup(click.Group):
    """Group that turns library errors into exit codes"""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except BoundExceededError as e:
            _fail(ctx, str(e), EXIT_BOUND)
        except EcdLabError as e:
            _fail(ctx, str(e), EXIT_INPUT)
        except click.UsageError as e:
            _fail(ctx, e.format_message(), EXIT_INPUT)


# ==================== Argument parsing helpers ====================


def _read(handle) -> Digraph:
    return parse_edgelist(handle.read())


def _ints(text: str, what: str) -> List[int]:
    try:
        return [int(item) for item in text.replace(" ", "").split(",") if item]
    except ValueError:
        raise click.UsageError(f"{what} must be comma separated integers, got '{text}'") from None


def _blocks(text: str, what: str) -> List[List[int]]:
    """'0,1;2' -> [[0, 1], [2]]"""
    return [_ints(block, what) for block in text.split(";")]


def _arcs(text: Optional[str], what: str) -> List[Tuple[int, int]]:
    """'0>3,1>4' -> [(0, 3), (1, 4)]"""
    arcs = []
    for item in (text or "").replace(" ", "").split(","):
        if not item:
            continue
        tail, sep, head = item.partition(">")
        if not sep:
            raise click.UsageError(f"{what} arcs are written u>v, got '{item}'")
        try:
            arcs.append((int(tail), int(head)))
        except ValueError:
            raise click.UsageError(f"{what} arc '{item}' has a non-integer endpoint") from None
    return arcs


def _star(t: Optional[int], mode: str, t1: Optional[int], t2: Optional[int]) -> StarOrientation:
    if StarMode(mode) is StarMode.MIXED:
        if t1 is None or t2 is None:
            raise click.UsageError("mixed stars need --t1 and --t2")
        return StarOrientation.mixed(t1, t2)
    if t is None:
        raise click.UsageError("--t is required")
    return StarOrientation(t, StarMode(mode))


def _cycle(word: Optional[str], k: Optional[int]) -> CyclePattern:
    if word is not None:
        return CyclePattern.parse(word)
    if k is None:
        raise click.UsageError("give --word or --k")
    return CyclePattern.directed(k)


def _emit_report(ctx: click.Context, report) -> None:
    click.echo(to_json(report_model(report)))
    if not report.decision:
        ctx.exit(EXIT_NEGATIVE)


def _emit_digraph(digraph: Digraph) -> None:
    click.echo(serialize_edgelist(digraph), nl=False)


def _emit_witness(witness, path: Optional[str]) -> None:
    if path:
        Path(path).write_text(to_json(witness_model(witness)) + "\n")
        logger.info(f"Witness written to {path}")


_input_option = click.option("--input", "source", type=click.File("r"), default="-", show_default=True,
                             help="Edge-list file ('-' for stdin)")
_star_options = [
    click.option("--t", type=int, default=None, help="Number of leaves"),
    click.option("--mode", type=click.Choice([m.value for m in StarMode]), default=StarMode.CENTER_SOURCE.value,
                 show_default=True),
    click.option("--t1", type=int, default=None, help="Source leaves (mixed mode)"),
    click.option("--t2", type=int, default=None, help="Sink leaves (mixed mode)"),
]


def _with_star_options(func):
    for option in reversed(_star_options):
        func = option(func)
    return func


# ==================== Root ====================


@click.group(cls=EcdGroup)
@click.option("--enum-bound", type=int, default=None, help="Max vertices for enumeration and domination search")
@click.option("--search-bound", type=int, default=None, help="Max vertices for single ECD-set search")
@click.option("--family-bound", type=int, default=None, help="Max vertices for family recognition")
@click.option("--log-level", default=None, help="Overrides LOG_LEVEL")
@click.pass_context
def cli(ctx: click.Context, enum_bound, search_bound, family_bound, log_level):
    """Efficient closed domination in digraph products"""
    _load_environment()
    try:
        settings = Settings()
    except ValidationError as e:
        _fail(ctx, f"invalid settings: {e.errors()[0]['msg']}", EXIT_INPUT)
    level = (log_level or settings.log_level).upper()
    if not isinstance(logging.getLevelName(level), int):
        raise click.UsageError(f"unknown log level '{log_level}'")
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)

    ctx.ensure_object(dict)
    ctx.obj["bounds"] = settings.resolve_bounds(enum_bound, search_bound, family_bound)
    ctx.obj["workers"] = settings.workers


def _bounds(ctx: click.Context) -> Bounds:
    return ctx.obj["bounds"]


# ==================== gen ====================


@cli.group(cls=EcdGroup)
def gen():
    """Generate digraphs as edge lists"""


@gen.command("cycle")
@click.option("--word", default=None, help="Orientation word, e.g. cw,cw,ccw")
@click.option("--k", type=int, default=None, help="Length of the directed cycle")
def gen_cycle_cmd(word, k):
    _emit_digraph(gen_cycle(_cycle(word, k)))


@gen.command("path")
@click.option("--word", default=None, help="Orientation word, e.g. fwd,bwd ('' is one vertex)")
@click.option("--k", type=int, default=None, help="Vertices of the directed path")
def gen_path_cmd(word, k):
    if word is not None:
        pattern = PathPattern.parse(word)
    elif k is not None:
        pattern = PathPattern.directed(k)
    else:
        raise click.UsageError("give --word or --k")
    _emit_digraph(gen_path(pattern))


@gen.command("star")
@_with_star_options
def gen_star_cmd(t, mode, t1, t2):
    _emit_digraph(gen_star(_star(t, mode, t1, t2)))


@gen.command("demo")
@click.argument("name", type=click.Choice(sorted(demo_factors())))
def gen_demo_cmd(name):
    _emit_digraph(demo_factors()[name])


@gen.command("orient")
@click.option("--n", type=int, required=True)
@click.option("--p", "edge_probability", type=float, default=0.3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--set", "members", default=None, help="Independent dominating set (default: greedy)")
def gen_orient_cmd(n, edge_probability, seed, members):
    """Orient a random graph so an independent dominating set becomes ECD"""
    graph = random_graph(n, edge_probability, seed)
    chosen = _ints(members, "--set") if members is not None else sorted(greedy_independent_dominating_set(graph))
    logger.info(f"Orienting G({n}, {edge_probability}) seed={seed} around {chosen}")
    _emit_digraph(orient_from_independent_set(graph, chosen))


@gen.command("d1")
@_input_option
@click.option("--pi1", required=True, help="Blocks dominated by w_i, e.g. '0,1;2'")
@click.option("--pi2", required=True, help="Blocks dominated by z_j")
@click.option("--extra", default=None, help="Arcs from V(D') to the w/z vertices, e.g. '0>3'")
@click.option("--witness-out", type=click.Path(dir_okay=False), default=None)
def gen_d1_cmd(source, pi1, pi2, extra, witness_out):
    """D1 member over the base digraph read from --input"""
    digraph, witness = construct_d1(_read(source), _blocks(pi1, "--pi1"), _blocks(pi2, "--pi2"),
                                    _arcs(extra, "--extra"))
    _emit_witness(witness, witness_out)
    _emit_digraph(digraph)


@gen.command("d2")
@click.option("--sizes", required=True, help="Block sizes |U1|,|U2|,|U3|")
@click.option("--assign", "assignments", required=True,
              help="Dominator arcs per block, ';' between blocks, e.g. '0>0;0>0,0>1;0>0,1>0'")
@click.option("--witness-out", type=click.Path(dir_okay=False), default=None)
def gen_d2_cmd(sizes, assignments, witness_out):
    size_list = _ints(sizes, "--sizes")
    groups = assignments.split(";")
    if len(size_list) != 3 or len(groups) != 3:
        raise click.UsageError("D2 needs three sizes and three assignment groups")
    digraph, witness = construct_d2(tuple(size_list), [_arcs(group, "--assign") for group in groups])
    _emit_witness(witness, witness_out)
    _emit_digraph(digraph)


@gen.command("dpr")
@_input_option
@click.option("--w-partition", required=True, help="Blocks of V(D) dominated by w_i")
@click.option("--b", "b_arcs", default=None, help="Arcs from V(D) to the w_i")
@click.option("--z-partition", required=True, help="Blocks of V(D_p) dominated by z_j")
@click.option("--bp", "bp_arcs", default=None, help="Arcs from V(D) to the z_j")
@click.option("--witness-out", type=click.Path(dir_okay=False), default=None)
def gen_dpr_cmd(source, w_partition, b_arcs, z_partition, bp_arcs, witness_out):
    """Two-stage D0 member over the digraph read from --input"""
    digraph, witness = construct_dpr(_read(source), _blocks(w_partition, "--w-partition"),
                                     _arcs(b_arcs, "--b"), _blocks(z_partition, "--z-partition"),
                                     _arcs(bp_arcs, "--bp"))
    _emit_witness(witness, witness_out)
    _emit_digraph(digraph)


# ==================== product ====================


@cli.command("product")
@click.argument("kind")
@click.option("--d", "d_file", type=click.File("r"), required=True, help="Left factor edge list")
@click.option("--f", "f_file", type=click.File("r"), required=True, help="Right factor edge list")
def product_cmd(kind, d_file, f_file):
    """Build cartesian|direct|strong|lexicographic product, labels d*|F|+f"""
    _emit_digraph(product(ProductKind.parse(kind), _read(d_file), _read(f_file)))


# ==================== ecd / gamma / family ====================


@cli.group(cls=EcdGroup)
def ecd():
    """Exact ECD (or, with --eca, ECA) set search"""


@ecd.command("find")
@_input_option
@click.option("--eca", is_flag=True, help="Search closed in-neighborhoods instead")
@click.pass_context
def ecd_find_cmd(ctx, source, eca):
    digraph = _read(source)
    search = find_eca_set if eca else find_ecd_set
    certificate = search(digraph, _bounds(ctx))
    click.echo("null" if certificate is None else to_json(certificate_model(certificate)))


@ecd.command("enumerate")
@_input_option
@click.option("--eca", is_flag=True)
@click.pass_context
def ecd_enumerate_cmd(ctx, source, eca):
    digraph = _read(source)
    sets = enumerate_ecd_sets(digraph.reverse() if eca else digraph, _bounds(ctx))
    click.echo(to_json(EnumerationModel(count=len(sets), sets=[sorted(s) for s in sets])))


@ecd.command("check")
@_input_option
@click.option("--set", "members", required=True, help="Candidate set, e.g. '0,2'")
@click.option("--eca", is_flag=True)
@click.pass_context
def ecd_check_cmd(ctx, source, members, eca):
    """Exit 1 when the set is not an ECD (ECA) set"""
    digraph = _read(source)
    certificate = check_ecd_set(digraph.reverse() if eca else digraph, _ints(members, "--set"))
    if certificate is None:
        click.echo("null")
        ctx.exit(EXIT_NEGATIVE)
    click.echo(to_json(certificate_model(certificate)))


@cli.command("gamma")
@_input_option
@click.pass_context
def gamma_cmd(ctx, source):
    """Domination and absorbing numbers"""
    click.echo(to_json(domination_model(domination_number(_read(source), _bounds(ctx)))))


@cli.command("family")
@click.argument("family", type=click.Choice([f.value for f in Family], case_sensitive=False))
@_input_option
@click.pass_context
def family_cmd(ctx, family, source):
    """Recognize D0..D3 membership; prints the witness or null"""
    witness = recognize(Family(family.upper()), _read(source), _bounds(ctx))
    click.echo("null" if witness is None else to_json(witness_model(witness)))


# ==================== decide ====================


@cli.group(cls=EcdGroup)
def decide():
    """Theorem-based deciders; exit 1 when the product is not ECD"""


@decide.command("strong")
@click.option("--d", "d_file", type=click.File("r"), required=True)
@click.option("--f", "f_file", type=click.File("r"), required=True)
@click.pass_context
def decide_strong_cmd(ctx, d_file, f_file):
    _emit_report(ctx, decide_strong(_read(d_file), _read(f_file), _bounds(ctx)))


@decide.command("lex")
@click.option("--d", "d_file", type=click.File("r"), required=True)
@click.option("--f", "f_file", type=click.File("r"), required=True)
@click.pass_context
def decide_lex_cmd(ctx, d_file, f_file):
    _emit_report(ctx, decide_lex(_read(d_file), _read(f_file), _bounds(ctx)))


@decide.command("cartesian-cycle")
@click.option("--d", "d_file", type=click.File("r"), required=True)
@click.option("--word", default=None, help="Sink-free cycle word")
@click.option("--k", type=int, default=None, help="Length of C_k^0")
@click.pass_context
def decide_cartesian_cycle_cmd(ctx, d_file, word, k):
    _emit_report(ctx, decide_cartesian_cycle(_read(d_file), _cycle(word, k), _bounds(ctx)))


@decide.command("cartesian-star")
@click.option("--f", "f_file", type=click.File("r"), required=True)
@_with_star_options
@click.pass_context
def decide_cartesian_star_cmd(ctx, f_file, t, mode, t1, t2):
    _emit_report(ctx, decide_cartesian_star(_read(f_file), _star(t, mode, t1, t2), _bounds(ctx)))


@decide.command("mixed-star")
@click.option("--f", "f_file", type=click.File("r"), required=True)
@click.option("--t1", type=int, required=True, help="Source leaves")
@click.option("--t2", type=int, required=True, help="Sink leaves")
@click.pass_context
def decide_mixed_star_cmd(ctx, f_file, t1, t2):
    """Search a block assignment for a mixed star and verify the set it builds"""
    f = _read(f_file)
    blocks = search_mixed_star_partition(f, t1, t2, _bounds(ctx))
    if blocks is None:
        click.echo(to_json(MixedStarModel()))
        ctx.exit(EXIT_NEGATIVE)
    outcome = build_mixed_star_ecd(f, blocks, t1, t2)
    click.echo(to_json(MixedStarModel(blocks=[sorted(b) for b in blocks], s=sorted(outcome.s),
                                      verified=outcome.verified)))
    if not outcome.verified:
        ctx.exit(EXIT_NEGATIVE)


def _patterns(words: Sequence[str], parse, what: str):
    if not words:
        raise click.UsageError(f"give at least one --word for each {what}")
    return [parse(word) for word in words]


@decide.command("direct-cycles")
@click.option("--word", "words", multiple=True, help="Cycle word; repeat once per factor")
@click.pass_context
def decide_direct_cycles_cmd(ctx, words):
    _emit_report(ctx, decide_direct_cycles(_patterns(words, CyclePattern.parse, "cycle")))


@decide.command("direct-paths")
@click.option("--word", "words", multiple=True, help="Path word; repeat once per factor")
@click.pass_context
def decide_direct_paths_cmd(ctx, words):
    _emit_report(ctx, decide_direct_paths(_patterns(words, PathPattern.parse, "path")))


# ==================== validate ====================


@cli.command("validate")
@click.option("--suite", type=click.Choice(sorted(SUITES)), required=True)
@click.option("--max-n", type=int, default=3, show_default=True)
@click.option("--max-k", type=int, default=8, show_default=True)
@click.option("--max-t", type=int, default=3, show_default=True)
@click.option("--samples", type=int, default=None, help="Random instances (suite default when omitted)")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--workers", type=int, default=None, help="Process count (default ECDLAB_WORKERS)")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="TSV report path (default stdout)")
@click.option("--metrics-out", type=click.Path(dir_okay=False), default=None, help="JSON traces and summary")
@click.option("--deterministic", is_flag=True,
              help="Drop the wall_ms column and timings so fixed seeds give byte-identical files")
@click.pass_context
def validate_cmd(ctx, suite, max_n, max_k, max_t, samples, seed, workers, out, metrics_out, deterministic):
    """
    Cross-validate a theorem suite against exact search; exit 1 on any failure

    \b
    The TSV report carries a wall_ms timing column unless --deterministic is
    given, so only deterministic reports are byte-identical across runs.
    """
    workers = workers or ctx.obj["workers"]
    if workers < 1:
        raise click.UsageError(f"--workers must be >= 1, got {workers}")
    spec = CorpusSpec(suite, max_n=max_n, max_k=max_k, max_t=max_t, samples=samples, seed=seed)
    recorder = SweepRecorder(deterministic=deterministic) if metrics_out else None
    report = cross_validate(spec, _bounds(ctx), workers=workers, recorder=recorder)

    tsv = report.to_tsv(deterministic)
    if out:
        Path(out).write_text(tsv)
        logger.info(f"Report written to {out}")
    else:
        click.echo(tsv, nl=False)
    if recorder is not None:
        recorder.export_metrics(metrics_out)
    click.echo(report.summary_text(), err=True)
    if report.failures:
        ctx.exit(EXIT_NEGATIVE)


def main():
    cli(obj={})


if __name__ == "__main__":
    main()
