# Edge-list text format
#
#   n m          header: vertex count and arc count
#   u v          one arc per line, m lines
#
# '#' starts a comment (whole line or trailing); blank lines are ignored.

import logging
from typing import Optional, Set, Tuple

from .digraph import Digraph
from .errors import DigraphFormatError

logger = logging.getLogger(__name__)


def _ints(fields, line_number: int, what: str) -> Tuple[int, int]:
    if len(fields) != 2:
        raise DigraphFormatError(f"expected two integers for {what}, got {len(fields)} field(s)", line_number)
    try:
        return int(fields[0]), int(fields[1])
    except ValueError:
        raise DigraphFormatError(f"non-integer {what}: {' '.join(fields)}", line_number) from None


def parse_edgelist(text: str) -> Digraph:
    header: Optional[Tuple[int, int]] = None
    arcs: Set[Tuple[int, int]] = set()
    last_line = 0

    for line_number, raw in enumerate(text.splitlines(), start=1):
        last_line = line_number
        fields = raw.split("#", 1)[0].split()
        if not fields:
            continue
        if header is None:
            n, m = _ints(fields, line_number, "header 'n m'")
            if n < 0 or m < 0:
                raise DigraphFormatError(f"negative header value: {n} {m}", line_number)
            header = (n, m)
            continue

        n, m = header
        u, v = _ints(fields, line_number, "arc 'u v'")
        for endpoint in (u, v):
            if not 0 <= endpoint < n:
                raise DigraphFormatError(f"endpoint {endpoint} out of range 0..{n - 1}", line_number)
        if (u, v) in arcs:
            raise DigraphFormatError(f"duplicate arc {u} {v}", line_number)
        if len(arcs) == m:
            raise DigraphFormatError(f"more arcs than the declared {m}", line_number)
        arcs.add((u, v))

    if header is None:
        raise DigraphFormatError("missing header 'n m'", 1)
    n, m = header
    if len(arcs) != m:
        raise DigraphFormatError(f"header declares {m} arcs but {len(arcs)} were given", last_line)
    logger.debug(f"Parsed digraph n={n} m={m}")
    return Digraph(n, frozenset(arcs))


def serialize_edgelist(digraph: Digraph) -> str:
    """Canonical text: header then arcs in lexicographic order"""
    lines = [f"{digraph.n} {len(digraph.arcs)}"]
    lines.extend(f"{u} {v}" for u, v in digraph.sorted_arcs())
    return "\n".join(lines) + "\n"


def read_edgelist(path: str) -> Digraph:
    with open(path, "r", encoding="ascii") as f:
        return parse_edgelist(f.read())


def write_edgelist(digraph: Digraph, path: str) -> str:
    with open(path, "w", encoding="ascii") as f:
        f.write(serialize_edgelist(digraph))
    return path
