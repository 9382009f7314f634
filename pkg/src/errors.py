# Exception hierarchy shared by the library and the CLI

from typing import Optional


class EcdLabError(Exception):
    """Base class for every error raised by ecdlab"""


class InvalidVertexError(EcdLabError, ValueError):
    """A vertex (or a member of a vertex set) is outside 0..n-1"""

    def __init__(self, vertex: int, n: int):
        super().__init__(f"vertex {vertex} out of range for digraph on {n} vertices")
        self.vertex = vertex
        self.n = n


class DigraphFormatError(EcdLabError, ValueError):
    """Malformed edge-list text"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        prefix = f"line {line_number}: " if line_number is not None else ""
        super().__init__(f"{prefix}{message}")
        self.line_number = line_number


class PatternError(EcdLabError, ValueError):
    """Malformed cycle, path or star orientation"""


class PreconditionError(EcdLabError, ValueError):
    """Arguments violate an operation's precondition"""


class BoundExceededError(EcdLabError):
    """Vertex count is above a configured search bound"""

    def __init__(self, what: str, n: int, bound: int):
        super().__init__(f"{what}: {n} vertices exceeds bound {bound}")
        self.what = what
        self.n = n
        self.bound = bound
