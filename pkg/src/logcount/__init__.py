"""Exact path counting, nondeterministic counting algorithms and division-free
linear algebra for logspace counting classes."""

from .errors import BudgetExceeded, InvariantError, NotMinUnique, SingularMatrix
from .graphs import Digraph, LayeredDag, PathCount, count_st_paths, reachable, walk_count

__all__ = [
    "BudgetExceeded",
    "InvariantError",
    "NotMinUnique",
    "SingularMatrix",
    "Digraph",
    "LayeredDag",
    "PathCount",
    "count_st_paths",
    "reachable",
    "walk_count",
]

__version__ = "0.1.0"
