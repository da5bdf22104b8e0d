"""Python front end to the ncchern C++ core.

Results come back as plain dicts and lists decoded from the same JSON the
command line writes.
"""

import json

from . import _core
from ._core import (
    AmbiguousExtension,
    Error,
    IncompleteDiagram,
    MissingFact,
    NumericalGuard,
    ParseError,
    Refusal,
    ValidationError,
    ZeroSample,
    cokernel,
    normal_form,
    run_cli,
    winding_number,
)

__all__ = [
    "AmbiguousExtension",
    "Error",
    "IncompleteDiagram",
    "MissingFact",
    "NumericalGuard",
    "ParseError",
    "Refusal",
    "ValidationError",
    "ZeroSample",
    "chern",
    "cokernel",
    "normal_form",
    "run_cli",
    "snf",
    "solve_diagram",
    "sphere_report",
    "transition",
    "winding_number",
]


def snf(matrix):
    """Smith normal form of an integer matrix: dict with S, U, V, diagonal, cokernel."""
    return json.loads(_core.snf_json([list(map(int, row)) for row in matrix]))


def solve_diagram(text):
    """Fill the unknown nodes of a six-term diagram given in the text format."""
    return json.loads(_core.solve_diagram_json(text))


def transition(identity_chart=False, grid=64, winding_samples=1024, emit=0):
    return json.loads(_core.transition_json(identity_chart, grid, winding_samples, emit))


def chern(problem):
    """Character report for a problem given as a dict or as JSON text."""
    text = problem if isinstance(problem, str) else json.dumps(problem)
    return json.loads(_core.chern_json(text))


def sphere_report(quad=(32, 64, 64), normalization=1.0, index_map_surjective=False, vanishing_trace=False):
    L, M, F = quad
    return json.loads(
        _core.sphere_report_json(L, M, F, normalization, index_map_surjective, vanishing_trace)
    )
