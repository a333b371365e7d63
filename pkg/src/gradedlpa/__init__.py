"""Exact graded invariants of Leavitt path algebras of finite graphs."""

from .graph import CoverWindow, Graph, GraphError, covering_window, hereditary_saturated_closure
from .graded_monoid import GradedK0, GradedMonoidElement, gequal, kgr0
from .kgraph import KGraphSpec, LimitVector, limit_equal
from .lpa import LeavittPathAlgebra, LpaElement, basis_count, parse_element
from .monoid import MonoidElement, Verdict, cancellation_counterexample, monoid_equal
from .orbit import RationalPath, module_act, parse_rational_path, simple_sweep, tail_equivalent
from .smash import SmashElement, WindowIsomorphism, graded_regular_witness

__version__ = "0.1.0"

__all__ = [
    "CoverWindow",
    "Graph",
    "GraphError",
    "covering_window",
    "hereditary_saturated_closure",
    "GradedK0",
    "GradedMonoidElement",
    "gequal",
    "kgr0",
    "KGraphSpec",
    "LimitVector",
    "limit_equal",
    "LeavittPathAlgebra",
    "LpaElement",
    "basis_count",
    "parse_element",
    "MonoidElement",
    "Verdict",
    "cancellation_counterexample",
    "monoid_equal",
    "RationalPath",
    "module_act",
    "parse_rational_path",
    "simple_sweep",
    "tail_equivalent",
    "SmashElement",
    "WindowIsomorphism",
    "graded_regular_witness",
]
