"""Stable lattices over a discrete valuation ring, maximal vertices and extension graphs."""

from .arith import RingContext, make_ring
from .config import JobSpec, parse_spec
from .errors import (
    CapExceeded,
    DiameterError,
    LatmaxError,
    NonUnitError,
    PrecisionError,
    SpecError,
    VerdictFailure,
)
from .lattice import Representation, StableLattice, VertexKey, load_representation, stabilize

__all__ = [
    "CapExceeded",
    "DiameterError",
    "JobSpec",
    "LatmaxError",
    "NonUnitError",
    "PrecisionError",
    "Representation",
    "RingContext",
    "SpecError",
    "StableLattice",
    "VerdictFailure",
    "VertexKey",
    "load_representation",
    "make_ring",
    "parse_spec",
    "stabilize",
]
