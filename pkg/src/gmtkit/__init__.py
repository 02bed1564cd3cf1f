"""Flat norms on planar simplicial complexes, mesh regularity bounds and
integral area invariant signatures of polygons."""

from .errors import (
    DegenerateSimplexError,
    GMTError,
    InfeasibleStartError,
    NoSolutionError,
    NonSimplePolygonError,
    ParseError,
    SolverIntegrityError,
    StructureError,
)
from .complex import (
    Chain,
    OrientedComplex2,
    Point2,
    SimplexMeasures,
    boundary,
    mass,
    measure_complex,
    strip_complex,
)
from .flat_norm import (
    FlatNormDecomposition,
    FlatNormProblem,
    build_lp,
    lambda_breakpoints,
    lambda_sweep,
    solve_flat_norm,
)

__version__ = "0.1.0"
