"""Exact statistics of Gaussian measures over Q_p."""

from .building import (
    BallGraph,
    LatticeClass,
    ball,
    canonicalize,
    degree,
    is_adjacent,
    is_equivalent,
    neighbors,
)
from .errors import LocalFieldError, ParseError
from .gaussian_stats import (
    GaussianDist,
    MatroidRep,
    SampleResult,
    ci_matroid,
    is_ci,
    log_likelihood,
    matroid_bases,
    matroid_rank,
    mle,
    sample,
    samples,
)
from .lattice_algebra import (
    Lattice,
    SvdDecomposition,
    contains,
    diagonal_lattice,
    dual,
    hnf,
    independence_lattice,
    intersect,
    is_orthogonal,
    is_orthonormal,
    lattice_sum,
    measure_log,
    orthonormalize,
    standard_lattice,
    svd,
)
from .tropicalization import (
    ConjectureReport,
    TropPoly,
    eval_trop,
    fit_tropical,
    is_supermodular,
    mc_tail,
    phi_exact,
    trop2d,
    verify_conjecture,
)
from .valued_field import FieldConfig, abs_val, digits, residue, valuation, vec_norm

__version__ = "0.1.0"
