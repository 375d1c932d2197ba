"""Exact computations with generalized Verma modules induced from sl(n+1) modules to sl(n+2)."""

from .analysis import (
    SimplicityReport,
    build_A,
    build_Delta,
    build_P,
    build_Pprime,
    build_Theta,
    build_Upsilon,
    classify,
    cross_check,
    det,
    det_closed_form,
    is_singular,
    null_vector,
    search_singular,
    singular_vector,
    verify_lemma7,
)
from .errors import (
    BadDegree,
    ConfigError,
    ConstraintViolated,
    DimensionMismatch,
    GVMError,
    OutOfSubalgebra,
    SymbolicUndecidable,
    ZeroUnit,
)
from .freemod import ModuleParams, act_e, act_v, is_simple_v
from .gvm import GVMElement, act, act_gen, degree, homogeneous_components, inject, monomial
from .liealg import E, H, LieElt, LieGen, basis, bracket, h_elt, parse_lie
from .poly import Poly, Q, parse_poly

__version__ = "0.1.0"
