"""Exact quantum-walk analysis on gcd-graphs over finite abelian groups."""

from .abelian import (
    CayleyGraph,
    ConnectionSet,
    Group,
    ResourceError,
    divisor_set,
    gcd_set,
    gcd_tuple,
    generates,
    normalize_divisor,
)
from .classify import (
    Certificate,
    Refusal,
    RefusalKind,
    certify_periodic,
    certify_pst,
    construct_pst,
    cube_component_set,
    cube_isomorphism,
    factorize,
    membership,
    parity_criterion,
    rule_out_pst,
)
from .cyclo import CycloField, CycloNum, cyclotomic_poly, field
from .spectra import Parity, eigenvalue, eigenvalue_parities, eigenvalues, spectrum
from .walk import (
    CubelikeGraph,
    PstVerdict,
    RationalPiTime,
    TransitionRow,
    classify_at,
    cubelike_half_pi,
    float_oracle,
    kronecker_row,
    transition_row,
    union_product_row,
)

__version__ = "0.1.0"
