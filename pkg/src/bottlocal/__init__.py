"""Exact torus localization for equivariant intersection numbers.

Integrals of polynomials in Chern classes over smooth complete varieties with
a torus action are computed from fixed-point data: each fixed component
contributes a rational function of the torus weights, and their sum is the
answer.  Everything is exact (integers and fractions).
"""

from .bundles import (
    EigenPart,
    EquivariantBundle,
    bundle_dual,
    bundle_sum,
    bundle_twist,
    determinant,
    line_power,
    sym_power,
    tensor,
    trivial_bundle,
    wedge_power,
)
from .chernspec import ChernSpec, ChernSpecError, UnknownBundle
from .chow import ChowClass, ChowModel, LocalClass
from .classes import (
    chern_character,
    eigen_chern,
    equivariant_chern_classes,
    euler_normal,
    invert_class,
    todd_class,
    total_equivariant_chern,
)
from .engine import (
    Contribution,
    IntegrationReport,
    ModeDisagreement,
    NotInRTError,
    bott_residue,
    contribution,
    euler_characteristic,
    integrate_component,
    integrate_degree,
    integrate_number,
    lift_check,
    run_mode,
    weyl_check,
)
from .planner import (
    CoordinateSubspace,
    DiagonalRep,
    certify_degrees,
    free_locus,
    orbit_closed,
    stabilizer_of_support,
    unstable_locus,
)
from .scalars import (
    Character,
    InadmissibleSpecialization,
    LocalizedScalar,
    NumericDomain,
    Specialization,
    SymbolicDomain,
    TorusPolynomial,
    draw_specialization,
    specialize,
)
from .space import FixedComponent, Space
from .zoo import (
    Fan,
    grassmannian,
    hirzebruch,
    moment_weights,
    product_fan,
    product_space,
    projective_fan,
    projective_space,
    standard_weights,
    toric_line_bundle,
    toric_space,
)

__version__ = "0.1.0"
