"""Exact affine-line curve laboratory for strange plane curves in
characteristic p: finite fields, char-p polynomial arithmetic, the
strange boundary, the universal curve parameterization, the maximal
covering family with its cusp machinery, and a deterministic CLI."""

from .boundary import (
    Boundary,
    BoundaryCuspCensus,
    boundary_cusp_census,
    frobenius_factorization_check,
    special_root_form_derivative_check,
    strange_point,
)
from .curves import (
    BuiltCurve,
    CurveParams,
    ParamTriple,
    XCoords,
    ZCoords,
    admissible_mults,
    build_curve,
    contact_check,
    curve_through_points,
    factors_through_frobenius,
    implicitize,
    lift_interior_point,
    multiplicity_at_strange_point,
    reparameterize,
    stationary_factor,
    strangeness_check,
    tangent_determinant_check,
)
from .family import (
    CuspData,
    FamilySpec,
    FiberParams,
    census_row,
    classify_total_space_singularities,
    cusp_data,
    cusp_image_check,
    equation_pullback_check,
    expected_cusp_count,
    genus_delta_identity,
    gradient_check,
    sample_general_fiber,
    smoothness_at_cusps_check,
    special_boundary_cusp_check,
    tangent_cone_check,
)
from .field import Field, FieldElement
from .multipoly import (
    MultiPoly,
    RingUniPoly,
    binary_form_distinct_roots,
    divides,
    sylvester_resultant,
)
from .unipoly import UniPoly, gcd, lagrange_interpolate

__version__ = "0.1.0"
