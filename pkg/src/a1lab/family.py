"""The covering family of curves with multiplicity d - p at the strange point.

For contact degree d >= p the multiplicity drops from the cover value d
to m = d - p, and the image of every such curve is cut out by one
explicit equation.  With two linear pencils

    l0 = c0 x0 - b0 x1,   l1 = c1 x0 - b1 x1,
    det = b1 c0 - b0 c1   (the coefficient determinant),

and the last strange-point shift normalized to zero, the equation reads

    psi = l1^d - (-1)^d det^p * (boundary equation) * cone_form,

where cone_form = l0^m + sum_k e_k l0^(m-k) l1^k collects the m lines
through the strange point (e_k are elementary symmetric values in the
negated p-th powers of the fixed shifts).  Keeping b0, b1, c0, c1 as
variables gives a 7-variable family version whose gradient has the
closed form

    grad psi = (dpsi/dl1) grad l1
             - (-1)^d det^p [ cone_form * grad(boundary)
                              + (dcone/dl0) * boundary * grad l0 ],

exact because det^p is a p-th power and so has zero derivative in the
coefficient directions.  The cofactors dpsi/dl1 and dcone/dl0 drive the
total-space smoothness certificates.

Cusps of a fiber sit exactly at the roots of the stationary factor
M' + M^2 (root form)' of degree 2d - p - 2; its radical degree is the
cusp count.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .boundary import Boundary, strange_point
from .curves import BuiltCurve, CurveParams, build_curve, stationary_factor
from .errors import (
    CertificateFailure,
    ClassificationMismatch,
    ConeMismatch,
    GenericityExhausted,
    IdentityFailure,
)
from .field import FieldElement
from .multipoly import MultiPoly, binary_form_distinct_roots
from .unipoly import UniPoly, gcd

FAMILY_VARS = 7  # x0, x1, x2, b0, b1, c0, c1


def _elementary_symmetric(values) -> list:
    """e_1 .. e_n of the given field elements."""
    if not values:
        return []
    field = values[0].field
    e = [field.one] + [field.zero] * len(values)
    for i, v in enumerate(values):
        for k in range(i + 1, 0, -1):
            e[k] = e[k] + e[k - 1] * v
    return e[1:]


class FamilySpec:
    """The fixed data of one family: boundary, degree, and general shifts.

    The multiplicity is m = degree - p.  For m > 1 the fixed shifts
    a_1 .. a_{m-1} must be pairwise distinct, nonzero, and have nonzero
    first symmetric value e_1 (all needed by the singularity analysis);
    the m-th shift is always the normalization 0.
    """

    __slots__ = ("boundary", "degree", "mult", "shifts_fixed", "esym",
                 "_family_cache")

    def __init__(self, boundary: Boundary, degree: int, shifts_fixed=()):
        p = boundary.field.p
        if degree < p:
            raise ValueError(f"degree {degree} below characteristic {p}")
        mult = degree - p
        shifts_fixed = tuple(shifts_fixed)
        if len(shifts_fixed) != max(mult - 1, 0):
            raise ValueError(f"need {max(mult - 1, 0)} fixed shifts, got {len(shifts_fixed)}")
        if mult > 1:
            if len({a.coords for a in shifts_fixed}) != mult - 1:
                raise ValueError("fixed shifts must be pairwise distinct")
            if any(a.is_zero() for a in shifts_fixed):
                raise ValueError("fixed shifts must be nonzero (zero is reserved)")
        self.boundary = boundary
        self.degree = degree
        self.mult = mult
        self.shifts_fixed = shifts_fixed
        self.esym = tuple(_elementary_symmetric([-(a**p) for a in shifts_fixed]))
        if mult > 1 and self.esym[0].is_zero():
            raise ValueError("first symmetric value must be nonzero")
        self._family_cache = None

    @classmethod
    def sample(cls, boundary: Boundary, degree: int, rng: random.Random) -> "FamilySpec":
        """General fixed shifts: distinct, nonzero, nonzero shift sum."""
        field = boundary.field
        mult = degree - field.p
        if mult <= 1:
            return cls(boundary, degree)
        while True:
            shifts = field.sample_distinct(mult - 1, rng, nonzero=True)
            total = field.zero
            for a in shifts:
                total = total + a
            if mult == 2 or not total.is_zero():  # e_1 = -(sum a)^p
                return cls(boundary, degree, shifts)

    def shifts(self) -> tuple:
        """All m shifts, the reserved zero last."""
        if self.mult == 0:
            return ()
        return self.shifts_fixed + (self.boundary.field.zero,)

    def sign(self) -> FieldElement:
        return self.boundary.field.element(1 if self.degree % 2 == 0 else -1)

    # -- the 7-variable family --------------------------------------------------

    def family_pieces(self) -> dict:
        """Cached family polynomials in (x0, x1, x2, b0, b1, c0, c1)."""
        if self._family_cache is None:
            field = self.boundary.field
            var = lambda i: MultiPoly.variable(field, FAMILY_VARS, i)
            x0, x1 = var(0), var(1)
            b0, b1, c0, c1 = var(3), var(4), var(5), var(6)
            l0 = c0 * x0 - b0 * x1
            l1 = c1 * x0 - b1 * x1
            det = b1 * c0 - b0 * c1
            delta = self.boundary.equation.embed(FAMILY_VARS, (0, 1, 2))
            cone, cone_l0, eq_l1, psi = _equation_pieces(
                self, l0, l1, det**field.p, delta)
            self._family_cache = {
                "l0": l0, "l1": l1, "det_p": det**field.p, "delta": delta,
                "cone_form": cone, "cone_l0_partial": cone_l0,
                "eq_l1_partial": eq_l1, "equation": psi,
                "partials": tuple(psi.partial(i) for i in range(FAMILY_VARS)),
            }
        return self._family_cache

    def __repr__(self):
        return (f"FamilySpec(p={self.boundary.field.p}, d={self.degree}, "
                f"m={self.mult})")


def _equation_pieces(spec: FamilySpec, l0, l1, det_p, delta):
    """cone_form, its l0-derivative, the l1-derivative of the equation, and
    the equation itself, in whatever ring l0/l1/det_p/delta live in."""
    field = spec.boundary.field
    arity = l0.arity
    d, m = spec.degree, spec.mult
    sign = spec.sign()
    one = MultiPoly.one(field, arity)
    zero = MultiPoly.zero(field, arity)

    l0_pows = [one]
    l1_pows = [one]
    for _ in range(max(d, m)):
        l0_pows.append(l0_pows[-1] * l0)
        l1_pows.append(l1_pows[-1] * l1)

    cone = l0_pows[m]
    for k in range(1, m):
        cone = cone + (l0_pows[m - k] * l1_pows[k]).scale(spec.esym[k - 1])

    if m > 1:
        cone_l0 = l0_pows[m - 1].scale(field.element(m))
        for k in range(1, m):
            cone_l0 = cone_l0 + (l0_pows[m - k - 1] * l1_pows[k]).scale(
                field.element(m - k) * spec.esym[k - 1])
        corr = zero
        for k in range(1, m):
            corr = corr + (l0_pows[m - k] * l1_pows[k - 1]).scale(
                field.element(k) * spec.esym[k - 1])
        eq_l1 = l1_pows[d - 1].scale(field.element(d)) - (det_p * delta * corr).scale(sign)
    else:
        cone_l0 = MultiPoly.constant(field, arity, field.element(m))
        eq_l1 = l1_pows[d - 1].scale(field.element(d))

    psi = l1_pows[d] - (det_p * delta * cone).scale(sign)
    return cone, cone_l0, eq_l1, psi


class FiberParams:
    """One member of the family: the four coefficients (as p-th roots) and
    every polynomial derived from them in the plane ring (x0, x1, x2)."""

    __slots__ = ("spec", "v_coeffs", "w_coeffs", "b", "c", "coeff_det",
                 "l0", "l1", "cone_form", "cone_l0_partial", "eq_l1_partial",
                 "equation")

    def __init__(self, spec: FamilySpec, v_coeffs, w_coeffs):
        field = spec.boundary.field
        self.spec = spec
        self.v_coeffs = tuple(v_coeffs)
        self.w_coeffs = tuple(w_coeffs)
        if len(self.v_coeffs) != 2 or len(self.w_coeffs) != 2:
            raise ValueError("fiber data is two coefficients per pencil")
        self.b = tuple(x**field.p for x in self.v_coeffs)
        self.c = tuple(x**field.p for x in self.w_coeffs)
        self.coeff_det = self.b[1] * self.c[0] - self.b[0] * self.c[1]

        x0 = MultiPoly.variable(field, 3, 0)
        x1 = MultiPoly.variable(field, 3, 1)
        self.l0 = x0.scale(self.c[0]) - x1.scale(self.b[0])
        self.l1 = x0.scale(self.c[1]) - x1.scale(self.b[1])
        det_p = MultiPoly.constant(field, 3, self.coeff_det**field.p)
        (self.cone_form, self.cone_l0_partial,
         self.eq_l1_partial, self.equation) = _equation_pieces(
            spec, self.l0, self.l1, det_p, spec.boundary.equation)

    @classmethod
    def sample(cls, spec: FamilySpec, rng: random.Random) -> "FiberParams":
        field = spec.boundary.field
        return cls(spec, (field.sample(rng), field.sample(rng)),
                   (field.sample(rng), field.sample(rng)))

    def curve_params(self) -> CurveParams:
        return CurveParams(self.spec.boundary, self.spec.degree, self.spec.mult,
                           self.spec.shifts(), self.v_coeffs, self.w_coeffs)

    def __repr__(self):
        return f"FiberParams({self.spec!r}, det={int(self.coeff_det)})"


# ---------------------------------------------------------------------------
# identity certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PullbackCertificate:
    degree: int
    mult: int
    det_is_zero: bool


def equation_pullback_check(fiber: FiberParams,
                            built: BuiltCurve | None = None) -> PullbackCertificate:
    """The parameterized curve satisfies its implicit equation, exactly.

    Besides the vanishing of the equation pullback, the two intermediate
    identities behind it are asserted:
      (l0 - a^p l1) pulls back to det * M * (t + a)^p for every shift a,
      (l1 pullback)^d equals (-1)^d det^d M^d.
    Both hold for every fiber, including det = 0 degenerations."""
    spec = fiber.spec
    field = spec.boundary.field
    built = built or build_curve(fiber.curve_params())
    subs = list(built.x.components())
    m_poly = built.triple.m

    pb = fiber.equation.pullback(subs)
    if not pb.is_zero():
        raise IdentityFailure("equation pullback is nonzero", residual=pb)

    for a in spec.shifts():
        lin = fiber.l0 - fiber.l1.scale(a**field.p)
        got = lin.pullback(subs)
        want = (m_poly * UniPoly.from_linear_factors(field, [a]).pth_power()).scale(
            fiber.coeff_det)
        if got != want:
            raise IdentityFailure(f"line pullback failed at shift {int(a)}",
                                  residual=got - want)

    got = fiber.l1.pullback(subs) ** spec.degree
    want = (m_poly ** spec.degree).scale(spec.sign() * fiber.coeff_det ** spec.degree)
    if got != want:
        raise IdentityFailure("pencil power pullback failed", residual=got - want)
    return PullbackCertificate(spec.degree, spec.mult, fiber.coeff_det.is_zero())


@dataclass(frozen=True)
class GradientCertificate:
    degree: int
    mult: int


def gradient_check(spec: FamilySpec) -> GradientCertificate:
    """Direct 7-variable differentiation agrees with the closed form.

    grad l1 = (c1, -b1, 0, 0, -x1, 0, x0), grad l0 = (c0, -b0, 0, -x1, 0, x0, 0),
    and the boundary gradient only has the two plane entries.  The x2
    entry is identically zero: the equation contains x2 only through a
    p-th power."""
    field = spec.boundary.field
    pieces = spec.family_pieces()
    var = lambda i: MultiPoly.variable(field, FAMILY_VARS, i)
    x0, x1 = var(0), var(1)
    b0, b1, c0, c1 = var(3), var(4), var(5), var(6)
    zero = MultiPoly.zero(field, FAMILY_VARS)
    grad_l1 = (c1, -b1, zero, zero, -x1, zero, x0)
    grad_l0 = (c0, -b0, zero, -x1, zero, x0, zero)
    delta = pieces["delta"]
    grad_delta = (delta.partial(0), delta.partial(1), zero, zero, zero, zero, zero)
    sign = spec.sign()
    det_p = pieces["det_p"]
    for i in range(FAMILY_VARS):
        closed = (pieces["eq_l1_partial"] * grad_l1[i]
                  - (det_p * pieces["cone_form"] * grad_delta[i]).scale(sign)
                  - (det_p * pieces["cone_l0_partial"] * delta * grad_l0[i]).scale(sign))
        direct = pieces["partials"][i]
        if direct != closed:
            raise IdentityFailure(f"gradient entry {i} disagrees with closed form",
                                  residual=direct - closed)
    return GradientCertificate(spec.degree, spec.mult)


# ---------------------------------------------------------------------------
# singular locus of the total space
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SingularityReport:
    boundary_singular_points: tuple
    fiber_hits: tuple           # those boundary singular points with l1 = 0
    strange_point_on_fiber: bool
    strange_point_singular: bool | None
    det_is_zero: bool
    pencil_witnesses: int       # det = 0 witnesses checked on l1 = 0


def classify_total_space_singularities(fiber: FiberParams) -> SingularityReport:
    """Check the three singular classes of the family total space.

    (1) points over boundary singularities that lie on the fiber (those
        with l1 = 0): the full 7-gradient must vanish;
    (2) det = 0 fibers: every point with l1 = 0 is singular;
    (3) the strange point: singular iff m > 1; for m = 1 (and det != 0) the
        gradient is the explicit nonzero vector (-1)^d det^p (c0, -b0, 0, ...).
    """
    spec = fiber.spec
    field = spec.boundary.field
    partials = spec.family_pieces()["partials"]
    tail = (fiber.b[0], fiber.b[1], fiber.c[0], fiber.c[1])

    def grad(pt3):
        pt = tuple(pt3) + tail
        return tuple(g(pt) for g in partials)

    def grad_zero(pt3):
        return all(v.is_zero() for v in grad(pt3))

    sing_points = []
    roots = []
    if field.p >= 3:
        coeffs = [spec.boundary.cusp_form.coefficient((i, field.p - 2 - i))
                  for i in range(field.p - 1)]
        pform = UniPoly.from_elements(field, coeffs)
        roots = pform.roots_in_field()
    for r in roots:
        x2 = spec.boundary.form(r, field.one).pth_root()
        sing_points.append((r, field.one, x2))

    hits = []
    for s in sing_points:
        if fiber.l1(s).is_zero():
            hits.append(s)
            if not fiber.equation(s).is_zero():
                raise ClassificationMismatch("boundary singularity with l1 = 0 off the fiber")
            if not grad_zero(s):
                raise ClassificationMismatch(
                    "gradient nonzero over a boundary singularity on the fiber")

    det_zero = fiber.coeff_det.is_zero()
    witnesses = 0
    if det_zero:
        b1, c1 = fiber.b[1], fiber.c[1]
        if b1.is_zero() and c1.is_zero():
            candidates = [(field.one, field.zero), (field.zero, field.one)]
        else:
            candidates = [(b1, c1)]
        for x0v, x1v in candidates:
            for x2v in (field.zero, field.one):
                pt = (x0v, x1v, x2v)
                if all(v.is_zero() for v in pt) or not fiber.l1(pt).is_zero():
                    continue
                if not fiber.equation(pt).is_zero():
                    raise ClassificationMismatch("det = 0 fiber is not the pencil power")
                if not grad_zero(pt):
                    raise ClassificationMismatch("det = 0 witness has nonzero gradient")
                witnesses += 1

    sp = strange_point(field)
    m = spec.mult
    on_fiber = fiber.equation(sp).is_zero()
    if (m >= 1) != on_fiber and not det_zero:
        raise ClassificationMismatch("strange point membership disagrees with multiplicity")
    sp_singular = None
    if m > 1:
        if not grad_zero(sp):
            raise ClassificationMismatch("strange point not singular despite m > 1")
        sp_singular = True
    elif m == 1 and not det_zero:
        g = grad(sp)
        scale = spec.sign() * fiber.coeff_det**field.p
        want = (scale * fiber.c[0], -(scale * fiber.b[0]), field.zero,
                field.zero, field.zero, field.zero, field.zero)
        if g != want or all(v.is_zero() for v in g):
            raise ClassificationMismatch("strange point gradient pattern wrong for m = 1")
        sp_singular = False
    return SingularityReport(tuple(sing_points), tuple(hits), on_fiber,
                             sp_singular, det_zero, witnesses)


# ---------------------------------------------------------------------------
# cusps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CuspData:
    kpoly: UniPoly              # the stationary factor M' + M^2 (root form)'
    radical: UniPoly | None
    count: int | None
    expected_degree: int
    nondegenerate: bool
    det_is_zero: bool
    meets_strange_branch: bool


def cusp_data(fiber: FiberParams) -> CuspData:
    """Stationary factor of the fiber and its distinct-root count.

    The factor has degree 2d - p - 2 exactly when the leading data is
    nondegenerate; its radical degree counts the cusps in the closure.
    A common root with M (the cusp parameter colliding with a
    strange-point branch) is flagged for resampling."""
    spec = fiber.spec
    field = spec.boundary.field
    built_triple = _fiber_triple(fiber)
    k_poly = stationary_factor(spec.boundary, built_triple)
    expected = 2 * spec.degree - field.p - 2
    det_zero = fiber.coeff_det.is_zero()
    if k_poly.is_zero():
        return CuspData(k_poly, None, None, expected, False, det_zero, False)
    rad = k_poly.radical()
    meets = gcd(rad, built_triple.m).degree != 0
    return CuspData(k_poly, rad, rad.degree, expected,
                    k_poly.degree == expected, det_zero, meets)


def _fiber_triple(fiber: FiberParams):
    from .curves import ParamTriple
    field = fiber.spec.boundary.field
    return ParamTriple(
        UniPoly.from_linear_factors(field, fiber.spec.shifts()),
        UniPoly.from_elements(field, fiber.v_coeffs),
        UniPoly.from_elements(field, fiber.w_coeffs))


@dataclass(frozen=True)
class SpecialCuspCertificate:
    closed_form: UniPoly
    square_root: UniPoly | None  # p = 2 only


def special_boundary_cusp_check(fiber: FiberParams) -> SpecialCuspCertificate:
    """Over the all-ones boundary the stationary factor collapses to
    M' - det^(1/p) M^2 (V - W)^(p-2); for p = 2 it is moreover the exact
    square of (M')^(1/2) - det^(1/4) M."""
    spec = fiber.spec
    field = spec.boundary.field
    if any(c != field.one for c in spec.boundary.coeffs):
        raise ValueError("special cusp collapse needs the all-ones boundary")
    p = field.p
    triple = _fiber_triple(fiber)
    m_poly, v, w = triple.m, triple.v, triple.w
    k_poly = stationary_factor(spec.boundary, triple)
    det_root = fiber.coeff_det.pth_root()
    closed = m_poly.derivative() - (m_poly * m_poly * (v - w) ** (p - 2)).scale(det_root)
    if k_poly != closed:
        raise IdentityFailure("special stationary factor mismatch",
                              residual=k_poly - closed)
    inner = None
    if p == 2:
        inner = m_poly.derivative().pth_root() - m_poly.scale(det_root.pth_root())
        if k_poly != inner * inner:
            raise IdentityFailure("p = 2 stationary factor is not the expected square")
    return SpecialCuspCertificate(closed, inner)


@dataclass(frozen=True)
class CuspImageCertificate:
    count: int
    partial_quotient_degrees: tuple
    wronskian_quotient_degrees: tuple


def cusp_image_check(fiber: FiberParams,
                     built: BuiltCurve | None = None) -> CuspImageCertificate:
    """Image points of the stationary parameters are cusps of the fiber.

    With C the radical of the stationary factor: C divides the pullback of
    all three equation partials (the image points are singular on the
    fiber curve) and all three Wronskians x_i' x_j - x_j' x_i (the
    parameterization is stationary there, the unibranch signature), and
    the equation pullback vanishes."""
    if fiber.coeff_det.is_zero():
        raise CertificateFailure("precondition failed: coefficient determinant is zero")
    cd = cusp_data(fiber)
    if cd.meets_strange_branch:
        raise CertificateFailure("precondition failed: cusp parameter on a strange-point branch")
    built = built or build_curve(fiber.curve_params())
    subs = list(built.x.components())
    rad = cd.radical
    pq = []
    for i in range(3):
        pb = fiber.equation.partial(i).pullback(subs)
        q, r = pb.divrem(rad)
        if not r.is_zero():
            raise CertificateFailure(f"(i) equation partial {i} not divisible by the radical")
        pq.append(q.degree)
    wq = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        xi, xj = subs[i], subs[j]
        wr = xi.derivative() * xj - xj.derivative() * xi
        q, r = wr.divrem(rad)
        if not r.is_zero():
            raise CertificateFailure(f"(ii) wronskian ({i},{j}) not divisible by the radical")
        wq.append(q.degree)
    if not fiber.equation.pullback(subs).is_zero():
        raise CertificateFailure("equation pullback nonzero")
    return CuspImageCertificate(cd.count, tuple(pq), tuple(wq))


@dataclass(frozen=True)
class SmoothnessCertificate:
    branch: str                     # "cofactor-gcd" (m >= 1) or "boundary-lines" (m = 0)
    cusp_count: int
    boundary_singular_count: int | None


def smoothness_at_cusps_check(fiber: FiberParams,
                              built: BuiltCurve | None = None) -> SmoothnessCertificate:
    """Total-space smoothness along the fiber's cusps.

    m >= 1: a singular point of the total space away from the strange
    point must kill both gradient cofactors, so gcd(C, gcd(D, E)) = 1
    certifies that no cusp is such a point (D, E are the pullbacks of the
    two cofactors along the parameterization).

    m = 0: the opposite holds; every cusp lies over a singular boundary
    line, certified by C dividing the pullback of the boundary cusp form."""
    if fiber.coeff_det.is_zero():
        raise CertificateFailure("precondition failed: coefficient determinant is zero")
    spec = fiber.spec
    cd = cusp_data(fiber)
    built = built or build_curve(fiber.curve_params())
    subs = list(built.x.components())
    rad = cd.radical
    if spec.mult >= 1:
        d_pull = fiber.eq_l1_partial.pullback(subs)
        e_pull = fiber.cone_l0_partial.pullback(subs)
        g = gcd(rad, gcd(d_pull, e_pull))
        if g.degree != 0:
            raise CertificateFailure(
                f"cusp locus meets both cofactors: gcd degree {g.degree}")
        return SmoothnessCertificate("cofactor-gcd", cd.count, None)
    p_pull = spec.boundary.cusp_form.pullback(subs[:2])
    if not (p_pull % rad).is_zero():
        raise CertificateFailure("cusp radical does not divide the boundary-line pullback")
    return SmoothnessCertificate(
        "boundary-lines", cd.count,
        binary_form_distinct_roots(spec.boundary.cusp_form))


# ---------------------------------------------------------------------------
# tangent cone at the strange point
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TangentConeReport:
    multiplicity: int
    cone: MultiPoly
    ordinary: bool
    strange_point_on_curve: bool


def tangent_cone_check(fiber: FiberParams) -> TangentConeReport:
    """Lowest part of the dehomogenized equation at the strange point.

    It must equal (-1)^d det^p * cone_form in the chart x2 = 1, of total
    degree exactly m; the point is ordinary when the cone is squarefree
    as a binary form (automatic for distinct nonzero shifts).  For m = 0
    the lowest part is a nonzero constant: the curve misses the point."""
    if fiber.coeff_det.is_zero():
        raise CertificateFailure("precondition failed: coefficient determinant is zero")
    spec = fiber.spec
    field = spec.boundary.field
    m = spec.mult
    chart = fiber.equation.dehomogenize(2)
    low = chart.lowest_part()
    x0 = MultiPoly.variable(field, 2, 0)
    x1 = MultiPoly.variable(field, 2, 1)
    l0 = x0.scale(fiber.c[0]) - x1.scale(fiber.b[0])
    l1 = x0.scale(fiber.c[1]) - x1.scale(fiber.b[1])
    cone = l0**m
    for k in range(1, m):
        cone = cone + (l0 ** (m - k) * l1**k).scale(spec.esym[k - 1])
    cone = cone.scale(spec.sign() * fiber.coeff_det**field.p)
    if low.total_degree() != m:
        raise ConeMismatch(f"lowest part has degree {low.total_degree()}, expected {m}")
    if low != cone:
        raise ConeMismatch("tangent cone disagrees with the closed form")
    ordinary = True if m == 0 else binary_form_distinct_roots(cone) == m
    return TangentConeReport(m, cone, ordinary, m > 0)


# ---------------------------------------------------------------------------
# integer bookkeeping and sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DeltaIdentity:
    p: int
    degree: int
    genus_drop: int


def genus_delta_identity(p: int, d: int) -> DeltaIdentity:
    """(d-1)(d-2)/2 - m(m-1)/2 = (p-1)(2d-p-2)/2 for m = d - p.

    The left side is the delta-invariant budget left for cusps once the
    ordinary strange point of multiplicity m is accounted for; both sides
    are exact integers."""
    if d < p:
        raise ValueError("degree below characteristic")
    m = d - p
    lhs = (d - 1) * (d - 2) // 2 - m * (m - 1) // 2
    rhs_num = (p - 1) * (2 * d - p - 2)
    if rhs_num % 2 or lhs != rhs_num // 2:
        raise IdentityFailure(f"delta identity failed at p={p}, d={d}")
    return DeltaIdentity(p, d, lhs)


def sample_general_fiber(spec: FamilySpec, rng: random.Random,
                         max_tries: int = 64) -> FiberParams:
    """Rejection-sample a fiber in general position.

    Conditions: nonzero coefficient determinant; the marked point at
    infinity (on the line l1 = 0, hence over the direction (b1 : c1))
    avoids the boundary singularities; the stationary factor has exact
    degree 2d - p - 2; its radical is coprime to M.  Exhaustion reports
    which condition kept failing, which signals a too-small field."""
    stats = {"det_zero": 0, "infinity_singular": 0, "degree_short": 0,
             "branch_collision": 0}
    for _ in range(max_tries):
        fiber = FiberParams.sample(spec, rng)
        if fiber.coeff_det.is_zero():
            stats["det_zero"] += 1
            continue
        if spec.boundary.cusp_form((fiber.b[1], fiber.c[1])).is_zero():
            stats["infinity_singular"] += 1
            continue
        cd = cusp_data(fiber)
        if not cd.nondegenerate:
            stats["degree_short"] += 1
            continue
        if cd.meets_strange_branch:
            stats["branch_collision"] += 1
            continue
        return fiber
    raise GenericityExhausted(
        f"no general fiber in {max_tries} tries: {stats}", stats)


def expected_cusp_count(p: int, d: int, sigma_mode: str) -> int:
    """Generic cusp count of a general fiber.

    p = 2: d - 2 (the stationary factor is an exact square).
    p > 2, m >= 1: the full bound 2d - p - 2.
    p > 2, m = 0: p - 2 for a general boundary; the all-ones boundary is
    degenerate here for p > 3 (its root-form derivative is a scaled power
    of V - W), leaving a single cusp."""
    m = d - p
    if p == 2:
        return d - 2
    if m == 0:
        if sigma_mode == "special" and p > 3:
            return 1
        return p - 2
    return 2 * d - p - 2


def census_row(boundary: Boundary, d: int, seed: int,
               rng: random.Random) -> dict:
    """One cusp-census row; identity-class certificates are asserted."""
    field = boundary.field
    spec = FamilySpec.sample(boundary, d, rng)
    row = {
        "p": field.p, "k": field.k, "d": d, "m": spec.mult, "seed": seed,
        "pi_nonzero": False, "cusp_count": None,
        "expected": expected_cusp_count(field.p, d, boundary.mode),
        "tangent_cone_ordinary": None, "total_space_smooth_at_cusps": None,
        "genericity_exhausted": False,
    }
    try:
        fiber = sample_general_fiber(spec, rng)
    except GenericityExhausted:
        row["genericity_exhausted"] = True
        return row
    row["pi_nonzero"] = True
    cd = cusp_data(fiber)
    row["cusp_count"] = cd.count
    built = build_curve(fiber.curve_params())
    equation_pullback_check(fiber, built)
    cusp_image_check(fiber, built)
    row["tangent_cone_ordinary"] = tangent_cone_check(fiber).ordinary
    if spec.mult >= 1:
        try:
            smoothness_at_cusps_check(fiber, built)
            row["total_space_smooth_at_cusps"] = True
        except CertificateFailure:
            row["total_space_smooth_at_cusps"] = False
    else:
        smoothness_at_cusps_check(fiber, built)  # cusps sit over boundary lines
        row["total_space_smooth_at_cusps"] = False
    return row
