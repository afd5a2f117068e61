"""Affine-line curves avoiding the strange boundary: the universal
parameterization, its certificates, and implicitization.

Every such curve of contact degree d that meets the strange point with
multiplicity m (necessarily m = d mod p) is given by three polynomials

    x0(t) = M(t) V(t)^p,  x1(t) = M(t) W(t)^p,
    x2(t) = M(t) root_form(V, W) - 1,

where M is monic of degree m with the strange-point hit parameters as
roots, and V, W have degree at most (d - m)/p.  The free data is the
tuple (shifts of M, coefficients of V, coefficients of W); the
projective coefficients of the image are the p-th powers of the
(V, W)-coefficients.  The image meets the boundary only at the marked
point at infinity: the boundary equation pulls back to the constant 1.

In intermediate weighted coordinates the curve is the (p+1)-tuple
u_i = M V^(p-i) W^i, which satisfies the toric relations
u_i u_j = u_{i'} u_{j'} whenever i + j = i' + j'.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .boundary import Boundary
from .errors import (
    BadCongruence,
    ConstantMap,
    IdentityFailure,
    NotEnoughNodes,
    PointOnBoundary,
    ZeroScale,
)
from .field import FieldElement
from .multipoly import MultiPoly, RingUniPoly, sylvester_resultant
from .unipoly import UniPoly, gcd, lagrange_interpolate


def admissible_mults(p: int, d: int) -> list[int]:
    """Multiplicities compatible with contact degree d: m = d mod p, 0 <= m <= d."""
    return list(range(d % p, d + 1, p))


@dataclass(frozen=True)
class CurveParams:
    """Free parameters of one curve: strange-point shifts and V/W coefficients."""

    boundary: Boundary
    degree: int
    mult: int
    shifts: tuple
    v_coeffs: tuple
    w_coeffs: tuple

    def __post_init__(self):
        p = self.boundary.field.p
        if self.degree < 1:
            raise ValueError("contact degree must be positive")
        if not 0 <= self.mult <= self.degree:
            raise ValueError("multiplicity outside [0, degree]")
        if (self.degree - self.mult) % p:
            raise BadCongruence(
                f"multiplicity {self.mult} incompatible with degree {self.degree} mod {p}")
        if len(self.shifts) != self.mult:
            raise ValueError("need one shift per strange-point hit")
        want = (self.degree - self.mult) // p + 1
        if len(self.v_coeffs) != want or len(self.w_coeffs) != want:
            raise ValueError(f"V and W need exactly {want} coefficients")

    @classmethod
    def sample(cls, boundary: Boundary, degree: int, mult: int,
               rng: random.Random) -> "CurveParams":
        field = boundary.field
        n = (degree - mult) // field.p + 1
        return cls(boundary, degree, mult,
                   tuple(field.sample(rng) for _ in range(mult)),
                   tuple(field.sample(rng) for _ in range(n)),
                   tuple(field.sample(rng) for _ in range(n)))


@dataclass(frozen=True)
class ParamTriple:
    m: UniPoly
    v: UniPoly
    w: UniPoly


@dataclass(frozen=True)
class ZCoords:
    u: tuple


@dataclass(frozen=True)
class XCoords:
    x0: UniPoly
    x1: UniPoly
    x2: UniPoly

    def components(self):
        return (self.x0, self.x1, self.x2)

    @property
    def realized_degree(self) -> int:
        return max((c.degree or 0) for c in self.components())


@dataclass(frozen=True)
class BuiltCurve:
    params: CurveParams
    triple: ParamTriple
    z: ZCoords
    x: XCoords
    realized_degree: int
    degenerate: bool


def build_curve(params: CurveParams) -> BuiltCurve:
    """Realize the parameterization and assert its structural identities.

    The toric relations are checked exhaustively (every product pair with
    the same index sum is compared against the canonical pair), and the
    three plane coordinates are checked to have no common root, so the map
    is defined on the whole affine line.  A realized degree below the
    nominal one is reported as a flag, not an error: the parameter space
    is an affine space and includes those degenerations.
    """
    boundary = params.boundary
    field = boundary.field
    p = field.p
    m_poly = UniPoly.from_linear_factors(field, params.shifts)
    v = UniPoly.from_elements(field, params.v_coeffs)
    w = UniPoly.from_elements(field, params.w_coeffs)
    triple = ParamTriple(m_poly, v, w)

    v_pows = [UniPoly.one(field)]
    w_pows = [UniPoly.one(field)]
    for _ in range(p):
        v_pows.append(v_pows[-1] * v)
        w_pows.append(w_pows[-1] * w)
    u = tuple(m_poly * v_pows[p - i] * w_pows[i] for i in range(p + 1))

    for s in range(2 * p + 1):
        lo, hi = max(0, s - p), min(p, s)
        ref = u[lo] * u[s - lo]
        for i in range(lo + 1, s // 2 + 1):
            if u[i] * u[s - i] != ref:
                raise IdentityFailure(f"toric relation failed at index sum {s}")

    x = XCoords(u[0], u[p], m_poly * boundary.root_form(v, w) - UniPoly.one(field))
    common = gcd(gcd(x.x0, x.x1), x.x2)
    if common.degree != 0:
        raise IdentityFailure("coordinates share a root; map undefined somewhere")

    realized = x.realized_degree
    return BuiltCurve(params, triple, ZCoords(u), x, realized,
                      realized < params.degree)


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContactCertificate:
    contact_order: int
    realized_degree: int


def contact_check(boundary: Boundary, x: XCoords) -> ContactCertificate:
    """The boundary equation must pull back to the constant 1.

    That constant certifies that the curve meets the boundary only at the
    marked point at infinity, with total contact p * realized degree."""
    pb = boundary.equation.pullback(list(x.components()))
    if pb != UniPoly.one(boundary.field):
        raise IdentityFailure("boundary pullback is not 1",
                              residual=pb - UniPoly.one(boundary.field))
    return ContactCertificate(boundary.field.p * x.realized_degree, x.realized_degree)


@dataclass(frozen=True)
class StrangePointMultiplicity:
    multiplicity: int
    directions: tuple
    ordinary: bool
    undefined_direction: bool


def multiplicity_at_strange_point(built: BuiltCurve) -> StrangePointMultiplicity:
    """Branch data over the strange point.

    Each root -a of M sends the parameter to (0,0,1); the branch tangent
    direction there is (V(-a)^p : W(-a)^p).  The point is ordinary when
    the shifts are pairwise distinct, every direction is defined, and the
    directions are pairwise distinct projectively."""
    params = built.params
    field = params.boundary.field
    p = field.p
    dirs = []
    for a in params.shifts:
        t0 = -a
        dirs.append((built.triple.v(t0) ** p, built.triple.w(t0) ** p))
    undefined = any(dv.is_zero() and dw.is_zero() for dv, dw in dirs)
    distinct_shifts = len(set(a.coords for a in params.shifts)) == params.mult
    distinct_dirs = True
    for i in range(len(dirs)):
        for j in range(i + 1, len(dirs)):
            if (dirs[i][0] * dirs[j][1] - dirs[j][0] * dirs[i][1]).is_zero():
                distinct_dirs = False
    return StrangePointMultiplicity(
        params.mult, tuple(dirs),
        distinct_shifts and not undefined and distinct_dirs, undefined)


def stationary_factor(boundary: Boundary, triple: ParamTriple) -> UniPoly:
    """M' + M^2 * (root_form(V, W))': vanishes exactly where the
    parameterization is stationary (no tangent line, i.e. at cusps)."""
    m, v, w = triple.m, triple.v, triple.w
    return m.derivative() + m * m * boundary.root_form(v, w).derivative()


@dataclass(frozen=True)
class TangentFactorization:
    cusp_factor: UniPoly


def tangent_determinant_check(built: BuiltCurve) -> TangentFactorization:
    """The tangent-line determinant factors as
    (M' + M^2 (root form)') * (W^p x0 - V^p x1).

    Expanding det[(x0,x1,x2); (x0(t),x1(t),x2(t)); (x0'(t),x1'(t),x2'(t))]
    along the first row gives three scalar minors in t; the factorization
    is equivalent to the three exact identities asserted here.  The x2
    minor vanishing means every tangent line passes through (0,0,1)."""
    boundary = built.params.boundary
    x0, x1, x2 = built.x.components()
    d0, d1, d2 = x0.derivative(), x1.derivative(), x2.derivative()
    k_factor = stationary_factor(boundary, built.triple)
    wp = built.triple.w.pth_power()
    vp = built.triple.v.pth_power()
    checks = (
        (x1 * d2 - x2 * d1, k_factor * wp, "x0 minor"),
        (x0 * d2 - x2 * d0, k_factor * vp, "x1 minor"),
        (x0 * d1 - x1 * d0, UniPoly.zero(boundary.field), "x2 minor"),
    )
    for got, want, label in checks:
        if got != want:
            raise IdentityFailure(f"tangent determinant mismatch in {label}",
                                  residual=got - want)
    return TangentFactorization(k_factor)


@dataclass(frozen=True)
class StrangenessReport:
    ok: bool
    checked: int
    skipped: int
    failures: tuple


def strangeness_check(built: BuiltCurve, limit: int | None = None) -> StrangenessReport:
    """At every sampled smooth base-field point, the tangent line has no
    x2 coefficient, hence contains the strange point.

    Points with vanishing cusp factor (no tangent line) or mapping to the
    strange point itself are skipped.  The scan covers the whole base
    field unless a limit is given."""
    field = built.params.boundary.field
    pts = field.all_points_array(limit)
    x0, x1, x2 = built.x.components()
    d0, d1, d2 = x0.derivative(), x1.derivative(), x2.derivative()
    a_vals = (x1 * d2 - x2 * d1).eval_many(pts)
    b_vals = ((x0 * d2 - x2 * d0)).eval_many(pts)
    c_vals = (x0 * d1 - x1 * d0).eval_many(pts)
    k_vals = stationary_factor(built.params.boundary, built.triple).eval_many(pts)
    x0_vals = x0.eval_many(pts)
    x1_vals = x1.eval_many(pts)
    v_vals = built.triple.v.eval_many(pts)
    w_vals = built.triple.w.eval_many(pts)
    p = field.p
    checked = skipped = 0
    failures = []
    for i in range(len(pts)):
        if not k_vals[i].any():
            skipped += 1
            continue
        if not x0_vals[i].any() and not x1_vals[i].any():
            skipped += 1  # image is the strange point
            continue
        a = field.element(tuple(a_vals[i]))
        b = field.element(tuple(b_vals[i]))
        c = field.element(tuple(c_vals[i]))
        vp = field.element(tuple(v_vals[i])) ** p
        wp = field.element(tuple(w_vals[i])) ** p
        if not c.is_zero() or not (a * vp - b * wp).is_zero():
            failures.append(i)
        checked += 1
    return StrangenessReport(not failures, checked, skipped, tuple(failures))


def reparameterize(params: CurveParams, lam: FieldElement,
                   shift: FieldElement) -> CurveParams:
    """Close the parameter set under t -> lam*t + shift.

    The new shifts are (a + shift)/lam and V, W are composed and rescaled
    by the unique p-th root of lam^m, which keeps M monic and preserves
    the coordinates exactly: x_i'(t) = x_i(lam*t + shift).  That contract
    is asserted before returning."""
    if lam.is_zero():
        raise ZeroScale("reparameterization scale must be nonzero")
    field = params.boundary.field
    lam_inv = lam.inverse()
    beta = (lam**params.mult).pth_root()
    new_shifts = tuple((a + shift) * lam_inv for a in params.shifts)
    n = (params.degree - params.mult) // field.p + 1
    v = UniPoly.from_elements(field, params.v_coeffs).compose_affine(lam, shift).scale(beta)
    w = UniPoly.from_elements(field, params.w_coeffs).compose_affine(lam, shift).scale(beta)
    out = CurveParams(params.boundary, params.degree, params.mult, new_shifts,
                      tuple(v[j] for j in range(n)), tuple(w[j] for j in range(n)))
    old_x = build_curve(params).x
    new_x = build_curve(out).x
    for xi_new, xi_old in zip(new_x.components(), old_x.components()):
        if xi_new != xi_old.compose_affine(lam, shift):
            raise IdentityFailure("reparameterized coordinates disagree")
    return out


def factors_through_frobenius(x: XCoords) -> bool:
    """True iff all three coordinates live in k[t^p], i.e. the map is a
    p-th power composed with another parameterization."""
    p = x.x0.field.p
    return all(e % p == 0 for c in x.components() for e in c.support())


@dataclass(frozen=True)
class LiftedPoint:
    v: FieldElement
    w: FieldElement
    scale: FieldElement


def lift_interior_point(boundary: Boundary, point) -> LiftedPoint:
    """Lift an interior projective point through the two coordinate covers.

    With D the boundary value at the point, lam = (1/D)^(1/p); then
    v = (lam x0)^(1/p), w = (lam x1)^(1/p) reproduce the point exactly:
    (v^p : w^p : root_form(v,w) - 1) = lam * (x0, x1, x2) coordinatewise,
    by uniqueness of p-th roots."""
    field = boundary.field
    point = tuple(field.element(c) for c in point)
    if len(point) != 3 or all(c.is_zero() for c in point):
        raise ValueError("expected a nonzero projective triple")
    d_val = boundary.equation(point)
    if d_val.is_zero():
        raise PointOnBoundary(f"point {tuple(int(c) for c in point)} lies on the boundary")
    lam = d_val.inverse().pth_root()
    v = (lam * point[0]).pth_root()
    w = (lam * point[1]).pth_root()
    if boundary.root_form(v, w) - field.one != lam * point[2]:
        raise IdentityFailure("lift round-trip failed")
    return LiftedPoint(v, w, lam)


@dataclass(frozen=True)
class InterpolationResult:
    params: CurveParams
    built: BuiltCurve
    nodes: tuple
    lifts: tuple
    points: tuple


def curve_through_points(boundary: Boundary, points, rng: random.Random,
                         max_tries: int = 32) -> InterpolationResult:
    """A multiplicity-zero curve through the given interior points.

    Duplicated projective points count once.  Each point is lifted, the
    lifts are interpolated at distinct random parameter nodes, and the
    resulting curve is verified to pass through every input point (in the
    exact scaled form) and to satisfy the contact certificate.  A single
    input point is padded with one free random node so that the data has
    degree at least 1; degenerate node draws are retried."""
    field = boundary.field
    p = field.p
    unique = []
    seen = set()
    for pt in points:
        pt = tuple(field.element(c) for c in pt)
        lead = next((i for i, c in enumerate(pt) if not c.is_zero()), None)
        if lead is None:
            raise ValueError("zero triple is not a projective point")
        inv = pt[lead].inverse()
        key = tuple(field.to_int(c * inv) for c in pt)
        if key not in seen:
            seen.add(key)
            unique.append(pt)
    if not unique:
        raise ValueError("need at least one point")
    lifts = [lift_interior_point(boundary, pt) for pt in unique]
    n = len(unique)
    n_nodes = max(n, 2)

    for _ in range(max_tries):
        nodes = field.sample_distinct(n_nodes, rng)
        v_vals = [lf.v for lf in lifts]
        w_vals = [lf.w for lf in lifts]
        while len(v_vals) < n_nodes:  # free node for the n = 1 case
            v_vals.append(field.sample(rng))
            w_vals.append(field.sample(rng))
        v = lagrange_interpolate(field, nodes, v_vals)
        w = lagrange_interpolate(field, nodes, w_vals)
        deg = max(v.degree or 0, w.degree or 0)
        if deg < 1:
            continue
        params = CurveParams(boundary, p * deg, 0, (),
                             tuple(v[j] for j in range(deg + 1)),
                             tuple(w[j] for j in range(deg + 1)))
        built = build_curve(params)
        ok = True
        for node, lf, pt in zip(nodes, lifts, unique):
            want = tuple(lf.scale * c for c in pt)
            got = tuple(xi(node) for xi in built.x.components())
            if got != want:
                ok = False
                break
        if not ok:
            continue
        contact_check(boundary, built.x)
        return InterpolationResult(params, built, tuple(nodes), tuple(lifts),
                                   tuple(unique))
    raise NotEnoughNodes(f"no nondegenerate node choice found in {max_tries} tries")


def implicitize(x: XCoords) -> MultiPoly:
    """Implicit equation of the image by resultant elimination.

    Choosing the coordinate of maximal degree as pivot, the two pencils
    x_pivot(t) X_j - x_j(t) X_pivot share a root in t exactly on the image
    closure, so their resultant vanishes there.  The result may carry
    extraneous factors; consumers compare by exact division.  The
    vanishing of the pullback is asserted before returning."""
    field = x.x0.field
    degs = [c.degree or 0 for c in x.components()]
    if max(degs) == 0:
        raise ConstantMap("cannot implicitize a constant parameterization")
    pivot = max(range(3), key=lambda i: degs[i])
    j, k = [i for i in range(3) if i != pivot]
    comps = list(x.components())

    def pencil(other):
        rows = []
        for r in range(degs[pivot] + 1):
            rows.append(MultiPoly.monomial(field, _unit(3, other), comps[pivot][r])
                        - MultiPoly.monomial(field, _unit(3, pivot), comps[other][r]))
        return RingUniPoly(field, 3, rows)

    res = sylvester_resultant(pencil(j), pencil(k))
    if not res.pullback(comps).is_zero():
        raise IdentityFailure("implicit equation does not vanish on the curve")
    return res


def _unit(arity: int, i: int) -> tuple:
    e = [0] * arity
    e[i] = 1
    return tuple(e)
