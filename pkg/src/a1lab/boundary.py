"""The strange boundary curve of degree p and its derived data.

The boundary is the plane curve  sum_i c_i x0^i x1^(p-i) - x2^p = 0
(i = 1..p-1) with the end coefficients normalized to c_1 = c_{p-1} = 1.
Every tangent line at a smooth point of this curve passes through the
point (0,0,1), which makes the curve strange; it is smooth exactly in
characteristic 2 and has cusps for p >= 3.

Since the Frobenius is bijective, each coefficient has a unique p-th
root; the root form  sum_i c_i^(1/p) a^i b^(p-i)  satisfies
(root form)(a,b)^p = form(a^p, b^p), which is the engine behind every
exact identity downstream.

Both partial derivatives of the defining polynomial factor through one
binary form of degree p-2 (``cusp_form``): the singular points of the
boundary sit over its projective roots, so counting distinct roots of
``cusp_form`` counts boundary cusps.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import BadNormalization, IdentityFailure
from .field import Field, FieldElement
from .multipoly import MultiPoly, binary_form_distinct_roots
from .unipoly import UniPoly


def strange_point(field: Field) -> tuple[FieldElement, FieldElement, FieldElement]:
    """The common point (0, 0, 1) of all tangent lines."""
    return (field.zero, field.zero, field.one)


class Boundary:
    """Boundary data: coefficients, their p-th roots, and derived polynomials.

    Attributes:
        coeffs:       c_1 .. c_{p-1} of the degree-p binary form.
        root_coeffs:  the unique p-th roots of the coefficients.
        equation:     the defining polynomial in (x0, x1, x2).
        cusp_form:    the degree p-2 binary form whose projective roots
                      carry the singular points; for p = 2 it is the
                      nonzero constant 1 (smooth conic).
        mode:         "special", "random" or "explicit".
    """

    __slots__ = ("field", "coeffs", "root_coeffs", "equation", "cusp_form", "mode")

    def __init__(self, field: Field, coeffs, mode: str):
        p = field.p
        coeffs = tuple(field.element(c) for c in coeffs)
        if len(coeffs) != p - 1:
            raise BadNormalization(f"expected {p - 1} coefficients, got {len(coeffs)}")
        if coeffs[0] != field.one or coeffs[-1] != field.one:
            raise BadNormalization("end coefficients must both equal 1")
        self.field = field
        self.coeffs = coeffs
        self.root_coeffs = tuple(c.pth_root() for c in coeffs)
        self.mode = mode

        x0 = MultiPoly.variable(field, 3, 0)
        x1 = MultiPoly.variable(field, 3, 1)
        x2 = MultiPoly.variable(field, 3, 2)
        self.equation = self.form(x0, x1) - x2**p

        terms = {}
        for i in range(1, p):
            factor = field.element(i) * coeffs[i - 1]
            if factor:
                terms[(i - 1, p - 1 - i)] = factor
        self.cusp_form = MultiPoly(field, 2, terms)

        # build-time identities: both partials factor through cusp_form,
        # and the strange point is interior with value -1
        pder0 = self.equation.partial(0)
        pder1 = self.equation.partial(1)
        pf = self.cusp_form.embed(3, (0, 1))
        if pder0 != x1 * pf or pder1 != -(x0 * pf):
            raise IdentityFailure("boundary partials do not factor through the cusp form")
        if self.equation(strange_point(field)) != -field.one:
            raise IdentityFailure("boundary value at the strange point is not -1")

    # -- construction modes ----------------------------------------------------

    @classmethod
    def special(cls, field: Field) -> "Boundary":
        """All coefficients equal to 1."""
        return cls(field, (field.one,) * (field.p - 1), "special")

    @classmethod
    def random(cls, field: Field, rng: random.Random) -> "Boundary":
        """Ends fixed to 1, interior coefficients resampled uniformly.

        For p <= 3 there is no interior, so this coincides with ``special``."""
        p = field.p
        interior = [field.sample(rng) for _ in range(max(p - 3, 0))]
        return cls(field, (field.one, *interior, field.one) if p > 2 else (field.one,),
                   "random")

    @classmethod
    def explicit(cls, field: Field, coeffs) -> "Boundary":
        return cls(field, coeffs, "explicit")

    @classmethod
    def make(cls, field: Field, mode: str, rng: random.Random | None = None,
             coeffs=None) -> "Boundary":
        if mode == "special":
            return cls.special(field)
        if mode == "random":
            return cls.random(field, rng or random.Random(0))
        if mode == "explicit":
            return cls.explicit(field, coeffs)
        raise ValueError(f"unknown boundary mode {mode!r}")

    # -- the two binary forms, generic over any ring with +, *, scale ------------

    def form(self, a, b):
        """sum_i c_i a^i b^(p-i); works on field elements and polynomials."""
        return self._eval_form(self.coeffs, a, b)

    def root_form(self, a, b):
        """sum_i c_i^(1/p) a^i b^(p-i); its p-th power is form(a^p, b^p)."""
        return self._eval_form(self.root_coeffs, a, b)

    def _eval_form(self, cs, a, b):
        p = self.field.p
        apow = [None, a]
        bpow = [None, b]
        for _ in range(p - 2):
            apow.append(apow[-1] * a)
            bpow.append(bpow[-1] * b)
        total = None
        for i in range(1, p):
            term = cs[i - 1] * (apow[i] * bpow[p - i])
            total = term if total is None else total + term
        return total

    # -- serialization ----------------------------------------------------------

    def serialize(self) -> str:
        field = self.field
        interior = ",".join(str(field.to_int(c)) for c in self.coeffs[1:-1])
        return f"{field.p};{field.k};sigma={interior}"

    def __repr__(self):
        return f"Boundary(p={self.field.p}, mode={self.mode})"


@dataclass(frozen=True)
class FrobeniusFactorization:
    p: int
    k: int
    degree: int  # degree of the verified polynomial identity


def frobenius_factorization_check(boundary: Boundary) -> FrobeniusFactorization:
    """Verify  form(z0^p, z1^p) - (root_form(z0, z1) - z2)^p = z2^p  exactly.

    This is the identity that lets the boundary pull back to p times the
    weighted-plane boundary divisor; it holds for every coefficient choice,
    so a failure indicates an arithmetic bug."""
    field = boundary.field
    p = field.p
    z0 = MultiPoly.variable(field, 3, 0)
    z1 = MultiPoly.variable(field, 3, 1)
    z2 = MultiPoly.variable(field, 3, 2)
    lhs = boundary.form(z0**p, z1**p) - (boundary.root_form(z0, z1) - z2) ** p
    rhs = z2**p
    if lhs != rhs:
        raise IdentityFailure("Frobenius factorization identity failed",
                              residual=lhs - rhs)
    return FrobeniusFactorization(p, field.k, p * p)


@dataclass(frozen=True)
class BoundaryCuspCensus:
    form: MultiPoly
    count: int
    separable: bool


def boundary_cusp_census(boundary: Boundary) -> BoundaryCuspCensus:
    """Count distinct singular points of the boundary curve.

    The census counts distinct projective roots of ``cusp_form`` over the
    algebraic closure (its degree is exactly p-2 since the top coefficient
    is -1).  ``separable`` reports whether the generic count p-2 is
    achieved, so callers can resample degenerate coefficient choices."""
    count = binary_form_distinct_roots(boundary.cusp_form)
    return BoundaryCuspCensus(boundary.cusp_form, count,
                              count == boundary.field.p - 2)


@dataclass(frozen=True)
class RootFormDerivative:
    pencil_det: FieldElement  # determinant of the (v, w) coefficient matrix, p-th power
    derivative: UniPoly


def special_root_form_derivative_check(boundary: Boundary, v: UniPoly,
                                       w: UniPoly) -> RootFormDerivative:
    """For the all-ones boundary and linear v, w, the derivative of
    root_form(v, w) collapses to  -(v1*w0 - v0*w1) * (v - w)^(p-2).

    The scalar v1*w0 - v0*w1 is the p-th root of the determinant
    b1*c0 - b0*c1 built from the p-th powers b_j = v_j^p, c_j = w_j^p."""
    if any(c != boundary.field.one for c in boundary.coeffs):
        raise ValueError("derivative collapse requires the all-ones boundary")
    if (v.degree or 0) > 1 or (w.degree or 0) > 1:
        raise ValueError("v and w must be linear")
    field = boundary.field
    p = field.p
    det_root = v[1] * w[0] - v[0] * w[1]
    lhs = boundary.root_form(v, w).derivative()
    rhs = ((v - w) ** (p - 2)).scale(-det_root)
    if lhs != rhs:
        raise IdentityFailure("root-form derivative identity failed",
                              residual=lhs - rhs)
    return RootFormDerivative(det_root**p, lhs)
