"""Sparse multivariate polynomials over GF(p^k), and Sylvester resultants.

A ``MultiPoly`` maps exponent vectors (tuples of length ``arity``) to
nonzero ``FieldElement`` coefficients.  Where a term order is needed
(leading terms for single-divisor reduction, deterministic printing)
graded lexicographic order is used throughout.

``RingUniPoly`` is a univariate polynomial in an elimination variable
whose coefficients are ``MultiPoly`` values; ``sylvester_resultant``
eliminates that variable by fraction-free (Bareiss) determinant
evaluation, so all intermediate entries stay polynomial.
"""

from __future__ import annotations

from typing import Sequence

from .errors import ArityMismatch, DegenerateDegrees, MixedFields, ZeroPolynomial
from .field import Field, FieldElement
from .unipoly import UniPoly


def _grlex_key(exp):
    return (sum(exp), exp)


class MultiPoly:
    __slots__ = ("field", "arity", "terms")

    def __init__(self, field: Field, arity: int, terms: dict):
        self.field = field
        self.arity = arity
        self.terms = {e: c for e, c in terms.items() if not c.is_zero()}

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, field: Field, arity: int) -> "MultiPoly":
        return cls(field, arity, {})

    @classmethod
    def constant(cls, field: Field, arity: int, el: FieldElement) -> "MultiPoly":
        return cls(field, arity, {(0,) * arity: el})

    @classmethod
    def one(cls, field: Field, arity: int) -> "MultiPoly":
        return cls.constant(field, arity, field.one)

    @classmethod
    def variable(cls, field: Field, arity: int, i: int) -> "MultiPoly":
        e = [0] * arity
        e[i] = 1
        return cls(field, arity, {tuple(e): field.one})

    @classmethod
    def monomial(cls, field: Field, exponents: Sequence[int],
                 coeff: FieldElement) -> "MultiPoly":
        return cls(field, len(exponents), {tuple(exponents): coeff})

    # -- inspection -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def total_degree(self):
        """Maximal total degree, or None for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def leading(self) -> tuple[tuple, FieldElement]:
        """Leading (exponent, coefficient) in graded-lex order."""
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def coefficient(self, exponents: Sequence[int]) -> FieldElement:
        return self.terms.get(tuple(exponents), self.field.zero)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self.field == other.field and self.arity == other.arity
                and self.terms == other.terms)

    def __repr__(self):
        if not self.terms:
            return "MultiPoly(0)"
        parts = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            mono = "*".join(f"x{i}^{ei}" for i, ei in enumerate(e) if ei)
            parts.append(f"{self.terms[e].coords}{'*' + mono if mono else ''}")
        return "MultiPoly(" + " + ".join(parts) + ")"

    # -- ring operations --------------------------------------------------------

    def _check(self, other):
        if other.field != self.field:
            raise MixedFields("multivariate operands from different fields")
        if other.arity != self.arity:
            raise ArityMismatch(f"arity {self.arity} vs {other.arity}")

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            out[e] = c if s is None else s + c
        return MultiPoly(self.field, self.arity, out)

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            out[e] = -c if s is None else s - c
        return MultiPoly(self.field, self.arity, out)

    def __neg__(self):
        return MultiPoly(self.field, self.arity, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                s = out.get(e)
                out[e] = c if s is None else s + c
        return MultiPoly(self.field, self.arity, out)

    def __rmul__(self, other):
        if isinstance(other, FieldElement):
            return self.scale(other)
        return NotImplemented

    def scale(self, el: FieldElement) -> "MultiPoly":
        if el.is_zero():
            return MultiPoly.zero(self.field, self.arity)
        return MultiPoly(self.field, self.arity,
                         {e: c * el for e, c in self.terms.items()})

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = MultiPoly.one(self.field, self.arity)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- calculus ---------------------------------------------------------------

    def partial(self, i: int) -> "MultiPoly":
        """Formal partial derivative in variable i, factors reduced mod p."""
        out: dict = {}
        p = self.field.p
        for e, c in self.terms.items():
            if e[i] == 0 or e[i] % p == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = c * self.field.element(e[i])
        return MultiPoly(self.field, self.arity, out)

    # -- evaluation and substitution ----------------------------------------------

    def __call__(self, point: Sequence[FieldElement]) -> FieldElement:
        if len(point) != self.arity:
            raise ArityMismatch(f"point of length {len(point)} for arity {self.arity}")
        caches = [{0: self.field.one} for _ in range(self.arity)]

        def power(i, e):
            cache = caches[i]
            if e not in cache:
                m = max(cache)
                acc = cache[m]
                for j in range(m + 1, e + 1):
                    acc = acc * point[i]
                    cache[j] = acc
            return cache[e]

        total = self.field.zero
        for e, c in self.terms.items():
            v = c
            for i, ei in enumerate(e):
                if ei:
                    v = v * power(i, ei)
            total = total + v
        return total

    def pullback(self, subs: Sequence[UniPoly]) -> UniPoly:
        """Exact substitution of univariate polynomials for the variables."""
        if len(subs) != self.arity:
            raise ArityMismatch(f"{len(subs)} substitutions for arity {self.arity}")
        field = self.field
        caches = [[UniPoly.one(field), s] for s in subs]

        def power(i, e):
            cache = caches[i]
            while len(cache) <= e:
                cache.append(cache[-1] * cache[1])
            return cache[e]

        total = UniPoly.zero(field)
        for e, c in self.terms.items():
            prod = None
            for i, ei in enumerate(e):
                if ei:
                    prod = power(i, ei) if prod is None else prod * power(i, ei)
            term = UniPoly.constant(c) if prod is None else prod.scale(c)
            total = total + term
        return total

    def embed(self, arity: int, positions: Sequence[int]) -> "MultiPoly":
        """Reinterpret in a larger ring, variable i going to positions[i]."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * arity
            for i, ei in enumerate(e):
                ne[positions[i]] = ei
            out[tuple(ne)] = c
        return MultiPoly(self.field, arity, out)

    def dehomogenize(self, i: int) -> "MultiPoly":
        """Substitute 1 for variable i, dropping it from the ring."""
        out: dict = {}
        for e, c in self.terms.items():
            ne = e[:i] + e[i + 1:]
            s = out.get(ne)
            out[ne] = c if s is None else s + c
        return MultiPoly(self.field, self.arity - 1, out)

    # -- structure extraction ------------------------------------------------------

    def lowest_part(self) -> "MultiPoly":
        """Sum of the terms of minimal total degree (homogeneous by construction)."""
        if not self.terms:
            raise ZeroPolynomial("lowest part of the zero polynomial")
        d = min(sum(e) for e in self.terms)
        return MultiPoly(self.field, self.arity,
                         {e: c for e, c in self.terms.items() if sum(e) == d})

    def try_exact_div(self, g: "MultiPoly") -> "MultiPoly | None":
        """Quotient if g divides self exactly, else None.

        Single-divisor reduction under graded-lex: for an exact multiple the
        leading term of the remainder is always divisible by the leading
        term of g, so the first failure certifies non-divisibility.
        """
        if g.is_zero():
            raise ZeroPolynomial("division by the zero polynomial")
        self._check(g)
        lg, cg = g.leading()
        cg_inv = cg.inverse()
        rem = self
        q: dict = {}
        while rem.terms:
            lr, cr = rem.leading()
            me = tuple(a - b for a, b in zip(lr, lg))
            if any(x < 0 for x in me):
                return None
            coef = cr * cg_inv
            q[me] = coef
            rem = rem - MultiPoly.monomial(self.field, me, coef) * g
        return MultiPoly(self.field, self.arity, q)

    def exact_div(self, g: "MultiPoly") -> "MultiPoly":
        quotient = self.try_exact_div(g)
        if quotient is None:
            raise ValueError("division is not exact")
        return quotient


def divides(g: MultiPoly, f: MultiPoly) -> bool:
    """True iff f = q*g exactly."""
    return f.try_exact_div(g) is not None


def binary_form_distinct_roots(form: MultiPoly) -> int:
    """Distinct projective roots of a nonzero homogeneous binary form.

    Counted in the algebraic closure: finite-chart roots via the radical
    degree of form(t, 1), plus the point (1:0) when x1 divides the form.
    """
    if form.arity != 2:
        raise ArityMismatch("binary form expected")
    if form.is_zero():
        raise ZeroPolynomial("zero form")
    if not form.is_homogeneous():
        raise ValueError("binary form must be homogeneous")
    n = form.total_degree()
    field = form.field
    coeffs = [form.coefficient((i, n - i)) for i in range(n + 1)]
    f = UniPoly.from_elements(field, coeffs)
    count = f.distinct_root_count()
    if f.degree < n:
        count += 1  # root at (1:0)
    return count


class RingUniPoly:
    """Univariate polynomial in an elimination variable with MultiPoly coefficients."""

    __slots__ = ("field", "arity", "coeffs")

    def __init__(self, field: Field, arity: int, coeffs: Sequence[MultiPoly]):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.field = field
        self.arity = arity
        self.coeffs = coeffs

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else None

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return MultiPoly.zero(self.field, self.arity)


def sylvester_resultant(a: RingUniPoly, b: RingUniPoly) -> MultiPoly:
    """Resultant eliminating the shared variable of a and b.

    The Sylvester determinant is evaluated by fraction-free elimination
    with row pivoting; every division is exact in the coefficient ring.
    Conventions match Res(t - a, t - b) = a - b.
    """
    n, m = a.degree, b.degree
    if not n or not m:
        raise DegenerateDegrees("resultant needs both degrees >= 1")
    field, arity = a.field, a.arity
    if b.arity != arity:
        raise ArityMismatch("resultant operands in different rings")
    size = n + m
    zero = MultiPoly.zero(field, arity)
    mat = [[zero] * size for _ in range(size)]
    for r in range(m):
        for j in range(n + 1):
            mat[r][r + j] = a[n - j]
    for r in range(n):
        for j in range(m + 1):
            mat[m + r][r + j] = b[m - j]
    return _bareiss_det(mat, field, arity)


def _bareiss_det(mat, field: Field, arity: int) -> MultiPoly:
    n = len(mat)
    zero = MultiPoly.zero(field, arity)
    one = MultiPoly.one(field, arity)
    sign = 1
    prev = one
    for c in range(n - 1):
        pivot = next((r for r in range(c, n) if not mat[r][c].is_zero()), None)
        if pivot is None:
            return zero
        if pivot != c:
            mat[c], mat[pivot] = mat[pivot], mat[c]
            sign = -sign
        pcc = mat[c][c]
        for i in range(c + 1, n):
            mic = mat[i][c]
            for j in range(c + 1, n):
                num = pcc * mat[i][j] - mic * mat[c][j]
                mat[i][j] = num if prev is one else num.exact_div(prev)
            mat[i][c] = zero
        prev = pcc
    det = mat[n - 1][n - 1]
    return -det if sign < 0 else det
