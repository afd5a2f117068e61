"""Dense univariate polynomials over GF(p^k).

Coefficients are stored as an (n, k) int64 array, one power-basis
coordinate vector per row, index = exponent.  The representation is
canonical: the top row is nonzero, and the zero polynomial is the empty
array, whose degree is the sentinel ``None`` (never -1).

Characteristic-p specifics live here: the formal derivative reduces the
integer factors mod p, ``pth_power``/``pth_root`` implement f -> f^p and
its inverse on p-supported polynomials, and ``radical`` computes the
squarefree part with the wild (derivative-zero) branch handled by
coefficientwise p-th roots, which are exact over a finite field.  The
degree of the radical counts distinct roots in the algebraic closure.
"""

from __future__ import annotations

import hashlib
import random
from typing import Sequence

import numpy as np

from .errors import DivisionByZero, FieldTooLarge, ZeroPolynomial, ZeroScale
from .field import Field, FieldElement

SCAN_BOUND = 2**16


def _canon(arr: np.ndarray) -> np.ndarray:
    n = len(arr)
    while n > 0 and not arr[n - 1].any():
        n -= 1
    return arr[:n]


class UniPoly:
    __slots__ = ("field", "c")

    def __init__(self, field: Field, coords: np.ndarray):
        self.field = field
        self.c = _canon(np.asarray(coords, dtype=np.int64).reshape(-1, field.k))

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, field: Field) -> "UniPoly":
        return cls(field, np.zeros((0, field.k), np.int64))

    @classmethod
    def one(cls, field: Field) -> "UniPoly":
        return cls.constant(field.one)

    @classmethod
    def constant(cls, el: FieldElement) -> "UniPoly":
        return cls(el.field, np.array([el.coords], np.int64))

    @classmethod
    def x(cls, field: Field) -> "UniPoly":
        return cls.monomial(field, 1)

    @classmethod
    def monomial(cls, field: Field, e: int, coeff: FieldElement | None = None) -> "UniPoly":
        arr = np.zeros((e + 1, field.k), np.int64)
        arr[e] = (coeff or field.one).coords
        return cls(field, arr)

    @classmethod
    def from_elements(cls, field: Field, coeffs: Sequence[FieldElement]) -> "UniPoly":
        if not coeffs:
            return cls.zero(field)
        return cls(field, np.array([c.coords for c in coeffs], np.int64))

    @classmethod
    def from_linear_factors(cls, field: Field, shifts: Sequence[FieldElement]) -> "UniPoly":
        """The monic product of (t + s) over the given shifts."""
        out = cls.one(field)
        for s in shifts:
            out = out * cls.from_elements(field, [s, field.one])
        return out

    # -- inspection -----------------------------------------------------------

    @property
    def degree(self):
        """Degree, or None for the zero polynomial."""
        return len(self.c) - 1 if len(self.c) else None

    def is_zero(self) -> bool:
        return len(self.c) == 0

    def __bool__(self):
        return len(self.c) != 0

    def __getitem__(self, i: int) -> FieldElement:
        if 0 <= i < len(self.c):
            return FieldElement(self.field, tuple(int(v) for v in self.c[i]))
        return self.field.zero

    def coefficients(self) -> list[FieldElement]:
        return [self[i] for i in range(len(self.c))]

    def lead(self) -> FieldElement:
        if self.is_zero():
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self[len(self.c) - 1]

    def support(self) -> list[int]:
        return [i for i in range(len(self.c)) if self.c[i].any()]

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return (self.field == other.field and self.c.shape == other.c.shape
                and bool((self.c == other.c).all()))

    def __repr__(self):
        if self.is_zero():
            return "UniPoly(0)"
        parts = [f"{tuple(int(v) for v in self.c[i])}*t^{i}"
                 for i in range(len(self.c)) if self.c[i].any()]
        return "UniPoly(" + " + ".join(parts) + f")@GF({self.field.p}^{self.field.k})"

    # -- ring operations --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            return UniPoly.constant(self.field.element(other))
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if not isinstance(other, UniPoly):
            return NotImplemented
        n = max(len(self.c), len(other.c))
        out = np.zeros((n, self.field.k), np.int64)
        out[: len(self.c)] += self.c
        out[: len(other.c)] += other.c
        return UniPoly(self.field, out % self.field.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if not isinstance(other, UniPoly):
            return NotImplemented
        n = max(len(self.c), len(other.c))
        out = np.zeros((n, self.field.k), np.int64)
        out[: len(self.c)] += self.c
        out[: len(other.c)] -= other.c
        return UniPoly(self.field, out % self.field.p)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return UniPoly(self.field, (-self.c) % self.field.p)

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return self.scale(other)
        if not isinstance(other, UniPoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return UniPoly.zero(self.field)
        return UniPoly(self.field, self.field.convmul_arrays(self.c, other.c))

    def __rmul__(self, other):
        if isinstance(other, FieldElement):
            return self.scale(other)
        return NotImplemented

    def scale(self, el: FieldElement) -> "UniPoly":
        if self.is_zero() or el.is_zero():
            return UniPoly.zero(self.field)
        mat = self.field.scalar_matrix(el.coords)
        return UniPoly(self.field, (self.c @ mat.T) % self.field.p)

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = UniPoly.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def times_x(self, e: int = 1) -> "UniPoly":
        if self.is_zero():
            return self
        out = np.zeros((len(self.c) + e, self.field.k), np.int64)
        out[e:] = self.c
        return UniPoly(self.field, out)

    # -- euclidean structure -------------------------------------------------

    def divrem(self, g: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        """Exact Euclidean division: self = q*g + r with deg r < deg g."""
        if g.is_zero():
            raise DivisionByZero("division by the zero polynomial")
        f = self
        if f.is_zero() or len(f.c) < len(g.c):
            return UniPoly.zero(self.field), f
        field = self.field
        dg = len(g.c) - 1
        inv_lead = g.lead().inverse()
        inv_mat = field.scalar_matrix(inv_lead.coords)
        rem = f.c.copy()
        q = np.zeros((len(f.c) - dg, field.k), np.int64)
        gl = g.c[:dg]
        for i in range(len(f.c) - dg - 1, -1, -1):
            top = rem[i + dg]
            if not top.any():
                continue
            coef = (inv_mat @ top) % field.p
            q[i] = coef
            if dg:
                mat = field.scalar_matrix(tuple(int(v) for v in coef))
                rem[i: i + dg] = (rem[i: i + dg] - gl @ mat.T) % field.p
            rem[i + dg] = 0
        return UniPoly(field, q), UniPoly(field, rem[:dg] if dg else rem[:0])

    def __floordiv__(self, g):
        return self.divrem(g)[0]

    def __mod__(self, g):
        return self.divrem(g)[1]

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        lead = self.lead()
        if lead == self.field.one:
            return self
        return self.scale(lead.inverse())

    # -- calculus and char-p maps ----------------------------------------------

    def derivative(self) -> "UniPoly":
        """Formal derivative; integer factors are reduced mod p."""
        if len(self.c) <= 1:
            return UniPoly.zero(self.field)
        mult = (np.arange(1, len(self.c), dtype=np.int64) % self.field.p)[:, None]
        return UniPoly(self.field, (self.c[1:] * mult) % self.field.p)

    def pth_power(self) -> "UniPoly":
        """f(t)^p, computed as the Frobenius of coefficients on spread exponents."""
        if self.is_zero():
            return self
        p = self.field.p
        out = np.zeros(((len(self.c) - 1) * p + 1, self.field.k), np.int64)
        out[::p] = self.field.frobenius_array(self.c)
        return UniPoly(self.field, out)

    def pth_root(self) -> "UniPoly":
        """Inverse of ``pth_power``; requires all exponents divisible by p."""
        p = self.field.p
        for i in self.support():
            if i % p:
                raise ValueError("polynomial is not a p-th power (bad support)")
        return UniPoly(self.field, self.field.proot_array(self.c[::p]))

    def radical(self) -> "UniPoly":
        """Squarefree part: the monic product of the distinct irreducible factors.

        If the derivative vanishes, f = g(t^p) and the radical of f equals
        the radical of g, whose coefficients are the p-th roots of f's.
        Otherwise f/gcd(f, f') is the radical of the factors with
        multiplicity prime to p, and the stripped residual is a p-th power
        handled by recursion.
        """
        if self.is_zero():
            raise ZeroPolynomial("radical of the zero polynomial")
        f = self.monic()
        if f.degree == 0:
            return f
        d = f.derivative()
        if d.is_zero():
            return UniPoly(self.field, self.field.proot_array(f.c[:: self.field.p])).radical()
        tame = f // gcd(f, d)
        residual = f
        g = gcd(residual, tame)
        while g.degree and g.degree > 0:
            residual = residual // g
            g = gcd(residual, tame)
        if residual.degree == 0:
            return tame
        return tame * residual.radical()

    def distinct_root_count(self) -> int:
        """Number of distinct roots in the algebraic closure (= deg radical)."""
        return self.radical().degree

    # -- evaluation, composition, roots ------------------------------------------

    def __call__(self, x: FieldElement) -> FieldElement:
        field = self.field
        acc = field.zero.coords
        xc = x.coords
        for i in range(len(self.c) - 1, -1, -1):
            acc = field._add(field._mul(acc, xc), tuple(int(v) for v in self.c[i]))
        return FieldElement(field, acc)

    def eval_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorized Horner evaluation at an (N, k) coordinate array."""
        field = self.field
        acc = np.zeros_like(points)
        for i in range(len(self.c) - 1, -1, -1):
            acc = field.mulvec_arrays(acc, points)
            acc = (acc + self.c[i]) % field.p
        return acc

    def compose_affine(self, lam: FieldElement, shift: FieldElement) -> "UniPoly":
        """f(lam*t + shift) with lam nonzero, so the degree is preserved."""
        if lam.is_zero():
            raise ZeroScale("affine composition needs a nonzero scale")
        field = self.field
        if self.is_zero():
            return self
        ml = field.scalar_matrix(lam.coords)
        mc = field.scalar_matrix(shift.coords)
        res = np.zeros((0, field.k), np.int64)
        for i in range(len(self.c) - 1, -1, -1):
            out = np.zeros((len(res) + 1, field.k), np.int64)
            out[1:] += res @ ml.T
            out[: len(res)] += res @ mc.T
            out[0] += self.c[i]
            res = _canon(out % field.p)
        return UniPoly(field, res)

    def roots_in_field(self, allow_modular: bool = True) -> list[FieldElement]:
        """All roots in the base field, each listed once.

        Fields with at most 2^16 elements are scanned exhaustively with
        vectorized evaluation.  Beyond that, the split part gcd(f, t^q - t)
        is computed by modular exponentiation and its (distinct, linear)
        factors are separated by randomized gcd splitting, seeded from the
        coefficients so the result is deterministic.
        """
        if self.is_zero():
            raise ZeroPolynomial("every point is a root of the zero polynomial")
        field = self.field
        if self.degree == 0:
            return []
        if field.order <= SCAN_BOUND:
            pts = field.all_points_array()
            vals = self.eval_many(pts)
            hits = np.nonzero(~vals.any(axis=1))[0]
            return [field.from_int(int(i)) for i in hits]
        if not allow_modular:
            raise FieldTooLarge(
                f"field order {field.order} above scan bound and modular path disabled")
        f = self.monic()
        x = UniPoly.x(field)
        h = _powmod(x, field.order, f)
        split = gcd(f, h - x)
        seed = int.from_bytes(
            hashlib.sha256(self.c.tobytes() + field.header().encode()).digest()[:8], "big")
        rng = random.Random(seed)
        roots = []
        _split_linear(split, rng, roots)
        roots.sort(key=lambda e: int(e))
        return roots


def gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    """Monic greatest common divisor; gcd(f, 0) = monic(f)."""
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def _powmod(base: UniPoly, e: int, mod: UniPoly) -> UniPoly:
    result = UniPoly.one(base.field)
    base = base % mod
    while e:
        if e & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        e >>= 1
    return result


def _split_linear(g: UniPoly, rng: random.Random, out: list) -> None:
    """Collect the roots of a squarefree product of linear factors."""
    field = g.field
    if g.degree is None or g.degree == 0:
        return
    if g.degree == 1:
        out.append(-(g[0] / g[1]))
        return
    x = UniPoly.x(field)
    while True:
        if field.p == 2:
            # trace-map splitting for even order
            c = field.sample_nonzero(rng)
            term = (UniPoly.constant(c) * x) % g
            tr = UniPoly.zero(field)
            for _ in range(field.k):
                tr = tr + term
                term = (term * term) % g
            d = gcd(g, tr)
        else:
            delta = field.sample(rng)
            h = _powmod(x + UniPoly.constant(delta), (field.order - 1) // 2, g)
            d = gcd(g, h - UniPoly.one(field))
        if d.degree and 0 < d.degree < g.degree:
            _split_linear(d, rng, out)
            _split_linear(g // d, rng, out)
            return


def lagrange_interpolate(field: Field, nodes: Sequence[FieldElement],
                         values: Sequence[FieldElement]) -> UniPoly:
    """Unique polynomial of degree < n through (nodes[i], values[i])."""
    full = UniPoly.from_linear_factors(field, [-t for t in nodes])
    result = UniPoly.zero(field)
    for ti, vi in zip(nodes, values):
        basis = full // UniPoly.from_elements(field, [-ti, field.one])
        result = result + basis.scale(vi / basis(ti))
    return result
