"""Exact arithmetic in GF(p^k).

A ``Field`` fixes a prime characteristic p, an extension degree k and a
monic irreducible modulus of degree k over Z/p, found deterministically
from a seed.  Elements are coordinate vectors of length k in the power
basis of the modulus; every operation is exact.

Two representations coexist:

- ``FieldElement``: an immutable scalar wrapper with operator overloading,
  used by the sparse multivariate layer and everywhere readability wins.
- raw ``numpy`` int64 arrays of shape (n, k), one row per coordinate
  vector, used by the dense univariate layer.  ``Field`` exposes the
  vectorized kernels (convolution product, modulus reduction, Frobenius)
  that operate on those arrays.

The Frobenius map x -> x^p is a field automorphism, so every element has
a unique p-th root, computed as x^(p^(k-1)).  Both maps are Z/p linear
and are applied through precomputed k x k matrices.

Serialization: an element with coordinates (c_0, ..., c_{k-1}) is encoded
as the integer N = sum c_i * p^i (little-endian base-p digits).
"""

from __future__ import annotations

import random
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DivisionByZero,
    MixedFields,
    NotEnoughElements,
    NotPrime,
    Overflow,
)

MAX_PRIME = 101
MAX_ORDER = 2**63
MAX_EXT = 32


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality check (fine for n <= 101)."""
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# Bootstrap helpers on GF(p)[x], little-endian int lists.  Only used while
# searching for an irreducible modulus, before any Field object exists.
# ---------------------------------------------------------------------------

def _gfp_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _gfp_mulmod(f, g, mod, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    # reduce by the monic modulus
    dm = len(mod) - 1
    for i in range(len(out) - 1, dm - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(dm):
                out[i - dm + j] = (out[i - dm + j] - c * mod[j]) % p
    return _gfp_trim(out)


def _gfp_powmod(f, e, mod, p):
    result = [1]
    base = list(f)
    while e:
        if e & 1:
            result = _gfp_mulmod(result, base, mod, p)
        base = _gfp_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _gfp_gcd(f, g, p):
    f, g = list(f), list(g)
    while g:
        # remainder of f by g
        inv = pow(g[-1], p - 2, p)
        while len(f) >= len(g) and f:
            c = (f[-1] * inv) % p
            shift = len(f) - len(g)
            for j in range(len(g)):
                f[shift + j] = (f[shift + j] - c * g[j]) % p
            _gfp_trim(f)
        f, g = g, f
    return f


def _is_irreducible(f, p):
    """Standard test: x^(p^k) = x mod f, and x^(p^(k/l)) - x coprime to f
    for every prime l dividing k."""
    k = len(f) - 1
    x = [0, 1]
    xq = _gfp_powmod(x, p**k, f, p)
    if _gfp_trim(list(xq)) != [0, 1]:
        return False
    n, ell, primes = k, 2, []
    while ell * ell <= n:
        if n % ell == 0:
            primes.append(ell)
            while n % ell == 0:
                n //= ell
        ell += 1
    if n > 1:
        primes.append(n)
    for ell in primes:
        h = _gfp_powmod(x, p ** (k // ell), f, p)
        h = list(h) + [0] * (2 - len(h))
        h[1] = (h[1] - 1) % p
        g = _gfp_gcd(list(f), _gfp_trim(h), p)
        if len(g) - 1 != 0:
            return False
    return True


def _find_modulus(p, k, seed):
    """First irreducible monic degree-k polynomial from the seeded stream.

    For k = 1 the canonical choice is x itself (quotient is Z/p)."""
    if k == 1:
        return (0, 1)
    rng = random.Random(seed)
    while True:
        f = [rng.randrange(p) for _ in range(k)] + [1]
        if _is_irreducible(f, p):
            return tuple(f)


class Field:
    """GF(p^k) with a deterministic seeded modulus.

    Construction checks primality of p and the supported range
    (p <= 101, k <= 32, p^k <= 2^63).  The same (p, k, seed) always
    yields the identical modulus.
    """

    __slots__ = (
        "p", "k", "seed", "order", "modulus",
        "zero", "one",
        "_red", "_red_rows", "_frob_mat", "_proot_mat",
    )

    def __init__(self, p: int, k: int = 1, seed: int = 0):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if p > MAX_PRIME:
            raise Overflow(f"characteristic {p} above supported bound {MAX_PRIME}")
        if not 1 <= k <= MAX_EXT:
            raise Overflow(f"extension degree {k} outside [1, {MAX_EXT}]")
        if p**k > MAX_ORDER:
            raise Overflow(f"order {p}^{k} exceeds 2^63")
        self.p = p
        self.k = k
        self.seed = seed
        self.order = p**k
        self.modulus = _find_modulus(p, k, seed)

        # rows i = coordinates of x^(k+i) mod modulus, i = 0 .. k-2
        rows = []
        if k >= 2:
            cur = [(-c) % p for c in self.modulus[:k]]  # x^k
            rows.append(list(cur))
            for _ in range(k - 2):
                lead = cur[-1]
                cur = [0] + cur[:-1]
                if lead:
                    cur = [(cur[j] + lead * rows[0][j]) % p for j in range(k)]
                rows.append(list(cur))
        self._red = np.array(rows, dtype=np.int64).reshape(len(rows), k)
        self._red_rows = tuple(tuple(r) for r in rows)

        # Frobenius as a Z/p-linear map: column j = (x^j)^p mod modulus
        cols = []
        for j in range(k):
            xjp = _gfp_powmod([0] * j + [1], p, list(self.modulus), p)
            cols.append(list(xjp) + [0] * (k - len(xjp)))
        frob = np.array(cols, dtype=np.int64).T % p
        self._frob_mat = frob
        proot = np.eye(k, dtype=np.int64)
        for _ in range(k - 1):
            proot = (frob @ proot) % p
        self._proot_mat = proot

        self.zero = FieldElement(self, (0,) * k)
        self.one = FieldElement(self, (1,) + (0,) * (k - 1))

    # -- scalar kernels ----------------------------------------------------

    def _add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def _sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def _neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def _mul(self, a, b):
        p, k = self.p, self.k
        if k == 1:
            return ((a[0] * b[0]) % p,)
        t = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    t[i + j] += ai * bj
        out = t[:k]
        for i, row in enumerate(self._red_rows):
            c = t[k + i]
            if c:
                for j in range(k):
                    out[j] += c * row[j]
        return tuple(x % p for x in out)

    def _inv(self, a):
        """Extended Euclid in GF(p)[x] against the modulus."""
        if not any(a):
            raise DivisionByZero("inversion of zero")
        p = self.p
        if self.k == 1:
            return (pow(a[0], p - 2, p),)
        r0, r1 = list(self.modulus), _gfp_trim(list(a))
        t0, t1 = [], [1]
        while len(r1) - 1 > 0:
            inv = pow(r1[-1], p - 2, p)
            q = [0] * (len(r0) - len(r1) + 1)
            r = list(r0)
            while len(r) >= len(r1) and r:
                c = (r[-1] * inv) % p
                shift = len(r) - len(r1)
                q[shift] = c
                for j in range(len(r1)):
                    r[shift + j] = (r[shift + j] - c * r1[j]) % p
                _gfp_trim(r)
            # t0 - q*t1
            qt = [0] * (len(q) + len(t1) - 1) if t1 else []
            for i, qc in enumerate(q):
                if qc:
                    for j, tc in enumerate(t1):
                        qt[i + j] = (qt[i + j] + qc * tc) % p
            nt = [0] * max(len(t0), len(qt))
            for i, c in enumerate(t0):
                nt[i] = c
            for i, c in enumerate(qt):
                nt[i] = (nt[i] - c) % p
            r0, r1, t0, t1 = r1, r, t1, _gfp_trim(nt)
        c = pow(r1[0], p - 2, p)
        out = [(x * c) % p for x in t1]
        return tuple(out + [0] * (self.k - len(out)))

    def _pow(self, a, n: int):
        if n < 0:
            return self._pow(self._inv(a), -n)
        result = self.one.coords
        base = a
        while n:
            if n & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            n >>= 1
        return result

    def _apply(self, mat, a):
        p, k = self.p, self.k
        return tuple(int(sum(int(mat[i, j]) * a[j] for j in range(k))) % p for i in range(k))

    # -- vectorized kernels on (n, k) int64 arrays ---------------------------

    def reduce_array(self, arr: np.ndarray) -> np.ndarray:
        """Reduce (n, 2k-1) raw products to (n, k) canonical coordinates."""
        k = self.k
        if arr.shape[1] == k:
            return arr % self.p
        low = arr[:, :k] + arr[:, k:] @ self._red
        return low % self.p

    def convmul_arrays(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Coefficientwise-exact product of two coefficient arrays.

        Rows are polynomial coefficients (one coordinate vector per row);
        the k-axis is packed with stride 2k-1 so that a single integer
        convolution computes the full bivariate product without carries.
        """
        n, m, k = len(A), len(B), self.k
        if k == 1:
            return (np.convolve(A[:, 0], B[:, 0]) % self.p)[:, None]
        K = 2 * k - 1
        fa = np.zeros(n * K, np.int64)
        fa.reshape(n, K)[:, :k] = A
        fb = np.zeros(m * K, np.int64)
        fb.reshape(m, K)[:, :k] = B
        prod = np.convolve(fa, fb)
        return self.reduce_array(prod[: (n + m - 1) * K].reshape(n + m - 1, K))

    def mulvec_arrays(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Elementwise field product of two (n, k) arrays (for Horner scans)."""
        k = self.k
        if k == 1:
            return (A * B) % self.p
        out = np.zeros((len(A), 2 * k - 1), np.int64)
        for i in range(k):
            for j in range(k):
                out[:, i + j] += A[:, i] * B[:, j]
        return self.reduce_array(out)

    def scalar_matrix(self, coords) -> np.ndarray:
        """k x k matrix of multiplication by a fixed scalar; rows @ M.T applies it."""
        k = self.k
        mat = np.zeros((k, k), np.int64)
        col = list(coords)
        for j in range(k):
            mat[:, j] = col
            if j < k - 1:
                lead = col[-1]
                col = [0] + col[:-1]
                if lead:
                    row = self._red_rows[0]
                    col = [(col[i] + lead * row[i]) % self.p for i in range(k)]
        return mat

    def frobenius_array(self, A: np.ndarray) -> np.ndarray:
        return (A @ self._frob_mat.T) % self.p

    def proot_array(self, A: np.ndarray) -> np.ndarray:
        return (A @ self._proot_mat.T) % self.p

    def all_points_array(self, count: int | None = None) -> np.ndarray:
        """The first ``count`` field elements (all by default) as an
        (count, k) coordinate array, in encoding order."""
        n = self.order if count is None else min(count, self.order)
        enc = np.arange(n, dtype=np.int64)
        cols = []
        for i in range(self.k):
            cols.append((enc // self.p**i) % self.p)
        return np.stack(cols, axis=1)

    # -- element construction and serialization ------------------------------

    def element(self, value) -> "FieldElement":
        """Coerce an int (mod p, prime-subfield embedding), a coordinate
        sequence, or an element of this field."""
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise MixedFields("element from a different field")
            return value
        if isinstance(value, int):
            return FieldElement(self, ((value % self.p),) + (0,) * (self.k - 1))
        coords = tuple(int(c) % self.p for c in value)
        if len(coords) != self.k:
            raise ValueError(f"expected {self.k} coordinates, got {len(coords)}")
        return FieldElement(self, coords)

    def from_int(self, n: int) -> "FieldElement":
        """Decode the little-endian base-p integer encoding."""
        if not 0 <= n < self.order:
            raise ValueError(f"encoding {n} outside [0, {self.order})")
        coords = []
        for _ in range(self.k):
            coords.append(n % self.p)
            n //= self.p
        return FieldElement(self, tuple(coords))

    def to_int(self, x: "FieldElement") -> int:
        n = 0
        for c in reversed(x.coords):
            n = n * self.p + c
        return n

    def header(self) -> str:
        """Report header, e.g. ``GF(3^2);modulus=2,2,1``."""
        mod = ",".join(str(c) for c in self.modulus)
        return f"GF({self.p}^{self.k});modulus={mod}"

    # -- sampling ------------------------------------------------------------

    def sample(self, rng: random.Random) -> "FieldElement":
        return self.from_int(rng.randrange(self.order))

    def sample_nonzero(self, rng: random.Random) -> "FieldElement":
        return self.from_int(rng.randrange(1, self.order))

    def sample_distinct(self, n: int, rng: random.Random,
                        nonzero: bool = False) -> list["FieldElement"]:
        lo = 1 if nonzero else 0
        if n > self.order - lo:
            raise NotEnoughElements(
                f"requested {n} distinct elements from {self.order - lo} available")
        return [self.from_int(e) for e in rng.sample(range(lo, self.order), n)]

    # -- misc ---------------------------------------------------------------

    def elements(self) -> Iterable["FieldElement"]:
        for n in range(self.order):
            yield self.from_int(n)

    def __eq__(self, other):
        return (isinstance(other, Field)
                and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus))

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        return f"Field(p={self.p}, k={self.k}, seed={self.seed})"


class FieldElement:
    """Immutable element of a ``Field``; compares equal iff coordinates match."""

    __slots__ = ("field", "coords")

    def __init__(self, field: Field, coords: Sequence[int]):
        self.field = field
        self.coords = tuple(coords)

    def _check(self, other) -> "FieldElement":
        if isinstance(other, int):
            return self.field.element(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field is not self.field and other.field != self.field:
            raise MixedFields("operands from different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field._add(self.coords, other.coords))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field._sub(self.coords, other.coords))

    def __rsub__(self, other):
        return self.field.element(other) - self

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field._mul(self.coords, other.coords))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __neg__(self):
        return FieldElement(self.field, self.field._neg(self.coords))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field._pow(self.coords, n))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field._inv(self.coords))

    def frobenius(self) -> "FieldElement":
        """x -> x^p, an automorphism fixing the prime subfield."""
        return FieldElement(self.field, self.field._apply(self.field._frob_mat, self.coords))

    def pth_root(self) -> "FieldElement":
        """The unique y with y^p = x, namely x^(p^(k-1))."""
        return FieldElement(self.field, self.field._apply(self.field._proot_mat, self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.element(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.coords == other.coords

    def __hash__(self):
        return hash((self.field.p, self.field.k, self.coords))

    def __int__(self):
        return self.field.to_int(self)

    def __repr__(self):
        return f"FE{self.coords}@GF({self.field.p}^{self.field.k})"
