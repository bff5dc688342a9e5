"""Exact arithmetic over F_p, F_{p^2}, and extension towers, with polynomial
factorization and root finding.

Fields are immutable context objects sharing a small duck-typed protocol
(`add`, `mul`, `inv`, ... on raw coordinate representations); `FieldElement`
is a thin operator-overloading wrapper over (field, rep).  Elements encode
canonically as little-endian vectors of base-field residues, which is the
byte-stable encoding used in vertex keys and JSON exports.

Everything here is deterministic: randomized factorization steps draw from
a generator seeded by the caller, and nonresidue searches scan elements in
canonical coordinate order.
"""

from __future__ import annotations

import random
from functools import reduce
from math import gcd as int_gcd


class FieldError(ValueError):
    """Invalid field construction or element operation."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for n < 3.3e24 (fixed witness set)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldElement:
    """An element of a finite field context, wrapping a raw representation."""

    __slots__ = ("field", "rep")

    def __init__(self, field, rep):
        self.field = field
        self.rep = rep

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is self.field or other.field.signature == self.field.signature:
                return other.rep
            raise FieldError(f"mixed fields: {self.field} vs {other.field}")
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        rep = self._coerce(other)
        if rep is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.rep, rep))

    __radd__ = __add__

    def __sub__(self, other):
        rep = self._coerce(other)
        if rep is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.rep, rep))

    def __rsub__(self, other):
        rep = self._coerce(other)
        if rep is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(rep, self.rep))

    def __mul__(self, other):
        rep = self._coerce(other)
        if rep is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.rep, rep))

    __rmul__ = __mul__

    def __truediv__(self, other):
        rep = self._coerce(other)
        if rep is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.rep, self.field.inv(rep)))

    def __rtruediv__(self, other):
        rep = self._coerce(other)
        if rep is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(rep, self.field.inv(self.rep)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.rep, e))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.rep))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.rep == self.field.from_int(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field.signature == other.field.signature and self.rep == other.rep

    def __hash__(self):
        return hash((self.field.signature, self.rep))

    def __bool__(self):
        return not self.field.is_zero(self.rep)

    def __repr__(self):
        return f"{self.field!r}({self.encode()})"

    def is_zero(self) -> bool:
        return self.field.is_zero(self.rep)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.rep))

    def frobenius(self) -> "FieldElement":
        return FieldElement(self.field, self.field.frobenius(self.rep))

    def encode(self) -> tuple:
        """Little-endian vector of prime-field residues."""
        return self.field.encode(self.rep)


class PrimeField:
    """F_p for an odd prime p, with 7 <= p < 2^31.  Reps are ints in [0, p)."""

    __slots__ = ("p", "signature")

    def __init__(self, p: int):
        if not isinstance(p, int) or not is_prime(p):
            raise FieldError(f"modulus {p} is not prime")
        if p < 7:
            raise FieldError(f"characteristic {p} excluded (need p >= 7)")
        if p >= 2**31:
            raise FieldError(f"prime {p} too large (need p < 2^31)")
        self.p = p
        self.signature = ("Fp", p)

    characteristic = property(lambda self: self.p)
    order = property(lambda self: self.p)
    degree = 1

    def __repr__(self):
        return f"F{self.p}"

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def pow(self, a, e):
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def frobenius(self, a):
        return a

    def is_zero(self, a):
        return a == 0

    def from_int(self, n: int):
        return n % self.p

    def zero(self):
        return FieldElement(self, 0)

    def one(self):
        return FieldElement(self, 1)

    def elem(self, rep) -> FieldElement:
        return FieldElement(self, rep % self.p)

    def encode(self, a) -> tuple:
        return (a,)

    def nth_element(self, i: int):
        """i-th element in canonical order (used by nonresidue scans)."""
        return i % self.p

    def random_rep(self, rng: random.Random):
        return rng.randrange(self.p)


def least_nonresidue(p: int) -> int:
    """Smallest quadratic nonresidue mod p."""
    for n in range(2, p):
        if pow(n, (p - 1) // 2, p) == p - 1:
            return n
    raise FieldError(f"no nonresidue found mod {p}")  # unreachable for p > 2


class QuadExtField:
    """F_{p^2} = F_p[t]/(t^2 - n) with n the least nonresidue mod p.

    Reps are pairs (c0, c1) of ints, meaning c0 + c1*t.  Frobenius is
    (c0, c1) -> (c0, -c1) since t^p = -t.
    """

    __slots__ = ("base", "p", "nonresidue", "order", "signature")

    def __init__(self, base: PrimeField):
        self.base = base
        self.p = base.p
        self.nonresidue = least_nonresidue(self.p)
        self.order = self.p * self.p
        self.signature = ("Fp2", self.p, self.nonresidue)

    characteristic = property(lambda self: self.p)
    degree = 2

    def __repr__(self):
        return f"F{self.p}^2"

    def add(self, a, b):
        p = self.p
        return ((a[0] + b[0]) % p, (a[1] + b[1]) % p)

    def sub(self, a, b):
        p = self.p
        return ((a[0] - b[0]) % p, (a[1] - b[1]) % p)

    def neg(self, a):
        p = self.p
        return (-a[0] % p, -a[1] % p)

    def mul(self, a, b):
        p = self.p
        a0, a1 = a
        b0, b1 = b
        return ((a0 * b0 + self.nonresidue * a1 * b1) % p, (a0 * b1 + a1 * b0) % p)

    def inv(self, a):
        p = self.p
        a0, a1 = a
        d = (a0 * a0 - self.nonresidue * a1 * a1) % p
        if d == 0:
            raise ZeroDivisionError("inverse of zero")
        di = pow(d, p - 2, p)
        return (a0 * di % p, -a1 * di % p)

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        result = (1, 0)
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def frobenius(self, a):
        return (a[0], -a[1] % self.p)

    def is_zero(self, a):
        return a == (0, 0)

    def from_int(self, n: int):
        return (n % self.p, 0)

    def zero(self):
        return FieldElement(self, (0, 0))

    def one(self):
        return FieldElement(self, (1, 0))

    def elem(self, rep) -> FieldElement:
        return FieldElement(self, (rep[0] % self.p, rep[1] % self.p))

    def gen(self) -> FieldElement:
        return FieldElement(self, (0, 1))

    def encode(self, a) -> tuple:
        return a

    def nth_element(self, i: int):
        return (i % self.p, (i // self.p) % self.p)

    def random_rep(self, rng: random.Random):
        return (rng.randrange(self.p), rng.randrange(self.p))


class ExtField:
    """Extension of an arbitrary base field by a monic irreducible modulus.

    Reps are tuples of base reps, length = degree, little endian.  Used for
    splitting fields of sextics (degree <= 6 over F_{p^2}) and for the
    lambda-extensions of the split Richelot case.
    """

    __slots__ = ("base", "modulus", "k", "_mtail", "order", "signature")

    def __init__(self, base, modulus_coeffs):
        # modulus_coeffs: little-endian base reps including leading 1
        k = len(modulus_coeffs) - 1
        if k < 1:
            raise FieldError("modulus must have positive degree")
        if modulus_coeffs[-1] != base.from_int(1):
            raise FieldError("modulus must be monic")
        self.base = base
        self.modulus = tuple(modulus_coeffs)
        self.k = k
        # reduction: u^k = -(m_0 + m_1 u + ... + m_{k-1} u^{k-1})
        self._mtail = tuple(base.neg(c) for c in modulus_coeffs[:-1])
        self.order = base.order**k
        self.signature = ("Ext", base.signature, tuple(base.encode(c) for c in modulus_coeffs))

    characteristic = property(lambda self: self.base.characteristic)
    degree = property(lambda self: self.k)

    def __repr__(self):
        return f"{self.base!r}[u]/deg{self.k}"

    def add(self, a, b):
        ba = self.base.add
        return tuple(ba(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        bs = self.base.sub
        return tuple(bs(x, y) for x, y in zip(a, b))

    def neg(self, a):
        bn = self.base.neg
        return tuple(bn(x) for x in a)

    def mul(self, a, b):
        base, k = self.base, self.k
        zero = base.from_int(0)
        prod = [zero] * (2 * k - 1)
        for i, ai in enumerate(a):
            if base.is_zero(ai):
                continue
            for j, bj in enumerate(b):
                prod[i + j] = base.add(prod[i + j], base.mul(ai, bj))
        # reduce degrees k..2k-2
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d]
            if base.is_zero(c):
                continue
            prod[d] = zero
            for j, m in enumerate(self._mtail):
                prod[d - k + j] = base.add(prod[d - k + j], base.mul(c, m))
        return tuple(prod[:k])

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid on polynomials over the base field
        base = self.base
        f = list(self.modulus)
        g = list(a)
        s0, s1 = [], [base.from_int(1)]
        while True:
            g = _trim(base, g)
            if len(g) == 1:
                ginv = base.inv(g[0])
                res = [base.mul(c, ginv) for c in s1]
                res += [base.from_int(0)] * (self.k - len(res))
                return tuple(res[: self.k])
            q, r = _polydivmod(base, f, g)
            f, g = g, r
            s0, s1 = s1, _polysub(base, s0, _polymul(base, q, s1))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.from_int(1)
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def frobenius(self, a):
        return self.pow(a, self.characteristic)

    def is_zero(self, a):
        bz = self.base.is_zero
        return all(bz(x) for x in a)

    def from_int(self, n: int):
        rep = [self.base.from_int(0)] * self.k
        rep[0] = self.base.from_int(n)
        return tuple(rep)

    def zero(self):
        return FieldElement(self, self.from_int(0))

    def one(self):
        return FieldElement(self, self.from_int(1))

    def gen(self) -> FieldElement:
        rep = [self.base.from_int(0)] * self.k
        rep[1 if self.k > 1 else 0] = self.base.from_int(1)
        return FieldElement(self, tuple(rep))

    def elem(self, rep) -> FieldElement:
        return FieldElement(self, tuple(rep))

    def embed(self, x) -> "FieldElement":
        """Embed a base-field element (rep or FieldElement) as a constant."""
        if isinstance(x, FieldElement):
            if x.field.signature == self.signature:
                return x
            if x.field.signature != self.base.signature:
                raise FieldError("can only embed direct base-field elements")
            x = x.rep
        rep = [self.base.from_int(0)] * self.k
        rep[0] = x
        return FieldElement(self, tuple(rep))

    def project(self, e: FieldElement):
        """Inverse of embed: base-field element, or None if not a constant."""
        rep = e.rep if isinstance(e, FieldElement) else e
        if all(self.base.is_zero(c) for c in rep[1:]):
            return FieldElement(self.base, rep[0])
        return None

    def encode(self, a) -> tuple:
        return tuple(x for c in a for x in self.base.encode(c))

    def nth_element(self, i: int):
        rep = []
        q = self.base.order
        for _ in range(self.k):
            rep.append(self.base.nth_element(i % q))
            i //= q
        return tuple(rep)

    def random_rep(self, rng: random.Random):
        return tuple(self.base.random_rep(rng) for _ in range(self.k))


# -- raw polynomial helpers over a field context (little-endian rep lists) --

def _trim(base, f):
    while len(f) > 1 and base.is_zero(f[-1]):
        f = f[:-1]
    return list(f)


def _polymul(base, f, g):
    if not f or not g:
        return []
    zero = base.from_int(0)
    out = [zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if base.is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = base.add(out[i + j], base.mul(a, b))
    return out


def _polysub(base, f, g):
    n = max(len(f), len(g))
    zero = base.from_int(0)
    f = list(f) + [zero] * (n - len(f))
    g = list(g) + [zero] * (n - len(g))
    return [base.sub(a, b) for a, b in zip(f, g)]


def _polydivmod(base, f, g):
    f = _trim(base, f)
    g = _trim(base, g)
    if len(g) == 1 and base.is_zero(g[0]):
        raise ZeroDivisionError("polynomial division by zero")
    zero = base.from_int(0)
    q = [zero] * max(1, len(f) - len(g) + 1)
    r = list(f)
    ginv = base.inv(g[-1])
    while len(r) >= len(g) and not (len(r) == 1 and base.is_zero(r[0])):
        c = base.mul(r[-1], ginv)
        d = len(r) - len(g)
        q[d] = c
        for i, gc in enumerate(g):
            r[d + i] = base.sub(r[d + i], base.mul(c, gc))
        r = _trim(base, r)
        if base.is_zero(r[-1]) and len(r) == 1:
            break
        if len(r) >= len(g) and base.is_zero(r[-1]):
            r = _trim(base, r)
    return q, r


class Poly:
    """Univariate polynomial over a field context, lowest degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        # coeffs: iterable of reps or FieldElements
        reps = [c.rep if isinstance(c, FieldElement) else c for c in coeffs]
        while len(reps) > 1 and field.is_zero(reps[-1]):
            reps.pop()
        if not reps:
            reps = [field.from_int(0)]
        self.field = field
        self.coeffs = tuple(reps)

    @classmethod
    def from_ints(cls, field, ints):
        return cls(field, [field.from_int(n) for n in ints])

    @classmethod
    def from_roots(cls, field, roots):
        """Monic polynomial with the given roots (FieldElements or reps)."""
        f = cls(field, [field.from_int(1)])
        for r in roots:
            rep = r.rep if isinstance(r, FieldElement) else r
            f = f * cls(field, [field.neg(rep), field.from_int(1)])
        return f

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and self.field.is_zero(self.coeffs[0]):
            return -1
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.degree < 0

    def __getitem__(self, i: int) -> FieldElement:
        if 0 <= i < len(self.coeffs):
            return FieldElement(self.field, self.coeffs[i])
        return FieldElement(self.field, self.field.from_int(0))

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.field.signature == other.field.signature
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field.signature, self.encode()))

    def __repr__(self):
        return f"Poly({[self.field.encode(c) for c in self.coeffs]})"

    def __add__(self, other):
        other = self._coerce(other)
        base = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        zero = base.from_int(0)
        a = list(self.coeffs) + [zero] * (n - len(self.coeffs))
        b = list(other.coeffs) + [zero] * (n - len(other.coeffs))
        return Poly(base, [base.add(x, y) for x, y in zip(a, b)])

    def __sub__(self, other):
        other = self._coerce(other)
        return self + (-other)

    def __neg__(self):
        return Poly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return Poly(self.field, [self.field.mul(c, other.rep) for c in self.coeffs])
        if isinstance(other, int):
            rep = self.field.from_int(other)
            return Poly(self.field, [self.field.mul(c, rep) for c in self.coeffs])
        other = self._coerce(other)
        return Poly(self.field, _polymul(self.field, list(self.coeffs), list(other.coeffs)))

    __rmul__ = __mul__

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.field.signature != self.field.signature:
                raise FieldError("mixed-field polynomials")
            return other
        if isinstance(other, (int, FieldElement)):
            rep = other.rep if isinstance(other, FieldElement) else self.field.from_int(other)
            return Poly(self.field, [rep])
        raise TypeError(f"cannot coerce {other!r} to Poly")

    def divmod(self, other: "Poly"):
        q, r = _polydivmod(self.field, list(self.coeffs), list(other.coeffs))
        return Poly(self.field, q), Poly(self.field, r)

    def __mod__(self, other: "Poly"):
        return self.divmod(other)[1]

    def __floordiv__(self, other: "Poly"):
        return self.divmod(other)[0]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lead_inv = self.field.inv(self.coeffs[-1])
        return Poly(self.field, [self.field.mul(c, lead_inv) for c in self.coeffs])

    def derivative(self) -> "Poly":
        base = self.field
        if len(self.coeffs) == 1:
            return Poly(base, [base.from_int(0)])
        return Poly(base, [base.mul(base.from_int(i), c)
                           for i, c in enumerate(self.coeffs) if i > 0])

    def eval(self, x) -> FieldElement:
        base = self.field
        rep = x.rep if isinstance(x, FieldElement) else x
        acc = base.from_int(0)
        for c in reversed(self.coeffs):
            acc = base.add(base.mul(acc, rep), c)
        return FieldElement(base, acc)

    def is_squarefree(self) -> bool:
        d = self.derivative()
        if d.is_zero():
            return self.degree <= 0
        return poly_gcd(self, d).degree == 0

    def map_coeffs(self, fn) -> "Poly":
        return Poly(self.field, [fn(FieldElement(self.field, c)) for c in self.coeffs])

    def lift_to(self, ext: ExtField) -> "Poly":
        """Reinterpret coefficients as constants of an extension of this field."""
        if ext.base.signature != self.field.signature:
            raise FieldError("lift target must extend the coefficient field")
        return Poly(ext, [ext.embed(FieldElement(self.field, c)).rep for c in self.coeffs])

    def encode(self) -> tuple:
        return tuple(self.field.encode(c) for c in self.coeffs)


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd; gcd(f, 0) is the monic scalar multiple of f."""
    if f.is_zero() and g.is_zero():
        raise FieldError("gcd(0, 0) undefined")
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def _pow_mod(base_poly: Poly, e: int, modulus: Poly) -> Poly:
    result = Poly(base_poly.field, [base_poly.field.from_int(1)])
    b = base_poly % modulus
    while e:
        if e & 1:
            result = result * b % modulus
        b = b * b % modulus
        e >>= 1
    return result


def _x_poly(field) -> Poly:
    return Poly(field, [field.from_int(0), field.from_int(1)])


def factor(f: Poly, seed: int = 0) -> list[tuple[Poly, int]]:
    """Factor into monic irreducibles with multiplicities (Cantor-Zassenhaus).

    Deterministic for a fixed seed.  Assumes deg(f) < char (true for the
    degree <= 6 polynomials this package manipulates).
    """
    if f.is_zero():
        raise FieldError("cannot factor the zero polynomial")
    field = f.field
    # string seeds hash via sha512, stable across processes
    rng = random.Random(f"cz-factor:{seed}")
    work = f.monic()
    if work.derivative().is_zero() and work.degree > 0:
        raise FieldError("inseparable polynomial (degree >= characteristic)")
    out: list[tuple[Poly, int]] = []
    sqfree = work // poly_gcd(work, work.derivative()) if work.degree > 0 else work
    for g in _factor_squarefree(sqfree, rng):
        mult = 0
        while True:
            q, r = work.divmod(g)
            if not r.is_zero():
                break
            work = q
            mult += 1
        out.append((g, mult))
    out.sort(key=lambda pair: (pair[0].degree, pair[0].encode()))
    return out


def _factor_squarefree(f: Poly, rng: random.Random) -> list[Poly]:
    field = f.field
    q = field.order
    if f.degree <= 0:
        return []
    if f.degree == 1:
        return [f.monic()]
    out = []
    x = _x_poly(field)
    work = f.monic()
    xq = x
    d = 0
    while work.degree > 0:
        d += 1
        if work.degree < 2 * d:
            out.append(work.monic())
            break
        xq = _pow_mod(xq, q, work)
        g = poly_gcd(work, xq - x)
        if g.degree > 0:
            out.extend(_equal_degree_split(g, d, rng))
            work = work // g
            xq = xq % work if work.degree > 0 else xq
    return out


def _equal_degree_split(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    field = f.field
    if f.degree == d:
        return [f.monic()]
    q = field.order
    exponent = (q**d - 1) // 2
    while True:
        r = Poly(field, [field.random_rep(rng) for _ in range(f.degree)])
        if r.degree < 1:
            continue
        h = _pow_mod(r, exponent, f) - Poly(field, [field.from_int(1)])
        g = poly_gcd(f, h) if not h.is_zero() else f
        if 0 < g.degree < f.degree:
            return _equal_degree_split(g, d, rng) + _equal_degree_split(f // g, d, rng)


def extension(field, degree: int, seed: int = 0):
    """Extension of the given field of the given degree (degree 1 = itself)."""
    if degree == 1:
        return field
    rng = random.Random(f"ext:{degree}:{seed}")
    one = field.from_int(1)
    while True:
        coeffs = [field.random_rep(rng) for _ in range(degree)] + [one]
        m = Poly(field, coeffs)
        if _is_irreducible(m):
            return ExtField(field, m.coeffs)


def _is_irreducible(m: Poly) -> bool:
    # Rabin test: x^(q^k) = x mod m, gcd(x^(q^(k/r)) - x, m) = 1 for primes r | k
    field = m.field
    q = field.order
    k = m.degree
    x = _x_poly(field)
    distinct_primes = set()
    n = k
    for r in range(2, k + 1):
        while n % r == 0:
            distinct_primes.add(r)
            n //= r
    for r in distinct_primes:
        h = _pow_mod(x, q ** (k // r), m) - x
        if h.is_zero() or poly_gcd(m, h).degree > 0:
            return False
    return _pow_mod(x, q**k, m) == x % m


def find_roots(f: Poly, seed: int = 0):
    """All roots of f in its splitting field, as (root, multiplicity) pairs.

    Returns (pairs, splitting_field).  The splitting field is the coefficient
    field itself when every irreducible factor is linear, else an extension
    of degree lcm(factor degrees).
    """
    if f.is_zero():
        raise FieldError("zero polynomial has no root set")
    field = f.field
    factors = factor(f, seed=seed)
    lcm = 1
    for g, _ in factors:
        lcm = lcm * g.degree // int_gcd(lcm, g.degree)
    if lcm == 1:
        pairs = [(FieldElement(field, field.neg(g.coeffs[0])), m) for g, m in factors]
        pairs.sort(key=lambda pm: pm[0].encode())
        return pairs, field
    big = extension(field, lcm, seed=seed)
    pairs = []
    for g, m in factors:
        gbig = g.lift_to(big)
        if g.degree == 1:
            pairs.append((-gbig[0], m))
            continue
        sub = _linear_roots(gbig, seed)
        if len(sub) != g.degree:
            raise FieldError("splitting field failed to split a factor")
        pairs.extend((r, m) for r in sub)
    pairs.sort(key=lambda pm: pm[0].encode())
    return pairs, big


def _linear_roots(f: Poly, seed: int) -> list[FieldElement]:
    """Roots in the coefficient field of a poly known to split there."""
    field = f.field
    rng = random.Random(f"roots:{seed}")
    x = _x_poly(field)
    g = poly_gcd(f, _pow_mod(x, field.order, f) - x)
    linear = _factor_squarefree(g, rng) if g.degree > 1 else ([g] if g.degree == 1 else [])
    return [FieldElement(field, field.neg(h.monic().coeffs[0])) for h in linear]


def legendre(a: FieldElement) -> int:
    """1 for nonzero squares, -1 for nonsquares, 0 for zero."""
    if a.is_zero():
        return 0
    e = (a.field.order - 1) // 2
    r = a.field.pow(a.rep, e)
    return 1 if r == a.field.from_int(1) else -1


_NONRESIDUE_CACHE: dict = {}


def _ts_nonresidue(field) -> FieldElement:
    """A fixed nonresidue per field, scanning canonical element order.

    Proper subfield elements are always squares in even-degree extensions,
    so the scan starts at the first element with a nonzero top coordinate.
    """
    cached = _NONRESIDUE_CACHE.get(field.signature)
    if cached is not None:
        return FieldElement(field, cached)
    start = 2 if field.degree == 1 else field.order // field.characteristic
    i = start
    while True:
        z = FieldElement(field, field.nth_element(i))
        i += 1
        if legendre(z) == -1:
            _NONRESIDUE_CACHE[field.signature] = z.rep
            return z


def square_root(a: FieldElement):
    """Canonical square root (least encoding), or None for nonsquares.

    Tonelli-Shanks over any field context; the nonresidue search scans
    elements in canonical coordinate order, so results are deterministic.
    """
    field = a.field
    if a.is_zero():
        return FieldElement(field, field.from_int(0))
    if legendre(a) != 1:
        return None
    q = field.order
    if q % 4 == 3:
        r = FieldElement(field, field.pow(a.rep, (q + 1) // 4))
    else:
        m = q - 1
        e = 0
        while m % 2 == 0:
            m //= 2
            e += 1
        z = _ts_nonresidue(field)
        y = z**m
        r = a ** ((m + 1) // 2)
        b = a**m
        while b != field.one():
            s, t = 0, b
            while t != field.one():
                t = t * t
                s += 1
            y = y ** (2 ** (e - s - 1))
            e = s
            r = r * y
            b = b * y * y
            y = y * y
    neg = -r
    return r if r.encode() <= neg.encode() else neg


def roots_of_quadratic(f: Poly):
    """Roots of a degree-<=2 poly in its field, or None if irrational.

    For the quadratic case returns the pair sorted by encoding.
    """
    field = f.field
    if f.degree == 1:
        return [-f[0] / f[1]]
    if f.degree != 2:
        raise FieldError("expected degree 1 or 2")
    a, b, c = f[2], f[1], f[0]
    disc = b * b - 4 * a * c
    s = square_root(disc)
    if s is None:
        return None
    inv2a = (2 * a).inverse()
    r1, r2 = (-b + s) * inv2a, (-b - s) * inv2a
    return sorted([r1, r2], key=lambda e: e.encode())


def build_quad_ext(p: int) -> QuadExtField:
    """F_{p^2} context for an admissible prime p (p >= 7, p < 2^31)."""
    return QuadExtField(PrimeField(p))
