"""Exact arithmetic in the cyclotomic field Q(zeta_N).

Elements are stored in the power basis 1, zeta, ..., zeta^(phi(N)-1) as a
tuple of integer numerators over one positive common denominator.  Because
the N-th cyclotomic polynomial is monic with integer coefficients, products
can be reduced without leaving the integers, which keeps multiplication cheap.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import Iterable, Union

from ..errors import DivisionByZero, MathError, SpecError

Rational = Fraction
ScalarLike = Union["CycScalar", int, Fraction]


# -- integer polynomial helpers (coefficient lists, lowest degree first) -----

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _divide_exact_monic(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    dn = len(den) - 1
    q = [0] * (len(num) - dn)
    for k in range(len(num) - 1, dn - 1, -1):
        c = num[k]
        if c:
            q[k - dn] = c
            for j, dj in enumerate(den):
                num[k - dn + j] -= c * dj
    if any(num):
        raise ArithmeticError("inexact cyclotomic division")
    return q


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, lowest first."""
    if n < 1:
        raise SpecError("invalid conductor")
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p = _divide_exact_monic(p, list(cyclotomic_polynomial(d)))
    return tuple(p)


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


class FieldContext:
    """The field Q(zeta_N) together with reduction tables for Phi_N."""

    __slots__ = ("conductor", "minimal_polynomial", "degree", "_rows", "__weakref__")

    def __init__(self, conductor: int):
        if not isinstance(conductor, int) or conductor < 1:
            raise SpecError("invalid conductor")
        self.conductor = conductor
        self.minimal_polynomial = tuple(Fraction(c) for c in cyclotomic_polynomial(conductor))
        phi = len(self.minimal_polynomial) - 1
        self.degree = phi
        # rows[k] = t^(phi + k) mod Phi_N, for 0 <= k <= phi - 2
        mono = [-c for c in cyclotomic_polynomial(conductor)[:phi]]
        rows = []
        cur = mono
        for _ in range(max(phi - 1, 0)):
            rows.append(tuple(cur))
            top = cur[-1]
            nxt = [0] + cur[:-1]
            if top:
                nxt = [a + top * b for a, b in zip(nxt, mono)]
            cur = nxt
        self._rows = tuple(rows)

    def __repr__(self) -> str:
        return f"FieldContext(N={self.conductor})"

    def __reduce__(self):
        return (cyclotomic_context, (self.conductor,))

    # constructors ---------------------------------------------------------
    @property
    def zero(self) -> "CycScalar":
        return CycScalar._raw(self, (0,) * self.degree, 1)

    @property
    def one(self) -> "CycScalar":
        return self.rational(1)

    @property
    def zeta(self) -> "CycScalar":
        return self.zeta_power(1)

    def rational(self, q: int | Fraction) -> "CycScalar":
        q = Fraction(q)
        num = [0] * self.degree
        num[0] = q.numerator
        return CycScalar._raw(self, tuple(num), q.denominator)

    def zeta_power(self, k: int) -> "CycScalar":
        return _zeta_power(self, k % self.conductor)

    def roots_of_unity(self, order: int | None = None) -> list["CycScalar"]:
        """All zeta^k; with ``order`` given, only those whose order divides it."""
        n = self.conductor
        if order is None:
            return [self.zeta_power(k) for k in range(n)]
        return [self.zeta_power(k) for k in range(n) if (k * order) % n == 0]

    def primitive_root(self, order: int) -> "CycScalar":
        """A primitive root of unity of the given order, if it lives in this field."""
        n = self.conductor
        if order >= 1 and n % order == 0:
            return self.zeta_power(n // order)
        # for odd N the field also contains the 2N-th roots of unity
        if order >= 1 and n % 2 == 1 and (2 * n) % order == 0:
            for k in range(n):
                cand = -self.zeta_power(k)
                if cand.multiplicative_order() == order:
                    return cand
        raise MathError(f"no primitive {order}-th root of unity in Q(zeta_{n})")

    def coerce(self, value: ScalarLike) -> "CycScalar":
        if isinstance(value, CycScalar):
            if value.ctx is not self and value.ctx.conductor != self.conductor:
                raise SpecError("context mismatch")
            return value
        if isinstance(value, (int, Fraction)):
            return self.rational(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to a cyclotomic scalar")

    # vector kernels ---------------------------------------------------------
    def _reduce(self, out: list[int]) -> tuple[int, ...]:
        phi = self.degree
        rows = self._rows
        res = out[:phi]
        for k in range(len(out) - 1, phi - 1, -1):
            c = out[k]
            if c:
                for j, r in enumerate(rows[k - phi]):
                    if r:
                        res[j] += c * r
        return tuple(res)

    def _mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        phi = self.degree
        out = [0] * (2 * phi - 1)
        bnz = [(j, bj) for j, bj in enumerate(b) if bj]
        for i, ai in enumerate(a):
            if ai:
                for j, bj in bnz:
                    out[i + j] += ai * bj
        return self._reduce(out)


@functools.lru_cache(maxsize=None)
def cyclotomic_context(conductor: int) -> FieldContext:
    """Shared, immutable context for Q(zeta_N)."""
    return FieldContext(conductor)


@functools.lru_cache(maxsize=4096)
def _zeta_power(ctx: FieldContext, k: int) -> "CycScalar":
    phi = ctx.degree
    poly = list(cyclotomic_polynomial(ctx.conductor))
    out = [0] * max(k + 1, phi)
    out[k] = 1
    # long division by the monic Phi_N, top degree first
    for j in range(len(out) - 1, phi - 1, -1):
        c = out[j]
        if c:
            for i, pi in enumerate(poly):
                out[j - phi + i] -= c * pi
    return CycScalar._raw(ctx, tuple(out[:phi]), 1)


class CycScalar:
    """An element of Q(zeta_N); immutable and hashable."""

    __slots__ = ("ctx", "num", "den", "_hash")

    def __init__(self, ctx: FieldContext, coeffs: Iterable[int | Fraction]):
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > ctx.degree:
            # accept longer vectors in the basis zeta^k and reduce them
            total = ctx.zero
            for k, c in enumerate(coeffs):
                if c:
                    total = total + ctx.zeta_power(k) * c
            self._assign(total.ctx, total.num, total.den)
            return
        coeffs += [Fraction(0)] * (ctx.degree - len(coeffs))
        den = 1
        for c in coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        num = tuple(int(c * den) for c in coeffs)
        self._assign(ctx, *_normalize(num, den))

    def _assign(self, ctx, num, den):
        self.ctx = ctx
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, ctx, num, den) -> "CycScalar":
        obj = cls.__new__(cls)
        obj._assign(ctx, *_normalize(num, den))
        return obj

    # views ------------------------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(n, self.den) for n in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def is_one(self) -> bool:
        return self.den == 1 and self.num[0] == 1 and not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("scalar is not rational")
        return Fraction(self.num[0], self.den)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # arithmetic -------------------------------------------------------------
    def _other(self, other) -> "CycScalar | None":
        if isinstance(other, CycScalar):
            if other.ctx is not self.ctx and other.ctx.conductor != self.ctx.conductor:
                raise SpecError("context mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.rational(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return CycScalar._raw(self.ctx, tuple(a + b for a, b in zip(self.num, o.num)), self.den)
        return CycScalar._raw(
            self.ctx,
            tuple(a * o.den + b * self.den for a, b in zip(self.num, o.num)),
            self.den * o.den,
        )

    __radd__ = __add__

    def __neg__(self):
        obj = CycScalar.__new__(CycScalar)
        obj._assign(self.ctx, tuple(-a for a in self.num), self.den)
        return obj

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o.is_rational():
            c = o.num[0]
            return CycScalar._raw(self.ctx, tuple(a * c for a in self.num), self.den * o.den)
        if self.is_rational():
            c = self.num[0]
            return CycScalar._raw(self.ctx, tuple(c * b for b in o.num), self.den * o.den)
        return CycScalar._raw(self.ctx, self.ctx._mul(self.num, o.num), self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "CycScalar":
        if self.is_zero():
            raise DivisionByZero("division by zero")
        return _inverse(self)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self
        if k < 0:
            base = self.inverse()
            k = -k
        result = self.ctx.one
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, CycScalar):
            return self.ctx.conductor == other.ctx.conductor and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self.num[0], self.den))
            else:
                self._hash = hash((self.ctx.conductor, self.num, self.den))
        return self._hash

    def multiplicative_order(self) -> int | None:
        """Least q <= N with self^q == 1, or None when no such q exists."""
        if self.is_zero():
            raise DivisionByZero("order of zero")
        n = self.ctx.conductor
        bound = 2 * n if n % 2 else n
        cur = self
        for q in range(1, bound + 1):
            if cur.is_one():
                return q
            cur = cur * self
        return None

    # printing ---------------------------------------------------------------
    def __repr__(self) -> str:
        return f"CycScalar({self.to_text()!r}, N={self.ctx.conductor})"

    def __str__(self) -> str:
        return self.to_text()

    def nonzero_terms(self) -> list[tuple[int, Fraction]]:
        """(power of zeta, rational coefficient) pairs, highest power first."""
        return [(k, Fraction(c, self.den)) for k, c in reversed(list(enumerate(self.num))) if c]

    def to_text(self) -> str:
        terms = self.nonzero_terms()
        if not terms:
            return "0"
        parts = []
        for k, c in terms:
            mag = abs(c)
            if k == 0:
                body = _frac_text(mag)
            else:
                z = "zeta" if k == 1 else f"zeta^{k}"
                body = z if mag == 1 else f"{_frac_text(mag)}*{z}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)


def _frac_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _normalize(num, den):
    if den < 0:
        num = tuple(-a for a in num)
        den = -den
    if den != 1:
        g = den
        for a in num:
            if a:
                g = math.gcd(g, a)
                if g == 1:
                    break
        if not any(num):
            return num, 1
        if g != 1:
            num = tuple(a // g for a in num)
            den //= g
    return num, den


# -- inversion by extended Euclid over Q ---------------------------------------

def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for j, bj in enumerate(b):
            a[shift + j] -= c * bj
        _trim(a)
    return _trim(q), a


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim([Fraction(c) for c in out])


@functools.lru_cache(maxsize=8192)
def _inverse(a: CycScalar) -> CycScalar:
    ctx = a.ctx
    if a.is_rational():
        return ctx.rational(1 / a.to_fraction())
    r0 = list(ctx.minimal_polynomial)
    r1 = _trim(list(a.coeffs))
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    # r0 is a nonzero constant because Phi_N is irreducible
    if len(r0) != 1:
        raise MathError("non-invertible cyclotomic element")
    inv = [c / r0[0] for c in s0]
    _, rem = _poly_divmod(inv, list(ctx.minimal_polynomial))
    result = CycScalar(ctx, rem)
    return result


def scalar_order(a: CycScalar) -> int | None:
    """Multiplicative order of a root of unity; None if ``a`` is not one."""
    return a.multiplicative_order()
