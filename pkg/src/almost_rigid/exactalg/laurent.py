"""Sparse multivariate Laurent polynomials over Q(zeta_N).

A ``PolyRing`` fixes the variable roster and which variables may carry
negative exponents.  A ``LaurentPoly`` maps exponent tuples (one entry per
roster variable) to nonzero ``CycScalar`` coefficients.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..errors import MathError, SpecError
from .cyclotomic import CycScalar, FieldContext

Monomial = tuple  # exponent tuple aligned with the ring roster


class PolyRing:
    """Variable roster plus Laurent flags over a fixed cyclotomic field."""

    __slots__ = ("ctx", "names", "laurent", "index", "_print_order", "__weakref__")

    def __init__(self, ctx: FieldContext, names: Sequence[str], laurent: Iterable[str] = ()):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise SpecError("duplicate variable names")
        laurent = frozenset(laurent)
        unknown = laurent - set(names)
        if unknown:
            raise SpecError(f"Laurent flag on unknown variable {sorted(unknown)[0]}")
        self.ctx = ctx
        self.names = names
        self.laurent = tuple(n in laurent for n in names)
        self.index = {n: i for i, n in enumerate(names)}
        # variable positions sorted by name, descending: drives term order
        self._print_order = tuple(sorted(range(len(names)), key=lambda i: names[i], reverse=True))

    def __repr__(self) -> str:
        flagged = [n + ("*" if f else "") for n, f in zip(self.names, self.laurent)]
        return f"PolyRing(N={self.ctx.conductor}, [{', '.join(flagged)}])"

    def _key(self):
        return (self.ctx.conductor, self.names, self.laurent)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def nvars(self) -> int:
        return len(self.names)

    def is_laurent(self, name: str) -> bool:
        return self.laurent[self.index[name]]

    # constructors ------------------------------------------------------------
    @property
    def zero(self) -> "LaurentPoly":
        return LaurentPoly(self, {})

    @property
    def one(self) -> "LaurentPoly":
        return self.const(1)

    def const(self, c) -> "LaurentPoly":
        c = self.ctx.coerce(c)
        if c.is_zero():
            return self.zero
        return LaurentPoly(self, {(0,) * self.nvars: c})

    def var(self, name: str) -> "LaurentPoly":
        if name not in self.index:
            raise SpecError(f"unknown variable {name}")
        e = [0] * self.nvars
        e[self.index[name]] = 1
        return LaurentPoly(self, {tuple(e): self.ctx.one})

    def monomial(self, exponents: Mapping[str, int], coeff=1) -> "LaurentPoly":
        e = [0] * self.nvars
        for n, k in exponents.items():
            if n not in self.index:
                raise SpecError(f"unknown variable {n}")
            e[self.index[n]] = k
        self._check_exponents(tuple(e))
        c = self.ctx.coerce(coeff)
        return LaurentPoly(self, {tuple(e): c} if c else {})

    def from_terms(self, terms: Mapping[tuple, object]) -> "LaurentPoly":
        out = {}
        for e, c in terms.items():
            c = self.ctx.coerce(c)
            if c:
                self._check_exponents(e)
                out[tuple(e)] = c
        return LaurentPoly(self, out)

    def gens(self) -> list["LaurentPoly"]:
        return [self.var(n) for n in self.names]

    def _check_exponents(self, e: tuple) -> None:
        for k, flag, n in zip(e, self.laurent, self.names):
            if k < 0 and not flag:
                raise MathError(f"negative exponent on non-Laurent variable {n}")

    def convert(self, f: "LaurentPoly") -> "LaurentPoly":
        """Re-express ``f`` in this ring; its variables must all be present here."""
        if f.ring == self:
            return f
        if f.ring.ctx.conductor != self.ctx.conductor:
            raise SpecError("context mismatch")
        pos = []
        for n in f.ring.names:
            pos.append(self.index.get(n))
        out = {}
        for e, c in f.terms.items():
            ne = [0] * self.nvars
            for k, p, n in zip(e, pos, f.ring.names):
                if k:
                    if p is None:
                        raise SpecError(f"variable {n} not in target ring")
                    ne[p] = k
            ne = tuple(ne)
            self._check_exponents(ne)
            out[ne] = c
        return LaurentPoly(self, out)


@functools.lru_cache(maxsize=None)
def poly_ring(ctx: FieldContext, names: tuple, laurent: frozenset = frozenset()) -> PolyRing:
    return PolyRing(ctx, names, laurent)


def _add_into(acc: dict, e: tuple, c: CycScalar) -> None:
    prev = acc.get(e)
    if prev is None:
        acc[e] = c
    else:
        s = prev + c
        if s.is_zero():
            del acc[e]
        else:
            acc[e] = s


class LaurentPoly:
    """Immutable sparse Laurent polynomial; equality is structural."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # basic views -----------------------------------------------------------
    @property
    def ctx(self) -> FieldContext:
        return self.ring.ctx

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> CycScalar:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * self.ring.nvars, self.ctx.zero)

    def constant_term(self) -> CycScalar:
        return self.terms.get((0,) * self.ring.nvars, self.ctx.zero)

    def is_monomial_unit(self) -> bool:
        """Single term whose variables with negative powers are all Laurent-flagged."""
        return len(self.terms) == 1

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            for n, k in zip(self.ring.names, e):
                if k:
                    used.add(n)
        return used

    def degree(self, v: str) -> int:
        """Largest exponent of ``v``; -inf for the zero polynomial is reported as None."""
        i = self.ring.index[v]
        return max((e[i] for e in self.terms), default=None)

    def valuation(self, v: str) -> int | None:
        i = self.ring.index[v]
        return min((e[i] for e in self.terms), default=None)

    def has_negative_exponents(self, names: Iterable[str] | None = None) -> bool:
        idx = range(self.ring.nvars) if names is None else [self.ring.index[n] for n in names]
        return any(e[i] < 0 for e in self.terms for i in idx)

    def coefficients_in(self, v: str) -> dict[int, "LaurentPoly"]:
        """Split by the power of ``v``: {k: coefficient free of v}."""
        i = self.ring.index[v]
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            ne = e[:i] + (0,) + e[i + 1:]
            parts.setdefault(k, {})[ne] = c
        return {k: LaurentPoly(self.ring, t) for k, t in parts.items()}

    def coefficient_of(self, v: str, k: int) -> "LaurentPoly":
        i = self.ring.index[v]
        return LaurentPoly(
            self.ring,
            {e[:i] + (0,) + e[i + 1:]: c for e, c in self.terms.items() if e[i] == k},
        )

    # arithmetic ------------------------------------------------------------
    def _lift(self, other) -> "LaurentPoly | None":
        if isinstance(other, LaurentPoly):
            if other.ring is self.ring or other.ring == self.ring:
                return other
            if other.ring.ctx.conductor != self.ring.ctx.conductor:
                raise SpecError("context mismatch")
            if other.is_constant():
                return self.ring.const(other.constant_value())
            raise SpecError("roster mismatch")
        if isinstance(other, (CycScalar, int, Fraction)):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not o.terms:
            return self
        acc = dict(self.terms)
        for e, c in o.terms.items():
            _add_into(acc, e, c)
        return LaurentPoly(self.ring, acc)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        acc = dict(self.terms)
        for e, c in o.terms.items():
            _add_into(acc, e, -c)
        return LaurentPoly(self.ring, acc)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def scale(self, c) -> "LaurentPoly":
        c = self.ctx.coerce(c)
        if c.is_zero():
            return self.ring.zero
        if c.is_one():
            return self
        return LaurentPoly(self.ring, {e: v * c for e, v in self.terms.items()})

    def shift(self, exps: tuple) -> "LaurentPoly":
        """Multiply by the monomial with exponent tuple ``exps``."""
        out = {}
        for e, c in self.terms.items():
            ne = tuple(a + b for a, b in zip(e, exps))
            out[ne] = c
        if out:
            self.ring._check_exponents(tuple(min(t) for t in zip(*out)))
        return LaurentPoly(self.ring, out)

    def __mul__(self, other):
        if isinstance(other, (CycScalar, int, Fraction)):
            return self.scale(other)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if len(o.terms) < len(self.terms):
            a, b = o, self
        else:
            a, b = self, o
        if len(a.terms) == 1:
            (ea, ca), = a.terms.items()
            if ca.is_one():
                return b.shift(ea)
            return b.shift(ea).scale(ca)
        acc: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                _add_into(acc, e, c1 * c2)
        return LaurentPoly(self.ring, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse_monomial() ** (-k)
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse_monomial(self) -> "LaurentPoly":
        """Inverse of a monomial unit; raises for anything else."""
        if len(self.terms) != 1:
            raise MathError("non-invertible image for Laurent variable")
        (e, c), = self.terms.items()
        ne = tuple(-k for k in e)
        for k, flag in zip(ne, self.ring.laurent):
            if k < 0 and not flag:
                raise MathError("non-invertible image for Laurent variable")
        return LaurentPoly(self.ring, {ne: c.inverse()})

    def __truediv__(self, other):
        if isinstance(other, (CycScalar, int, Fraction)):
            return self.scale(self.ctx.coerce(other).inverse())
        o = self._lift(other)
        if o is None:
            return NotImplemented
        q = exact_divide(self, o)
        if q is None:
            raise MathError("inexact division")
        return q

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (CycScalar, int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # ordering / printing ---------------------------------------------------
    def _sort_key(self, e: tuple) -> tuple:
        return tuple(e[i] for i in self.ring._print_order)

    def sorted_terms(self) -> list[tuple[tuple, CycScalar]]:
        """Terms in printing order: lexicographically descending, variables
        compared in reverse name order."""
        return sorted(self.terms.items(), key=lambda t: self._sort_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[tuple, CycScalar]:
        return max(self.terms.items(), key=lambda t: self._sort_key(t[0]))

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({format_poly(self)!r})"

    # calculus ----------------------------------------------------------------
    def diff(self, v: str) -> "LaurentPoly":
        return partial_derivative(self, v)


# -- printing ------------------------------------------------------------------

def _monomial_text(ring: PolyRing, e: tuple) -> str:
    parts = []
    for i in range(ring.nvars):
        k = e[i]
        if k == 1:
            parts.append(ring.names[i])
        elif k:
            parts.append(f"{ring.names[i]}^{k}")
    return "*".join(parts)


def _scalar_factor(c: CycScalar) -> tuple[bool, str]:
    """(negative, text of |c|) for use as a coefficient; '' stands for 1."""
    terms = c.nonzero_terms()
    if len(terms) == 1:
        k, q = terms[0]
        neg = q < 0
        q = abs(q)
        if k == 0:
            return neg, "" if q == 1 else _fraction_text(q)
        z = "zeta" if k == 1 else f"zeta^{k}"
        return neg, z if q == 1 else f"{_fraction_text(q)}*{z}"
    neg = terms[0][1] < 0
    body = (-c if neg else c).to_text()
    return neg, f"({body})"


def _fraction_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_poly(f: LaurentPoly) -> str:
    if not f.terms:
        return "0"
    out = []
    for e, c in f.sorted_terms():
        neg, coeff = _scalar_factor(c)
        mono = _monomial_text(f.ring, e)
        if mono and coeff:
            body = f"{coeff}*{mono}"
        elif mono:
            body = mono
        else:
            body = coeff or "1"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# -- homomorphisms and calculus -------------------------------------------------

def substitute(f: LaurentPoly, images: Mapping[str, object], target: PolyRing | None = None) -> LaurentPoly:
    """Apply the ring homomorphism sending each variable of ``f`` to its image.

    Variables without an entry map to the same-named variable of ``target``.
    A variable that occurs with a negative exponent must map to a monomial unit.
    """
    if target is None:
        target = f.ring
    ring = f.ring
    imgs = []
    for i, n in enumerate(ring.names):
        if n in images:
            img = images[n]
            if not isinstance(img, LaurentPoly):
                img = target.const(img)
            elif img.ring != target:
                img = target.convert(img)
        elif n in target.index:
            img = target.var(n)
        else:
            used = any(e[i] for e in f.terms)
            if used:
                raise SpecError(f"no image for variable {n}")
            img = None
        imgs.append(img)
    cache: list[dict] = [dict() for _ in imgs]

    def power(i: int, k: int) -> LaurentPoly:
        got = cache[i].get(k)
        if got is None:
            if k < 0:
                got = power(i, -1) ** (-k) if k != -1 else imgs[i].inverse_monomial()
            elif k == 0:
                got = target.one
            elif k == 1:
                got = imgs[i]
            else:
                half = power(i, k // 2)
                got = half * half
                if k % 2:
                    got = got * imgs[i]
            cache[i][k] = got
        return got

    acc: dict = {}
    for e, c in f.terms.items():
        term = None
        for i, k in enumerate(e):
            if k:
                p = power(i, k)
                term = p if term is None else term * p
        if term is None:
            _add_into(acc, (0,) * target.nvars, c)
        else:
            for te, tc in term.terms.items():
                _add_into(acc, te, tc * c)
    return LaurentPoly(target, acc)


def partial_derivative(f: LaurentPoly, v: str) -> LaurentPoly:
    i = f.ring.index[v]
    out = {}
    for e, c in f.terms.items():
        k = e[i]
        if k:
            out[e[:i] + (k - 1,) + e[i + 1:]] = c * k
    return LaurentPoly(f.ring, out)


def support(f: LaurentPoly, names: Sequence[str]) -> set[tuple]:
    idx = [f.ring.index[n] for n in names]
    return {tuple(e[i] for i in idx) for e in f.terms}


def exponent_gcd(es: Iterable[int]) -> int:
    g = 0
    for e in es:
        g = math.gcd(g, e)
    return g


def monic_divide(f: LaurentPoly, g: LaurentPoly, v: str) -> tuple[LaurentPoly, LaurentPoly]:
    """Division with remainder by ``g``, monic in ``v``: f = q*g + r, deg_v r < deg_v g."""
    if g.is_zero():
        raise MathError("not monic in v")
    parts = g.coefficients_in(v)
    n = max(parts)
    if min(parts) < 0 or parts[n] != 1:
        raise MathError("not monic in v")
    ring = f.ring
    i = ring.index[v]
    q: dict = {}
    r = dict(f.terms)
    while True:
        top = max((e[i] for e in r), default=None)
        if top is None or top < n:
            break
        shift = top - n
        lead = {e: c for e, c in r.items() if e[i] == top}
        for e, c in lead.items():
            qe = e[:i] + (shift,) + e[i + 1:]
            _add_into(q, qe, c)
            for ge, gc in g.terms.items():
                te = tuple(a + b for a, b in zip(qe, ge))
                _add_into(r, te, -(c * gc))
    return LaurentPoly(ring, q), LaurentPoly(ring, r)


def exact_divide(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly | None:
    """The Laurent polynomial q with f = q*g, or None when none exists."""
    if g.is_zero():
        raise MathError("division by zero")
    ring = f.ring
    if f.is_zero():
        return ring.zero
    if len(g.terms) == 1:
        (ge, gc), = g.terms.items()
        inv = gc.inverse()
        out = {}
        for e, c in f.terms.items():
            ne = tuple(a - b for a, b in zip(e, ge))
            for k, flag in zip(ne, ring.laurent):
                if k < 0 and not flag:
                    return None
            out[ne] = c * inv
        return LaurentPoly(ring, out)
    nv = ring.nvars
    # valuations and degrees are additive in each variable separately, so after
    # normalising both operands to valuation zero the quotient is a polynomial
    fv = tuple(min(e[i] for e in f.terms) for i in range(nv))
    gv = tuple(min(e[i] for e in g.terms) for i in range(nv))
    qv = tuple(a - b for a, b in zip(fv, gv))
    for k, flag in zip(qv, ring.laurent):
        if k < 0 and not flag:
            return None
    fd = tuple(max(e[i] for e in f.terms) for i in range(nv))
    gd = tuple(max(e[i] for e in g.terms) for i in range(nv))
    qd = tuple(a - b for a, b in zip(fd, gd))
    if any(a < b for a, b in zip(qd, qv)):
        return None
    r = {tuple(a - b for a, b in zip(e, fv)): c for e, c in f.terms.items()}
    gn = {tuple(a - b for a, b in zip(e, gv)): c for e, c in g.terms.items()}
    lead_e, lead_c = max(gn.items())
    inv = lead_c.inverse()
    q = {}
    while r:
        e, c = max(r.items())
        qe = tuple(a - b for a, b in zip(e, lead_e))
        if any(k < 0 for k in qe):
            return None
        qc = c * inv
        q[qe] = qc
        for ge, gc in gn.items():
            _add_into(r, tuple(a + b for a, b in zip(qe, ge)), -(qc * gc))
    return LaurentPoly(ring, {tuple(a + b for a, b in zip(e, qv)): c for e, c in q.items()})
