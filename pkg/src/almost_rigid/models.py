"""The five families of almost rigid domains, realised inside Laurent rings.

Each coordinate ring B is embedded into a Laurent polynomial ring by inverting
its kernel coordinates (``x`` for surfaces and the Finston-Maubach threefold,
``y2..ym`` for Danielewski varieties).  Equality, derivations and
automorphisms are computed there; membership in B is decided exactly by the
family-specific descent algorithms at the bottom of this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .errors import MathError, SpecError
from .exactalg import (
    CycScalar,
    FieldContext,
    LaurentPoly,
    PolyRing,
    exact_divide,
    format_poly,
    monic_divide,
    parse_poly,
    partial_derivative,
    substitute,
)

DEFAULT_CAP = 64


# -- variety descriptions ---------------------------------------------------------

def _invalid(msg: str) -> SpecError:
    return SpecError(f"invalid spec: {msg}")


@dataclass(frozen=True)
class GdsSpec:
    """X^d Y2 - P(X, Y1); P given by its roots sigma_i(x) or explicitly."""

    d: int
    sigma: tuple[str, ...] | None = None
    p: str | None = None
    family = "gds"

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 2:
            raise _invalid("d must be an integer >= 2")
        if (self.sigma is None) == (self.p is None):
            raise _invalid("give exactly one of sigma or p")
        if self.sigma is not None:
            object.__setattr__(self, "sigma", tuple(str(s) for s in self.sigma))
            if len(self.sigma) < 2:
                raise _invalid("need at least two roots sigma_i (r >= 2)")

    @property
    def standard_form(self) -> bool:
        return self.sigma is not None


@dataclass(frozen=True)
class DVConSpec:
    """Y1 Y2^k2 ... Ym^km - P(Z) with P monic and no Z^(d-1) term."""

    m: int
    k: tuple[int, ...]
    p: str
    family = "dvcon"

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(self.k))
        _check_k(self.m, self.k)


@dataclass(frozen=True)
class DVGenSpec:
    """Y1 Y2^k2 ... Ym^km - (Z^d + s_(d-2) Z^(d-2) + ... + s_0), s_i in K[Y2..Ym]."""

    m: int
    k: tuple[int, ...]
    d: int
    s: tuple[str, ...]
    family = "dvgen"

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(self.k))
        object.__setattr__(self, "s", tuple(str(x) for x in self.s))
        _check_k(self.m, self.k)
        if not isinstance(self.d, int) or self.d < 2:
            raise _invalid("d must be an integer >= 2")
        if len(self.s) != self.d - 1:
            raise _invalid(f"expected {self.d - 1} coefficients s_0..s_{self.d - 2}")


@dataclass(frozen=True)
class FMSpec:
    """(C[X,Y,Z]/(X^a+Y^b+Z^c))[U,V]/(X^m U - Y^n V - 1)."""

    a: int
    b: int
    c: int
    m: int
    n: int
    family = "fm"

    def __post_init__(self):
        for name in ("a", "b", "c", "m", "n"):
            if not isinstance(getattr(self, name), int) or getattr(self, name) < 1:
                raise _invalid(f"{name} must be a positive integer")
        a, b, c = self.a, self.b, self.c
        if math.gcd(a, b) != 1 or math.gcd(a, c) != 1 or math.gcd(b, c) != 1:
            raise _invalid("a, b, c must be pairwise coprime")
        if Fraction(1, a) + Fraction(1, b) + Fraction(1, c) >= 1:
            raise _invalid("need 1/a + 1/b + 1/c < 1")
        if self.m < 2 or self.n < 2:
            raise _invalid("m and n must be >= 2")


@dataclass(frozen=True)
class DDSSpec:
    """X^d1 Y2 - P1(X,Y1), X^d2 Y3 - P2(X,Y1,Y2)."""

    d1: int
    d2: int
    p1: str
    p2: str
    family = "dds"

    def __post_init__(self):
        for name in ("d1", "d2"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 2:
                raise _invalid(f"{name} must be an integer >= 2")


VarietySpec = Union[GdsSpec, DVConSpec, DVGenSpec, FMSpec, DDSSpec]


def _check_k(m, k):
    if not isinstance(m, int) or m < 2:
        raise _invalid("m must be an integer >= 2")
    if len(k) != m - 1:
        raise _invalid(f"expected {m - 1} exponents k_2..k_m")
    if any(not isinstance(x, int) or x < 2 for x in k):
        raise _invalid("every k_j must be an integer >= 2")


# -- elements and derivations -------------------------------------------------------

class Element:
    """An element of a model's coordinate ring, stored in localized coordinates."""

    __slots__ = ("model", "value")

    def __init__(self, model: "Model", value: LaurentPoly):
        self.model = model
        self.value = value

    def _other(self, other):
        if isinstance(other, Element):
            if other.model is not self.model and other.model != self.model:
                raise SpecError("model mismatch")
            return other.value
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (CycScalar, int, Fraction)):
            return self.model.ring.const(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Element(self.model, self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Element(self.model, self.value - o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Element(self.model, o - self.value)

    def __neg__(self):
        return Element(self.model, -self.value)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Element(self.model, self.model.reduce(self.value * o))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = self.model.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.model == other.model and self.value == other.value
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.value == o

    def __hash__(self):
        return hash(self.value)

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def __str__(self) -> str:
        return self.model.format(self)

    def __repr__(self) -> str:
        return f"Element({self.model.format(self)!r})"


class Derivation:
    """A derivation given by its images on the model's coordinates."""

    __slots__ = ("model", "images")

    def __init__(self, model: "Model", images: Mapping[str, LaurentPoly]):
        self.model = model
        full = {}
        for name in model.ring.names:
            img = images.get(name, model.ring.zero)
            if isinstance(img, Element):
                img = img.value
            full[name] = img
        self.images = full

    def __call__(self, e: Element) -> Element:
        return derive(self.model, self, e)

    def coordinate_image(self, name: str) -> Element:
        return Element(self.model, self.images[name])

    def scaled(self, h: Element) -> "Derivation":
        hv = h.value if isinstance(h, Element) else h
        return Derivation(self.model, {v: self.model.reduce(img * hv) for v, img in self.images.items()})

    def __eq__(self, other):
        return isinstance(other, Derivation) and self.model == other.model and self.images == other.images

    def __hash__(self):
        return hash(tuple(sorted(self.images.items(), key=lambda t: t[0])))

    def __repr__(self) -> str:
        parts = [f"{v} -> {format_poly(img)}" for v, img in self.images.items() if img]
        return "Derivation(" + ", ".join(parts) + ")"


# -- models ------------------------------------------------------------------------------

class Model:
    """A family instance: coordinate ring, generator images and relations."""

    family: str = ""

    def __init__(self, spec: VarietySpec, ctx: FieldContext):
        self.spec = spec
        self.ctx = ctx
        self.ring: PolyRing
        self.gen_ring: PolyRing
        self.generator_images: dict[str, LaurentPoly] = {}
        self.kernel_coordinates: tuple[str, ...] = ()

    # identity ---------------------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, Model)
            and self.spec == other.spec
            and self.ctx.conductor == other.ctx.conductor
        )

    def __hash__(self):
        return hash((self.spec, self.ctx.conductor))

    def __repr__(self):
        return f"{type(self).__name__}({self.spec}, N={self.ctx.conductor})"

    # construction helpers ---------------------------------------------------------
    @property
    def coordinates(self) -> tuple[str, ...]:
        return self.ring.names

    @property
    def generators(self) -> tuple[str, ...]:
        return self.gen_ring.names

    @property
    def one(self) -> Element:
        return Element(self, self.ring.one)

    @property
    def zero(self) -> Element:
        return Element(self, self.ring.zero)

    def reduce(self, f: LaurentPoly) -> LaurentPoly:
        return f

    def element(self, value) -> Element:
        if isinstance(value, Element):
            return value
        if isinstance(value, LaurentPoly):
            return Element(self, self.reduce(self.ring.convert(value)))
        if isinstance(value, str):
            return self.parse(value)
        return Element(self, self.ring.const(value))

    def scalar(self, value) -> Element:
        return Element(self, self.ring.const(value))

    def gen(self, name: str) -> Element:
        if name not in self.generator_images:
            raise SpecError(f"unknown generator {name}")
        return Element(self, self.generator_images[name])

    def from_generators(self, f: LaurentPoly) -> Element:
        return Element(self, self.reduce(substitute(f, self.generator_images, self.ring)))

    def parse(self, text: str) -> Element:
        """Parse text written in the ring generators."""
        return self.from_generators(parse_poly(text, self.gen_ring))

    def coordinate_poly(self, text: str) -> LaurentPoly:
        return parse_poly(text, self.ring)

    def relations(self) -> list[LaurentPoly]:
        raise NotImplementedError

    def relation_residues(self) -> list[LaurentPoly]:
        return [self.from_generators(r).value for r in self.relations()]

    # membership / printing -----------------------------------------------------------
    def represent(self, e: Element) -> LaurentPoly | None:
        """Polynomial in the ring generators mapping to ``e``, or None if e is not in B."""
        raise NotImplementedError

    def format(self, e: Element) -> str:
        rep = self.represent(e)
        if rep is None:
            return format_poly(e.value)
        return format_poly(rep)

    def canonical_derivation(self) -> Derivation:
        raise NotImplementedError

    def kernel_element(self, value) -> Element:
        """Coerce ``value`` and check it lies in the kernel of the canonical derivation."""
        e = self.element(value)
        if not kernel_test(self, self.canonical_derivation(), e):
            raise MathError("factor not in kernel")
        return e

    def describe(self) -> str:
        return f"{self.family} {self.spec}"


class GdsModel(Model):
    family = "gds"

    def __init__(self, spec: GdsSpec, ctx: FieldContext):
        super().__init__(spec, ctx)
        self.d = spec.d
        self.ring = PolyRing(ctx, ("x", "y1"), {"x"})
        self.gen_ring = PolyRing(ctx, ("x", "y1", "y2"), {"x"})
        self.kernel_ring = PolyRing(ctx, ("x",))
        x_ring = self.kernel_ring
        if spec.sigma is not None:
            self.sigma = tuple(_parse_plain(s, x_ring, "sigma") for s in spec.sigma)
            if len(set(self.sigma)) != len(self.sigma):
                raise _invalid("the roots sigma_i must be pairwise distinct")
            y1 = self.ring.var("y1")
            P = self.ring.one
            for s in self.sigma:
                P = P * (y1 - self.ring.convert(s))
        else:
            self.sigma = None
            P = _parse_plain(spec.p, self.ring, "p")
        self.P = P
        self.r = _check_monic(P, "y1", "P")
        self.generator_images = {
            "x": self.ring.var("x"),
            "y1": self.ring.var("y1"),
            "y2": P.shift(self._xpow(-self.d)),
        }
        self.kernel_coordinates = ("x",)
        self._p0 = P.coefficient_of("x", 0)
        _assert_relations(self)

    def _xpow(self, k: int) -> tuple:
        return (k, 0)

    @property
    def standard_form(self) -> bool:
        return self.sigma is not None

    def relations(self):
        g = self.gen_ring
        return [g.var("x") ** self.d * g.var("y2") - g.convert(self.P)]

    def represent(self, e: Element) -> LaurentPoly | None:
        return _gds_represent(e.value, self.d, self.P, self._p0, self.generator_images["y2"], self.gen_ring)

    def canonical_derivation(self) -> Derivation:
        return Derivation(self, {"y1": self.ring.monomial({"x": self.d})})


class DanielewskiVarietyModel(Model):
    """Shared machinery of constant-coefficient and general Danielewski varieties."""

    def _setup(self, m: int, k: Sequence[int], P: LaurentPoly):
        self.m = m
        self.k = tuple(k)
        ynames = tuple(f"y{j}" for j in range(2, m + 1))
        self.ynames = ynames
        self.ring = PolyRing(self.ctx, ynames + ("z",), set(ynames))
        self.gen_ring = PolyRing(self.ctx, ("y1",) + ynames + ("z",), set(ynames))
        self.kernel_ring = PolyRing(self.ctx, ynames)
        self.P = self.ring.convert(P)
        self.d = _check_monic(self.P, "z", "P")
        # y-tilde = y2^k2 ... ym^km
        self.ytilde = self.ring.monomial(dict(zip(ynames, self.k)))
        self.generator_images = {"y1": self.P * self.ytilde.inverse_monomial()}
        for n in ynames + ("z",):
            self.generator_images[n] = self.ring.var(n)
        self.kernel_coordinates = ynames
        _assert_relations(self)

    def relations(self):
        g = self.gen_ring
        mono = g.var("y1") * g.convert(self.ytilde)
        return [mono - g.convert(self.P)]

    def represent(self, e: Element) -> LaurentPoly | None:
        return _dv_represent(e.value, self.P, self.ytilde, self.gen_ring)

    def canonical_derivation(self) -> Derivation:
        return Derivation(self, {"z": self.ytilde})

    def s_coefficients(self) -> list[LaurentPoly]:
        """s_0 .. s_(d-2) as polynomials in y2..ym (kernel ring)."""
        out = []
        parts = self.P.coefficients_in("z")
        for i in range(self.d - 1):
            out.append(self.kernel_ring.convert(parts.get(i, self.ring.zero)))
        return out


class DVConModel(DanielewskiVarietyModel):
    family = "dvcon"

    def __init__(self, spec: DVConSpec, ctx: FieldContext):
        super().__init__(spec, ctx)
        zring = PolyRing(ctx, ("z",))
        Pz = _parse_plain(spec.p, zring, "p")
        d = _check_monic(Pz, "z", "P")
        if Pz.coefficient_of("z", d - 1):
            raise _invalid("P must have zero z^(d-1) coefficient")
        self.Pz = Pz
        ynames = tuple(f"y{j}" for j in range(2, spec.m + 1))
        target = PolyRing(ctx, ynames + ("z",), set(ynames))
        self._setup(spec.m, spec.k, target.convert(Pz))


class DVGenModel(DanielewskiVarietyModel):
    family = "dvgen"

    def __init__(self, spec: DVGenSpec, ctx: FieldContext):
        super().__init__(spec, ctx)
        ynames = tuple(f"y{j}" for j in range(2, spec.m + 1))
        yring = PolyRing(ctx, ynames)
        target = PolyRing(ctx, ynames + ("z",), set(ynames))
        z = target.var("z")
        P = z ** spec.d
        for i, text in enumerate(spec.s):
            s_i = _parse_plain(text, yring, f"s_{i}")
            P = P + target.convert(s_i) * z ** i
        self._setup(spec.m, spec.k, P)


class FMModel(Model):
    family = "fm"

    def __init__(self, spec: FMSpec, ctx: FieldContext):
        super().__init__(spec, ctx)
        self.a, self.b, self.c, self.m, self.n = spec.a, spec.b, spec.c, spec.m, spec.n
        self.ring = PolyRing(ctx, ("x", "y", "z", "v"), {"x"})
        self.gen_ring = PolyRing(ctx, ("x", "y", "z", "u", "v"), {"x"})
        self.kernel_ring = PolyRing(ctx, ("x", "y", "z"))
        R = self.ring
        # z^c -> -x^a - y^b
        self._tail = -(R.monomial({"x": self.a}) + R.monomial({"y": self.b}))
        self._unit_factor = R.monomial({"y": self.n, "v": 1}) + 1
        self.generator_images = {
            "x": R.var("x"),
            "y": R.var("y"),
            "z": R.var("z"),
            "u": self._unit_factor.shift((-self.m, 0, 0, 0)),
            "v": R.var("v"),
        }
        self.kernel_coordinates = ("x", "y", "z")
        _assert_relations(self)

    def reduce(self, f: LaurentPoly) -> LaurentPoly:
        c = self.c
        iz = 2
        if all(e[iz] < c for e in f.terms):
            return f
        keep: dict = {}
        pending = dict(f.terms)
        while pending:
            todo: dict = {}
            for e, coeff in pending.items():
                if e[iz] < c:
                    prev = keep.get(e)
                    s = coeff if prev is None else prev + coeff
                    if s.is_zero():
                        keep.pop(e, None)
                    else:
                        keep[e] = s
                    continue
                base = e[:iz] + (e[iz] - c,) + e[iz + 1:]
                for te, tc in self._tail.terms.items():
                    ne = tuple(p + q for p, q in zip(base, te))
                    prev = todo.get(ne)
                    s = coeff * tc if prev is None else prev + coeff * tc
                    if s.is_zero():
                        todo.pop(ne, None)
                    else:
                        todo[ne] = s
            pending = todo
        return LaurentPoly(f.ring, keep)

    def relations(self):
        g = self.gen_ring
        x, y, z, u, v = g.gens()
        return [x ** self.a + y ** self.b + z ** self.c, x ** self.m * u - y ** self.n * v - 1]

    def represent(self, e: Element) -> LaurentPoly | None:
        return _fm_represent(self, e.value)

    def canonical_derivation(self) -> Derivation:
        return Derivation(self, {"v": self.ring.monomial({"x": self.m})})

    def weights(self) -> dict[str, int]:
        """Exponents of mu in the action of theta*_mu on each generator."""
        a, b, c, m, n = self.a, self.b, self.c, self.m, self.n
        return {"x": b * c, "y": a * c, "z": a * b, "u": -m * b * c, "v": -n * a * c}


class DDSModel(Model):
    family = "dds"

    def __init__(self, spec: DDSSpec, ctx: FieldContext):
        super().__init__(spec, ctx)
        self.d1, self.d2 = spec.d1, spec.d2
        self.ring = PolyRing(ctx, ("x", "y1"), {"x"})
        self.gen_ring = PolyRing(ctx, ("x", "y1", "y2", "y3"), {"x"})
        self.kernel_ring = PolyRing(ctx, ("x",))
        self.inner_ring = PolyRing(ctx, ("x", "y1", "y2"), {"x"})
        P1 = _parse_plain(spec.p1, PolyRing(ctx, ("x", "y1")), "p1")
        P2 = _parse_plain(spec.p2, PolyRing(ctx, ("x", "y1", "y2")), "p2")
        self.r1 = _check_monic(P1, "y1", "P1")
        self.r2 = _check_monic(P2, "y2", "P2")
        self.P1 = self.ring.convert(P1)
        self.P2 = self.inner_ring.convert(P2)
        img_y2 = self.P1.shift((-self.d1, 0))
        inner_images = {"x": self.ring.var("x"), "y1": self.ring.var("y1"), "y2": img_y2}
        img_y3 = substitute(self.P2, inner_images, self.ring).shift((-self.d2, 0))
        self.generator_images = dict(inner_images, y3=img_y3)
        self.kernel_coordinates = ("x",)
        self._p1_0 = self.P1.coefficient_of("x", 0)
        g = self.gen_ring
        self._p1_0_gen = g.convert(self._p1_0)
        # P2(0, y1, y2) in generator variables
        self._p2_0_gen = g.convert(self.P2.coefficient_of("x", 0))
        self._P2_image = substitute(self.P2, inner_images, self.ring)
        _assert_relations(self)

    def relations(self):
        g = self.gen_ring
        x, y1, y2, y3 = g.gens()
        return [x ** self.d1 * y2 - g.convert(self.P1), x ** self.d2 * y3 - g.convert(self.P2)]

    def inner_represent(self, f: LaurentPoly) -> LaurentPoly | None:
        """Membership in the inner surface k[x, y1, y2]."""
        return _gds_represent(f, self.d1, self.P1, self._p1_0, self.generator_images["y2"], self.gen_ring)

    def represent(self, e: Element) -> LaurentPoly | None:
        return _dds_represent(self, e.value)

    def canonical_derivation(self) -> Derivation:
        return Derivation(self, {"y1": self.ring.monomial({"x": self.d1 + self.d2})})


_MODEL_CLASSES = {
    "gds": GdsModel,
    "dvcon": DVConModel,
    "dvgen": DVGenModel,
    "fm": FMModel,
    "dds": DDSModel,
}


def build_model(spec: VarietySpec, ctx: FieldContext) -> Model:
    """Realise ``spec`` over ``ctx``; raises SpecError on an invalid description."""
    cls = _MODEL_CLASSES.get(getattr(spec, "family", None))
    if cls is None:
        raise SpecError("invalid spec: unknown family")
    return cls(spec, ctx)


# -- helpers ------------------------------------------------------------------------------

def _parse_plain(text: str, ring: PolyRing, what: str) -> LaurentPoly:
    from .errors import ParseError

    try:
        f = parse_poly(text, ring)
    except ParseError as exc:
        raise ParseError(f"{what}: {exc}") from None
    if f.has_negative_exponents():
        raise _invalid(f"{what} must be a polynomial")
    return f


def _check_monic(P: LaurentPoly, v: str, what: str) -> int:
    if P.is_zero():
        raise _invalid(f"{what} is zero")
    parts = P.coefficients_in(v)
    deg = max(parts)
    if deg < 2:
        raise _invalid(f"{what} must have degree >= 2 in {v}")
    if parts[deg] != 1:
        raise _invalid(f"{what} must be monic in {v}")
    return deg


def _assert_relations(model: Model) -> None:
    for res in model.relation_residues():
        if not res.is_zero():
            raise AssertionError(f"defining relation does not vanish: {res}")


# -- derivation operations ---------------------------------------------------------------

def _same_model(model: Model, *objs) -> None:
    for o in objs:
        if o is not None and o.model != model:
            raise SpecError("model mismatch")


def canonical_derivation(model: Model) -> Derivation:
    return model.canonical_derivation()


def derive(model: Model, D: Derivation, e: Element) -> Element:
    """Leibniz extension of the coordinate images of ``D`` to ``e``."""
    _same_model(model, D, e)
    f = e.value
    total = model.ring.zero
    for v, img in D.images.items():
        if img:
            dv = partial_derivative(f, v)
            if dv:
                total = total + dv * img
    return Element(model, model.reduce(total))


def replica(model: Model, D: Derivation, h) -> Derivation:
    h = model.element(h)
    if not kernel_test(model, D, h):
        raise MathError("factor not in kernel")
    return D.scaled(h)


def kernel_test(model: Model, D: Derivation, e) -> bool:
    return derive(model, D, model.element(e)).is_zero()


def nilpotency_index(model: Model, D: Derivation, e, cap: int = DEFAULT_CAP) -> int:
    """Least n with D^n(e) = 0 (so index(0) = 0)."""
    cur = model.element(e)
    n = 0
    while not cur.is_zero():
        if n >= cap:
            raise MathError("cap exceeded")
        cur = derive(model, D, cur)
        n += 1
    return n


def exp_apply(model: Model, D: Derivation, f, e, cap: int = DEFAULT_CAP) -> Element:
    """Exp(f D)(e) = sum_i f^i D^i(e) / i!."""
    f = model.element(f)
    e = model.element(e)
    if not kernel_test(model, D, f):
        raise MathError("factor not in kernel")
    if f.is_zero():
        return e
    total = e.value
    term = e
    fpow = model.ring.one
    fact = 1
    i = 0
    while True:
        term = derive(model, D, term)
        if term.is_zero():
            break
        i += 1
        if i > cap:
            raise MathError("cap exceeded")
        fact *= i
        fpow = model.reduce(fpow * f.value)
        total = total + model.reduce(fpow * term.value).scale(Fraction(1, fact))
    return Element(model, model.reduce(total))


def conjugate_derivation(model: Model, phi, D: Derivation) -> Derivation:
    """phi D phi^{-1}, evaluated on every coordinate."""
    inv = phi.inverse()
    images = {}
    for v in model.ring.names:
        pre = inv.apply(Element(model, model.ring.var(v)))
        images[v] = phi.apply(derive(model, D, pre)).value
    return Derivation(model, images)


def replica_factor(model: Model, D1: Derivation, D0: Derivation) -> Element:
    """h with D1 = h * D0, found by exact division on one coordinate."""
    pivot = next((v for v in model.ring.names if D0.images[v]), None)
    if pivot is None:
        raise MathError("not a replica: reference derivation is zero")
    h = exact_divide(D1.images[pivot], D0.images[pivot])
    if h is None:
        raise MathError("not a replica")
    for v in model.ring.names:
        if model.reduce(h * D0.images[v]) != D1.images[v]:
            raise MathError("not a replica")
    return Element(model, h)


def member_of_coordinate_ring(model: Model, e) -> LaurentPoly:
    """Generator expression for ``e``; raises MathError('not a member') otherwise."""
    rep = model.represent(model.element(e))
    if rep is None:
        raise MathError("not a member")
    return rep


def is_member(model: Model, e) -> bool:
    return model.represent(model.element(e)) is not None


# -- membership algorithms -----------------------------------------------------------------

def _gds_represent(e: LaurentPoly, d: int, P: LaurentPoly, p0: LaurentPoly,
                   img_y2: LaurentPoly, gen_ring: PolyRing) -> LaurentPoly | None:
    """Write e as a combination of x^i y1^j y2^l (i < d or l = 0).

    The lowest x-power x^(i - d l) of such a monomial's image carries the
    coefficient y1^j P(0, y1)^l, so the lowest x-coefficient of e must be
    divisible by P(0, y1)^l; subtracting the matching terms raises the
    x-valuation and the process ends once no negative powers remain.
    """
    rep_poly = gen_ring.zero
    powers_p0 = {0: p0.ring.one}
    powers_img = {0: img_y2.ring.one}
    while True:
        val = e.valuation("x")
        if val is None or val >= 0:
            break
        l = -((val) // d)  # ceil(-val / d)
        i = val + d * l
        coeff = e.coefficient_of("x", val)
        if l not in powers_p0:
            powers_p0[l] = p0 ** l
            powers_img[l] = img_y2 ** l
        q, r = monic_divide(coeff, powers_p0[l], "y1")
        if r:
            return None
        e = e - q.shift((i, 0)) * powers_img[l]
        term = gen_ring.convert(q).shift((i, 0, 0) + (0,) * (gen_ring.nvars - 3))
        rep_poly = rep_poly + term * gen_ring.var("y2") ** l
    return rep_poly + gen_ring.convert(e)


def _dv_represent(e: LaurentPoly, P: LaurentPoly, ytilde: LaurentPoly, gen_ring: PolyRing) -> LaurentPoly | None:
    """P-adic expansion in z: e = sum r_i P^i with deg_z r_i < d; need ytilde^i r_i polynomial."""
    rem = e
    digits = []
    while rem:
        rem, r = monic_divide(rem, P, "z")
        digits.append(r)
    rep = gen_ring.zero
    y1 = gen_ring.var("y1")
    for i, r in enumerate(digits):
        if not r:
            continue
        coeff = r * ytilde ** i
        if coeff.has_negative_exponents():
            return None
        rep = rep + gen_ring.convert(coeff) * y1 ** i
    return rep


def _fm_represent(model: FMModel, e: LaurentPoly) -> LaurentPoly | None:
    """Descent on the x-valuation using x^i u^j (i < m) images x^(i-mj) (y^n v + 1)^j."""
    g = model.gen_ring
    m = model.m
    unit = model._unit_factor
    rep = g.zero
    powers = {0: model.ring.one}
    while True:
        val = e.valuation("x")
        if val is None or val >= 0:
            break
        j = -(val // m)
        i = val + m * j
        coeff = e.coefficient_of("x", val)
        if j not in powers:
            powers[j] = unit ** j
        q = exact_divide(coeff, powers[j])
        if q is None:
            return None
        e = model.reduce(e - q.shift((val, 0, 0, 0)) * powers[j])
        # q lives in (x, y, z, v); place it in the generator ring with x^i u^j
        rep = rep + g.convert(q).shift((i, 0, 0, j, 0))
    return rep + g.convert(e)


def _dds_represent(model: DDSModel, e: LaurentPoly) -> LaurentPoly | None:
    """Membership in B = B1[y3], B1 = k[x, y1, y2].

    Let N be the least integer with x^N e in B1 and T = ceil(N / d2).  If e is
    in B then the class of x^N e in B1/xB1 = (k[y1]/P1(0,y1))[y2] is a
    multiple of P2(0,y1,y2)^T; subtracting x^(d2 T - N) q y3^T lowers N.
    """
    g = model.gen_ring
    d2 = model.d2
    rep = g.zero
    img_y3 = model.generator_images["y3"]
    while True:
        val = e.valuation("x")
        top = 0 if val is None or val >= 0 else -val
        N = None
        inner = None
        for n in range(0, top + 1):
            inner = model.inner_represent(e.shift((n, 0)))
            if inner is not None:
                N = n
                break
        if N is None:  # pragma: no cover - x^top e is a polynomial, always in B1
            return None
        if N == 0:
            return rep + inner
        T = -(-N // d2)
        # class modulo x: the x-free part of the normal form, a polynomial in y1, y2
        ix = g.index["x"]
        beta = LaurentPoly(g, {ex: c for ex, c in inner.terms.items() if ex[ix] == 0})
        q, r = monic_divide(beta, model._p2_0_gen ** T, "y2")
        _, r = monic_divide(r, model._p1_0_gen, "y1")
        if r:
            return None
        shift = d2 * T - N
        q_coords = substitute(q, model.generator_images, model.ring)
        e = e - q_coords.shift((shift, 0)) * img_y3 ** T
        rep = rep + q.shift((shift, 0, 0, 0)) * g.var("y3") ** T
