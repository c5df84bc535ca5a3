"""Automorphisms of the five families: construction, validation, group laws.

Every automorphism is stored as its parameters together with the images of
the model's localized coordinates.  ``apply`` is the ring automorphism; the
composite ``compose(a2, a1)`` is the automorphism whose ring action is
``e -> a1.apply(a2.apply(e))``, which is the order in which the datum law for
Danielewski surfaces composes data (``a2`` after ``a1`` as maps of varieties).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import MathError, SpecError
from .exactalg import (
    CycScalar,
    LaurentPoly,
    PolyRing,
    exponent_gcd,
    format_poly,
    scalar_order,
    substitute,
)
from .models import (
    DanielewskiVarietyModel,
    DDSModel,
    Derivation,
    Element,
    FMModel,
    GdsModel,
    Model,
    exp_apply,
    kernel_test,
)


def _scalar_text(c: CycScalar) -> str:
    return c.to_text()


def _perm_text(p: Sequence[int]) -> str:
    return "[" + ",".join(str(i) for i in p) + "]"


# -- base class ------------------------------------------------------------------------

class Automorphism:
    """A ring automorphism of a model, given on its localized coordinates."""

    kind = "map"

    def __init__(self, model: Model, images: Mapping[str, LaurentPoly]):
        self.model = model
        ring = model.ring
        full = {}
        for name in ring.names:
            img = images.get(name)
            if img is None:
                img = ring.var(name)
            elif isinstance(img, Element):
                img = img.value
            full[name] = model.reduce(ring.convert(img))
        for name in model.kernel_coordinates:
            if ring.is_laurent(name) and len(full[name].terms) != 1:
                raise MathError(f"image of {name} must be a scalar multiple of a coordinate")
        self.images = full
        self._inverse: Automorphism | None = None

    # core ------------------------------------------------------------------------
    def apply(self, e) -> Element:
        e = self.model.element(e)
        if e.model != self.model:
            raise SpecError("model mismatch")
        return Element(self.model, self.model.reduce(substitute(e.value, self.images, self.model.ring)))

    __call__ = apply

    def generator_images(self) -> dict[str, Element]:
        return {g: self.apply(self.model.gen(g)) for g in self.model.generators}

    def inverse(self) -> "Automorphism":
        if self._inverse is None:
            inv = self._build_inverse()
            inv._inverse = self
            self._inverse = inv
        return self._inverse

    def _build_inverse(self) -> "Automorphism":
        raise MathError("inverse not available for this automorphism")

    def is_identity(self) -> bool:
        return all(img == self.model.ring.var(n) for n, img in self.images.items())

    def same_map(self, other: "Automorphism") -> bool:
        return self.model == other.model and self.images == other.images

    def preserves_ring(self) -> bool:
        """True when every generator is sent into the coordinate ring."""
        return all(self.model.represent(img) is not None for img in self.generator_images().values())

    # reporting -------------------------------------------------------------------------
    def params(self) -> dict:
        return {"kind": self.kind, "images": {n: format_poly(v) for n, v in self.images.items()}}

    def describe(self) -> str:
        p = self.params()
        inner = ", ".join(f"{k}={v}" for k, v in p.items() if k != "kind")
        return f"{p['kind']}({inner})"

    def __repr__(self) -> str:
        return f"<{self.describe()}>"


class MapAutomorphism(Automorphism):
    """An automorphism known only through its images (and those of its inverse)."""

    kind = "map"

    def __init__(self, model, images, inverse_images=None, label: str = "map"):
        super().__init__(model, images)
        self._inverse_images = inverse_images
        self.label = label

    def _build_inverse(self):
        if self._inverse_images is None:
            raise MathError("inverse not available for this automorphism")
        return MapAutomorphism(self.model, self._inverse_images, self.images, label=f"inverse({self.label})")

    def params(self):
        d = super().params()
        d["label"] = self.label
        return d


def identity(model: Model) -> Automorphism:
    return MapAutomorphism(model, {}, {}, label="identity")


def exp_automorphism(model: Model, D: Derivation, f) -> Automorphism:
    """Exp(f D) as an automorphism; its inverse is Exp(-f D)."""
    f = model.element(f)
    if not kernel_test(model, D, f):
        raise MathError("factor not in kernel")
    images = {}
    inv = {}
    for v in model.ring.names:
        e = Element(model, model.ring.var(v))
        images[v] = exp_apply(model, D, f, e).value
        inv[v] = exp_apply(model, D, -f, e).value
    return MapAutomorphism(model, images, inv, label=f"Exp(({f})*D)")


def compose(a2: Automorphism, a1: Automorphism) -> Automorphism:
    """The automorphism e -> a1(a2(e)); parameter-level when both share a family."""
    if a1.model != a2.model:
        raise SpecError("model mismatch")
    model = a1.model
    if a2.is_identity():
        return a1
    if a1.is_identity():
        return a2
    images = {v: a1.apply(Element(model, img)).value for v, img in a2.images.items()}
    result = None
    if type(a1) is type(a2) and hasattr(a1, "_compose_params"):
        result = a1._compose_params(a2, a1)
        if result.images != images:
            raise AssertionError("parameter-level composition disagrees with the composite map")
        return result
    inv = None
    try:
        i1, i2 = a1.inverse(), a2.inverse()
        inv = {v: i2.apply(Element(model, img)).value for v, img in i1.images.items()}
    except MathError:
        inv = None
    return MapAutomorphism(model, images, inv, label=f"{_label(a2)} o {_label(a1)}")


def _label(a: Automorphism) -> str:
    return getattr(a, "label", None) or a.describe()


def invert(a: Automorphism) -> Automorphism:
    return a.inverse()


def apply(a: Automorphism, e) -> Element:
    return a.apply(e)


# -- generalized Danielewski surfaces --------------------------------------------------------

@dataclass(frozen=True)
class GdsDatum:
    """(alpha, mu, a, b): alpha a permutation of 1..r as the tuple (alpha(1), ..., alpha(r))."""

    alpha: tuple[int, ...]
    mu: CycScalar
    a: CycScalar
    b: LaurentPoly

    def __post_init__(self):
        alpha = tuple(int(i) for i in self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if sorted(alpha) != list(range(1, len(alpha) + 1)):
            raise SpecError("alpha must be a permutation of 1..r")
        if self.mu.is_zero() or self.a.is_zero():
            raise MathError("datum invalid: mu and a must be nonzero")

    @property
    def is_identity_perm(self) -> bool:
        return all(i == j + 1 for j, i in enumerate(self.alpha))

    def text(self) -> str:
        alpha = "id" if self.is_identity_perm else _perm_text(self.alpha)
        return f"({alpha}, {_scalar_text(self.mu)}, {_scalar_text(self.a)}, {format_poly(self.b)})"


def gds_datum(model: GdsModel, alpha=None, mu=1, a=1, b=0) -> GdsDatum:
    """Convenience constructor; scalars and b may be numbers, scalars or text."""
    from .exactalg import parse_poly, parse_scalar

    ctx = model.ctx
    r = model.r
    alpha = tuple(range(1, r + 1)) if alpha is None else tuple(alpha)
    if len(alpha) != r:
        raise SpecError(f"alpha must permute 1..{r}")

    def scal(v):
        return parse_scalar(v, ctx) if isinstance(v, str) else ctx.coerce(v)

    if isinstance(b, str):
        b = parse_poly(b, model.kernel_ring)
    elif isinstance(b, LaurentPoly):
        b = model.kernel_ring.convert(b)
    else:
        b = model.kernel_ring.const(b)
    if b.has_negative_exponents():
        raise SpecError("b must be a polynomial in x")
    return GdsDatum(alpha, scal(mu), scal(a), b)


def _require_standard(model: GdsModel) -> None:
    if not isinstance(model, GdsModel):
        raise SpecError("model mismatch: expected a generalized Danielewski surface")
    if not model.standard_form:
        raise SpecError("datum machinery requires a surface in standard form")


def _scale_x(f: LaurentPoly, a: CycScalar) -> LaurentPoly:
    """f(a x) for f in a ring containing x."""
    return substitute(f, {"x": f.ring.var("x").scale(a)})


def gds_validate_datum(model: GdsModel, datum: GdsDatum) -> LaurentPoly:
    """The common value c(x) = sigma_alpha(i)(a x) - mu sigma_i(x)."""
    _require_standard(model)
    sig = model.sigma
    if len(datum.alpha) != len(sig):
        raise SpecError(f"alpha must permute 1..{len(sig)}")
    c = None
    for i, s in enumerate(sig):
        ci = _scale_x(sig[datum.alpha[i] - 1], datum.a) - s.scale(datum.mu)
        if c is None:
            c = ci
        elif ci != c:
            raise MathError("datum invalid: c depends on i")
    return c


class GdsAutomorphism(Automorphism):
    kind = "gds"

    def __init__(self, model: GdsModel, datum: GdsDatum, c: LaurentPoly | None = None):
        self.datum = datum
        R = model.ring
        d = model.d
        if model.standard_form:
            c = gds_validate_datum(model, datum) if c is None else c
        else:
            if not datum.is_identity_perm:
                raise SpecError("datum machinery requires a surface in standard form")
            c = model.kernel_ring.zero
        self.c = c
        # y1 -> mu y1 + c(x) + (a x)^d b(x)
        ax_d = R.monomial({"x": d}).scale(datum.a ** d)
        c_tilde = R.convert(c) + ax_d * R.convert(datum.b)
        images = {"x": R.var("x").scale(datum.a), "y1": R.var("y1").scale(datum.mu) + c_tilde}
        super().__init__(model, images)
        self.c_tilde = c_tilde
        if model.standard_form:
            diff = self._psi_difference()
            if diff.valuation("x") is not None and diff.valuation("x") < d:
                raise AssertionError("Psi difference not divisible by x^d")
        elif not self.preserves_ring():
            raise MathError("datum invalid: y2 is not sent into the surface")

    def _psi_difference(self) -> LaurentPoly:
        model = self.model
        R = model.ring
        y1 = R.var("y1")
        mu, a = self.datum.mu, self.datum.a
        left = R.one
        right = R.one
        for s in model.sigma:
            sR = R.convert(s)
            left = left * (y1.scale(mu) + self.c_tilde - R.convert(_scale_x(s, a)))
            right = right * (y1 - sR)
        return left - right.scale(mu ** model.r)

    def _build_inverse(self):
        return GdsAutomorphism(self.model, gds_inverse_datum(self.model, self.datum))

    @staticmethod
    def _compose_params(a2, a1):
        return GdsAutomorphism(a1.model, gds_compose_data(a1.model, a2.datum, a1.datum))

    def params(self):
        dt = self.datum
        return {
            "kind": "gds",
            "alpha": list(dt.alpha),
            "mu": _scalar_text(dt.mu),
            "a": _scalar_text(dt.a),
            "b": format_poly(dt.b),
        }

    def describe(self) -> str:
        return "gds" + self.datum.text()


def gds_automorphism(model: GdsModel, datum: GdsDatum) -> GdsAutomorphism:
    if not isinstance(model, GdsModel):
        raise SpecError("model mismatch: expected a generalized Danielewski surface")
    return GdsAutomorphism(model, datum)


def gds_compose_data(model: GdsModel, d2: GdsDatum, d1: GdsDatum) -> GdsDatum:
    """Datum of d2 after d1: (a2 a1, mu2 mu1, a2 a1, a2^-d mu2 b1(x) + b2(a1 x))."""
    if len(d1.alpha) != len(d2.alpha):
        raise SpecError("model mismatch")
    alpha = tuple(d2.alpha[i - 1] for i in d1.alpha)
    b = d1.b.scale(d2.a ** (-model.d) * d2.mu) + _scale_x(d2.b, d1.a)
    out = GdsDatum(alpha, d2.mu * d1.mu, d2.a * d1.a, b)
    if model.standard_form:
        gds_validate_datum(model, out)
    return out


def gds_inverse_datum(model: GdsModel, dt: GdsDatum) -> GdsDatum:
    inv_alpha = [0] * len(dt.alpha)
    for i, j in enumerate(dt.alpha):
        inv_alpha[j - 1] = i + 1
    ainv = dt.a.inverse()
    b = _scale_x(dt.b, ainv).scale(-(dt.a ** model.d) * dt.mu.inverse())
    return GdsDatum(tuple(inv_alpha), dt.mu.inverse(), ainv, b)


def identity_datum(model: GdsModel) -> GdsDatum:
    return gds_datum(model)


# tau and the generators U, H, S

@dataclass(frozen=True)
class TauKind:
    """Full, Periodic(q0) or SPeriodic(s) normalisation of the roots."""

    name: str
    q: int | None = None

    @classmethod
    def full(cls):
        return cls("full")

    @classmethod
    def periodic(cls, q0: int):
        return cls("periodic", q0)

    @classmethod
    def speriodic(cls, s: int):
        return cls("speriodic", s)


def gds_tau(model: GdsModel, kind: TauKind) -> LaurentPoly:
    """A polynomial tau(x) normalising the roots as requested, else MathError."""
    _require_standard(model)
    sig = model.sigma
    if kind.name == "full":
        tau = sig[0]
        for s in sig:
            if not (s - tau).is_constant():
                raise MathError("no tau of requested kind")
        return tau
    if kind.name == "periodic":
        q0 = kind.q
        if not q0 or q0 < 1:
            raise SpecError("period must be a positive integer")
        s0 = sig[0]
        tau = LaurentPoly(s0.ring, {e: c for e, c in s0.terms.items() if e[0] % q0})
        for s in sig:
            if any(e[0] % q0 for e in (s - tau).terms):
                raise MathError("no tau of requested kind")
        return tau
    if kind.name == "speriodic":
        s_order = kind.q
        tau = _root_mean(model)
        shifted = [s - tau for s in sig]
        omega = model.ctx.primitive_root(s_order)
        rotated = sorted(format_poly(r.scale(omega)) for r in shifted)
        if rotated != sorted(format_poly(r) for r in shifted):
            raise MathError("no tau of requested kind")
        if sum(1 for r in shifted if r.is_zero()) > 1:
            raise MathError("no tau of requested kind")
        return tau
    raise SpecError(f"unknown tau kind {kind.name}")


def _root_mean(model: GdsModel) -> LaurentPoly:
    total = model.kernel_ring.zero
    for s in model.sigma:
        total = total + s
    return total.scale(Fraction(1, len(model.sigma)))


def h_group_order(model: GdsModel) -> int:
    """h with H = {a : a^h = 1} (0 when every a in k* gives an automorphism)."""
    _require_standard(model)
    exps = []
    sig = model.sigma
    for s in sig[1:]:
        exps.extend(e[0] for e in (s - sig[0]).terms if e[0] > 0)
    return exponent_gcd(exps)


def s_group(model: GdsModel) -> list[GdsDatum]:
    """All data (alpha, mu, 1, 0) that are valid, identity first."""
    _require_standard(model)
    sig = model.sigma
    r = len(sig)
    out = []
    for perm in itertools.permutations(range(1, r + 1)):
        mu = None
        for i in range(r):
            for j in range(i + 1, r):
                diff = sig[i] - sig[j]
                if diff:
                    target = sig[perm[i] - 1] - sig[perm[j] - 1]
                    # mu * diff = target must hold with mu a scalar
                    lead_e, lead_c = diff.leading_term()
                    cand = target.terms.get(lead_e)
                    if cand is None:
                        mu = False
                    else:
                        mu = cand / lead_c
                    break
            if mu is not None:
                break
        if not mu:
            continue
        dt = GdsDatum(perm, mu, model.ctx.one, model.kernel_ring.zero)
        try:
            gds_validate_datum(model, dt)
        except MathError:
            continue
        out.append(dt)
    return out


@dataclass(frozen=True)
class GeneratorRequest:
    """U(b), H(a), H(a, q0) or S(alpha, mu)."""

    which: str
    b: object = None
    a: object = None
    q0: int | None = None
    alpha: tuple[int, ...] | None = None
    mu: object = None

    @classmethod
    def U(cls, b):
        return cls("U", b=b)

    @classmethod
    def H(cls, a, q0: int | None = None):
        return cls("H", a=a, q0=q0)

    @classmethod
    def S(cls, alpha, mu):
        return cls("S", alpha=tuple(alpha), mu=mu)


def gds_generator(model: GdsModel, req: GeneratorRequest) -> GdsAutomorphism:
    """U_b, H_a, H_(a,q0) or S_(alpha,mu) built from its datum."""
    if req.which == "U":
        return gds_automorphism(model, gds_datum(model, b=req.b if req.b is not None else 0))
    _require_standard(model)
    if req.which == "H":
        dt = gds_datum(model, a=req.a)
        a = dt.a
        d = model.d
        small = [q for q in range(1, d) if (a ** q).is_one()]
        if req.q0 is None:
            if small:
                q0 = small[0]
                if q0 == 1:
                    return gds_automorphism(model, dt)
                kind = TauKind.periodic(q0)
            else:
                q0 = None
                kind = TauKind.full()
        else:
            q0 = req.q0
            if not small or small[0] != q0 or q0 < 2:
                raise MathError("preconditions on a/mu violated: q0 must be the least q in 2..d-1 with a^q = 1")
            kind = TauKind.periodic(q0)
        if req.q0 is None and not small:
            pass
        tau = gds_tau(model, kind)
        aut = gds_automorphism(model, dt)
        aut.tau = tau
        aut.q0 = q0
        return aut
    if req.which == "S":
        dt = gds_datum(model, alpha=req.alpha, mu=req.mu)
        if dt.is_identity_perm:
            if not dt.mu.is_one():
                raise MathError("preconditions on a/mu violated: alpha = id forces mu = 1")
            return gds_automorphism(model, dt)
        if dt.mu.is_one():
            raise MathError("preconditions on a/mu violated: alpha != id needs mu != 1")
        s = scalar_order(dt.mu)
        if s is None:
            raise MathError("preconditions on a/mu violated: mu must be a root of unity")
        tau = gds_tau(model, TauKind.speriodic(s))
        aut = gds_automorphism(model, dt)
        shifted = [sg - tau for sg in model.sigma]
        aut.tau = tau
        aut.s = s
        aut.i = 1 if any(r.is_zero() for r in shifted) else 0
        return aut
    raise SpecError(f"unknown generator {req.which}")


def gds_decompose(model: GdsModel, datum: GdsDatum) -> tuple[GdsDatum, GdsDatum, GdsDatum]:
    """(S, H, U) data with datum = (S o H) o U, U = (id, 1, 1, a^d mu^-1 b)."""
    _require_standard(model)
    s_dt = GdsDatum(datum.alpha, datum.mu, model.ctx.one, model.kernel_ring.zero)
    h_dt = GdsDatum(tuple(range(1, model.r + 1)), model.ctx.one, datum.a, model.kernel_ring.zero)
    u_dt = GdsDatum(
        tuple(range(1, model.r + 1)),
        model.ctx.one,
        model.ctx.one,
        datum.b.scale(datum.a ** model.d * datum.mu.inverse()),
    )
    for part in (s_dt, h_dt):
        gds_validate_datum(model, part)
    return s_dt, h_dt, u_dt


# -- Danielewski varieties ------------------------------------------------------------------

class DVAutomorphism(Automorphism):
    """y_j -> t_j y_sigma(j) (j = 2..m), z -> t_(m+1) z; y1 follows."""

    kind = "dv"

    def __init__(self, model: DanielewskiVarietyModel, sigma: Sequence[int], t: Sequence[CycScalar],
                 label: str = "dv", check: bool = True):
        m = model.m
        sigma = tuple(int(s) for s in sigma)
        t = tuple(model.ctx.coerce(x) for x in t)
        if sorted(sigma) != list(range(2, m + 1)):
            raise SpecError("permutation invalid: must permute 2..m")
        if len(t) != m:
            raise SpecError(f"expected {m} scalars t_2..t_(m+1)")
        if any(x.is_zero() for x in t):
            raise MathError("scalars must be nonzero")
        for j in range(2, m + 1):
            if model.k[sigma[j - 2] - 2] != model.k[j - 2]:
                raise MathError("permutation invalid: it must preserve the exponents k_j")
        self.sigma = sigma
        self.t = t
        self.label = label
        R = model.ring
        images = {f"y{j}": R.var(f"y{sigma[j - 2]}").scale(t[j - 2]) for j in range(2, m + 1)}
        images["z"] = R.var("z").scale(t[-1])
        if check:
            dv_condition_one(model, sigma, t)
        super().__init__(model, images)
        if check and model.represent(self.apply(model.gen("y1"))) is None:
            raise MathError("image of y1 is not in the coordinate ring")

    def _build_inverse(self):
        m = self.model.m
        inv_sigma = [0] * (m - 1)
        for j in range(2, m + 1):
            inv_sigma[self.sigma[j - 2] - 2] = j
        # y_j -> t'_j y_{sigma^-1(j)} with t'_j = 1 / t_{sigma^-1(j)}
        t = [self.t[inv_sigma[j - 2] - 2].inverse() for j in range(2, m + 1)]
        t.append(self.t[-1].inverse())
        return DVAutomorphism(self.model, inv_sigma, t, label=f"inverse({self.label})", check=False)

    @staticmethod
    def _compose_params(a2, a1):
        # ring map a1 o a2: y_j -> t2_j t1_{sigma2(j)} y_{sigma1(sigma2(j))}
        m = a1.model.m
        sigma = []
        t = []
        for j in range(2, m + 1):
            s2 = a2.sigma[j - 2]
            sigma.append(a1.sigma[s2 - 2])
            t.append(a2.t[j - 2] * a1.t[s2 - 2])
        t.append(a2.t[-1] * a1.t[-1])
        return DVAutomorphism(a1.model, sigma, t, label=f"{a2.label} o {a1.label}", check=False)

    def params(self):
        return {
            "kind": "dv",
            "sigma": list(self.sigma),
            "t": [_scalar_text(x) for x in self.t],
        }

    def describe(self) -> str:
        return f"dv(sigma={_perm_text(self.sigma)}, t=[{', '.join(_scalar_text(x) for x in self.t)}])"

    @property
    def lambda1(self) -> CycScalar:
        """Scalar of the forced torus action on y1 (prod t_j^-k_j)."""
        prod = self.model.ctx.one
        for tj, kj in zip(self.t[:-1], self.model.k):
            prod = prod * tj ** kj
        return prod.inverse()


def dv_condition_one(model: DanielewskiVarietyModel, sigma, t) -> None:
    """Check ytilde | s_i(t_2 y_sigma(2), ...) - t_(m+1)^(d-i) s_i for i = 0..d-2."""
    K = model.kernel_ring
    imgs = {f"y{j}": K.var(f"y{sigma[j - 2]}").scale(t[j - 2]) for j in range(2, model.m + 1)}
    k = model.k
    tz = t[-1]
    for i, s_i in enumerate(model.s_coefficients()):
        diff = substitute(s_i, imgs, K) - s_i.scale(tz ** (model.d - i))
        for e in diff.terms:
            if any(ej < kj for ej, kj in zip(e, k)):
                raise MathError(f"condition (1) fails at i={i}")


def _require_dv(model, family=None):
    if not isinstance(model, DanielewskiVarietyModel):
        raise SpecError("model mismatch: expected a Danielewski variety")
    if family and model.family != family:
        raise SpecError(f"model mismatch: expected a {family} variety")


def dvcon_torus(model, lambdas: Sequence) -> DVAutomorphism:
    _require_dv(model, "dvcon")
    lam = [model.ctx.coerce(x) for x in lambdas]
    if len(lam) != model.m - 1:
        raise SpecError(f"expected {model.m - 1} torus scalars")
    if any(x.is_zero() for x in lam):
        raise MathError("torus scalars must be nonzero")
    return DVAutomorphism(model, range(2, model.m + 1), lam + [model.ctx.one], label="torus")


def dvcon_symmetry(model, sigma: Sequence[int]) -> DVAutomorphism:
    _require_dv(model, "dvcon")
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(2, model.m + 1)):
        raise SpecError("permutation invalid: must permute 2..m")
    for j in range(2, model.m + 1):
        if model.k[sigma[j - 2] - 2] != model.k[j - 2]:
            raise MathError("permutation does not stabilize the monomial")
    return DVAutomorphism(model, sigma, [model.ctx.one] * model.m, label="symmetry")


@dataclass(frozen=True)
class PZV:
    """P(z) = z^u Q(z^v); ``pure_power`` marks P = z^d (v is then None)."""

    u: int
    v: int | None
    Q: LaurentPoly
    pure_power: bool


def pzv_decompose(P: LaurentPoly, var: str = "z") -> PZV:
    if P.is_zero():
        raise MathError("P must be nonzero")
    i = P.ring.index[var]
    exps = sorted({e[i] for e in P.terms})
    u = exps[0]
    gaps = [e - u for e in exps]
    v = exponent_gcd(gaps)
    T = PolyRing(P.ctx, ("t",))
    if v == 0:
        Q = T.const(P.coefficient_of(var, u).constant_term())
        return PZV(u, None, Q, True)
    Q = T.from_terms({((e[i] - u) // v,): c for e, c in P.terms.items()})
    return PZV(u, v, Q, False)


def dvcon_quasitorus(model, t) -> DVAutomorphism:
    _require_dv(model, "dvcon")
    t = model.ctx.coerce(t)
    if t.is_zero():
        raise MathError("t must be nonzero")
    dec = pzv_decompose(model.P)
    if not dec.pure_power and not (t ** dec.v).is_one():
        raise MathError("t^v != 1")
    return DVAutomorphism(model, range(2, model.m + 1), [model.ctx.one] * (model.m - 1) + [t], label="quasitorus")


def dvgen_element(model, sigma: Sequence[int], t: Sequence) -> DVAutomorphism:
    _require_dv(model)
    return DVAutomorphism(model, sigma, t, label="dv")


# -- Finston-Maubach threefold ----------------------------------------------------------------

class FMAutomorphism(Automorphism):
    """theta*_mu o theta+_f: v -> mu^(-nac) v + theta*(f) mu^(mbc) x^m."""

    kind = "fm"

    def __init__(self, model: FMModel, mu, f):
        if not isinstance(model, FMModel):
            raise SpecError("model mismatch: expected a Finston-Maubach threefold")
        mu = model.ctx.coerce(mu)
        if mu.is_zero():
            raise MathError("mu must be nonzero")
        f = model.element(f)
        if f.value.has_negative_exponents() or f.value.degree("v") not in (None, 0):
            raise MathError("f must lie in R = C[x,y,z]/(x^a+y^b+z^c)")
        self.mu = mu
        self.f = f
        w = model.weights()
        R = model.ring
        star = {n: R.var(n).scale(mu ** w[n]) for n in ("x", "y", "z")}
        star["v"] = R.var("v").scale(mu ** w["v"])
        theta_f = model.reduce(substitute(f.value, star, R))
        images = dict(star)
        images["v"] = star["v"] + theta_f.shift((model.m, 0, 0, 0)).scale(mu ** (model.m * model.b * model.c))
        super().__init__(model, images)

    @property
    def weight(self) -> int:
        model = self.model
        return model.m * model.b * model.c + model.n * model.a * model.c

    def _star_apply(self, mu: CycScalar, f: Element) -> Element:
        model = self.model
        w = model.weights()
        imgs = {n: model.ring.var(n).scale(mu ** w[n]) for n in ("x", "y", "z", "v")}
        return Element(model, model.reduce(substitute(f.value, imgs, model.ring)))

    def _build_inverse(self):
        # (theta*_mu theta+_f)^-1 = theta*_{1/mu} theta+_{-mu^w theta*_mu(f)}
        g = -(self._star_apply(self.mu, self.f) * (self.mu ** self.weight))
        return FMAutomorphism(self.model, self.mu.inverse(), g)

    @staticmethod
    def _compose_params(a2, a1):
        # a1 o a2 = theta*_{mu1 mu2} theta+_{mu2^-w theta*_{1/mu2}(f1) + f2}
        mu2 = a2.mu
        f = a1._star_apply(mu2.inverse(), a1.f) * (mu2 ** (-a1.weight)) + a2.f
        return FMAutomorphism(a1.model, a1.mu * mu2, f)

    def params(self):
        return {"kind": "fm", "mu": _scalar_text(self.mu), "f": str(self.f)}

    def describe(self) -> str:
        return f"fm(mu={_scalar_text(self.mu)}, f={self.f})"


@dataclass(frozen=True)
class FMRequest:
    which: str
    value: object

    @classmethod
    def Plus(cls, f):
        return cls("plus", f)

    @classmethod
    def Star(cls, mu):
        return cls("star", mu)


def fm_generators(model: FMModel, req: FMRequest) -> FMAutomorphism:
    if req.which == "plus":
        return FMAutomorphism(model, 1, req.value)
    if req.which == "star":
        from .exactalg import parse_scalar

        mu = parse_scalar(req.value, model.ctx) if isinstance(req.value, str) else req.value
        return FMAutomorphism(model, mu, 0)
    raise SpecError(f"unknown Finston-Maubach generator {req.which}")


# -- double Danielewski surfaces -------------------------------------------------------------

class DDSAutomorphism(Automorphism):
    """x -> lambda x, y1 -> a y1 + b(x)."""

    kind = "dds"

    def __init__(self, model: DDSModel, lam, a, b, verify_membership: bool = True):
        if not isinstance(model, DDSModel):
            raise SpecError("model mismatch: expected a double Danielewski surface")
        ctx = model.ctx
        lam, a = ctx.coerce(lam), ctx.coerce(a)
        if lam.is_zero() or a.is_zero():
            raise MathError("lambda and a must be nonzero")
        if isinstance(b, str):
            from .exactalg import parse_poly

            b = parse_poly(b, model.kernel_ring)
        elif isinstance(b, LaurentPoly):
            b = model.kernel_ring.convert(b)
        else:
            b = model.kernel_ring.const(b)
        if b.has_negative_exponents():
            raise SpecError("b must be a polynomial in x")
        self.lam, self.a, self.b = lam, a, b
        self.verified = verify_membership
        R = model.ring
        super().__init__(model, {"x": R.var("x").scale(lam), "y1": R.var("y1").scale(a) + R.convert(b)})
        if verify_membership:
            for g in ("y2", "y3"):
                if model.represent(self.apply(model.gen(g))) is None:
                    raise MathError("image not in coordinate ring")

    def _build_inverse(self):
        b = _scale_x(self.b, self.lam.inverse()).scale(-self.a.inverse())
        return DDSAutomorphism(self.model, self.lam.inverse(), self.a.inverse(), b, verify_membership=self.verified)

    @staticmethod
    def _compose_params(a2, a1):
        b = a1.b.scale(a2.a) + _scale_x(a2.b, a1.lam)
        return DDSAutomorphism(
            a1.model, a1.lam * a2.lam, a1.a * a2.a, b, verify_membership=a1.verified and a2.verified
        )

    def params(self):
        return {"kind": "dds", "lambda": _scalar_text(self.lam), "a": _scalar_text(self.a), "b": format_poly(self.b)}

    def describe(self) -> str:
        return f"dds(lambda={_scalar_text(self.lam)}, a={_scalar_text(self.a)}, b={format_poly(self.b)})"


def dds_automorphism(model: DDSModel, lam, a, b=0, verify_membership: bool = True) -> DDSAutomorphism:
    return DDSAutomorphism(model, lam, a, b, verify_membership=verify_membership)
