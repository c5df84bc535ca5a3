"""Variety and automorphism description files.

Both use a small key = value format; entries are separated by newlines or
``;`` and ``#`` starts a comment.  Values are JSON lists, quoted strings,
integers or bare words::

    family = gds ; cyclotomic_order = 12
    d = 2
    sigma = ["0", "1"]

Several integer keys may share one entry: ``a, b, c, m, n = 3, 4, 5, 2, 2``.
"""

from __future__ import annotations

import json
import os
import re

from .autos import (
    Automorphism,
    FMAutomorphism,
    dds_automorphism,
    dvcon_quasitorus,
    dvcon_symmetry,
    dvcon_torus,
    dvgen_element,
    gds_automorphism,
    gds_datum,
    identity,
)
from .errors import ParseError, SpecError
from .exactalg import cyclotomic_context, parse_scalar
from .models import DDSSpec, DVConSpec, DVGenSpec, FMSpec, GdsSpec, Model, build_model

DEFAULT_CONDUCTOR = 12

_KEY = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


def _split_entries(text: str) -> list[str]:
    """Split on newlines and on ';' outside quotes and brackets; drop comments."""
    out, buf = [], []
    quote = None
    depth = 0
    comment = False
    for ch in text:
        if comment:
            if ch == "\n":
                comment = False
                out.append("".join(buf))
                buf = []
            continue
        if quote:
            buf.append(ch)
            if ch == quote:
                quote = None
            continue
        if ch == "#":
            comment = True
            continue
        if ch in "\"'":
            quote = ch
        elif ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if (ch == ";" and depth == 0) or ch == "\n":
            out.append("".join(buf))
            buf = []
            continue
        buf.append(ch)
    out.append("".join(buf))
    return [e.strip() for e in out if e.strip()]


def _value(raw: str):
    raw = raw.strip()
    if not raw:
        raise ParseError("missing value")
    if raw[0] in "[\"":
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed value {raw!r}: {exc.msg}") from None
    if raw[0] == "'" and raw.endswith("'") and len(raw) >= 2:
        return raw[1:-1]
    try:
        return int(raw)
    except ValueError:
        pass
    if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", raw):
        return raw
    raise ParseError(f"malformed value {raw!r}")


def parse_keyvalue(text: str) -> dict:
    """Parse key = value entries into a dict; repeated keys are an error."""
    out: dict = {}
    for entry in _split_entries(text):
        if "=" not in entry:
            raise ParseError(f"expected 'key = value', got {entry!r}")
        lhs, rhs = entry.split("=", 1)
        keys = [k.strip() for k in lhs.split(",")]
        for k in keys:
            if not _KEY.match(k):
                raise ParseError(f"invalid key {k!r}")
        if len(keys) == 1:
            values = [_value(rhs)]
        else:
            values = [_value(v) for v in rhs.split(",")]
            if len(values) != len(keys):
                raise ParseError(f"{len(keys)} keys but {len(values)} values")
        for k, v in zip(keys, values):
            if k in out:
                raise ParseError(f"duplicate key {k!r}")
            out[k] = v
    return out


def _read(path_or_text: str) -> str:
    if "=" not in path_or_text or os.path.exists(path_or_text):
        try:
            with open(path_or_text, encoding="utf-8") as fh:
                return fh.read()
        except OSError as exc:
            raise SpecError(f"cannot read {path_or_text}: {exc.strerror}") from None
    return path_or_text


# -- varieties --------------------------------------------------------------------------------

_VARIETY_KEYS = {
    "gds": ({"d"}, {"sigma", "p"}),
    "dvcon": ({"m", "k", "p"}, set()),
    "dvgen": ({"m", "k", "d", "s"}, set()),
    "fm": ({"a", "b", "c", "m", "n"}, set()),
    "dds": ({"d1", "d2", "p1", "p2"}, set()),
}


def _check_keys(fields: dict, required: set, optional: set, where: str) -> None:
    missing = sorted(required - fields.keys())
    if missing:
        raise SpecError(f"invalid spec: {where} is missing {', '.join(missing)}")
    extra = sorted(fields.keys() - required - optional)
    if extra:
        raise SpecError(f"invalid spec: unknown key {extra[0]!r} for {where}")


def _int(fields, key):
    v = fields[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise SpecError(f"invalid spec: {key} must be an integer")
    return v


def _str_list(fields, key):
    v = fields[key]
    if not isinstance(v, list):
        raise SpecError(f"invalid spec: {key} must be a list")
    return tuple(str(x) for x in v)


def _int_list(fields, key):
    v = fields[key]
    if not isinstance(v, list) or not all(isinstance(x, int) for x in v):
        raise SpecError(f"invalid spec: {key} must be a list of integers")
    return tuple(v)


def variety_spec_from_fields(fields: dict):
    """(spec, conductor) from parsed key-value fields."""
    fields = dict(fields)
    family = fields.pop("family", None)
    if family not in _VARIETY_KEYS:
        raise SpecError(f"invalid spec: unknown family {family!r}")
    conductor = fields.pop("cyclotomic_order", DEFAULT_CONDUCTOR)
    if not isinstance(conductor, int) or conductor < 1:
        raise SpecError("invalid spec: cyclotomic_order must be a positive integer")
    required, optional = _VARIETY_KEYS[family]
    _check_keys(fields, required, optional, family)
    if family == "gds":
        sigma = _str_list(fields, "sigma") if "sigma" in fields else None
        p = str(fields["p"]) if "p" in fields else None
        spec = GdsSpec(_int(fields, "d"), sigma=sigma, p=p)
    elif family == "dvcon":
        spec = DVConSpec(_int(fields, "m"), _int_list(fields, "k"), str(fields["p"]))
    elif family == "dvgen":
        spec = DVGenSpec(_int(fields, "m"), _int_list(fields, "k"), _int(fields, "d"), _str_list(fields, "s"))
    elif family == "fm":
        spec = FMSpec(*(_int(fields, k) for k in ("a", "b", "c", "m", "n")))
    else:
        spec = DDSSpec(_int(fields, "d1"), _int(fields, "d2"), str(fields["p1"]), str(fields["p2"]))
    return spec, conductor


def load_variety(path_or_text: str) -> Model:
    """Build a model from a variety file (or inline key-value text)."""
    spec, conductor = variety_spec_from_fields(parse_keyvalue(_read(path_or_text)))
    return build_model(spec, cyclotomic_context(conductor))


def variety_text(model: Model) -> str:
    """Serialize a model's spec back to the file format."""
    spec = model.spec
    lines = [f"family = {spec.family}", f"cyclotomic_order = {model.ctx.conductor}"]
    for name in spec.__dataclass_fields__:
        v = getattr(spec, name)
        if v is None:
            continue
        if isinstance(v, tuple):
            v = json.dumps(list(v))
        elif isinstance(v, str):
            v = json.dumps(v)
        lines.append(f"{name} = {v}")
    return "\n".join(lines) + "\n"


# -- automorphisms -----------------------------------------------------------------------------

def _scalar(model: Model, v):
    if isinstance(v, bool):
        raise SpecError("invalid automorphism: expected a scalar")
    return parse_scalar(str(v), model.ctx)


def automorphism_from_fields(model: Model, fields: dict) -> Automorphism:
    fields = dict(fields)
    family = fields.pop("family", model.family)
    if family != model.family:
        raise SpecError(f"model mismatch: automorphism for {family} applied to a {model.family} variety")
    kind = fields.pop("kind", None)
    if kind == "identity":
        _check_keys(fields, set(), set(), "identity")
        return identity(model)
    if family == "gds":
        _check_keys(fields, set(), {"alpha", "mu", "a", "b"}, "gds automorphism")
        alpha = _int_list(fields, "alpha") if "alpha" in fields else None
        dt = gds_datum(
            model,
            alpha=alpha,
            mu=_scalar(model, fields.get("mu", 1)),
            a=_scalar(model, fields.get("a", 1)),
            b=str(fields.get("b", "0")),
        )
        return gds_automorphism(model, dt)
    if family == "dvcon" and kind in ("torus", "symmetry", "quasitorus"):
        if kind == "torus":
            _check_keys(fields, {"lambda"}, set(), "torus")
            return dvcon_torus(model, [_scalar(model, x) for x in _str_list(fields, "lambda")])
        if kind == "symmetry":
            _check_keys(fields, {"sigma"}, set(), "symmetry")
            return dvcon_symmetry(model, _int_list(fields, "sigma"))
        _check_keys(fields, {"t"}, set(), "quasitorus")
        return dvcon_quasitorus(model, _scalar(model, fields["t"]))
    if family in ("dvcon", "dvgen"):
        if kind not in (None, "general"):
            raise SpecError(f"invalid automorphism: unknown kind {kind!r}")
        _check_keys(fields, {"t"}, {"sigma"}, f"{family} automorphism")
        sigma = _int_list(fields, "sigma") if "sigma" in fields else tuple(range(2, model.m + 1))
        return dvgen_element(model, sigma, [_scalar(model, x) for x in _str_list(fields, "t")])
    if family == "fm":
        _check_keys(fields, set(), {"mu", "f"}, "fm automorphism")
        if (kind == "plus" and "mu" in fields) or (kind == "star" and "f" in fields):
            raise SpecError(f"invalid automorphism: unexpected key for kind {kind}")
        if kind not in (None, "plus", "star"):
            raise SpecError(f"invalid automorphism: unknown kind {kind!r}")
        mu = _scalar(model, fields.get("mu", 1))
        f = model.parse(str(fields.get("f", "0")))
        return FMAutomorphism(model, mu, f)
    if family == "dds":
        _check_keys(fields, set(), {"lambda", "a", "b", "verify"}, "dds automorphism")
        verify = fields.get("verify", "true")
        if verify not in ("true", "false"):
            raise SpecError("invalid automorphism: verify must be true or false")
        return dds_automorphism(
            model,
            _scalar(model, fields.get("lambda", 1)),
            _scalar(model, fields.get("a", 1)),
            str(fields.get("b", "0")),
            verify_membership=verify == "true",
        )
    raise SpecError(f"invalid automorphism: unknown family {family!r}")


def load_automorphism(model: Model, path_or_text: str) -> Automorphism:
    return automorphism_from_fields(model, parse_keyvalue(_read(path_or_text)))
