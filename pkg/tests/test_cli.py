import glob
import json
import os
import random
from fractions import Fraction

import pytest

from almost_rigid.autos import compose
from almost_rigid.cli import main
from almost_rigid.errors import ParseError, SpecError
from almost_rigid.exactalg import PolyRing, format_poly, parse_poly
from almost_rigid.specfiles import load_automorphism, load_variety, parse_keyvalue, variety_text

from conftest import AUTOMORPHISMS, VARIETIES


def var(name):
    return os.path.join(VARIETIES, name + ".var")


def aut(name):
    return os.path.join(AUTOMORPHISMS, name + ".aut")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


# ---- key = value files ----


def test_keyvalue_forms():
    fields = parse_keyvalue(
        "family = fm  # comment\n a, b, c, m, n = 3, 4, 5, 2, 2; cyclotomic_order = 70\n"
        "p = 'y1^2; y2' \n sigma = [\"0\", \"1\"]"
    )
    assert fields == {
        "family": "fm", "a": 3, "b": 4, "c": 5, "m": 2, "n": 2,
        "cyclotomic_order": 70, "p": "y1^2; y2", "sigma": ["0", "1"],
    }


@pytest.mark.parametrize(
    "text, err, message",
    [
        ("d = 2\nd = 3", ParseError, "duplicate key"),
        ("d = 2\nd 2", ParseError, "key = value"),
        ("a, b = 1", ParseError, "2 keys but 1 values"),
        ("family = gds\nd = 2", SpecError, "invalid spec"),
        ("family = torus\nd = 2", SpecError, "family"),
        ("family = gds\nd = 2\nsigma = [\"0\", \"1\"]\ncolour = 3", SpecError, "colour"),
    ],
)
def test_keyvalue_errors(text, err, message):
    with pytest.raises(err, match=message):
        load_variety(text)


def test_missing_file():
    with pytest.raises(SpecError, match="cannot read"):
        load_variety("/nonexistent/file.var")


def test_automorphism_family_mismatch(gds2):
    with pytest.raises(SpecError, match="model mismatch"):
        load_automorphism(gds2, aut("fm_star_zeta"))


# ---- round trips ----


def _random_coefficient(rng, ctx):
    c = ctx.coerce(Fraction(rng.randint(-5, 5) or 1, rng.randint(1, 4)))
    if rng.random() < 0.4:
        c = c * ctx.zeta ** rng.randint(1, ctx.conductor - 1) + rng.randint(-2, 2)
    return c


def test_round_trip_random_polynomials(ctx12):
    rng = random.Random(0)
    ring = PolyRing(ctx12, ("x", "y1", "y2", "z"), {"x"})
    for _ in range(100):
        terms = {}
        for _ in range(rng.randint(1, 5)):
            e = (rng.randint(-3, 4), rng.randint(0, 3), rng.randint(0, 2), rng.randint(0, 2))
            terms[e] = _random_coefficient(rng, ctx12)
        f = ring.from_terms(terms)
        text = format_poly(f)
        g = parse_poly(text, ring)
        assert g == f
        assert format_poly(g) == text


@pytest.mark.parametrize("path", sorted(glob.glob(os.path.join(VARIETIES, "*.var"))), ids=os.path.basename)
def test_round_trip_variety_files(path):
    model = load_variety(path)
    text = variety_text(model)
    again = load_variety(text)
    assert variety_text(again) == text
    assert again.spec == model.spec


@pytest.mark.parametrize("path", sorted(glob.glob(os.path.join(AUTOMORPHISMS, "*.aut"))), ids=os.path.basename)
def test_automorphism_files_load(path):
    family = parse_keyvalue(open(path).read())["family"]
    variety = {
        "gds": "gds_two_roots", "dvcon": "dvcon_symmetric", "fm": "fm_34522", "dds": "dds_squares",
    }[family]
    model = load_variety(var(variety))
    a = load_automorphism(model, path)
    assert a.same_map(load_automorphism(model, path))
    assert compose(a, a.inverse()).is_identity()


# ---- commands ----


def test_apply(capsys):
    assert run(capsys, "apply", "--variety", var("gds_two_roots"), "--aut", aut("gds_h_minus_one"),
               "--element", "x") == (0, "-x", "")
    assert run(capsys, "apply", "--variety", var("gds_two_roots"), "--aut", aut("gds_u_one"),
               "--element", "y1")[:2] == (0, "y1 + x^2")
    code, _, err = run(capsys, "apply", "--variety", var("gds_two_roots"), "--aut", aut("gds_u_one"),
                       "--element", "y1 +")
    assert code == 2 and err.startswith("parse error:")


def test_exp(capsys):
    base = ("exp", "--variety", var("gds_two_roots"))
    assert run(capsys, *base, "--factor", "0", "--element", "y1")[:2] == (0, "y1")
    assert run(capsys, *base, "--factor", "1", "--element", "y2")[:2] == (0, "y2 + 2*y1 + x^2 - 1")
    code, _, err = run(capsys, *base, "--factor", "y1", "--element", "y1")
    assert code == 4 and "factor not in kernel" in err


def test_commutes_text_and_json_agree(capsys):
    base = ("commutes", "--variety", var("gds_two_roots"), "--aut", aut("gds_h_zeta"), "--factor", "x + x^2")
    code, text, _ = run(capsys, *base)
    assert code == 0
    code, out, _ = run(capsys, *base, "--json")
    data = json.loads(out)
    assert set(data) == {"closed_form", "oracle", "witness", "discrepancy"}
    assert data["closed_form"] is False and data["oracle"] is False
    assert set(data["witness"]) == {"generator", "lhs", "rhs"}
    assert "closed form: false" in text and "oracle: false" in text


def test_commutes_identity_and_dds(capsys):
    code, out, _ = run(capsys, "commutes", "--variety", var("gds_two_roots"), "--aut", aut("gds_identity"),
                       "--factor", "x", "--json")
    assert code == 0 and json.loads(out)["oracle"] is True
    code, out, _ = run(capsys, "member", "--variety", var("dds_squares"), "--aut", aut("dds_quarter_turn"),
                       "--factor", "1", "--json")
    data = json.loads(out)
    assert code == 0 and data["closed_form"] is True and data["oracle"] is True
    code, out, _ = run(capsys, "member", "--variety", var("dds_squares"), "--aut", aut("dds_quarter_turn"),
                       "--factor", "1")
    assert out.splitlines()[0] == "member: yes"


def test_structure(capsys):
    code, out, _ = run(capsys, "structure", "--variety", var("fm_34522"), "--factor", "1", "--json")
    assert code == 0
    assert json.loads(out) == {"op": "semidirect", "normal": {"unipotent": "R"}, "factor": {"cyclic": 70}}
    code, out, _ = run(capsys, "structure", "--variety", var("gds_two_roots"), "--factor", "1", "--json")
    data = json.loads(out)
    assert data["op"] == "semidirect" and data["factor"] == {"cyclic": 4}
    code, out, _ = run(capsys, "structure", "--variety", var("dvcon_symmetric"), "--factor", "y2")
    assert (code, out) == (0, "notice: structure unknown per paper")


def test_compose(capsys):
    code, out, _ = run(capsys, "compose", "--variety", var("gds_two_roots"), "--aut", aut("gds_h_two"),
                       "--aut", aut("gds_u_one"))
    assert (code, out) == (0, "(id, 1, 2, 1/4)")
    code, ident, _ = run(capsys, "compose", "--variety", var("gds_two_roots"), "--aut", aut("gds_identity"),
                         "--aut", aut("gds_swap"))
    _, swap, _ = run(capsys, "compose", "--variety", var("gds_two_roots"), "--aut", aut("gds_swap"),
                     "--aut", aut("gds_identity"))
    assert code == 0 and ident == swap
    code, _, err = run(capsys, "compose", "--variety", var("gds_two_roots"), "--aut", aut("gds_h_two"),
                       "--aut", aut("fm_plus"))
    assert code == 3 and "model mismatch" in err


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--variety", var("gds_two_roots"), "--trials", "0", "--json")
    data = json.loads(out)
    assert code == 0 and data["trials"] == 0 and data["seed"] == 0 and data["version"] == "0.1.0"
    code, out, _ = run(capsys, "verify", "--variety", var("fm_34522"), "--trials", "40", "--seed", "3", "--json")
    data = json.loads(out)
    assert code == 0 and data["flagged"]


@pytest.mark.parametrize(
    "argv, message",
    [
        (["apply", "--aut", "a", "--element", "x"], "needs --variety"),
        (["apply", "--variety", "v", "--element", "x"], "needs --aut"),
        (["exp", "--variety", "v", "--element", "x"], "needs --factor"),
        (["structure", "--variety", "v", "--factor", "1", "--seed", "2"], "does not take --seed"),
        (["compose", "--variety", "v", "--aut", "a"], "exactly two"),
        (["verify", "--variety", "v", "--trials", "-1"], "trials"),
        (["verify", "--variety", "/nonexistent.var"], "cannot read"),
    ],
)
def test_invalid_input_exit_3(capsys, argv, message):
    code, _, err = run(capsys, *argv)
    assert code == 3 and message in err


def test_math_error_exit_4(capsys):
    code, _, err = run(capsys, "commutes", "--variety", var("gds_two_roots"), "--aut", aut("gds_identity"),
                       "--factor", "0")
    assert code == 4 and "zero derivation" in err


def test_discrepancy_exit_5(capsys, monkeypatch):
    import almost_rigid.cli as cli
    from almost_rigid.isotropy import CrossReport, Discrepancy, IsotropyVerdict

    def broken(model, trials, seed):
        verdict = IsotropyVerdict(True, False, None, False, "")
        return CrossReport("gds", trials, seed, discrepancies=[Discrepancy(0, "forced", verdict)])

    monkeypatch.setattr(cli, "cross_verify", broken)
    code, _, _ = run(capsys, "verify", "--variety", var("gds_two_roots"), "--trials", "1")
    assert code == 5


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "almost_rigid", "apply", "--variety", var("gds_two_roots"),
                          "--aut", aut("gds_h_minus_one"), "--element", "x*y1"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "-x*y1"
