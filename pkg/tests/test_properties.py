"""Hypothesis properties: field laws, derivation identities, group laws, oracle soundness."""

import random
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from almost_rigid.autos import (
    FMAutomorphism,
    compose,
    dds_automorphism,
    dvcon_symmetry,
    dvcon_torus,
    exp_automorphism,
    gds_automorphism,
    gds_compose_data,
    gds_inverse_datum,
    identity_datum,
)
from almost_rigid.exactalg import (
    PolyRing,
    exponent_gcd,
    format_poly,
    parse_poly,
    partial_derivative,
    substitute,
)
from almost_rigid.isotropy import (
    _random_gds,
    centralizer_test,
    commutes,
    dds_membership,
    fm_membership,
    torus_predicate,
    random_automorphism,
    random_polynomial,
    symmetric_predicate,
)
from almost_rigid.models import Element, conjugate_derivation, derive, replica, replica_factor

seeds = st.integers(min_value=0, max_value=2**32 - 1)
small = st.integers(min_value=-4, max_value=4)


def scalars(ctx):
    coeffs = st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=5),
                      min_size=ctx.degree, max_size=ctx.degree)
    return coeffs.map(lambda cs: sum((ctx.zeta ** i * c for i, c in enumerate(cs)), ctx.zero))


# ---- exact arithmetic ----


@given(st.data())
def test_field_laws(ctx12, data):
    a, b, c = (data.draw(scalars(ctx12)) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if not a.is_zero():
        assert a * a.inverse() == ctx12.one
        assert (a * b) / a == b


@given(seeds)
def test_parse_print_round_trip(ctx12, seed):
    rng = random.Random(seed)
    ring = PolyRing(ctx12, ("x", "y1", "y2"), {"x"})
    f = random_polynomial(rng, ring) * ring.monomial({"x": -rng.randint(0, 3)})
    assert parse_poly(format_poly(f), ring) == f


@given(seeds)
def test_substitute_is_a_homomorphism(ctx12, seed):
    rng = random.Random(seed)
    ring = PolyRing(ctx12, ("x", "y1", "y2"))
    f, g = random_polynomial(rng, ring), random_polynomial(rng, ring)
    images = {v: random_polynomial(rng, ring, max_degree=2) for v in ring.names}
    assert substitute(f * g, images) == substitute(f, images) * substitute(g, images)
    assert substitute(f + g, images) == substitute(f, images) + substitute(g, images)


@given(seeds)
def test_formal_chain_rule(ctx12, seed):
    rng = random.Random(seed)
    ring = PolyRing(ctx12, ("x", "y1", "y2"))
    f = random_polynomial(rng, ring)
    images = {v: random_polynomial(rng, ring, max_degree=2) for v in ring.names}
    for w in ring.names:
        lhs = partial_derivative(substitute(f, images), w)
        rhs = ring.zero
        for v in ring.names:
            rhs = rhs + substitute(partial_derivative(f, v), images) * partial_derivative(images[v], w)
        assert lhs == rhs


@given(seeds, st.lists(small, min_size=3, max_size=3))
def test_root_of_unity_scaling(ctx12, seed, weights):
    # lambda f(X) = mu^m f(mu^a X) iff mu^(m + a.i) = lambda on the support of f
    rng = random.Random(seed)
    ring = PolyRing(ctx12, ("x", "y", "z"))
    f = random_polynomial(rng, ring)
    mu = ctx12.zeta ** rng.randrange(12)
    m, a = weights[0], weights[1:] + [weights[0] - weights[1]]
    scaled = substitute(f, {v: ring.var(v).scale(mu ** k) for v, k in zip(ring.names, a)}).scale(mu ** m)
    support = [m + sum(k * e for k, e in zip(a, exps)) for exps in f.terms]
    lam = mu ** support[0]
    assert (scaled == f.scale(lam)) == all(mu ** s == lam for s in support)


def test_exponent_gcd_characterizes_orders(ctx12):
    z = ctx12.zeta
    for es in ([4, 6], [3, 9, 12], [5], [2, 7]):
        g = exponent_gcd(es)
        for k in range(12):
            assert all((z ** k) ** e == ctx12.one for e in es) == ((z ** k) ** g == ctx12.one)


# ---- derivations on every family ----

FAMILIES = ["gds2", "dvcon23", "dvcon22", "dvgen_rigid", "fm", "dds"]


def element(rng, model, max_degree=3):
    gring = PolyRing(model.ctx, model.generators)
    return model.from_generators(gring.convert(random_polynomial(rng, gring, max_degree=max_degree)))


def kernel_element(rng, model, max_degree=2):
    f = random_polynomial(rng, model.kernel_ring, max_degree=max_degree, max_terms=3, nonzero=False)
    return Element(model, model.reduce(model.ring.convert(f)))


def nonzero_kernel(rng, model, max_degree=2):
    while True:
        h = kernel_element(rng, model, max_degree)
        if not h.is_zero():
            return h


@given(st.sampled_from(FAMILIES), seeds)
def test_leibniz(request_models, family, seed):
    model = request_models[family]
    rng = random.Random(seed)
    D = model.canonical_derivation()
    f, g = element(rng, model), element(rng, model)
    assert derive(model, D, f * g) == derive(model, D, f) * g + f * derive(model, D, g)


@given(st.sampled_from(FAMILIES), seeds)
def test_chain_rule_on_models(request_models, family, seed):
    # D(P(alpha(X))) = sum alpha(dP/dX_i) D(alpha(X_i)) over the generators
    model = request_models[family]
    rng = random.Random(seed)
    D = model.canonical_derivation()
    alpha = random_automorphism(rng, model)
    gring = PolyRing(model.ctx, model.generators)
    P = random_polynomial(rng, gring, max_degree=3)
    lhs = derive(model, D, alpha.apply(model.from_generators(P)))
    rhs = model.zero
    for g in model.generators:
        dP = model.from_generators(partial_derivative(P, g))
        rhs = rhs + alpha.apply(dP) * derive(model, D, alpha.apply(model.gen(g)))
    assert lhs == rhs


@given(st.sampled_from(FAMILIES), seeds)
def test_exp_group_law(request_models, family, seed):
    model = request_models[family]
    rng = random.Random(seed)
    D = model.canonical_derivation()
    f, g = kernel_element(rng, model), kernel_element(rng, model)
    lhs = compose(exp_automorphism(model, D, f), exp_automorphism(model, D, g))
    assert lhs.same_map(exp_automorphism(model, D, f + g))


@given(st.sampled_from(FAMILIES), seeds)
def test_oracle_sound_on_non_generators(request_models, family, seed):
    model = request_models[family]
    rng = random.Random(seed)
    D = replica(model, model.canonical_derivation(), nonzero_kernel(rng, model, 1))
    theta = random_automorphism(rng, model)
    v = commutes(model, theta, D)
    e = element(rng, model)
    lhs, rhs = theta.apply(derive(model, D, e)), derive(model, D, theta.apply(e))
    if v.oracle:
        assert lhs == rhs
    else:
        w = v.witness
        g = model.gen(w.generator)
        assert theta.apply(derive(model, D, g)) == w.lhs != w.rhs == derive(model, D, theta.apply(g))


@given(st.sampled_from(FAMILIES), seeds)
def test_conjugation_gives_scalar_replica(request_models, family, seed):
    model = request_models[family]
    rng = random.Random(seed)
    D = model.canonical_derivation()
    phi = random_automorphism(rng, model)
    lam = replica_factor(model, conjugate_derivation(model, phi, D), D)
    assert lam.value.is_constant() and not lam.is_zero()


@given(st.sampled_from(FAMILIES), seeds)
def test_centralizer_biconditional(request_models, family, seed):
    model = request_models[family]
    rng = random.Random(seed)
    D = model.canonical_derivation()
    for _ in range(20):
        theta = random_automorphism(rng, model)
        if commutes(model, theta, D).oracle:
            break
    else:
        theta = exp_automorphism(model, D, kernel_element(rng, model))
    commutes_with_exp, fixes_f = centralizer_test(model, theta, kernel_element(rng, model), D)
    assert commutes_with_exp == fixes_f


@given(st.sampled_from(FAMILIES), seeds)
def test_equal_kernel_replicas_commute(request_models, family, seed):
    # Exp(f h1 D) lies in Aut(h2 D) for kernel elements f, h1, h2
    model = request_models[family]
    rng = random.Random(seed)
    D = model.canonical_derivation()
    D1 = replica(model, D, nonzero_kernel(rng, model, 1))
    D2 = replica(model, D, nonzero_kernel(rng, model, 1))
    assert commutes(model, exp_automorphism(model, D1, kernel_element(rng, model)), D2).oracle


# ---- GDS datum law ----


@given(seeds)
def test_datum_law_matches_map_composition(gds2, seed):
    rng = random.Random(seed)
    A2, A1 = _random_gds(rng, gds2), _random_gds(rng, gds2)
    C = gds_automorphism(gds2, gds_compose_data(gds2, A2.datum, A1.datum))
    for g in gds2.generators:
        assert C.apply(gds2.gen(g)) == A1.apply(A2.apply(gds2.gen(g)))
    assert gds_compose_data(gds2, A2.datum, gds_inverse_datum(gds2, A2.datum)) == identity_datum(gds2)


def test_fraction_scalars_are_exact(ctx12):
    third = ctx12.coerce(Fraction(1, 3))
    assert third * 3 == ctx12.one


# ---- single-generator checks against closed forms and the oracle ----


def on_generator(model, theta, D, g):
    e = model.gen(g)
    return theta.apply(derive(model, D, e)) == derive(model, D, theta.apply(e))


@given(seeds)
def test_gds_single_generator_equivalence(gds2, seed):
    # commuting on y1 <=> commuting on y2 <=> theta in Aut(f D)
    rng = random.Random(seed)
    theta = _random_gds(rng, gds2)
    D = gds2.canonical_derivation().scaled(nonzero_kernel(rng, gds2, 2))
    full = commutes(gds2, theta, D).oracle
    assert on_generator(gds2, theta, D, "y1") == on_generator(gds2, theta, D, "y2") == full


@given(st.sampled_from(["dvcon23", "dvcon22"]), seeds)
def test_proper_torus_equivalence(request_models, family, seed):
    model = request_models[family]
    rng = random.Random(seed)
    lambdas = [model.ctx.zeta ** rng.randrange(12) for _ in range(2)]
    theta = dvcon_torus(model, lambdas)
    h = nonzero_kernel(rng, model, 2)
    D = model.canonical_derivation().scaled(h)
    a = on_generator(model, theta, D, "y1")
    b = torus_predicate(model, theta, h)
    c = on_generator(model, theta, D, "z")
    assert a == b == c == commutes(model, theta, D).oracle


@given(seeds)
def test_symmetric_equivalence(dvcon22, seed):
    rng = random.Random(seed)
    theta = dvcon_symmetry(dvcon22, rng.choice([(2, 3), (3, 2)]))
    h = nonzero_kernel(rng, dvcon22, 2)
    D = dvcon22.canonical_derivation().scaled(h)
    a = on_generator(dvcon22, theta, D, "y1")
    assert a == symmetric_predicate(dvcon22, theta, h) == on_generator(dvcon22, theta, D, "z")
    assert a == commutes(dvcon22, theta, D).oracle


@given(seeds)
def test_general_variety_equivalence(dvgen_rigid, seed):
    # on the general variety only the scaling identity decides membership
    from almost_rigid.isotropy import _random_dv, dv_scaling_condition

    rng = random.Random(seed)
    theta = _random_dv(rng, dvgen_rigid)
    h = nonzero_kernel(rng, dvgen_rigid, 2)
    D = dvgen_rigid.canonical_derivation().scaled(h)
    assert on_generator(dvgen_rigid, theta, D, "z") == dv_scaling_condition(dvgen_rigid, theta, h)
    assert dv_scaling_condition(dvgen_rigid, theta, h) == commutes(dvgen_rigid, theta, D).oracle


@given(seeds)
def test_fm_equivalence(fm, seed):
    # commuting on u <=> on v <=> closed form <=> theta*_mu in Aut(h D)
    rng = random.Random(seed)
    mu = fm.ctx.zeta ** rng.randrange(70)
    h = nonzero_kernel(rng, fm, 2)
    theta = FMAutomorphism(fm, mu, 0)
    D = fm.canonical_derivation().scaled(h)
    v = fm_membership(fm, theta, h)
    assert on_generator(fm, theta, D, "u") == on_generator(fm, theta, D, "v") == v.closed_form == v.oracle


@given(seeds)
def test_dds_equivalence(dds, seed):
    # commuting on y1 <=> on y2 <=> on y3 <=> closed form
    rng = random.Random(seed)
    z = dds.ctx.zeta
    theta = dds_automorphism(dds, z ** rng.randrange(12), z ** rng.randrange(12), 0)
    f = nonzero_kernel(rng, dds, 2)
    D = dds.canonical_derivation().scaled(f)
    sides = [on_generator(dds, theta, D, g) for g in ("y1", "y2", "y3")]
    assert len(set(sides)) == 1
    assert sides[0] == dds_membership(dds, theta, f=f).closed_form
