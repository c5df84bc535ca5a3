"""A torus element and an exponential that both commute with D but not with each other,
on y1 y2^2 y3^3 = z^3.

Run: python demos/dvcon_non_abelian.py
"""

from almost_rigid.autos import compose, dvcon_torus, exp_automorphism
from almost_rigid.exactalg import cyclotomic_context
from almost_rigid.isotropy import commutes, dvcon_structure
from almost_rigid.models import DVConSpec, build_model

model = build_model(DVConSpec(3, (2, 3), "z^3"), cyclotomic_context(12))
D = model.canonical_derivation()
print(model.describe())
print("structure of Aut(D):", dvcon_structure(model, 1).text())

theta = dvcon_torus(model, [-1, 1])  # y2 -> -y2
alpha = exp_automorphism(model, D, "y2")
print("theta in Aut(D):", commutes(model, theta, D).oracle, " alpha in Aut(D):", commutes(model, alpha, D).oracle)

z = model.gen("z")
print("theta(alpha(z)) =", theta.apply(alpha.apply(z)))
print("alpha(theta(z)) =", alpha.apply(theta.apply(z)))
print("same map:", compose(theta, alpha).same_map(compose(alpha, theta)))
