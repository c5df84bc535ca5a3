"""Roots of unity in the isotropy group of h D on the threefold
(C[x,y,z]/(x^3 + y^4 + z^5))[u,v]/(x^2 u - y^2 v - 1).

Run: python demos/fm_roots_of_unity.py
"""

from almost_rigid.exactalg import cyclotomic_context, exponent_gcd
from almost_rigid.isotropy import fm_exponents, fm_membership, fm_structure
from almost_rigid.models import FMSpec, build_model

ctx = cyclotomic_context(70)
model = build_model(FMSpec(3, 4, 5, 2, 2), ctx)

for h in ("1", "x", "z", "x + x^2"):
    es = fm_exponents(model, model.parse(h))
    print(f"h = {h:8s} weights {es}  gcd {exponent_gcd(es):3d}  {fm_structure(model, h).text()}")

# order-10 roots commute with (x + x^2) D; the check is flagged as a documented erratum
mu = ctx.zeta ** 7
v = fm_membership(model, mu, "x + x^2")
print(f"\nmu = zeta^7 (order {mu.multiplicative_order()}), h = x + x^2:")
print(v.text())
