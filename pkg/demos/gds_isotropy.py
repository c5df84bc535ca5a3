"""Which scalings x -> a x of x^2 y2 = y1 (y1 - 1) commute with f D?

Run: python demos/gds_isotropy.py
"""

from almost_rigid.autos import gds_datum
from almost_rigid.exactalg import cyclotomic_context
from almost_rigid.isotropy import gds_isotropy_generator, gds_membership, gds_structure
from almost_rigid.models import GdsSpec, build_model

ctx = cyclotomic_context(12)
model = build_model(GdsSpec(2, sigma=("0", "1")), ctx)
print(model.describe())

for f in ("1", "x", "x + x^2", "x^2 + x^4"):
    keep = [k for k in range(12) if gds_membership(model, gds_datum(model, a=ctx.zeta ** k), f).oracle]
    print(f"f = {f:10s} a = zeta^k for k in {keep}")

# swapping the two roots (mu = -1) adds elements beyond the pure scalings
s = gds_structure(model, 1)
print("structure for f = 1:", s.text())
gen = gds_isotropy_generator(model, 1)
print("generator datum:", gen.datum.text(), "commutes:", gds_membership(model, gen, 1).oracle)

v = gds_membership(model, gds_datum(model, a="zeta"), "x + x^2")
print("\nwitness for a = zeta, f = x + x^2:")
print(v.text())
