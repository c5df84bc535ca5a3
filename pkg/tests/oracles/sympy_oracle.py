"""Independent reference values computed with sympy.

Run by hand (``python tests/oracles/sympy_oracle.py``); the printed values are
frozen as literals in the test-suite.  Not collected by pytest.
"""

import math

import sympy as sp

x, y1, y2, y3, z, y, v, t, f = sp.symbols("x y1 y2 y3 z y v t f")


def field_element(expr, n):
    """Coefficients of expr reduced modulo the n-th cyclotomic polynomial."""
    poly = sp.Poly(sp.rem(sp.expand(expr), sp.cyclotomic_poly(n, t), t), t)
    coeffs = poly.all_coeffs()[::-1]
    return [str(c) for c in coeffs]


def inverse_in_field(expr, n):
    phi = sp.cyclotomic_poly(n, t)
    inv = sp.invert(sp.expand(expr), phi, t)
    return field_element(inv, n)


def exp_action(images, deriv, element, factor, cap=20):
    """sum_i factor^i D^i(element)/i! for D given on x, y1 (element in Q(x)[y1])."""
    total = 0
    term = element
    for i in range(cap):
        total += factor ** i * term / sp.factorial(i)
        term = sp.simplify(sum(sp.diff(term, s) * img for s, img in deriv.items()))
        if term == 0:
            break
    return sp.expand(sp.simplify(total))


def main():
    print("Phi_12", sp.Poly(sp.cyclotomic_poly(12, t), t).all_coeffs()[::-1])
    print("Phi_70 degree", sp.degree(sp.cyclotomic_poly(70, t), t))
    print("Phi_9", sp.Poly(sp.cyclotomic_poly(9, t), t).all_coeffs()[::-1])
    print("1/(zeta12+1)", inverse_in_field(t + 1, 12))
    print("1/(zeta12^2+2)", inverse_in_field(t ** 2 + 2, 12))
    print("zeta12^7", field_element(t ** 7, 12))
    print("(1+zeta5)^5", field_element((1 + t) ** 5, 5))

    # GDS d=2, P = y1^2 - y1: y2 = P / x^2, D(y1) = x^2
    P = y1 ** 2 - y1
    D = {y1: x ** 2}
    y2_img = P / x ** 2
    print("GDS D(y2)", sp.expand(sp.diff(y2_img, y1) * x ** 2))
    e = exp_action(None, D, y2_img, 1)
    print("GDS Exp(D)(y2) - y2_img", sp.expand(e - y2_img))
    print("GDS Exp(x D)(y2) - y2_img", sp.expand(exp_action(None, D, y2_img, x) - y2_img))

    # DVCon m=3, k=(2,3), P=z^3: D(z) = y2^2 y3^3, y1 = z^3 / (y2^2 y3^3)
    ytil = y2 ** 2 * y3 ** 3
    y1_img = z ** 3 / ytil
    print("DVCon D(y1)", sp.simplify(sp.diff(y1_img, z) * ytil))
    # rigid general Danielewski variety: y1 y2^2 = z^3 + (y2+1) z + 1
    y1g = (z ** 3 + (y2 + 1) * z + 1) / y2 ** 2
    print("DVGen D(y1)", sp.expand(sp.diff(y1g, z) * y2 ** 2))

    # FM (3,4,5,2,2): u = (y^2 v + 1)/x^2, D(v) = x^2
    u_img = (y ** 2 * v + 1) / x ** 2
    print("FM D(u)", sp.simplify(sp.diff(u_img, v) * x ** 2))
    a, b, c, m, n = 3, 4, 5, 2, 2

    def fm_e(r, s, tt):
        return b * c * (m + r) + a * c * (n + s) + a * b * tt

    print("FM exponents 1, x, x^2, z", fm_e(0, 0, 0), fm_e(1, 0, 0), fm_e(2, 0, 0), fm_e(0, 0, 1))
    print("FM gcd x+x^2", math.gcd(fm_e(1, 0, 0), fm_e(2, 0, 0)))

    # DDS d1=d2=2, P1=y1^2, P2=y2^2: D(y1) = x^4
    y2d = y1 ** 2 / x ** 2
    y3d = y2d ** 2 / x ** 2
    Dd = x ** 4
    print("DDS y3 image", sp.simplify(y3d))
    print("DDS D(y2)", sp.simplify(sp.diff(y2d, y1) * Dd), "D(y3)", sp.simplify(sp.diff(y3d, y1) * Dd))

    # GDS isotropy on mu_12 for sigma=(0,1), mu=1: a with a^(d+n_i)=1 for all i
    for d in (2, 3):
        for fs in ((0,), (1,), (1, 2), (2, 4)):
            ks = [k for k in range(12) if all((k * (d + ni)) % 12 == 0 for ni in fs)]
            print("GDS admissible k", d, fs, ks)


if __name__ == "__main__":
    main()
