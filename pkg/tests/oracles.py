"""Independent numerical oracles used only by the tests.

These deliberately avoid the library's evaluation path: polynomials are
expanded by coefficient convolution and rooted simultaneously with the
Durand-Kerner (Weierstrass) iteration; derivatives are checked by centered
finite differences.  Agreement between these oracles and the factored
dual-number computations is what the tests assert.
"""

from __future__ import annotations

import mpmath as mp


def central_diff(f, z, h):
    """Centered finite-difference derivative of a scalar callable."""
    return (f(z + h) - f(z - h)) / (2 * h)


# polynomial helpers, coefficient lists low -> high degree, mpc entries

def poly_mul(a, b):
    out = [mp.mpc(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def poly_diff(a):
    return [k * a[k] for k in range(1, len(a))] or [mp.mpc(0)]


def poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [mp.mpc(0)] * (n - len(a))
    b = list(b) + [mp.mpc(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def poly_eval(a, z):
    out = mp.mpc(0)
    for c in reversed(a):
        out = out * z + c
    return out


def _monomial(k, coeff=1):
    out = [mp.mpc(0)] * (k + 1)
    out[k] = mp.mpc(coeff)
    return out


def critical_numerator_poly(spec):
    """Expanded numerator polynomial of f' with the z^(d_n - 1) factor removed.

    Builds N(z) and D(z) of the family by plain convolution, forms
    W = N'D - ND', verifies the trailing z^(d_n-1) block vanishes, and
    returns the ring-critical-point polynomial of degree sum(D_i).
    """
    d = spec.degrees
    n = d.n
    ring_pows = [a ** Di for a, Di in zip(spec.rings.values, d.D)]

    if spec.kind == "P":
        signs = [1 if i % 2 == 0 else -1 for i in range(n - 1)]
        e0 = d.dn if n % 2 == 1 else -d.dn
        den_base = [mp.mpc(1)] + [mp.mpc(0)] * (d.d1 - 1) + [mp.mpc(d.d1 - 1)]
    elif spec.kind == "Q":
        signs = [1 if i % 2 == 0 else -1 for i in range(n - 1)]
        e0 = d.dn
        den_base = [mp.mpc(0)] * (d.d1 + 1)
        den_base[0] = mp.mpc(spec.coeff("Z"))
        den_base[1] = mp.mpc(spec.coeff("Y"))
        den_base[d.d1] = mp.mpc((d.d1 - 1) * spec.coeff("X"))
    elif spec.kind == "R":
        signs = [-1 if i % 2 == 0 else 1 for i in range(n - 1)]
        e0 = -d.dn
        den_base = [mp.mpc(1)]
    else:
        raise ValueError(spec.kind)

    num = _monomial(max(0, e0))
    den = list(den_base)
    if e0 < 0:
        den = poly_mul(den, _monomial(-e0))
    for aD, Di, sg in zip(ring_pows, d.D, signs):
        factor = [-mp.mpc(aD)] + [mp.mpc(0)] * (Di - 1) + [mp.mpc(1)]
        if sg > 0:
            num = poly_mul(num, factor)
        else:
            den = poly_mul(den, factor)

    w = poly_sub(poly_mul(poly_diff(num), den), poly_mul(num, poly_diff(den)))
    strip = d.dn - 1
    scale = max(abs(c) for c in w)
    assert all(abs(c) <= scale * mp.mpf(10) ** (8 - mp.mp.dps) for c in w[:strip]), (
        "low-order coefficients should vanish"
    )
    w = w[strip:]
    while len(w) > 1 and abs(w[-1]) <= scale * mp.mpf(10) ** (8 - mp.mp.dps):
        w = w[:-1]
    return w


def durand_kerner(coeffs, tol=None, max_iter=500):
    """All roots of a polynomial (low -> high coefficients) simultaneously."""
    deg = len(coeffs) - 1
    if tol is None:
        tol = mp.mpf(10) ** (12 - mp.mp.dps)
    lead = coeffs[-1]
    monic = [c / lead for c in coeffs]
    roots = [mp.mpc("0.4", "0.9") ** k for k in range(1, deg + 1)]
    for _ in range(max_iter):
        moved = mp.mpf(0)
        new = []
        for i, r in enumerate(roots):
            denom = mp.mpc(1)
            for j, s in enumerate(roots):
                if j != i:
                    denom *= r - s
            delta = poly_eval(monic, r) / denom
            new.append(r - delta)
            moved = max(moved, abs(delta))
        roots = new
        if moved < tol:
            break
    return roots
