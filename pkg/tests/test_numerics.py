import random

import mpmath as mp
import pytest

import cantorcircles as cc
from cantorcircles import Dual
from cantorcircles.certify import _critical_equation

from oracles import central_diff, critical_numerator_poly, durand_kerner


def test_newton_root_square(ctx):
    root = cc.newton_root(lambda z: z ** 2 - 1, 2.0, mp.mpf("1e-40"), precision=ctx)
    assert abs(root - 1) < mp.mpf("1e-39")


def test_newton_root_cube_nearest(ctx):
    root = cc.newton_root(
        lambda z: z ** 3 - 1, mp.mpc("0.5", "0.9"), mp.mpf("1e-40"), precision=ctx
    )
    with ctx.workdps():
        assert abs(root - mp.exp(-2j * mp.pi / 3)) < mp.mpf("1e-39") or abs(
            root - mp.exp(2j * mp.pi / 3)
        ) < mp.mpf("1e-39")


def test_newton_root_critical_equation_vs_oracle(p33, ctx):
    """Newton on the factored critical equation lands on the expanded-polynomial root."""
    psi = _critical_equation(p33)
    with ctx.workdps():
        seed = mp.mpf("0.25") * mp.exp(1j * mp.pi / 6)
        root = cc.newton_root(psi, seed, mp.mpf("1e-40"), precision=ctx)
        with mp.workdps(60):
            poly = critical_numerator_poly(p33)
            oracle_roots = durand_kerner(poly)
        dist = min(abs(root - r) for r in oracle_roots)
        assert dist < mp.mpf("1e-20")


def test_newton_root_quadratic_convergence(ctx):
    trace = []
    cc.newton_root(
        lambda z: z ** 3 - 1, mp.mpc("0.5", "0.9"), mp.mpf("1e-45"),
        precision=ctx, trace=trace,
    )
    with ctx.workdps():
        floor = mp.mpf("1e-44")
        checked = 0
        for a, b in zip(trace, trace[1:]):
            if a < mp.mpf("1e-4") and a > floor and b > floor:
                assert b < 10 * a ** 2
                checked += 1
        assert checked >= 1


def test_newton_root_errors(ctx):
    with pytest.raises(cc.DerivativeUnderflow):
        cc.newton_root(lambda z: z * 0 + 1, 1.0, mp.mpf("1e-30"), precision=ctx)
    with pytest.raises(cc.NonConvergence):
        cc.newton_root(lambda z: z ** 2 + 1, 3.0, mp.mpf("1e-30"), max_iter=8,
                       precision=ctx)


def test_newton_system_affine_one_step(ctx):
    trace = []
    sol = cc.newton_system(
        lambda v: [v[0] - 1, v[1] - 2], (0, 0), mp.mpf("1e-40"),
        precision=ctx, trace=trace,
    )
    assert abs(sol[0] - 1) < mp.mpf("1e-39") and abs(sol[1] - 2) < mp.mpf("1e-39")
    assert len(trace) <= 2  # converged after a single step


def test_newton_system_circle_line(ctx):
    sol = cc.newton_system(
        lambda v: [v[0] ** 2 + v[1] ** 2 - 1, v[0] - v[1]],
        (1, 0), mp.mpf("1e-40"), precision=ctx,
    )
    with ctx.workdps():
        target = mp.sqrt(2) / 2
        assert abs(sol[0] - target) < mp.mpf("1e-39")
        assert abs(sol[1] - target) < mp.mpf("1e-39")


def test_newton_system_singular(ctx):
    with pytest.raises(cc.SingularJacobian):
        cc.newton_system(
            lambda v: [v[0] + v[1] - 1, v[0] + v[1] - 1],
            (0, 0), mp.mpf("1e-40"), precision=ctx,
        )


def test_dual_matches_finite_differences(ctx):
    """Dual derivative of a rational expression vs centered differences."""
    rng = random.Random(7)

    def expr_dual(zd):
        return (zd ** 3 - 2) / (zd ** 2 + zd + 5) + zd * 3 - 1 / (zd + 9)

    def expr_val(z):
        return (z ** 3 - 2) / (z ** 2 + z + 5) + z * 3 - 1 / (z + 9)

    with ctx.workdps():
        bound = mp.mpf(10) ** (2 - ctx.significant_digits // 2)
        h = mp.mpf(10) ** (-(ctx.significant_digits // 2))
        for _ in range(20):
            z = mp.mpc(rng.uniform(-2, 2), rng.uniform(-2, 2))
            if abs(z + 9) < 0.5 or abs(z ** 2 + z + 5) < 0.5:
                continue
            d = expr_dual(Dual.variable(z)).derivative
            fd = central_diff(expr_val, z, h)
            assert abs(d - fd) / max(abs(d), mp.mpf(1)) < bound


def test_determinism_bit_identical(ctx):
    a = cc.solve_q((4, 4, 4), "1e-6", ctx)
    b = cc.solve_q((4, 4, 4), "1e-6", ctx)
    for k in a.values:
        assert a.values[k] == b.values[k]
