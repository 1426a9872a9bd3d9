from fractions import Fraction

import mpmath as mp
import pytest

import cantorcircles as cc
from cantorcircles import INFINITY, Pole
from cantorcircles.certify import Disk, DiskComplement, certify_trapping
from cantorcircles.families import spec_from_json_str, spec_to_json_str


def test_validate_degrees_33(ctx):
    d = cc.validate_degrees((3, 3))
    assert d.D == (6,) and d.d_max == 3
    assert d.nu == Fraction(1, 2)


def test_validate_degrees_444(ctx):
    d = cc.validate_degrees((4, 4, 4))
    assert d.nu == Fraction(2, 3)
    with ctx.workdps():
        assert abs(d.tau_value(ctx) - 4) < mp.mpf("1e-45")
        assert abs(d.mu_value(ctx) - mp.mpf(2) ** mp.mpf("-16/3")) < mp.mpf("1e-45")


def test_validate_degrees_rejects():
    with pytest.raises(cc.ConstraintViolated):
        cc.validate_degrees((2, 2))  # reciprocal sum hits 1 exactly
    with pytest.raises(cc.ConstraintViolated):
        cc.validate_degrees((5,))
    with pytest.raises(cc.ConstraintViolated):
        cc.validate_degrees((1, 9))
    cc.validate_degrees((2, 3))  # 1/2 + 1/3 < 1 is admissible


def test_schedule_p33_from_s(ctx):
    with ctx.workdps():
        s = mp.mpf("0.25") ** 3 / 9
        rings = cc.make_schedule("P", cc.validate_degrees((3, 3)), s, None, ctx)
        assert abs(abs(rings.values[0]) - mp.mpf("0.25")) < mp.mpf("1e-48")


def test_schedule_q444(ctx):
    rings = cc.make_schedule("Q", cc.validate_degrees((4, 4, 4)), "1e-8", None, ctx)
    with ctx.workdps():
        assert abs(abs(rings.values[0]) - 2 * mp.sqrt(2) / 100) < mp.mpf("1e-48")
        assert abs(abs(rings.values[1]) - mp.mpf("4e-4")) < mp.mpf("1e-48")


def test_schedule_r444(ctx):
    with ctx.workdps():
        s = mp.mpf(2) ** 8 * mp.mpf("1e-12")
        rings = cc.make_schedule("R", cc.validate_degrees((4, 4, 4)), s, None, ctx)
        assert abs(abs(rings.values[0]) - mp.mpf("8e-3")) < mp.mpf("1e-48")
        assert abs(abs(rings.values[1]) - mp.mpf("3.2e-5")) < mp.mpf("1e-48")


def test_schedule_rejects_bad_input(ctx):
    d = cc.validate_degrees((4, 4, 4))
    with pytest.raises(cc.ConstraintViolated):
        cc.make_schedule("Q", d, "1e-8", (0.1, 0.0), ctx)  # Q rings must stay real
    with pytest.raises(cc.ConstraintViolated):
        cc.make_schedule("P", d, 0, None, ctx)
    with pytest.raises(cc.ConstraintViolated):
        cc.explicit_rings([0.01, 0.1], ctx)  # moduli must not increase


def test_coefficients_p33(ctx):
    d = cc.validate_degrees((3, 3))
    rings = cc.explicit_rings(["0.25"], ctx)
    A, B, C = cc.coefficients_P(d, rings, ctx)
    with ctx.workdps():
        assert abs(A - mp.mpf("0.99878079")) < mp.mpf("5e-8")
        assert abs(B - mp.mpf("0.00146306")) < mp.mpf("5e-8")


def test_coefficients_p444(ctx):
    d = cc.validate_degrees((4, 4, 4))
    rings = cc.explicit_rings(["0.1", "0.01"], ctx)
    A, B, _ = cc.coefficients_P(d, rings, ctx)
    with ctx.workdps():
        assert abs((A - 1) - mp.mpf("-7e-8")) < mp.mpf("1e-8")
        assert abs(B - mp.mpf("8e-8")) < mp.mpf("1e-8")


def test_coefficients_zero_rings(ctx):
    d = cc.validate_degrees((3, 3))
    rings = cc.explicit_rings([0], ctx)
    A, B, C = cc.coefficients_P(d, rings, ctx)
    assert A == 1 and B == 0 and C == 0


def test_evaluate_collapse_to_limit(ctx):
    spec = cc.make_p_map((3, 3), rings=[0], precision=ctx)
    with ctx.workdps():
        val = cc.evaluate_value(spec, mp.mpf(2))
        assert abs(val - mp.mpf(24) / 17) < mp.mpf("1e-48")


def test_evaluate_parabolic_point(p33, ctx):
    res = cc.evaluate(p33, 1)
    with ctx.workdps():
        assert abs(res.value - 1) < mp.mpf("1e-45")
        assert abs(res.derivative - 1) < mp.mpf("1e-45")


def test_evaluate_origin_p444(p444_pictures, ctx):
    res = cc.evaluate(p444_pictures, 0)
    with ctx.workdps():
        assert abs(res.value - p444_pictures.coeff("B")) < mp.mpf("1e-45")
        assert res.derivative == 0  # local degree d_n = 4 at the origin


def test_evaluate_pole_p33(p33):
    res = cc.evaluate(p33, 0)
    assert isinstance(res, Pole)
    assert res.order == 3  # z^{-d_n} factor for even n


def test_evaluate_at_infinity(p33, ctx):
    res = cc.evaluate(p33, INFINITY)
    with ctx.workdps():
        # value A d1/(d1-1) + B, the finite image of the critical point there
        expect = p33.coeff("A") * 3 / 2 + p33.coeff("B")
        assert abs(res.value - expect) < mp.mpf("1e-45")
    h4 = cc.ref_rat_h(4, ctx)
    res = cc.evaluate(h4, INFINITY)
    with ctx.workdps():
        assert abs(res.value - mp.mpf(4) / 3) < mp.mpf("1e-45")
    g4 = cc.ref_poly_g(4, ctx)
    assert isinstance(cc.evaluate(g4, INFINITY), Pole)


def test_parabolic_normalization_across_schedules(ctx):
    for degrees in ((3, 3), (4, 4, 4), (3, 4, 5)):
        for s in ("1e-4", "1e-6"):
            spec = cc.make_p_map(degrees, s=s, precision=ctx)
            res = cc.evaluate(spec, 1)
            bound = mp.mpf(10) ** (5 - ctx.significant_digits)
            assert abs(res.value - 1) < bound
            assert abs(res.derivative - 1) < bound


def test_degree_bookkeeping(ctx, q444, r444):
    for degrees in ((3, 3), (4, 4, 4), (2, 3, 7), (3, 4, 5, 6)):
        spec = cc.make_p_map(degrees, s="1e-6", precision=ctx)
        assert cc.rational_degree(spec) == sum(degrees)
    assert cc.rational_degree(q444) == 12
    assert cc.rational_degree(r444) == 12
    f = cc.make_f_map((3, 3), p=1, s="1e-6", precision=ctx)
    assert cc.rational_degree(f) == 6


def test_limit_collapse_pointwise(ctx):
    spec = cc.make_p_map((4, 4, 4), rings=[0, 0], precision=ctx)
    h4 = cc.ref_rat_h(4, ctx)
    with ctx.workdps():
        for k in range(100):
            r = mp.mpf("0.5") + mp.mpf("1.5") * k / 99
            z = r * mp.exp(2j * mp.pi * (k + mp.mpf("0.25")) / 100)
            a = cc.evaluate_value(spec, z)
            b = cc.evaluate_value(h4, z)
            assert abs(a - b) < mp.mpf("1e-45")


def test_reference_map_trapping(ctx):
    g4 = cc.ref_poly_g(4, ctx)
    g44 = cc.ref_poly_gmn(4, 4, ctx)
    for spec in (g4, g44):
        for r in (0.1, 0.5, 1.0):
            rep = certify_trapping(
                spec, Disk(center=1 - r, radius=r), 64, parabolic_point=mp.mpf(1)
            )
            assert rep.passed, (spec.kind, r)
    h4 = cc.ref_rat_h(4, ctx)
    h44 = cc.ref_rat_hmn(4, 4, ctx)
    for spec in (h4, h44):
        for r in (1.0, 2.0):
            rep = certify_trapping(
                spec, DiskComplement(center=1 - r, radius=r), 64,
                parabolic_point=mp.mpf(1),
            )
            assert rep.passed, (spec.kind, r)


def test_json_round_trip(p33, q444, ctx):
    for spec in (p33, q444):
        doc = spec_to_json_str(spec)
        back = spec_from_json_str(doc)
        with ctx.workdps():
            z = mp.mpc("0.37", "0.11")
            assert cc.evaluate_value(back, z) == cc.evaluate_value(spec, z)


def test_json_round_trip_complex_rings(ctx):
    spec = cc.make_p_map((3, 3), s="1e-4", phases=[0.7], precision=ctx)
    back = spec_from_json_str(spec_to_json_str(spec))
    with ctx.workdps():
        z = mp.mpc("0.4", "-0.2")
        assert abs(cc.evaluate_value(back, z) - cc.evaluate_value(spec, z)) < mp.mpf("1e-45")


def test_effective_s(p33, ctx):
    with ctx.workdps():
        s = cc.effective_s(p33)
        assert abs(s - mp.mpf("0.25") ** 3 / 9) < mp.mpf("1e-48")
