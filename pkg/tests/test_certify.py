import mpmath as mp
import pytest

import cantorcircles as cc
from cantorcircles import certify as cert
from cantorcircles.certify import (
    Disk,
    DiskComplement,
    boundary_points,
    germ_coefficient,
    region_contains,
    schedule_order_report,
    unit_circle_samples,
)

from oracles import critical_numerator_poly, durand_kerner


def test_check_parabolic_p33(p33, ctx):
    rep = cc.check_parabolic(p33)
    assert rep.passed
    assert all(v < mp.mpf("1e-30") for v in rep.residuals.values())


def test_check_parabolic_q444(q444, ctx):
    rep = cc.check_parabolic(q444)
    assert rep.passed
    with ctx.workdps():
        second = rep.fixed_points["fixed"][1]
        assert abs(second / mp.mpf("4.64e-6") - 1) < 0.01


def test_check_parabolic_r444(r444, ctx):
    rep = cc.check_parabolic(r444)
    assert rep.passed
    with ctx.workdps():
        cycle = rep.fixed_points["cycle"]
        assert cycle[0] == 1
        assert abs(cycle[1] / mp.mpf("1.6e-7") - 1) < mp.mpf("1e-5")


def test_reference_points_p33(p33, ctx):
    groups = cc.reference_critical_points(p33)
    assert len(groups) == 1 and len(groups[0]) == 6
    with ctx.workdps():
        for j, w in enumerate(groups[0], start=1):
            expect = mp.mpf("0.25") * mp.exp(1j * mp.pi * (2 * j - 1) / 6)
            assert abs(w - expect) < mp.mpf("1e-45")


def test_reference_points_radii(ctx, p444_pictures):
    groups = cc.reference_critical_points(p444_pictures)
    with ctx.workdps():
        # equal degrees force r_i = 1
        assert abs(abs(groups[0][0]) - mp.mpf("0.1")) < mp.mpf("1e-45")
        assert abs(abs(groups[1][0]) - mp.mpf("0.01")) < mp.mpf("1e-45")
    d25 = cc.make_p_map((2, 5), s="1e-6", precision=ctx)
    groups = cc.reference_critical_points(d25)
    with ctx.workdps():
        r1 = (mp.mpf(5) / 2) ** (mp.mpf(1) / 7)
        assert abs(abs(groups[0][0]) / abs(d25.rings.values[0]) - r1) < mp.mpf("1e-45")


def test_certify_critical_points_p444(p444_pictures):
    rep = cc.certify_critical_points(p444_pictures)
    assert rep.passed
    ring_points = [p for p in rep.points if isinstance(p[2], int)]
    assert len(ring_points) == 16
    assert rep.total_multiplicity == rep.expected_multiplicity == 22
    mult = {p[2]: p[1] for p in rep.points if not isinstance(p[2], int)}
    assert mult == {"origin": 3, "infinity": 3}


def test_certify_critical_points_p33_against_oracle(p33, ctx):
    rep = cc.certify_critical_points(p33)
    assert rep.passed and rep.total_multiplicity == 10
    ring_roots = [p[0] for p in rep.points if isinstance(p[2], int)]
    assert len(ring_roots) == 6
    # measured refinement distance at the picture parameters
    assert max(p[3] for p in rep.points if isinstance(p[2], int)) < mp.mpf("3e-3")
    with mp.workdps(60):
        oracle_roots = durand_kerner(critical_numerator_poly(p33))
    for root in ring_roots:
        assert min(abs(root - r) for r in oracle_roots) < mp.mpf("1e-20")


def test_critical_distinctness(p33, ctx):
    rep = cc.certify_critical_points(p33)
    roots = [p[0] for p in rep.points if isinstance(p[2], int)]
    with ctx.workdps():
        sep = mp.mpf("0.25") * mp.sin(mp.pi / 6)
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                assert abs(roots[i] - roots[j]) > sep


def test_trapping_p33_outer(p33):
    rep = cc.certify_trapping(p33, DiskComplement(-1.0, 2.0), 512,
                              parabolic_point=mp.mpf(1))
    assert rep.passed and rep.worst_margin > 0


def test_trapping_p444_picture_inner_fails(p444_pictures, ctx):
    """The canonical inner disk is not a trap at the picture parameters."""
    with ctx.workdps():
        r0 = float(mp.mpf(4) ** 4 * cc.effective_s(p444_pictures))
    rep = cc.certify_trapping(p444_pictures, Disk(0.0, r0), 64)
    assert not rep.passed
    with pytest.raises(cc.CertificateFailed):
        rep.raise_if_failed()


def test_trapping_canonical_p444_schedule(p444_sched):
    reports = cc.certify_canonical_traps(p444_sched, 128)
    assert set(reports) == {"outer", "origin"}
    assert all(r.passed for r in reports.values())


def test_trapping_q444_and_r444(q444, r444):
    for spec in (q444, r444):
        reports = cc.certify_canonical_traps(spec, 128)
        assert all(r.passed for r in reports.values()), spec.kind
    assert cc.canonical_traps(r444)["outer"][1] == 2  # second-iterate trap


def test_germ_coefficient_h4(ctx):
    h4 = cc.ref_rat_h(4, ctx)
    a = germ_coefficient(h4, mp.mpf(1))
    with ctx.workdps():
        assert abs(a - mp.mpf("-1.5")) < mp.mpf("1e-10")


def test_petal_condition_branch(ctx, monkeypatch):
    """Force images near the parabolic point through the petal test."""
    h4 = cc.ref_rat_h(4, ctx)
    monkeypatch.setattr(cert, "PETAL_NEIGHBORHOOD", 0.02)
    rep = cc.certify_trapping(h4, DiskComplement(-1.0, 2.0), 4096,
                              parabolic_point=mp.mpf(1))
    assert rep.passed
    assert rep.petal_samples > 0


def test_limit_deviation_zero_rings(ctx):
    spec = cc.make_p_map((3, 3), rings=[0], precision=ctx)
    samples = unit_circle_samples(64, ctx)
    dev = cc.limit_map_deviation(spec, samples)
    assert dev < mp.mpf("1e-45")


def test_limit_deviation_decreasing_p33(ctx):
    samples = unit_circle_samples(64, ctx)
    devs = []
    for s in ("1e-4", "1e-6", "1e-8"):
        spec = cc.make_p_map((3, 3), s=s, precision=ctx)
        devs.append(cc.limit_map_deviation(spec, samples))
    assert devs[0] > devs[1] > devs[2]


def test_limit_deviation_r_second_iterate(r444, ctx):
    samples = unit_circle_samples(64, ctx)
    assert cc.limit_map_deviation(r444, samples) < mp.mpf("1e-4")
    assert cc.limit_map_deviation(r444, samples, conjugated=True) < mp.mpf("1e-4")


def test_limit_deviation_q_conjugated(q444, ctx):
    samples = unit_circle_samples(64, ctx)
    assert cc.limit_map_deviation(q444, samples) < mp.mpf("1e-3")
    assert cc.limit_map_deviation(q444, samples, conjugated=True) < mp.mpf("1e-8")


def test_schedule_order_checks(ctx):
    spec = cc.make_p_map((4, 4, 4), s="1e-8", precision=ctx)
    report = schedule_order_report(spec)
    with ctx.workdps():
        # schedule constants shift the exponent by log(const)/log(s); at
        # s = 1e-8 that is within 0.05 of the limit exponent
        for measured, expected in report["exponents"]:
            assert abs(measured - expected) < 0.05
    spec6 = cc.make_p_map((4, 4, 4), s="1e-6", precision=ctx)
    for _, ratio, bound in schedule_order_report(spec6)["cross_ratios"]:
        assert ratio <= bound


def test_region_helpers():
    disk = Disk(0.0, 1.0)
    comp = DiskComplement(0.0, 1.0)
    assert region_contains(disk, 0.5) and not region_contains(disk, 1.5)
    assert region_contains(comp, cc.INFINITY)
    assert len(boundary_points(disk, 16)) == 16
    ann = cert.Annulus(0.0, 0.5, 1.0)
    assert region_contains(ann, 0.7) and not region_contains(ann, 0.4)
    with pytest.raises(ValueError):
        cert.Annulus(0.0, 1.0, 0.5)
