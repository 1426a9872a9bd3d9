"""Numerical certificates for the structural claims behind each map.

Four kinds of check: parabolic fixed-point/cycle identities, critical-point
locations against their ring reference positions, forward-invariance of the
canonical trap regions, and convergence to the limit maps as the ring scale
shrinks.  All checks run at the spec's working precision and return report
objects; ``report.raise_if_failed()`` converts a failure into an exception.

A trap certificate samples the region boundary and requires every image
strictly inside, except images landing within 1e-6 * diam of the designated
parabolic point: there strict containment degenerates, and the check becomes
strict right translation in the rectified coordinate -1/w, w = a (z - p),
where a is the quadratic coefficient of the iterate map at p.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath as mp

from .errors import CertificateFailed, SeedNotFound
from .families import (
    KIND_F,
    KIND_G,
    KIND_GMN,
    KIND_H,
    KIND_HMN,
    KIND_P,
    KIND_Q,
    KIND_R,
    MapSpec,
    effective_s,
    evaluate,
    evaluate_value,
    factored_form,
    iterate_dual,
    ref_rat_h,
    ref_rat_hmn,
)
from .numerics import INFINITY, Dual, Pole, newton_root

PETAL_NEIGHBORHOOD = 1e-6
DEFAULT_SAMPLES = 512


# --------------------------------------------------------------------------
# regions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float


@dataclass(frozen=True)
class DiskComplement:
    """Everything strictly outside a closed disk, including infinity."""

    center: complex
    radius: float


@dataclass(frozen=True)
class Annulus:
    center: complex
    r_inner: float
    r_outer: float

    def __post_init__(self):
        if not 0 < self.r_inner < self.r_outer:
            raise ValueError("need 0 < r_inner < r_outer")


def region_diameter(region) -> float:
    if isinstance(region, (Disk, DiskComplement)):
        return 2.0 * float(region.radius)
    return 2.0 * float(region.r_outer)


def region_contains(region, z) -> bool:
    """Strict membership; z may be INFINITY."""
    if z is INFINITY:
        return isinstance(region, DiskComplement)
    if isinstance(region, Disk):
        return abs(z - region.center) < region.radius
    if isinstance(region, DiskComplement):
        return abs(z - region.center) > region.radius
    r = abs(z - region.center)
    return region.r_inner < r < region.r_outer


def region_margin(region, z):
    """Positive inside, negative outside; -inf convention for INFINITY."""
    if z is INFINITY:
        return mp.inf if isinstance(region, DiskComplement) else -mp.inf
    if isinstance(region, Disk):
        return region.radius - abs(z - region.center)
    if isinstance(region, DiskComplement):
        return abs(z - region.center) - region.radius
    r = abs(z - region.center)
    return min(r - region.r_inner, region.r_outer - r)


def boundary_points(region, count: int, offset: float = 0.5):
    """Uniform boundary samples; the half-step offset avoids corner points."""
    pts = []
    def circle(center, radius, k_count):
        return [
            center + radius * mp.exp(2j * mp.pi * (k + offset) / k_count)
            for k in range(k_count)
        ]
    if isinstance(region, (Disk, DiskComplement)):
        pts = circle(mp.mpc(region.center), mp.mpf(region.radius), count)
    else:
        half = count // 2
        pts = circle(mp.mpc(region.center), mp.mpf(region.r_inner), half)
        pts += circle(mp.mpc(region.center), mp.mpf(region.r_outer), count - half)
    return pts


# --------------------------------------------------------------------------
# parabolic identities
# --------------------------------------------------------------------------

@dataclass
class ParabolicReport:
    residuals: dict
    tolerance: mp.mpf
    passed: bool
    fixed_points: dict = field(default_factory=dict)

    def raise_if_failed(self):
        if not self.passed:
            worst = max(self.residuals, key=lambda k: self.residuals[k])
            raise CertificateFailed(
                f"parabolic residual {worst} = {mp.nstr(self.residuals[worst], 3)}"
            )
        return self


def check_parabolic(spec: MapSpec, tol=None) -> ParabolicReport:
    """Verify the defining fixed-point identities of the family.

    P/g/h kinds: f(1) = 1, f'(1) = 1.  Q: the same at both 1 and s^nu.
    R: f(1) = z0, f(z0) = 1, f'(1) f'(z0) = 1.
    """
    ctx = spec.precision
    with ctx.workdps():
        if tol is None:
            tol = mp.mpf(10) ** (20 - ctx.significant_digits)
        res = {}
        fixed = {}
        if spec.kind == KIND_R:
            z0 = spec.coeff("z0")
            r1 = evaluate(spec, mp.mpf(1))
            r2 = evaluate(spec, z0)
            res["|f(1)-z0|"] = abs(r1.value - z0)
            res["|f(z0)-1|"] = abs(r2.value - 1)
            res["|f'(1)f'(z0)-1|"] = abs(r1.derivative * r2.derivative - 1)
            fixed = {"cycle": (mp.mpf(1), z0)}
        else:
            r1 = evaluate(spec, mp.mpf(1))
            res["|f(1)-1|"] = abs(r1.value - 1)
            res["|f'(1)-1|"] = abs(r1.derivative - 1)
            fixed = {"fixed": (mp.mpf(1),)}
            if spec.kind == KIND_Q:
                s_nu = spec.rings.s ** spec.degrees.nu_value(ctx)
                r2 = evaluate(spec, s_nu)
                res["|f(s^nu)-s^nu|"] = abs(r2.value - s_nu)
                res["|f'(s^nu)-1|"] = abs(r2.derivative - 1)
                fixed = {"fixed": (mp.mpf(1), s_nu)}
        passed = all(v < tol for v in res.values())
        return ParabolicReport(residuals=res, tolerance=tol, passed=passed, fixed_points=fixed)


# --------------------------------------------------------------------------
# critical points
# --------------------------------------------------------------------------

@dataclass
class CriticalReport:
    points: list  # (location, multiplicity, ring index or "origin"/"infinity", dist to reference)
    total_multiplicity: int
    expected_multiplicity: int
    ball_radii: list
    passed: bool

    def raise_if_failed(self):
        if not self.passed:
            raise CertificateFailed("critical-point certificate failed")
        return self


def reference_critical_points(spec: MapSpec):
    """Ring reference points r_i a_i e^{i pi (2j-1)/D_i}, r_i = (d_{i+1}/d_i)^{1/D_i}.

    Returns a list per ring of the D_i points.
    """
    d = spec.degrees
    ctx = spec.precision
    with ctx.workdps():
        groups = []
        for i, (a, Di) in enumerate(zip(spec.rings.values, d.D)):
            r = (mp.mpf(d.degrees[i + 1]) / d.degrees[i]) ** (mp.mpf(1) / Di)
            groups.append(
                [r * a * mp.exp(1j * mp.pi * (2 * j - 1) / Di) for j in range(1, Di + 1)]
            )
        return groups


def _critical_equation(spec: MapSpec):
    """z f'(z)/(f(z) - off) as a dual-evaluable function; zeros = ring critical points."""
    d = spec.degrees
    ctx = spec.precision
    ring_pows = [a ** Di for a, Di in zip(spec.rings.values, d.D)]

    if spec.kind == KIND_P:
        sgn = [1 if i % 2 == 0 else -1 for i in range(d.n - 1)]
        tail_const = d.dn if d.n % 2 == 1 else -d.dn
        d1 = d.d1

        def psi(zd: Dual) -> Dual:
            acc = Dual.constant(mp.mpc(tail_const))
            for s, aD, Di in zip(sgn, ring_pows, d.D):
                zD = zd ** Di
                acc = acc + (zD / (zD - aD)) * (s * Di)
            zp = zd ** d1
            acc = acc - (zp * ((d1 - 1) * d1)) / (zp * (d1 - 1) + 1)
            return acc

        return psi
    if spec.kind == KIND_Q:
        sgn = [1 if i % 2 == 0 else -1 for i in range(d.n - 1)]
        X, Y, Z = spec.coeff("X"), spec.coeff("Y"), spec.coeff("Z")
        d1 = d.d1

        def psi(zd: Dual) -> Dual:
            acc = Dual.constant(mp.mpc(d.dn))
            for s, bD, Di in zip(sgn, ring_pows, d.D):
                zD = zd ** Di
                acc = acc + (zD / (zD - bD)) * (s * Di)
            zp = zd ** d1
            den = zp * ((d1 - 1) * X) + zd * Y + Z
            acc = acc - (zp * ((d1 - 1) * d1 * X) + zd * Y) / den
            return acc

        return psi
    if spec.kind == KIND_R:
        sgn = [-1 if i % 2 == 0 else 1 for i in range(d.n - 1)]

        def psi(zd: Dual) -> Dual:
            acc = Dual.constant(mp.mpc(-d.dn))
            for s, cD, Di in zip(sgn, ring_pows, d.D):
                zD = zd ** Di
                acc = acc + (zD / (zD - cD)) * (s * Di)
            return acc

        return psi
    raise ValueError(f"no critical equation for kind {spec.kind!r}")


def certify_critical_points(spec: MapSpec, max_iter: int = 80) -> CriticalReport:
    """Newton-refine every ring reference point and check its containment ball.

    Each refined root must stay within sqrt(s) |a_i| of its reference seed;
    origin and infinity contribute multiplicities d_n - 1 and d_1 - 1, and the
    grand total must equal 2 * sum(d_i) - 2.
    """
    ctx = spec.precision
    d = spec.degrees
    psi = _critical_equation(spec)
    with ctx.workdps():
        s_eff = effective_s(spec)
        tol = mp.mpf(10) ** (10 - ctx.significant_digits)
        groups = reference_critical_points(spec)
        points = []
        radii = []
        ok = True
        for i, refs in enumerate(groups):
            ball = mp.sqrt(s_eff) * abs(spec.rings.values[i])
            radii.append(ball)
            for ref in refs:
                root = newton_root(psi, ref, tol, max_iter=max_iter, precision=ctx)
                dist = abs(root - ref)
                if dist >= ball:
                    ok = False
                points.append((root, 1, i + 1, dist))
        # pairwise distinctness inside each ring
        for i, refs in enumerate(groups):
            ring_roots = [p[0] for p in points if p[2] == i + 1]
            sep = abs(spec.rings.values[i]) * mp.sin(mp.pi / d.D[i])
            for a_idx in range(len(ring_roots)):
                for b_idx in range(a_idx + 1, len(ring_roots)):
                    if abs(ring_roots[a_idx] - ring_roots[b_idx]) <= sep:
                        ok = False
        points.append((mp.mpf(0), d.dn - 1, "origin", mp.mpf(0)))
        points.append((INFINITY, d.d1 - 1, "infinity", mp.mpf(0)))
        total = sum(p[1] for p in points)
        expected = 2 * d.total_degree - 2
        if total != expected:
            ok = False
        return CriticalReport(
            points=points,
            total_multiplicity=total,
            expected_multiplicity=expected,
            ball_radii=radii,
            passed=ok,
        )


# --------------------------------------------------------------------------
# trapping
# --------------------------------------------------------------------------

@dataclass
class TrappingReport:
    region: object
    sample_count: int
    iterate: int
    passed: bool
    worst_margin: object
    worst_sample: object
    petal_samples: int

    def raise_if_failed(self):
        if not self.passed:
            raise CertificateFailed(
                f"trapping failed at sample {self.worst_sample} "
                f"(margin {mp.nstr(self.worst_margin, 4)})"
            )
        return self


def germ_coefficient(spec: MapSpec, p, iterate: int = 1):
    """Quadratic coefficient a with g(p + u) = p + u + a u^2 + ... for g = f^iterate.

    Computed by central differencing of the dual derivative at working
    precision, so roughly two thirds of the working digits are exact.
    """
    ctx = spec.precision
    with ctx.workdps():
        p = mp.mpc(p)
        h = mp.mpf(10) ** (-(ctx.significant_digits // 3))
        scale = max(abs(p), mp.mpf(1))
        h = h * scale
        dplus = iterate_dual(spec, p + h, iterate).derivative
        dminus = iterate_dual(spec, p - h, iterate).derivative
        return (dplus - dminus) / (4 * h)


def canonical_traps(spec: MapSpec) -> dict:
    """The family's forward-invariant regions, keyed by name.

    Values are (region, iterate, parabolic_point_or_None).  Regions are only
    claimed traps; certify_trapping is the check.
    """
    ctx = spec.precision
    with ctx.workdps():
        outer = DiskComplement(center=-1.0, radius=2.0)
        if spec.kind in (KIND_H, KIND_HMN):
            return {"outer": (outer, 1, mp.mpf(1))}
        if spec.kind in (KIND_G, KIND_GMN):
            return {"unit": (Disk(center=0.5, radius=0.5), 1, mp.mpf(1))}
        d = spec.degrees
        s_eff = effective_s(spec)
        if spec.kind in (KIND_P, KIND_F):
            traps = {"outer": (outer, 1, mp.mpf(1) if spec.kind == KIND_P else None)}
            if d.n % 2 == 1:
                r0 = float(mp.mpf(d.d_max) ** 4 * s_eff)
                traps["origin"] = (Disk(center=0.0, radius=r0), 1, None)
            return traps
        if spec.kind == KIND_Q:
            s_nu = spec.rings.s ** d.nu_value(ctx)
            inner = Disk(center=complex(s_nu / 4), radius=float(3 * s_nu / 4))
            return {
                "outer": (outer, 1, mp.mpf(1)),
                "inner": (inner, 1, s_nu),
            }
        if spec.kind == KIND_R:
            z0 = spec.coeff("z0")
            inner = Disk(center=complex(z0 / 4), radius=float(3 * z0 / 4))
            return {
                "outer": (outer, 2, mp.mpf(1)),
                "inner": (inner, 2, z0),
            }
    raise ValueError(f"no canonical traps for kind {spec.kind!r}")


def certify_trapping(
    spec: MapSpec,
    region,
    sample_count: int = DEFAULT_SAMPLES,
    iterate: int = 1,
    parabolic_point=None,
) -> TrappingReport:
    """Sample the region boundary; every image must land strictly inside.

    Images within 1e-6 * diam of the parabolic point use the petal condition
    instead: Re(-1/w) must strictly increase, w = a (z - p).
    """
    ctx = spec.precision
    with ctx.workdps():
        diam = region_diameter(region)
        near = PETAL_NEIGHBORHOOD * diam
        germ = None
        worst_margin = mp.inf
        worst_sample = None
        petal_count = 0
        passed = True
        for z in boundary_points(region, sample_count):
            w = mp.mpc(z)
            for _ in range(iterate):
                w = evaluate_value(spec, w)
                if w is INFINITY:
                    break
            if (
                parabolic_point is not None
                and w is not INFINITY
                and abs(w - parabolic_point) < near
            ):
                if germ is None:
                    germ = germ_coefficient(spec, parabolic_point, iterate)
                v_before = -1 / (germ * (z - parabolic_point))
                v_after = -1 / (germ * (w - parabolic_point))
                petal_count += 1
                if not v_after.real > v_before.real:
                    passed = False
                    worst_sample = z
                continue
            margin = region_margin(region, w)
            if margin < worst_margin:
                worst_margin = margin
                worst_sample = z
            if margin <= 0:
                passed = False
        return TrappingReport(
            region=region,
            sample_count=sample_count,
            iterate=iterate,
            passed=passed,
            worst_margin=worst_margin,
            worst_sample=worst_sample,
            petal_samples=petal_count,
        )


def certify_canonical_traps(spec: MapSpec, sample_count: int = DEFAULT_SAMPLES) -> dict:
    """Run certify_trapping on every canonical trap of the spec."""
    out = {}
    for name, (region, iterate, ppoint) in canonical_traps(spec).items():
        out[name] = certify_trapping(
            spec, region, sample_count, iterate=iterate, parabolic_point=ppoint
        )
    return out


# --------------------------------------------------------------------------
# limit maps
# --------------------------------------------------------------------------

def limit_map_deviation(spec: MapSpec, sample_set, conjugated: bool = False):
    """Sup over samples of |family map - limit map|.

    P, Q: limit h_{d1}; conjugated Q (via z -> s^nu / z): limit h_{dn}.
    R: the second iterate against h_{d1,dn}; conjugated (via z -> z0/z)
    against h_{d1 dn}.  Samples must avoid 0 and the limit map's poles.
    """
    ctx = spec.precision
    d = spec.degrees
    with ctx.workdps():
        if spec.kind in (KIND_P, KIND_F) or (spec.kind == KIND_Q and not conjugated):
            limit = ref_rat_h(d.d1, ctx)

            def value(z):
                return evaluate_value(spec, z), evaluate_value(limit, z)

        elif spec.kind == KIND_Q:
            limit = ref_rat_h(d.dn, ctx)
            s_nu = spec.rings.s ** d.nu_value(ctx)

            def value(z):
                inner = evaluate_value(spec, s_nu / z)
                lhs = INFINITY if inner is INFINITY or inner == 0 else s_nu / inner
                return lhs, evaluate_value(limit, z)

        elif spec.kind == KIND_R and not conjugated:
            limit = ref_rat_hmn(d.d1, d.dn, ctx)

            def value(z):
                mid = evaluate_value(spec, z)
                lhs = INFINITY if mid is INFINITY else evaluate_value(spec, mid)
                return lhs, evaluate_value(limit, z)

        elif spec.kind == KIND_R:
            limit = ref_rat_h(d.d1 * d.dn, ctx)
            z0 = spec.coeff("z0")

            def value(z):
                w = z0 / z
                for _ in range(2):
                    w = evaluate_value(spec, w)
                    if w is INFINITY:
                        return INFINITY, evaluate_value(limit, z)
                lhs = INFINITY if w == 0 else z0 / w
                return lhs, evaluate_value(limit, z)

        else:
            raise ValueError(f"no limit map for kind {spec.kind!r}")

        dev = mp.mpf(0)
        for z in sample_set:
            lhs, rhs = value(mp.mpc(z))
            if lhs is INFINITY or rhs is INFINITY:
                raise CertificateFailed(f"sample {z} hit a pole of the comparison")
            dev = max(dev, abs(lhs - rhs))
        return dev


def unit_circle_samples(count: int, ctx):
    with ctx.workdps():
        return [mp.exp(2j * mp.pi * (k + mp.mpf("0.5")) / count) for k in range(count)]


# --------------------------------------------------------------------------
# schedule order checks
# --------------------------------------------------------------------------

def schedule_order_report(spec: MapSpec) -> dict:
    """Order-of-magnitude diagnostics of the ring schedule.

    Reports log|a_i| / log s against sum_{j<=i} 1/d_j, and the cross ratios
    |a_i/a_j|^{D_i} against the bound s^{1+2/d_max}.
    """
    ctx = spec.precision
    d = spec.degrees
    with ctx.workdps():
        s = effective_s(spec)
        logs = mp.log(s)
        exponents = []
        acc = mp.mpf(0)
        for i, a in enumerate(spec.rings.values):
            acc += mp.mpf(1) / d.degrees[i]
            exponents.append((mp.log(abs(a)) / logs, acc))
        bound = s ** (1 + mp.mpf(2) / d.d_max)
        cross = []
        for j in range(d.n - 1):
            for i in range(j + 1, d.n - 1):
                ratio = abs(spec.rings.values[i] / spec.rings.values[j]) ** d.D[i]
                cross.append(((i + 1, j + 1), ratio, bound))
        return {"exponents": exponents, "cross_ratios": cross}
