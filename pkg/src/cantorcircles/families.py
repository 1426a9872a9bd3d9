"""Rational-map families with Cantor-circle Julia sets.

Four parametric families are constructed here, all sharing the same factored
shape  pre * z^e0 * prod_i (alpha_i z^{m_i} + beta_i)^{e_i} / den(z) + off:

* ``P``   one parabolic fixed point at 1, ring parameters a_1..a_{n-1};
* ``Q``   two parabolic fixed points 1 and s^nu (odd n), coefficients
          (X, Y, Z, W) solved elsewhere;
* ``R``   a parabolic two-cycle 1 <-> z0 (odd n), coefficients (S, T, z0);
* ``f``   the hyperbolic comparison family indexed by a parity p in {0, 1};

plus the reference parabolic maps g_n, g_{m,n} (polynomials fixing 1) and
h_n, h_{m,n} (their Moebius conjugates fixing 1 with the basin at infinity).

Evaluation always goes through the factored product to preserve precision at
tiny ring moduli; derivatives come from dual-number accumulation.  For
|z| > 1e8 or z = INFINITY the reciprocal chart w = 1/z is used.  Exact poles
return a ``Pole`` marker carrying the local order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath as mp
import numpy as np

from .errors import ConstraintViolated, DegenerateDenominator
from .numerics import (
    INFINITY,
    RECIPROCAL_CHART_RADIUS,
    Dual,
    Pole,
    PrecisionContext,
)

KIND_P = "P"
KIND_Q = "Q"
KIND_R = "R"
KIND_F = "f"
KIND_G = "g"
KIND_GMN = "gmn"
KIND_H = "h"
KIND_HMN = "hmn"

PERTURBED_KINDS = (KIND_P, KIND_Q, KIND_R, KIND_F)
REFERENCE_KINDS = (KIND_G, KIND_GMN, KIND_H, KIND_HMN)


def _mpf_fraction(fr: Fraction) -> mp.mpf:
    return mp.mpf(fr.numerator) / mp.mpf(fr.denominator)


@dataclass(frozen=True)
class DegreeVector:
    """Degrees d_1..d_n with sum of reciprocals strictly below one."""

    degrees: tuple

    def __post_init__(self):
        d = self.degrees
        if len(d) < 2:
            raise ConstraintViolated("need at least two degrees")
        if any(int(x) != x or x < 2 for x in d):
            raise ConstraintViolated("every degree must be an integer >= 2")
        if sum(Fraction(1, int(x)) for x in d) >= 1:
            raise ConstraintViolated("sum of reciprocal degrees must be < 1")

    @property
    def n(self) -> int:
        return len(self.degrees)

    @property
    def d1(self) -> int:
        return self.degrees[0]

    @property
    def dn(self) -> int:
        return self.degrees[-1]

    @property
    def d_max(self) -> int:
        return max(self.degrees)

    @property
    def D(self) -> tuple:
        """Consecutive degree sums D_i = d_i + d_{i+1}, i = 1..n-1."""
        d = self.degrees
        return tuple(d[i] + d[i + 1] for i in range(len(d) - 1))

    @property
    def total_degree(self) -> int:
        return sum(self.degrees)

    @property
    def nu(self) -> Fraction:
        """Inner parabolic scale exponent: s^nu locates the second fixed point."""
        return Fraction(self.dn, self.dn - 1) * sum(
            Fraction(1, d) for d in self.degrees[:-1]
        )

    @property
    def mu(self) -> tuple:
        """Exponent data for the two-cycle normalization mu, as (base, exponent) pairs."""
        dn = self.dn
        return (
            (self.d1 * dn, Fraction(-dn, dn - 1)),
            (self.d_max, Fraction(2 * (dn - self.d1), self.d1 * (dn - 1))),
        )

    def nu_value(self, ctx: PrecisionContext) -> mp.mpf:
        with ctx.workdps():
            return _mpf_fraction(self.nu)

    def tau_value(self, ctx: PrecisionContext) -> mp.mpf:
        """Ring-schedule constant for the doubly-parabolic family."""
        with ctx.workdps():
            expo = sum(Fraction(self.dn, d) for d in self.degrees[:-1])
            base = mp.mpf(self.d1 * self.dn) * mp.mpf(self.d_max) ** _mpf_fraction(
                Fraction(2 * (self.d1 - self.dn), self.d1)
            )
            return base ** (1 / _mpf_fraction(expo))

    def mu_value(self, ctx: PrecisionContext) -> mp.mpf:
        with ctx.workdps():
            out = mp.mpf(1)
            for base, expo in self.mu:
                out *= mp.mpf(base) ** _mpf_fraction(expo)
            return out


def validate_degrees(raw: Sequence[int]) -> DegreeVector:
    """Validate a raw degree list and expose the derived constants."""
    return DegreeVector(tuple(int(x) for x in raw))


@dataclass(frozen=True)
class RingParameters:
    """Ring moduli a_1..a_{n-1} (values), the scale s, and optional phases."""

    values: tuple
    s: object  # mpf, or None when constructed from explicit values
    phases: tuple

    def moduli(self):
        return tuple(abs(v) for v in self.values)


def make_schedule(
    kind: str,
    d: DegreeVector,
    s,
    phases: Sequence[float] | None = None,
    precision: PrecisionContext | None = None,
) -> RingParameters:
    """Build the ring moduli |v_1| = (d_max^2 kappa s)^{1/d_1},
    |v_i| = (kappa s)^{1/d_i} |v_{i-1}|, with kappa = tau for Q and 1 otherwise.
    """
    ctx = precision or PrecisionContext()
    if phases is not None and kind in (KIND_Q, KIND_R):
        if any(p != 0 for p in phases):
            raise ConstraintViolated(f"family {kind} requires positive real rings")
    with ctx.workdps():
        s = mp.mpf(s)
        if s <= 0:
            raise ConstraintViolated("schedule scale s must be positive")
        kappa = d.tau_value(ctx) if kind == KIND_Q else mp.mpf(1)
        mods = [(mp.mpf(d.d_max) ** 2 * kappa * s) ** (mp.mpf(1) / d.degrees[0])]
        for i in range(1, d.n - 1):
            mods.append((kappa * s) ** (mp.mpf(1) / d.degrees[i]) * mods[-1])
        phs = tuple(float(p) for p in (phases or (0.0,) * (d.n - 1)))
        if len(phs) != d.n - 1:
            raise ConstraintViolated("need one phase per ring value")
        values = tuple(
            m * mp.exp(1j * mp.mpf(p)) if p else m for m, p in zip(mods, phs)
        )
        return RingParameters(values=values, s=s, phases=phs)


def explicit_rings(
    values: Sequence, precision: PrecisionContext | None = None
) -> RingParameters:
    """Wrap explicitly chosen ring values (e.g. the picture parameters).

    Moduli must be non-increasing; all-zero rings are allowed and collapse the
    family to its limit map.
    """
    ctx = precision or PrecisionContext()
    with ctx.workdps():
        vals = tuple(mp.mpc(v) if mp.mpc(v).imag != 0 else mp.mpf(v) for v in values)
        mods = [abs(v) for v in vals]
        if any(m2 > m1 for m1, m2 in zip(mods, mods[1:])):
            raise ConstraintViolated("ring moduli must be non-increasing")
        phs = tuple(float(mp.arg(v)) if abs(v) else 0.0 for v in vals)
        return RingParameters(values=vals, s=None, phases=phs)


def effective_s(spec) -> mp.mpf:
    """Scale s of the rings; inferred from |v_1| when they were explicit."""
    rings = spec.rings
    with spec.precision.workdps():
        if rings.s is not None:
            return rings.s
        m1 = abs(rings.values[0])
        if m1 == 0:
            return mp.mpf(0)
        return m1 ** spec.degrees.d1 / mp.mpf(spec.degrees.d_max) ** 2


@dataclass(frozen=True)
class MapSpec:
    """A fully instantiated rational map.

    ``coeffs`` is a tuple of (name, value) pairs; use `.coeff(name)`.
    Instances are immutable and hashable, and evaluation is a pure function,
    so specs may be shared freely across worker threads or processes.
    """

    kind: str
    precision: PrecisionContext
    degrees: DegreeVector | None = None
    rings: RingParameters | None = None
    coeffs: tuple = ()
    p: int | None = None
    ref_orders: tuple = ()

    def coeff(self, name: str):
        for key, value in self.coeffs:
            if key == name:
                return value
        raise KeyError(name)


def coefficients_P(
    d: DegreeVector, rings: RingParameters, precision: PrecisionContext | None = None
):
    """Closed-form (A, B, C) making 1 a fixed point of multiplier 1.

    C = sum_i (-1)^{i-1} D_i a_i^{D_i} / (1 - a_i^{D_i}),  B = C/(1+C),
    A = (1/(1+C)) prod_i (1 - a_i^{D_i})^{(-1)^i}.
    """
    ctx = precision or PrecisionContext()
    with ctx.workdps():
        C = mp.mpf(0)
        prod = mp.mpf(1)
        for i, (a, Di) in enumerate(zip(rings.values, d.D)):
            aD = a ** Di
            if aD == 1:
                raise DegenerateDenominator(f"ring value {i + 1} has a_i^D_i = 1")
            C += (-1) ** i * Di * aD / (1 - aD)
            prod *= (1 - aD) ** (-1 if i % 2 == 0 else 1)
        if 1 + C == 0:
            raise DegenerateDenominator("1 + C vanished")
        A = prod / (1 + C)
        B = C / (1 + C)
        return A, B, C


def make_p_map(
    degrees: Sequence[int],
    s=None,
    rings: RingParameters | Sequence | None = None,
    phases: Sequence[float] | None = None,
    precision: PrecisionContext | None = None,
) -> MapSpec:
    ctx = precision or PrecisionContext()
    d = validate_degrees(degrees)
    if rings is None:
        rings = make_schedule(KIND_P, d, s, phases, ctx)
    elif not isinstance(rings, RingParameters):
        rings = explicit_rings(rings, ctx)
    A, B, C = coefficients_P(d, rings, ctx)
    return MapSpec(
        kind=KIND_P,
        precision=ctx,
        degrees=d,
        rings=rings,
        coeffs=(("A", A), ("B", B), ("C", C)),
    )


def make_f_map(
    degrees: Sequence[int],
    p: int,
    s=None,
    rings: RingParameters | Sequence | None = None,
    phases: Sequence[float] | None = None,
    precision: PrecisionContext | None = None,
) -> MapSpec:
    ctx = precision or PrecisionContext()
    if p not in (0, 1):
        raise ConstraintViolated("parity p must be 0 or 1")
    d = validate_degrees(degrees)
    if rings is None:
        rings = make_schedule(KIND_F, d, s, phases, ctx)
    elif not isinstance(rings, RingParameters):
        rings = explicit_rings(rings, ctx)
    return MapSpec(kind=KIND_F, precision=ctx, degrees=d, rings=rings, p=p)


def make_q_map(
    degrees: Sequence[int],
    s,
    coeffs,
    precision: PrecisionContext | None = None,
) -> MapSpec:
    """Assemble the doubly-parabolic family from solved (X, Y, Z, W)."""
    ctx = precision or PrecisionContext()
    d = validate_degrees(degrees)
    if d.n % 2 == 0:
        raise ConstraintViolated("family Q requires odd n")
    rings = make_schedule(KIND_Q, d, s, None, ctx)
    with ctx.workdps():
        X, Y, Z, W = (mp.mpf(v) for v in coeffs)
    return MapSpec(
        kind=KIND_Q,
        precision=ctx,
        degrees=d,
        rings=rings,
        coeffs=(("X", X), ("Y", Y), ("Z", Z), ("W", W)),
    )


def make_r_map(
    degrees: Sequence[int],
    s,
    coeffs,
    precision: PrecisionContext | None = None,
) -> MapSpec:
    """Assemble the period-two family from solved (S, T, z0)."""
    ctx = precision or PrecisionContext()
    d = validate_degrees(degrees)
    if d.n % 2 == 0:
        raise ConstraintViolated("family R requires odd n")
    rings = make_schedule(KIND_R, d, s, None, ctx)
    with ctx.workdps():
        S, T, z0 = (mp.mpf(v) for v in coeffs)
    return MapSpec(
        kind=KIND_R,
        precision=ctx,
        degrees=d,
        rings=rings,
        coeffs=(("S", S), ("T", T), ("z0", z0)),
    )


def ref_poly_g(n: int, precision: PrecisionContext | None = None) -> MapSpec:
    """g_n(z) = (z^n + n - 1)/n, parabolic at 1, basin contains the unit disk."""
    return MapSpec(kind=KIND_G, precision=precision or PrecisionContext(), ref_orders=(n,))


def ref_poly_gmn(m: int, n: int, precision: PrecisionContext | None = None) -> MapSpec:
    """g_{m,n}(z) = (z^m + mn - 1)^n / (mn)^n."""
    return MapSpec(kind=KIND_GMN, precision=precision or PrecisionContext(), ref_orders=(m, n))


def ref_rat_h(n: int, precision: PrecisionContext | None = None) -> MapSpec:
    """h_n(z) = n z^n / (1 + (n-1) z^n), basin contains |z| > 1."""
    return MapSpec(kind=KIND_H, precision=precision or PrecisionContext(), ref_orders=(n,))


def ref_rat_hmn(m: int, n: int, precision: PrecisionContext | None = None) -> MapSpec:
    """h_{m,n}(z) = (mn)^n z^{mn} / (1 + (mn-1) z^m)^n."""
    return MapSpec(kind=KIND_HMN, precision=precision or PrecisionContext(), ref_orders=(m, n))


# --------------------------------------------------------------------------
# factored form compilation
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FactoredForm:
    """pre * z^e0 * prod (alpha z^m + beta)^e / sum(c_k z^{p_k}) + off."""

    pre: object
    e0: int
    factors: tuple  # of (alpha, beta, m, e)
    den: tuple      # of (c, p)
    off: object

    def reciprocal(self) -> "FactoredForm":
        """The same map written in the chart w = 1/z."""
        P = max(p for _, p in self.den)
        e0r = P - self.e0 - sum(m * e for _, _, m, e in self.factors)
        factors = tuple((beta, alpha, m, e) for alpha, beta, m, e in self.factors)
        den = tuple((c, P - p) for c, p in self.den)
        return FactoredForm(self.pre, e0r, factors, den, self.off)


def _build_form(spec: MapSpec) -> FactoredForm:
    kind = spec.kind
    one = mp.mpf(1)
    if kind in PERTURBED_KINDS:
        d = spec.degrees
        n = d.n
        ring_pows = [a ** Di for a, Di in zip(spec.rings.values, d.D)]
        if kind == KIND_P:
            e0 = d.dn if n % 2 == 1 else -d.dn
            signs = [1 if i % 2 == 0 else -1 for i in range(n - 1)]
            pre = spec.coeff("A") * d.d1
            den = ((mp.mpf(d.d1 - 1), d.d1), (one, 0))
            off = spec.coeff("B")
        elif kind == KIND_Q:
            e0 = d.dn
            signs = [1 if i % 2 == 0 else -1 for i in range(n - 1)]
            pre = mp.mpf(d.d1)
            den = (
                ((d.d1 - 1) * spec.coeff("X"), d.d1),
                (spec.coeff("Y"), 1),
                (spec.coeff("Z"), 0),
            )
            off = spec.coeff("W")
        elif kind == KIND_R:
            e0 = -d.dn
            signs = [-1 if i % 2 == 0 else 1 for i in range(n - 1)]
            pre = spec.coeff("S")
            den = ((one, 0),)
            off = spec.coeff("T")
        else:  # hyperbolic f
            p = spec.p
            e0 = d.d1 * (1 if (n - p) % 2 == 0 else -1)
            signs = [1 if (n - i - 1 - p) % 2 == 0 else -1 for i in range(n - 1)]
            pre = one
            den = ((one, 0),)
            off = mp.mpf(0)
        factors = []
        for aD, Di, sg in zip(ring_pows, d.D, signs):
            if aD == 0:
                e0 += Di * sg
            else:
                factors.append((one, -aD, Di, sg))
        return FactoredForm(pre, e0, tuple(factors), den, off)
    if kind == KIND_G:
        (n,) = spec.ref_orders
        return FactoredForm(one / n, 0, ((one, mp.mpf(n - 1), n, 1),), ((one, 0),), mp.mpf(0))
    if kind == KIND_GMN:
        m, n = spec.ref_orders
        return FactoredForm(
            one / mp.mpf(m * n) ** n, 0, ((one, mp.mpf(m * n - 1), m, n),), ((one, 0),), mp.mpf(0)
        )
    if kind == KIND_H:
        (n,) = spec.ref_orders
        return FactoredForm(mp.mpf(n), n, ((mp.mpf(n - 1), one, n, -1),), ((one, 0),), mp.mpf(0))
    if kind == KIND_HMN:
        m, n = spec.ref_orders
        return FactoredForm(
            mp.mpf(m * n) ** n, m * n, ((mp.mpf(m * n - 1), one, m, -n),), ((one, 0),), mp.mpf(0)
        )
    raise ValueError(f"unknown kind {kind!r}")


@lru_cache(maxsize=None)
def factored_form(spec: MapSpec, chart: str = "z") -> FactoredForm:
    with spec.precision.workdps():
        form = _build_form(spec)
        return form if chart == "z" else form.reciprocal()


def rational_degree(spec: MapSpec) -> int:
    """Degree of the rational map from exponent bookkeeping on the form."""
    form = factored_form(spec)
    num = max(0, form.e0) + sum(m * e for _, _, m, e in form.factors if e > 0)
    den = (
        max(0, -form.e0)
        + sum(-m * e for _, _, m, e in form.factors if e < 0)
        + max(p for _, p in form.den)
    )
    return max(num, den)


def _eval_form_dual(form: FactoredForm, zd: Dual, ctx: PrecisionContext):
    z = zd.value
    tol = mp.mpf(10) ** (2 - ctx.significant_digits)
    order = 0
    if z == 0 and form.e0 < 0:
        order += -form.e0
    factor_duals = []
    for alpha, beta, m, e in form.factors:
        f = zd ** m * alpha + beta
        scale = abs(alpha) * abs(z) ** m + abs(beta)
        if e < 0 and (f.value == 0 or abs(f.value) <= tol * scale):
            order += -e
        factor_duals.append((f, e))
    den = Dual.constant(mp.mpc(0))
    dscale = mp.mpf(0)
    for c, p in form.den:
        den = den + zd ** p * c
        dscale += abs(c) * abs(z) ** p
    if den.value == 0 or abs(den.value) <= tol * dscale:
        order += 1
    if order:
        return Pole(order=order)
    out = Dual.constant(mp.mpc(form.pre))
    if form.e0:
        out = out * zd ** form.e0
    for f, e in factor_duals:
        out = out * f ** e
    out = out / den
    return out + form.off


def evaluate(spec: MapSpec, z):
    """Evaluate the map and its derivative at z in the extended plane.

    Returns a Dual (value, derivative) or a Pole marker.  Accepts INFINITY.
    """
    ctx = spec.precision
    with ctx.workdps():
        if z is INFINITY:
            w = mp.mpc(0)
        else:
            z = mp.mpc(z)
            if abs(z) <= RECIPROCAL_CHART_RADIUS:
                return _eval_form_dual(factored_form(spec), Dual.variable(z), ctx)
            w = 1 / z
        rform = factored_form(spec, "recip")
        res = _eval_form_dual(rform, Dual.variable(w), ctx)
        if isinstance(res, Pole):
            return res
        # d/dz f(1/w) = f'(w) * (-w^2)
        return Dual(res.value, res.derivative * (-(w ** 2)))


def evaluate_value(spec: MapSpec, z):
    """Value-only evaluation; returns an mpc or INFINITY."""
    res = evaluate(spec, z)
    return INFINITY if isinstance(res, Pole) else res.value


def iterate_dual(spec: MapSpec, z, k: int):
    """Dual evaluation of the k-th iterate via the chain rule."""
    with spec.precision.workdps():
        cur = Dual.variable(mp.mpc(z))
        for _ in range(k):
            res = evaluate(spec, cur.value)
            if isinstance(res, Pole):
                return res
            cur = Dual(res.value, res.derivative * cur.derivative)
        return cur


# --------------------------------------------------------------------------
# double-precision forms for rendering and tracing
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DoubleForm:
    """Float64 mirror of a FactoredForm, as plain numpy arrays."""

    pre: complex
    e0: int
    alpha: np.ndarray
    beta: np.ndarray
    m: np.ndarray
    e: np.ndarray
    den_c: np.ndarray
    den_p: np.ndarray
    off: complex


def _to_double(form: FactoredForm) -> DoubleForm:
    return DoubleForm(
        pre=complex(form.pre),
        e0=int(form.e0),
        alpha=np.array([complex(a) for a, _, _, _ in form.factors], dtype=complex),
        beta=np.array([complex(b) for _, b, _, _ in form.factors], dtype=complex),
        m=np.array([m for _, _, m, _ in form.factors], dtype=np.int64),
        e=np.array([e for _, _, _, e in form.factors], dtype=np.int64),
        den_c=np.array([complex(c) for c, _ in form.den], dtype=complex),
        den_p=np.array([p for _, p in form.den], dtype=np.int64),
        off=complex(form.off),
    )


@lru_cache(maxsize=None)
def double_forms(spec: MapSpec):
    """(z-chart, reciprocal-chart) float64 forms for a spec."""
    return _to_double(factored_form(spec)), _to_double(factored_form(spec, "recip"))


def _form_numpy_value(form: DoubleForm, z: np.ndarray) -> np.ndarray:
    out = np.full(z.shape, form.pre, dtype=complex)
    if form.e0:
        out = out * z ** form.e0
    for a, b, m, e in zip(form.alpha, form.beta, form.m, form.e):
        out = out * (a * z ** int(m) + b) ** int(e)
    den = np.zeros(z.shape, dtype=complex)
    for c, p in zip(form.den_c, form.den_p):
        den = den + c * z ** int(p)
    return out / den + form.off


def numpy_map(spec: MapSpec):
    """Vectorized float64 evaluator with automatic reciprocal-chart switch."""
    zform, rform = double_forms(spec)

    def f(z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        out = np.empty_like(z)
        big = (np.abs(z) > RECIPROCAL_CHART_RADIUS) | ~np.isfinite(z)
        if big.any():
            w = np.where(np.isfinite(z), z, np.inf)
            with np.errstate(all="ignore"):
                out[big] = _form_numpy_value(rform, 1.0 / w[big])
        small = ~big
        if small.any():
            with np.errstate(all="ignore"):
                out[small] = _form_numpy_value(zform, z[small])
        return out

    return f


def scalar_dual_map(spec: MapSpec):
    """Float64 (value, derivative) evaluator for continuation seeds."""
    zform, _ = double_forms(spec)

    def f(z: complex):
        v = complex(zform.pre)
        dv = 0j
        if zform.e0:
            dv = v * zform.e0 * z ** (zform.e0 - 1)
            v = v * z ** zform.e0
        for a, b, m, e in zip(zform.alpha, zform.beta, zform.m, zform.e):
            m = int(m)
            e = int(e)
            g = a * z ** m + b
            dg = a * m * z ** (m - 1)
            gp = g ** e
            dgp = e * g ** (e - 1) * dg
            dv = dv * gp + v * dgp
            v = v * gp
        den = 0j
        dden = 0j
        for c, p in zip(zform.den_c, zform.den_p):
            p = int(p)
            den += c * z ** p
            if p:
                dden += c * p * z ** (p - 1)
        dv = (dv * den - v * dden) / (den * den)
        return v / den + zform.off, dv

    return f


# --------------------------------------------------------------------------
# JSON serialization
# --------------------------------------------------------------------------

def _num_to_str(x, dps: int) -> str:
    return mp.nstr(x, dps + 10, strip_zeros=False)


def _coeff_to_json(x, dps: int):
    if isinstance(x, mp.mpc) and x.imag != 0:
        return [_num_to_str(x.real, dps), _num_to_str(x.imag, dps)]
    return _num_to_str(mp.mpf(x.real) if isinstance(x, mp.mpc) else x, dps)


def _coeff_from_json(v):
    if isinstance(v, list):
        return mp.mpc(mp.mpf(v[0]), mp.mpf(v[1]))
    return mp.mpf(v)


def spec_to_json(spec: MapSpec) -> dict:
    """Serialize to a JSON document; numbers become decimal strings."""
    ctx = spec.precision
    dps = ctx.significant_digits
    with ctx.workdps():
        doc = {
            "kind": spec.kind,
            "precision": dps,
            "degrees": list(spec.degrees.degrees) if spec.degrees else None,
            "p": spec.p,
            "ref_orders": list(spec.ref_orders),
            "s": None
            if spec.rings is None or spec.rings.s is None
            else _num_to_str(spec.rings.s, dps),
            "phases": list(spec.rings.phases) if spec.rings else [],
            "rings": [_num_to_str(abs(v), dps) for v in spec.rings.values]
            if spec.rings
            else [],
            "coeffs": {k: _coeff_to_json(v, dps) for k, v in spec.coeffs},
        }
    return doc


def spec_from_json(doc: dict) -> MapSpec:
    ctx = PrecisionContext(int(doc["precision"]))
    kind = doc["kind"]
    with ctx.workdps():
        if kind in REFERENCE_KINDS:
            return MapSpec(kind=kind, precision=ctx, ref_orders=tuple(doc["ref_orders"]))
        d = validate_degrees(doc["degrees"])
        phases = tuple(float(p) for p in doc["phases"])
        mods = [mp.mpf(v) for v in doc["rings"]]
        values = tuple(
            m * mp.exp(1j * mp.mpf(p)) if p else m for m, p in zip(mods, phases)
        )
        rings = RingParameters(
            values=values,
            s=None if doc["s"] is None else mp.mpf(doc["s"]),
            phases=phases,
        )
        coeffs = tuple((k, _coeff_from_json(v)) for k, v in doc["coeffs"].items())
        return MapSpec(
            kind=kind,
            precision=ctx,
            degrees=d,
            rings=rings,
            coeffs=coeffs,
            p=doc["p"],
        )


def spec_to_json_str(spec: MapSpec) -> str:
    return json.dumps(spec_to_json(spec), indent=2, sort_keys=True)


def spec_from_json_str(text: str) -> MapSpec:
    return spec_from_json(json.loads(text))
