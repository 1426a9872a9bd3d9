"""Newton solves of the parabolic coefficient systems.

The doubly-parabolic family needs four real coefficients (X, Y, Z, W) pinning
fixed points of multiplier one at 1 and at s^nu; the period-two family needs
(S, T, z0) pinning the cycle 1 <-> z0.  Both systems are written in the
normalized variables whose s -> 0 limits are known in closed form, solved by
damped-free Newton iteration from those limits, and cross-checked against the
asymptotic limit values.

The systems are stiff in a specific way: the residuals mix O(1) terms with
perturbations as small as 1e-16, so everything runs in extended precision
(50 digits by default; at least 40 are required).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath as mp

from .errors import ConstraintViolated, DegenerateDenominator
from .families import (
    KIND_Q,
    KIND_R,
    DegreeVector,
    MapSpec,
    RingParameters,
    make_q_map,
    make_r_map,
    make_schedule,
    validate_degrees,
)
from .numerics import Dual, PrecisionContext, newton_system

MIN_SOLVER_DIGITS = 40
DEFAULT_MAX_STEPS = 60


def _require_solver_precision(ctx: PrecisionContext):
    if ctx.significant_digits < MIN_SOLVER_DIGITS:
        raise ConstraintViolated(
            f"coefficient solves need >= {MIN_SOLVER_DIGITS} digits, "
            f"got {ctx.significant_digits}"
        )


def _require_odd(d: DegreeVector, family: str):
    if d.n % 2 == 0 or d.n < 3:
        raise ConstraintViolated(f"family {family} requires odd n >= 3")


@dataclass(frozen=True)
class QSystemState:
    """Scheduled rings plus the constants rho_1..rho_4 entering the Q system."""

    d: DegreeVector
    rings: RingParameters
    s: mp.mpf
    s_nu: mp.mpf
    rho: tuple
    lam: tuple | None = None  # current (x, y, z, w), if any
    precision: PrecisionContext = PrecisionContext()


@dataclass(frozen=True)
class RSystemState:
    """Scheduled rings plus kappa_1, kappa_3 (kappa_2, kappa_4 depend on z1)."""

    d: DegreeVector
    rings: RingParameters
    s: mp.mpf
    s_nu: mp.mpf
    mu_s_nu: mp.mpf
    kappa1: mp.mpf
    kappa3: mp.mpf
    lam: tuple | None = None  # current (I, J, z1), if any
    precision: PrecisionContext = PrecisionContext()


@dataclass
class CoefficientSolution:
    values: dict
    residual_norm: mp.mpf
    iterations: int
    residual_history: list = field(default_factory=list)
    asymptotic_ratios: dict = field(default_factory=dict)


def seed_constants_q(d: DegreeVector, ctx: PrecisionContext):
    """Limit slopes (x_n, y_n, w_n) of the Q coefficients along s^nu."""
    with ctx.workdps():
        d1, dn = mp.mpf(d.d1), mp.mpf(d.dn)
        xn = d1 * (d1 - 3) * (dn - 1) / ((d1 - 1) ** 2 * dn)
        yn = 2 * d1 * (dn - 1) / ((d1 - 1) * dn)
        wn = (dn - 1) / dn
        return xn, yn, wn


def q_system(d, s, precision: PrecisionContext | None = None) -> QSystemState:
    ctx = precision or PrecisionContext()
    _require_solver_precision(ctx)
    d = d if isinstance(d, DegreeVector) else validate_degrees(d)
    _require_odd(d, "Q")
    with ctx.workdps():
        s = mp.mpf(s)
        rings = make_schedule(KIND_Q, d, s, None, ctx)
        s_nu = s ** d.nu_value(ctx)
        b_pows = [b ** Di for b, Di in zip(rings.values, d.D)]
        rho1 = mp.mpf(1)
        rho2 = mp.mpf(d.d1) * s ** ((d.dn - 1) * d.nu_value(ctx))
        rho3 = mp.mpf(0)
        rho4 = mp.mpf(0)
        for i, (bD, Di) in enumerate(zip(b_pows, d.D)):
            sgn = 1 if i % 2 == 0 else -1
            if bD == 1 or s_nu ** Di == bD:
                raise DegenerateDenominator(f"ring {i + 1} degenerates the system")
            rho1 *= (1 - bD) ** sgn
            rho2 *= (s_nu ** Di - bD) ** sgn
            rho3 += sgn * Di * bD / (1 - bD)
            rho4 += sgn * Di * s_nu ** Di / (s_nu ** Di - bD)
        return QSystemState(
            d=d, rings=rings, s=s, s_nu=s_nu,
            rho=(rho1, rho2, rho3, rho4), precision=ctx,
        )


def _q_residuals(lam, state: QSystemState):
    """The four residuals; works for plain mpf entries or Dual entries."""
    x, y, z, w = lam
    d1, dn = state.d.d1, state.d.dn
    rho1, rho2, rho3, rho4 = state.rho
    s_nu = state.s_nu
    s_d1nu = s_nu ** d1
    den1 = x * (d1 - 1) + y + z
    den2 = x * ((d1 - 1) * s_d1nu) + y * s_nu + z
    f1 = rho1 * d1 / den1 + w - 1
    f2 = rho2 / den2 + w / s_nu - 1
    f3 = 1 / (1 - w) - rho3 - (y * (d1 - 1) + z * d1) / den1
    f4 = (
        1 / (1 - w / s_nu)
        - rho4
        - dn
        + (x * ((d1 - 1) * d1 * s_d1nu) + y * s_nu) / den2
    )
    return [f1, f2, f3, f4]


def residual_q(state: QSystemState, lam=None):
    """Residual 4-vector of the Q system at state.lam (or a supplied lam)."""
    lam = lam if lam is not None else state.lam
    if lam is None:
        raise ValueError("no coefficient vector attached to the state")
    with state.precision.workdps():
        return _q_residuals([mp.mpf(v) for v in lam], state)


def solve_q(
    d,
    s,
    precision: PrecisionContext | None = None,
    tol=None,
    max_iter: int = DEFAULT_MAX_STEPS,
) -> CoefficientSolution:
    """Solve for (X, Y, Z, W) from the asymptotic seed; report limit ratios."""
    ctx = precision or PrecisionContext()
    state = q_system(d, s, ctx)
    d = state.d
    with ctx.workdps():
        if tol is None:
            tol = mp.mpf(10) ** (10 - ctx.significant_digits)
        xn, yn, wn = seed_constants_q(d, ctx)
        s_nu = state.s_nu
        seed = (1 + xn * s_nu, yn * s_nu, mp.mpf(1), wn * s_nu)
        history: list = []
        sol = newton_system(
            lambda lam: _q_residuals(lam, state),
            seed, tol, max_iter=max_iter, precision=ctx, trace=history,
        )
        X, Y, Z, W = sol
        ratios = {
            "(X-1)/s^nu": ((X - 1) / s_nu, xn),
            "Y/s^nu": (Y / s_nu, yn),
            "(Z-1)/s^nu": ((Z - 1) / s_nu, mp.mpf(0)),
            "W/s^nu": (W / s_nu, wn),
        }
        return CoefficientSolution(
            values={"X": X, "Y": Y, "Z": Z, "W": W},
            residual_norm=history[-1],
            iterations=len(history) - 1,
            residual_history=history,
            asymptotic_ratios=ratios,
        )


def build_q_map(d, s, precision: PrecisionContext | None = None) -> MapSpec:
    """Solve the coefficient system and assemble the map in one call."""
    ctx = precision or PrecisionContext()
    sol = solve_q(d, s, ctx)
    vals = sol.values
    return make_q_map(
        d.degrees if isinstance(d, DegreeVector) else d,
        s, (vals["X"], vals["Y"], vals["Z"], vals["W"]), ctx,
    )


def r_system(d, s, precision: PrecisionContext | None = None) -> RSystemState:
    ctx = precision or PrecisionContext()
    _require_solver_precision(ctx)
    d = d if isinstance(d, DegreeVector) else validate_degrees(d)
    _require_odd(d, "R")
    with ctx.workdps():
        s = mp.mpf(s)
        rings = make_schedule(KIND_R, d, s, None, ctx)
        s_nu = s ** d.nu_value(ctx)
        mu_s_nu = d.mu_value(ctx) * s_nu
        kappa1 = mp.mpf(1)
        kappa3 = mp.mpf(0)
        for i, (c, Di) in enumerate(zip(rings.values, d.D)):
            sgn = -1 if i % 2 == 0 else 1
            cD = c ** Di
            if cD == 1:
                raise DegenerateDenominator(f"ring {i + 1} degenerates the system")
            kappa1 *= (1 - cD) ** sgn
            kappa3 += sgn * Di * cD / (1 - cD)
        return RSystemState(
            d=d, rings=rings, s=s, s_nu=s_nu, mu_s_nu=mu_s_nu,
            kappa1=kappa1, kappa3=kappa3, precision=ctx,
        )


def _r_residuals(lam, state: RSystemState):
    """Residuals of the period-two system in normalized (I, J, z1)."""
    I, J, z1 = lam
    d = state.d
    ddn = d.d1 * d.dn
    msnu = state.mu_s_nu
    z0 = z1 * (ddn * msnu)
    kappa2 = Dual.constant(mp.mpf(1)) if isinstance(z1, Dual) else mp.mpf(1)
    kappa4 = kappa2 * 0
    for i, (c, Di) in enumerate(zip(state.rings.values, d.D)):
        sgn = -1 if i % 2 == 0 else 1
        t = (z0 * (1 / c)) ** Di
        kappa2 = kappa2 * (t - 1) ** sgn
        kappa4 = kappa4 + (t / (t - 1)) * (sgn * Di)
    g1 = I * state.kappa1 + J * (ddn - 1) - z1 * ddn
    g2 = kappa2 * I / z1 ** d.dn + J * ((ddn - 1) * msnu) - 1
    g3 = z1 / (
        (z1 * ddn - J * (ddn - 1)) * (1 - J * ((ddn - 1) * msnu))
    ) - (1 - state.kappa3 / d.d1) * (1 - kappa4 / d.dn) * mp.mpf(1)
    return [g1, g2, g3]


def residual_r(state: RSystemState, lam=None):
    lam = lam if lam is not None else state.lam
    if lam is None:
        raise ValueError("no coefficient vector attached to the state")
    with state.precision.workdps():
        return _r_residuals([mp.mpf(v) for v in lam], state)


def solve_r(
    d,
    s,
    precision: PrecisionContext | None = None,
    tol=None,
    max_iter: int = DEFAULT_MAX_STEPS,
) -> CoefficientSolution:
    """Solve for (I, J, z1) from (1,1,1); convert to (S, T, z0)."""
    ctx = precision or PrecisionContext()
    state = r_system(d, s, ctx)
    d = state.d
    with ctx.workdps():
        if tol is None:
            tol = mp.mpf(10) ** (10 - ctx.significant_digits)
        history: list = []
        sol = newton_system(
            lambda lam: _r_residuals(lam, state),
            (mp.mpf(1), mp.mpf(1), mp.mpf(1)),
            tol, max_iter=max_iter, precision=ctx, trace=history,
        )
        I, J, z1 = sol
        ddn = d.d1 * d.dn
        msnu = state.mu_s_nu
        S = msnu * I
        T = (ddn - 1) * msnu * J
        z0 = ddn * msnu * z1
        mu = d.mu_value(ctx)
        ratios = {
            "S/s^nu": (S / state.s_nu, mu),
            "T/s^nu": (T / state.s_nu, (ddn - 1) * mu),
            "z0/s^nu": (z0 / state.s_nu, ddn * mu),
        }
        return CoefficientSolution(
            values={"I": I, "J": J, "z1": z1, "S": S, "T": T, "z0": z0},
            residual_norm=history[-1],
            iterations=len(history) - 1,
            residual_history=history,
            asymptotic_ratios=ratios,
        )


def build_r_map(d, s, precision: PrecisionContext | None = None) -> MapSpec:
    ctx = precision or PrecisionContext()
    sol = solve_r(d, s, ctx)
    vals = sol.values
    return make_r_map(
        d.degrees if isinstance(d, DegreeVector) else d,
        s, (vals["S"], vals["T"], vals["z0"]), ctx,
    )


def asymptotic_regression(
    kind: str,
    d,
    s_grid,
    precision: PrecisionContext | None = None,
):
    """Solve along a decreasing s grid and tabulate ratio deviations.

    Returns a list of rows {"s", "ratios": {name: (value, limit, deviation)}}.
    Deviations are expected to shrink monotonically along the grid.
    """
    ctx = precision or PrecisionContext()
    solver = {KIND_Q: solve_q, KIND_R: solve_r}[kind]
    with ctx.workdps():
        grid = [mp.mpf(s) for s in s_grid]
    if any(b >= a for a, b in zip(grid, grid[1:])):
        raise ConstraintViolated("s grid must be strictly decreasing")
    rows = []
    for s in grid:
        sol = solver(d, s, ctx)
        with ctx.workdps():
            ratios = {
                name: (value, limit, abs(value - limit))
                for name, (value, limit) in sol.asymptotic_ratios.items()
            }
        rows.append({"s": s, "ratios": ratios})
    return rows
