"""Precision-parameterized arithmetic, forward-mode duals, and Newton solvers.

Everything here operates on mpmath scalars inside a caller-selected working
precision.  Dual numbers carry a value together with one directional
derivative, so a single evaluation pass yields an exact derivative at working
precision (no finite differencing).  The two Newton drivers below are the only
root-finding routines used by the rest of the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import mpmath as mp

from .errors import DerivativeUnderflow, NonConvergence, SingularJacobian

DEFAULT_SOLVER_DIGITS = 50
MIN_DIGITS = 15
RECIPROCAL_CHART_RADIUS = 1e8


@dataclass(frozen=True)
class PrecisionContext:
    """Decimal working precision for all mpmath arithmetic in a computation."""

    significant_digits: int = DEFAULT_SOLVER_DIGITS

    def __post_init__(self):
        if self.significant_digits < MIN_DIGITS:
            raise ValueError(
                f"precision must be at least {MIN_DIGITS} digits, "
                f"got {self.significant_digits}"
            )

    def workdps(self):
        return mp.workdps(self.significant_digits)

    def mpf(self, x) -> mp.mpf:
        with self.workdps():
            return mp.mpf(x)

    def mpc(self, re, im=0) -> mp.mpc:
        with self.workdps():
            return mp.mpc(re, im)

    def eps(self) -> mp.mpf:
        with self.workdps():
            return mp.mpf(10) ** (-self.significant_digits)


class _AtInfinity:
    """Singleton marker for the point at infinity on the Riemann sphere."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _AtInfinity()


@dataclass(frozen=True)
class Pole:
    """Evaluation result at a pole: the value is INFINITY with a local order."""

    order: int

    @property
    def value(self):
        return INFINITY


@dataclass(frozen=True)
class Dual:
    """Value plus directional derivative; arithmetic follows the chain rule.

    Works uniformly over mpf (real systems) and mpc (holomorphic maps).
    """

    value: object
    derivative: object

    @staticmethod
    def variable(z):
        return Dual(z, mp.mpf(1) if isinstance(z, mp.mpf) else mp.mpc(1))

    @staticmethod
    def constant(c):
        return Dual(c, mp.mpf(0) if isinstance(c, mp.mpf) else 0)

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.value + other.value, self.derivative + other.derivative)
        return Dual(self.value + other, self.derivative)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.value, -self.derivative)

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.value - other.value, self.derivative - other.derivative)
        return Dual(self.value - other, self.derivative)

    def __rsub__(self, other):
        return Dual(other - self.value, -self.derivative)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(
                self.value * other.value,
                self.derivative * other.value + self.value * other.derivative,
            )
        return Dual(self.value * other, self.derivative * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            v = self.value / other.value
            return Dual(v, (self.derivative - v * other.derivative) / other.value)
        return Dual(self.value / other, self.derivative / other)

    def __rtruediv__(self, other):
        v = other / self.value
        return Dual(v, -v * self.derivative / self.value)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("dual powers are restricted to integer exponents")
        if k == 0:
            return Dual(self.value * 0 + 1, self.value * 0)
        if k == 1:
            return self
        v = self.value ** k
        return Dual(v, k * self.value ** (k - 1) * self.derivative)


def newton_root(
    f: Callable[[Dual], Dual],
    seed,
    tol,
    max_iter: int = 60,
    precision: PrecisionContext | None = None,
    trace: list | None = None,
):
    """Scalar Newton iteration z <- z - f(z)/f'(z) with dual-number derivative.

    Returns z with |f(z)| < tol.  Raises DerivativeUnderflow when |f'| falls
    below tol times the precision floor, NonConvergence when max_iter steps do
    not reach tolerance.  Appends |f(z_k)| per step to `trace` when given.
    """
    ctx = precision or PrecisionContext()
    with ctx.workdps():
        z = mp.mpc(seed)
        tol = mp.mpf(tol)
        floor = tol * ctx.eps()
        for _ in range(max_iter):
            r = f(Dual.variable(z))
            res = abs(r.value)
            if trace is not None:
                trace.append(res)
            if res < tol:
                return z
            if abs(r.derivative) <= floor:
                raise DerivativeUnderflow(
                    f"|f'({mp.nstr(z, 8)})| = {mp.nstr(abs(r.derivative), 3)}"
                )
            z = z - r.value / r.derivative
        r = f(Dual.variable(z))
        if abs(r.value) < tol:
            return z
        raise NonConvergence(
            f"newton_root: residual {mp.nstr(abs(r.value), 3)} after {max_iter} steps"
        )


def _residual_and_jacobian(F, xs):
    m = len(xs)
    residual = None
    jac = mp.matrix(m, m)
    for j in range(m):
        args = [
            Dual(x, mp.mpf(1) if i == j else mp.mpf(0)) for i, x in enumerate(xs)
        ]
        out = F(args)
        if residual is None:
            residual = [o.value for o in out]
        for i, o in enumerate(out):
            jac[i, j] = o.derivative
    return residual, jac


def newton_system(
    F: Callable[[Sequence[Dual]], Sequence[Dual]],
    seed: Sequence,
    tol,
    max_iter: int = 60,
    precision: PrecisionContext | None = None,
    trace: list | None = None,
):
    """Multidimensional Newton iteration X <- X - Jac(X)^{-1} F(X).

    The Jacobian is assembled by one dual evaluation pass per variable.
    Returns the solution list once the residual infinity norm drops below
    tol.  Raises SingularJacobian / NonConvergence accordingly.
    """
    ctx = precision or PrecisionContext()
    with ctx.workdps():
        xs = [mp.mpf(v) for v in seed]
        tol = mp.mpf(tol)
        for _ in range(max_iter):
            residual, jac = _residual_and_jacobian(F, xs)
            norm = max(abs(r) for r in residual)
            if trace is not None:
                trace.append(norm)
            if norm < tol:
                return xs
            try:
                delta = mp.lu_solve(jac, mp.matrix(residual))
            except (ZeroDivisionError, ValueError) as exc:
                raise SingularJacobian(str(exc)) from exc
            xs = [x - delta[i] for i, x in enumerate(xs)]
        residual, _ = _residual_and_jacobian(F, xs)
        norm = max(abs(r) for r in residual)
        if trace is not None:
            trace.append(norm)
        if norm < tol:
            return xs
        raise NonConvergence(
            f"newton_system: residual {mp.nstr(norm, 3)} after {max_iter} steps"
        )
