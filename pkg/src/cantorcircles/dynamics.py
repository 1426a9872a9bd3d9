"""Orbit classification into Fatou basins and raster rendering.

A pixel is classified by iterating the map until the orbit enters one of the
family's canonical trap regions (forward-invariant up to the parabolic point,
see ``certify``).  Entering the outer region certifies the grand orbit of the
unbounded parabolic component; the inner disk certifies the second parabolic
basin (or the attracting component at the origin for odd-length P).  Orbits
that never enter a trap within the budget stay Undecided, which is an honest
output class: parabolic convergence is polynomially slow, so near-boundary
bands decide late or not at all.

Everything runs in hardware doubles, except families Q and R on viewports
smaller than 10 s^nu, where the interesting structure lives at scales around
1e-6 and evaluation switches to 30-digit arithmetic.

Two float-specific safeguards keep labels stable: trap membership uses a
relative guard of 1e-9 so round-off drift of an exactly-parabolic orbit can
never cross a trap boundary, and the double-precision constants are adjusted
by one ulp so the parabolic point is an exact fixed point in float arithmetic.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache

import mpmath as mp
import numpy as np

from .certify import Disk, DiskComplement, canonical_traps
from .families import (
    KIND_F,
    KIND_P,
    KIND_Q,
    KIND_R,
    MapSpec,
    RECIPROCAL_CHART_RADIUS,
    _form_numpy_value,
    double_forms,
    factored_form,
    spec_from_json,
    spec_to_json,
)

TRAP_GUARD = 1e-9
ESCAPE_SENTINEL = 1e300
EXTENDED_DIGITS = 30


class BasinTag(IntEnum):
    UNDECIDED = 0
    PARABOLIC_OUTER = 1
    PARABOLIC_INNER = 2
    ATTRACTING_ORIGIN = 3


# palette chosen for parity with grayscale basin pictures
PALETTE = {
    BasinTag.UNDECIDED: (0, 0, 0),
    BasinTag.PARABOLIC_OUTER: (200, 200, 200),
    BasinTag.PARABOLIC_INNER: (255, 255, 255),
    BasinTag.ATTRACTING_ORIGIN: (255, 255, 255),
}

_TRAP_TAGS = {
    "outer": BasinTag.PARABOLIC_OUTER,
    "inner": BasinTag.PARABOLIC_INNER,
    "origin": BasinTag.ATTRACTING_ORIGIN,
    "unit": BasinTag.PARABOLIC_INNER,
}


@dataclass(frozen=True)
class BasinLabel:
    tag: BasinTag
    steps: int


@dataclass(frozen=True)
class Viewport:
    center: complex
    width: float
    height: float

    @staticmethod
    def from_bounds(xmin, xmax, ymin, ymax) -> "Viewport":
        return Viewport(
            center=complex((xmin + xmax) / 2, (ymin + ymax) / 2),
            width=float(xmax - xmin),
            height=float(ymax - ymin),
        )


@dataclass
class LabelGrid:
    viewport: Viewport
    px_w: int
    px_h: int
    tags: np.ndarray   # uint8, row-major, origin top-left
    steps: np.ndarray  # int32

    def label_at(self, row: int, col: int) -> BasinLabel:
        idx = row * self.px_w + col
        return BasinLabel(BasinTag(int(self.tags[idx])), int(self.steps[idx]))

    def fraction(self, tag: BasinTag) -> float:
        return float((self.tags == int(tag)).mean())

    def to_ppm_bytes(self) -> bytes:
        header = f"P6\n{self.px_w} {self.px_h}\n255\n".encode()
        lut = np.zeros((256, 3), dtype=np.uint8)
        for tag, rgb in PALETTE.items():
            lut[int(tag)] = rgb
        return header + lut[self.tags].tobytes()


def _trap_list(spec: MapSpec):
    """(tag, region) pairs for stepwise membership tests."""
    traps = canonical_traps(spec)
    return [(_TRAP_TAGS[name], region) for name, (region, _, _) in traps.items()]


def _region_pred_numpy(region):
    if isinstance(region, Disk):
        c, r = complex(region.center), float(region.radius) * (1 - TRAP_GUARD)
        return lambda z: np.abs(z - c) < r
    if isinstance(region, DiskComplement):
        c, r = complex(region.center), float(region.radius) * (1 + TRAP_GUARD)
        return lambda z: ~np.isfinite(z) | (np.abs(z - c) > r)
    raise TypeError(f"unsupported trap region {region!r}")


@lru_cache(maxsize=None)
def _pinned_forms(spec: MapSpec):
    """Float64 forms with the offset nudged so the parabolic point is exact.

    For P and Q the fixed point 1 satisfies f(1) == 1 exactly in float
    arithmetic; for R the image R(1) == float(z0) exactly.
    """
    zform, rform = double_forms(spec)
    if spec.kind in (KIND_P, KIND_Q, KIND_R):
        bare = dataclasses.replace(zform, off=0j)
        u = complex(_form_numpy_value(bare, np.array([1.0 + 0j]))[0])
        target = complex(spec.coeff("z0")) if spec.kind == KIND_R else 1.0 + 0j
        off = target - u
        zform = dataclasses.replace(zform, off=off)
        rform = dataclasses.replace(rform, off=off)
    return zform, rform


def _pinned_numpy_map(spec: MapSpec):
    zform, rform = _pinned_forms(spec)

    def f(z: np.ndarray) -> np.ndarray:
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


def classify_array(spec: MapSpec, zs, budget: int):
    """Vectorized classification; returns (tags uint8, steps int32).

    Undecided entries keep steps == budget.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    preds = [(int(tag), _region_pred_numpy(region)) for tag, region in _trap_list(spec)]
    fmap = _pinned_numpy_map(spec)
    z = np.asarray(zs, dtype=complex).ravel().copy()
    n = z.size
    tags = np.zeros(n, dtype=np.uint8)
    steps = np.full(n, budget, dtype=np.int32)
    active = np.arange(n)
    for k in range(budget + 1):
        za = z[active]
        for tag, pred in preds:
            hit = pred(za)
            if hit.any():
                idx = active[hit]
                tags[idx] = tag
                steps[idx] = k
                keep = ~hit
                active = active[keep]
                za = za[keep]
        if k == budget or active.size == 0:
            break
        w = fmap(za)
        bad = ~np.isfinite(w)
        if bad.any():
            w[bad] = ESCAPE_SENTINEL
        z[active] = w
    return tags, steps


def _mp_value(form, z):
    out = mp.mpc(form.pre)
    if form.e0:
        out = out * z ** form.e0
    for a, b, m, e in zip(form.alpha, form.beta, form.m, form.e):
        out = out * (complex(a) * z ** int(m) + complex(b)) ** int(e)
    den = mp.mpc(0)
    for c, p in zip(form.den_c, form.den_p):
        den = den + complex(c) * z ** int(p)
    return out / den + complex(form.off)


def _classify_array_mp(spec: MapSpec, zs, budget: int, digits: int = EXTENDED_DIGITS):
    traps = _trap_list(spec)
    zform, rform = double_forms(spec)
    zs = np.asarray(zs, dtype=complex).ravel()
    tags = np.zeros(zs.size, dtype=np.uint8)
    steps = np.full(zs.size, budget, dtype=np.int32)
    with mp.workdps(digits):
        regions = []
        for tag, region in traps:
            c = mp.mpc(region.center)
            if isinstance(region, Disk):
                r = mp.mpf(region.radius) * (1 - TRAP_GUARD)
                regions.append((int(tag), lambda z, c=c, r=r: abs(z - c) < r))
            else:
                r = mp.mpf(region.radius) * (1 + TRAP_GUARD)
                regions.append((int(tag), lambda z, c=c, r=r: abs(z - c) > r))
        for i, z0 in enumerate(zs):
            z = mp.mpc(z0)
            for k in range(budget + 1):
                hit = False
                for tag, pred in regions:
                    if pred(z):
                        tags[i] = tag
                        steps[i] = k
                        hit = True
                        break
                if hit or k == budget:
                    break
                try:
                    if abs(z) > RECIPROCAL_CHART_RADIUS:
                        z = _mp_value(rform, 1 / z)
                    else:
                        z = _mp_value(zform, z)
                except ZeroDivisionError:
                    z = mp.mpc(ESCAPE_SENTINEL)
    return tags, steps


def classify_point(spec: MapSpec, z, budget: int) -> BasinLabel:
    """Classify a single starting point; pure and deterministic."""
    tags, steps = classify_array(spec, np.array([complex(z)]), budget)
    return BasinLabel(BasinTag(int(tags[0])), int(steps[0]))


def _needs_extended(spec: MapSpec, viewport: Viewport) -> bool:
    if spec.kind not in (KIND_Q, KIND_R):
        return False
    with spec.precision.workdps():
        s_nu = spec.rings.s ** spec.degrees.nu_value(spec.precision)
        return min(viewport.width, viewport.height) < 10 * float(s_nu)


def pixel_grid(viewport: Viewport, px_w: int, px_h: int) -> np.ndarray:
    """Pixel-center sample points, row-major with the origin at top-left."""
    xs = (
        viewport.center.real
        - viewport.width / 2
        + (np.arange(px_w) + 0.5) * (viewport.width / px_w)
    )
    ys = (
        viewport.center.imag
        + viewport.height / 2
        - (np.arange(px_h) + 0.5) * (viewport.height / px_h)
    )
    return (xs[None, :] + 1j * ys[:, None]).ravel()


def _render_rows(args):
    doc, xmin, xmax, ymin, ymax, px_w, px_h, row0, row1, budget, extended = args
    spec = spec_from_json(doc)
    vp = Viewport.from_bounds(xmin, xmax, ymin, ymax)
    zs = pixel_grid(vp, px_w, px_h).reshape(px_h, px_w)[row0:row1].ravel()
    if extended:
        return _classify_array_mp(spec, zs, budget)
    return classify_array(spec, zs, budget)


def render(
    spec: MapSpec,
    viewport: Viewport,
    resolution,
    budget: int,
    workers: int = 1,
) -> LabelGrid:
    """Per-pixel classification over a viewport; byte-deterministic.

    The grid is partitioned into row blocks; results do not depend on the
    worker count because every pixel is classified independently.
    """
    px_w, px_h = (resolution, resolution) if isinstance(resolution, int) else resolution
    if px_w < 16 or px_h < 16:
        raise ValueError("resolution must be at least 16x16")
    extended = _needs_extended(spec, viewport)
    if workers <= 1:
        zs = pixel_grid(viewport, px_w, px_h)
        if extended:
            tags, steps = _classify_array_mp(spec, zs, budget)
        else:
            tags, steps = classify_array(spec, zs, budget)
        return LabelGrid(viewport, px_w, px_h, tags, steps)
    doc = spec_to_json(spec)
    xmin = viewport.center.real - viewport.width / 2
    xmax = viewport.center.real + viewport.width / 2
    ymin = viewport.center.imag - viewport.height / 2
    ymax = viewport.center.imag + viewport.height / 2
    block = max(1, px_h // (workers * 4))
    jobs = [
        (doc, xmin, xmax, ymin, ymax, px_w, px_h, r0, min(r0 + block, px_h), budget, extended)
        for r0 in range(0, px_h, block)
    ]
    tags = np.empty(px_w * px_h, dtype=np.uint8)
    steps = np.empty(px_w * px_h, dtype=np.int32)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for job, (t, s) in zip(jobs, pool.map(_render_rows, jobs)):
            r0, r1 = job[7], job[8]
            tags[r0 * px_w : r1 * px_w] = t
            steps[r0 * px_w : r1 * px_w] = s
    return LabelGrid(viewport, px_w, px_h, tags, steps)


def write_ppm(grid: LabelGrid, path: str):
    with open(path, "wb") as fh:
        fh.write(grid.to_ppm_bytes())
