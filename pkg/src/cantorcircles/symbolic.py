"""Julia components by inverse-curve continuation, itineraries, and turning.

The Julia set of every family here is a Cantor set of circles: each component
is a Jordan curve winding once around the origin, coded by the sequence of
radial bands its forward orbit visits.  Band i sits between the circles of
radius |a_{i-1}| and |a_i| (with conventions a_0 = infinity, a_n = 0); the map
restricted to band i covers the whole band annulus with degree d_i, so closed
curves pull back to closed curves with d_i times the vertex count.

``trace_component`` realizes a finite symbol word by repeated pullback,
innermost symbol first, so the forward orbit of the result reproduces the
word.  ``turning_constant`` estimates the bounded-turning constant
sup diam(smaller arc)/chord over vertex pairs, the quantity that
distinguishes quasicircle components from cusped ones.

The double-precision continuation kernel is JIT-compiled with numba when
available and falls back to pure Python otherwise.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import mpmath as mp
import numpy as np
from scipy.ndimage import maximum_filter1d, minimum_filter1d

from .certify import Disk, DiskComplement, canonical_traps
from .errors import (
    ContinuationBreakdown,
    DegenerateCurve,
    OrbitEscaped,
    OutOfBand,
    SeedNotFound,
    Undecidable,
)
from .families import (
    KIND_F,
    KIND_P,
    KIND_Q,
    KIND_R,
    MapSpec,
    double_forms,
    numpy_map,
    scalar_dual_map,
)

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a soft dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


OUTER_BAND_CAP = 1.44
CLOSURE_REL_TOL = 1e-8
DEFAULT_SAMPLES = 64
DEFAULT_PAIR_BUDGET = 2_000_000
TURNING_DIRECTIONS = 64

QUASICIRCLE = "Quasicircle"
NOT_QUASICIRCLE = "NotQuasicircle"


# --------------------------------------------------------------------------
# itinerary words
# --------------------------------------------------------------------------

def _primitive(period: tuple) -> tuple:
    n = len(period)
    for length in range(1, n + 1):
        if n % length == 0 and period == period[:length] * (n // length):
            return period[:length]
    return period


@dataclass(frozen=True)
class ItineraryWord:
    """Finite preperiod plus an optional primitive period (empty = finite word)."""

    preperiod: tuple = ()
    period: tuple = ()

    def __post_init__(self):
        sym = self.preperiod + self.period
        if any(int(s) != s or s < 1 for s in sym):
            raise ValueError("symbols must be integers >= 1")
        object.__setattr__(self, "period", _primitive(tuple(self.period)))
        object.__setattr__(self, "preperiod", tuple(self.preperiod))

    @property
    def eventually_periodic(self) -> bool:
        return bool(self.period)

    def prefix(self, length: int) -> tuple:
        out = list(self.preperiod)
        while self.period and len(out) < length:
            out.extend(self.period)
        return tuple(out[:length])

    def __str__(self):
        head = "".join(str(s) for s in self.preperiod)
        if self.period:
            return f"{head}({''.join(str(s) for s in self.period)})"
        return head


def parse_word(text: str) -> ItineraryWord:
    """Parse '11(33)' as preperiod 1,1 with repeating period 3,3."""
    text = text.strip()
    if "(" in text:
        head, rest = text.split("(", 1)
        if not rest.endswith(")"):
            raise ValueError(f"unbalanced parentheses in {text!r}")
        tail = rest[:-1]
    else:
        head, tail = text, ""
    if not all(c.isdigit() and c != "0" for c in head + tail):
        raise ValueError(f"symbols must be digits 1-9: {text!r}")
    return ItineraryWord(
        preperiod=tuple(int(c) for c in head),
        period=tuple(int(c) for c in tail),
    )


def shift(word: ItineraryWord) -> ItineraryWord:
    """One-sided shift: drop the leading symbol."""
    if word.preperiod:
        return ItineraryWord(word.preperiod[1:], word.period)
    if not word.period:
        raise ValueError("cannot shift the empty word")
    p = word.period
    return ItineraryWord((), p[1:] + p[:1])


def run_lengths(symbols, target: int):
    """Lengths of the maximal runs of `target` in a finite symbol sequence."""
    out = []
    count = 0
    for s in symbols:
        if s == target:
            count += 1
        elif count:
            out.append(count)
            count = 0
    if count:
        out.append(count)
    return out


def classify_itinerary(kind: str, n: int, word: ItineraryWord) -> str:
    """Quasicircle verdict for an eventually periodic itinerary.

    P (either parity of n): quasicircle iff the runs of symbol 1 stay bounded,
    i.e. iff the periodic tail is not all-ones.  Q: runs of symbol 1 and of
    symbol n must both stay bounded.  R: the blocks matching the alternating
    pattern 1n1n... / n1n1... must stay bounded, so only the two-cycle tails
    (1n) and (n1) fail.  The hyperbolic family f has no parabolic boundary,
    so every component is a quasicircle.
    """
    symbols = word.preperiod + word.period
    if any(s > n for s in symbols):
        raise ValueError(f"symbol out of range 1..{n}")
    if kind == KIND_F:
        return QUASICIRCLE
    if not word.eventually_periodic:
        raise Undecidable("itinerary has no periodic tail")
    cyc = word.period
    if kind == KIND_P:
        bad = all(s == 1 for s in cyc)
    elif kind == KIND_Q:
        bad = all(s == 1 for s in cyc) or all(s == n for s in cyc)
    elif kind == KIND_R:
        bad = cyc in ((1, n), (n, 1))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return NOT_QUASICIRCLE if bad else QUASICIRCLE


def classify_run_lengths(lengths) -> str:
    """Flag a non-periodic itinerary from its explicit run-length profile.

    Boundedness of an infinite sequence is undecidable from a finite window;
    this flags NotQuasicircle when the supplied profile grows strictly
    through the whole window (e.g. 1, 2, 3, ...), and Quasicircle otherwise.
    """
    lengths = list(lengths)
    if len(lengths) >= 3 and all(b > a for a, b in zip(lengths, lengths[1:])):
        return NOT_QUASICIRCLE
    return QUASICIRCLE


# --------------------------------------------------------------------------
# symbol bands
# --------------------------------------------------------------------------

def band_thresholds(spec: MapSpec):
    """Radial thresholds t_0 = inf > t_1 = |a_1| > ... > t_n = 0."""
    mods = [float(abs(v)) for v in spec.rings.values]
    return [np.inf] + mods + [0.0]


def _exclusion_regions(spec: MapSpec):
    """Trap regions whose interior carries no symbol (Fatou certified)."""
    regions = []
    thresholds = band_thresholds(spec)
    for name, (region, _, _) in canonical_traps(spec).items():
        if isinstance(region, DiskComplement):
            regions.append(region)
        elif isinstance(region, Disk):
            # clamp oversized inner disks (large-s picture parameters) so the
            # exclusion can never swallow genuine inner-band points
            cap = 0.25 * thresholds[-2]
            r = min(float(region.radius), cap) if thresholds[-2] else region.radius
            regions.append(Disk(center=region.center, radius=r))
    return regions


def symbol_of(spec: MapSpec, z) -> int:
    """Band index i with t_{i-1} > |z| > t_i; OutOfBand inside a trap."""
    z = complex(z)
    for region in _exclusion_regions(spec):
        if isinstance(region, DiskComplement):
            if abs(z - region.center) > region.radius:
                raise OutOfBand(f"{z} lies in the outer trap")
        elif abs(z - region.center) < region.radius:
            raise OutOfBand(f"{z} lies in an inner trap disk")
    t = band_thresholds(spec)
    r = abs(z)
    if r == 0:
        raise OutOfBand("origin carries no symbol")
    for i in range(1, len(t)):
        if t[i] < r <= t[i - 1] or (i == 1 and r > t[1]):
            return i
    raise OutOfBand(f"no band for {z}")


def symbols_of_array(spec: MapSpec, zs) -> np.ndarray:
    """Vectorized band indices; 0 marks out-of-band points."""
    zs = np.asarray(zs, dtype=complex)
    t = band_thresholds(spec)
    r = np.abs(zs)
    out = np.zeros(zs.shape, dtype=np.int32)
    for i in range(1, len(t)):
        mask = (r > t[i]) & (r <= t[i - 1]) if i > 1 else (r > t[1])
        out[mask] = i
    for region in _exclusion_regions(spec):
        d = np.abs(zs - complex(region.center))
        if isinstance(region, DiskComplement):
            out[d > region.radius] = 0
        else:
            out[d < region.radius] = 0
    return out


def itinerary_of_point(
    spec: MapSpec, z, length: int, on_escape: str = "raise"
) -> ItineraryWord:
    """Record symbol_of along the forward orbit for `length` steps.

    A trapped orbit raises OrbitEscaped (the point was not on the Julia set)
    unless on_escape='truncate', which returns the symbols seen so far.
    """
    fmap = numpy_map(spec)
    symbols = []
    cur = complex(z)
    for _ in range(length):
        try:
            symbols.append(symbol_of(spec, cur))
        except OutOfBand as exc:
            if on_escape == "truncate":
                return ItineraryWord(tuple(symbols), ())
            raise OrbitEscaped(str(exc)) from exc
        cur = complex(fmap(np.array([cur]))[0])
    return ItineraryWord(tuple(symbols), ())


# --------------------------------------------------------------------------
# pullback continuation
# --------------------------------------------------------------------------

@dataclass
class ComponentCurve:
    """Closed polyline approximation of one Julia component."""

    vertices: np.ndarray
    depth: int
    word: tuple
    closure_gap: float
    winding: int

    def diameter(self) -> float:
        v = self.vertices[:: max(1, len(self.vertices) // 4096)]
        return max(
            float(v.real.max() - v.real.min()), float(v.imag.max() - v.imag.min())
        )


def winding_number(vertices: np.ndarray) -> int:
    ang = np.angle(vertices)
    d = np.diff(np.concatenate([ang, ang[:1]]))
    d = (d + np.pi) % (2 * np.pi) - np.pi
    return int(round(float(d.sum()) / (2 * np.pi)))


@njit(cache=False)
def _kernel_eval(z, pre, e0, al, be, ms, es, dc, dp):
    v = pre + 0j
    dv = 0j
    if e0 != 0:
        dv = v * e0 * z ** (e0 - 1)
        v = v * z ** e0
    for i in range(len(ms)):
        m = ms[i]
        e = es[i]
        g = al[i] * z ** m + be[i]
        dg = al[i] * m * z ** (m - 1)
        gp = g ** e
        dgp = e * g ** (e - 1) * dg
        dv = dv * gp + v * dgp
        v = v * gp
    den = 0j
    dden = 0j
    for k in range(len(dc)):
        p = dp[k]
        den += dc[k] * z ** p
        if p != 0:
            dden += dc[k] * p * z ** (p - 1)
    dv = (dv * den - v * dden) / (den * den)
    return v / den, dv


@njit(cache=False)
def _kernel_continue(gamma, d, z0, N, substeps, tol, off, pre, e0, al, be, ms, es, dc, dp):
    """Follow f(z(t)) = gamma(d t mod 1) for t in [0, 1]; adaptive corrector.

    Returns the N vertices plus the closure gap, or gap = -1 on breakdown.
    """
    M = gamma.shape[0]
    out = np.empty(N, np.complex128)
    out[0] = z0
    z = z0
    for j in range(1, N + 1):
        ta = (j - 1) / N
        tb = j / N
        base = (tb - ta) / substeps
        step = base
        tau = ta
        x = (d * tau % 1.0) * M
        i0 = int(x) % M
        fr = x - int(x)
        tp = gamma[i0] * (1 - fr) + gamma[(i0 + 1) % M] * fr
        while tau < tb - 1e-15:
            tn = tau + step
            if tn > tb:
                tn = tb
            x = (d * tn % 1.0) * M
            i0 = int(x) % M
            fr = x - int(x)
            tt = gamma[i0] * (1 - fr) + gamma[(i0 + 1) % M] * fr
            v, dv = _kernel_eval(z, pre, e0, al, be, ms, es, dc, dp)
            zc = z + (tt - tp) / dv
            good = False
            for it in range(9):
                v, dv = _kernel_eval(zc, pre, e0, al, be, ms, es, dc, dp)
                r = v + off - tt
                if abs(r) < tol:
                    good = it <= 5
                    break
                zc = zc - r / dv
            if good:
                z = zc
                tau = tn
                tp = tt
                step = step * 1.4
                if step > base:
                    step = base
            else:
                step = step * 0.5
                if step < 1e-12:
                    return out, -1.0
        if j < N:
            out[j] = z
    return out, abs(z - out[0])


def _band_midpoint(spec: MapSpec, band: int) -> float:
    t = band_thresholds(spec)
    hi = t[band - 1] if np.isfinite(t[band - 1]) else OUTER_BAND_CAP
    lo = t[band]
    if lo == 0.0:
        lo = 0.12 * t[band - 1]
    return float(np.sqrt(lo * hi))


def seed_preimage(spec: MapSpec, w0: complex, band: int) -> complex:
    """One preimage of w0 inside the given band.

    Newton runs from a grid of radii and phases around the band's log-radial
    midpoint; among the in-band roots the one radially closest to the
    midpoint (ties by angle) is returned.  Any in-band choice yields the same
    closed pullback, so this is only a determinism convention.
    """
    fd = scalar_dual_map(spec)
    t = band_thresholds(spec)
    rmid = _band_midpoint(spec, band)
    d_total = spec.degrees.total_degree
    roots = []
    with np.errstate(all="ignore"):
        for factor in (1.0, 0.7, 1.4, 0.5, 2.0, 0.35):
            rr = rmid * factor
            for k in range(8 * d_total):
                z = rr * np.exp(2j * np.pi * (k + 0.3) / (8 * d_total))
                for _ in range(80):
                    v, dv = fd(z)
                    if not np.isfinite(dv) or abs(dv) < 1e-280:
                        break
                    step = (v - w0) / dv
                    z -= step
                    if abs(step) < 1e-13 * max(1.0, abs(z)):
                        break
                v, _ = fd(z)
                if np.isfinite(v) and abs(v - w0) < 1e-9 * max(1.0, abs(w0)):
                    hi = t[band - 1] if np.isfinite(t[band - 1]) else np.inf
                    if t[band] < abs(z) <= hi and all(
                        abs(z - r) > 1e-8 * max(abs(z), 1e-30) for r in roots
                    ):
                        roots.append(z)
            if roots:
                break
    if not roots:
        raise SeedNotFound(f"no preimage of {w0} found in band {band}")
    roots.sort(key=lambda r: (abs(np.log(abs(r) / rmid)), np.angle(r)))
    return roots[0]


def pull_back_curve(
    spec: MapSpec,
    curve: ComponentCurve,
    target_symbol: int,
    substeps: int = 4,
) -> ComponentCurve:
    """Lift a closed curve through the covering of band `target_symbol`.

    The output z(t) satisfies f(z(t)) = gamma(d t mod 1), is closed, covers
    the input with degree d = d_{target_symbol}, lies in the target band, and
    is normalized to winding number +1 about the origin.
    """
    if not 1 <= target_symbol <= spec.degrees.n:
        raise ValueError(f"symbol {target_symbol} out of range")
    gamma = np.ascontiguousarray(curve.vertices, dtype=complex)
    d = spec.degrees.degrees[target_symbol - 1]
    N = d * len(gamma)
    z0 = seed_preimage(spec, complex(gamma[0]), target_symbol)
    zform, _ = double_forms(spec)
    tol = 1e-13 * max(1.0, float(np.abs(gamma).max()))
    out, gap = _kernel_continue(
        gamma, d, complex(z0), N, substeps, tol,
        zform.off, zform.pre, zform.e0, zform.alpha, zform.beta,
        zform.m, zform.e, zform.den_c, zform.den_p,
    )
    if gap < 0:
        raise ContinuationBreakdown(
            f"corrector stalled pulling into band {target_symbol}"
        )
    wind = winding_number(out)
    if wind == -1:
        out = out[::-1].copy()
        wind = 1
    if wind != 1:
        raise ContinuationBreakdown(
            f"pullback wound {wind} times; target curve met the branched region"
        )
    result = ComponentCurve(
        vertices=out,
        depth=curve.depth + 1,
        word=(target_symbol,) + curve.word,
        closure_gap=float(gap),
        winding=wind,
    )
    if result.closure_gap > CLOSURE_REL_TOL * result.diameter():
        raise ContinuationBreakdown(
            f"pullback failed to close (gap {result.closure_gap:.2e})"
        )
    return result


def circle_curve(radius: float, samples: int, center: complex = 0j) -> ComponentCurve:
    t = np.linspace(0.0, 1.0, samples, endpoint=False)
    verts = center + radius * np.exp(2j * np.pi * t)
    return ComponentCurve(
        vertices=verts, depth=0, word=(), closure_gap=0.0, winding=1
    )


def trace_component(
    spec: MapSpec,
    word,
    base_radius: float | None = None,
    samples: int = DEFAULT_SAMPLES,
    verify_symbols: bool = True,
) -> ComponentCurve:
    """Approximate the Julia component with the given finite itinerary prefix.

    Starts from the circle |z| = base_radius and pulls back once per symbol,
    innermost symbol first, so the forward iterates of the result visit the
    bands spelled by `word`.
    """
    word = tuple(int(s) for s in word)
    if len(word) < 1:
        raise ValueError("word must have at least one symbol")
    if base_radius is None:
        t = band_thresholds(spec)
        base_radius = float(np.sqrt(t[1] * OUTER_BAND_CAP))
    cur = circle_curve(float(base_radius), samples)
    for sym in reversed(word):
        cur = pull_back_curve(spec, cur, sym)
    cur = ComponentCurve(
        vertices=cur.vertices,
        depth=len(word),
        word=word,
        closure_gap=cur.closure_gap,
        winding=cur.winding,
    )
    if verify_symbols:
        fmap = numpy_map(spec)
        n = len(cur.vertices)
        for idx in (0, n // 3, (2 * n) // 3):
            z = cur.vertices[idx]
            for k, expected in enumerate(word):
                got = symbol_of(spec, z)
                if got != expected:
                    raise ContinuationBreakdown(
                        f"vertex {idx} visits band {got} at step {k}, "
                        f"word wants {expected}"
                    )
                z = complex(fmap(np.array([z]))[0])
    return cur


# --------------------------------------------------------------------------
# turning
# --------------------------------------------------------------------------

def _sparse_range_tables(P: np.ndarray):
    K, n = P.shape
    tmax = [P]
    tmin = [P]
    level = 1
    while (1 << level) <= n:
        h = 1 << (level - 1)
        nl = n - (1 << level) + 1
        tmax.append(np.maximum(tmax[-1][:, :nl], tmax[-1][:, h : h + nl]))
        tmin.append(np.minimum(tmin[-1][:, :nl], tmin[-1][:, h : h + nl]))
        level += 1
    return tmax, tmin


def turning_constant(
    curve,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
    directions: int = TURNING_DIRECTIONS,
) -> float:
    """Max over sampled vertex pairs of diam(smaller arc) / chord.

    Exhaustive when the pair count fits the budget; otherwise the vertex set
    is decimated to ~sqrt(budget) points for the global pass (the stride-
    sampling stratum) and a near-diagonal ladder scans all tight pairs up to
    twice the stride, so cusp-straddling pairs are kept.  Arc diameters are
    measured as directional widths over `directions` angles (relative error
    below cos(pi/2K) ~ 0.04%).
    """
    verts = curve.vertices if isinstance(curve, ComponentCurve) else np.asarray(curve)
    verts = np.asarray(verts, dtype=complex)
    N = len(verts)
    if N < 64:
        raise DegenerateCurve("need at least 64 vertices")
    seg = np.abs(np.diff(np.concatenate([verts, verts[:1]])))
    if (seg == 0).any():
        raise DegenerateCurve("repeated adjacent vertices")
    dirs = np.exp(-1j * np.pi * np.arange(directions) / directions)
    sub = verts[:: max(1, N // 4096)]
    proj_all = np.real(sub[None, :] * dirs[:, None])
    global_diam = float((proj_all.max(axis=1) - proj_all.min(axis=1)).max())
    best = 0.0
    stride = 1 if N * N <= pair_budget else int(np.ceil(np.sqrt(N * N / pair_budget)))
    v = verts[::stride]
    npts = len(v)
    p2 = np.real(np.concatenate([v, v])[None, :] * dirs[:, None])
    tmax, tmin = _sparse_range_tables(p2)
    lg = np.zeros(2 * npts + 1, dtype=int)
    for i in range(2, 2 * npts + 1):
        lg[i] = lg[i // 2] + 1
    idx = np.arange(npts)
    for off in range(1, npts):
        lvl = int(lg[off + 1])
        h = 1 << lvl
        fwd = (
            np.maximum(tmax[lvl][:, idx], tmax[lvl][:, idx + off - h + 1])
            - np.minimum(tmin[lvl][:, idx], tmin[lvl][:, idx + off - h + 1])
        ).max(axis=0)
        back_len = npts - off + 1
        lvl2 = int(lg[back_len])
        h2 = 1 << lvl2
        bwd = (
            np.maximum(tmax[lvl2][:, idx + off], tmax[lvl2][:, idx + npts - h2 + 1])
            - np.minimum(tmin[lvl2][:, idx + off], tmin[lvl2][:, idx + npts - h2 + 1])
        ).max(axis=0)
        chord = np.abs(v - np.roll(v, -off))
        smaller = np.maximum(np.minimum(fwd, bwd), chord)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(chord > 0, smaller / chord, 0.0)
        best = max(best, float(ratio.max()))
    if stride > 1:
        ext = np.concatenate([verts, verts[: 4 * stride + 2]])
        doubled = np.concatenate([verts, verts])
        deltas = []
        delta = 2
        while delta < 2 * stride:
            deltas.append(delta)
            delta = int(np.ceil(delta * 1.5))
        centers_base = np.arange(N)
        for delta in deltas:
            window = 2 * delta + 1
            centers = centers_base + delta
            dia = np.zeros(N)
            for k0 in range(0, directions, 8):
                pw = np.real(ext[None, :] * dirs[k0 : k0 + 8, None])
                wmax = maximum_filter1d(pw, size=window, axis=1, mode="nearest")
                wmin = minimum_filter1d(pw, size=window, axis=1, mode="nearest")
                np.maximum(dia, (wmax[:, centers] - wmin[:, centers]).max(axis=0), out=dia)
            chord = np.abs(verts - doubled[2 * delta : 2 * delta + N])
            smaller = np.maximum(np.minimum(dia, global_diam), chord)
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(chord > 0, smaller / chord, 0.0)
            best = max(best, float(ratio.max()))
    return best


# --------------------------------------------------------------------------
# geometry helpers and serialization
# --------------------------------------------------------------------------

def polyline_hausdorff(a: np.ndarray, b: np.ndarray, samples: int = 2000) -> float:
    """Sampled one-sided Hausdorff distance from points of `a` to polyline `b`."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    a = a[:: max(1, len(a) // samples)]
    b0 = b
    b1 = np.roll(b, -1)
    seg = b1 - b0
    seg_len2 = np.abs(seg) ** 2
    seg_len2[seg_len2 == 0] = 1e-300
    best = np.full(len(a), np.inf)
    # chunk over curve a to bound memory
    chunk = max(1, 10_000_000 // max(len(b0), 1))
    for i0 in range(0, len(a), chunk):
        pts = a[i0 : i0 + chunk]
        w = pts[:, None] - b0[None, :]
        t = np.clip((w * np.conj(seg[None, :])).real / seg_len2[None, :], 0.0, 1.0)
        d = np.abs(w - t * seg[None, :]).min(axis=1)
        best[i0 : i0 + len(pts)] = d
    return float(best.max())


def curve_to_csv(curve: ComponentCurve) -> str:
    """CSV rows t,re,im; floats printed with exact round-trip precision."""
    buf = io.StringIO()
    buf.write("t,re,im\n")
    n = len(curve.vertices)
    for i, z in enumerate(curve.vertices):
        buf.write(f"{i / n!r},{z.real!r},{z.imag!r}\n")
    return buf.getvalue()


def curve_from_csv(text: str) -> np.ndarray:
    rows = text.strip().splitlines()[1:]
    out = np.empty(len(rows), dtype=complex)
    for i, row in enumerate(rows):
        _, re_s, im_s = row.split(",")
        out[i] = complex(float(re_s), float(im_s))
    return out


def curve_envelope(curve: ComponentCurve, turning: float | None = None) -> dict:
    return {
        "word": list(curve.word),
        "depth": curve.depth,
        "closure_gap": curve.closure_gap,
        "winding": curve.winding,
        "vertices": len(curve.vertices),
        "turning": turning,
    }
