"""Pulse-sequence execution and parameter fitting.

Runs erase/pump/dark/probe sequences against the diffusion solver,
produces decay series of the dot-average polarization, and provides the
two fits used against measured data: exponential rise times and the
diffusion coefficient (grid search in log10 D with golden-section
refinement, an affine nuisance pair absorbed by linear least squares).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import curve_fit

from .domain import (DecaySeries, DotGeometry, PulseSequence, SegmentKind,
                     YKind)
from .errors import FitDiverged, InvariantViolation, NotIdentifiable
from .solver import (BoundaryMode, Grid, PolarizationField, SolverConfig,
                     _iterate_dark, dot_average, evolve, simulate_dark,
                     simulate_pump)
from .units import diffusion_cm2s_to_nm2s

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_LOG_D_TOL = 1e-3  # resolves D to ~0.2%, far inside fit tolerances


@dataclass(frozen=True)
class RiseFit:
    """Least-squares parameters of y = offset + amplitude*(1 - exp(-t/tau))."""

    amplitude: float
    tau: float
    offset: float
    residual_rms: float

    def __post_init__(self):
        if not self.tau > 0:
            raise InvariantViolation("NonPositiveTau", f"tau = {self.tau}")


@dataclass(frozen=True)
class DecayFit:
    """Least-squares parameters of y = amplitude * exp(-t/tau)."""

    amplitude: float
    tau: float
    residual_rms: float

    def __post_init__(self):
        if not self.tau > 0:
            raise InvariantViolation("NonPositiveTau", f"tau = {self.tau}")


@dataclass(frozen=True)
class DiffusionFit:
    """Best diffusion coefficient (cm^2/s) with the affine nuisance pair
    y ~ offset + scale * P(t; D) and the candidate grid examined."""

    d_qd: float
    scale: float
    offset: float
    sse: float
    d_grid: tuple[float, ...]
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.d_qd > 0:
            raise InvariantViolation("NonPositiveDiffusion",
                                     f"d_qd = {self.d_qd}")


def run_sequence(seq: PulseSequence, cfg: SolverConfig,
                 geometry: DotGeometry, grid: Grid,
                 dark_sample_every: float | None = None) -> DecaySeries:
    """Execute a pulse sequence from an unpolarized start.

    Erase resets the field to zero, pump holds the dot at S = 1 while
    diffusion runs, dark evolves freely (densely sampled when
    ``dark_sample_every`` is given), probe records (time, dot average)
    without perturbing the field and then lets it evolve for the probe
    duration. Times are the cumulative sequence clock. Coincident
    duplicate samples (a probe at a dark sampling instant) are dropped.
    """
    grid.require_dot_inside(geometry)
    field = PolarizationField(grid, np.zeros((grid.nr, grid.nz)), 0.0)
    ts: list[float] = []
    ys: list[float] = []

    def record(f: PolarizationField) -> None:
        if ts and f.time == ts[-1]:
            return
        ts.append(f.time)
        ys.append(dot_average(f, geometry))

    for seg in seq.segments:
        if seg.kind is SegmentKind.ERASE:
            field = PolarizationField(grid, np.zeros((grid.nr, grid.nz)),
                                      field.time + seg.duration)
        elif seg.kind is SegmentKind.PUMP:
            v = field.values.copy()
            v[grid.dot_mask(geometry)] = 1.0
            field = PolarizationField(grid, v, field.time)
            field = evolve(field, cfg, seg.duration, clamp=geometry)
        elif seg.kind is SegmentKind.DARK:
            if dark_sample_every is not None:
                for _, f in _iterate_dark(field, cfg, seg.duration,
                                          dark_sample_every, geometry):
                    record(f)
                    field = f
            else:
                field = evolve(field, cfg, seg.duration)
        elif seg.kind is SegmentKind.PROBE:
            record(field)
            field = evolve(field, cfg, seg.duration)
    if not ts:
        raise InvariantViolation(
            "NoSamples", "sequence has no probe and no sampled dark segment")
    return DecaySeries(t=np.array(ts), y=np.array(ys),
                       y_kind=YKind.DOT_AVERAGE,
                       metadata={"n_segments": len(seq.segments)})


def simulate_decay_curve(d_cm2s: float, t_pump: float, t_max: float,
                         sample_every: float, geometry: DotGeometry,
                         grid: Grid, *, dt: float | None = None,
                         t1_uniform: float | None = None,
                         boundary: BoundaryMode = BoundaryMode.DIRICHLET_ZERO
                         ) -> DecaySeries:
    """Pump for ``t_pump``, then free decay sampled every ``sample_every``
    up to ``t_max``; the series is normalized to start at 1."""
    cfg = SolverConfig(d_qd=diffusion_cm2s_to_nm2s(d_cm2s),
                       t1_uniform=t1_uniform, dt=dt, boundary=boundary)
    field = simulate_pump(geometry, cfg, t_pump, grid)
    series = simulate_dark(field, cfg, t_max, sample_every, geometry)
    y = series.y if series.y[0] == 0 else series.y / series.y[0]
    return DecaySeries(t=series.t, y=y, y_kind=YKind.DOT_AVERAGE,
                       metadata={"d_cm2s": d_cm2s, "t_pump_s": t_pump})


def time_to_level(series: DecaySeries, level: float) -> float:
    """First time the series crosses down to ``level``, by linear
    interpolation between samples."""
    t, y = series.t, series.y
    if y[0] <= level:
        return float(t[0])
    below = np.nonzero(y <= level)[0]
    if below.size == 0:
        raise InvariantViolation(
            "LevelNotReached",
            f"series stays above {level} (min {y.min():.4g})")
    k = int(below[0])
    frac = (y[k - 1] - level) / (y[k - 1] - y[k])
    return float(t[k - 1] + frac * (t[k] - t[k - 1]))


def fit_exponential_rise(series: DecaySeries) -> RiseFit:
    """Fit y = offset + amplitude*(1 - exp(-t/tau)) by least squares."""
    t, y = series.t, series.y
    if len(t) < 4:
        raise InvariantViolation("TooFewPoints",
                                 f"need >= 4 points, got {len(t)}")
    if np.ptp(y) == 0:
        raise NotIdentifiable("constant series has no rise time")

    def model(t, offset, amplitude, tau):
        return offset + amplitude * (1.0 - np.exp(-t / tau))

    span = float(t[-1] - t[0])
    p0 = (float(y[0]), float(y[-1] - y[0]), max(span / 3.0, 1e-6))
    try:
        popt, _ = curve_fit(model, t, y, p0=p0,
                            bounds=([-np.inf, -np.inf, 1e-12],
                                    [np.inf, np.inf, np.inf]),
                            maxfev=20000)
    except RuntimeError as exc:
        raise FitDiverged(f"rise fit did not converge: {exc}") from exc
    res = y - model(t, *popt)
    return RiseFit(amplitude=float(popt[1]), tau=float(popt[2]),
                   offset=float(popt[0]),
                   residual_rms=float(np.sqrt(np.mean(res ** 2))))


def fit_exponential_decay(series: DecaySeries) -> DecayFit:
    """Fit y = amplitude * exp(-t/tau) (no offset) by least squares."""
    t, y = series.t, series.y
    if len(t) < 3:
        raise InvariantViolation("TooFewPoints",
                                 f"need >= 3 points, got {len(t)}")
    if np.ptp(y) == 0:
        raise NotIdentifiable("constant series has no decay time")

    def model(t, amplitude, tau):
        return amplitude * np.exp(-t / tau)

    span = float(t[-1] - t[0])
    p0 = (float(y[0]), max(span / 3.0, 1e-6))
    try:
        popt, _ = curve_fit(model, t, y, p0=p0,
                            bounds=([-np.inf, 1e-12], [np.inf, np.inf]),
                            maxfev=20000)
    except RuntimeError as exc:
        raise FitDiverged(f"decay fit did not converge: {exc}") from exc
    res = y - model(t, *popt)
    return DecayFit(amplitude=float(popt[0]), tau=float(popt[1]),
                    residual_rms=float(np.sqrt(np.mean(res ** 2))))


@lru_cache(maxsize=512)
def _decay_samples(d_cm2s: float, t_pump: float, t_points: tuple[float, ...],
                   geometry: DotGeometry, grid: Grid, dt: float | None,
                   boundary: BoundaryMode) -> np.ndarray:
    """Normalized dot-average decay P(t; D) sampled exactly at the given
    (possibly irregular) times since the end of the pump."""
    if t_points[0] < 0:
        raise InvariantViolation("NegativeTime", f"t[0] = {t_points[0]}")
    cfg = SolverConfig(d_qd=diffusion_cm2s_to_nm2s(d_cm2s), dt=dt,
                       boundary=boundary)
    field = simulate_pump(geometry, cfg, t_pump, grid)
    p0 = dot_average(field, geometry)
    out = np.empty(len(t_points))
    t_prev = 0.0
    for i, t in enumerate(t_points):
        field = evolve(field, cfg, t - t_prev)
        out[i] = dot_average(field, geometry)
        t_prev = t
    if p0 != 0:
        out /= p0
    out.setflags(write=False)
    return out


def _affine_lsq(p: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Best (scale, offset) for y ~ offset + scale*p, plus the SSE."""
    a = np.column_stack([p, np.ones_like(p)])
    coef, *_ = np.linalg.lstsq(a, y, rcond=None)
    res = y - a @ coef
    return float(coef[0]), float(coef[1]), float(res @ res)


def fit_diffusion_coefficient(measured: DecaySeries, t_pump: float,
                              geometry: DotGeometry, grid: Grid,
                              d_bounds: tuple[float, float], *,
                              dt: float | None = None,
                              boundary: BoundaryMode = BoundaryMode.DIRICHLET_ZERO
                              ) -> DiffusionFit:
    """Fit the diffusion coefficient to a measured decay series.

    Scans log10 D on a coarse grid (>= 8 candidates per decade), solving
    scale and offset by linear least squares at each candidate, then
    refines around the best candidate by golden-section search. A flat
    objective raises NotIdentifiable; a minimum pinned at a search bound
    is reported via the ``BoundaryMinimum`` warning.
    """
    t, y = measured.t, measured.y
    if len(t) < 5:
        raise InvariantViolation("TooFewPoints",
                                 f"need >= 5 points, got {len(t)}")
    d_lo, d_hi = d_bounds
    if not (0 < d_lo < d_hi):
        raise InvariantViolation("BadBounds", f"d_bounds = {d_bounds}")
    decades = math.log10(d_hi / d_lo)
    if decades <= 0:
        raise InvariantViolation("BadBounds",
                                 "d_bounds must span a positive range")
    t_key = tuple(float(x) for x in t)

    def objective(log_d: float) -> float:
        p = _decay_samples(10.0 ** log_d, t_pump, t_key, geometry, grid, dt,
                           boundary)
        return _affine_lsq(p, y)[2]

    logs = np.linspace(math.log10(d_lo), math.log10(d_hi),
                       int(np.ceil(8 * decades)) + 1)
    sses = np.array([objective(l) for l in logs])
    # flat objective: no candidate is meaningfully better, either in
    # relative terms or because every candidate fits to round-off
    perfect = (1e-10 * max(float(np.abs(y).max()), 1.0)) ** 2 * y.size
    if (sses.max() <= perfect
            or sses.max() - sses.min() < 1e-3 * max(sses.max(), 1e-300)):
        raise NotIdentifiable(
            "objective is flat across the candidate grid; the data do not "
            "constrain the diffusion coefficient")
    best = int(np.argmin(sses))

    # golden-section refinement between the neighbors of the best candidate
    a = logs[max(best - 1, 0)]
    b = logs[min(best + 1, len(logs) - 1)]
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = objective(c), objective(d)
    while b - a > _LOG_D_TOL:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = objective(d)
    log_best = c if fc < fd else d
    log_best = min(max(log_best, math.log10(d_lo)), math.log10(d_hi))
    p_best = _decay_samples(10.0 ** log_best, t_pump, t_key, geometry, grid,
                            dt, boundary)
    scale, offset, sse = _affine_lsq(p_best, y)

    warnings: tuple[str, ...] = ()
    edge = _LOG_D_TOL * 2
    if (log_best - math.log10(d_lo) < edge
            or math.log10(d_hi) - log_best < edge):
        warnings = ("BoundaryMinimum",)
    return DiffusionFit(d_qd=10.0 ** log_best, scale=scale, offset=offset,
                        sse=sse, d_grid=tuple(10.0 ** logs),
                        warnings=warnings)
