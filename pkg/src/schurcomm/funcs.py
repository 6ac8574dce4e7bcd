"""Scalar C1 functions: smooth step, slow-growth envelope, damped absolute value.

The chain built here: a growth schedule (s_m, q_m) with log-increment rate
below 1 determines an even, increasing, slowly growing envelope h with
h(s_m) = q_m and 0 <= h'/h <= 1; the C1 function f(t) = |t| / h(log|t|) on
(-1, 1) then has derivative bounded by 2 / h(log t), which decays as t -> 0
but only as slowly as 1/h grows.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    FunctionDomainError,
    InvalidInputError,
    ScheduleInfeasibleError,
)

__all__ = [
    "ScalarC1Function",
    "GrowthSchedule",
    "smooth_step",
    "build_schedule",
    "build_slow_growth",
    "build_damped_abs",
    "verify_c1",
    "power_function",
    "C1Report",
    "schedule_to_json",
    "schedule_from_json",
    "sample_to_csv",
]


@dataclass(frozen=True)
class ScalarC1Function:
    """A real function bundled with its derivative evaluator.

    `value` and `derivative` accept floats or numpy arrays. `domain` is the
    open interval of validity. `kinks` lists points where the second
    derivative jumps; finite-difference certification skips a neighborhood
    of each (the function itself is C1 there).
    """

    value: Callable
    derivative: Callable
    domain: tuple = (-math.inf, math.inf)
    label: str = ""
    kinks: tuple = ()

    def __call__(self, t):
        return self.value(t)


def power_function(exponent: int) -> ScalarC1Function:
    """t**k with its derivative; the polynomial test family."""
    k = int(exponent)
    if k < 1:
        raise InvalidInputError("exponent must be a positive integer")

    def val(t, _k=k):
        return np.asarray(t, dtype=float) ** _k

    def der(t, _k=k):
        t = np.asarray(t, dtype=float)
        return _k * t ** (_k - 1)

    return ScalarC1Function(value=val, derivative=der, label=f"t^{k}")


def _scalar_in(t):
    return np.isscalar(t) or (isinstance(t, np.ndarray) and t.ndim == 0)


def _ret(out: np.ndarray, scalar: bool):
    return float(out) if scalar else out


# ---------------------------------------------------------------------------
# smooth step
# ---------------------------------------------------------------------------

def smooth_step(eps: float) -> ScalarC1Function:
    """A C1 step: 0 for t <= 0, 1 for t >= 1, derivative in [0, 1 + eps].

    The derivative is a trapezoid of total mass 1: plateau height 1 + e on
    [e/(1+e), 1/(1+e)] with linear flanks, where e = min(eps, 1). For
    eps > 1 the trapezoid would self-intersect, so the slope is capped at 2;
    all required bounds hold a fortiori since 1 + e <= 1 + eps. The step is
    symmetric: value(t) + value(1 - t) = 1.
    """
    if not (eps > 0.0):
        raise InvalidInputError(f"eps must be positive, got {eps}")
    e = min(float(eps), 1.0)
    a = e / (1.0 + e)
    b = 1.0 / (1.0 + e)
    hgt = 1.0 + e
    half_flank = hgt * a / 2.0  # mass of one linear flank

    def val(t):
        scalar = _scalar_in(t)
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty_like(t)
        out[t <= 0.0] = 0.0
        out[t >= 1.0] = 1.0
        rise = (t > 0.0) & (t < a)
        out[rise] = hgt * t[rise] ** 2 / (2.0 * a)
        flat = (t >= a) & (t <= b)
        out[flat] = half_flank + hgt * (t[flat] - a)
        fall = (t > b) & (t < 1.0)
        out[fall] = 1.0 - hgt * (1.0 - t[fall]) ** 2 / (2.0 * a)
        return _ret(out, scalar)

    def der(t):
        scalar = _scalar_in(t)
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros_like(t)
        rise = (t > 0.0) & (t < a)
        out[rise] = hgt * t[rise] / a
        flat = (t >= a) & (t <= b)
        out[flat] = hgt
        fall = (t > b) & (t < 1.0)
        out[fall] = hgt * (1.0 - t[fall]) / a
        return _ret(out, scalar)

    return ScalarC1Function(
        value=val,
        derivative=der,
        label=f"smooth_step(eps={eps:g})",
        kinks=(0.0, a, b, 1.0),
    )


# ---------------------------------------------------------------------------
# growth schedules and the slow-growth envelope
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GrowthSchedule:
    """Node sequence (s_m, q_m) and its log-increment rate alpha < 1."""

    s: np.ndarray
    q: np.ndarray
    alpha: float

    def __post_init__(self):
        for name in ("s", "q"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def build_schedule(s, q) -> GrowthSchedule:
    """Validate node sequences and compute alpha = sup (dlog q) / (ds).

    Requires s strictly increasing from s_0 = 0, q strictly increasing from
    q_0 = 1, and alpha < 1 (otherwise no admissible envelope exists).
    """
    s = np.asarray(s, dtype=float)
    q = np.asarray(q, dtype=float)
    if s.ndim != 1 or q.ndim != 1 or s.size != q.size or s.size < 2:
        raise InvalidInputError("schedule needs matching s and q sequences of length >= 2")
    if not (np.all(np.isfinite(s)) and np.all(np.isfinite(q))):
        raise InvalidInputError("schedule entries must be finite")
    if s[0] != 0.0:
        raise InvalidInputError(f"s must start at 0, got {s[0]!r}")
    if q[0] != 1.0:
        raise InvalidInputError(f"q must start at 1, got {q[0]!r}")
    if np.any(np.diff(s) <= 0.0):
        raise InvalidInputError("s must be strictly increasing")
    if np.any(np.diff(q) <= 0.0):
        raise InvalidInputError("q must be strictly increasing")
    rates = np.diff(np.log(q)) / np.diff(s)
    alpha = float(rates.max())
    if alpha >= 1.0:
        raise ScheduleInfeasibleError(
            f"log-increment rate alpha={alpha!r} >= 1; no envelope with h'/h <= 1 exists"
        )
    return GrowthSchedule(s=s, q=q, alpha=alpha)


def build_slow_growth(schedule: GrowthSchedule) -> ScalarC1Function:
    """The even increasing envelope h = exp(H) with h(s_m) = q_m.

    H climbs from log q_{m-1} to log q_m across [s_{m-1}, s_m] along the
    smooth step with slope budget 1/alpha, which pins H' = h'/h inside
    [0, 1]. Only the active segment contributes at any t, located by binary
    search. Beyond the last node H continues linearly at the final
    increment rate, which preserves monotonicity, h(inf) = inf and the
    h'/h bound at the cost of one second-derivative jump at the last node.
    """
    s = schedule.s
    logq = np.log(schedule.q)
    ds = np.diff(s)
    dlq = np.diff(logq)
    rates = dlq / ds
    tail_rate = float(rates[-1])
    step = smooth_step(1.0 / schedule.alpha - 1.0)

    def envelope_exponent(u: np.ndarray) -> np.ndarray:
        # u >= 0 pointwise
        k = np.searchsorted(s, u, side="right")
        k = np.clip(k, 1, s.size - 1)
        arg = (u - s[k - 1]) / ds[k - 1]
        h_val = logq[k - 1] + step.value(arg) * dlq[k - 1]
        beyond = u > s[-1]
        if np.any(beyond):
            h_val = np.where(beyond, logq[-1] + tail_rate * (u - s[-1]), h_val)
        return h_val

    def envelope_rate(u: np.ndarray) -> np.ndarray:
        k = np.searchsorted(s, u, side="right")
        k = np.clip(k, 1, s.size - 1)
        arg = (u - s[k - 1]) / ds[k - 1]
        r = step.derivative(arg) * rates[k - 1]
        beyond = u > s[-1]
        if np.any(beyond):
            r = np.where(beyond, tail_rate, r)
        return r

    def val(t):
        scalar = _scalar_in(t)
        u = np.abs(np.atleast_1d(np.asarray(t, dtype=float)))
        return _ret(np.exp(envelope_exponent(u)), scalar)

    def der(t):
        scalar = _scalar_in(t)
        t = np.atleast_1d(np.asarray(t, dtype=float))
        u = np.abs(t)
        out = np.sign(t) * envelope_rate(u) * np.exp(envelope_exponent(u))
        return _ret(out, scalar)

    # second-derivative jumps: the step's flank knots mapped into each
    # segment, the nodes themselves, and the start of the linear tail
    a_knot, b_knot = step.kinks[1], step.kinks[2]
    kinks = set()
    for m in range(1, s.size):
        left, width = s[m - 1], ds[m - 1]
        for frac in (0.0, a_knot, b_knot, 1.0):
            kinks.add(left + frac * width)
    kinks |= {-k for k in kinks}
    return ScalarC1Function(
        value=val,
        derivative=der,
        label="slow_growth",
        kinks=tuple(sorted(kinks)),
    )


# ---------------------------------------------------------------------------
# the damped absolute value
# ---------------------------------------------------------------------------

def build_damped_abs(growth: ScalarC1Function) -> ScalarC1Function:
    """f(t) = |t| / growth(log|t|) on (-1, 1), f(0) = 0.

    `growth` must be even, increasing on (0, inf), unbounded, with
    0 <= growth'/growth <= 1; then f is C1 with f'(0) = 0 and
    0 <= f'(t) <= 2 / growth(log t) on (0, 1). Evaluation outside (-1, 1)
    raises FunctionDomainError.
    """

    def _check(t: np.ndarray):
        if np.any(np.abs(t) >= 1.0):
            bad = float(t[np.abs(t) >= 1.0].ravel()[0])
            raise FunctionDomainError(f"damped_abs is defined on (-1, 1); got t={bad!r}")

    def val(t):
        scalar = _scalar_in(t)
        t = np.atleast_1d(np.asarray(t, dtype=float))
        _check(t)
        out = np.zeros_like(t)
        nz = t != 0.0
        mag = np.abs(t[nz])
        out[nz] = mag / growth.value(np.log(mag))
        return _ret(out, scalar)

    def der(t):
        scalar = _scalar_in(t)
        t = np.atleast_1d(np.asarray(t, dtype=float))
        _check(t)
        out = np.zeros_like(t)
        nz = t != 0.0
        mag = np.abs(t[nz])
        u = np.log(mag)
        g = growth.value(u)
        rate = growth.derivative(u) / g
        out[nz] = np.sign(t[nz]) * (1.0 - rate) / g
        return _ret(out, scalar)

    inner = tuple(
        x
        for k in growth.kinks
        if k > 0.0 and math.exp(-k) < 1.0
        for x in (math.exp(-k), -math.exp(-k))
    )
    return ScalarC1Function(
        value=val,
        derivative=der,
        domain=(-1.0, 1.0),
        label="damped_abs",
        kinks=tuple(sorted(set(inner) | {0.0})),
    )


# ---------------------------------------------------------------------------
# finite-difference certification
# ---------------------------------------------------------------------------

@dataclass
class C1Report:
    label: str
    step: float
    n_checked: int
    max_abs_error: float
    worst_t: float
    flagged: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.flagged


def verify_c1(
    fn: ScalarC1Function,
    grid,
    step: float,
    atol: float = 1e-8,
    rtol: float = 1e-6,
    curvature_factor: float = 1.0,
    kink_clearance: float = None,
) -> C1Report:
    """Compare centered finite differences of `fn.value` against `fn.derivative`.

    Grid points within `kink_clearance` (default 3*step) of a declared kink,
    or whose stencil leaves the domain, are skipped. A point is flagged when
    the mismatch exceeds atol + rtol*|derivative| plus a local curvature
    allowance |second difference| / step.
    """
    if step <= 0:
        raise InvalidInputError("step must be positive")
    grid = np.asarray(grid, dtype=float)
    clearance = 3.0 * step if kink_clearance is None else kink_clearance
    lo, hi = fn.domain
    keep = (grid - step > lo) & (grid + step < hi)
    for k in fn.kinks:
        keep &= np.abs(grid - k) > clearance
    pts = grid[keep]
    report = C1Report(
        label=fn.label, step=step, n_checked=int(pts.size), max_abs_error=0.0, worst_t=float("nan")
    )
    if pts.size == 0:
        return report
    up = fn.value(pts + step)
    dn = fn.value(pts - step)
    mid = fn.value(pts)
    fd = (up - dn) / (2.0 * step)
    deriv = fn.derivative(pts)
    err = np.abs(fd - deriv)
    tol = atol + rtol * np.abs(deriv) + curvature_factor * np.abs(up - 2.0 * mid + dn) / step
    worst = int(np.argmax(err))
    report.max_abs_error = float(err[worst])
    report.worst_t = float(pts[worst])
    for i in np.nonzero(err > tol)[0]:
        report.flagged.append({"t": float(pts[i]), "error": float(err[i]), "tol": float(tol[i])})
    return report


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------

def schedule_to_json(schedule: GrowthSchedule) -> str:
    return json.dumps({"s": schedule.s.tolist(), "q": schedule.q.tolist()}, sort_keys=True)


def schedule_from_json(text) -> GrowthSchedule:
    obj = json.loads(text) if isinstance(text, str) else dict(text)
    return build_schedule(obj["s"], obj["q"])


def sample_to_csv(fn: ScalarC1Function, ts, path):
    """Dump (t, value, derivative) rows for plotting."""
    ts = np.asarray(ts, dtype=float)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "value", "derivative"])
        for t in ts:
            writer.writerow(
                [format(t, ".17g"), format(float(fn.value(t)), ".17g"), format(float(fn.derivative(t)), ".17g")]
            )
