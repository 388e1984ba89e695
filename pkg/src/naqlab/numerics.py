"""Deterministic numerical kernels shared by the rest of the package.

Provides globally adaptive Gauss-Kronrod quadrature, explicit Runge-Kutta
integration (fixed-step classic RK4 or the adaptive Dormand-Prince 5(4)
embedded pair), bracketing bisection on a two-way classifier, and
second-order finite differences on possibly non-uniform sample points.

Everything here is a pure function of its inputs; all arithmetic is
64-bit IEEE-754.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "QuadResult",
    "QuadratureBudgetError",
    "quad_adaptive",
    "OdeState",
    "StepControls",
    "RkSolution",
    "IntegrationBlowUp",
    "rk_integrate",
    "InvalidBracketError",
    "bisect",
    "centered_derivative",
]


# ---------------------------------------------------------------------------
# Adaptive quadrature (Gauss-Kronrod 15-7)
# ---------------------------------------------------------------------------

# Kronrod-15 abscissae on [-1, 1] together with the Kronrod weights and the
# embedded Gauss-7 weights (zero at the Kronrod-only nodes).
_GK15 = (
    # node                 Gauss-7 weight       Kronrod-15 weight
    (+0.949107912342759, 0.129484966168870, 0.063092092629979),
    (-0.949107912342759, 0.129484966168870, 0.063092092629979),
    (+0.741531185599394, 0.279705391489277, 0.140653259715525),
    (-0.741531185599394, 0.279705391489277, 0.140653259715525),
    (+0.405845151377397, 0.381830050505119, 0.190350578064785),
    (-0.405845151377397, 0.381830050505119, 0.190350578064785),
    (0.000000000000000, 0.417959183673469, 0.209482141084728),
    (+0.991455371120813, 0.000000000000000, 0.022935322010529),
    (-0.991455371120813, 0.000000000000000, 0.022935322010529),
    (+0.864864423359769, 0.000000000000000, 0.104790010322250),
    (-0.864864423359769, 0.000000000000000, 0.104790010322250),
    (+0.586087235467691, 0.000000000000000, 0.169004726639267),
    (-0.586087235467691, 0.000000000000000, 0.169004726639267),
    (+0.207784955007898, 0.000000000000000, 0.204432940075298),
    (-0.207784955007898, 0.000000000000000, 0.204432940075298),
)


@dataclass(frozen=True)
class QuadResult:
    """Value, a posteriori absolute error estimate, and evaluation count."""

    value: float
    error_estimate: float
    evaluations: int

    def __post_init__(self):
        if self.error_estimate < 0 or self.evaluations < 1:
            raise ValueError("malformed quadrature result")


class QuadratureBudgetError(RuntimeError):
    """Raised when the evaluation budget runs out before convergence.

    Carries the partial result so callers can inspect how far the
    refinement got.
    """

    def __init__(self, partial: QuadResult):
        super().__init__(
            "quadrature budget exceeded: %d evaluations, "
            "error estimate %.3e" % (partial.evaluations, partial.error_estimate)
        )
        self.partial = partial


def _gk15_panel(f, a, b):
    """One Gauss-Kronrod 15-7 panel on [a, b]: (value, error, evals)."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    g7 = 0.0
    k15 = 0.0
    for node, wg, wk in _GK15:
        fx = f(mid + half * node)
        g7 += wg * fx
        k15 += wk * fx
    raw = abs(k15 - g7) * half
    # QUADPACK-style sharpening of the raw G7/K15 discrepancy.
    err = min(raw, (200.0 * raw) ** 1.5) if raw > 0 else 0.0
    return k15 * half, err, 15


def quad_adaptive(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
    *,
    max_evaluations: int = 500_000,
) -> QuadResult:
    """Integrate ``f`` over [a, b] to within ``max(tol, tol*|value|)``.

    Globally adaptive: the subinterval with the largest error estimate is
    bisected until the summed estimate meets the tolerance.  A semi-infinite
    upper limit (``b = inf``) is mapped to a finite interval by the change
    of variable u = 1/r (requires ``a > 0``); the Kronrod nodes are interior
    so the u = 0 endpoint is never evaluated.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if math.isinf(b):
        if a <= 0:
            raise ValueError("semi-infinite integration requires a > 0")
        inner = f
        f = lambda u: inner(1.0 / u) / (u * u)
        a, b = 0.0, 1.0 / a
    if not a < b:
        raise ValueError("require a < b")

    value, err, evals = _gk15_panel(f, a, b)
    # Max-heap on the error estimate; the counter breaks exact ties
    # deterministically.
    counter = 0
    heap = [(-err, counter, a, b, value, err)]
    while True:
        total = sum(item[4] for item in heap)
        total_err = sum(item[5] for item in heap)
        if total_err <= max(tol, tol * abs(total)):
            return QuadResult(total, total_err, evals)
        if evals + 30 > max_evaluations:
            raise QuadratureBudgetError(QuadResult(total, total_err, evals))
        _, _, lo, hi, _, _ = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            # Interval no longer splittable in float64; keep it as-is.
            raise QuadratureBudgetError(QuadResult(total, total_err, evals))
        for left, right in ((lo, mid), (mid, hi)):
            v, e, n = _gk15_panel(f, left, right)
            evals += n
            counter += 1
            heapq.heappush(heap, (-e, counter, left, right, v, e))


# ---------------------------------------------------------------------------
# Explicit Runge-Kutta integration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OdeState:
    """A point on a radial trajectory: coordinate r > 0 and state vector y."""

    r: float
    y: tuple

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("radial coordinate must be positive (r = %r)" % (self.r,))


@dataclass(frozen=True)
class StepControls:
    """Integration controls.

    ``step`` fixed selects classic RK4 with that stride; otherwise the
    adaptive Dormand-Prince 5(4) pair is used with the given tolerances.
    """

    rtol: float = 1e-10
    atol: float = 1e-12
    step: float | None = None
    h_max: float | None = None
    max_steps: int = 1_000_000


@dataclass
class RkSolution:
    r: np.ndarray
    y: np.ndarray  # shape (len(r), dim)

    @property
    def final(self) -> OdeState:
        return OdeState(float(self.r[-1]), tuple(self.y[-1]))


class IntegrationBlowUp(RuntimeError):
    """Step underflow or a non-finite state; carries the last valid state."""

    def __init__(self, message: str, last_state: OdeState, partial: "RkSolution"):
        super().__init__("integration blow-up: " + message)
        self.last_state = last_state
        self.partial = partial


# Dormand-Prince 5(4) tableau.
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)


def _rk4_step(rhs, r, y, h):
    k1 = rhs(r, y)
    k2 = rhs(r + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(r + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(r + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def rk_integrate(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    state0: OdeState,
    r_end: float,
    controls: StepControls = StepControls(),
    stop_condition: Callable[[float, np.ndarray], bool] | None = None,
) -> RkSolution:
    """Integrate y' = rhs(r, y) from ``state0`` to ``r_end``.

    Samples are retained at every accepted step.  ``stop_condition`` is
    checked after each accepted step and halts the integration early when
    it returns True (the triggering sample is retained).

    Raises
    ------
    IntegrationBlowUp
        on non-finite state or step-size underflow; the exception carries
        the last valid state and the partial trajectory.
    """
    r = float(state0.r)
    y = np.asarray(state0.y, dtype=float)
    if r_end <= r:
        raise ValueError("r_end must exceed the initial radius")
    rs = [r]
    ys = [y.copy()]

    def _blowup(msg):
        sol = RkSolution(np.array(rs), np.array(ys))
        raise IntegrationBlowUp(msg, OdeState(rs[-1], tuple(ys[-1])), sol)

    if controls.step is not None:
        h = float(controls.step)
        if h <= 0:
            raise ValueError("fixed step must be positive")
        nsteps = 0
        while r < r_end:
            hh = min(h, r_end - r)
            y = _rk4_step(rhs, r, y, hh)
            r += hh
            if not np.all(np.isfinite(y)):
                _blowup("non-finite state at r = %g" % r)
            rs.append(r)
            ys.append(y.copy())
            nsteps += 1
            if stop_condition is not None and stop_condition(r, y):
                break
            if nsteps > controls.max_steps:
                _blowup("step budget exceeded")
        return RkSolution(np.array(rs), np.array(ys))

    # Adaptive Dormand-Prince with FSAL reuse.
    span = r_end - r
    h = min(span / 100.0, controls.h_max or span)
    k_first = rhs(r, y)
    nsteps = 0
    while r < r_end:
        h = min(h, r_end - r)
        if h < 1e-14 * max(abs(r), 1.0):
            _blowup("step underflow at r = %g" % r)
        # inf/nan in rejected trial stages is expected near a blow-up and
        # handled below, so the numpy warnings carry no information
        with np.errstate(invalid="ignore", over="ignore"):
            k = [k_first]
            for i in range(1, 7):
                yi = y + h * sum(aij * kj for aij, kj in zip(_DP_A[i], k))
                k.append(rhs(r + _DP_C[i] * h, yi))
            y5 = y + h * sum(b * kj for b, kj in zip(_DP_B5, k))
            y4 = y + h * sum(b * kj for b, kj in zip(_DP_B4, k))
        if np.all(np.isfinite(y5)) and np.all(np.isfinite(y4)):
            scale = controls.atol + controls.rtol * np.maximum(np.abs(y), np.abs(y5))
            errnorm = math.sqrt(float(np.mean(((y5 - y4) / scale) ** 2)))
        else:
            # Non-finite trial step: reject and retry with a smaller stride;
            # a genuinely diverging solution ends in step underflow above.
            errnorm = math.inf
        if errnorm <= 1.0:
            r += h
            y = y5
            k_first = k[6]  # FSAL: k7 equals k1 of the next step
            rs.append(r)
            ys.append(y.copy())
            if stop_condition is not None and stop_condition(r, y):
                break
        factor = 0.9 * (errnorm ** -0.2) if errnorm > 0 else 5.0
        h *= min(5.0, max(0.2, factor))
        if controls.h_max is not None:
            h = min(h, controls.h_max)
        nsteps += 1
        if nsteps > controls.max_steps:
            _blowup("step budget exceeded")
    return RkSolution(np.array(rs), np.array(ys))


# ---------------------------------------------------------------------------
# Bisection on a two-way classifier
# ---------------------------------------------------------------------------


class InvalidBracketError(ValueError):
    """Both bracket ends classify the same way."""


def bisect(
    predicate: Callable[[float], object],
    bracket: tuple[float, float],
    tol: float,
) -> float:
    """Bisect until the bracket is narrower than ``tol``.

    ``predicate`` may return any two distinct labels; the bracket ends must
    classify differently.  Returns the midpoint of the final bracket, so the
    answer is within tol/2 of the true crossover.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValueError("bracket must be ordered (lo, hi)")
    if tol <= 0:
        raise ValueError("tol must be positive")
    p_lo = predicate(lo)
    p_hi = predicate(hi)
    if p_lo == p_hi:
        raise InvalidBracketError(
            "invalid bracket: both ends classify as %r" % (p_lo,)
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # float64 exhausted
        if predicate(mid) == p_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Finite differences on (possibly non-uniform) samples
# ---------------------------------------------------------------------------


def centered_derivative(x: Sequence[float], f: Sequence[float]) -> np.ndarray:
    """Second-order df/dx on sample points ``x`` (strictly increasing).

    Interior points use the three-point centered formula for non-uniform
    spacing; the two endpoints use the matching one-sided three-point
    formula (also second order).
    """
    x = np.asarray(x, dtype=float)
    f = np.asarray(f, dtype=float)
    if x.ndim != 1 or x.shape != f.shape or x.size < 3:
        raise ValueError("need at least 3 matching 1-D samples")
    if not np.all(np.diff(x) > 0):
        raise ValueError("sample points must be strictly increasing")
    out = np.empty_like(f)
    h1 = x[1:-1] - x[:-2]
    h2 = x[2:] - x[1:-1]
    out[1:-1] = (
        h1**2 * f[2:] - h2**2 * f[:-2] - (h1**2 - h2**2) * f[1:-1]
    ) / (h1 * h2 * (h1 + h2))
    # one-sided second-order endpoints
    a, b = x[1] - x[0], x[2] - x[1]
    out[0] = (
        -(2 * a + b) / (a * (a + b)) * f[0]
        + (a + b) / (a * b) * f[1]
        - a / (b * (a + b)) * f[2]
    )
    a, b = x[-2] - x[-3], x[-1] - x[-2]
    out[-1] = (
        b / (a * (a + b)) * f[-3]
        - (a + b) / (a * b) * f[-2]
        + (a + 2 * b) / (b * (a + b)) * f[-1]
    )
    return out
