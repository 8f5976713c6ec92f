"""
Quadrature engines for semi-infinite and finite intervals

Strategy is chosen from the integrand's declared decay class:

- gaussian / exponential: exp-sinh double-exponential rule on
  [1e-150, 1e150], step halved until successive levels agree.
- algebraic: x = t / (1 - t) onto [0, 1), then QUADPACK with algebraic
  endpoint weights for the declared singularity and tail exponents.
- oscillatory: a head integral up to the first kernel zero, Gauss-Legendre
  pieces between consecutive zeros, Wynn epsilon on the partial sums.

Budget exhaustion is reported through `converged=False`; an integrand that
returns NaN or inf raises IntegrationError.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad

from functions import (
    Decay,
    DecayKind,
    Function1D,
    Kernel,
    Singularity,
)

logger = logging.getLogger(__name__)

EPS = float(np.finfo(float).eps)
ROUNDING_FACTOR = 8.0

# QUADPACK subdivision budget and endpoint handling
QUAD_EVALS_PER_SUBINTERVAL = 50
ENDPOINT_INSET = 8.0 * EPS

# exp-sinh rule
DE_X_MIN = 1.0e-150
DE_X_MAX = 1.0e150
DE_FIRST_STEP = 0.5
DE_MIN_LEVEL = 3
DE_MAX_LEVEL = 12
_HALF_PI = 0.5 * math.pi
_DE_T_LOW = -math.asinh(math.log(1.0 / DE_X_MIN) / _HALF_PI)
_DE_T_HIGH = math.asinh(math.log(DE_X_MAX) / _HALF_PI)

# zero-partition rule
GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(24)
GL_CHECK_NODES, GL_CHECK_WEIGHTS = np.polynomial.legendre.leggauss(12)
PIECE_BATCH = 8
MIN_PIECES = 16
WYNN_WINDOW = 25
INITIAL_ZEROS = 64
MAX_PIECES = 512


class IntegrationError(RuntimeError):
    """Integrand produced a non-finite value or no strategy applies."""


@dataclass(frozen=True)
class Tolerance:
    """Requested accuracy; either target suffices."""
    rel: float = 1e-10
    abs: float = 1e-12
    max_evals: int = 200_000

    def __post_init__(self):
        if not self.rel >= 1e-14:
            raise ValueError(f"relative tolerance below double precision headroom: {self.rel}")
        if not self.abs > 0:
            raise ValueError(f"absolute tolerance must be positive: {self.abs}")
        if self.max_evals <= 0:
            raise ValueError(f"evaluation budget must be positive: {self.max_evals}")

    def target(self, value: float) -> float:
        return max(self.abs, self.rel * abs(value))

    def tightened(self, factor: float) -> "Tolerance":
        return replace(self, rel=max(1e-14, self.rel / factor), abs=self.abs / factor)

    @classmethod
    def for_oscillatory(cls) -> "Tolerance":
        return cls(rel=1e-8)

    def to_dict(self) -> Dict[str, float]:
        return {"rel": self.rel, "abs": self.abs, "max_evals": self.max_evals}


@dataclass(frozen=True)
class IntegrationResult:
    """Value, absolute error estimate, evaluation count, convergence flag."""
    value: float
    abs_err: float
    n_evals: int
    converged: bool
    strategy: str = ""

    def __add__(self, other: "IntegrationResult") -> "IntegrationResult":
        return IntegrationResult(
            value=self.value + other.value,
            abs_err=self.abs_err + other.abs_err,
            n_evals=self.n_evals + other.n_evals,
            converged=self.converged and other.converged,
            strategy=self.strategy if self.strategy == other.strategy else "composite",
        )

    def __mul__(self, factor: float) -> "IntegrationResult":
        factor = float(factor)
        return replace(self, value=self.value * factor, abs_err=self.abs_err * abs(factor))

    __rmul__ = __mul__

    @classmethod
    def exact(cls, value: float, abs_err: float = 0.0, strategy: str = "closed-form") -> "IntegrationResult":
        return cls(float(value), float(abs_err), 0, True, strategy)

    def to_dict(self) -> Dict[str, object]:
        return {
            "value": self.value,
            "abs_err": self.abs_err,
            "n_evals": self.n_evals,
            "converged": self.converged,
            "strategy": self.strategy,
        }


def _evaluate(f: Callable, x: np.ndarray, name: str) -> np.ndarray:
    with np.errstate(all="ignore"):
        values = np.asarray(f(x), dtype=float)
    values = np.broadcast_to(values, x.shape)
    bad = ~np.isfinite(values)
    if np.any(bad):
        where = x[bad][0]
        raise IntegrationError(f"{name} is not finite at x={where:.6g} ({values[bad][0]})")
    return values


def _scalar(f: Function1D) -> Callable[[float], float]:
    def call(x: float) -> float:
        return float(_evaluate(f.eval, np.array([x]), f.name)[0])
    return call


def _quad(fn: Callable[[float], float], a: float, b: float, tol: Tolerance,
          epsabs: float, budget: Optional[int] = None, **weight) -> Tuple[float, float, int]:
    budget = tol.max_evals if budget is None else budget
    # each bisection costs at most two 25-point rules; the weighted rule needs two intervals
    limit = max(2 if weight else 1, budget // QUAD_EVALS_PER_SUBINTERVAL)
    out = quad(fn, a, b, full_output=1, epsabs=epsabs, epsrel=tol.rel, limit=limit, **weight)
    value, err, info = out[0], out[1], out[2]
    if len(out) > 3:
        logger.debug("QUADPACK on [%g, %g]: %s", a, b, out[3])
    return float(value), float(err), int(info.get("neval", 0))


def _weighted(call: Callable[[float], float], a: float, b: float,
              lower: float, upper: float) -> Callable[[float], float]:
    """Smooth factor f(x) (x - a)^lower (b - x)^upper for QUADPACK's algebraic weight.

    The algebraic-weight rule samples the interval ends, where f itself is
    infinite. Those samples are taken a few ulps inside; the smooth factor is
    continuous there.
    """
    inset = ENDPOINT_INSET * (b - a)

    def smooth(x: float) -> float:
        if lower > 0.0 and x - a < inset:
            x = a + inset
        if upper > 0.0 and b - x < inset:
            x = b - inset
        return call(x) * (x - a) ** lower * (b - x) ** upper
    return smooth


# ---------------------------------------------------------------------------
# finite intervals
# ---------------------------------------------------------------------------

def integrate_finite(f: Function1D, a: float, b: float, tol: Optional[Tolerance] = None) -> IntegrationResult:
    """Integrate f over [a, b].

    A singularity declared at zero applies when a == 0; the upper singularity
    applies at b. Both are absorbed into QUADPACK's algebraic weight.
    """
    tol = tol or Tolerance()
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise ValueError(f"finite interval requires a < b, got [{a}, {b}]")
    # negative exponents mark zeros; they need no weight
    lower = max(0.0, f.singularity.exponent) if a == 0.0 else 0.0
    upper = max(0.0, f.upper_singularity.exponent)
    if lower >= 1.0 or upper >= 1.0:
        raise IntegrationError(f"{f.name} has a non-integrable endpoint singularity on [{a}, {b}]")

    call = _scalar(f)
    if lower > 0.0 or upper > 0.0:
        value, err, n = _quad(_weighted(call, a, b, lower, upper), a, b, tol, tol.abs,
                              weight="alg", wvar=(-lower, -upper))
        strategy = "qaws"
    else:
        value, err, n = _quad(call, a, b, tol, tol.abs)
        strategy = "qags"

    err += ROUNDING_FACTOR * EPS * abs(value)
    converged = err <= tol.target(value)
    return IntegrationResult(value, err, n, converged, strategy)


# ---------------------------------------------------------------------------
# semi-infinite, fast decay
# ---------------------------------------------------------------------------

def _exp_sinh_level(level: int) -> Tuple[float, np.ndarray]:
    h = DE_FIRST_STEP / 2 ** level
    j = np.arange(math.ceil(_DE_T_LOW / h), math.floor(_DE_T_HIGH / h) + 1)
    if level > 0:
        j = j[j % 2 != 0]
    return h, j * h


def _exp_sinh(f: Function1D, tol: Tolerance) -> IntegrationResult:
    total = 0.0
    magnitude = 0.0
    tail = 0.0
    n_evals = 0
    previous = None
    estimate, err = 0.0, math.inf
    last_err = math.inf

    for level in range(DE_MAX_LEVEL + 1):
        h, t = _exp_sinh_level(level)
        if n_evals + t.size > tol.max_evals:
            break
        u = _HALF_PI * np.sinh(t)
        x = np.exp(u)
        weights = _HALF_PI * np.cosh(t) * x
        terms = weights * _evaluate(f.eval, x, f.name)
        n_evals += t.size
        total += float(np.sum(terms))
        magnitude += float(np.sum(np.abs(terms)))
        if level == 0:
            tail = abs(terms[0]) + abs(terms[-1])

        estimate = h * total
        if previous is not None:
            err = (abs(estimate - previous) + h * tail
                   + ROUNDING_FACTOR * EPS * h * magnitude)
            if level >= DE_MIN_LEVEL and err <= tol.target(estimate):
                logger.debug("exp-sinh %s: %.16g +- %.2g (%d evals)", f.name, estimate, err, n_evals)
                return IntegrationResult(estimate, err, n_evals, True, "exp-sinh")
            if level > DE_MIN_LEVEL and err >= last_err:
                # halving the step no longer helps; the mass sits outside the node range
                break
            last_err = err
        previous = estimate

    logger.debug("exp-sinh %s did not converge: %.16g +- %.2g", f.name, estimate, err)
    return IntegrationResult(estimate, err, n_evals, False, "exp-sinh")


# ---------------------------------------------------------------------------
# semi-infinite, algebraic decay
# ---------------------------------------------------------------------------

def _rational_map(f: Function1D, tol: Tolerance) -> IntegrationResult:
    s = f.singularity.exponent
    p = f.decay.exponent
    call = _scalar(f)

    def mapped(t: float) -> float:
        one_minus = 1.0 - t
        return call(t / one_minus) / (one_minus * one_minus)

    epsabs = 0.5 * tol.abs
    budget = tol.max_evals // 2
    if s > 0.0:
        head = _quad(_weighted(mapped, 0.0, 0.5, s, 0.0), 0.0, 0.5, tol, epsabs, budget,
                     weight="alg", wvar=(-s, 0.0))
    else:
        head = _quad(mapped, 0.0, 0.5, tol, epsabs, budget)
    # the mapped tail behaves like (1 - t)^(p - 2)
    if p < 2.0:
        body = _quad(_weighted(mapped, 0.5, 1.0, 0.0, 2.0 - p), 0.5, 1.0, tol, epsabs, budget,
                     weight="alg", wvar=(0.0, p - 2.0))
    else:
        body = _quad(mapped, 0.5, 1.0, tol, epsabs, budget)

    value = head[0] + body[0]
    err = head[1] + body[1] + ROUNDING_FACTOR * EPS * (abs(head[0]) + abs(body[0]))
    n_evals = head[2] + body[2]
    converged = err <= tol.target(value)
    logger.debug("rational map %s: %.16g +- %.2g (%d evals)", f.name, value, err, n_evals)
    return IntegrationResult(value, err, n_evals, converged, "rational-map")


# ---------------------------------------------------------------------------
# semi-infinite, oscillatory
# ---------------------------------------------------------------------------

def wynn_epsilon(partial_sums: Sequence[float]) -> float:
    """Limit of a sequence by Wynn's epsilon algorithm.

    Returns the deepest even-column entry reached before a zero difference
    stops the table.
    """
    s = np.asarray(partial_sums, dtype=float)
    if s.size == 0:
        raise ValueError("wynn_epsilon needs at least one term")
    previous = np.zeros(s.size + 1)
    current = s.copy()
    best = float(current[-1])
    column = 0
    while current.size > 1:
        diff = np.diff(current)
        scale = np.maximum(np.abs(current[:-1]), np.abs(current[1:]))
        if np.any(np.abs(diff) <= EPS * scale):
            break
        following = previous[1:current.size] + 1.0 / diff
        previous, current = current, following
        column += 1
        if column % 2 == 0:
            best = float(current[-1])
    return best


def _gauss_legendre(integrand: Callable, a: np.ndarray, b: np.ndarray,
                    name: str) -> Tuple[np.ndarray, np.ndarray]:
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x_hi = mid[:, None] + half[:, None] * GL_NODES[None, :]
    x_lo = mid[:, None] + half[:, None] * GL_CHECK_NODES[None, :]
    nodes = np.concatenate([x_hi.ravel(), x_lo.ravel()])
    values = _evaluate(integrand, nodes, name)
    v_hi = values[:x_hi.size].reshape(x_hi.shape)
    v_lo = values[x_hi.size:].reshape(x_lo.shape)
    hi = half * (v_hi @ GL_WEIGHTS)
    lo = half * (v_lo @ GL_CHECK_WEIGHTS)
    return hi, np.abs(hi - lo)


def _partitioned(integrand: Function1D, zeros: Callable[[int], np.ndarray],
                 tol: Tolerance, strategy: str) -> IntegrationResult:
    """Head integral to the first zero, then zero-to-zero pieces with acceleration.

    n_evals never exceeds tol.max_evals: the head gets a quarter of the
    budget and a piece is refined only while the rest can pay for it.
    """
    points = zeros(INITIAL_ZEROS)
    head_tol = replace(tol.tightened(10.0), max_evals=max(1, tol.max_evals // 4))
    head = integrate_finite(integrand, 0.0, float(points[0]), head_tol)
    n_evals = head.n_evals
    piece_err = head.abs_err
    magnitude = abs(head.value)
    partial = [head.value]
    estimates: List[float] = []
    running = head.value
    used = 0
    estimate, err = head.value, math.inf
    batch_cost = PIECE_BATCH * (GL_NODES.size + GL_CHECK_NODES.size)

    while n_evals + batch_cost <= tol.max_evals and used < MAX_PIECES:
        if used + PIECE_BATCH + 1 > points.size:
            points = zeros(2 * points.size)
        a = points[used:used + PIECE_BATCH]
        b = points[used + 1:used + PIECE_BATCH + 1]
        values, errors = _gauss_legendre(integrand.eval, a, b, integrand.name)
        n_evals += batch_cost

        for i in range(values.size):
            value, piece = float(values[i]), float(errors[i])
            remaining = tol.max_evals - n_evals
            if piece > 0.1 * tol.target(running) and remaining >= QUAD_EVALS_PER_SUBINTERVAL:
                # sharp envelope structure inside the piece
                refine_tol = replace(tol.tightened(100.0), max_evals=remaining)
                refined = integrate_finite(integrand, float(a[i]), float(b[i]), refine_tol)
                value, piece = refined.value, refined.abs_err
                n_evals += refined.n_evals
            running += value
            piece_err += piece
            magnitude += abs(value)
            partial.append(running)
        used += values.size

        estimate = wynn_epsilon(partial[-WYNN_WINDOW:])
        estimates.append(estimate)
        if used < MIN_PIECES or len(estimates) < 3:
            continue
        spread = max(abs(estimate - estimates[-2]), abs(estimate - estimates[-3]))
        err = spread + piece_err + ROUNDING_FACTOR * EPS * magnitude
        if err <= tol.target(estimate):
            logger.debug("%s: %.16g +- %.2g after %d pieces", strategy, estimate, err, used)
            return IntegrationResult(estimate, err, n_evals, True, strategy)

    logger.debug("%s did not converge after %d pieces: %.16g +- %.2g", strategy, used, estimate, err)
    return IntegrationResult(estimate, err, n_evals, False, strategy)


def integrate_oscillatory(envelope: Function1D, kernel: Kernel, freq: float,
                          tol: Optional[Tolerance] = None) -> IntegrationResult:
    """Integrate envelope(x) * kernel(freq * x) over (0, inf)."""
    tol = tol or Tolerance.for_oscillatory()
    if not freq > 0 or not math.isfinite(freq):
        raise ValueError(f"frequency must be positive, got {freq}")
    if envelope.decay.kind is DecayKind.OSCILLATORY:
        raise IntegrationError(f"envelope {envelope.name} oscillates itself")
    if envelope.decay.power + kernel.decay <= 0.0:
        raise IntegrationError(
            f"{envelope.name} times {kernel.describe()} does not decay "
            f"(envelope {envelope.decay.describe()})")
    head_exponent = envelope.singularity.exponent - kernel.order_at_zero
    if head_exponent >= 1.0:
        raise IntegrationError(f"{envelope.name} times {kernel.describe()} is not integrable at 0")

    integrand = Function1D(
        eval=lambda x: envelope.eval(x) * kernel(freq * x),
        decay=Decay.oscillatory(2.0 * math.pi / freq),
        singularity=Singularity(max(0.0, head_exponent)),
        name=f"{envelope.name}*{kernel.describe()}({freq:g}x)",
    )
    return _partitioned(integrand, lambda n: kernel.zeros(n) / freq, tol,
                        f"zero-partition[{kernel.describe()}]")


def integrate_semi_infinite(f: Function1D, tol: Optional[Tolerance] = None) -> IntegrationResult:
    """Integrate f over (0, inf) with the strategy its decay class selects."""
    if f.oscillation is not None:
        o = f.oscillation
        return integrate_oscillatory(o.envelope, o.kernel, o.freq, tol or Tolerance.for_oscillatory())

    tol = tol or Tolerance()
    if not f.singularity.integrable:
        raise IntegrationError(f"{f.name} has a non-integrable singularity x^-{f.singularity.exponent:g}")

    kind = f.decay.kind
    if kind in (DecayKind.GAUSSIAN, DecayKind.EXPONENTIAL):
        return _exp_sinh(f, tol)
    if kind is DecayKind.ALGEBRAIC:
        if f.decay.exponent <= 1.0:
            raise IntegrationError(
                f"{f.name} decays like x^-{f.decay.exponent:g}; the integral does not converge absolutely")
        return _rational_map(f, tol)

    period = f.decay.period_hint
    if period is None:
        raise IntegrationError(f"{f.name} is oscillatory but declares neither a period nor a kernel")
    return _partitioned(f, lambda n: 0.5 * period * np.arange(1, n + 1, dtype=float), tol,
                        "half-period partition")
