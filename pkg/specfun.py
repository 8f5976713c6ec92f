"""
Special functions for the Glasser transform verifier

Gamma and beta, Bessel J/I/K of real order, the modified Struve function L0,
the error function, Dawson's integral and the exponential integrals.

Every public scalar function returns a SpecialValue carrying an absolute
error bound. The bound is a machine-epsilon-scaled condition estimate,
BOUND_FACTOR * eps * (|f(x)| + |x f'(x)|), not an interval enclosure.

The *_kernel functions are the vectorised forms the transforms integrate
against; they skip domain checks and error bounds.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Tuple

import numpy as np
from scipy import special
from scipy.integrate import quad
from scipy.optimize import brentq


EPS = float(np.finfo(float).eps)
BOUND_FACTOR = 8.0

# Past this argument the Amos routines behind jv/kve/ive stop computing,
# so the kernels switch to two-term Hankel asymptotics.
LARGE_ARGUMENT = 1.0e8
# K_nu(x) is below the smallest normal double past this point.
K_UNDERFLOW = 745.0
# e^x E1(x): library value up to here, continued fraction beyond.
E1_SERIES_LIMIT = 1.0
E1_CF_MAX_TERMS = 500
# I0 - L0 cancels badly for large x; use its integral representation there.
I0_MINUS_L0_SWITCH = 8.0
# QUADPACK rejects epsrel below 50 machine epsilons
QUAD_REL_FLOOR = 1e-13
ZERO_SCAN_STEP = 0.05


class DomainError(ValueError):
    """Argument outside the real domain of a special function."""


@dataclass(frozen=True)
class SpecialValue:
    """A special-function value together with an absolute error bound."""
    value: float
    abs_err_bound: float

    def __float__(self) -> float:
        return self.value

    @property
    def rel_err_bound(self) -> float:
        if self.value == 0.0:
            return math.inf if self.abs_err_bound else 0.0
        return self.abs_err_bound / abs(self.value)

    def to_dict(self) -> Dict[str, float]:
        return {"value": self.value, "abs_err_bound": self.abs_err_bound}


def _bounded(value: float, slope: float = 0.0) -> SpecialValue:
    """Wrap a value with the condition-number error model."""
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"value is not finite ({value})")
    bound = BOUND_FACTOR * EPS * (abs(value) + abs(float(slope)))
    return SpecialValue(value, bound)


def _require_finite(**arguments: float) -> None:
    for name, value in arguments.items():
        if not math.isfinite(value):
            raise DomainError(f"{name}={value} is not finite")


def _is_half_order(nu: float) -> bool:
    return abs(nu) == 0.5


def _is_integer(value: float) -> bool:
    return float(value).is_integer()


# ---------------------------------------------------------------------------
# Gamma and beta
# ---------------------------------------------------------------------------

def gamma(x: float) -> SpecialValue:
    """Gamma function on the real line, excluding the poles."""
    _require_finite(x=x)
    if x <= 0 and _is_integer(x):
        raise DomainError(f"gamma has a pole at x={x}")
    value = special.gamma(x)
    if not math.isfinite(value):
        raise DomainError(f"gamma overflows at x={x}")
    return _bounded(value, x * special.psi(x) * value)


def beta(x: float, y: float) -> SpecialValue:
    """Beta function B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y) for x, y > 0."""
    _require_finite(x=x, y=y)
    if x <= 0 or y <= 0:
        raise DomainError(f"beta requires x > 0 and y > 0, got ({x}, {y})")
    value = float(special.beta(x, y))
    psi_xy = special.psi(x + y)
    condition = abs(x * (special.psi(x) - psi_xy)) + abs(y * (special.psi(y) - psi_xy))
    return SpecialValue(value, BOUND_FACTOR * EPS * abs(value) * (1.0 + condition))


# ---------------------------------------------------------------------------
# Bessel functions
# ---------------------------------------------------------------------------

def _hankel_pq(nu: float, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    mu = 4.0 * nu * nu
    eight_x = 8.0 * x
    p = 1.0 - (mu - 1.0) * (mu - 9.0) / (2.0 * eight_x ** 2)
    q = (mu - 1.0) / eight_x
    return p, q


def j_kernel(nu: float, x) -> np.ndarray:
    """Vectorised J_nu(x) for x >= 0, exact at half orders."""
    x = np.asarray(x, dtype=float)
    if nu == 0.5:
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.sqrt(2.0 / (np.pi * x)) * np.sin(x)
        return np.where(x == 0.0, 0.0, out)
    if nu == -0.5:
        with np.errstate(divide="ignore"):
            return np.sqrt(2.0 / (np.pi * x)) * np.cos(x)
    out = np.asarray(special.jv(nu, x), dtype=float)
    far = x > LARGE_ARGUMENT
    if np.any(far):
        xf = x[far]
        p, q = _hankel_pq(nu, xf)
        omega = xf - 0.5 * nu * np.pi - 0.25 * np.pi
        out = np.array(out, copy=True)
        out[far] = np.sqrt(2.0 / (np.pi * xf)) * (p * np.cos(omega) - q * np.sin(omega))
    return out


def k_kernel(nu: float, x) -> np.ndarray:
    """Vectorised K_nu(x) for x > 0, exact at half orders."""
    x = np.asarray(x, dtype=float)
    if _is_half_order(nu):
        return np.sqrt(np.pi / (2.0 * x)) * np.exp(-x)
    out = np.zeros_like(x)
    near = x <= K_UNDERFLOW
    out[near] = special.kv(nu, x[near])
    return out


def kve_kernel(nu: float, x) -> np.ndarray:
    """Vectorised exp(x) K_nu(x)."""
    x = np.asarray(x, dtype=float)
    out = np.asarray(special.kve(nu, np.minimum(x, LARGE_ARGUMENT)), dtype=float)
    far = x > LARGE_ARGUMENT
    if np.any(far):
        xf = x[far]
        mu = 4.0 * nu * nu
        out = np.array(out, copy=True)
        out[far] = np.sqrt(np.pi / (2.0 * xf)) * (1.0 + (mu - 1.0) / (8.0 * xf))
    return out


def ive_kernel(nu: float, x) -> np.ndarray:
    """Vectorised exp(-x) I_nu(x) for x >= 0."""
    x = np.asarray(x, dtype=float)
    out = np.asarray(special.ive(nu, np.minimum(x, LARGE_ARGUMENT)), dtype=float)
    far = x > LARGE_ARGUMENT
    if np.any(far):
        xf = x[far]
        mu = 4.0 * nu * nu
        out = np.array(out, copy=True)
        out[far] = (1.0 - (mu - 1.0) / (8.0 * xf)) / np.sqrt(2.0 * np.pi * xf)
    return out


def ik_product_kernel(nu: float, x) -> np.ndarray:
    """Vectorised I_nu(x) K_nu(x) for x > 0, free of overflow."""
    return ive_kernel(nu, x) * kve_kernel(nu, x)


def bessel_j(nu: float, x: float) -> SpecialValue:
    """Bessel function of the first kind J_nu(x), nu >= -1, x >= 0."""
    _require_finite(nu=nu, x=x)
    if nu < -1.0:
        raise DomainError(f"orders below -1 are not supported (nu={nu})")
    if x < 0:
        raise DomainError(f"bessel_j requires x >= 0, got {x}")
    if x == 0.0:
        if nu == 0.0:
            return SpecialValue(1.0, 0.0)
        if nu > 0.0 or _is_integer(nu):
            return SpecialValue(0.0, 0.0)
        raise DomainError(f"J_{nu} is unbounded at x=0")
    value = float(j_kernel(nu, np.array([x]))[0])
    if nu == 0.5:
        slope = math.sqrt(2.0 * x / math.pi) * math.cos(x) - 0.5 * value
    elif nu == -0.5:
        slope = -math.sqrt(2.0 * x / math.pi) * math.sin(x) - 0.5 * value
    else:
        slope = x * special.jvp(nu, x)
    return _bounded(value, slope)


def bessel_i(nu: float, x: float) -> SpecialValue:
    """Modified Bessel function of the first kind I_nu(x), x >= 0."""
    _require_finite(nu=nu, x=x)
    if x < 0:
        raise DomainError(f"bessel_i requires x >= 0, got {x}")
    if x == 0.0:
        if nu == 0.0:
            return SpecialValue(1.0, 0.0)
        if nu > 0.0 or _is_integer(nu):
            return SpecialValue(0.0, 0.0)
        raise DomainError(f"I_{nu} is unbounded at x=0")
    value = special.iv(nu, x)
    if not math.isfinite(value):
        raise DomainError(f"I_{nu}({x}) overflows")
    return _bounded(value, x * special.ivp(nu, x))


def bessel_k(nu: float, x: float) -> SpecialValue:
    """Modified Bessel function of the second kind K_nu(x), x > 0."""
    _require_finite(nu=nu, x=x)
    if x <= 0:
        raise DomainError(f"bessel_k requires x > 0, got {x}")
    if _is_half_order(nu):
        value = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x)
        return _bounded(value, -(x + 0.5) * value)
    value = special.kv(nu, x)
    return _bounded(value, x * special.kvp(nu, x))


def bessel_ik_product(nu: float, x: float) -> SpecialValue:
    """I_nu(x) K_nu(x) for x > 0, built from exponentially scaled factors."""
    _require_finite(nu=nu, x=x)
    if x <= 0:
        raise DomainError(f"bessel_ik_product requires x > 0, got {x}")
    i0, k0 = special.ive(nu, x), special.kve(nu, x)
    i1, k1 = special.ive(nu + 1.0, x), special.kve(nu + 1.0, x)
    value = i0 * k0
    # x (I K)' from I' = I_{nu+1} + (nu/x) I and K' = -K_{nu+1} + (nu/x) K
    slope = x * (i1 * k0 - i0 * k1) + 2.0 * nu * value
    return _bounded(value, slope)


def j_leading_order(nu: float) -> float:
    """Exponent a in J_nu(t) ~ t^a as t -> 0; J_-n = (-1)^n J_n for integer n."""
    if nu < 0 and _is_integer(nu):
        return -nu
    return nu


@lru_cache(maxsize=64)
def _bessel_j_zeros(nu: float, count: int) -> Tuple[float, ...]:
    upper = (count + 0.5 * abs(nu) + 3.0) * math.pi
    grid = np.arange(ZERO_SCAN_STEP, upper, ZERO_SCAN_STEP)
    values = j_kernel(nu, grid)
    changes = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0]
    roots = []
    for index in changes[:count]:
        a, b = grid[index], grid[index + 1]
        roots.append(brentq(lambda t: float(j_kernel(nu, np.array([t]))[0]), a, b,
                            xtol=1e-15, rtol=4 * EPS))
    return tuple(roots)


def bessel_j_zeros(nu: float, count: int) -> np.ndarray:
    """First `count` positive zeros of J_nu, nu >= -1."""
    if nu < -1.0:
        raise DomainError(f"orders below -1 are not supported (nu={nu})")
    if nu == 0.5:
        return np.pi * np.arange(1, count + 1, dtype=float)
    if nu == -0.5:
        return np.pi * (np.arange(1, count + 1, dtype=float) - 0.5)
    return np.array(_bessel_j_zeros(float(nu), int(count)))


# ---------------------------------------------------------------------------
# Struve, error function, Dawson
# ---------------------------------------------------------------------------

def struve_l0(x: float) -> SpecialValue:
    """Modified Struve function of order zero, x >= 0."""
    _require_finite(x=x)
    if x < 0:
        raise DomainError(f"struve_l0 requires x >= 0, got {x}")
    value = special.modstruve(0, x)
    # d/dx L0 = L1 + 2/pi
    return _bounded(value, x * (special.modstruve(1, x) + 2.0 / math.pi))


def i0_minus_l0(x: float) -> SpecialValue:
    """I0(x) - L0(x), accurate where the two terms nearly cancel."""
    _require_finite(x=x)
    if x < 0:
        raise DomainError(f"i0_minus_l0 requires x >= 0, got {x}")
    if x <= I0_MINUS_L0_SWITCH:
        value = special.iv(0, x) - special.modstruve(0, x)
        scale = special.iv(0, x) + special.modstruve(0, x)
        slope = x * (special.iv(1, x) + special.modstruve(1, x) + 2.0 / math.pi)
        return SpecialValue(float(value), BOUND_FACTOR * EPS * (scale + abs(slope)))
    # I0(x) - L0(x) = (2/pi) int_0^{pi/2} exp(-x cos t) dt
    integral, err = quad(lambda t: math.exp(-x * math.cos(t)), 0.0, 0.5 * math.pi,
                         epsabs=0.0, epsrel=QUAD_REL_FLOOR, limit=200)
    value = 2.0 / math.pi * integral
    return SpecialValue(value, 2.0 / math.pi * err + BOUND_FACTOR * EPS * abs(value))


def dawson_kernel(x) -> np.ndarray:
    """Vectorised Dawson integral."""
    return special.dawsn(np.asarray(x, dtype=float))


def dawson(x: float) -> SpecialValue:
    """Dawson's integral exp(-x^2) int_0^x exp(t^2) dt.

    This is the real stand-in for exp(-x^2) Erf(ix) = (2i/sqrt(pi)) dawson(x).
    """
    _require_finite(x=x)
    value = special.dawsn(x)
    return _bounded(value, x * (1.0 - 2.0 * x * value))


def erf(x: float) -> SpecialValue:
    """Error function."""
    _require_finite(x=x)
    value = special.erf(x)
    return _bounded(value, x * 2.0 / math.sqrt(math.pi) * math.exp(-x * x))


# ---------------------------------------------------------------------------
# Exponential integrals
# ---------------------------------------------------------------------------

def _e1_continued_fraction(x: np.ndarray) -> np.ndarray:
    """exp(x) E1(x) for x > 1 by the modified Lentz continued fraction."""
    tiny = 1e-300
    b = x + 1.0
    c = np.full_like(x, 1.0 / tiny)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    for i in range(1, E1_CF_MAX_TERMS + 1):
        an = -float(i * i)
        b = b + 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h = np.where(active, h * delta, h)
        active &= np.abs(delta - 1.0) > EPS
        if not np.any(active):
            break
    return h


def e1_scaled_kernel(x) -> np.ndarray:
    """Vectorised exp(x) E1(x) for x > 0; never overflows."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x <= E1_SERIES_LIMIT
    far = x > LARGE_ARGUMENT
    middle = ~small & ~far
    out[small] = np.exp(x[small]) * special.exp1(x[small])
    if np.any(middle):
        out[middle] = _e1_continued_fraction(x[middle])
    if np.any(far):
        inv = 1.0 / x[far]
        out[far] = inv * (1.0 - inv * (1.0 - 2.0 * inv))
    return out


def expint_e1(x: float) -> SpecialValue:
    """Exponential integral E1(x) = int_1^inf exp(-x t)/t dt, x > 0."""
    _require_finite(x=x)
    if x <= 0:
        raise DomainError(f"expint_e1 is real only for x > 0, got {x}")
    value = special.exp1(x)
    return _bounded(value, math.exp(-x))


def expint_e1_scaled(x: float) -> SpecialValue:
    """exp(x) E1(x), x > 0."""
    _require_finite(x=x)
    if x <= 0:
        raise DomainError(f"expint_e1_scaled requires x > 0, got {x}")
    value = float(e1_scaled_kernel(np.array([x]))[0])
    return _bounded(value, x * value - 1.0)


def expint_ei(x: float) -> SpecialValue:
    """Exponential integral Ei(x), principal value for x > 0."""
    _require_finite(x=x)
    if x == 0:
        raise DomainError("Ei has a logarithmic singularity at 0")
    value = special.expi(x)
    return _bounded(value, math.exp(x))


def schlomilch_en(n: int, x: float) -> SpecialValue:
    """Schlomilch function E_n(x) = int_1^inf exp(-x t) t^{-n} dt, n >= 0, x > 0."""
    _require_finite(x=x)
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n}")
    if x <= 0:
        raise DomainError(f"schlomilch_en is real only for x > 0, got {x}")
    n = int(n)
    if n == 0:
        value = math.exp(-x) / x
        return _bounded(value, -(1.0 + x) * value)
    value = special.expn(n, x)
    # E_n' = -E_{n-1}
    previous = math.exp(-x) / x if n == 1 else special.expn(n - 1, x)
    return _bounded(value, x * previous)
