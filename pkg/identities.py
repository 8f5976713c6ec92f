"""
Identity catalog and verifier

Each IdentityRecord pairs a numerically evaluated left side with a right
side (closed form over specfun, or a second numerical pipeline where the
identity relates two transforms), a parameter domain and a tolerance class.
`verify` sweeps a record over a grid; `verify_all` runs the whole catalog,
optionally across worker processes, and merges results deterministically.
"""

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

import corpus
import specfun
from config import TolClass, ToleranceProfile, load_profile
from functions import (
    REGULAR,
    Decay,
    Function1D,
    Singularity,
    product,
    times_power,
)
from quadrature import (
    IntegrationResult,
    Tolerance,
    integrate_semi_infinite,
)
from reports import PointResult, VerificationReport
from transforms import (
    TransformKind,
    e1_transform,
    e21_transform,
    fourier_cos,
    fourier_sin,
    glasser,
    hankel,
    image,
    k_transform,
    l2,
    laplace,
    widder,
)

logger = logging.getLogger(__name__)

Point = Dict[str, Any]
Pipeline = Callable[[Point, "EvaluationContext"], IntegrationResult]

SQRT_PI = math.sqrt(math.pi)
EPS = float(np.finfo(float).eps)
STRIP_MARGIN = 0.05

MU_GRID = (0.25, 0.5, 0.75)
NU_GRID = (-0.5, 0.0, 0.5)
YZ_GRID = (0.5, 1.0, 2.0)

# Test functions selectable through the "f" / "pair" point parameters.
FUNCTION_CHOICES: Dict[str, Tuple[str, Dict[str, float]]] = {
    "gauss": ("gauss", {}),
    "exp": ("exp", {}),
    "rational": ("rational", {"z": 2.0}),
    "gauss_balanced": ("gauss_balanced", {}),
}


class UnknownIdentityError(KeyError):
    """No identity record or family under that name."""


@dataclass(frozen=True)
class Domain:
    """Parameter grid plus the validity strips it must stay inside."""
    axes: Tuple[Tuple[str, Tuple[Any, ...]], ...] = ()
    strips: Tuple[Tuple[str, float, float], ...] = ()
    constraint: Optional[Callable[[Point], bool]] = None
    points: Tuple[Tuple[Tuple[str, Any], ...], ...] = ()
    margin: float = STRIP_MARGIN

    def candidates(self) -> List[Point]:
        if self.points:
            return [dict(p) for p in self.points]
        names = [name for name, _ in self.axes]
        values = [vals for _, vals in self.axes]
        return [dict(zip(names, combo)) for combo in itertools.product(*values)]

    def grid(self) -> List[Point]:
        """Default grid: candidates filtered by strips and constraint."""
        return [p for p in self.candidates() if self.contains(p)]

    def contains(self, point: Point) -> bool:
        for name, _ in self.axes:
            if name not in point:
                return False
        for name, low, high in self.strips:
            value = point.get(name)
            if value is None or not (low + self.margin <= value <= high - self.margin):
                return False
        if self.constraint is not None and not self.constraint(point):
            return False
        return True


@dataclass(frozen=True)
class IdentityRecord:
    """One identity: left side, right side, domain, pass threshold class."""
    id: str
    family: str
    anchor: str
    lhs: Pipeline
    rhs: Pipeline
    domain: Domain
    tol_class: TolClass
    corrections: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "family": self.family,
            "anchor": self.anchor,
            "tol_class": self.tol_class.value,
            "corrections": list(self.corrections),
        }


class EvaluationContext:
    """Tolerances and shared transform images for one parameter point."""

    def __init__(self, profile: ToleranceProfile):
        self.profile = profile
        self.smooth = profile.smooth
        self.oscillatory = profile.oscillatory
        self._memo: Dict[Tuple, Any] = {}

    def inner(self, outer: Tolerance) -> Tolerance:
        return self.profile.inner(outer)

    def memo(self, key: Tuple, compute: Callable[[], Any]) -> Any:
        if key not in self._memo:
            self._memo[key] = compute()
        return self._memo[key]


# ---------------------------------------------------------------------------
# building blocks
# ---------------------------------------------------------------------------

def _function(label: str) -> Function1D:
    name, params = FUNCTION_CHOICES[label]
    return corpus.get(name, **params)


def _pair(point: Point) -> Tuple[str, str]:
    f, g = point["pair"].split("-")
    return f, g


def _closed(value: float, *parts: specfun.SpecialValue) -> IntegrationResult:
    """Closed-form value with relative errors of its special-function factors summed."""
    rel = 4.0 * EPS + sum(p.rel_err_bound for p in parts)
    return IntegrationResult.exact(value, abs(value) * rel)


def _l2_image(ctx: EvaluationContext, label: str, outer: Tolerance) -> Function1D:
    """u -> L2{f; u}; finite at 0, ~ u^-2 at infinity for the catalog's f."""
    return ctx.memo(("L2", label, outer), lambda: image(
        TransformKind.L2, _function(label), ctx.inner(outer),
        decay=Decay.algebraic(2.0), singularity=REGULAR, name=f"L2[{label}]"))


def _l2_reciprocal_image(ctx: EvaluationContext, label: str, outer: Tolerance) -> Function1D:
    """y -> L2{f; 1/(2y)}; vanishes like y^2 at 0, tends to int x f at infinity."""
    return ctx.memo(("L2-reciprocal", label, outer), lambda: image(
        TransformKind.L2, _function(label), ctx.inner(outer),
        decay=Decay.algebraic(0.0), singularity=Singularity(-2.0),
        argument=lambda y: 0.5 / y, name=f"L2[{label}](1/2y)"))


def _glasser_x_image(ctx: EvaluationContext, label: str, outer: Tolerance) -> Function1D:
    """u -> G{x f(x); u}; ~ u^-1 at infinity unless f has a zero first moment."""
    p = 3.0 if label == "gauss_balanced" else 1.0
    return ctx.memo(("Gx", label, outer), lambda: image(
        TransformKind.GLASSER, times_power(_function(label), 1.0), ctx.inner(outer),
        decay=Decay.algebraic(p), singularity=REGULAR, name=f"G[x {label}]"))


def _integral(f: Function1D, tol: Tolerance) -> IntegrationResult:
    return integrate_semi_infinite(f, tol)


# ---------------------------------------------------------------------------
# L2 iterated against Glasser
# ---------------------------------------------------------------------------

def _lemma1_lhs(point: Point, ctx: EvaluationContext) -> IntegrationResult:
    inner = times_power(_l2_image(ctx, point["f"], ctx.smooth), -1.0)
    return l2(inner, point["y"], ctx.smooth)


def _lemma1_rhs(point: Point, ctx: EvaluationContext) -> IntegrationResult:
    return 0.5 * SQRT_PI * glasser(times_power(_function(point["f"]), 1.0), point["y"], ctx.smooth)


def _gl_power_lhs(point: Point, ctx: EvaluationContext) -> IntegrationResult:
    f = times_power(corpus.get("power", mu=point["mu"]), 1.0)
    return glasser(f, point["y"], ctx.smooth)


def _gl_power_rhs(point: Point, ctx: EvaluationContext) -> IntegrationResult:
    mu, y = point["mu"], point["y"]
    b = specfun.beta(mu, 0.5 - 0.5 * mu)
    return _closed(2.0 ** -mu * b.value * y ** (mu - 1.0), b)


def _gl_jnu1_lhs(point: Point, ctx: EvaluationContext) -> IntegrationResult:
    nu = point["nu"]
    f = times_power(corpus.get("bessel_j", nu=nu, z=point["z"]), nu + 1.0)
    return glasser(f, point["y"], ctx.oscillatory)


def _gl_jnu1_rhs(point: Point, ctx: EvaluationContext) -> IntegrationResult:
    nu, y, z = point["nu"], point["y"], point["z"]
    k = specfun.bessel_k(nu + 0.5, z * y)
    return _closed(math.sqrt(2.0 / (math.pi * z)) * y ** (nu + 0.5) * k.value, k)


def _gl_jnu_lhs(point: Point, ctx: EvaluationContext) -> IntegrationResult:
    f = corpus.get("bessel_j", nu=point["nu"], z=point["z"])
    return glasser(f, point["y"], ctx.oscillatory)


def _gl_jnu_rhs(point: Point, ctx: EvaluationContext) -> IntegrationResult:
    ik = specfun.bessel_ik_product(0.5 * point["nu"], 0.5 * point["z"] * point["y"])
    return _closed(ik.value, ik)


# ---------------------------------------------------------------------------
# exchange relations between L2 and Glasser
# ---------------------------------------------------------------------------

def _pg_l2_l2(point: Point, ctx: EvaluationContext) -> IntegrationResult:
    """int L2{f; y} L2{g; y} dy."""
    f, g = _pair(point)
    tol = ctx.smooth
    integrand = product(_l2_image(ctx, f, tol), _l2_image(ctx, g, tol),
                        Decay.algebraic(4.0), REGULAR, name=f"L2[{f}]*L2[{g}]")
    return ctx.memo(("pg-l2", point["pair"]), lambda: _integral(integrand, tol))


def _pg_glasser(outer: str, inner: str, ctx: EvaluationContext) -> IntegrationResult:
    """int x a(x) G{u b(u); x} dx."""
    tol = ctx.smooth
    a = times_power(_function(outer), 1.0)
    decay = a.decay.times_power(-1.0)
    integrand = product(a, _glasser_x_image(ctx, inner, tol), decay, REGULAR,
                        name=f"x {outer}*G[u {inner}]")
    return _integral(integrand, tol)


def _pg_a(point: Point, ctx: EvaluationContext) -> IntegrationResult:
    f, g = _pair(point)
    return ctx.memo(("pg-a", point["pair"]), lambda: _pg_glasser(f, g, ctx))


def _pg_b(point: Point, ctx: EvaluationContext) -> IntegrationResult:
    f, g = _pair(point)
    return ctx.memo(("pg-b", point["pair"]), lambda: _pg_glasser(g, f, ctx))


def _pg_1_rhs(point: Point, ctx: EvaluationContext) -> IntegrationResult:
    return 0.5 * SQRT_PI * _pg_a(point, ctx)


def _pg_2_rhs(point: Point, ctx: EvaluationContext) -> IntegrationResult:
    return 0.5 * SQRT_PI * _pg_b(point, ctx)


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------

def _moment_l2(point: Point, ctx: EvaluationContext) -> IntegrationResult:
    """int y^-mu L2{f; y} dy."""
    mu = point["mu"]
    integrand = times_power(_l2_image(ctx, point["f"], ctx.smooth), -mu)
    return ctx.memo(("moment-l2", mu), lambda: _integral(integrand, ctx.smooth))


def _moment_glasser(point: Point, ctx: EvaluationContext) -> IntegrationResult:
    """int u^(mu-1) G{x f; u} du."""
    mu = point["mu"]
    integrand = times_power(_glasser_x_image(ctx, point["f"], ctx.smooth), mu - 1.0)
    return ctx.memo(("moment-g", mu), lambda: _integral(integrand, ctx.smooth))


def _moment_power(point: Point, ctx: EvaluationContext) -> IntegrationResult:
    """int x^mu f dx."""
    return _integral(times_power(_function(point["f"]), point["mu"]), ctx.smooth)


def _moment_1_rhs(point: Point, ctx: EvaluationContext) -> IntegrationResult:
    g = specfun.gamma(0.5 - 0.5 * point["mu"])
    return (0.5 * g.value) * _moment_power(point, ctx)


def _moment_2_rhs(point: Point, ctx: EvaluationContext) -> IntegrationResult:
    g = specfun.gamma(0.5 * point["mu"])
    return (SQRT_PI / g.value) * _moment_glasser(point, ctx)


def _moment_3_rhs(point: Point, ctx: EvaluationContext) -> IntegrationResult:
    mu = point["mu"]
    b = specfun.beta(0.5 * mu, 0.5 - 0.5 * mu)
    return (0.5 * b.value) * _moment_power(point, ctx)


# ---------------------------------------------------------------------------
# K / Hankel / Fourier forms of the L2 iterate with argument 1/(2y)
# ---------------------------------------------------------------------------

def _khg_lambda(point: Point, ctx: EvaluationContext, nu: float) -> IntegrationResult:
    """L2{y^(2nu-1) L2{f; 1/(2y)}; z}."""
    def compute():
        inner = times_power(_l2_reciprocal_image(ctx, point["f"], ctx.smooth), 2.0 * nu - 1.0)
        return l2(inner, point["z"], ctx.smooth)
    return ctx.memo(("khg-lambda", nu), compute)


def _khg_k(point: Point, ctx: EvaluationContext, nu: float) -> IntegrationResult:
    """K_(nu+1/2){x^(nu+1) f; z}."""
    def compute():
        f = times_power(_function(point["f"]), nu + 1.0)
        return k_transform(nu + 0.5, f, point["z"], ctx.smooth)
    return ctx.memo(("khg-k", nu), compute)


def _khg_hankel(point: Point, ctx: EvaluationContext, nu: float) -> IntegrationResult:
    """H_nu{u^(nu+1/2) G{x f; u}; z}."""
    def compute():
        outer = ctx.oscillatory
        envelope = times_power(_glasser_x_image(ctx, point["f"], outer), nu + 0.5)
        return hankel(nu, envelope, point["z"], outer)
    return ctx.memo(("khg-h", nu), compute)


def _khg_1_lhs(point, ctx):
    return _khg_lambda(point, ctx, point["nu"])


def _khg_1_rhs(point, ctx):
    nu, z = point["nu"], point["z"]
    return (2.0 ** (-nu - 0.5) * z ** (-nu - 1.0)) * _khg_k(point, ctx, nu)


def _khg_2_rhs(point, ctx):
    nu, z = point["nu"], point["z"]
    return (SQRT_PI / 2.0 ** (nu + 1.0) * z ** (-nu - 0.5)) * _khg_hankel(point, ctx, nu)


def _khg_3_lhs(point, ctx):
    return _khg_k(point, ctx, point["nu"])


def _khg_3_rhs(point, ctx):
    return math.sqrt(0.5 * math.pi * point["z"]) * _khg_hankel(point, ctx, point["nu"])


def _remark_lhs(nu: float) -> Pipeline:
    return lambda point, ctx: _khg_lambda(point, ctx, nu)


def _nu0_1_rhs(point, ctx):
    z = point["z"]
    f = times_power(_function(point["f"]), 1.0)
    return (SQRT_PI / (2.0 * z)) * ctx.memo(("laplace-xf",), lambda: laplace(f, z, ctx.smooth))


def _nu0_laplace(point, ctx):
    f = times_power(_function(point["f"]), 1.0)
    return ctx.memo(("laplace-xf",), lambda: laplace(f, point["z"], ctx.smooth))


def _nu0_2_rhs(point, ctx):
    z = point["z"]
    return (0.5 * math.sqrt(math.pi / z)) * _khg_hankel(point, ctx, 0.0)


def _nu0_3_rhs(point, ctx):
    return math.sqrt(point["z"]) * _khg_hankel(point, ctx, 0.0)


def _numh_k0(point, ctx):
    f = times_power(_function(point["f"]), 0.5)
    return ctx.memo(("k0",), lambda: k_transform(0.0, f, point["z"], ctx.smooth))


def _numh_fourier(point, ctx):
    outer = ctx.oscillatory
    g = _glasser_x_image(ctx, point["f"], outer)
    return ctx.memo(("fc",), lambda: fourier_cos(g, point["z"], outer))


def _numh_1_rhs(point, ctx):
    return (1.0 / math.sqrt(point["z"])) * _numh_k0(point, ctx)


def _numh_2_rhs(point, ctx):
    return _numh_fourier(point, ctx)


def _numh_3_rhs(point, ctx):
    return math.sqrt(point["z"]) * _numh_fourier(point, ctx)


def _nuph_k1(point, ctx):
    f = times_power(_function(point["f"]), 1.5)
    return ctx.memo(("k1",), lambda: k_transform(1.0, f, point["z"], ctx.smooth))


def _nuph_fourier(point, ctx):
    outer = ctx.oscillatory
    g = times_power(_glasser_x_image(ctx, point["f"], outer), 1.0)
    return ctx.memo(("fs",), lambda: fourier_sin(g, point["z"], outer))


def _nuph_1_rhs(point, ctx):
    return (0.5 * point["z"] ** -1.5) * _nuph_k1(point, ctx)


def _nuph_2_rhs(point, ctx):
    return (0.5 / point["z"]) * _nuph_fourier(point, ctx)


def _nuph_3_rhs(point, ctx):
    return math.sqrt(point["z"]) * _nuph_fourier(point, ctx)


# ---------------------------------------------------------------------------
# I K products against a Hankel image
# ---------------------------------------------------------------------------

def _ik_weighted_l2(point, ctx):
    """int (1/y) exp(-a/y^2) I_(nu/2)(a/y^2) L2{f; y} dy, a = z^2/8."""
    nu, z = point["nu"], point["z"]
    a = z * z / 8.0
    half = 0.5 * nu
    weight = Function1D(
        eval=lambda y: specfun.ive_kernel(half, a / np.square(y)) / y,
        decay=Decay.algebraic(1.0 + nu),
        name=f"ive({half:g}, {a:g}/y^2)/y",
    )
    integrand = product(weight, _l2_image(ctx, point["f"], ctx.smooth),
                        Decay.algebraic(3.0 + nu), REGULAR, name="IK-weight*L2[f]")
    return _integral(integrand, ctx.smooth)


def _ik_product(point, ctx):
    """int x f(x) I_(nu/2)(zx/2) K_(nu/2)(zx/2) dx."""
    nu, z = point["nu"], point["z"]
    f = _function(point["f"])
    integrand = Function1D(
        eval=lambda x: x * f.eval(x) * specfun.ik_product_kernel(0.5 * nu, 0.5 * z * x),
        decay=f.decay,
        name="x f I K",
    )
    return ctx.memo(("ik-product",), lambda: _integral(integrand, ctx.smooth))


def _ik_hankel(point, ctx):
    """z^(-1/2) H_nu{u^(-1/2) G{x f; u}; z}."""
    nu, z = point["nu"], point["z"]
    outer = ctx.oscillatory
    envelope = times_power(_glasser_x_image(ctx, point["f"], outer), -0.5)
    result = ctx.memo(("ik-h",), lambda: hankel(nu, envelope, z, outer))
    return (1.0 / math.sqrt(z)) * result


# ---------------------------------------------------------------------------
# E21 against Widder
# ---------------------------------------------------------------------------

def _e21_widder_lhs(point, ctx):
    inner = times_power(_l2_image(ctx, point["f"], ctx.smooth), -1.0)
    return e21_transform(inner, point["z"], ctx.smooth)


def _e21_widder_rhs(point, ctx):
    return SQRT_PI * widder(_glasser_x_image(ctx, point["f"], ctx.smooth), point["z"], ctx.smooth)


# ---------------------------------------------------------------------------
# worked examples
# ---------------------------------------------------------------------------

def _arcsin_form(y: float, z: float) -> IntegrationResult:
    """sqrt(pi) (pi - 2 asin(y/z)) / (2 sqrt(z^2 - y^2))."""
    value = SQRT_PI * (math.pi - 2.0 * math.asin(y / z)) / (2.0 * math.sqrt(z * z - y * y))
    return IntegrationResult.exact(value, 16.0 * EPS * abs(value))


def _arcsin_sqrt_form(y: float, z: float) -> IntegrationResult:
    """sqrt(pi) (pi - 2 asin(sqrt(y/z))) / sqrt(z - y)."""
    value = SQRT_PI * (math.pi - 2.0 * math.asin(math.sqrt(y / z))) / math.sqrt(z - y)
    return IntegrationResult.exact(value, 16.0 * EPS * abs(value))


def _ex1_a_lhs(point, ctx):
    y, z = point["y"], point["z"]
    z2 = z * z
    g = Function1D(
        eval=lambda u: specfun.e1_scaled_kernel(z2 * np.square(u)) / u,
        decay=Decay.algebraic(3.0),
        singularity=Singularity(1.0),
        name=f"exp({z2:g}u^2)E1({z2:g}u^2)/u",
    )
    return l2(g, y, ctx.smooth)


def _ex1_b_lhs(point, ctx):
    y, z = point["y"], point["z"]
    g = Function1D(
        eval=lambda u: specfun.e1_scaled_kernel(z * u) / np.sqrt(u),
        decay=Decay.algebraic(1.5),
        singularity=Singularity(0.5),
        name=f"exp({z:g}u)E1({z:g}u)/sqrt(u)",
    )
    return laplace(g, y, ctx.smooth)


def _ex1_c_lhs(point, ctx):
    y, z = point["y"], point["z"]
    y2 = y * y
    g = Function1D(
        eval=lambda u: np.exp(-y2 * np.square(u)) / u,
        decay=Decay.gaussian(),
        singularity=Singularity(1.0),
        name=f"exp(-{y2:g}u^2)/u",
    )
    return e21_transform(g, z, ctx.smooth)


def _ex1_d_lhs(point, ctx):
    y, z = point["y"], point["z"]
    g = Function1D(
        eval=lambda u: np.exp(-y * u) / np.sqrt(u),
        decay=Decay.exponential(),
        singularity=Singularity(0.5),
        name=f"exp(-{y:g}u)/sqrt(u)",
    )
    return e1_transform(g, z, ctx.smooth)


def _ex1_squared_rhs(point, ctx):
    return _arcsin_form(point["y"], point["z"])


def _ex1_linear_rhs(point, ctx):
    return _arcsin_sqrt_form(point["y"], point["z"])


def _ex2_lhs(point, ctx):
    y, z = point["y"], point["z"]
    half_z = 0.5 * z
    g = Function1D(
        eval=lambda u: specfun.dawson_kernel(half_z / u) / np.square(u),
        decay=Decay.algebraic(3.0),
        singularity=Singularity(1.0),
        name=f"daw({half_z:g}/u)/u^2",
    )
    return l2(g, y, ctx.smooth)


def _ex2_rhs(point, ctx):
    d = specfun.i0_minus_l0(point["z"] * point["y"])
    return _closed(math.pi ** 1.5 / 4.0 * d.value, d)


def _rem_e2_lhs(point, ctx):
    y, z = point["y"], point["z"]
    a = 0.25 * z * z
    g = Function1D(
        eval=lambda u: specfun.dawson_kernel(np.sqrt(a / u)) / u,
        decay=Decay.algebraic(1.5),
        singularity=Singularity(0.5),
        name=f"daw(sqrt({a:g}/u))/u",
    )
    return laplace(g, y, ctx.smooth)


def _rem_e2_rhs(point, ctx):
    a = 0.25 * point["z"] ** 2
    d = specfun.i0_minus_l0(2.0 * math.sqrt(a * point["y"]))
    return _closed(math.pi ** 1.5 / 2.0 * d.value, d)


def _ex3_gamma_ratio(mu: float, nu: float, z: float) -> Tuple[float, List[specfun.SpecialValue]]:
    """Gamma(1/2 - mu/2) Gamma(nu + mu/2) / (sqrt(pi) z^mu Gamma(nu - mu/2 + 1))."""
    a = specfun.gamma(0.5 - 0.5 * mu)
    b = specfun.gamma(nu + 0.5 * mu)
    c = specfun.gamma(nu - 0.5 * mu + 1.0)
    return a.value * b.value / (SQRT_PI * z ** mu * c.value), [a, b, c]


def _ex3_a_lhs(point, ctx):
    mu, nu, z = point["mu"], point["nu"], point["z"]
    c = 0.5 * z * z
    f = Function1D(
        eval=lambda y: np.power(y, -mu - 1.0) * specfun.ive_kernel(nu, c / np.square(y)),
        decay=Decay.algebraic(1.0 + mu + 2.0 * nu),
        singularity=Singularity(mu),
        name=f"y^{-mu - 1:g} ive({nu:g}, {c:g}/y^2)",
    )
    return _integral(f, ctx.smooth)


def _ex3_a_rhs(point, ctx):
    value, parts = _ex3_gamma_ratio(point["mu"], point["nu"], point["z"])
    return _closed(0.5 * value, *parts)


def _ex3_b_lhs(point, ctx):
    mu, nu, z = point["mu"], point["nu"], point["z"]
    f = Function1D(
        eval=lambda u: np.power(u, mu - 1.0) * specfun.ik_product_kernel(nu, z * u),
        decay=Decay.algebraic(2.0 - mu),
        singularity=Singularity(1.0 - mu),
        name=f"u^{mu - 1:g} I K({nu:g}, {z:g}u)",
    )
    return _integral(f, ctx.smooth)


def _ex3_b_rhs(point, ctx):
    mu = point["mu"]
    value, parts = _ex3_gamma_ratio(mu, point["nu"], point["z"])
    g = specfun.gamma(0.5 * mu)
    return _closed(0.25 * g.value * value, g, *parts)


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

_EXPONENT_FIX = ("inner kernel taken as exp(-(x^2 + y^2) u^2) after exchanging the order "
                 "of integration; the sign-flipped exponent diverges")
_SCALED_E1_VARIABLE = ("L2{1/(x^2 + z^2); u} = exp(z^2 u^2) E1(z^2 u^2) / 2 is written in the "
                       "transform variable u")
_ARCSIN_HALF = ("right side is sqrt(pi)(pi - 2 asin(y/z)) / (2 sqrt(z^2 - y^2)); the commonly "
                "quoted form drops the factor 1/2 carried by G{x/(x^2 + z^2); y}")
_I_ARGUMENT = ("Bessel I factor evaluated at +z^2/(8y^2); a negative argument makes "
               "I_(nu/2) complex for non-integer order")
_DAWSON_CONSTANT = "constant is pi^(3/2)/2, following from the Dawson form with z = 2 sqrt(a)"

FAMILY_ANCHORS: Dict[str, str] = {
    "LEMMA1": "L2{(1/u) L2{f; u}; y} = (sqrt(pi)/2) G{x f(x); y}",
    "GL-POWER": "G{x^(mu-1); y} = 2^-mu B(mu, 1/2 - mu/2) y^(mu-1), 0 < mu < 1",
    "GL-JNU1": "G{x^(nu+1) J_nu(zx); y} = sqrt(2/(pi z)) y^(nu+1/2) K_(nu+1/2)(zy), -1 < nu < 1/2",
    "GL-JNU": "G{J_nu(zx); y} = I_(nu/2)(zy/2) K_(nu/2)(zy/2), nu > -1",
    "PG": "int L2{f} L2{g} dy = (sqrt(pi)/2) int x f G{u g; x} dx = (sqrt(pi)/2) int u g G{x f; u} du",
    "MOMENT": "int y^-mu L2{f; y} dy against int x^mu f dx and int u^(mu-1) G{x f; u} du",
    "KHG": "L2{y^(2nu-1) L2{f; 1/(2y)}; z} against K_(nu+1/2){x^(nu+1) f} and H_nu{u^(nu+1/2) G{x f}}",
    "REM-NU0": "nu = 0: L2 iterate against L{x f; z} and H_0{sqrt(u) G{x f}}",
    "REM-NUMH": "nu = -1/2: L2 iterate against K_0{sqrt(x) f} and F_C{G{x f}}",
    "REM-NUPH": "nu = 1/2: L2 iterate against K_1{x^(3/2) f} and F_S{u G{x f}}",
    "IK-HANKEL": "int (1/y) e^(-a) I_(nu/2)(a) L2{f; y} dy, a = z^2/(8y^2), against x f I K and H_nu{u^(-1/2) G{x f}}",
    "E21-WIDDER": "E21{(1/y) L2{f; y}; z} = sqrt(pi) P{G{x f; u}; z}",
    "EX1": "L2, Laplace, E21 and E1 images of exp(z^2 u^2) E1(z^2 u^2)-type functions in arcsin form, z > y",
    "EX2-DAW": "L2{u^-2 daw(z/(2u)); y} = (pi^(3/2)/4) [I0(zy) - L0(zy)]",
    "REM-E2": "L{u^-1 daw(sqrt(a/u)); y} = (pi^(3/2)/2) [I0(2 sqrt(ay)) - L0(2 sqrt(ay))]",
    "EX3": "int y^(-mu-1) e^(-c) I_nu(c) dy, c = z^2/(2y^2), and int u^(mu-1) I_nu K_nu(zu) du as gamma ratios",
}


def _build_catalog() -> Tuple[IdentityRecord, ...]:
    smooth, oscillatory, near = TolClass.SMOOTH, TolClass.OSCILLATORY, TolClass.NEAR_SINGULAR

    lemma = Domain(axes=(("f", ("gauss", "rational")), ("y", YZ_GRID)))
    power = Domain(axes=(("mu", MU_GRID), ("y", YZ_GRID)), strips=(("mu", 0.0, 1.0),))
    jnu1 = Domain(axes=(("nu", NU_GRID), ("y", YZ_GRID), ("z", (1.0, 2.0))),
                  strips=(("nu", -1.0, 0.5),))
    jnu = Domain(axes=(("nu", NU_GRID), ("y", YZ_GRID), ("z", (1.0, 2.0))),
                 strips=(("nu", -1.0, math.inf),))
    pairs = Domain(axes=(("pair", ("gauss-gauss", "exp-gauss", "rational-exp")),))
    moment = Domain(axes=(("f", ("exp",)), ("mu", MU_GRID)), strips=(("mu", 0.0, 1.0),))
    khg = Domain(axes=(("f", ("gauss",)), ("nu", NU_GRID), ("z", YZ_GRID)),
                 strips=(("nu", -1.0, 0.5),))
    remark = Domain(axes=(("f", ("gauss",)), ("z", YZ_GRID)))
    balanced = Domain(axes=(("f", ("gauss_balanced",)), ("z", YZ_GRID)))
    ik = Domain(axes=(("f", ("gauss",)), ("nu", NU_GRID), ("z", YZ_GRID)),
                strips=(("nu", -1.0, math.inf),))
    e21w = Domain(axes=(("f", ("gauss",)), ("z", YZ_GRID)))
    ex1 = Domain(
        axes=(("y", ()), ("z", ())),
        points=tuple((("y", y), ("z", z)) for y, z in
                     ((1.0, 2.0), (1.0, 4.0), (0.5, 1.0), (0.5, 2.0), (0.9, 1.0))),
        constraint=lambda p: p["z"] > p["y"] and p["y"] / p["z"] <= 0.9,
    )
    ex2 = Domain(axes=(("y", (0.5, 1.0)), ("z", (1.0, 2.0))))
    ex3 = Domain(axes=(("mu", (0.25, 0.5)), ("nu", (0.25, 0.5)), ("z", (1.0, 2.0))),
                 strips=(("mu", 0.0, 1.0),),
                 constraint=lambda p: p["mu"] > max(0.0, -2.0 * p["nu"]) + STRIP_MARGIN)

    def record(id, family, lhs, rhs, domain, tol_class, anchor=None, corrections=()):
        return IdentityRecord(id, family, anchor or FAMILY_ANCHORS[family], lhs, rhs,
                              domain, tol_class, tuple(corrections))

    return (
        record("LEMMA1", "LEMMA1", _lemma1_lhs, _lemma1_rhs, lemma, oscillatory,
               corrections=(_EXPONENT_FIX,)),
        record("GL-POWER", "GL-POWER", _gl_power_lhs, _gl_power_rhs, power, smooth),
        record("GL-JNU1", "GL-JNU1", _gl_jnu1_lhs, _gl_jnu1_rhs, jnu1, oscillatory),
        record("GL-JNU", "GL-JNU", _gl_jnu_lhs, _gl_jnu_rhs, jnu, oscillatory),

        record("PG-1", "PG", _pg_l2_l2, _pg_1_rhs, pairs, smooth,
               "int L2{f; y} L2{g; y} dy = (sqrt(pi)/2) int x f(x) G{u g(u); x} dx"),
        record("PG-2", "PG", _pg_l2_l2, _pg_2_rhs, pairs, smooth,
               "int L2{f; y} L2{g; y} dy = (sqrt(pi)/2) int u g(u) G{x f(x); u} du"),
        record("PG-3", "PG", _pg_a, _pg_b, pairs, smooth,
               "int x f(x) G{u g(u); x} dx = int u g(u) G{x f(x); u} du"),

        record("MOMENT-1", "MOMENT", _moment_l2, _moment_1_rhs, moment, smooth,
               "int y^-mu L2{f; y} dy = (1/2) Gamma(1/2 - mu/2) int x^mu f(x) dx"),
        record("MOMENT-2", "MOMENT", _moment_l2, _moment_2_rhs, moment, smooth,
               "int y^-mu L2{f; y} dy = (sqrt(pi)/Gamma(mu/2)) int u^(mu-1) G{x f; u} du"),
        record("MOMENT-3", "MOMENT", _moment_glasser, _moment_3_rhs, moment, smooth,
               "int u^(mu-1) G{x f; u} du = (1/2) B(mu/2, 1/2 - mu/2) int x^mu f(x) dx"),

        record("KHG-1", "KHG", _khg_1_lhs, _khg_1_rhs, khg, smooth,
               "L2{y^(2nu-1) L2{f; 1/(2y)}; z} = 2^(-nu-1/2) z^(-nu-1) K_(nu+1/2){x^(nu+1) f; z}"),
        record("KHG-2", "KHG", _khg_1_lhs, _khg_2_rhs, khg, oscillatory,
               "L2{y^(2nu-1) L2{f; 1/(2y)}; z} = sqrt(pi) 2^(-nu-1) z^(-nu-1/2) H_nu{u^(nu+1/2) G{x f; u}; z}"),
        record("KHG-3", "KHG", _khg_3_lhs, _khg_3_rhs, khg, oscillatory,
               "K_(nu+1/2){x^(nu+1) f; z} = sqrt(pi z/2) H_nu{u^(nu+1/2) G{x f; u}; z}"),

        record("REM-NU0-1", "REM-NU0", _remark_lhs(0.0), _nu0_1_rhs, remark, smooth,
               "L2{(1/y) L2{f; 1/(2y)}; z} = (sqrt(pi)/(2z)) L{x f; z}"),
        record("REM-NU0-2", "REM-NU0", _remark_lhs(0.0), _nu0_2_rhs, remark, oscillatory,
               "L2{(1/y) L2{f; 1/(2y)}; z} = (1/2) sqrt(pi/z) H_0{sqrt(u) G{x f; u}; z}"),
        record("REM-NU0-3", "REM-NU0", _nu0_laplace, _nu0_3_rhs, remark, oscillatory,
               "L{x f; z} = sqrt(z) H_0{sqrt(u) G{x f; u}; z}"),

        record("REM-NUMH-1", "REM-NUMH", _remark_lhs(-0.5), _numh_1_rhs, remark, smooth,
               "L2{y^-2 L2{f; 1/(2y)}; z} = z^(-1/2) K_0{sqrt(x) f; z}"),
        record("REM-NUMH-2", "REM-NUMH", _remark_lhs(-0.5), _numh_2_rhs, remark, oscillatory,
               "L2{y^-2 L2{f; 1/(2y)}; z} = F_C{G{x f; u}; z}"),
        record("REM-NUMH-3", "REM-NUMH", _numh_k0, _numh_3_rhs, remark, oscillatory,
               "K_0{sqrt(x) f; z} = sqrt(z) F_C{G{x f; u}; z}"),

        record("REM-NUPH-1", "REM-NUPH", _remark_lhs(0.5), _nuph_1_rhs, balanced, smooth,
               "L2{L2{f; 1/(2y)}; z} = (1/(2 z^(3/2))) K_1{x^(3/2) f; z}"),
        record("REM-NUPH-2", "REM-NUPH", _remark_lhs(0.5), _nuph_2_rhs, balanced, oscillatory,
               "L2{L2{f; 1/(2y)}; z} = (1/(2z)) F_S{u G{x f; u}; z}"),
        record("REM-NUPH-3", "REM-NUPH", _nuph_k1, _nuph_3_rhs, balanced, oscillatory,
               "K_1{x^(3/2) f; z} = sqrt(z) F_S{u G{x f; u}; z}"),

        record("IK-HANKEL-1", "IK-HANKEL", _ik_weighted_l2, _ik_product, ik, smooth,
               "int (1/y) e^(-a) I_(nu/2)(a) L2{f; y} dy = int x f I_(nu/2)(zx/2) K_(nu/2)(zx/2) dx",
               corrections=(_I_ARGUMENT,)),
        record("IK-HANKEL-2", "IK-HANKEL", _ik_weighted_l2, _ik_hankel, ik, oscillatory,
               "int (1/y) e^(-a) I_(nu/2)(a) L2{f; y} dy = z^(-1/2) H_nu{u^(-1/2) G{x f; u}; z}",
               corrections=(_I_ARGUMENT,)),
        record("IK-HANKEL-3", "IK-HANKEL", _ik_product, _ik_hankel, ik, oscillatory,
               "int x f I_(nu/2)(zx/2) K_(nu/2)(zx/2) dx = z^(-1/2) H_nu{u^(-1/2) G{x f; u}; z}"),

        record("E21-WIDDER", "E21-WIDDER", _e21_widder_lhs, _e21_widder_rhs, e21w, smooth),

        record("EX1-A", "EX1", _ex1_a_lhs, _ex1_squared_rhs, ex1, near,
               "L2{(1/u) exp(z^2 u^2) E1(z^2 u^2); y} = sqrt(pi)(pi - 2 asin(y/z)) / (2 sqrt(z^2 - y^2))",
               corrections=(_ARCSIN_HALF, _SCALED_E1_VARIABLE)),
        record("EX1-B", "EX1", _ex1_b_lhs, _ex1_linear_rhs, ex1, near,
               "L{u^(-1/2) exp(zu) E1(zu); y} = sqrt(pi)(pi - 2 asin(sqrt(y/z))) / sqrt(z - y)"),
        record("EX1-C", "EX1", _ex1_c_lhs, _ex1_squared_rhs, ex1, near,
               "E21{(1/u) exp(-y^2 u^2); z} = sqrt(pi)(pi - 2 asin(y/z)) / (2 sqrt(z^2 - y^2))",
               corrections=(_ARCSIN_HALF,)),
        record("EX1-D", "EX1", _ex1_d_lhs, _ex1_linear_rhs, ex1, near,
               "E1{u^(-1/2) exp(-yu); z} = sqrt(pi)(pi - 2 asin(sqrt(y/z))) / sqrt(z - y)"),

        record("EX2-DAW", "EX2-DAW", _ex2_lhs, _ex2_rhs, ex2, smooth),
        record("REM-E2", "REM-E2", _rem_e2_lhs, _rem_e2_rhs, ex2, smooth,
               corrections=(_DAWSON_CONSTANT,)),

        record("EX3-A", "EX3", _ex3_a_lhs, _ex3_a_rhs, ex3, smooth,
               "int y^(-mu-1) e^(-c) I_nu(c) dy = Gamma(1/2 - mu/2) Gamma(nu + mu/2) / "
               "(2 sqrt(pi) z^mu Gamma(nu - mu/2 + 1)), c = z^2/(2y^2)"),
        record("EX3-B", "EX3", _ex3_b_lhs, _ex3_b_rhs, ex3, smooth,
               "int u^(mu-1) I_nu(zu) K_nu(zu) du = Gamma(mu/2) Gamma(1/2 - mu/2) Gamma(nu + mu/2) / "
               "(4 sqrt(pi) z^mu Gamma(nu - mu/2 + 1))"),
    )


@lru_cache(maxsize=1)
def catalog() -> Tuple[IdentityRecord, ...]:
    """Every identity record, in catalog order."""
    return _build_catalog()


def families() -> List[str]:
    seen: List[str] = []
    for r in catalog():
        if r.family not in seen:
            seen.append(r.family)
    return seen


def get(identity_id: str) -> IdentityRecord:
    for r in catalog():
        if r.id == identity_id:
            return r
    raise UnknownIdentityError(f"unknown identity '{identity_id}'")


def select(ids: Optional[Iterable[str]] = None) -> List[IdentityRecord]:
    """Records by id or family name, in catalog order; None selects everything."""
    if not ids:
        return list(catalog())
    wanted = set()
    for name in ids:
        members = [r.id for r in catalog() if r.id == name or r.family == name]
        if not members:
            raise UnknownIdentityError(f"unknown identity or family '{name}'")
        wanted.update(members)
    return [r for r in catalog() if r.id in wanted]


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def _failed(record: IdentityRecord, point: Point, threshold: float, reason: str) -> PointResult:
    nan = math.nan
    return PointResult(record.id, dict(point), nan, nan, nan, nan, nan, nan, threshold, False, reason)


def evaluate_point(record: IdentityRecord, point: Point, ctx: EvaluationContext,
                   threshold: Optional[float] = None) -> PointResult:
    """Evaluate both sides at one point and judge the residual."""
    if threshold is None:
        threshold = ctx.profile.threshold(record.tol_class)
    try:
        lhs = record.lhs(point, ctx)
        rhs = record.rhs(point, ctx)
    except (ValueError, ArithmeticError, RuntimeError) as e:
        logger.warning("%s at %s: %s", record.id, point, e)
        return _failed(record, point, threshold, f"evaluation error: {e}")

    floor = ctx.profile.residual_floor
    scale = max(abs(rhs.value), floor)
    abs_residual = abs(lhs.value - rhs.value)
    rel_residual = abs_residual / scale
    passed = rel_residual <= threshold or (abs(rhs.value) < floor and abs_residual <= threshold)

    notes = []
    for side, result in (("lhs", lhs), ("rhs", rhs)):
        if result.converged:
            continue
        if result.abs_err > threshold * scale:
            passed = False
            notes.append(f"{side} did not converge (err {result.abs_err:.2e})")
        else:
            notes.append(f"{side} missed its quadrature target (err {result.abs_err:.2e})")
    if not passed and not notes:
        notes.append(f"residual {rel_residual:.2e} above {threshold:g}")

    logger.debug("%s %s lhs=%.16g rhs=%.16g rel=%.2e", record.id, point, lhs.value, rhs.value, rel_residual)
    return PointResult(record.id, dict(point), lhs.value, rhs.value, lhs.abs_err, rhs.abs_err,
                       abs_residual, rel_residual, threshold, passed, "; ".join(notes))


def _log_corrections(records: Sequence[IdentityRecord]) -> Dict[str, List[str]]:
    corrections = {}
    for r in records:
        if r.corrections:
            corrections[r.id] = list(r.corrections)
            for note in r.corrections:
                logger.warning("%s uses a corrected form: %s", r.id, note)
    return corrections


def verify(record: IdentityRecord, grid: Optional[Sequence[Point]] = None,
           profile: Optional[ToleranceProfile] = None,
           tol_override: Optional[float] = None) -> VerificationReport:
    """Verify one record on a grid (its default grid when none is given)."""
    profile = profile or load_profile()
    points = record.domain.grid() if grid is None else list(grid)
    for p in points:
        if not record.domain.contains(p):
            raise ValueError(f"point {p} lies outside the domain of {record.id}")

    corrections = _log_corrections([record])
    results = []
    for p in points:
        ctx = EvaluationContext(profile)
        results.append(evaluate_point(record, p, ctx, tol_override))
    logger.info("%s: %d/%d points passed", record.id, sum(r.passed for r in results), len(results))
    return VerificationReport(profile.name, results,
                              {"corrections": corrections, "profile": profile.to_dict()})


def _run_task(task: Tuple[Tuple[str, ...], Point, ToleranceProfile]) -> List[PointResult]:
    """Evaluate several records of one family at one point, sharing images."""
    ids, point, profile = task
    ctx = EvaluationContext(profile)
    return [evaluate_point(get(i), point, ctx) for i in ids]


def verify_all(profile: Optional[ToleranceProfile] = None, ids: Optional[Iterable[str]] = None,
               workers: Optional[int] = None,
               grid_override: Optional[Sequence[Point]] = None) -> VerificationReport:
    """Run the selected records (all by default) on their default grids.

    Work is split into (family, point) tasks; the merged report is ordered by
    catalog position, then grid position, whatever the worker count.
    """
    profile = profile or load_profile()
    workers = workers or profile.workers
    records = select(ids)
    order = {r.id: i for i, r in enumerate(catalog())}

    tasks = []
    keys = []
    for family in families():
        members = [r for r in records if r.family == family]
        if not members:
            continue
        domain = members[0].domain
        points = domain.grid() if grid_override is None else list(grid_override)
        for p in points:
            if not domain.contains(p):
                raise ValueError(f"point {p} lies outside the domain of family {family}")
        for index, p in enumerate(points):
            tasks.append((tuple(r.id for r in members), p, profile))
            keys.append([(order[r.id], index) for r in members])

    corrections = _log_corrections(records)
    logger.info("verifying %d records over %d tasks with %d worker(s)", len(records), len(tasks), workers)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(_run_task, tasks))
    else:
        outputs = [_run_task(t) for t in tasks]

    ranked = []
    for task_keys, results in zip(keys, outputs):
        ranked.extend(zip(task_keys, results))
    ranked.sort(key=lambda item: item[0])
    return VerificationReport(profile.name, [r for _, r in ranked],
                              {"corrections": corrections, "profile": profile.to_dict()})
