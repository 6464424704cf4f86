"""Catalog of densities on [0, inf) whose CDFs induce separable penalties.

Every family implements a vectorised density, CDF and quantile on numpy
arrays. Inputs reaching these methods are already validated by
:mod:`src.penalties.model` (t >= 0, 0 <= p < 1), so the implementations only
deal with the formulas and their behaviour at the support boundary.
"""

import enum
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, ClassVar, Dict, Optional, Tuple, Type

import numpy as np
from scipy import integrate, optimize, special

from ..config import settings
from ..errors import DomainError, UnsupportedModelError


class Family(enum.Enum):
    """Distribution families available for penalty construction."""
    DIRAC_DELTA = "dirac_delta"
    UNIFORM = "uniform"
    SCAD_LINEAR = "scad_linear"
    MCP_LINEAR = "mcp_linear"
    U_QUADRATIC = "u_quadratic"
    EXPONENTIAL = "exponential"
    RAYLEIGH = "rayleigh"
    WEIBULL = "weibull"
    CHI_SQUARED = "chi_squared"
    GENERALIZED_GAMMA = "generalized_gamma"
    GENERALIZED_BETA_PRIME = "generalized_beta_prime"
    FOLDED_NORMAL = "folded_normal"
    FOLDED_STUDENT_T = "folded_student_t"
    FOLDED_CAUCHY = "folded_cauchy"


class Concavity(enum.Enum):
    """Whether the CDF is concave on [0, inf), i.e. the density is non-increasing."""
    CONCAVE = "concave"
    NOT_CONCAVE = "not_concave"


@dataclass(frozen=True)
class ParamSpec:
    """A named family parameter with its admissible range."""
    name: str
    lower: float = 0.0
    inclusive: bool = False
    default: Optional[float] = None

    def validate(self, family: Family, value: float) -> float:
        try:
            value = float(value)
        except (TypeError, ValueError):
            raise DomainError(f"{family.value}: parameter {self.name} must be a real number, got {value!r}")
        if not math.isfinite(value):
            raise DomainError(f"{family.value}: parameter {self.name} must be finite, got {value}")
        ok = value >= self.lower if self.inclusive else value > self.lower
        if not ok:
            op = ">=" if self.inclusive else ">"
            raise DomainError(f"{family.value}: parameter {self.name} must be {op} {self.lower}, got {value}")
        return value


def _zero_limit(exponent: float, coefficient: float) -> float:
    """Value at t=0 of ``coefficient * t**exponent`` times a factor equal to 1 at 0."""
    if exponent < 0:
        return math.inf
    if exponent == 0:
        return coefficient
    return 0.0


def _from_log_density(t: np.ndarray, log_pdf: Callable[[np.ndarray], np.ndarray], at_zero: float) -> np.ndarray:
    out = np.full(t.shape, at_zero, dtype=float)
    pos = t > 0
    if np.any(pos):
        out[pos] = np.exp(log_pdf(t[pos]))
    return out


class BaseDistribution(ABC):
    """
    Base class for all catalog families.

    Subclasses declare their parameters and implement ``_pdf``; ``_cdf`` and
    ``_quantile`` default to adaptive quadrature of the density and bisection
    on the CDF, and are overridden wherever a closed form or a scipy special
    function is available.
    """

    family: ClassVar[Family]
    parameters: ClassVar[Tuple[ParamSpec, ...]] = ()
    has_density: ClassVar[bool] = True

    def __init__(self, **params: float):
        known = {spec.name for spec in self.parameters}
        unknown = sorted(set(params) - known)
        if unknown:
            raise DomainError(
                f"{self.family.value}: unknown parameter(s) {', '.join(unknown)}; "
                f"expected {', '.join(sorted(known)) or 'none'}"
            )
        values: Dict[str, float] = {}
        for spec in self.parameters:
            if spec.name in params:
                values[spec.name] = spec.validate(self.family, params[spec.name])
            elif spec.default is not None:
                values[spec.name] = spec.default
            else:
                raise DomainError(f"{self.family.value}: missing parameter {spec.name}")
        self.params = values

    @property
    @abstractmethod
    def concavity(self) -> Concavity:
        """Concavity of the CDF, read off the sign of the density derivative."""

    @property
    def diverges_at_zero(self) -> bool:
        """Whether the density is unbounded at t=0."""
        return False

    @property
    def support_end(self) -> float:
        return math.inf

    @property
    def scale(self) -> float:
        """Characteristic length used to split quadrature and bracket roots."""
        return 1.0

    @abstractmethod
    def _pdf(self, t: np.ndarray) -> np.ndarray:
        """Density on validated input."""

    def _cdf(self, t: np.ndarray) -> np.ndarray:
        return self.quadrature_cdf(t)

    def _quantile(self, p: np.ndarray) -> np.ndarray:
        return self.bisection_quantile(p)

    def quadrature_cdf(self, t: np.ndarray) -> np.ndarray:
        """CDF by adaptive quadrature of the density, abs tol ``quadrature_abs_tol``."""
        if not self.has_density:
            raise UnsupportedModelError(f"{self.family.value} has no density to integrate")

        def density(u: float) -> float:
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                return float(self._pdf(np.array([u]))[0])

        breaks = [self.scale * f for f in (1e-3, 1e-1, 1.0, 10.0, 100.0)]
        out = np.empty(t.shape, dtype=float)
        for idx, value in np.ndenumerate(t):
            upper = min(float(value), self.support_end)
            if upper <= 0:
                out[idx] = 0.0
                continue
            if math.isinf(upper):
                out[idx] = 1.0
                continue
            edges = [0.0] + [b for b in breaks if b < upper] + [upper]
            total = 0.0
            for lo, hi in zip(edges[:-1], edges[1:]):
                piece, _ = integrate.quad(
                    density, lo, hi,
                    epsabs=settings.quadrature_abs_tol, epsrel=1e-12, limit=200,
                )
                total += piece
            out[idx] = min(max(total, 0.0), 1.0)
        return out

    def bisection_quantile(self, p: np.ndarray) -> np.ndarray:
        """Quantile by bracketed root finding on the CDF."""
        out = np.empty(p.shape, dtype=float)
        for idx, prob in np.ndenumerate(p):
            prob = float(prob)
            if prob <= 0.0:
                out[idx] = 0.0
                continue

            def gap(u: float) -> float:
                return float(self._cdf(np.array([u]))[0]) - prob

            hi = min(self.scale, self.support_end)
            while gap(hi) < 0 and hi < self.support_end:
                hi = min(hi * 2.0, self.support_end)
                if hi > 1e300:
                    raise DomainError(f"{self.family.value}: cannot bracket quantile {prob}")
            out[idx] = optimize.brentq(
                gap, 0.0, hi,
                xtol=settings.quantile_tol * max(self.scale, 1e-300), rtol=4 * np.finfo(float).eps,
                maxiter=1000,
            )
        return out

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{type(self).__name__}({args})"


_REGISTRY: Dict[Family, Type[BaseDistribution]] = {}


def register(cls: Type[BaseDistribution]) -> Type[BaseDistribution]:
    """Class decorator adding a family implementation to the factory."""
    _REGISTRY[cls.family] = cls
    return cls


class DistributionFactory:
    """Factory for creating distributions based on family."""

    @staticmethod
    def create(family: Family, params: Dict[str, float]) -> BaseDistribution:
        """Create a validated distribution instance."""
        try:
            cls = _REGISTRY[family]
        except KeyError:
            raise DomainError(f"Unsupported family: {family!r}")
        return cls(**params)

    @staticmethod
    def parameters(family: Family) -> Tuple[ParamSpec, ...]:
        return _REGISTRY[family].parameters


@register
class DiracDelta(BaseDistribution):
    """Point mass at 0; its "CDF" 1[t > 0] turns the penalty into the l0 count."""

    family = Family.DIRAC_DELTA
    has_density = False

    @property
    def concavity(self) -> Concavity:
        return Concavity.CONCAVE

    def _pdf(self, t):
        raise UnsupportedModelError("dirac_delta has no density; it is evaluation-only (l0 count)")

    def _cdf(self, t):
        return (t > 0).astype(float)

    def _quantile(self, p):
        # generalised inverse inf{t: F(t) >= p}
        return np.zeros_like(p, dtype=float)


@register
class Uniform(BaseDistribution):
    """Uniform on [0, gamma]; capped-l1 penalty."""

    family = Family.UNIFORM
    parameters = (ParamSpec("gamma"),)

    @property
    def concavity(self):
        return Concavity.CONCAVE

    @property
    def support_end(self):
        return self.params["gamma"]

    @property
    def scale(self):
        return self.params["gamma"]

    def _pdf(self, t):
        g = self.params["gamma"]
        return np.where(t <= g, 1.0 / g, 0.0)

    def _cdf(self, t):
        return np.minimum(t / self.params["gamma"], 1.0)

    def _quantile(self, p):
        return p * self.params["gamma"]


@register
class ScadLinear(BaseDistribution):
    """
    Piecewise-linear density reproducing SCAD: flat on [0, lam], then
    decreasing linearly to 0 at gamma*lam.
    """

    family = Family.SCAD_LINEAR
    parameters = (ParamSpec("lam"), ParamSpec("gamma", lower=1.0, default=3.7))

    @property
    def concavity(self):
        return Concavity.CONCAVE

    @property
    def support_end(self):
        return self.params["lam"] * self.params["gamma"]

    @property
    def scale(self):
        return self.params["lam"]

    def _height(self) -> float:
        return 2.0 / (self.params["lam"] * (self.params["gamma"] + 1.0))

    def _pdf(self, t):
        lam, gamma = self.params["lam"], self.params["gamma"]
        ramp = np.clip(1.0 - (t - lam) / (lam * (gamma - 1.0)), 0.0, None)
        return self._height() * np.minimum(1.0, ramp)

    def _cdf(self, t):
        lam, gamma = self.params["lam"], self.params["gamma"]
        c = self._height()
        width = lam * (gamma - 1.0)
        u = np.clip(t - lam, 0.0, width)
        out = c * np.minimum(t, lam) + c * (u - u * u / (2.0 * width))
        return np.where(t >= lam * gamma, 1.0, np.minimum(out, 1.0))

    def _quantile(self, p):
        lam, gamma = self.params["lam"], self.params["gamma"]
        c = self._height()
        width = lam * (gamma - 1.0)
        knee = c * lam
        r = np.maximum(p - knee, 0.0) / c
        u = width - np.sqrt(np.maximum(width * width - 2.0 * width * r, 0.0))
        return np.where(p <= knee, p / c, lam + u)


@register
class McpLinear(BaseDistribution):
    """Triangular density on [0, lam*gamma]; minimax concave penalty."""

    family = Family.MCP_LINEAR
    parameters = (ParamSpec("lam"), ParamSpec("gamma"))

    @property
    def concavity(self):
        return Concavity.CONCAVE

    @property
    def support_end(self):
        return self.params["lam"] * self.params["gamma"]

    @property
    def scale(self):
        return self.support_end

    def _pdf(self, t):
        b = self.support_end
        return 2.0 / b * np.clip(1.0 - t / b, 0.0, None)

    def _cdf(self, t):
        b = self.support_end
        r = np.minimum(t / b, 1.0)
        return 2.0 * r - r * r

    def _quantile(self, p):
        return self.support_end * (1.0 - np.sqrt(1.0 - p))


@register
class UQuadratic(BaseDistribution):
    """
    U-quadratic density alpha*(t - beta)^2 on [0, b] with beta = b/2 and
    alpha = 12/b^3 (three-order polynomial penalty).
    """

    family = Family.U_QUADRATIC
    parameters = (ParamSpec("b"),)

    @property
    def concavity(self):
        return Concavity.NOT_CONCAVE

    @property
    def support_end(self):
        return self.params["b"]

    @property
    def scale(self):
        return self.params["b"]

    def _coefficients(self) -> Tuple[float, float]:
        b = self.params["b"]
        return 12.0 / b ** 3, b / 2.0

    def _pdf(self, t):
        alpha, beta = self._coefficients()
        return np.where(t <= self.params["b"], alpha * (t - beta) ** 2, 0.0)

    def _cdf(self, t):
        alpha, beta = self._coefficients()
        # expanded so that F(0) is exactly 0
        inside = alpha / 3.0 * t * (t * t - 3.0 * beta * t + 3.0 * beta * beta)
        return np.where(t >= self.params["b"], 1.0, np.clip(inside, 0.0, 1.0))

    def _quantile(self, p):
        alpha, beta = self._coefficients()
        return np.where(p > 0, beta + np.cbrt(3.0 * p / alpha - beta ** 3), 0.0)


@register
class Exponential(BaseDistribution):
    """Exponential density; exponential-type penalty (ETP), also the folded Laplace."""

    family = Family.EXPONENTIAL
    parameters = (ParamSpec("sigma"),)

    @property
    def concavity(self):
        return Concavity.CONCAVE

    @property
    def scale(self):
        return self.params["sigma"]

    def _pdf(self, t):
        sigma = self.params["sigma"]
        return np.exp(-t / sigma) / sigma

    def _cdf(self, t):
        return -np.expm1(-t / self.params["sigma"])

    def _quantile(self, p):
        return -self.params["sigma"] * np.log1p(-p)


@register
class Rayleigh(BaseDistribution):
    family = Family.RAYLEIGH
    parameters = (ParamSpec("sigma"),)

    @property
    def concavity(self):
        return Concavity.NOT_CONCAVE

    @property
    def scale(self):
        return self.params["sigma"]

    def _pdf(self, t):
        s2 = self.params["sigma"] ** 2
        return t / s2 * np.exp(-t * t / (2.0 * s2))

    def _cdf(self, t):
        s2 = self.params["sigma"] ** 2
        return -np.expm1(-t * t / (2.0 * s2))

    def _quantile(self, p):
        return self.params["sigma"] * np.sqrt(-2.0 * np.log1p(-p))


@register
class Weibull(BaseDistribution):
    """Weibull density with shape k and scale sigma; the Weibull penalty (WBP)."""

    family = Family.WEIBULL
    parameters = (ParamSpec("k"), ParamSpec("sigma"))

    @property
    def concavity(self):
        return Concavity.CONCAVE if self.params["k"] <= 1.0 else Concavity.NOT_CONCAVE

    @property
    def diverges_at_zero(self):
        return self.params["k"] < 1.0

    @property
    def scale(self):
        return self.params["sigma"]

    def _pdf(self, t):
        k, sigma = self.params["k"], self.params["sigma"]

        def log_pdf(u):
            z = u / sigma
            return math.log(k / sigma) + (k - 1.0) * np.log(z) - z ** k

        return _from_log_density(t, log_pdf, _zero_limit(k - 1.0, 1.0 / sigma))

    def _cdf(self, t):
        k, sigma = self.params["k"], self.params["sigma"]
        return -np.expm1(-((t / sigma) ** k))

    def _quantile(self, p):
        k, sigma = self.params["k"], self.params["sigma"]
        return sigma * (-np.log1p(-p)) ** (1.0 / k)


@register
class ChiSquared(BaseDistribution):
    """
    Chi-squared family with density x^(k-1) e^(-x^2/2) / (2^(k/2-1) Gamma(k/2)).

    This is the chi density with k degrees of freedom; it integrates to one
    and its CDF is the regularised lower incomplete gamma P(k/2, x^2/2).
    """

    family = Family.CHI_SQUARED
    parameters = (ParamSpec("k"),)

    @property
    def concavity(self):
        return Concavity.CONCAVE if self.params["k"] <= 1.0 else Concavity.NOT_CONCAVE

    @property
    def diverges_at_zero(self):
        return self.params["k"] < 1.0

    @property
    def scale(self):
        return math.sqrt(self.params["k"])

    def _log_norm(self) -> float:
        k = self.params["k"]
        return -(k / 2.0 - 1.0) * math.log(2.0) - special.gammaln(k / 2.0)

    def _pdf(self, t):
        k = self.params["k"]
        log_norm = self._log_norm()

        def log_pdf(u):
            return log_norm + (k - 1.0) * np.log(u) - u * u / 2.0

        return _from_log_density(t, log_pdf, _zero_limit(k - 1.0, math.exp(log_norm)))

    def _cdf(self, t):
        return special.gammainc(self.params["k"] / 2.0, t * t / 2.0)

    def _quantile(self, p):
        return np.sqrt(2.0 * special.gammaincinv(self.params["k"] / 2.0, p))


@register
class GeneralizedGamma(BaseDistribution):
    """Generalized gamma (scale a, shapes d and p); d=1 gives the GERF penalty."""

    family = Family.GENERALIZED_GAMMA
    parameters = (ParamSpec("a"), ParamSpec("d"), ParamSpec("p"))

    @property
    def concavity(self):
        return Concavity.CONCAVE if self.params["d"] <= 1.0 else Concavity.NOT_CONCAVE

    @property
    def diverges_at_zero(self):
        return self.params["d"] < 1.0

    @property
    def scale(self):
        return self.params["a"]

    def _pdf(self, t):
        a, d, p = self.params["a"], self.params["d"], self.params["p"]
        log_norm = math.log(p) - d * math.log(a) - special.gammaln(d / p)

        def log_pdf(u):
            return log_norm + (d - 1.0) * np.log(u) - (u / a) ** p

        return _from_log_density(t, log_pdf, _zero_limit(d - 1.0, math.exp(log_norm)))

    def _cdf(self, t):
        a, d, p = self.params["a"], self.params["d"], self.params["p"]
        return special.gammainc(d / p, (t / a) ** p)

    def _quantile(self, prob):
        a, d, p = self.params["a"], self.params["d"], self.params["p"]
        return a * special.gammaincinv(d / p, prob) ** (1.0 / p)


@register
class GeneralizedBetaPrime(BaseDistribution):
    """Generalized beta prime; alpha = beta = p = 1 gives the transformed l1 penalty."""

    family = Family.GENERALIZED_BETA_PRIME
    parameters = (ParamSpec("p"), ParamSpec("q"), ParamSpec("alpha"), ParamSpec("beta"))

    @property
    def concavity(self):
        return Concavity.CONCAVE if self.params["alpha"] * self.params["p"] <= 1.0 else Concavity.NOT_CONCAVE

    @property
    def diverges_at_zero(self):
        return self.params["alpha"] * self.params["p"] < 1.0

    @property
    def scale(self):
        return self.params["q"]

    def _pdf(self, t):
        p, q, alpha, beta = (self.params[n] for n in ("p", "q", "alpha", "beta"))
        log_norm = math.log(p) - math.log(q) - special.betaln(alpha, beta)

        def log_pdf(u):
            z = u / q
            return log_norm + (alpha * p - 1.0) * np.log(z) - (alpha + beta) * np.log1p(z ** p)

        return _from_log_density(t, log_pdf, _zero_limit(alpha * p - 1.0, math.exp(log_norm)))

    def _cdf(self, t):
        p, q, alpha, beta = (self.params[n] for n in ("p", "q", "alpha", "beta"))
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            z = (t / q) ** p
            u = np.where(np.isinf(z), 1.0, z / (1.0 + z))
        return special.betainc(alpha, beta, u)

    def _quantile(self, prob):
        p, q, alpha, beta = (self.params[n] for n in ("p", "q", "alpha", "beta"))
        u = special.betaincinv(alpha, beta, prob)
        return q * (u / (1.0 - u)) ** (1.0 / p)


@register
class FoldedNormal(BaseDistribution):
    """Half-normal density; the ERF penalty."""

    family = Family.FOLDED_NORMAL
    parameters = (ParamSpec("sigma"),)

    @property
    def concavity(self):
        return Concavity.CONCAVE

    @property
    def scale(self):
        return self.params["sigma"]

    def _pdf(self, t):
        sigma = self.params["sigma"]
        return math.sqrt(2.0 / math.pi) / sigma * np.exp(-t * t / (2.0 * sigma * sigma))

    def _cdf(self, t):
        return special.erf(t / (math.sqrt(2.0) * self.params["sigma"]))

    def _quantile(self, p):
        return math.sqrt(2.0) * self.params["sigma"] * special.erfinv(p)


@register
class FoldedStudentT(BaseDistribution):
    """Folded Student t with nu degrees of freedom."""

    family = Family.FOLDED_STUDENT_T
    parameters = (ParamSpec("nu"),)

    @property
    def concavity(self):
        return Concavity.CONCAVE

    def _pdf(self, t):
        nu = self.params["nu"]
        log_norm = (
            math.log(2.0) + special.gammaln((nu + 1.0) / 2.0)
            - 0.5 * math.log(nu * math.pi) - special.gammaln(nu / 2.0)
        )
        return np.exp(log_norm - (nu + 1.0) / 2.0 * np.log1p(t * t / nu))

    def _cdf(self, t):
        return 2.0 * special.stdtr(self.params["nu"], t) - 1.0

    def _quantile(self, p):
        return special.stdtrit(self.params["nu"], (1.0 + p) / 2.0)


@register
class FoldedCauchy(BaseDistribution):
    """Folded Cauchy with scale sigma; sigma=1 gives the arctan penalty (2/pi)arctan(t)."""

    family = Family.FOLDED_CAUCHY
    parameters = (ParamSpec("sigma", default=1.0),)

    @property
    def concavity(self):
        return Concavity.CONCAVE

    @property
    def scale(self):
        return self.params["sigma"]

    def _pdf(self, t):
        sigma = self.params["sigma"]
        return 2.0 / (math.pi * sigma * (1.0 + (t / sigma) ** 2))

    def _cdf(self, t):
        return 2.0 / math.pi * np.arctan(t / self.params["sigma"])

    def _quantile(self, p):
        return self.params["sigma"] * np.tan(math.pi * p / 2.0)
