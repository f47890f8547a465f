"""Parametric distribution families: densities, samplers, MLE fits, entropies.

The registry covers three tiers:

* testable nulls (normal, exponential, gamma, laplace, lognormal, gengamma):
  full surface — log-density, sampler, MLE fit, closed-form differential
  entropy, and the null-implied kurtosis that drives bandwidth selection;
* alternative data-generating processes used in the size/power study
  (logistic, cauchy, scaled_t, rayleigh, loglogistic, lomax, weibull,
  invgaussian): samplers, log-densities, and entropy where a maximum-entropy
  closed form exists;
* catalog-only maximum-entropy rows (uniform, beta, chisquare, erlang, gb2,
  pareto): log-density and closed-form entropy, kept so every catalog entry
  can be cross-checked against direct quadrature of -∫ f ln f.

Parameterizations (kurtosis for positive-support families is the kurtosis of
ln X, the scale on which their density is smoothed):

=============  =====================  =======================================
family         theta                  notes
=============  =====================  =======================================
normal         (u, sigma2)            sigma2 is the variance
exponential    (theta,)               theta is the mean
gamma          (alpha, beta)          shape, scale
laplace        (u, b)                 b is the diversity; Var = 2 b^2
lognormal      (u, sigma2)            moments of ln X
gengamma       (a, d, p)              Stacy: p x^{d-1} e^{-(x/a)^p}/(a^d Γ(d/p))
logistic       (u, s)                 Var = s^2 π^2 / 3
cauchy         (x0, gamma)            no moments
scaled_t       (df, scale)            X = scale · t_df
rayleigh       (sigma,)               Var = (4-π)/2 σ^2
loglogistic    (shape, scale)         mean = scale·c/sin c, c = π/shape
lomax          (shape, scale)         mean = scale/(shape-1)
weibull        (k, lam)               shape, scale
invgaussian    (mu, lam)              mean mu, Var = mu^3/lam
=============  =====================  =======================================
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np
from scipy import optimize as _opt

from .errors import DataError, DegenerateDataError, FitError, InvalidParameterError, SupportError
from .special import EULER_GAMMA, beta_ln, digamma, log_gamma, polygamma, trigamma

_LN_2PI = math.log(2.0 * math.pi)
_NEG_INF = float("-inf")


class Support(Enum):
    REAL = "real"
    POSITIVE = "positive"
    OTHER = "other"  # catalog-only rows with bounded / shifted supports


class FamilyId(str, Enum):
    # testable nulls
    NORMAL = "normal"
    EXPONENTIAL = "exponential"
    GAMMA = "gamma"
    LAPLACE = "laplace"
    LOGNORMAL = "lognormal"
    GENGAMMA = "gengamma"
    # alternative DGPs
    LOGISTIC = "logistic"
    CAUCHY = "cauchy"
    SCALED_T = "scaled_t"
    RAYLEIGH = "rayleigh"
    LOGLOGISTIC = "loglogistic"
    LOMAX = "lomax"
    WEIBULL = "weibull"
    INV_GAUSSIAN = "invgaussian"
    # entropy-catalog extras
    UNIFORM = "uniform"
    BETA = "beta"
    CHI_SQUARE = "chisquare"
    ERLANG = "erlang"
    GB2 = "gb2"
    PARETO = "pareto"


@dataclass(frozen=True)
class Family:
    """Registry entry: the callable surface one distribution family exposes."""

    family_id: FamilyId
    param_names: tuple[str, ...]
    support: Support
    testable: bool = False
    validate: Callable[[tuple], str | None] | None = None
    log_pdf: Callable | None = None
    entropy: Callable | None = None
    sampler: Callable | None = None
    fit: Callable | None = None
    fit_moments: Callable | None = None
    kurtosis: Callable | None = None  # null-implied kurtosis on the working scale

    @property
    def n_params(self) -> int:
        return len(self.param_names)

    @property
    def min_fit_size(self) -> int:
        return self.n_params + 1


@dataclass(frozen=True)
class FittedModel:
    """A family tag plus its parameter vector.

    ``n_fit`` records the sample size behind a fit; generator specs that were
    never fit to data use the default 0.
    """

    family: FamilyId
    theta: tuple[float, ...]
    n_fit: int = 0

    def __post_init__(self):
        object.__setattr__(self, "family", FamilyId(self.family))
        fam = get_family(self.family)
        object.__setattr__(self, "theta", tuple(float(t) for t in self.theta))
        if len(self.theta) != fam.n_params:
            raise InvalidParameterError(
                f"{fam.family_id.value} expects {fam.n_params} parameters "
                f"{fam.param_names}, got {len(self.theta)}"
            )
        if not all(math.isfinite(t) for t in self.theta):
            raise InvalidParameterError(f"non-finite parameter in {self.theta}")
        if fam.validate is not None:
            problem = fam.validate(self.theta)
            if problem:
                raise InvalidParameterError(f"{fam.family_id.value}: {problem}")

    @property
    def support(self) -> Support:
        return get_family(self.family).support


def _positive(*names):
    """Validator requiring the named parameters (all, by index) to be > 0."""

    def check(theta):
        fam_names = names
        for name, value in zip(fam_names, theta):
            if name and value <= 0.0:
                return f"parameter {name} must be > 0, got {value}"
        return None

    return check


# --------------------------------------------------------------------------
# log-densities (vectorized over x; -inf outside the support)
# --------------------------------------------------------------------------

def _with_support_mask(x, mask, values):
    out = np.where(mask, values, _NEG_INF)
    return float(out) if np.isscalar(x) or np.ndim(x) == 0 else out


def _logpdf_normal(theta, x):
    u, s2 = theta
    x = np.asarray(x, dtype=float)
    val = -0.5 * (_LN_2PI + math.log(s2)) - (x - u) ** 2 / (2.0 * s2)
    return float(val) if val.ndim == 0 else val


def _logpdf_exponential(theta, x):
    (t,) = theta
    x = np.asarray(x, dtype=float)
    with np.errstate(invalid="ignore"):
        val = -math.log(t) - x / t
    return _with_support_mask(x, x > 0, val)


def _logpdf_gamma(theta, x):
    a, b = theta
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (a - 1.0) * np.log(x) - x / b - a * math.log(b) - log_gamma(a)
    return _with_support_mask(x, x > 0, val)


def _logpdf_laplace(theta, x):
    u, b = theta
    x = np.asarray(x, dtype=float)
    val = -math.log(2.0 * b) - np.abs(x - u) / b
    return float(val) if val.ndim == 0 else val


def _logpdf_lognormal(theta, x):
    u, s2 = theta
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        lx = np.log(x)
        val = -lx - 0.5 * (_LN_2PI + math.log(s2)) - (lx - u) ** 2 / (2.0 * s2)
    return _with_support_mask(x, x > 0, val)


def _logpdf_gengamma(theta, x):
    a, d, p = theta
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        lx = np.log(x)
        # (x/a)^p computed in log space to avoid premature overflow
        pw = np.exp(np.minimum(p * (lx - math.log(a)), 709.0))
        val = (math.log(p) + (d - 1.0) * lx - d * math.log(a)
               - log_gamma(d / p) - pw)
    return _with_support_mask(x, x > 0, val)


def _logpdf_logistic(theta, x):
    u, s = theta
    x = np.asarray(x, dtype=float)
    z = np.abs(x - u) / s
    val = -z - 2.0 * np.log1p(np.exp(-z)) - math.log(s)
    return float(val) if val.ndim == 0 else val


def _logpdf_cauchy(theta, x):
    x0, g = theta
    x = np.asarray(x, dtype=float)
    val = -math.log(math.pi * g) - np.log1p(((x - x0) / g) ** 2)
    return float(val) if val.ndim == 0 else val


def _logpdf_scaled_t(theta, x):
    df, s = theta
    x = np.asarray(x, dtype=float)
    z = x / s
    val = (log_gamma((df + 1.0) / 2.0) - log_gamma(df / 2.0)
           - 0.5 * math.log(df * math.pi) - math.log(s)
           - 0.5 * (df + 1.0) * np.log1p(z * z / df))
    return float(val) if val.ndim == 0 else val


def _logpdf_rayleigh(theta, x):
    (sig,) = theta
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.log(x) - 2.0 * math.log(sig) - x * x / (2.0 * sig * sig)
    return _with_support_mask(x, x > 0, val)


def _logpdf_loglogistic(theta, x):
    shape, scale = theta
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        lz = np.log(x) - math.log(scale)
        val = (math.log(shape) - math.log(scale) + (shape - 1.0) * lz
               - 2.0 * np.log1p(np.exp(np.minimum(shape * lz, 709.0))))
    return _with_support_mask(x, x > 0, val)


def _logpdf_lomax(theta, x):
    shape, scale = theta
    x = np.asarray(x, dtype=float)
    with np.errstate(invalid="ignore"):
        val = math.log(shape) - math.log(scale) - (shape + 1.0) * np.log1p(x / scale)
    return _with_support_mask(x, x >= 0, val)


def _logpdf_invgaussian(theta, x):
    mu, lam = theta
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (0.5 * (math.log(lam) - _LN_2PI - 3.0 * np.log(x))
               - lam * (x - mu) ** 2 / (2.0 * mu * mu * x))
    return _with_support_mask(x, x > 0, val)


def _logpdf_weibull(theta, x):
    k, lam = theta
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        lz = np.log(x) - math.log(lam)
        val = math.log(k) + (k - 1.0) * lz - math.log(lam) - np.exp(np.minimum(k * lz, 709.0))
    return _with_support_mask(x, x > 0, val)


def _logpdf_uniform(theta, x):
    a, b = theta
    x = np.asarray(x, dtype=float)
    val = np.full_like(x, -math.log(b - a))
    return _with_support_mask(x, (x >= a) & (x <= b), val)


def _logpdf_beta(theta, x):
    a, b = theta
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (a - 1.0) * np.log(x) + (b - 1.0) * np.log1p(-x) - beta_ln(a, b)
    return _with_support_mask(x, (x > 0) & (x < 1), val)


def _logpdf_chisquare(theta, x):
    (v,) = theta
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (0.5 * v - 1.0) * np.log(x) - 0.5 * x - 0.5 * v * math.log(2.0) - log_gamma(0.5 * v)
    return _with_support_mask(x, x > 0, val)


def _logpdf_erlang(theta, x):
    k, lam = theta
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = k * math.log(lam) + (k - 1.0) * np.log(x) - lam * x - log_gamma(k)
    return _with_support_mask(x, x > 0, val)


def _logpdf_gb2(theta, x):
    a, b, p, q = theta
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        lz = np.log(x) - math.log(b)
        val = (math.log(a) - math.log(b) - beta_ln(p, q) + (a * p - 1.0) * lz
               - (p + q) * np.log1p(np.exp(np.minimum(a * lz, 709.0))))
    return _with_support_mask(x, x > 0, val)


def _logpdf_pareto(theta, x):
    xm, alpha = theta
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = math.log(alpha) + alpha * math.log(xm) - (alpha + 1.0) * np.log(x)
    return _with_support_mask(x, x > xm, val)


# --------------------------------------------------------------------------
# closed-form differential entropies (maximum-entropy catalog)
# --------------------------------------------------------------------------

def _entropy_normal(theta):
    _, s2 = theta
    return 0.5 * math.log(2.0 * math.pi * math.e * s2)


def _entropy_exponential(theta):
    return 1.0 + math.log(theta[0])


def _entropy_gamma(theta):
    a, b = theta
    return a + math.log(b) + float(log_gamma(a)) + (1.0 - a) * float(digamma(a))


def _entropy_laplace(theta):
    return 1.0 + math.log(2.0 * theta[1])


def _entropy_lognormal(theta):
    u, s2 = theta
    return u + 0.5 * math.log(2.0 * math.pi * math.e * s2)


def _entropy_gengamma(theta):
    # Reduces to the Gamma row at p=1, Weibull at d=p, Rayleigh at (d,p)=(2,2).
    a, d, p = theta
    q = d / p
    return (math.log(a) - math.log(p) + float(log_gamma(q)) + q
            + (1.0 - d) / p * float(digamma(q)))


def _entropy_logistic(theta):
    return math.log(theta[1]) + 2.0


def _entropy_cauchy(theta):
    return math.log(4.0 * math.pi * theta[1])


def _entropy_rayleigh(theta):
    (sig,) = theta
    return 1.0 + math.log(sig / math.sqrt(2.0)) + 0.5 * EULER_GAMMA


def _entropy_weibull(theta):
    k, lam = theta
    return EULER_GAMMA * (k - 1.0) / k + math.log(lam / k) + 1.0


def _entropy_uniform(theta):
    a, b = theta
    return math.log(b - a)


def _entropy_beta(theta):
    a, b = theta
    return float(beta_ln(a, b)
                 - (a - 1.0) * (digamma(a) - digamma(a + b))
                 - (b - 1.0) * (digamma(b) - digamma(a + b)))


def _entropy_chisquare(theta):
    (v,) = theta
    h = v / 2.0
    return math.log(2.0) + float(log_gamma(h)) + (1.0 - h) * float(digamma(h)) + h


def _entropy_erlang(theta):
    k, lam = theta
    return (1.0 - k) * float(digamma(k)) + float(log_gamma(k)) - math.log(lam) + k


def _entropy_gb2(theta):
    a, b, p, q = theta
    return float(math.log(b / a) + beta_ln(p, q) + (p + q) * digamma(p + q)
                 - (p - 1.0 / a) * digamma(p) - (q + 1.0 / a) * digamma(q))


def _entropy_pareto(theta):
    xm, alpha = theta
    return math.log(xm / alpha) + 1.0 + 1.0 / alpha


# --------------------------------------------------------------------------
# samplers
# --------------------------------------------------------------------------

def _open_unit(stream, n):
    """Uniform draws on the open interval (0, 1) for inverse-CDF samplers."""
    return stream.integers(1, 2**53, size=n) / float(2**53)


def _sample_normal(theta, n, stream):
    return stream.normal(theta[0], math.sqrt(theta[1]), size=n)


def _sample_exponential(theta, n, stream):
    return stream.exponential(theta[0], size=n)


def _sample_gamma(theta, n, stream):
    return stream.gamma(theta[0], theta[1], size=n)


def _sample_laplace(theta, n, stream):
    return stream.laplace(theta[0], theta[1], size=n)


def _sample_lognormal(theta, n, stream):
    return stream.lognormal(theta[0], math.sqrt(theta[1]), size=n)


def _sample_gengamma(theta, n, stream):
    a, d, p = theta
    return a * stream.gamma(d / p, 1.0, size=n) ** (1.0 / p)


def _sample_logistic(theta, n, stream):
    return stream.logistic(theta[0], theta[1], size=n)


def _sample_cauchy(theta, n, stream):
    return theta[0] + theta[1] * stream.standard_cauchy(size=n)


def _sample_scaled_t(theta, n, stream):
    df, s = theta
    return s * stream.standard_t(df, size=n)


def _sample_rayleigh(theta, n, stream):
    return stream.rayleigh(theta[0], size=n)


def _sample_loglogistic(theta, n, stream):
    shape, scale = theta
    u = _open_unit(stream, n)
    return scale * (u / (1.0 - u)) ** (1.0 / shape)


def _sample_lomax(theta, n, stream):
    shape, scale = theta
    u = _open_unit(stream, n)
    return scale * (u ** (-1.0 / shape) - 1.0)


def _sample_invgaussian(theta, n, stream):
    return stream.wald(theta[0], theta[1], size=n)


def _sample_weibull(theta, n, stream):
    k, lam = theta
    return lam * stream.weibull(k, size=n)


# --------------------------------------------------------------------------
# MLE fits
# --------------------------------------------------------------------------

def _check_fit_data(fam: Family, data: np.ndarray) -> np.ndarray:
    data = np.asarray(data, dtype=float)
    if data.ndim != 1:
        raise DataError("expected a one-dimensional sample")
    if data.size < fam.min_fit_size:
        raise DataError(
            f"{fam.family_id.value} fit needs at least {fam.min_fit_size} "
            f"observations, got {data.size}"
        )
    if not np.all(np.isfinite(data)):
        raise DataError("sample contains non-finite values")
    if fam.support is Support.POSITIVE and np.min(data) <= 0.0:
        raise SupportError(
            f"{fam.family_id.value} has positive support; sample contains a "
            f"value <= 0 (min = {np.min(data)})"
        )
    if np.min(data) == np.max(data):
        raise DegenerateDataError("all observations are identical")
    return data


def _fit_normal(data):
    u = float(np.mean(data))
    s2 = float(np.mean((data - u) ** 2))
    if s2 <= 0.0:
        raise DegenerateDataError("zero variance")
    return (u, s2)


def _fit_exponential(data):
    return (float(np.mean(data)),)


def _newton_gamma_shape(s: float) -> float:
    """Solve ln(a) - psi(a) = s by Newton's method.

    Initialized at the standard moment-based approximation; the equation has
    a unique root for s > 0 and the iteration is monotone near it.
    """
    a = (3.0 - s + math.sqrt((s - 3.0) ** 2 + 24.0 * s)) / (12.0 * s)
    for _ in range(100):
        g = math.log(a) - float(digamma(a)) - s
        gprime = 1.0 / a - float(trigamma(a))
        step = g / gprime
        a_next = a - step
        if a_next <= 0.0:
            a_next = a / 2.0
        if abs(a_next - a) <= 1e-12 * max(1.0, abs(a_next)):
            return a_next
        a = a_next
    raise FitError("gamma shape iteration did not converge")


def _fit_gamma(data):
    xbar = float(np.mean(data))
    s = math.log(xbar) - float(np.mean(np.log(data)))
    if s <= 0.0:
        raise DegenerateDataError("log-moment gap is non-positive")
    a = _newton_gamma_shape(s)
    if not math.isfinite(a) or a > 1e10:
        raise FitError(f"gamma shape estimate diverged (alpha = {a})")
    return (a, xbar / a)


def _fit_laplace(data):
    # lower median: deterministic tie-break for even n
    xs = np.sort(data)
    u = float(xs[(xs.size - 1) // 2])
    b = float(np.mean(np.abs(data - u)))
    if b <= 0.0:
        raise DegenerateDataError("zero mean absolute deviation")
    return (u, b)


def _fit_lognormal(data):
    lx = np.log(data)
    u = float(np.mean(lx))
    s2 = float(np.mean((lx - u) ** 2))
    if s2 <= 0.0:
        raise DegenerateDataError("zero variance on the log scale")
    return (u, s2)


def _invert_trigamma(target: float) -> float:
    """Solve psi'(q) = target for q > 0 (Newton, decreasing convex function)."""
    q = 0.5 + 1.0 / target if target > 1e-8 else 1.0 / target
    for _ in range(100):
        f = float(trigamma(q)) - target
        fprime = float(polygamma(2, q))
        q_next = q - f / fprime
        if q_next <= 0.0:
            q_next = q / 2.0
        if abs(q_next - q) <= 1e-12 * max(1.0, abs(q_next)):
            return q_next
        q = q_next
    raise FitError("trigamma inversion did not converge")


def _gengamma_mean_loglik(z: np.ndarray, lx: np.ndarray, mean_lx: float) -> float:
    """Mean log-likelihood of the generalized gamma at z = (ln a, ln d, ln p)."""
    la, ld, lp = z
    if abs(la) > 300.0 or abs(ld) > 300.0 or abs(lp) > 300.0:
        return -1e300
    a, d, p = math.exp(la), math.exp(ld), math.exp(lp)
    with np.errstate(over="ignore"):
        pw = np.exp(np.minimum(p * (lx - la), 709.0))
        mean_pw = float(np.mean(pw))
    if not math.isfinite(mean_pw):
        return -1e300
    val = (lp + (d - 1.0) * mean_lx - d * la - float(log_gamma(d / p)) - mean_pw)
    return val if math.isfinite(val) else -1e300


def _gengamma_starts(data, lx, mean_lx):
    var_lx = float(np.mean((lx - mean_lx) ** 2))
    starts = []
    # gamma-consistent start (p = 1)
    try:
        a0, b0 = _fit_gamma(data)
        starts.append((b0, a0, 1.0))
    except (FitError, DataError):
        pass
    # weibull-consistent start (d = p), matched to the ln-scale moments
    sd_lx = math.sqrt(var_lx)
    if sd_lx > 0.0:
        k = math.pi / (math.sqrt(6.0) * sd_lx)
        lam = math.exp(mean_lx + EULER_GAMMA / k)
        starts.append((lam, k, k))
    # moment start (p = 2), ln-scale mean/variance matching
    try:
        q = _invert_trigamma(4.0 * var_lx)
        starts.append((math.exp(mean_lx - float(digamma(q)) / 2.0), 2.0 * q, 2.0))
    except FitError:
        pass
    if not starts:
        raise FitError("no usable starting point for the generalized gamma fit")
    return starts


def _fit_gengamma(data):
    """Three-start Nelder-Mead in (ln a, ln d, ln p); the likelihood surface
    is multimodal, so the best converged start wins."""
    lx = np.log(data)
    mean_lx = float(np.mean(lx))

    def objective(z):
        return -_gengamma_mean_loglik(z, lx, mean_lx)

    best = None
    for a0, d0, p0 in _gengamma_starts(data, lx, mean_lx):
        z0 = np.log([a0, d0, p0])
        res = _opt.minimize(
            objective, z0, method="Nelder-Mead",
            options={"maxiter": 500, "xatol": 1e-6, "fatol": 1e-8},
        )
        if not res.success:
            continue
        if best is None or res.fun < best.fun:
            best = res
    if best is None:
        raise FitError("generalized gamma fit did not converge from any start")
    a, d, p = np.exp(best.x)
    return (float(a), float(d), float(p))


# method-of-moments estimators: an explicit fallback, never silently used

def _moments_gamma(data):
    xbar = float(np.mean(data))
    v = float(np.mean((data - xbar) ** 2))
    if v <= 0.0:
        raise DegenerateDataError("zero variance")
    return (xbar * xbar / v, v / xbar)


def _moments_laplace(data):
    xbar = float(np.mean(data))
    v = float(np.mean((data - xbar) ** 2))
    if v <= 0.0:
        raise DegenerateDataError("zero variance")
    return (xbar, math.sqrt(v / 2.0))


def _moments_lognormal(data):
    xbar = float(np.mean(data))
    v = float(np.mean((data - xbar) ** 2))
    if v <= 0.0:
        raise DegenerateDataError("zero variance")
    s2 = math.log1p(v / (xbar * xbar))
    return (math.log(xbar) - s2 / 2.0, s2)


# --------------------------------------------------------------------------
# null-implied kurtosis (working scale: raw for R, ln X for R+)
# --------------------------------------------------------------------------

def _ln_gamma_kurtosis(q: float) -> float:
    # cumulants of ln G, G ~ Gamma(q): kappa_2 = psi'(q), kappa_4 = psi'''(q)
    return 3.0 + float(polygamma(3, q)) / float(polygamma(1, q)) ** 2


def _kurt_normal(theta):
    return 3.0


def _kurt_laplace(theta):
    return 6.0


def _kurt_exponential(theta):
    return _ln_gamma_kurtosis(1.0)


def _kurt_gamma(theta):
    return _ln_gamma_kurtosis(theta[0])


def _kurt_lognormal(theta):
    return 3.0


def _kurt_gengamma(theta):
    # ln X = ln a + (1/p) ln G with G ~ Gamma(d/p); scaling cancels in kurtosis
    _, d, p = theta
    return _ln_gamma_kurtosis(d / p)


# --------------------------------------------------------------------------
# registry
# --------------------------------------------------------------------------

FAMILIES: dict[FamilyId, Family] = {}


def _register(fam: Family):
    FAMILIES[fam.family_id] = fam


_register(Family(FamilyId.NORMAL, ("u", "sigma2"), Support.REAL, testable=True,
                 validate=_positive("", "sigma2"),
                 log_pdf=_logpdf_normal, entropy=_entropy_normal,
                 sampler=_sample_normal, fit=_fit_normal, fit_moments=_fit_normal,
                 kurtosis=_kurt_normal))
_register(Family(FamilyId.EXPONENTIAL, ("theta",), Support.POSITIVE, testable=True,
                 validate=_positive("theta"),
                 log_pdf=_logpdf_exponential, entropy=_entropy_exponential,
                 sampler=_sample_exponential, fit=_fit_exponential,
                 fit_moments=_fit_exponential, kurtosis=_kurt_exponential))
_register(Family(FamilyId.GAMMA, ("alpha", "beta"), Support.POSITIVE, testable=True,
                 validate=_positive("alpha", "beta"),
                 log_pdf=_logpdf_gamma, entropy=_entropy_gamma,
                 sampler=_sample_gamma, fit=_fit_gamma, fit_moments=_moments_gamma,
                 kurtosis=_kurt_gamma))
_register(Family(FamilyId.LAPLACE, ("u", "b"), Support.REAL, testable=True,
                 validate=_positive("", "b"),
                 log_pdf=_logpdf_laplace, entropy=_entropy_laplace,
                 sampler=_sample_laplace, fit=_fit_laplace, fit_moments=_moments_laplace,
                 kurtosis=_kurt_laplace))
_register(Family(FamilyId.LOGNORMAL, ("u", "sigma2"), Support.POSITIVE, testable=True,
                 validate=_positive("", "sigma2"),
                 log_pdf=_logpdf_lognormal, entropy=_entropy_lognormal,
                 sampler=_sample_lognormal, fit=_fit_lognormal,
                 fit_moments=_moments_lognormal, kurtosis=_kurt_lognormal))
_register(Family(FamilyId.GENGAMMA, ("a", "d", "p"), Support.POSITIVE, testable=True,
                 validate=_positive("a", "d", "p"),
                 log_pdf=_logpdf_gengamma, entropy=_entropy_gengamma,
                 sampler=_sample_gengamma, fit=_fit_gengamma,
                 kurtosis=_kurt_gengamma))

_register(Family(FamilyId.LOGISTIC, ("u", "s"), Support.REAL,
                 validate=_positive("", "s"),
                 log_pdf=_logpdf_logistic, entropy=_entropy_logistic,
                 sampler=_sample_logistic))
_register(Family(FamilyId.CAUCHY, ("x0", "gamma"), Support.REAL,
                 validate=_positive("", "gamma"),
                 log_pdf=_logpdf_cauchy, entropy=_entropy_cauchy,
                 sampler=_sample_cauchy))
_register(Family(FamilyId.SCALED_T, ("df", "scale"), Support.REAL,
                 validate=_positive("df", "scale"),
                 log_pdf=_logpdf_scaled_t, sampler=_sample_scaled_t))
_register(Family(FamilyId.RAYLEIGH, ("sigma",), Support.POSITIVE,
                 validate=_positive("sigma"),
                 log_pdf=_logpdf_rayleigh, entropy=_entropy_rayleigh,
                 sampler=_sample_rayleigh))
_register(Family(FamilyId.LOGLOGISTIC, ("shape", "scale"), Support.POSITIVE,
                 validate=_positive("shape", "scale"),
                 log_pdf=_logpdf_loglogistic, sampler=_sample_loglogistic))
_register(Family(FamilyId.LOMAX, ("shape", "scale"), Support.POSITIVE,
                 validate=_positive("shape", "scale"),
                 log_pdf=_logpdf_lomax, sampler=_sample_lomax))
_register(Family(FamilyId.WEIBULL, ("k", "lam"), Support.POSITIVE,
                 validate=_positive("k", "lam"),
                 log_pdf=_logpdf_weibull, entropy=_entropy_weibull,
                 sampler=_sample_weibull))
_register(Family(FamilyId.INV_GAUSSIAN, ("mu", "lam"), Support.POSITIVE,
                 validate=_positive("mu", "lam"),
                 log_pdf=_logpdf_invgaussian, sampler=_sample_invgaussian))

_register(Family(FamilyId.UNIFORM, ("a", "b"), Support.OTHER,
                 validate=lambda th: None if th[1] > th[0] else "requires b > a",
                 log_pdf=_logpdf_uniform, entropy=_entropy_uniform))
_register(Family(FamilyId.BETA, ("alpha", "beta"), Support.OTHER,
                 validate=_positive("alpha", "beta"),
                 log_pdf=_logpdf_beta, entropy=_entropy_beta))
_register(Family(FamilyId.CHI_SQUARE, ("v",), Support.POSITIVE,
                 validate=_positive("v"),
                 log_pdf=_logpdf_chisquare, entropy=_entropy_chisquare))
_register(Family(FamilyId.ERLANG, ("k", "lam"), Support.POSITIVE,
                 validate=_positive("k", "lam"),
                 log_pdf=_logpdf_erlang, entropy=_entropy_erlang))
_register(Family(FamilyId.GB2, ("a", "b", "p", "q"), Support.POSITIVE,
                 validate=_positive("a", "b", "p", "q"),
                 log_pdf=_logpdf_gb2, entropy=_entropy_gb2))
_register(Family(FamilyId.PARETO, ("xm", "alpha"), Support.OTHER,
                 validate=_positive("xm", "alpha"),
                 log_pdf=_logpdf_pareto, entropy=_entropy_pareto))

TESTABLE_NULLS = tuple(f for f, fam in FAMILIES.items() if fam.testable)

_FITTERS = {"mle": "fit", "moments": "fit_moments"}


def get_family(family: FamilyId | str) -> Family:
    fid = FamilyId(family)
    return FAMILIES[fid]


# --------------------------------------------------------------------------
# public operations
# --------------------------------------------------------------------------

def log_pdf(model: FittedModel, x):
    """ln f(x; theta); -inf outside the family's support."""
    fam = get_family(model.family)
    if fam.log_pdf is None:
        raise InvalidParameterError(f"{fam.family_id.value} has no density implementation")
    return fam.log_pdf(model.theta, x)


def fit_mle(family: FamilyId | str, data, *, method: str = "mle") -> FittedModel:
    """Fit the family by maximum likelihood (closed forms where they exist).

    ``method="moments"`` selects the method-of-moments fallback explicitly;
    it is never substituted silently.
    """
    fam = get_family(family)
    if not fam.testable:
        raise FitError(f"{fam.family_id.value} is not a testable null (sampler-only)")
    if method not in _FITTERS:
        raise InvalidParameterError(f"unknown fit method {method!r}")
    fitter = getattr(fam, _FITTERS[method])
    if fitter is None:
        raise FitError(f"{fam.family_id.value} has no {method} estimator")
    data = _check_fit_data(fam, data)
    theta = fitter(data)
    return FittedModel(fam.family_id, theta, n_fit=int(data.size))


def sample(model: FittedModel, n: int, stream: np.random.Generator) -> np.ndarray:
    """n iid draws from the model; reproducible given the stream."""
    if n < 1:
        raise InvalidParameterError(f"sample size must be >= 1, got {n}")
    fam = get_family(model.family)
    if fam.sampler is None:
        raise InvalidParameterError(f"{fam.family_id.value} has no sampler")
    return np.asarray(fam.sampler(model.theta, int(n), stream), dtype=float)


def closed_form_entropy(model: FittedModel) -> float:
    """Differential entropy (nats) from the maximum-entropy catalog row."""
    fam = get_family(model.family)
    if fam.entropy is None:
        raise InvalidParameterError(
            f"{fam.family_id.value} has no closed-form entropy in the catalog"
        )
    return float(fam.entropy(model.theta))


def null_kurtosis(model: FittedModel) -> float:
    """Null-implied kurtosis on the scale the KDE smooths (ln X on R+)."""
    fam = get_family(model.family)
    if fam.kurtosis is None:
        raise InvalidParameterError(
            f"{fam.family_id.value} has no null-implied kurtosis (not a testable null)"
        )
    return float(fam.kurtosis(model.theta))


def mean_log_likelihood(model: FittedModel, data) -> float:
    """Mean log-likelihood of the sample under the model."""
    lp = log_pdf(model, np.asarray(data, dtype=float))
    return float(np.mean(lp))
