"""Strictly stable densities L_alpha^theta in Feller's parameterisation.

Characteristic function exp(-|k|^alpha exp(i sign(k) theta pi/2)), with
0 < alpha <= 2 and |theta| <= min(alpha, 2 - alpha).

For x > 0 two power series are available,

    A(x) = 1/(pi x) sum_n (-x^-alpha)^n Gamma(1+n alpha)/n! sin(n pi (theta-alpha)/2)
    B(x) = 1/(pi x) sum_n (-x)^n Gamma(1+n/alpha)/n! sin(n pi (theta-alpha)/(2 alpha))

A converges for alpha < 1 and B for alpha > 1; the other one is then only
asymptotic (A at large x, B at small x).  Each abscissa is served by the
convergent series while its cancellation is harmless, by the asymptotic
series when its smallest term is negligible, and otherwise by the
Zolotarev integral in ``_zolotarev``.  Negative x use L^theta(-x) = L^-theta(x).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma, gammaln

from .errors import DiracLimit, ParameterError
from ._zolotarev import zolotarev_pdf
from . import specfun

_N_TERMS = 400
# accepted cancellation sum|t_n| / |sum t_n| for the convergent series
_SERIES_COND = 1e3
# accepted relative size of the first omitted asymptotic term
_ASYMP_TOL = 1e-16
_DIAMOND_SLACK = 1e-12
_NEAR_ONE = 1e-4

REGIMES = (
    "gaussian",
    "cauchy_family",
    "levy_smirnov_pair",
    "dirac_limit",
    "series_small_alpha",
    "series_large_alpha",
    "tail_asymptotic",
    "alpha_one_skewed_unsupported",
    "integral",
    "outside_support",
)


@dataclass(frozen=True)
class StableParams:
    alpha: float
    theta: float = 0.0

    def __post_init__(self):
        a, th = float(self.alpha), float(self.theta)
        if not (np.isfinite(a) and np.isfinite(th)):
            raise ParameterError("stable parameters must be finite")
        if not (0.0 < a <= 2.0):
            raise ParameterError(f"alpha must lie in (0, 2], got {a}")
        bound = min(a, 2.0 - a)
        if abs(th) > bound + _DIAMOND_SLACK:
            raise ParameterError(
                f"|theta| = {abs(th)} exceeds min(alpha, 2-alpha) = {bound}")
        # snap round-off onto the boundary so extremal cases are detected
        if abs(abs(th) - bound) <= _DIAMOND_SLACK and th != 0.0:
            th = math.copysign(bound, th)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "theta", th)

    @property
    def extremal(self):
        return self.alpha < 2.0 and abs(self.theta) == min(self.alpha, 2.0 - self.alpha)

    def mirrored(self):
        return StableParams(self.alpha, -self.theta)


@dataclass(frozen=True)
class StableRegime:
    tag: str

    def __post_init__(self):
        if self.tag not in REGIMES:
            raise ValueError(f"unknown regime {self.tag!r}")


def validate_params(alpha, theta=0.0):
    """Return StableParams for a point of the Feller-Takayasu diamond."""
    if isinstance(alpha, StableParams):
        return alpha
    return StableParams(alpha, theta)


def as_params(p, theta=None):
    """Coerce StableParams, an (alpha, theta) tuple or a bare alpha."""
    if isinstance(p, StableParams):
        return p
    if isinstance(p, tuple):
        return StableParams(*p)
    return StableParams(p, 0.0 if theta is None else theta)


def _check_evaluable(p):
    if p.alpha == 1.0 and abs(p.theta) == 1.0:
        raise DiracLimit(f"L_1^{p.theta:+g} is a Dirac delta at x = {-p.theta:g}",
                         location=-p.theta)
    if p.theta != 0.0 and p.alpha != 1.0 and abs(p.alpha - 1.0) < _NEAR_ONE:
        raise ParameterError(
            f"alpha = {p.alpha} is within {_NEAR_ONE} of 1 with theta != 0; use "
            "the alpha=1 closed form or Monte Carlo instead")


# ------------------------------------------------------------------ series

def _series_terms(logy, coef_log, sines):
    """Signed terms (-y)^n exp(coef_log[n]) sines[n] for n = 1..N, rows = points."""
    n = np.arange(1, coef_log.size + 1, dtype=float)
    logmag = n[None, :] * logy[:, None] + coef_log[None, :]
    sign = np.where(n % 2 == 1, -1.0, 1.0)[None, :] * sines[None, :]
    with np.errstate(over="ignore", invalid="ignore"):
        bound = np.exp(logmag)
        return sign * bound, bound


def _sum_rows(terms):
    return np.array([math.fsum(row) for row in terms])


def _convergent(logy, coef_log, sines):
    """Sum a convergent series; returns value, acceptance mask."""
    s = np.zeros(logy.size)
    ok = np.zeros(logy.size, dtype=bool)
    # terms beyond e^600 can only mean catastrophic cancellation
    n = np.arange(1, coef_log.size + 1, dtype=float)
    peak = (n[None, :] * logy[:, None] + coef_log[None, :]).max(axis=1)
    rows = np.flatnonzero(peak < 600.0)
    if rows.size == 0:
        return s, ok
    terms, bound = _series_terms(logy[rows], coef_log, sines)
    s[rows] = _sum_rows(terms)
    big = np.abs(terms).sum(axis=1)
    sr = s[rows]
    ok[rows] = ((bound[:, -1] <= _ASYMP_TOL * np.abs(sr))
                & (big <= _SERIES_COND * np.abs(sr)) & (sr > 0))
    return s, ok


def _asymptotic(logy, coef_log, sines):
    """Sum a divergent asymptotic series up to its smallest term."""
    terms, bound = _series_terms(logy, coef_log, sines)
    bound = np.where(np.isfinite(bound), bound, np.inf)
    # first index where the bound stops decreasing
    with np.errstate(invalid="ignore"):
        rising = ~(np.diff(bound, axis=1) < 0)
    stop = np.where(rising.any(axis=1), rising.argmax(axis=1) + 1, bound.shape[1] - 1)
    out = np.empty(logy.size)
    ok = np.zeros(logy.size, dtype=bool)
    for i, m in enumerate(stop):
        if not np.isfinite(bound[i, m]):
            out[i] = 0.0
            continue
        s = math.fsum(terms[i, :m])
        out[i] = s
        ok[i] = s > 0 and bound[i, m] <= _ASYMP_TOL * s
    return out, ok


def _coefs(p, which):
    alpha, theta = p.alpha, p.theta
    n = np.arange(1, _N_TERMS + 1, dtype=float)
    if which == "A":
        coef = gammaln(1.0 + n * alpha) - gammaln(n + 1.0)
        sines = np.sin(n * np.pi * (theta - alpha) / 2.0)
        # theta = alpha - 2: every sine is sin(-n pi)
        if p.extremal and alpha > 1.0 and theta < 0:
            sines[:] = 0.0
    else:
        coef = gammaln(1.0 + n / alpha) - gammaln(n + 1.0)
        sines = np.sin(n * np.pi * (theta - alpha) / (2.0 * alpha))
        if p.extremal and alpha < 1.0 and theta < 0:
            sines[:] = 0.0
    return coef, sines


def _positive_side(p, x):
    """Density and regime tags for x > 0 (array), alpha not in {1, 2}."""
    a, th = p.alpha, p.theta
    out = np.zeros(x.shape)
    tags = np.empty(x.shape, dtype=object)
    if a < 1.0 and th == a:
        tags[:] = "outside_support"
        return out, tags
    if a == 0.5 and th == -0.5:
        out[:] = x ** -1.5 * np.exp(-0.25 / x) / (2.0 * math.sqrt(math.pi))
        tags[:] = "levy_smirnov_pair"
        return out, tags
    logx = np.log(x)
    coef_a, sin_a = _coefs(p, "A")
    coef_b, sin_b = _coefs(p, "B")
    if a < 1.0:
        conv = (-a * logx, coef_a, sin_a, "series_small_alpha")
        asym = (logx, coef_b, sin_b, "tail_asymptotic")
    else:
        conv = (logx, coef_b, sin_b, "series_large_alpha")
        asym = (-a * logx, coef_a, sin_a, "tail_asymptotic")
    todo = np.ones(x.shape, dtype=bool)
    s, ok = _convergent(conv[0], conv[1], conv[2])
    out[ok] = s[ok] / (np.pi * x[ok])
    tags[ok] = conv[3]
    todo &= ~ok
    if todo.any():
        idx = np.flatnonzero(todo)
        s, ok = _asymptotic(asym[0][idx], asym[1], asym[2])
        sel = idx[ok]
        out[sel] = s[ok] / (np.pi * x[sel])
        tags[sel] = asym[3]
        todo[sel] = False
    if todo.any():
        idx = np.flatnonzero(todo)
        out[idx] = zolotarev_pdf(a, th, x[idx])
        tags[idx] = "integral"
    return out, tags


def _at_origin(p):
    a, th = p.alpha, p.theta
    if a < 1.0 and p.extremal:
        return 0.0
    return math.gamma(1.0 + 1.0 / a) * math.cos(th * math.pi / (2.0 * a)) / math.pi


def _evaluate(p, x):
    a, th = p.alpha, p.theta
    out = np.zeros(x.shape)
    tags = np.empty(x.shape, dtype=object)
    if a == 2.0:
        out[:] = np.exp(-x * x / 4.0) / (2.0 * math.sqrt(math.pi))
        tags[:] = "gaussian"
        return out, tags
    if a == 1.0:
        c = math.cos(th * math.pi / 2.0)
        s = math.sin(th * math.pi / 2.0)
        out[:] = c / (np.pi * ((x + s) ** 2 + c * c))
        tags[:] = "cauchy_family"
        return out, tags
    zero = x == 0
    if zero.any():
        out[zero] = _at_origin(p)
        tags[zero] = "series_large_alpha" if a > 1 else "tail_asymptotic"
    for side, q in ((x > 0, p), (x < 0, p.mirrored())):
        if side.any():
            out[side], tags[side] = _positive_side(q, np.abs(x[side]))
    return out, tags


def stable_pdf(p, x, theta=None):
    """L_alpha^theta(x).  ``p`` is StableParams, an (alpha, theta) tuple or alpha.

    Raises DiracLimit for alpha=1, |theta|=1 and ParameterError when alpha is
    within 1e-4 of 1 with theta != 0.
    """
    p = as_params(p, theta)
    _check_evaluable(p)
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)):
        raise ParameterError("x must be finite")
    out, _ = _evaluate(p, xa.ravel())
    out = np.maximum(out, 0.0)
    return float(out[0]) if xa.ndim == 0 else out.reshape(xa.shape)


def stable_regime(p, x, theta=None):
    """Regime tag(s) that stable_pdf uses at x."""
    p = as_params(p, theta)
    if p.alpha == 1.0 and abs(p.theta) == 1.0:
        return StableRegime("dirac_limit")
    if p.theta != 0.0 and p.alpha != 1.0 and abs(p.alpha - 1.0) < _NEAR_ONE:
        return StableRegime("alpha_one_skewed_unsupported")
    xa = np.asarray(x, dtype=float)
    _, tags = _evaluate(p, xa.ravel())
    if xa.ndim == 0:
        return StableRegime(tags[0])
    return [StableRegime(t) for t in tags]


def stable_pdf_scaled(p, x, t, theta=None):
    """t^{-1/alpha} L_alpha^theta(x t^{-1/alpha})."""
    p = as_params(p, theta)
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ParameterError("t must be positive")
    s = t ** (-1.0 / p.alpha)
    res = s * stable_pdf(p, np.asarray(x, dtype=float) * s)
    return float(res) if np.ndim(res) == 0 else res


def stable_cf(p, kappa, theta=None):
    """exp(-|k|^alpha e^{i sign(k) theta pi/2}) as (real, imag)."""
    p = as_params(p, theta)
    k = np.asarray(kappa, dtype=float)
    if not np.all(np.isfinite(k)):
        raise ParameterError("kappa must be finite")
    psi = np.abs(k) ** p.alpha * np.exp(1j * np.sign(k) * p.theta * np.pi / 2.0)
    val = np.exp(-psi)
    if k.ndim == 0:
        return float(val.real), float(val.imag)
    return val.real, val.imag


def extremal_from_wright(alpha, x):
    """Extremal stable density through the M-Wright function.

    alpha < 1:        L_alpha^{-alpha}(x)  = alpha x^{-alpha-1} M_alpha(x^-alpha)
    1 < alpha <= 2:   L_alpha^{alpha-2}(x) = M_{1/alpha}(x) / alpha
    """
    if not (0.0 < alpha <= 2.0):
        raise ParameterError(f"alpha must lie in (0, 2], got {alpha}")
    if alpha == 1.0:
        raise DiracLimit("L_1^{-1} is the Dirac delta at x = 1", location=1.0)
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise ParameterError("x must be positive")
    if alpha < 1.0:
        res = alpha * xa ** (-alpha - 1.0) * specfun.wright_m(alpha, xa ** -alpha)
    else:
        res = specfun.wright_m(1.0 / alpha, xa) / alpha
    return float(res) if np.ndim(res) == 0 else np.asarray(res)


def tail_coefficient(p, side=1):
    """C with L(x) ~ C |x|^{-(alpha+1)} on the given side (+1 right, -1 left)."""
    p = as_params(p)
    th = p.theta if side > 0 else -p.theta
    c = gamma(1.0 + p.alpha) / math.pi * math.sin(math.pi * (p.alpha - th) / 2.0)
    return max(float(c), 0.0)


def stable_tail(p, x, theta=None):
    """One-term power-tail approximation of L_alpha^theta at large |x|."""
    p = as_params(p, theta)
    if p.alpha == 2.0:
        raise ParameterError("the Gaussian has no power tail")
    xa = np.asarray(x, dtype=float)
    right = tail_coefficient(p, 1)
    left = tail_coefficient(p, -1)
    # exponentially thin sides
    if p.extremal and p.alpha != 1.0:
        if p.alpha < 1.0:
            (right, left) = (right, 0.0) if p.theta < 0 else (0.0, left)
        else:
            (right, left) = (0.0, left) if p.theta < 0 else (right, 0.0)
    with np.errstate(divide="ignore"):
        res = np.where(xa >= 0, right, left) * np.abs(xa) ** (-(p.alpha + 1.0))
    return float(res) if xa.ndim == 0 else res
