"""Mittag-Leffler and Wright-type auxiliary functions on the real line.

E_{a,b}(z) = sum_k z^k / Gamma(a k + b)

M_nu(z) = sum_k (-z)^k / (k! Gamma(1 - nu - nu k)),   0 < nu < 1
F_nu(z) = nu z M_nu(z)

The power series are summed with math.fsum and used only where their
cancellation is mild.  Elsewhere E_{a,b}(-x) comes from the Laplace inversion
along the branch cut (plus pole residues when a > 1) and M_nu from its link to
the one-sided stable density.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaln, gammasgn, rgamma

from .errors import AccuracyWarning, ParameterError
from ._zolotarev import zolotarev_pdf

# accept a power series when sum|t_k| / |sum t_k| stays below this
_ML_COND = 1e4
_WRIGHT_COND = 1e3
_MAX_TERMS = 20000
_BLOCK = 64
_WRIGHT_BLOCK = 256


@dataclass(frozen=True)
class MlParams:
    alpha: float
    beta: float = 1.0

    def __post_init__(self):
        _check_ml(self.alpha, self.beta)

    @property
    def completely_monotone(self):
        return is_completely_monotone(self.alpha, self.beta)


@dataclass(frozen=True)
class WrightOrder:
    nu: float

    def __post_init__(self):
        _check_nu(self.nu)


def is_completely_monotone(alpha, beta=1.0):
    """True when x -> E_{alpha,beta}(-x) is completely monotone on x > 0."""
    return 0.0 < alpha <= beta <= 1.0


def _check_ml(alpha, beta):
    if not (np.isfinite(alpha) and np.isfinite(beta)):
        raise ParameterError("Mittag-Leffler parameters must be finite")
    if alpha <= 0:
        raise ParameterError(f"alpha must be positive, got {alpha}")


def _check_nu(nu):
    if not (0.0 < nu < 1.0):
        raise ParameterError(f"Wright order must lie in (0, 1), got {nu}")


# ---------------------------------------------------------------- series

def _ml_taylor(alpha, beta, z):
    """Taylor sum and its condition number sum|t_k|/|S|."""
    if z == 0:
        return float(rgamma(beta)), 1.0
    lz = math.log(abs(z))
    neg = z < 0
    terms = []
    k0 = 0
    peak = -np.inf
    while k0 < _MAX_TERMS:
        k = np.arange(k0, k0 + _BLOCK, dtype=float)
        arg = alpha * k + beta
        logmag = k * lz - gammaln(arg)
        sgn = gammasgn(arg)
        if neg:
            sgn = sgn * np.where(k % 2 == 1, -1.0, 1.0)
        t = sgn * np.exp(logmag)
        terms.extend(t.tolist())
        peak = max(peak, logmag.max())
        k0 += _BLOCK
        # stop once past the peak and far below it
        if logmag[-1] < logmag[0] and logmag[-1] < peak - 40.0:
            break
    s = math.fsum(terms)
    big = math.fsum(abs(v) for v in terms)
    cond = big / abs(s) if s != 0 else np.inf
    return s, cond


def _ml_taylor_complex(alpha, beta, z):
    lz = math.log(abs(z)) if z != 0 else -np.inf
    if z == 0:
        return complex(rgamma(beta)), 1.0
    phase = cmath.exp(1j * cmath.phase(z))
    re, im, mags = [], [], []
    k0 = 0
    peak = -np.inf
    while k0 < _MAX_TERMS:
        k = np.arange(k0, k0 + _BLOCK, dtype=float)
        arg = alpha * k + beta
        logmag = k * lz - gammaln(arg)
        t = gammasgn(arg) * np.exp(logmag) * phase ** k
        re.extend(t.real.tolist())
        im.extend(t.imag.tolist())
        mags.extend(np.exp(logmag).tolist())
        peak = max(peak, logmag.max())
        k0 += _BLOCK
        if logmag[-1] < logmag[0] and logmag[-1] < peak - 40.0:
            break
    s = complex(math.fsum(re), math.fsum(im))
    big = math.fsum(mags)
    return s, (big / abs(s) if s != 0 else np.inf)


# ------------------------------------------------- Laplace inversion, z < 0

def _kernel(alpha, beta, r):
    ra = r ** alpha
    num = ra * math.sin(math.pi * beta) + math.sin(math.pi * (beta - alpha))
    den = ra * ra + 2.0 * ra * math.cos(math.pi * alpha) + 1.0
    return r ** (alpha - beta) * num / (math.pi * den)


def _ml_negative_integral(alpha, beta, x):
    """E_{alpha,beta}(-x), x > 0, with 0 < beta < 1 + alpha and alpha < 2 or = 2.

    t^{beta-1} E(-t^alpha) = int_0^inf e^{-rt} K(r) dr + sum of pole residues.
    """
    t = x ** (1.0 / alpha)

    def f(u):
        return math.exp(-u) * _kernel(alpha, beta, u / t) / t

    opts = dict(epsabs=0.0, epsrel=1e-13, limit=400)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if t < 1e3:
            a, _ = integrate.quad(f, 0.0, 2.0 * t, points=[t], **opts)
            b, _ = integrate.quad(f, 2.0 * t, np.inf, **opts)
        else:
            # the r=1 feature sits at u=t where e^{-u} has underflowed
            a, _ = integrate.quad(f, 0.0, 50.0, **opts)
            b, _ = integrate.quad(f, 50.0, np.inf, **opts)
    val = a + b
    if alpha > 1.0:
        sp = cmath.exp(1j * math.pi / alpha)
        val += 2.0 / alpha * (cmath.exp(sp * t) * sp ** (1.0 - beta)).real
    return t ** (1.0 - beta) * val


def _ml_alpha_one(beta, z):
    """E_{1,beta}(z) for z < 0."""
    if beta == 1.0:
        return math.exp(z)
    if beta < 1.0:
        return float(rgamma(beta)) + z * _ml_alpha_one(beta + 1.0, z)
    if beta > 2.0:
        return (_ml_alpha_one(beta - 1.0, z) - float(rgamma(beta - 1.0))) / z
    if beta == 2.0:
        return math.expm1(z) / z
    # 1 < beta < 2: Gamma(beta-1)^{-1} int_0^1 e^{zu} (1-u)^{beta-2} du
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        v, _ = integrate.quad(lambda u: math.exp(z * u), 0.0, 1.0, weight="alg",
                              wvar=(0.0, beta - 2.0), epsabs=0.0, epsrel=1e-13,
                              limit=200)
    return v * float(rgamma(beta - 1.0))


def _ml_scalar(alpha, beta, z):
    if not np.isfinite(z):
        raise ParameterError("Mittag-Leffler argument must be finite")
    if alpha == 1.0 and beta == 1.0:
        return math.exp(z)
    if z < 0 and alpha <= 2.0 and abs(z) ** (1.0 / alpha) > 30.0:
        # sum|t_k| ~ exp(|z|^{1/alpha}): hopeless cancellation
        return _ml_alpha_one(beta, z) if alpha == 1.0 else _ml_negative(alpha, beta, z)
    s, cond = _ml_taylor(alpha, beta, z)
    if z >= 0 or cond <= _ML_COND:
        return s
    if alpha == 1.0:
        return _ml_alpha_one(beta, z)
    if alpha > 2.0:
        warnings.warn(f"E_{{{alpha},{beta}}}({z}): power series with condition "
                      f"{cond:.2g}", AccuracyWarning, stacklevel=3)
        return s
    return _ml_negative(alpha, beta, z)


def _ml_negative(alpha, beta, z):
    if beta <= 0.0:
        return float(rgamma(beta)) + z * _ml_negative(alpha, beta + alpha, z)
    if beta >= 1.0 + alpha:
        return (_ml_negative(alpha, beta - alpha, z) - float(rgamma(beta - alpha))) / z
    return _ml_negative_integral(alpha, beta, -z)


def mittag_leffler(alpha, beta, z):
    """Two-parameter Mittag-Leffler function E_{alpha,beta}(z) for real z.

    Works elementwise on arrays.  For 0 < alpha <= 2 the result keeps a
    relative accuracy near 1e-12 on the whole negative axis.
    """
    _check_ml(alpha, beta)
    alpha = float(alpha)
    beta = float(beta)
    z_arr = np.asarray(z, dtype=float)
    if z_arr.ndim == 0:
        return _ml_scalar(alpha, beta, float(z_arr))
    out = np.array([_ml_scalar(alpha, beta, float(v)) for v in z_arr.ravel()])
    return out.reshape(z_arr.shape)


def _ml_complex_cut(beta, lam):
    """E_beta(-lam) for complex lam, 0 < beta < 1, via Laplace inversion."""
    lam = complex(lam)

    def F(s):
        return s ** (beta - 1.0) / (s ** beta + lam)

    def k(r):
        a = F(r * cmath.exp(-1j * math.pi))
        b = F(r * cmath.exp(1j * math.pi))
        return (a - b) / (2j * math.pi)

    opts = dict(epsabs=1e-15, epsrel=1e-12, limit=400)
    rho = abs(lam) ** (1.0 / beta)
    parts = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for fn in (lambda r: (math.exp(-r) * k(r)).real,
                   lambda r: (math.exp(-r) * k(r)).imag):
            if rho < 700:
                v = integrate.quad(fn, 0.0, 2 * rho, points=[rho], **opts)[0]
                v += integrate.quad(fn, 2 * rho, np.inf, **opts)[0]
            else:
                v = integrate.quad(fn, 0.0, np.inf, **opts)[0]
            parts.append(v)
    val = complex(parts[0], parts[1])
    # pole of F inside the cut plane
    arg_m = cmath.phase(-lam)
    if abs(arg_m) / beta < math.pi:
        sp = rho * cmath.exp(1j * arg_m / beta)
        val += cmath.exp(sp) / beta
    return val


def mittag_leffler_complex(beta, z):
    """E_beta(z) for complex z; meant for the ray arguments of green_cf."""
    if not (0.0 < beta <= 1.0):
        raise ParameterError(f"beta must lie in (0, 1], got {beta}")
    z = complex(z)
    if beta == 1.0:
        return cmath.exp(z)
    if z.imag == 0.0:
        return complex(mittag_leffler(beta, 1.0, z.real))
    if abs(z) ** (1.0 / beta) > 30.0 and z.real < 0:
        return _ml_complex_cut(beta, -z)
    s, cond = _ml_taylor_complex(beta, 1.0, z)
    if cond <= _ML_COND or z.real > 0 and abs(cmath.phase(z)) < beta * math.pi / 2:
        return s
    return _ml_complex_cut(beta, -z)


def ml_relaxation(alpha, beta, lam, t):
    """e_{alpha,beta}(t; lam) = t^{beta-1} E_{alpha,beta}(-lam t^alpha)."""
    if not (0.0 < alpha <= 1.0):
        raise ParameterError(f"alpha must lie in (0, 1], got {alpha}")
    if lam <= 0:
        raise ParameterError("lambda must be positive")
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ParameterError("t must be positive")
    return t ** (beta - 1.0) * mittag_leffler(alpha, beta, -lam * t ** alpha)


def ml_spectral_density(alpha, r):
    """Spectral density K_alpha(r) of E_alpha(-t^alpha), 0 < alpha < 1."""
    if not (0.0 < alpha < 1.0):
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ParameterError("r must be positive")
    ra = r ** alpha
    return (r ** (alpha - 1.0) * np.sin(alpha * np.pi)
            / (np.pi * (ra * ra + 2.0 * ra * np.cos(alpha * np.pi) + 1.0)))


# ------------------------------------------------------------- Wright M

def _wright_series(nu, z):
    """Series of M_nu at z >= 0, returned with its condition number.

    Pairwise (numpy) summation: with the accepted condition number its
    rounding error stays near 1e-12 relative.
    """
    if z == 0:
        return float(rgamma(1.0 - nu)), 1.0
    lz = math.log(z)
    parts = []
    k0 = 0
    peak = -np.inf
    while k0 < _MAX_TERMS:
        k = np.arange(k0, k0 + _WRIGHT_BLOCK, dtype=float)
        # 1/Gamma(1 - nu(k+1)) = Gamma(nu(k+1)) sin(pi nu (k+1)) / pi
        m = nu * (k + 1.0)
        logmag = k * lz - gammaln(k + 1.0) + gammaln(m)
        sgn = np.where(k % 2 == 1, -1.0, 1.0) * np.sin(np.pi * m)
        parts.append(sgn * np.exp(logmag) / np.pi)
        peak = max(peak, logmag.max())
        k0 += _WRIGHT_BLOCK
        if logmag[-1] < logmag[0] and logmag[-1] < peak - 40.0:
            break
    terms = np.concatenate(parts)
    s = float(terms.sum())
    big = float(np.abs(terms).sum())
    return s, (big / abs(s) if s > 0 else np.inf)


def _wright_bridge(nu, z):
    """M_nu(z) = x^{nu+1} L_nu^{-nu}(x) / nu with x = z^{-1/nu}."""
    z = np.asarray(z, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        logx = -np.log(z) / nu
    x = np.exp(logx)
    out = np.zeros(z.shape)
    ok = np.isfinite(x) & (x > 0)
    if ok.any():
        dens = zolotarev_pdf(nu, -nu, x[ok])
        with np.errstate(over="ignore", invalid="ignore"):
            val = np.exp((nu + 1.0) * logx[ok]) * dens / nu
        out[ok] = np.where(dens > 0, val, 0.0)
    return out


def wright_m(nu, z):
    """M-Wright function M_nu(z) for z >= 0 (array-friendly)."""
    _check_nu(nu)
    z_arr = np.asarray(z, dtype=float)
    if np.any(~np.isfinite(z_arr)):
        raise ParameterError("argument must be finite")
    if np.any(z_arr < 0):
        raise ParameterError("M-Wright argument must be nonnegative")
    flat = z_arr.ravel()
    out = np.empty(flat.shape)
    if nu == 0.5:
        out[:] = np.exp(-flat * flat / 4.0) / math.sqrt(math.pi)
        return out.reshape(z_arr.shape) if z_arr.ndim else float(out[0])
    todo = []
    for i, v in enumerate(flat):
        # sum|t_k| grows like exp((1-nu) z^{1/(1-nu)})
        if v == 0.0 or math.log(1.0 - nu) + math.log(v) / (1.0 - nu) < math.log(25.0):
            s, cond = _wright_series(nu, float(v))
            if cond <= _WRIGHT_COND:
                out[i] = s
                continue
        todo.append(i)
    if todo:
        idx = np.array(todo)
        out[idx] = _wright_bridge(nu, flat[idx])
    if z_arr.ndim == 0:
        return float(out[0])
    return out.reshape(z_arr.shape)


def wright_f(nu, z):
    """F_nu(z) = nu z M_nu(z)."""
    m = wright_m(nu, z)
    return nu * np.asarray(z, dtype=float) * m if np.ndim(m) else nu * float(z) * m


def wright_m_density(nu, x, t):
    """t^{-nu} M_nu(x t^{-nu}); a probability density in x >= 0."""
    _check_nu(nu)
    if np.any(np.asarray(t) <= 0):
        raise ParameterError("t must be positive")
    s = np.asarray(t, dtype=float) ** (-nu)
    res = s * wright_m(nu, np.asarray(x, dtype=float) * s)
    return float(res) if np.ndim(res) == 0 else res


def wright_m_moment(nu, delta):
    """Absolute moment int_0^inf r^delta M_nu(r) dr = Gamma(delta+1)/Gamma(nu delta+1)."""
    _check_nu(nu)
    if delta <= -1:
        raise ParameterError(f"moment order must exceed -1, got {delta}")
    return math.exp(math.lgamma(delta + 1.0) - math.lgamma(nu * delta + 1.0))
