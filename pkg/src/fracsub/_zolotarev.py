"""Zolotarev-type integral for strictly stable densities in Feller form.

For x > 0 and alpha != 1,

    L(x) = alpha / (pi |alpha-1| x) * int_{-xi}^{pi/2} g exp(-g) dphi,
    g(phi) = x^{alpha/(alpha-1)} W(phi),

with xi = -theta pi / (2 alpha) and W the (monotone) Zolotarev kernel.

The angle is carried as the pair of distances (delta, eps) to the two ends of
the interval, parameterised by a logistic coordinate z (delta = L expit(z),
eps = L expit(-z)), so that W keeps full relative precision at both ends and
the integrand is analytic in z.  A uniform trapezoid rule in z then converges
geometrically.  The nodes z_j do not depend on x and are shared across a batch
of abscissae; only the window where g exp(-g) is non-negligible is summed.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit

# window in s = log g; exp(s - e^s) < 1e-21 outside it
_S_LO = -50.0
_S_HI = 4.0
_BISECT_ITERS = 44
_Z_MAX = 740.0
_CHUNK = 128
_H0 = 0.125
_INVERT_ITERS = 24
_NEWTON_ITERS = 3
_CL_SPAN = 50.0
# largest change of log g, weighted by max(1, g), between live adjacent nodes
_MAX_STEP = 2.0
# plateau ends: integrand ~ e^{-|z|}
_Z_FLOOR = 40.0


class _Kernel:
    def __init__(self, alpha: float, theta: float):
        self.alpha = alpha
        self.theta = theta
        self.c = alpha / (alpha - 1.0)
        self.xi = -theta * np.pi / (2.0 * alpha)
        self.length = np.pi / 2.0 + self.xi
        # pi/2 - A written from either end of the interval
        self.b_delta = (alpha + theta) * np.pi / (2.0 * alpha)
        self.b_eps = (2.0 - alpha + theta) * np.pi / 2.0
        self.increasing = alpha < 1.0
        # W tends to a finite floor at one end on the diamond boundary
        self.floor_low = alpha < 1.0 and self.b_delta == 0.0
        self.floor_high = alpha > 1.0 and self.b_eps == 0.0
        # log W at the floor end (extremal densities only)
        self.v_floor = -self.c * np.log(alpha) + np.log(abs(1.0 - alpha))
        self.lw0 = float(self.log_w(np.array([0.0]))[0])

    def _trig(self, z):
        with np.errstate(divide="ignore", over="ignore"):
            return self._trig_raw(z)

    def _trig_raw(self, z):
        """sin/cot of eps, alpha*delta and B, each taken from the nearer end."""
        a = self.alpha
        delta = self.length * expit(z)
        eps = self.length * expit(-z)
        near = delta < eps
        # pi - eps = b_delta + delta ;  pi - alpha*delta = b_eps + alpha*eps
        e_arg = np.where(near, self.b_delta + delta, eps)
        ad_arg = np.where(near, a * delta, self.b_eps + a * eps)
        b = np.where(near, self.b_delta + (1.0 - a) * delta,
                     self.b_eps + (a - 1.0) * eps)
        sign_e = np.where(near, -1.0, 1.0)
        sign_ad = np.where(near, 1.0, -1.0)
        return (np.sin(e_arg), sign_e / np.tan(e_arg),
                np.sin(ad_arg), sign_ad / np.tan(ad_arg),
                np.sin(b), 1.0 / np.tan(b))

    def log_w(self, z):
        sin_e, _, sin_ad, _, sin_b, _ = self._trig(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            return (self.c * (np.log(sin_e) - np.log(sin_ad))
                    + np.log(sin_b) - np.log(sin_e))

    def dlog_w(self, z):
        a = self.alpha
        _, cot_e, _, cot_ad, _, cot_b = self._trig(z)
        return self.c * (-cot_e - a * cot_ad) + (1.0 - a) * cot_b + cot_e

    def solve(self, v):
        """Logistic coordinate z with log W = v, by vectorised bisection."""
        lo = np.full(v.shape, -_Z_MAX)
        hi = np.full(v.shape, _Z_MAX)
        for _ in range(_BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            f = self.log_w(mid) - v
            above = f > 0 if self.increasing else f < 0
            hi = np.where(above, mid, hi)
            lo = np.where(above, lo, mid)
        return 0.5 * (lo + hi)

    def log_dphi(self, z):
        return np.log(self.length) + _log_expit(z) + _log_expit(-z)


def _log_expit(z):
    return -np.logaddexp(0.0, -z)


def _window(kern: _Kernel, cl: np.ndarray):
    v_lo = _S_LO - cl.max()
    v_hi = _S_HI - cl.min()
    if kern.floor_low or kern.floor_high:
        # far exponential tail: g never drops to O(1), the floor dominates
        v_hi = max(v_hi, kern.v_floor + 1.0)
    za, zb = kern.solve(np.array([v_lo, v_hi]))
    z_lo, z_hi = min(za, zb), max(za, zb)
    if kern.floor_low:
        z_lo = max(z_lo, -_Z_FLOOR)
    if kern.floor_high:
        z_hi = min(z_hi, _Z_FLOOR)
    return z_lo, z_hi


def _u_of_z(kern: _Kernel, z):
    """Stretched coordinate u = z + |log W(z) - log W(0)|, increasing in z."""
    lw = kern.log_w(z)
    return z + (lw - kern.lw0 if kern.increasing else kern.lw0 - lw), lw


def _invert_u(kern: _Kernel, u, z_lo, z_hi):
    """Bisection to a small bracket, then Newton steps on u(z) = u."""
    lo = np.full(u.shape, z_lo)
    hi = np.full(u.shape, z_hi)
    for _ in range(_INVERT_ITERS):
        mid = 0.5 * (lo + hi)
        above = _u_of_z(kern, mid)[0] > u
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    z = 0.5 * (lo + hi)
    for _ in range(_NEWTON_ITERS):
        du = 1.0 + np.abs(kern.dlog_w(z)) * np.exp(kern.log_dphi(z))
        step = (_u_of_z(kern, z)[0] - u) / du
        z = np.clip(z - np.where(np.isfinite(step), step, 0.0), lo, hi)
    return z


def _nodes(kern: _Kernel, cl: np.ndarray):
    """Trapezoid nodes uniform in u; returns z, log W, log(dz/du), h."""
    z_lo, z_hi = _window(kern, cl)
    u_lo = _u_of_z(kern, np.array([z_lo]))[0][0]
    u_hi = _u_of_z(kern, np.array([z_hi]))[0][0]
    # the stretch makes log W move by at most ~h per node
    h = _H0
    while True:
        u = np.arange(np.floor(u_lo / h) - 1, np.ceil(u_hi / h) + 2) * h
        z = _invert_u(kern, u, z_lo - 1.0, z_hi + 1.0)
        lw = kern.log_w(z)
        dlw = np.abs(np.diff(lw))
        worst = 0.0
        for c in (cl.min(), cl.max()):
            s = np.minimum(c + lw[:-1], 50.0)
            expo = s - np.exp(s)
            live = expo > max(expo.max() - 12.0, -80.0)
            if live.any():
                worst = max(worst, float((dlw * np.maximum(1.0, np.exp(s)))[live].max()))
        if worst <= _MAX_STEP or h < 1e-6 or u.size > 400_000:
            dz_lw = np.abs(kern.dlog_w(z)) * np.exp(kern.log_dphi(z))
            log_jac = -np.log1p(dz_lw)
            return z, lw, log_jac, h
        h *= 0.5


def _density_chunk(kern: _Kernel, logx: np.ndarray) -> np.ndarray:
    cl = kern.c * logx
    z, lw, log_jac, h = _nodes(kern, cl)
    log_dphi = kern.log_dphi(z) + log_jac
    s = cl[:, None] + lw[None, :]
    with np.errstate(over="ignore", invalid="ignore"):
        expo = -logx[:, None] + s - np.exp(np.minimum(s, 700.0)) + log_dphi[None, :]
    expo = np.where(np.isfinite(expo), expo, -np.inf)
    total = np.exp(expo).sum(axis=1) * h
    a = kern.alpha
    return a / (np.pi * abs(a - 1.0)) * total


def zolotarev_pdf(alpha: float, theta: float, x) -> np.ndarray:
    """Stable density L_alpha^theta(x) for x > 0 (alpha != 1)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    kern = _Kernel(alpha, theta)
    if kern.length <= 0.0:
        return out
    flat = x.ravel()
    logx = np.log(flat)
    order = np.argsort(logx)
    cl = kern.c * logx[order]
    res = np.empty_like(logx)
    start = 0
    while start < order.size:
        # keep each batch narrow in log g so the shared nodes stay cheap
        stop = start + 1
        while (stop < order.size and stop - start < _CHUNK
               and abs(cl[stop] - cl[start]) <= _CL_SPAN):
            stop += 1
        sel = order[start:stop]
        res[sel] = _density_chunk(kern, logx[sel])
        start = stop
    return res.reshape(x.shape)
