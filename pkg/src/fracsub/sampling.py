"""Stable random deviates on reproducible random streams.

Two-sided deviates use the Chambers-Mallows-Stuck construction in the S1
parameterisation (alpha, beta, sigma, mu); ``feller_to_cms`` maps Feller's
(alpha, theta) onto it.  One-sided deviates with Laplace transform
exp(-s^beta) use Kanter's representation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .stable import StableParams, as_params

_TWO_M53 = 2.0 ** -53


class RngStream:
    """Counter-based (Philox) uniform source keyed by (seed, stream_id).

    Sub-streams with different ``stream_id`` come from the same SeedSequence
    spawn tree and are independent.  Not thread safe: one owner at a time.
    """

    def __init__(self, seed: int, stream_id: int = 0):
        if seed < 0 or stream_id < 0:
            raise ParameterError("seed and stream_id must be nonnegative")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self._bitgen = np.random.Philox(ss)

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    @property
    def state(self):
        return self._bitgen.state

    def uniform(self, size=None):
        """Uniforms on the open interval (0, 1) with 53 random bits."""
        n = 1 if size is None else int(np.prod(size))
        raw = self._bitgen.random_raw(n)
        u = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO_M53
        if size is None:
            return float(u[0])
        return u.reshape(size)

    def exponential(self, size=None):
        u = self.uniform(size)
        return -np.log(u) if size is not None else -math.log(u)


@dataclass(frozen=True)
class CmsParams:
    alpha: float
    beta_skew: float
    scale: float
    loc: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.alpha <= 2.0):
            raise ParameterError(f"alpha must lie in (0, 2], got {self.alpha}")
        if not (-1.0 <= self.beta_skew <= 1.0):
            raise ParameterError("beta_skew must lie in [-1, 1]")
        if self.scale < 0:
            raise ParameterError("scale must be nonnegative")


def feller_to_cms(p, theta=None) -> CmsParams:
    """S1 parameters whose characteristic function is exp(-psi_alpha^theta).

    alpha != 1:  beta = -tan(theta pi/2) / tan(alpha pi/2), sigma = cos(theta pi/2)^(1/alpha)
    alpha == 1:  beta = 0, sigma = cos(theta pi/2), mu = -sin(theta pi/2)
    """
    p = as_params(p, theta)
    a, th = p.alpha, p.theta
    c = math.cos(th * math.pi / 2.0)
    if a == 1.0:
        if abs(th) == 1.0:
            c = 0.0
        return CmsParams(1.0, 0.0, c, -math.sin(th * math.pi / 2.0))
    if a == 2.0:
        return CmsParams(2.0, 0.0, 1.0)
    b = -math.tan(th * math.pi / 2.0) / math.tan(a * math.pi / 2.0)
    # boundary values only differ from +-1 by rounding
    b = min(1.0, max(-1.0, b))
    return CmsParams(a, b, c ** (1.0 / a))


def cms_deviates(cms: CmsParams, v, w):
    """CMS transform of angles v in (-pi/2, pi/2) and unit exponentials w."""
    a, b = cms.alpha, cms.beta_skew
    if a == 1.0:
        hb = math.pi / 2.0 + b * v
        x = (2.0 / math.pi) * (hb * np.tan(v)
                               - b * np.log((math.pi / 2.0) * w * np.cos(v) / hb))
        shift = 0.0
        if b != 0.0 and cms.scale > 0:
            shift = (2.0 / math.pi) * b * cms.scale * math.log(cms.scale)
        return cms.scale * x + shift + cms.loc
    t = b * math.tan(math.pi * a / 2.0)
    b0 = math.atan(t) / a
    s = (1.0 + t * t) ** (1.0 / (2.0 * a))
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        x = (s * np.sin(a * (v + b0)) / np.cos(v) ** (1.0 / a)
             * (np.cos(v - a * (v + b0)) / w) ** ((1.0 - a) / a))
    return cms.scale * x + cms.loc


def sample_cms(cms: CmsParams, rng: RngStream, size=None):
    n = 1 if size is None else size
    v = math.pi * (rng.uniform(n) - 0.5)
    w = rng.exponential(n)
    x = cms_deviates(cms, v, w)
    return float(x[0]) if size is None else x


def stable_from_uniforms(p, u_angle, u_exp):
    """L_alpha^theta deviates from two arrays of open-interval uniforms."""
    p = as_params(p)
    x = cms_deviates(feller_to_cms(p), np.pi * (u_angle - 0.5), -np.log(u_exp))
    if p.extremal and p.alpha < 1.0:
        # guard the a.s. sign of one-sided laws against rounding
        x = np.abs(x) * (-1.0 if p.theta > 0 else 1.0)
    return x


def sample_stable(p, rng: RngStream, size=None, theta=None):
    """Deviate(s) with density L_alpha^theta."""
    p = as_params(p, theta)
    n = 1 if size is None else size
    v = rng.uniform(n)
    w = rng.uniform(n)
    x = stable_from_uniforms(p, v, w)
    return float(x[0]) if size is None else x


def kanter_deviates(beta, u, w):
    """Kanter's map of U(0, pi) angles and unit exponentials."""
    with np.errstate(divide="ignore"):
        log_t = (np.log(np.sin(beta * u)) - np.log(np.sin(u)) / beta
                 + (1.0 - beta) / beta * (np.log(np.sin((1.0 - beta) * u)) - np.log(w)))
    return np.exp(log_t)


def one_sided_from_uniforms(beta, u_angle, u_exp):
    return kanter_deviates(beta, np.pi * u_angle, -np.log(u_exp))


def sample_one_sided(beta, rng: RngStream, size=None):
    """Positive deviate(s) with Laplace transform exp(-s^beta), 0 < beta < 1."""
    if not (0.0 < beta < 1.0):
        raise ParameterError(f"beta must lie in (0, 1), got {beta}")
    n = 1 if size is None else size
    u = rng.uniform(n)
    w = rng.uniform(n)
    t = one_sided_from_uniforms(beta, u, w)
    return float(t[0]) if size is None else t


def sample_scaled_increments(p_or_beta, tau_star, n, rng: RngStream):
    """n i.i.d. increments for an operational step tau_star.

    A float ``beta`` gives waiting times tau T_k with tau = tau_star^(1/beta);
    StableParams (or an (alpha, theta) tuple) gives jumps h X_k with
    h = tau_star^(1/alpha).
    """
    if tau_star <= 0:
        raise ParameterError("tau_star must be positive")
    if n < 1:
        raise ParameterError("n must be at least 1")
    if isinstance(p_or_beta, (StableParams, tuple)):
        p = as_params(p_or_beta)
        h = tau_star ** (1.0 / p.alpha)
        return h * sample_stable(p, rng, size=n)
    beta = float(p_or_beta)
    if beta == 1.0:
        return np.full(n, float(tau_star))
    tau = tau_star ** (1.0 / beta)
    return tau * sample_one_sided(beta, rng, size=n)
