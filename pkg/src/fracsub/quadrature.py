"""Thin wrappers around QUADPACK with the tolerances used across the package."""
from __future__ import annotations

import warnings

import numpy as np
from scipy import integrate

from .errors import ConvergenceError

EPSABS = 1e-10
EPSREL = 1e-8


def integrate_interval(f, a, b, epsabs=EPSABS, epsrel=EPSREL, limit=500,
                       points=None, strict=False):
    """Adaptive Gauss-Kronrod on [a, b]; b may be np.inf.

    Returns (value, error estimate).  With ``strict`` a QUADPACK warning is
    promoted to ConvergenceError carrying the achieved error.
    """
    kw = dict(epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1)
    if points is not None and np.isfinite(b):
        kw["points"] = points
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, a, b, **kw)
    val, err = out[0], out[1]
    if strict and len(out) > 3 and err > max(epsabs, epsrel * abs(val)) * 10:
        raise ConvergenceError(f"quadrature on [{a}, {b}] reached error {err:.3g}",
                               achieved=err)
    return val, err


def integrate_halfline(f, a=0.0, epsabs=EPSABS, epsrel=EPSREL, breaks=(),
                       limit=500, strict=False):
    """Integral over [a, inf) split at the given break points."""
    edges = [a] + sorted(b for b in breaks if b > a) + [np.inf]
    total = 0.0
    err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e = integrate_interval(f, lo, hi, epsabs=epsabs, epsrel=epsrel,
                                  limit=limit, strict=strict)
        total += v
        err += e
    return total, err
