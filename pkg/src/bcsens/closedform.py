"""Closed-form reference values for the oracle instances.

Brownian motion below a linear boundary, the Brownian bridge below a linear
boundary, the hitting-time density of a linear boundary, the moment
generating function of the meander endpoint, the Daniels curve, and the
hyperbolic-tangent drift.  These are used as ground truth throughout the
test and verification suites; precision must exceed every acceptance
tolerance, so the normal CDF is evaluated through the complementary error
function (absolute error below 1e-12).

All functions broadcast over numpy arrays in their leading argument.
"""

from __future__ import annotations

import numpy as np
from scipy.special import erfc

SQRT2 = np.sqrt(2.0)
INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


def std_normal_cdf(z):
    return 0.5 * erfc(-np.asarray(z, dtype=float) / SQRT2)


def std_normal_pdf(z):
    z = np.asarray(z, dtype=float)
    return INV_SQRT_2PI * np.exp(-0.5 * z * z)


def _phi_t(y, t):
    """Gaussian density with variance t evaluated at y."""
    rt = np.sqrt(t)
    return std_normal_pdf(y / rt) / rt


def bm_linear_v(s, x, a1: float, b1: float, T: float = 1.0):
    """Probability that Brownian motion from (s, x) stays below a1 + b1*t
    up to time T.  Requires x below the boundary at time s."""
    s = np.asarray(s, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(x >= a1 + b1 * s):
        raise ValueError("start point must lie strictly below the boundary")
    rt = np.sqrt(T - s)
    first = std_normal_cdf((a1 + b1 * T - x) / rt)
    second = np.exp(-2.0 * b1 * (a1 + b1 * s - x)) * std_normal_cdf(
        (x - a1 + b1 * T - 2.0 * b1 * s) / rt)
    return first - second


def bm_linear_grad(a1: float, b1: float, a2: float, b2: float) -> float:
    """Boundary-perturbation derivative of the Brownian-motion probability
    for the direction a2 + b2*t (horizon 1, start at the origin)."""
    if a1 <= 0:
        raise ValueError("intercept a1 must be positive")
    return float(2.0 * a2 * std_normal_pdf(a1 + b1)
                 + 2.0 * (a1 * b2 + b1 * a2) * np.exp(-2.0 * a1 * b1)
                 * std_normal_cdf(b1 - a1))


def bm_linear_vprime(t, a1: float, b1: float):
    """One-sided spatial derivative of bm_linear_v at the boundary, T=1.

    Always negative for b1 >= 0; blows up like (1-t)^(-1/2) as t -> 1.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0.0) or np.any(t >= 1.0):
        raise ValueError("t must lie in (0, 1)")
    omt = 1.0 - t
    return (-np.sqrt(2.0 / (np.pi * omt)) * np.exp(-0.5 * b1 * b1 * omt)
            - 2.0 * b1 * std_normal_cdf(b1 * np.sqrt(omt)))


def bachelier_levy(t, a1: float, b1: float):
    """Density of the first hitting time of a1 + b1*t by Brownian motion."""
    t = np.asarray(t, dtype=float)
    return (a1 / t) * _phi_t(a1 + b1 * t, t)


def bb_linear_v(s, x, a1: float, b1: float, y_pin: float):
    """Non-crossing probability for the Brownian bridge pinned at (1, y_pin)
    below a1 + b1*t, from the space-time point (s, x)."""
    s = np.asarray(s, dtype=float)
    x = np.asarray(x, dtype=float)
    if a1 <= 0 or a1 + b1 <= y_pin:
        raise ValueError("boundary must start positive and end above the pin")
    if np.any(x >= a1 + b1 * s) or np.any(s >= 1.0):
        raise ValueError("start point must lie below the boundary with s < 1")
    return 1.0 - np.exp(-2.0 * (a1 + b1 * s - x) * (a1 + b1 - y_pin) / (1.0 - s))


def bb_linear_grad(a1: float, b1: float, a2: float, b2: float, y_pin: float) -> float:
    """Boundary-perturbation derivative of bb_linear_v at (0, 0) in the
    direction a2 + b2*t."""
    return float(2.0 * (2.0 * a1 * a2 - a2 * y_pin + (b1 * a2 + a1 * b2))
                 * np.exp(-2.0 * a1 * (a1 + b1 - y_pin)))


def bb_fpt_density(t, a1: float, b1: float, y_pin: float):
    """Hitting-time density of a1 + b1*t for the pinned bridge: the
    free-motion density reweighted by the pin likelihood."""
    t = np.asarray(t, dtype=float)
    g_t = a1 + b1 * t
    return (_phi_t(y_pin - g_t, 1.0 - t) / _phi_t(y_pin, 1.0)
            * bachelier_levy(t, a1, b1))


def meander_mgf(lam):
    """E exp(lam * M_1) for the endpoint M_1 of the unit Brownian meander."""
    lam = np.asarray(lam, dtype=float)
    return 1.0 + np.sqrt(2.0 * np.pi) * lam * np.exp(0.5 * lam * lam) * std_normal_cdf(lam)


def daniels_g(t):
    """The explicit image-method boundary 1/2 - t log((1+sqrt(1+8e^(-1/t)))/4).

    Continuous extension 1/2 at t=0 (the exponential term vanishes to all
    orders there).
    """
    t_in = np.asarray(t, dtype=float)
    t1 = np.atleast_1d(t_in)
    out = np.full(t1.shape, 0.5)
    m = t1 > 1e-8
    tm = t1[m]
    out[m] = 0.5 - tm * np.log(0.25 * (1.0 + np.sqrt(1.0 + 8.0 * np.exp(-1.0 / tm))))
    return float(out[0]) if t_in.ndim == 0 else out


def hyperbolic_mu(x, kappa: float, lam: float):
    """Drift kappa (1 - lam e^(-2 kappa x)) / (1 + lam e^(-2 kappa x)),
    lam > 0; a smooth bounded drift interpolating between -kappa and kappa."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    x = np.asarray(x, dtype=float)
    # (1-e)/(1+e) with e = lam exp(-2 kappa x) equals tanh(kappa x - ln(lam)/2);
    # the tanh form cannot overflow for large |x|
    return kappa * np.tanh(kappa * x - 0.5 * np.log(lam))
