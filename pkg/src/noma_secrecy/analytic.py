"""Closed-form secrecy metrics for the two-user NOMA downlink.

Covers the secrecy outage probability with and without the external
eavesdropper and the ergodic (secrecy) rates of both users.  All
exp(.)*Ei(-.) products go through specfun.exp_ei so nothing overflows at
high SNR or large path loss.  Secrecy rates are signed differences
(achievable minus leakage) and are deliberately not clamped at zero; outage
probabilities are clamped to [0, 1] with the clamping amount reported when
it exceeds numerical noise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import specfun
from .core import Mode, ValidatedConfig
from .quad import QuadratureRule, integrate_cheb, make_rule

LOG2E = 1.0 / math.log(2.0)

# Clamping below this magnitude is ordinary floating-point noise.
_CLAMP_REPORT = 1e-9

_DEFAULT_QUAD_N = 200


class Method(str, Enum):
    ANALYTIC = "analytic"
    MONTE_CARLO = "monte-carlo"
    ORACLE = "oracle"


@dataclass(frozen=True)
class MetricEstimate:
    """A metric value plus how it was obtained.

    std_err is present exactly when the method is Monte Carlo.  meta carries
    evaluation details (quadrature order, iteration count, seed, clamping).
    """

    value: float
    method: Method
    std_err: float | None = None
    meta: dict = field(default_factory=dict)


def _clamped_probability(raw: float, meta: dict) -> float:
    clamped = min(1.0, max(0.0, raw))
    if abs(clamped - raw) > _CLAMP_REPORT:
        meta["clamp"] = raw - clamped
    return clamped


def _require_mode(vc: ValidatedConfig, mode: Mode, what: str) -> None:
    if vc.cfg.mode is not mode:
        raise ValueError(f"{what} requires mode {mode.value}, got {vc.cfg.mode.value}")


def eve_far_sinr_cdf(vc: ValidatedConfig, x):
    """CDF of the external eavesdropper's SINR for the far-user message.

    X = g_e a_n^2 / (g_e a_m^2 + 1/P) for an exponential normalized gain
    g_e; the support ends at a_n^2/a_m^2 where the CDF saturates at one.
    """
    c = vc.cfg
    x = np.asarray(x, dtype=float)
    cap = c.a_n_sq / c.a_m_sq
    rate_e = vc.derived.gain_rate_e
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        body = 1.0 - np.exp(-rate_e * x / (c.p_bs * (c.a_n_sq - c.a_m_sq * x)))
    out = np.where(x < cap, body, 1.0)
    out = np.where(x <= 0.0, 0.0, out)
    return out if out.ndim else float(out)


def eve_far_sinr_pdf(vc: ValidatedConfig, x):
    """Density matching eve_far_sinr_cdf; zero outside (0, a_n^2/a_m^2)."""
    c = vc.cfg
    x = np.asarray(x, dtype=float)
    cap = c.a_n_sq / c.a_m_sq
    rate_e = vc.derived.gain_rate_e
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        den = c.a_n_sq - c.a_m_sq * x
        body = (rate_e / c.p_bs) * c.a_n_sq / den ** 2 * np.exp(
            -rate_e * x / (c.p_bs * den))
    out = np.where((x > 0.0) & (x < cap), body, 0.0)
    return out if out.ndim else float(out)


def sop_with_eve(vc: ValidatedConfig, rule: QuadratureRule | None = None) -> MetricEstimate:
    """Secrecy outage probability with the external eavesdropper present.

    Equals 1 - r3 where r3 is the joint probability that the near user
    out-decodes both overhearers with margin 2^r_m, the far user's gain
    dominates the eavesdropper's, and the far user keeps its secrecy margin
    2^r_n.  The surviving one-dimensional integral is approximated with the
    Gauss-Chebyshev rule; when a_m^2 >= 2^-r_n no allocation satisfies the
    margins and the outage probability is exactly one.
    """
    _require_mode(vc, Mode.WITH_EVE, "sop_with_eve")
    if rule is None:
        rule = make_rule(_DEFAULT_QUAD_N)
    meta: dict = {"quad_n": rule.n}
    if vc.degenerate_with_eve:
        meta["degenerate"] = True
        return MetricEstimate(1.0, Method.ANALYTIC, meta=meta)

    c = vc.cfg
    d = vc.derived
    p = c.p_bs
    am2, an2 = c.a_m_sq, c.a_n_sq
    thr_m = 2.0 ** c.r_m
    thr_n = 2.0 ** c.r_n
    dm_a = c.d_m ** c.alpha
    dn_a = c.d_n ** c.alpha
    de_a = c.d_e ** c.alpha
    kappa = dn_a + thr_m * dm_a

    def integrand(x):
        den_e = an2 - am2 * x
        den_n = an2 - d.c1 * am2 - thr_n * am2 * x
        with np.errstate(divide="ignore", over="ignore"):
            expo = de_a * x / (p * den_e) + (d.c1 + thr_n * x) * kappa / (p * den_n)
            expo = np.where(den_n > 0.0, expo, np.inf)
            return an2 / den_e ** 2 * np.exp(-c.lam * expo)

    integral = integrate_cheb(rule, integrand, 0.0, d.delta_m)
    prefactor = (c.lam * (c.d_e * c.d_n) ** c.alpha / (p * kappa)
                 * math.exp(-c.lam * (thr_m - 1.0) * dm_a / (am2 * p)))
    value = _clamped_probability(1.0 - prefactor * integral, meta)
    return MetricEstimate(value, Method.ANALYTIC, meta=meta)


def sop_no_eve(vc: ValidatedConfig) -> MetricEstimate:
    """Secrecy outage probability with only the internal eavesdropper.

    Equals 1 - P1 where P1 is the probability that the far user clears its
    own-rate threshold tau_n and the near user out-decodes it with margin
    2^r_m.  Exactly one when a_n^2/a_m^2 <= 2^r_n - 1.
    """
    _require_mode(vc, Mode.NO_EVE, "sop_no_eve")
    meta: dict = {}
    if vc.degenerate_no_eve:
        meta["degenerate"] = True
        return MetricEstimate(1.0, Method.ANALYTIC, meta=meta)

    c = vc.cfg
    d = vc.derived
    thr_m = 2.0 ** c.r_m
    dm_a = c.d_m ** c.alpha
    dn_a = c.d_n ** c.alpha
    kappa = dn_a + thr_m * dm_a
    p1 = (dn_a / kappa) * math.exp(
        -c.lam * (dm_a * (thr_m - 1.0) / (c.a_m_sq * c.p_bs) + d.tau_n * kappa))
    value = _clamped_probability(1.0 - p1, meta)
    return MetricEstimate(value, Method.ANALYTIC, meta=meta)


def erg_secrecy_rate_near(vc: ValidatedConfig) -> MetricEstimate:
    """Ergodic secrecy rate of the near user, bits/s/Hz.

    Achievable-rate term minus the leakage to whichever overhearers exist.
    With the external eavesdropper the leakage channel gain is
    max(g_n, g_e), whose density splits into three exponentials with rates
    lam*d_n^alpha, lam*d_e^alpha and their sum; each contributes one
    exp_ei term.  Without it only the far user overhears.
    """
    c = vc.cfg
    scale = c.a_m_sq * c.p_bs
    dm_a = c.d_m ** c.alpha
    dn_a = c.d_n ** c.alpha
    terms = (specfun.exp_ei(c.lam * dm_a / scale)
             - specfun.exp_ei(c.lam * dn_a / scale))
    if c.mode is Mode.WITH_EVE:
        de_a = c.d_e ** c.alpha
        terms -= specfun.exp_ei(c.lam * de_a / scale)
        terms += specfun.exp_ei(c.lam * (dn_a + de_a) / scale)
    return MetricEstimate(-LOG2E * terms, Method.ANALYTIC)


def erg_rate_far(vc: ValidatedConfig) -> MetricEstimate:
    """Ergodic rate of the far user, bits/s/Hz (no eavesdropper term).

    The far user's rate is pinned by min(g_m, g_n), exponential with rate
    lam*(d_m^alpha + d_n^alpha); valid in either mode.
    """
    c = vc.cfg
    d = vc.derived
    s_full = c.lam * d.d_min_sum / c.p_bs
    s_part = c.lam * d.d_min_sum / (c.a_m_sq * c.p_bs)
    value = -LOG2E * (specfun.exp_ei(s_full) - specfun.exp_ei(s_part))
    return MetricEstimate(value, Method.ANALYTIC)


def erg_secrecy_rate_far(vc: ValidatedConfig) -> MetricEstimate:
    """Ergodic secrecy rate of the far user against the external eavesdropper."""
    _require_mode(vc, Mode.WITH_EVE, "erg_secrecy_rate_far")
    c = vc.cfg
    de_a = c.d_e ** c.alpha
    leak = -LOG2E * (specfun.exp_ei(c.lam * de_a / c.p_bs)
                     - specfun.exp_ei(c.lam * de_a / (c.a_m_sq * c.p_bs)))
    return MetricEstimate(erg_rate_far(vc).value - leak, Method.ANALYTIC)
