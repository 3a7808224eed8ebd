"""Brute-force numeric integration of the outage and rate expectations.

These routines answer "what does the model actually integrate to" without
using the closed forms, the Gauss-Chebyshev rule, or the sampler, so tests
can triangulate all three.  The only analytic step taken here is collapsing
inner exponential integrals to survival functions, which is exact and turns
every quantity into a one-dimensional integral handled by adaptive
interval-halving Simpson quadrature with an explicit tail cutoff.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Mode, ValidatedConfig
from .mc import ErgodicMetric

_LOG2E = 1.0 / math.log(2.0)

# Initial uniform panels; adaptivity then refines wherever the integrand
# concentrates (the eavesdropper SINR density can spike near zero).
_PANELS = 16


@dataclass(frozen=True)
class IntegrationSpec:
    """Accuracy controls for the adaptive quadrature."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_depth: int = 60
    truncation_mass: float = 1e-14


class IntegrationError(RuntimeError):
    """Tolerance not reached within the allowed bisection depth."""


def _simpson(fa, fm, fb, a, b):
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _refine(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(fa, flm, fm, a, m)
    right = _simpson(fm, frm, fb, m, b)
    delta = left + right - whole
    # Below the local rounding noise further halving cannot help.
    noise = 4e-16 * (abs(left) + abs(right))
    if abs(delta) <= max(15.0 * tol, noise):
        return left + right + delta / 15.0
    if depth <= 0:
        raise IntegrationError(
            f"adaptive Simpson stalled on [{a}, {b}] (residual {delta:.3e})")
    half = 0.5 * tol
    return (_refine(f, a, m, fa, flm, fm, left, half, depth - 1)
            + _refine(f, m, b, fm, frm, fb, right, half, depth - 1))


def integrate_adaptive(f, a: float, b: float, spec: IntegrationSpec) -> float:
    """Adaptive Simpson integral of f over [a, b].

    The tolerance is scaled by the integral's magnitude.  A coarse initial
    sweep can badly overestimate that magnitude when the mass sits in a
    spike (an under-resolved peak inflates the Simpson sum), so the result
    is re-refined with a tightened tolerance until scale and result agree.
    """
    if not (a < b):
        raise ValueError(f"need a < b, got [{a}, {b}]")
    edges = [a + (b - a) * k / _PANELS for k in range(_PANELS + 1)]
    panels = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        flo, fmi, fhi = f(lo), f(0.5 * (lo + hi)), f(hi)
        panels.append((lo, hi, flo, fmi, fhi, _simpson(flo, fmi, fhi, lo, hi)))
    scale = abs(sum(p[5] for p in panels))
    total = 0.0
    for _ in range(3):
        tol = max(spec.abs_tol, spec.rel_tol * scale) / _PANELS
        total = sum(_refine(f, lo, hi, flo, fmi, fhi, whole, tol,
                            spec.max_depth)
                    for lo, hi, flo, fmi, fhi, whole in panels)
        if scale <= 4.0 * abs(total) + spec.abs_tol:
            break
        scale = abs(total)
    return total


def _tail_cutoff(rate: float, spec: IntegrationSpec) -> float:
    # Exponential tail below truncation_mass, with headroom for slowly
    # growing log factors in the integrand.
    return (-math.log(spec.truncation_mass) + 10.0) / rate


def oracle_sop_no_eve(vc: ValidatedConfig, spec: IntegrationSpec | None = None) -> float:
    """Outage probability without the external eavesdropper, by integration.

    Integrates the far-user gain density above its own-rate threshold times
    the near user's survival of the margined decode condition.
    """
    if spec is None:
        spec = IntegrationSpec()
    if vc.degenerate_no_eve:
        raise ValueError("allocation is degenerate: outage probability is one")
    c = vc.cfg
    d = vc.derived
    thr_m = 2.0 ** c.r_m
    scale = c.a_m_sq * c.p_bs

    def integrand(x):
        near_floor = (thr_m * (1.0 + scale * x) - 1.0) / scale
        return (d.gain_rate_n * math.exp(-d.gain_rate_n * x)
                * math.exp(-d.gain_rate_m * near_floor))

    lo = d.tau_n
    hi = lo + _tail_cutoff(d.gain_rate_n + thr_m * d.gain_rate_m, spec)
    p1 = integrate_adaptive(integrand, lo, hi, spec)
    return 1.0 - p1


def oracle_sop_with_eve(vc: ValidatedConfig, spec: IntegrationSpec | None = None) -> float:
    """Outage probability with the external eavesdropper, by integration.

    The three-fold event probability reduces exactly to a one-dimensional
    integral over the eavesdropper's SINR for the far-user message: its
    density times the far-user survival above the margin threshold times the
    near-user survival of the margined decode condition.
    """
    if spec is None:
        spec = IntegrationSpec()
    if vc.degenerate_with_eve:
        raise ValueError("allocation is degenerate: outage probability is one")
    c = vc.cfg
    d = vc.derived
    p = c.p_bs
    am2, an2 = c.a_m_sq, c.a_n_sq
    thr_m = 2.0 ** c.r_m
    thr_n = 2.0 ** c.r_n
    scale = am2 * p
    kappa = d.gain_rate_n + thr_m * d.gain_rate_m
    # Collapsing the far-user gain integral over [far_floor, inf) against
    # the near user's survival of its margined decode condition leaves the
    # constants below (survival of two competing exponentials).
    near_const = math.exp(-d.gain_rate_m * (thr_m - 1.0) / scale)
    far_weight = d.gain_rate_n / kappa

    def integrand(x):
        den_e = an2 - am2 * x
        den_n = an2 - d.c1 * am2 - thr_n * am2 * x
        if den_n <= 0.0 or den_e <= 0.0:
            return 0.0
        pdf = (d.gain_rate_e / p) * an2 / den_e ** 2 * math.exp(
            -d.gain_rate_e * x / (p * den_e))
        far_floor = (d.c1 + thr_n * x) / (p * den_n)
        return pdf * near_const * far_weight * math.exp(-kappa * far_floor)

    r3 = integrate_adaptive(integrand, 0.0, d.delta_m, spec)
    return 1.0 - r3


def _expect_log2_one_plus(factor, pdf, x_hi, spec) -> float:
    """integral_0^x_hi log2(1 + factor(x)) * pdf(x) dx."""

    def integrand(x):
        return _LOG2E * math.log1p(factor(x)) * pdf(x)

    return integrate_adaptive(integrand, 0.0, x_hi, spec)


def oracle_ergodic(vc: ValidatedConfig, metric: ErgodicMetric,
                   spec: IntegrationSpec | None = None) -> float:
    """Expected (secrecy) rate by direct integration against gain densities."""
    if spec is None:
        spec = IntegrationSpec()
    metric = ErgodicMetric(metric)
    c = vc.cfg
    d = vc.derived
    p = c.p_bs
    scale = c.a_m_sq * p

    def exp_pdf(rate):
        return lambda x: rate * math.exp(-rate * x)

    def sinr_factor(x):
        return x * c.a_n_sq / (x * c.a_m_sq + 1.0 / p)

    if metric is ErgodicMetric.NEAR_SECRECY:
        achievable = _expect_log2_one_plus(
            lambda x: scale * x, exp_pdf(d.gain_rate_m),
            _tail_cutoff(d.gain_rate_m, spec), spec)
        if c.mode is Mode.WITH_EVE:
            rn, re = d.gain_rate_n, d.gain_rate_e

            def max_pdf(x):
                return (rn * math.exp(-rn * x) + re * math.exp(-re * x)
                        - (rn + re) * math.exp(-(rn + re) * x))

            leak = _expect_log2_one_plus(
                lambda x: scale * x, max_pdf,
                _tail_cutoff(min(rn, re), spec), spec)
        else:
            leak = _expect_log2_one_plus(
                lambda x: scale * x, exp_pdf(d.gain_rate_n),
                _tail_cutoff(d.gain_rate_n, spec), spec)
        return achievable - leak

    min_rate = c.lam * d.d_min_sum
    far_rate = _expect_log2_one_plus(
        sinr_factor, exp_pdf(min_rate), _tail_cutoff(min_rate, spec), spec)
    if metric is ErgodicMetric.FAR_RATE:
        return far_rate
    if metric is ErgodicMetric.FAR_SECRECY:
        if c.mode is not Mode.WITH_EVE:
            raise ValueError("far-secrecy requires the with-eve mode")
        leak = _expect_log2_one_plus(
            sinr_factor, exp_pdf(d.gain_rate_e),
            _tail_cutoff(d.gain_rate_e, spec), spec)
        return far_rate - leak
    raise ValueError(f"unknown ergodic metric {metric!r}")
