"""Gauss-Chebyshev quadrature over a finite interval.

The rule samples theta_i = cos((2i-1)pi/(2N)) and weights each sample by the
half-circle factor sqrt(1-theta_i^2)*pi/N, which turns the first-kind
Chebyshev rule into an open rule for plain integrals: for smooth f,
(pi/N) * sum sqrt(1-theta_i^2) f(theta_i) -> integral_-1^1 f.  The rational
prefactor specific to the outage integrand is assembled by the caller so the
rule itself stays integrand-agnostic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Node/weight table of order n; immutable after construction."""

    n: int
    nodes: np.ndarray = field(repr=False)
    half_circle_weights: np.ndarray = field(repr=False)


def make_rule(n: int) -> QuadratureRule:
    """Build the order-n rule.  Nodes are strictly decreasing in (-1, 1)."""
    if n < 1:
        raise ValueError(f"quadrature order must be >= 1, got {n}")
    i = np.arange(1, n + 1, dtype=float)
    nodes = np.cos((2.0 * i - 1.0) * np.pi / (2.0 * n))
    weights = np.sqrt(1.0 - nodes ** 2) * (np.pi / n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(n=int(n), nodes=nodes, half_circle_weights=weights)


def integrate_cheb(rule: QuadratureRule, f: Callable, lo: float, hi: float) -> float:
    """Approximate integral_lo^hi f(x) dx with the given rule.

    f should accept a numpy array of interior sample points; a scalar-only
    callable is handled with a fallback loop.  Non-finite integrand values
    are an error.
    """
    if not (lo < hi):
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    x = lo + (1.0 + rule.nodes) * (hi - lo) / 2.0
    try:
        vals = np.asarray(f(x), dtype=float)
        if vals.shape != x.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([float(f(xi)) for xi in x])
    if not np.isfinite(vals).all():
        raise ValueError("integrand returned non-finite values")
    return float((hi - lo) / 2.0 * np.dot(rule.half_circle_weights, vals))
