"""Parameter model and derived constants for the two-user downlink NOMA link.

The base station splits its power between a near user and a far user; the far
user (and optionally an external node) can overhear the near user's message.
Everything downstream consumes a :class:`ValidatedConfig`, which is immutable
and safe to share across workers.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum


class Mode(str, Enum):
    """Whether an external eavesdropper is present."""

    WITH_EVE = "with-eve"
    NO_EVE = "no-eve"


class ConfigError(ValueError):
    """Raised when a parameter set violates the model's constraints."""


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(linear: float) -> float:
    if linear <= 0:
        raise ConfigError("linear power must be positive")
    return 10.0 * math.log10(linear)


# Power-allocation split must be an exact budget; tolerance for float inputs.
_ALLOC_SUM_TOL = 1e-12


@dataclass(frozen=True)
class SystemConfig:
    """Physical and protocol parameters.

    p_bs is the base-station transmit power in linear scale; the noise
    variance is one, so p_bs doubles as the transmit SNR.  Distances are in
    meters, rates in bits/s/Hz.  `lam` is the rate parameter of the
    exponential channel power gains, `alpha` the path-loss exponent.
    """

    p_bs: float
    a_m_sq: float
    a_n_sq: float
    d_m: float
    d_n: float
    d_e: float
    lam: float
    alpha: float
    r_m: float
    r_n: float
    mode: Mode = Mode.WITH_EVE


@dataclass(frozen=True)
class DerivedConstants:
    """Pure functions of a SystemConfig, precomputed once.

    c1 is the far-user SINR threshold 2^r_n - 1.  delta1 is the largest
    eavesdropper SINR that still leaves the far user decodable with secrecy
    margin; it exists only when a_m_sq < 2^-r_n.  delta_m caps it by the
    supremum a_n_sq/a_m_sq of the eavesdropper SINR.  tau_n is the far-user
    gain threshold for decoding its own message; it exists only when
    a_n_sq/a_m_sq > c1.  gain_rate_i = lam * d_i^alpha is the exponential
    rate of the normalized gain of each link, and d_min_sum the rate sum
    governing the minimum of the two legitimate gains.
    """

    c1: float
    delta1: float | None
    delta_m: float | None
    tau_n: float | None
    gain_rate_m: float
    gain_rate_n: float
    gain_rate_e: float
    d_min_sum: float


@dataclass(frozen=True)
class ValidatedConfig:
    """A SystemConfig that passed validation, plus derived constants.

    The degenerate flags mark allocation/rate regimes where the secrecy
    outage probability is identically one; those regimes are legal inputs,
    not errors.
    """

    cfg: SystemConfig
    derived: DerivedConstants
    degenerate_with_eve: bool
    degenerate_no_eve: bool


def _require_positive(name: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ConfigError(f"{name} must be a positive finite number, got {value!r}")


def validate(config: SystemConfig) -> ValidatedConfig:
    """Check constraints and attach derived constants.

    Raises ConfigError for structural violations (non-positive parameters,
    allocation not summing to one, near/far orderings).  Degenerate regimes
    (a_m_sq >= 2^-r_n, or a_n_sq/a_m_sq <= c1) are flagged, not rejected:
    the outage formulas return one there.
    """
    for name in ("p_bs", "a_m_sq", "a_n_sq", "d_m", "d_n", "d_e", "lam",
                 "alpha", "r_m", "r_n"):
        _require_positive(name, getattr(config, name))
    if abs(config.a_m_sq + config.a_n_sq - 1.0) > _ALLOC_SUM_TOL:
        raise ConfigError(
            f"power allocation must satisfy a_m_sq + a_n_sq = 1, got "
            f"{config.a_m_sq + config.a_n_sq!r}")
    if config.a_m_sq > config.a_n_sq:
        raise ConfigError(
            "NOMA ordering violated: the far user must get at least as much "
            f"power as the near user (a_m_sq={config.a_m_sq}, a_n_sq={config.a_n_sq})")
    if config.d_m > config.d_n:
        raise ConfigError(
            f"near/far ordering violated: d_m={config.d_m} > d_n={config.d_n}")
    mode = Mode(config.mode)
    if mode is not config.mode:
        config = dataclasses.replace(config, mode=mode)

    thr_n = 2.0 ** config.r_n
    c1 = thr_n - 1.0
    degenerate_with_eve = config.a_m_sq >= 1.0 / thr_n
    degenerate_no_eve = config.a_n_sq / config.a_m_sq <= c1

    delta1 = delta_m = None
    if not degenerate_with_eve:
        delta1 = (1.0 - thr_n * config.a_m_sq) / (thr_n * config.a_m_sq)
        delta_m = min(config.a_n_sq / config.a_m_sq, delta1)
    tau_n = None
    if not degenerate_no_eve:
        tau_n = c1 / (config.p_bs * (config.a_n_sq - c1 * config.a_m_sq))

    derived = DerivedConstants(
        c1=c1,
        delta1=delta1,
        delta_m=delta_m,
        tau_n=tau_n,
        gain_rate_m=config.lam * config.d_m ** config.alpha,
        gain_rate_n=config.lam * config.d_n ** config.alpha,
        gain_rate_e=config.lam * config.d_e ** config.alpha,
        d_min_sum=config.d_m ** config.alpha + config.d_n ** config.alpha,
    )
    return ValidatedConfig(
        cfg=config,
        derived=derived,
        degenerate_with_eve=degenerate_with_eve,
        degenerate_no_eve=degenerate_no_eve,
    )
