"""Seeded Monte-Carlo estimation of every secrecy metric from first principles.

Channel gains are drawn by inverse CDF from per-chunk Philox generators, so
an estimate depends only on (seed, stream_id, iteration count): worker count
and chunk scheduling never change a single bit of the result.  Per-chunk
partial sums are merged with math.fsum, which is exactly rounded and hence
order-independent.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .analytic import Method, MetricEstimate
from .core import Mode, ValidatedConfig

# Samples per RNG chunk; fixed so chunk boundaries never depend on iters.
CHUNK_SIZE = 1 << 16


class ErgodicMetric(str, Enum):
    NEAR_SECRECY = "near-secrecy"
    FAR_SECRECY = "far-secrecy"
    FAR_RATE = "far-rate"


@dataclass(frozen=True)
class RngSpec:
    """Seed plus substream id; equal specs reproduce equal sample paths."""

    seed: int
    stream_id: int = 0


@dataclass(frozen=True)
class ChannelSample:
    """One draw of the three normalized channel power gains."""

    g_m: float
    g_n: float
    g_e: float


def _chunk_generator(rng: RngSpec, chunk_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=rng.seed,
                                spawn_key=(rng.stream_id, chunk_index))
    return np.random.Generator(np.random.Philox(ss))


def _draw_gains(vc: ValidatedConfig, gen: np.random.Generator, n: int):
    """n independent (g_m, g_n, g_e) draws; inverse CDF x = -ln(u)/rate."""
    d = vc.derived
    u = gen.random((n, 3))
    # 1-u lies in (0, 1]; -log1p(-u) is -ln of it without cancellation.
    e = -np.log1p(-u)
    g_m = e[:, 0] / d.gain_rate_m
    g_n = e[:, 1] / d.gain_rate_n
    g_e = e[:, 2] / d.gain_rate_e
    if vc.cfg.mode is Mode.NO_EVE:
        g_e = np.zeros_like(g_e)
    return g_m, g_n, g_e


def sample_channels(vc: ValidatedConfig, rng: np.random.Generator) -> ChannelSample:
    """Draw a single channel realization from an initialized generator."""
    g_m, g_n, g_e = _draw_gains(vc, rng, 1)
    return ChannelSample(float(g_m[0]), float(g_n[0]), float(g_e[0]))


def _event_arrays(vc: ValidatedConfig, g_m, g_n, g_e):
    """Vectorized non-outage indicators plus the impossible fourth event.

    e1: the near user's secrecy margin on the far-user message holds.
    e2: the near user out-decodes both potential overhearers with margin
        2^r_m (the eavesdropper half degenerates to a plain rate check when
        g_e = 0).
    e3: the far user decodes its own message with secrecy margin 2^r_n.
    r4_event: the contradictory conjunction (far gain below the
        eavesdropper's, yet the far user's margin over it holds); it is the
        complement branch of the outage split and never occurs.
    """
    c = vc.cfg
    p = c.p_bs
    thr_m = 2.0 ** c.r_m
    thr_n = 2.0 ** c.r_n

    def own(g):
        return 1.0 + g * c.a_m_sq * p

    def far_msg(g):
        return 1.0 + g * c.a_n_sq / (g * c.a_m_sq + 1.0 / p)

    e1 = far_msg(g_m) >= thr_n * far_msg(g_e)
    e2 = (own(g_m) >= thr_m * own(g_n)) & (own(g_m) >= thr_m * own(g_e))
    e3 = far_msg(g_n) >= thr_n * far_msg(g_e)
    r4 = (own(g_m) >= thr_n * own(g_e)) & (g_n < g_e) & e3
    return e1, e2, e3, r4


@dataclass(frozen=True)
class OutageEvent:
    e1: bool
    e2: bool
    e3: bool
    r4_event: bool


def outage_event(vc: ValidatedConfig, s: ChannelSample) -> OutageEvent:
    """Event indicators for a single channel draw."""
    g_m = np.array([s.g_m])
    g_n = np.array([s.g_n])
    g_e = np.array([s.g_e])
    e1, e2, e3, r4 = _event_arrays(vc, g_m, g_n, g_e)
    return OutageEvent(bool(e1[0]), bool(e2[0]), bool(e3[0]), bool(r4[0]))


def _per_sample_rates(vc: ValidatedConfig, metric: ErgodicMetric, g_m, g_n, g_e):
    c = vc.cfg
    p = c.p_bs
    if metric is ErgodicMetric.NEAR_SECRECY:
        achievable = np.log2(1.0 + g_m * c.a_m_sq * p)
        leak = np.log2(1.0 + c.a_m_sq * p * np.maximum(g_n, g_e))
        return achievable - leak
    w = np.minimum(g_m, g_n)
    far_rate = np.log2(1.0 + w * c.a_n_sq / (w * c.a_m_sq + 1.0 / p))
    if metric is ErgodicMetric.FAR_RATE:
        return far_rate
    if metric is ErgodicMetric.FAR_SECRECY:
        if c.mode is not Mode.WITH_EVE:
            raise ValueError("far-secrecy requires the with-eve mode")
        leak = np.log2(1.0 + p * g_e) - np.log2(1.0 + c.a_m_sq * p * g_e)
        return far_rate - leak
    raise ValueError(f"unknown ergodic metric {metric!r}")


def _chunk_plan(iters: int):
    n_chunks = (iters + CHUNK_SIZE - 1) // CHUNK_SIZE
    return [(idx, min(CHUNK_SIZE, iters - idx * CHUNK_SIZE))
            for idx in range(n_chunks)]


def _run_chunks(vc, iters, rng, workers, per_chunk):
    plan = _chunk_plan(iters)

    def job(item):
        idx, n = item
        gen = _chunk_generator(rng, idx)
        return per_chunk(_draw_gains(vc, gen, n))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(job, plan))
    else:
        partials = [job(item) for item in plan]
    # fsum is exactly rounded, so the merge result cannot depend on chunk
    # completion order or worker count.
    return [math.fsum(p[k] for p in partials) for k in range(len(partials[0]))]


def mc_sop(vc: ValidatedConfig, iters: int, rng: RngSpec, workers: int = 1) -> MetricEstimate:
    """Estimate the secrecy outage probability as 1 - #(e1&e2&e3)/iters."""
    if iters < 1:
        raise ValueError("iters must be >= 1")

    def per_chunk(gains):
        e1, e2, e3, _ = _event_arrays(vc, *gains)
        return (float(np.count_nonzero(e1 & e2 & e3)),)

    (successes,) = _run_chunks(vc, iters, rng, workers, per_chunk)
    p_hat = successes / iters
    std_err = math.sqrt(p_hat * (1.0 - p_hat) / iters)
    return MetricEstimate(1.0 - p_hat, Method.MONTE_CARLO, std_err=std_err,
                          meta={"iters": iters, "seed": rng.seed,
                                "stream_id": rng.stream_id})


def mc_ergodic(vc: ValidatedConfig, metric: ErgodicMetric, iters: int,
               rng: RngSpec, workers: int = 1) -> MetricEstimate:
    """Sample mean of the per-draw (secrecy) rate, unclamped, with its SEM."""
    if iters < 1:
        raise ValueError("iters must be >= 1")
    metric = ErgodicMetric(metric)
    if metric is ErgodicMetric.FAR_SECRECY and vc.cfg.mode is not Mode.WITH_EVE:
        raise ValueError("far-secrecy requires the with-eve mode")

    def per_chunk(gains):
        r = _per_sample_rates(vc, metric, *gains)
        return (float(np.sum(r)), float(np.sum(r * r)))

    total, total_sq = _run_chunks(vc, iters, rng, workers, per_chunk)
    mean = total / iters
    if iters > 1:
        var = max(0.0, (total_sq - iters * mean * mean) / (iters - 1))
        std_err = math.sqrt(var / iters)
    else:
        std_err = float("inf")
    return MetricEstimate(mean, Method.MONTE_CARLO, std_err=std_err,
                          meta={"iters": iters, "seed": rng.seed,
                                "stream_id": rng.stream_id,
                                "metric": metric.value})
