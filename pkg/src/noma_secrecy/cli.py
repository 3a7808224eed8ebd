"""Command-line front end: point evaluations, figure sweeps, validation.

Subcommands: sop, ergodic, sweep, validate.  Power is accepted in dB here
and converted once; the library works in linear scale throughout.  Sweep
output is plain CSV with columns axis,axis_value,metric,method,value,
std_err,detail and is byte-identical across runs with the same flags and
seed, regardless of worker count.
"""
from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import analytic, mc, oracle
from .analytic import Method, MetricEstimate
from .core import ConfigError, Mode, SystemConfig, db_to_linear, validate
from .mc import ErgodicMetric, RngSpec
from .quad import make_rule

EXIT_OK = 0
EXIT_VALIDATION_FAILURE = 1
EXIT_USAGE = 2

DEFAULTS = {
    "pbs-db": 30.0,
    "am2": 0.4,
    "rn": 0.1,
    "rm": 0.1,
    "dm": 4.0,
    "dn": 6.0,
    "de": 7.0,
    "lambda": 1.0,
    "alpha": 4.0,
    "mode": "with-eve",
    "iters": 100_000,
    "seed": 2,
    "quad-n": 200,
    "workers": 1,
}

SWEEP_METRICS = ("sop-with-eve", "sop-no-eve", "near-secrecy",
                 "near-secrecy-no-eve", "far-secrecy", "far-rate")

# Mode each sweep metric is evaluated under; None means either works.
_METRIC_MODE = {
    "sop-with-eve": Mode.WITH_EVE,
    "sop-no-eve": Mode.NO_EVE,
    "near-secrecy": Mode.WITH_EVE,
    "near-secrecy-no-eve": Mode.NO_EVE,
    "far-secrecy": Mode.WITH_EVE,
    "far-rate": None,
}

_METHOD_ALIASES = {"analytic": Method.ANALYTIC, "mc": Method.MONTE_CARLO,
                   "monte-carlo": Method.MONTE_CARLO, "oracle": Method.ORACLE}

CSV_HEADER = "axis,axis_value,metric,method,value,std_err,detail"


@dataclass(frozen=True)
class SweepSpec:
    """One parameter sweep: axis grid x metrics x methods."""

    axis: str                      # "pbs-db" or "am2"
    start: float
    stop: float
    steps: int
    metrics: tuple
    methods: tuple
    base: SystemConfig
    iters: int
    seed: int
    quad_n: int
    workers: int = 1


@dataclass(frozen=True)
class SweepRow:
    axis: str
    axis_value: float
    metric: str
    method: Method
    value: float
    std_err: float | None
    detail: str


def _fmt(value) -> str:
    return "" if value is None else repr(float(value))


def rows_to_csv(rows) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join([r.axis, _fmt(r.axis_value), r.metric,
                               r.method.value, _fmt(r.value), _fmt(r.std_err),
                               r.detail]))
    return "\n".join(lines) + "\n"


def _point_config(spec: SweepSpec, axis_value: float, metric: str) -> SystemConfig:
    cfg = spec.base
    if spec.axis == "pbs-db":
        cfg = replace(cfg, p_bs=db_to_linear(axis_value))
    else:
        cfg = replace(cfg, a_m_sq=axis_value, a_n_sq=1.0 - axis_value)
    mode = _METRIC_MODE[metric]
    if mode is not None and cfg.mode is not mode:
        cfg = replace(cfg, mode=mode)
    return cfg


def _evaluate(cfg: SystemConfig, metric: str, method: Method, iters: int,
              rng: RngSpec, quad_n: int) -> MetricEstimate:
    vc = validate(cfg)
    if metric in ("sop-with-eve", "sop-no-eve"):
        if method is Method.ANALYTIC:
            if metric == "sop-with-eve":
                return analytic.sop_with_eve(vc, make_rule(quad_n))
            return analytic.sop_no_eve(vc)
        if method is Method.MONTE_CARLO:
            return mc.mc_sop(vc, iters, rng)
        fn = (oracle.oracle_sop_with_eve if metric == "sop-with-eve"
              else oracle.oracle_sop_no_eve)
        return MetricEstimate(fn(vc), Method.ORACLE)
    erg = {"near-secrecy": ErgodicMetric.NEAR_SECRECY,
           "near-secrecy-no-eve": ErgodicMetric.NEAR_SECRECY,
           "far-secrecy": ErgodicMetric.FAR_SECRECY,
           "far-rate": ErgodicMetric.FAR_RATE}[metric]
    if method is Method.ANALYTIC:
        if erg is ErgodicMetric.NEAR_SECRECY:
            return analytic.erg_secrecy_rate_near(vc)
        if erg is ErgodicMetric.FAR_SECRECY:
            return analytic.erg_secrecy_rate_far(vc)
        return analytic.erg_rate_far(vc)
    if method is Method.MONTE_CARLO:
        return mc.mc_ergodic(vc, erg, iters, rng)
    return MetricEstimate(oracle.oracle_ergodic(vc, erg), Method.ORACLE)


def _detail(est: MetricEstimate, quad_n: int, iters: int) -> str:
    if est.method is Method.MONTE_CARLO:
        return f"iters={iters}"
    if est.method is Method.ANALYTIC and "quad_n" in est.meta:
        return f"quad_n={quad_n}"
    return ""


def run_sweep(spec: SweepSpec):
    """Evaluate the sweep; rows come back in ascending axis order.

    Monte-Carlo tasks use substream = axis point index, so adding further
    points never perturbs existing ones.
    """
    if spec.steps < 2:
        raise ConfigError("a sweep needs at least 2 steps")
    if not spec.start < spec.stop:
        raise ConfigError("sweep needs start < stop")
    if spec.axis not in ("pbs-db", "am2"):
        raise ConfigError(f"unknown sweep axis {spec.axis!r}")
    if spec.axis == "am2" and not (0.0 < spec.start and spec.stop <= 0.5):
        raise ConfigError("am2 axis must stay within (0, 0.5]")
    for m in spec.metrics:
        if m not in SWEEP_METRICS:
            raise ConfigError(f"unknown metric {m!r}")

    values = np.linspace(spec.start, spec.stop, spec.steps)
    tasks = []
    for idx, v in enumerate(values):
        v = float(v)
        for metric in spec.metrics:
            for method in spec.methods:
                tasks.append((idx, v, metric, method))

    def job(task):
        idx, v, metric, method = task
        cfg = _point_config(spec, v, metric)
        est = _evaluate(cfg, metric, method, spec.iters,
                        RngSpec(spec.seed, stream_id=idx), spec.quad_n)
        return SweepRow(spec.axis, v, metric, method, est.value, est.std_err,
                        _detail(est, spec.quad_n, spec.iters))

    if spec.workers > 1:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            rows = list(pool.map(job, tasks))
    else:
        rows = [job(t) for t in tasks]
    return rows


# ---------------------------------------------------------------------------
# presets (Table I geometry: d_m=4, d_n=6, d_e=7, lambda=1, alpha=4)
# ---------------------------------------------------------------------------

def table1_config(pbs_db: float = 30.0, am2: float = 0.4,
                  rm: float = 0.1, rn: float = 0.1,
                  mode: Mode = Mode.WITH_EVE) -> SystemConfig:
    return SystemConfig(p_bs=db_to_linear(pbs_db), a_m_sq=am2,
                        a_n_sq=1.0 - am2, d_m=4.0, d_n=6.0, d_e=7.0,
                        lam=1.0, alpha=4.0, r_m=rm, r_n=rn, mode=mode)


def preset_sweep(name: str, iters: int, seed: int, quad_n: int,
                 workers: int = 1) -> SweepSpec:
    common = dict(iters=iters, seed=seed, quad_n=quad_n, workers=workers,
                  methods=(Method.ANALYTIC, Method.MONTE_CARLO))
    sop_metrics = ("sop-with-eve", "sop-no-eve")
    erg_metrics = ("near-secrecy", "near-secrecy-no-eve", "far-secrecy",
                   "far-rate")
    if name == "fig3":
        return SweepSpec(axis="pbs-db", start=0.0, stop=60.0, steps=13,
                         metrics=sop_metrics, base=table1_config(), **common)
    if name == "fig4":
        return SweepSpec(axis="am2", start=0.05, stop=0.5, steps=10,
                         metrics=sop_metrics, base=table1_config(pbs_db=30.0),
                         **common)
    if name == "fig5":
        return SweepSpec(axis="pbs-db", start=0.0, stop=60.0, steps=13,
                         metrics=erg_metrics, base=table1_config(), **common)
    if name == "fig6":
        return SweepSpec(axis="am2", start=0.05, stop=0.5, steps=10,
                         metrics=erg_metrics, base=table1_config(pbs_db=30.0),
                         **common)
    raise ConfigError(f"unknown preset {name!r}")


# ---------------------------------------------------------------------------
# validation battery
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationCheck:
    name: str
    passed: bool
    measured: float
    bound: float
    note: str = ""


_GRID_DB = (0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0)

# Regression bounds for the analytic-vs-oracle legs.  The order-200
# Gauss-Chebyshev approximation is accurate to ~2e-5 at Table I (it
# converges as 1/N^2), so these are set with headroom above that floor;
# a broken formula lands orders of magnitude away.
_WITH_EVE_ORACLE_BOUND = 5e-5
_QUAD_STABILITY_BOUND = 5e-5


def run_validate(iters: int = 1_000_000, seed: int = 2, quad_n: int = 200,
                 workers: int = 1):
    """Cross-validate analytic, Monte-Carlo and oracle routes on Table I.

    Returns a list of ValidationCheck records; all should pass on a healthy
    build, and a corrupted formula is reported by metric name.
    """
    checks = []
    rule = make_rule(quad_n)
    rule_hi = make_rule(10 * quad_n)

    def add(name, measured, bound, note=""):
        checks.append(ValidationCheck(name, bool(measured <= bound),
                                      float(measured), float(bound), note))

    # degenerate regimes must be exactly one
    vc = validate(table1_config(rn=1.0, am2=0.5))
    add("degenerate-with-eve-exact",
        abs(analytic.sop_with_eve(vc, rule).value - 1.0), 0.0)
    vc = validate(table1_config(rn=2.0, mode=Mode.NO_EVE))
    add("degenerate-no-eve-exact",
        abs(analytic.sop_no_eve(vc).value - 1.0), 0.0)

    # closed form vs oracle vs quadrature order, across the power grid
    worst_no_eve = worst_with_eve = worst_stab = 0.0
    for db in _GRID_DB:
        vc_no = validate(table1_config(pbs_db=db, mode=Mode.NO_EVE))
        worst_no_eve = max(worst_no_eve, abs(
            analytic.sop_no_eve(vc_no).value - oracle.oracle_sop_no_eve(vc_no)))
        vc_we = validate(table1_config(pbs_db=db))
        a200 = analytic.sop_with_eve(vc_we, rule).value
        worst_with_eve = max(worst_with_eve,
                             abs(a200 - oracle.oracle_sop_with_eve(vc_we)))
        worst_stab = max(worst_stab, abs(
            a200 - analytic.sop_with_eve(vc_we, rule_hi).value))
    add("sop-no-eve-vs-oracle", worst_no_eve, 1e-9)
    add("sop-with-eve-vs-oracle", worst_with_eve, _WITH_EVE_ORACLE_BOUND)
    add("quad-stability-200-vs-2000", worst_stab, _QUAD_STABILITY_BOUND)

    # analytic vs Monte Carlo for every metric on the grid
    def analytic_of(metric, vc):
        if metric == "sop-with-eve":
            return analytic.sop_with_eve(vc, rule).value
        if metric == "sop-no-eve":
            return analytic.sop_no_eve(vc).value
        if metric in ("near-secrecy", "near-secrecy-no-eve"):
            return analytic.erg_secrecy_rate_near(vc).value
        if metric == "far-secrecy":
            return analytic.erg_secrecy_rate_far(vc).value
        return analytic.erg_rate_far(vc).value

    for metric in SWEEP_METRICS:
        worst = 0.0
        for idx, db in enumerate(_GRID_DB):
            mode = _METRIC_MODE[metric] or Mode.WITH_EVE
            vc = validate(table1_config(pbs_db=db, mode=mode))
            rng = RngSpec(seed, stream_id=idx)
            if metric.startswith("sop"):
                est = mc.mc_sop(vc, iters, rng, workers=workers)
            else:
                erg = (ErgodicMetric.FAR_RATE if metric == "far-rate" else
                       ErgodicMetric.FAR_SECRECY if metric == "far-secrecy"
                       else ErgodicMetric.NEAR_SECRECY)
                est = mc.mc_ergodic(vc, erg, iters, rng, workers=workers)
            gap = abs(analytic_of(metric, vc) - est.value) - 3.0 * est.std_err
            worst = max(worst, gap)
        add(f"mc-vs-analytic-{metric}", worst, 1e-4,
            note="slack after 3*std_err")

    # structural Monte-Carlo properties at 30 dB
    vc = validate(table1_config())
    gen_m, gen_n, gen_e = [], [], []
    for idx, n in mc._chunk_plan(iters):
        g = mc._draw_gains(vc, mc._chunk_generator(RngSpec(seed, 9000), idx), n)
        gen_m.append(g[0])
        gen_n.append(g[1])
        gen_e.append(g[2])
    g_m = np.concatenate(gen_m)
    g_n = np.concatenate(gen_n)
    g_e = np.concatenate(gen_e)
    e1, e2, e3, r4 = mc._event_arrays(vc, g_m, g_n, g_e)
    add("inclusion-e2e3-implies-e1",
        float(np.count_nonzero(e2 & e3 & (g_n >= g_e) & ~e1)), 0.0)
    add("r4-event-impossible", float(np.count_nonzero(r4)), 0.0)
    x = g_e * vc.cfg.a_n_sq / (g_e * vc.cfg.a_m_sq + 1.0 / vc.cfg.p_bs)
    x.sort()
    cdf = analytic.eve_far_sinr_cdf(vc, x)
    ranks = np.arange(1, x.size + 1) / x.size
    ks = max(float(np.max(np.abs(ranks - cdf))),
             float(np.max(np.abs(ranks - 1.0 / x.size - cdf))))
    # 2/sqrt(n) is the ~99.9% Kolmogorov quantile; equals the 2e-3 target
    # at the reference 1e6 iterations.
    add("ks-eve-sinr-cdf", ks, max(2e-3, 2.0 / math.sqrt(iters)))

    # headline number: far-user ergodic rate at 60 dB
    vc = validate(table1_config(pbs_db=60.0))
    add("far-rate-60db-analytic",
        abs(analytic.erg_rate_far(vc).value - 1.3219), 0.02)
    add("far-rate-60db-oracle",
        abs(oracle.oracle_ergodic(vc, ErgodicMetric.FAR_RATE) - 1.3219), 0.02)
    est = mc.mc_ergodic(vc, ErgodicMetric.FAR_RATE, iters, RngSpec(seed, 9100),
                        workers=workers)
    add("far-rate-60db-mc", abs(est.value - 1.3219), 0.02)
    return checks


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _load_config_file(path: str) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


_CASTS = {"pbs-db": float, "am2": float, "rn": float, "rm": float,
          "dm": float, "dn": float, "de": float, "lambda": float,
          "alpha": float, "mode": str, "iters": int, "seed": int,
          "quad-n": int, "workers": int}


def _resolve(args, key: str):
    """Flag value if given, else config-file value, else built-in default."""
    attr = key.replace("-", "_") if key != "lambda" else "lam"
    cli_value = getattr(args, attr, None)
    if cli_value is not None:
        return cli_value
    file_values = getattr(args, "_file_values", {})
    if key in file_values:
        return _CASTS[key](file_values[key])
    return DEFAULTS[key]


def _add_model_flags(sp):
    sp.add_argument("--pbs-db", type=float, dest="pbs_db",
                    help="transmit power/SNR in dB (default 30)")
    sp.add_argument("--am2", type=float, help="near-user power share in (0, 0.5]")
    sp.add_argument("--rn", type=float, help="far-user target rate, bits/s/Hz")
    sp.add_argument("--rm", type=float, help="near-user target rate, bits/s/Hz")
    sp.add_argument("--dm", type=float, help="near-user distance, m")
    sp.add_argument("--dn", type=float, help="far-user distance, m")
    sp.add_argument("--de", type=float, help="eavesdropper distance, m")
    sp.add_argument("--lambda", type=float, dest="lam",
                    help="fading rate parameter")
    sp.add_argument("--alpha", type=float, help="path-loss exponent")
    sp.add_argument("--mode", choices=["with-eve", "no-eve"],
                    help="external eavesdropper present or not")
    sp.add_argument("--config", help="key=value file; flags override it")


def _add_eval_flags(sp):
    sp.add_argument("--iters", type=int, help="Monte-Carlo iterations")
    sp.add_argument("--seed", type=int, help="RNG seed")
    sp.add_argument("--quad-n", type=int, dest="quad_n",
                    help="Gauss-Chebyshev order (default 200)")
    sp.add_argument("--workers", type=int, help="parallel workers")


def _config_from_args(args) -> SystemConfig:
    am2 = _resolve(args, "am2")
    return SystemConfig(
        p_bs=db_to_linear(_resolve(args, "pbs-db")),
        a_m_sq=am2,
        a_n_sq=1.0 - am2,
        d_m=_resolve(args, "dm"),
        d_n=_resolve(args, "dn"),
        d_e=_resolve(args, "de"),
        lam=_resolve(args, "lambda"),
        alpha=_resolve(args, "alpha"),
        r_m=_resolve(args, "rm"),
        r_n=_resolve(args, "rn"),
        mode=Mode(_resolve(args, "mode")),
    )


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="noma-secrecy",
        description="Secrecy outage and ergodic secrecy rates of a two-user "
                    "downlink NOMA system with internal and optional external "
                    "eavesdroppers.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sop", help="secrecy outage probability at one point")
    _add_model_flags(sp)
    _add_eval_flags(sp)
    sp.add_argument("--method", choices=["analytic", "mc", "oracle"],
                    default="analytic")

    se = sub.add_parser("ergodic", help="ergodic (secrecy) rate at one point")
    _add_model_flags(se)
    _add_eval_flags(se)
    se.add_argument("--metric", required=True,
                    choices=["near-secrecy", "far-secrecy", "far-rate"])
    se.add_argument("--method", choices=["analytic", "mc", "oracle"],
                    default="analytic")

    sw = sub.add_parser("sweep", help="parameter sweep emitted as CSV")
    _add_model_flags(sw)
    _add_eval_flags(sw)
    sw.add_argument("--preset", choices=["fig3", "fig4", "fig5", "fig6"])
    sw.add_argument("--axis", choices=["pbs-db", "am2"])
    sw.add_argument("--start", type=float)
    sw.add_argument("--stop", type=float)
    sw.add_argument("--steps", type=int)
    sw.add_argument("--metrics", help="comma-separated subset of: "
                                      + ",".join(SWEEP_METRICS))
    sw.add_argument("--methods", default=None,
                    help="comma-separated subset of: analytic,mc")
    sw.add_argument("--out", help="write CSV here instead of stdout")

    sv = sub.add_parser("validate", help="run the cross-validation battery")
    _add_eval_flags(sv)
    sv.add_argument("--quick", action="store_true",
                    help="reduced iterations (1e5)")
    return p


def _print_point(metric: str, est: MetricEstimate, quad_n: int, iters: int):
    detail = _detail(est, quad_n, iters)
    print(",".join([metric, est.method.value, _fmt(est.value),
                    _fmt(est.std_err), detail]))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "config", None):
            args._file_values = _load_config_file(args.config)

        if args.command == "sop":
            cfg = _config_from_args(args)
            metric = ("sop-with-eve" if cfg.mode is Mode.WITH_EVE
                      else "sop-no-eve")
            est = _evaluate(cfg, metric, _METHOD_ALIASES[args.method],
                            _resolve(args, "iters"),
                            RngSpec(_resolve(args, "seed")),
                            _resolve(args, "quad-n"))
            _print_point(metric, est, _resolve(args, "quad-n"),
                         _resolve(args, "iters"))
            return EXIT_OK

        if args.command == "ergodic":
            cfg = _config_from_args(args)
            if args.metric == "far-secrecy" and cfg.mode is Mode.NO_EVE:
                parser.error("far-secrecy is undefined without the external "
                             "eavesdropper (--mode no-eve)")
            metric = args.metric
            if metric == "near-secrecy" and cfg.mode is Mode.NO_EVE:
                metric = "near-secrecy-no-eve"
            est = _evaluate(cfg, metric, _METHOD_ALIASES[args.method],
                            _resolve(args, "iters"),
                            RngSpec(_resolve(args, "seed")),
                            _resolve(args, "quad-n"))
            _print_point(metric, est, _resolve(args, "quad-n"),
                         _resolve(args, "iters"))
            return EXIT_OK

        if args.command == "sweep":
            iters = _resolve(args, "iters")
            seed = _resolve(args, "seed")
            quad_n = _resolve(args, "quad-n")
            workers = _resolve(args, "workers")
            if args.preset:
                spec = preset_sweep(args.preset, iters, seed, quad_n, workers)
                overrides = {}
                for field_name in ("axis", "start", "stop", "steps"):
                    if getattr(args, field_name) is not None:
                        overrides[field_name] = getattr(args, field_name)
                if args.metrics:
                    overrides["metrics"] = tuple(args.metrics.split(","))
                if overrides:
                    spec = replace(spec, **overrides)
            else:
                missing = [f for f in ("axis", "start", "stop", "steps",
                                       "metrics")
                           if getattr(args, f) is None]
                if missing:
                    parser.error("sweep needs --preset or all of --axis "
                                 "--start --stop --steps --metrics")
                spec = SweepSpec(axis=args.axis, start=args.start,
                                 stop=args.stop, steps=args.steps,
                                 metrics=tuple(args.metrics.split(",")),
                                 methods=(Method.ANALYTIC, Method.MONTE_CARLO),
                                 base=_config_from_args(args), iters=iters,
                                 seed=seed, quad_n=quad_n, workers=workers)
            if args.methods:
                spec = replace(spec, methods=tuple(
                    _METHOD_ALIASES[m] for m in args.methods.split(",")))
            csv_text = rows_to_csv(run_sweep(spec))
            if args.out:
                with open(args.out, "w", encoding="utf-8", newline="") as fh:
                    fh.write(csv_text)
            else:
                sys.stdout.write(csv_text)
            return EXIT_OK

        if args.command == "validate":
            iters = args.iters if args.iters is not None else (
                100_000 if args.quick else 1_000_000)
            checks = run_validate(iters=iters,
                                  seed=args.seed if args.seed is not None else 2,
                                  quad_n=args.quad_n if args.quad_n is not None else 200,
                                  workers=args.workers if args.workers is not None else 1)
            failed = 0
            for c in checks:
                status = "PASS" if c.passed else "FAIL"
                print(f"[{status}] {c.name}: measured {c.measured:.3e} "
                      f"(bound {c.bound:.3e}){' ' + c.note if c.note else ''}")
                failed += 0 if c.passed else 1
            print(f"{len(checks) - failed}/{len(checks)} checks passed")
            return EXIT_OK if failed == 0 else EXIT_VALIDATION_FAILURE

        raise AssertionError(f"unhandled command {args.command!r}")
    except ValueError as exc:
        # ConfigError and mode/metric mismatches are usage problems.
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
