"""Secrecy performance of a two-user downlink NOMA system.

The far user shares the near user's resource block and can try to decode the
near user's message; an external eavesdropper may listen to both.  This
package evaluates the secrecy outage probability of the system and the
ergodic (secrecy) rates of both users by three mutually validating routes:
closed forms, seeded Monte-Carlo simulation, and brute-force numeric
integration.
"""
from .analytic import (Method, MetricEstimate, erg_rate_far,
                       erg_secrecy_rate_far, erg_secrecy_rate_near,
                       eve_far_sinr_cdf, eve_far_sinr_pdf, sop_no_eve,
                       sop_with_eve)
from .core import (ConfigError, DerivedConstants, Mode, SystemConfig,
                   ValidatedConfig, db_to_linear, linear_to_db, validate)
from .mc import (ChannelSample, ErgodicMetric, OutageEvent, RngSpec,
                 mc_ergodic, mc_sop, outage_event, sample_channels)
from .oracle import (IntegrationError, IntegrationSpec, oracle_ergodic,
                     oracle_sop_no_eve, oracle_sop_with_eve)
from .quad import QuadratureRule, integrate_cheb, make_rule
from .specfun import ei, exp_ei

__version__ = "0.1.0"

__all__ = [
    "ChannelSample", "ConfigError", "DerivedConstants", "ErgodicMetric",
    "IntegrationError", "IntegrationSpec", "Method", "MetricEstimate",
    "Mode", "OutageEvent", "QuadratureRule", "RngSpec", "SystemConfig",
    "ValidatedConfig", "db_to_linear", "ei", "erg_rate_far",
    "erg_secrecy_rate_far", "erg_secrecy_rate_near", "eve_far_sinr_cdf",
    "eve_far_sinr_pdf", "exp_ei", "integrate_cheb", "linear_to_db",
    "mc_ergodic", "mc_sop", "make_rule", "oracle_ergodic",
    "oracle_sop_no_eve", "oracle_sop_with_eve", "outage_event",
    "sample_channels", "sop_no_eve", "sop_with_eve", "validate",
]
