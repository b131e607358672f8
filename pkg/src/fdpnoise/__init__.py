"""Canonical noise distributions and anti-concentration audits for f-DP."""

from .audit import anti_bound, audit_noise, center_mass_sup, ratio_check, tv_shift
from .cnd import (ContinuousCND, abs_moment, cdf, concentration, construct, quantile,
                  sample, tail_and_moment_check, tulap_reference_cdf, tulap_variance)
from .discrete import (DiscreteCND, dominance_audit_discrete, moments, named_distribution,
                       round_cnd, sample_discrete, sens2_interval, sens2_pure_dp,
                       unique_sens1, verify_discrete_cnd)
from .logconcave import (construct_logconcave_cnd, divisibility_error, dominance_audit,
                         family_fixed_point)
from .noise import (NoiseSpec, RivalNoise, SpecError, cnd_noise, laplace_noise,
                    noise_from_json, normal_noise)
from .pmf import DiscretePMF
from .report import AuditReport, CheckRecord
from .specs import family_from_json, tradeoff_from_json
from .tradeoff import (ROCCurve, TradeoffFamily, TradeoffFunction, c_iterated,
                       cauchy_tradeoff, check_tradeoff, dominates, fixed_point, gdp_family,
                       identity, iterate, make_eps_delta, make_gdp, make_logconcave_family,
                       roc_discrete, scalar_summaries, tv_discrete)

__version__ = "0.1.0"

__all__ = [
    "AuditReport",
    "CheckRecord",
    "ContinuousCND",
    "DiscreteCND",
    "DiscretePMF",
    "NoiseSpec",
    "ROCCurve",
    "RivalNoise",
    "SpecError",
    "TradeoffFamily",
    "TradeoffFunction",
    "__version__",
    "abs_moment",
    "anti_bound",
    "audit_noise",
    "c_iterated",
    "cauchy_tradeoff",
    "cdf",
    "center_mass_sup",
    "check_tradeoff",
    "cnd_noise",
    "concentration",
    "construct",
    "construct_logconcave_cnd",
    "divisibility_error",
    "dominance_audit",
    "dominance_audit_discrete",
    "dominates",
    "family_fixed_point",
    "family_from_json",
    "fixed_point",
    "gdp_family",
    "identity",
    "iterate",
    "laplace_noise",
    "make_eps_delta",
    "make_gdp",
    "make_logconcave_family",
    "moments",
    "named_distribution",
    "noise_from_json",
    "normal_noise",
    "quantile",
    "ratio_check",
    "roc_discrete",
    "round_cnd",
    "sample",
    "sample_discrete",
    "scalar_summaries",
    "sens2_interval",
    "sens2_pure_dp",
    "tail_and_moment_check",
    "tradeoff_from_json",
    "tulap_reference_cdf",
    "tulap_variance",
    "tv_discrete",
    "tv_shift",
    "unique_sens1",
    "verify_discrete_cnd",
]
