"""Monte-Carlo and quadrature verification of covariance bounds, limit
theorems and auxiliary inequalities."""
from .bounds import batch_cov, verify_cov_bound_b, verify_cov_bound_lag
from .clt import CltRunConfig, centered_mean_K, run_clt_mc, sigma2_series, simulate_K_paths
from .estimator_mc import run_estimator_mc, run_multiscale_clt, synthesize_grids
from .functionals import KINDS, FunctionalSpec
from .lemmas import lemma52_integral, lemma53_terms, verify_lemma52, verify_lemma53
from .moving_average import MaSynthesizer
from .normality import ad_normality, ad_statistic
from .presets import bounds_preset, clt_preset
from .report import McReport, SlopeFit, Verdict, fit_loglog

__all__ = [
    "batch_cov",
    "verify_cov_bound_b",
    "verify_cov_bound_lag",
    "CltRunConfig",
    "centered_mean_K",
    "run_clt_mc",
    "sigma2_series",
    "simulate_K_paths",
    "run_estimator_mc",
    "run_multiscale_clt",
    "synthesize_grids",
    "KINDS",
    "FunctionalSpec",
    "lemma52_integral",
    "lemma53_terms",
    "verify_lemma52",
    "verify_lemma53",
    "MaSynthesizer",
    "ad_normality",
    "ad_statistic",
    "bounds_preset",
    "clt_preset",
    "McReport",
    "SlopeFit",
    "Verdict",
    "fit_loglog",
]
