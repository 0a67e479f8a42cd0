"""Fractional moments and special functions of stable laws."""

from .condexp import CondExpCoefficients, SpectralAtom, alpha_covariation, cond_exp, cond_exp_coeffs
from .dist import cdf, pdf, prob_positive, sample, sf
from .gfun import GFunQuery, closed_form_at_zero, g, g_tilde, gfun_result, h
from .moments import (
    MomentQuery,
    MomentResult,
    abs_moment,
    conjectured_negative_moment,
    moment,
    shifted_positive_mean,
    signed_moment,
    strictly_stable_moment,
    truncated_moment_minus,
    truncated_moment_plus,
)
from .params import ConvergenceError, DomainError, StableParams0, StableParams1, convert, derived
from .quad import QuadConfig, QuadResult

__all__ = [
    "CondExpCoefficients", "ConvergenceError", "DomainError", "GFunQuery", "MomentQuery",
    "MomentResult", "QuadConfig", "QuadResult", "SpectralAtom", "StableParams0", "StableParams1",
    "abs_moment", "alpha_covariation", "cdf", "closed_form_at_zero", "cond_exp", "cond_exp_coeffs",
    "conjectured_negative_moment", "convert", "derived", "g", "g_tilde", "gfun_result", "h",
    "moment", "pdf", "prob_positive", "sample", "sf", "shifted_positive_mean", "signed_moment",
    "strictly_stable_moment", "truncated_moment_minus", "truncated_moment_plus",
]
