"""Numerics for q-starlike and q-close-to-convex functions on the unit disk."""

from .bounds import (
    BoundTable,
    bound_table,
    bound_value,
    classical_bound,
    kq_bound,
    kq_bound_for_reference,
    radius_estimate,
    sq_cn_bound,
    sq_product_bound,
    verify_identity_corollaries,
    verify_series1_identity,
)
from .criteria import (
    CRITERIA,
    ComplexCoefficientsError,
    CriterionResult,
    CriterionSequence,
    criterion_sequence,
    crit_hexic,
    crit_koebe,
    crit_monotone_halfplane,
    crit_odd_lemniscate,
    crit_sum_halfplane,
    crit_two_step,
)
from .membership import (
    CheckConfig,
    ReferenceNotStarlikeError,
    Verdict,
    check_classical_ctc,
    check_classical_starlike,
    check_kq,
    check_kq_lemma,
    check_sq_star_def,
    check_sq_star_ratio,
)
from .qspecial import (
    CATALOG_IDS,
    HypergeometricSpec,
    dilog,
    friedman_catalog,
    heine_phi,
    kq_coeffs_recurrence,
    kq_series,
    psi_series,
    q_pochhammer,
    quantum_dilog,
    quantum_dilog_scaled,
)
from .series import (
    DiskGrid,
    TruncatedSeries,
    derivative,
    q_bracket,
    q_difference,
    series_add,
    series_dilate,
    series_eval,
    series_exp,
    series_mul,
    series_scale,
    tail_bound,
)

__version__ = "0.1.0"

__all__ = [
    "bound_table",
    "bound_value",
    "BoundTable",
    "CATALOG_IDS",
    "check_classical_ctc",
    "check_classical_starlike",
    "check_kq",
    "check_kq_lemma",
    "check_sq_star_def",
    "check_sq_star_ratio",
    "CheckConfig",
    "classical_bound",
    "ComplexCoefficientsError",
    "crit_hexic",
    "crit_koebe",
    "crit_monotone_halfplane",
    "crit_odd_lemniscate",
    "crit_sum_halfplane",
    "crit_two_step",
    "CRITERIA",
    "criterion_sequence",
    "CriterionResult",
    "CriterionSequence",
    "derivative",
    "dilog",
    "DiskGrid",
    "friedman_catalog",
    "heine_phi",
    "HypergeometricSpec",
    "kq_bound",
    "kq_bound_for_reference",
    "kq_coeffs_recurrence",
    "kq_series",
    "psi_series",
    "q_bracket",
    "q_difference",
    "q_pochhammer",
    "quantum_dilog",
    "quantum_dilog_scaled",
    "radius_estimate",
    "ReferenceNotStarlikeError",
    "series_add",
    "series_dilate",
    "series_eval",
    "series_exp",
    "series_mul",
    "series_scale",
    "sq_cn_bound",
    "sq_product_bound",
    "tail_bound",
    "TruncatedSeries",
    "Verdict",
    "verify_identity_corollaries",
    "verify_series1_identity",
]
