"""Exact and Monte Carlo analysis of low-degree polynomial threshold functions."""

from .decompose import (
    BlockAlphaReport,
    BlockIdentityCheck,
    BlockPartition,
    DecisionTree,
    Leaf,
    LeafClass,
    LeafKind,
    RecursionSchedule,
    RecursionTrace,
    RegularityConfig,
    SmallAlphaCheck,
    TreeSensitivityCheck,
    block_alpha_sum,
    block_partition,
    block_sensitivity_identity_check,
    build_regularity_tree,
    classify_leaf,
    default_threshold,
    influential_set,
    recursion_trace,
    small_alpha_check,
    tree_sensitivity_check,
)
from .errors import CapExceededError, InputError, InvariantViolationError, PtflabError
from .hypercube import (
    FourierSpectrum,
    SignFunction,
    TruthTable,
    average_sensitivity_exact,
    average_sensitivity_fourier,
    evaluate_on_hypercube,
    fourier,
    fwht,
    gl_bound,
    gl_report_row,
    middle_layers_witness,
    noise_sensitivity_exact,
    theorem_bound,
    truth_table,
)
from .polynomial import Moments, MultilinearPolynomial, sign_pm1
from .randomized import (
    BERNOULLI,
    GAUSSIAN,
    EstimatorResult,
    HypercontractivityCheck,
    InvarianceGap,
    Rng,
    TailCurve,
    abs_comparison_gap,
    carbery_wright_estimate,
    estimate_alpha,
    estimate_beta,
    exact_alpha,
    hypercontractivity_check,
    invariance_gap,
    random_polynomial,
    rotation_pair,
    sample_bernoulli,
    sample_bernoulli_many,
    sample_gaussian,
    sample_gaussian_many,
    strong_anticoncentration_estimate,
    tail_curve,
    weak_anticoncentration_estimate,
    weak_anticoncentration_exact,
)

__version__ = "0.1.0"

__all__ = [
    "BERNOULLI",
    "GAUSSIAN",
    "BlockAlphaReport",
    "BlockIdentityCheck",
    "BlockPartition",
    "CapExceededError",
    "DecisionTree",
    "EstimatorResult",
    "FourierSpectrum",
    "HypercontractivityCheck",
    "InputError",
    "InvarianceGap",
    "InvariantViolationError",
    "Leaf",
    "LeafClass",
    "LeafKind",
    "Moments",
    "MultilinearPolynomial",
    "PtflabError",
    "RecursionSchedule",
    "RecursionTrace",
    "RegularityConfig",
    "Rng",
    "SignFunction",
    "SmallAlphaCheck",
    "TailCurve",
    "TreeSensitivityCheck",
    "TruthTable",
    "abs_comparison_gap",
    "average_sensitivity_exact",
    "average_sensitivity_fourier",
    "block_alpha_sum",
    "block_partition",
    "block_sensitivity_identity_check",
    "build_regularity_tree",
    "carbery_wright_estimate",
    "classify_leaf",
    "default_threshold",
    "estimate_alpha",
    "estimate_beta",
    "evaluate_on_hypercube",
    "exact_alpha",
    "fourier",
    "fwht",
    "gl_bound",
    "gl_report_row",
    "hypercontractivity_check",
    "influential_set",
    "invariance_gap",
    "middle_layers_witness",
    "noise_sensitivity_exact",
    "random_polynomial",
    "recursion_trace",
    "rotation_pair",
    "sample_bernoulli",
    "sample_bernoulli_many",
    "sample_gaussian",
    "sample_gaussian_many",
    "sign_pm1",
    "small_alpha_check",
    "strong_anticoncentration_estimate",
    "tail_curve",
    "theorem_bound",
    "tree_sensitivity_check",
    "truth_table",
    "weak_anticoncentration_estimate",
    "weak_anticoncentration_exact",
]
