"""Differentially-private greedy rule lists with smooth-sensitivity
calibrated noise."""

from .backend import BACKEND
from .dataset import (
    BinaryDataset,
    DataError,
    EmptyRuleSetError,
    Literal,
    MinedRuleSet,
    binarize,
    load_csv,
    mine_rules,
    split,
)
from .evaluation import VulnerabilityReport, accuracy_report, vulnerability
from .gini import (
    GiniStats,
    SensitivityContext,
    gini_reduction,
    local_sensitivity,
    smooth_sensitivity,
    smooth_sensitivity_oracle,
)
from .learner import (
    LearnerConfig,
    StopReason,
    TrainTrace,
    confidence_threshold,
    dp_greedy_rl,
    dp_greedy_rl_variant,
    greedy_rl,
    pred_dp,
)
from .mechanisms import (
    MechanismKind,
    NoiseSource,
    PrivacyBudget,
    exponential_mechanism,
    make_budget,
    noisy_max_report,
    sample_cauchy,
    sample_gaussian,
    sample_laplace,
)
from .rulelist import Rule, RuleList, accuracy, capture, predict

__version__ = "0.1.0"
