"""Solver, simulator, and verifier for a two-player infinite-horizon
crisis-bargaining game with a removable trade barrier."""

from .params import (
    BarrierDistribution,
    EliminationMode,
    ModelParams,
    ValidationResult,
    sample_h,
    validate,
)
from .thresholds import (
    IndifferenceOffers,
    ThresholdSet,
    compute_thresholds,
    effective_mu,
    efficient_peace_threshold,
    indifference_offers,
    inefficient_cd_threshold,
    inefficient_joint_threshold,
    theta_floor,
)
from .classifier import (
    EquilibriumReport,
    InvalidParamsError,
    Margins,
    RegionGrid,
    RegionLabel,
    classify,
    comparative_static,
    intersection_nonempty,
    region_grid,
)
from .engine import (
    ActionRecord,
    GameError,
    GameState,
    ProfileExistenceError,
    ProfileMode,
    Response,
    SimStats,
    StrategyProfile,
    TerminalOutcome,
    analytic_payoffs,
    equilibrium_profile,
    expected_war_payoffs,
    new_game,
    simulate,
    step,
)
from .oracle import (
    OracleThresholds,
    VerificationReport,
    oracle_thresholds,
    postwar_market_mean,
    verify_period1,
)
from .presets import Preset, get_preset, list_presets

__version__ = "0.1.0"
