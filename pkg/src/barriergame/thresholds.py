"""Closed-form equilibrium thresholds and indifference offers.

Every formula is a pure function of ModelParams.  The postwar-renormalization
extension enters through :func:`effective_mu`, which substitutes for the raw
barrier mean in every war-payoff expression; the power-modification extension
enters through theta.  When both are active the substitution composes, and
the result set is labeled ``extension: composed``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .params import ModelParams, _power_floor


def effective_mu(params: ModelParams) -> float:
    """Mean value of the postwar market under per-period renormalization.

    Solves x = rho + (1 - rho) * ((1 - delta) * mu + delta * x).
    The endpoints are returned exactly: mu at rho=0 and 1 at rho=1.
    """
    if params.rho == 0.0:
        return params.mu
    if params.rho == 1.0:
        return 1.0
    rho, delta, mu = params.rho, params.delta, params.mu
    return ((1.0 - rho) * (1.0 - delta) * mu + rho) / (1.0 - (1.0 - rho) * delta)


def efficient_peace_threshold(params: ModelParams) -> float:
    """Responder war cost above which peace with the barrier removed in
    period 1 is sustainable.  Does not depend on mu, h0, rho, or theta."""
    delta, p, p1 = params.delta, params.p, params.p1
    return ((p1 - delta * p) / (1.0 - delta) - 1.0) / (1.0 - delta)


def inefficient_cd_threshold(params: ModelParams) -> float:
    """Responder war cost above which the period-1 appeasement offer fits
    inside the barrier-reduced resource."""
    delta, p, p1, h0, theta = params.delta, params.p, params.p1, params.h0, params.theta
    m = effective_mu(params)
    return (delta / (1.0 - delta) * (m * (theta * p1) - p)
            - (1.0 - theta * p1) * h0) / (1.0 - delta)


def inefficient_joint_threshold(params: ModelParams) -> float:
    """Joint war cost below which the proposer prefers removing the barrier
    and fighting over keeping it and appeasing."""
    delta, p1, h0, theta = params.delta, params.p1, params.h0, params.theta
    m = effective_mu(params)
    return (1.0 - p1
            - ((1.0 - delta) * h0 * (1.0 - theta * p1)
               + delta * (1.0 - m * (theta * p1)))) / (1.0 - delta)


def inefficient_joint_threshold_compact(params: ModelParams) -> float:
    """Algebraic twin of :func:`inefficient_joint_threshold` in product form.
    Valid at theta = 1 only; kept as an independent transcription guard."""
    delta, p1, h0 = params.delta, params.p1, params.h0
    m = effective_mu(params)
    return (1.0 - p1) * (1.0 - h0) - delta / (1.0 - delta) * p1 * (1.0 - m)


def theta_floor(params: ModelParams) -> float:
    """Floor on theta; -inf when mu * p == 0 (any positive theta admissible)."""
    return _power_floor(params.mu, params.p)


@dataclass(frozen=True)
class IndifferenceOffers:
    """Raw indifference transfers plus their playable clamps.

    Raw values are the exact accounting of the acceptance condition
    (offer + delta * continuation = war value) and may be negative; the
    clamped values are what an executable strategy can actually offer.
    """

    offer1_efficient: float
    offer1_inefficient: float
    offer_stationary: float
    offer1_efficient_clamped: float
    offer1_inefficient_clamped: float
    offer_stationary_clamped: float


def indifference_offers(params: ModelParams) -> IndifferenceOffers:
    """Smallest offers making the responder weakly prefer acceptance, in the
    three bargaining positions: period 1 after elimination, period 1 with the
    barrier kept, and the stationary phase (full resource, post-shift)."""
    delta, p, p1, h0, theta = params.delta, params.p, params.p1, params.h0, params.theta
    c_D = params.c_D
    m = effective_mu(params)
    x1_eff = (p1 - delta * p) / (1.0 - delta) - (1.0 - delta) * c_D
    x1_inef = (theta * p1) * h0 - (1.0 - delta) * c_D \
        + delta / (1.0 - delta) * (m * (theta * p1) - p)
    x_stat = p - (1.0 - delta) * c_D
    return IndifferenceOffers(
        offer1_efficient=x1_eff,
        offer1_inefficient=x1_inef,
        offer_stationary=x_stat,
        offer1_efficient_clamped=min(max(x1_eff, 0.0), 1.0),
        offer1_inefficient_clamped=min(max(x1_inef, 0.0), h0),
        offer_stationary_clamped=min(max(x_stat, 0.0), 1.0),
    )


@dataclass(frozen=True)
class ThresholdSet:
    """All computed thresholds and derived quantities for one parameter point."""

    cbar_D: float
    clow_D: float
    Clow: float
    postwar_mean: float
    theta_floor: float
    offer1_efficient: float
    offer1_inefficient: float
    offer_stationary: float
    offer1_efficient_clamped: float
    offer1_inefficient_clamped: float
    offer_stationary_clamped: float
    extension: str

    def to_dict(self) -> dict:
        d = {
            "cbar_D": self.cbar_D,
            "clow_D": self.clow_D,
            "Clow": self.Clow,
            "postwar_mean": self.postwar_mean,
            # -inf floor means "floor undefined, any theta admissible"
            "theta_floor": self.theta_floor if math.isfinite(self.theta_floor) else None,
            "offer1_efficient": self.offer1_efficient,
            "offer1_inefficient": self.offer1_inefficient,
            "offer_stationary": self.offer_stationary,
            "offer1_efficient_clamped": self.offer1_efficient_clamped,
            "offer1_inefficient_clamped": self.offer1_inefficient_clamped,
            "offer_stationary_clamped": self.offer_stationary_clamped,
            "extension": self.extension,
        }
        return d


def extension_label(params: ModelParams) -> str:
    rho_active = params.rho != 0.0
    theta_active = params.theta != 1.0
    if rho_active and theta_active:
        return "composed"
    if rho_active:
        return "rho"
    if theta_active:
        return "theta"
    return "baseline"


def compute_thresholds(params: ModelParams) -> ThresholdSet:
    offers = indifference_offers(params)
    return ThresholdSet(
        cbar_D=efficient_peace_threshold(params),
        clow_D=inefficient_cd_threshold(params),
        Clow=inefficient_joint_threshold(params),
        postwar_mean=effective_mu(params),
        theta_floor=theta_floor(params),
        offer1_efficient=offers.offer1_efficient,
        offer1_inefficient=offers.offer1_inefficient,
        offer_stationary=offers.offer_stationary,
        offer1_efficient_clamped=offers.offer1_efficient_clamped,
        offer1_inefficient_clamped=offers.offer1_inefficient_clamped,
        offer_stationary_clamped=offers.offer_stationary_clamped,
        extension=extension_label(params),
    )
