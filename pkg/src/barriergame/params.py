"""Model parameters, barrier-value distributions, and validation.

All objects here are immutable values; random draws take an explicit
numpy Generator so there is no hidden global state.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Any, Optional

import numpy as np


class EliminationMode(enum.Enum):
    UNILATERAL = "Unilateral"
    COOPERATIVE = "Cooperative"


def _power_floor(mu: float, p: float) -> float:
    """Lower bound on theta below which maintaining the barrier becomes a
    deliberate military advantage for the proposer.  Returns -inf when
    mu * p == 0 (the bound is vacuous there: any positive theta qualifies)."""
    if mu * p == 0.0:
        return -math.inf
    return (mu + p - 1.0) / (mu * p)


@dataclass(frozen=True)
class ModelParams:
    """Full parameter vector of the bargaining game.

    delta: per-period discount factor
    p:     responder's war-win probability from period 2 on (free trade)
    p1:    responder's war-win probability in period 1 (free trade)
    mu:    mean of the barrier-value distribution
    h0:    default period-1 barrier-reduced resource level
    c_R:   proposer's one-time war cost
    c_D:   responder's one-time war cost
    rho:   per-period probability that the postwar market renormalizes to 1
    theta: multiplier on the responder's win probability while the barrier stands
    """

    delta: float
    p: float
    p1: float
    mu: float
    h0: float
    c_R: float
    c_D: float
    rho: float = 0.0
    theta: float = 1.0
    elimination_mode: EliminationMode = EliminationMode.UNILATERAL

    def with_overrides(self, **kwargs: Any) -> "ModelParams":
        return replace(self, **kwargs)

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "p": self.p,
            "p1": self.p1,
            "mu": self.mu,
            "h0": self.h0,
            "c_R": self.c_R,
            "c_D": self.c_D,
            "rho": self.rho,
            "theta": self.theta,
            "elimination_mode": self.elimination_mode.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ModelParams":
        known = {
            "delta", "p", "p1", "mu", "h0", "c_R", "c_D",
            "rho", "theta", "elimination_mode",
        }
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown parameter keys: {sorted(unknown)}")
        kwargs = dict(data)
        mode = kwargs.pop("elimination_mode", EliminationMode.UNILATERAL.value)
        if isinstance(mode, EliminationMode):
            em = mode
        else:
            try:
                em = EliminationMode(mode)
            except ValueError:
                raise ValueError(f"elimination_mode must be one of "
                                 f"{[m.value for m in EliminationMode]}, got {mode!r}")
        for k in known - {"elimination_mode"}:
            if k in kwargs:
                kwargs[k] = float(kwargs[k])
        return cls(elimination_mode=em, **kwargs)


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violations: tuple[str, ...] = ()


def validate(params: ModelParams) -> ValidationResult:
    """Check every parameter restriction.  Violations are data, not errors,
    so grid sweeps can skip bad cells instead of aborting."""
    v: list[str] = []
    q = params
    if not (0.0 < q.delta < 1.0):
        v.append(f"0 < delta < 1 required, got {q.delta}")
    if not (0.0 <= q.p <= 1.0):
        v.append(f"0 <= p <= 1 required, got {q.p}")
    if not (0.0 <= q.p1 <= 1.0):
        v.append(f"0 <= p1 <= 1 required, got {q.p1}")
    if not (0.0 < q.h0 < 1.0):
        v.append(f"0 < h0 < 1 required, got {q.h0}")
    if not (0.0 < q.mu <= 1.0):
        v.append(f"0 < mu <= 1 required, got {q.mu}")
    if not (q.p1 > q.p):
        v.append(f"p1 > p required (declining power), got p1={q.p1}, p={q.p}")
    if not (q.c_R >= 0.0):
        v.append(f"c_R >= 0 required, got {q.c_R}")
    if not (q.c_D >= 0.0):
        v.append(f"c_D >= 0 required, got {q.c_D}")
    if not (0.0 <= q.rho <= 1.0):
        v.append(f"0 <= rho <= 1 required, got {q.rho}")
    if not (q.theta > 0.0):
        v.append(f"theta > 0 required, got {q.theta}")
    else:
        if q.theta * q.p1 > 1.0:
            v.append(f"theta*p1 <= 1 required, got {q.theta * q.p1}")
        if q.theta * q.p > 1.0:
            v.append(f"theta*p <= 1 required, got {q.theta * q.p}")
        if q.theta != 1.0:
            floor = _power_floor(q.mu, q.p)
            if math.isfinite(floor) and q.theta < floor:
                v.append(f"theta below floor {floor}")
    if not isinstance(q.elimination_mode, EliminationMode):
        v.append(f"elimination_mode invalid: {q.elimination_mode!r}")
    return ValidationResult(ok=not v, violations=tuple(v))


class DistributionKind(enum.Enum):
    DEGENERATE = "Degenerate"
    UNIFORM = "Uniform"
    SCALED_BETA = "ScaledBeta"


@dataclass(frozen=True)
class BarrierDistribution:
    """Barrier-value distribution on [0, 1].

    Three families are supported so closed-form results, which depend on
    the distribution only through its mean, can be checked to be
    distribution-invariant.
    """

    kind: DistributionKind
    a: float = 0.0
    b: float = 0.0

    @classmethod
    def degenerate(cls, mu: float) -> "BarrierDistribution":
        if not (0.0 <= mu <= 1.0):
            raise ValueError(f"degenerate point must lie in [0, 1], got {mu}")
        return cls(DistributionKind.DEGENERATE, mu, mu)

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "BarrierDistribution":
        if not (0.0 <= lo <= hi <= 1.0):
            raise ValueError(f"uniform support must satisfy 0 <= lo <= hi <= 1, "
                             f"got [{lo}, {hi}]")
        return cls(DistributionKind.UNIFORM, lo, hi)

    @classmethod
    def scaled_beta(cls, alpha: float, beta: float) -> "BarrierDistribution":
        if alpha <= 0.0 or beta <= 0.0:
            raise ValueError(f"beta shape parameters must be positive, "
                             f"got alpha={alpha}, beta={beta}")
        return cls(DistributionKind.SCALED_BETA, alpha, beta)

    @classmethod
    def uniform_with_mean(cls, mu: float, width: float) -> "BarrierDistribution":
        """Uniform with the given mean; width is shrunk if it would leave [0, 1]."""
        half = min(width / 2.0, mu, 1.0 - mu)
        return cls.uniform(mu - half, mu + half)

    @classmethod
    def scaled_beta_with_mean(cls, mu: float, concentration: float = 8.0) -> "BarrierDistribution":
        if not (0.0 < mu < 1.0):
            raise ValueError(f"beta mean must lie in (0, 1), got {mu}")
        return cls.scaled_beta(mu * concentration, (1.0 - mu) * concentration)

    @property
    def mean(self) -> float:
        if self.kind is DistributionKind.DEGENERATE:
            return self.a
        if self.kind is DistributionKind.UNIFORM:
            return (self.a + self.b) / 2.0
        return self.a / (self.a + self.b)

    def sample(self, rng: np.random.Generator, size: Optional[int] = None):
        if self.kind is DistributionKind.DEGENERATE:
            # point mass: draws are bit-identical to the mean
            if size is None:
                return self.a
            return np.full(size, self.a)
        if self.kind is DistributionKind.UNIFORM:
            return rng.uniform(self.a, self.b, size)
        return rng.beta(self.a, self.b, size)

    def describe(self) -> str:
        if self.kind is DistributionKind.DEGENERATE:
            return f"Degenerate({self.a})"
        if self.kind is DistributionKind.UNIFORM:
            return f"Uniform({self.a}, {self.b})"
        return f"ScaledBeta({self.a}, {self.b})"


def sample_h(dist: BarrierDistribution, rng: np.random.Generator) -> float:
    """Draw one barrier value from the distribution."""
    return float(dist.sample(rng))


def require_mean_matches(dist: BarrierDistribution, params: ModelParams,
                         tol: float = 1e-12) -> None:
    """Simulation entry points require the distribution mean to equal mu."""
    if abs(dist.mean - params.mu) > tol:
        raise ValueError(
            f"distribution mean {dist.mean} does not match mu={params.mu} "
            f"within {tol}")


def sample_valid_params(rng: np.random.Generator, *, theta_spread: bool = True,
                        rho_spread: bool = True,
                        cost_scale: float = 10.0) -> ModelParams:
    """Sample one valid parameter point for agreement and property tests.

    theta is drawn from {1} union [floor, 1/p1] (floor clipped away from
    zero) and rho uniformly on [0, 1], each active half the time.
    """
    delta = rng.uniform(0.15, 0.95)
    p = rng.uniform(0.02, 0.9)
    p1 = rng.uniform(p + 0.02, 1.0)
    mu = rng.uniform(0.3, 1.0)
    h0 = rng.uniform(0.05, 0.95)
    rho = rng.uniform(0.0, 1.0) if (rho_spread and rng.random() < 0.5) else 0.0
    if theta_spread and rng.random() < 0.5:
        lo = max(_power_floor(mu, p), 0.05)
        theta = rng.uniform(lo, 1.0 / p1)
    else:
        theta = 1.0
    c_d = rng.uniform(0.0, cost_scale)
    c_r = rng.uniform(0.0, cost_scale)
    return ModelParams(delta=delta, p=p, p1=p1, mu=mu, h0=h0,
                       c_R=c_r, c_D=c_d, rho=rho, theta=theta)
