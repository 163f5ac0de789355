"""Equilibrium taxonomy classification and comparative-statics machinery."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .params import ModelParams, validate
from .thresholds import ThresholdSet, compute_thresholds


class InvalidParamsError(ValueError):
    """Raised when an operation refuses invalid parameters."""

    def __init__(self, violations: Sequence[str]):
        super().__init__("; ".join(violations))
        self.violations = tuple(violations)


class RegionLabel(enum.Enum):
    WAR = "War"
    INEFFICIENT_PEACE = "InefficientPeace"
    EFFICIENT_PEACE = "EfficientPeace"
    BOTH = "Both"
    SKIPPED = "Skipped"


@dataclass(frozen=True)
class Margins:
    efficient: float      # c_D - cbar_D
    cd: float             # c_D - clow_D
    joint: float          # c_D + c_R - Clow


@dataclass(frozen=True)
class EquilibriumReport:
    efficient_peace_exists: bool
    inefficient_peace_exists: bool
    war_inevitable: bool
    assumption_holds: bool   # c_D < cbar_D, the restriction the analysis maintains
    margins: Margins
    thresholds: ThresholdSet

    @property
    def label(self) -> RegionLabel:
        if self.efficient_peace_exists and self.inefficient_peace_exists:
            return RegionLabel.BOTH
        if self.efficient_peace_exists:
            return RegionLabel.EFFICIENT_PEACE
        if self.inefficient_peace_exists:
            return RegionLabel.INEFFICIENT_PEACE
        return RegionLabel.WAR

    def to_dict(self) -> dict:
        return {
            "efficient_peace_exists": self.efficient_peace_exists,
            "inefficient_peace_exists": self.inefficient_peace_exists,
            "war_inevitable": self.war_inevitable,
            "assumption_holds": self.assumption_holds,
            "label": self.label.value,
            "margins": {
                "efficient": self.margins.efficient,
                "cd": self.margins.cd,
                "joint": self.margins.joint,
            },
            "thresholds": self.thresholds.to_dict(),
        }


def report_from_margins(margins: Margins, thresholds: ThresholdSet) -> EquilibriumReport:
    """Labels are pure functions of the margins; boundary cells (margin 0)
    take the weak-inequality side."""
    efficient = margins.efficient >= 0.0
    inefficient = margins.cd >= 0.0 and margins.joint >= 0.0
    return EquilibriumReport(
        efficient_peace_exists=efficient,
        inefficient_peace_exists=inefficient,
        war_inevitable=not efficient and not inefficient,
        assumption_holds=margins.efficient < 0.0,
        margins=margins,
        thresholds=thresholds,
    )


def classify(params: ModelParams) -> EquilibriumReport:
    """Map one parameter point to the equilibrium taxonomy."""
    result = validate(params)
    if not result.ok:
        raise InvalidParamsError(result.violations)
    ts = compute_thresholds(params)
    margins = Margins(
        efficient=params.c_D - ts.cbar_D,
        cd=params.c_D - ts.clow_D,
        joint=params.c_D + params.c_R - ts.Clow,
    )
    return report_from_margins(margins, ts)


@dataclass(frozen=True)
class RegionGrid:
    """Rasterized (c_R, c_D) classification with the boundary curves."""

    cr_values: tuple[float, ...]
    cd_values: tuple[float, ...]
    # labels[i][j] corresponds to (cd_values[i], cr_values[j])
    labels: tuple[tuple[RegionLabel, ...], ...]
    margins_efficient: tuple[tuple[float, ...], ...]
    margins_cd: tuple[tuple[float, ...], ...]
    margins_joint: tuple[tuple[float, ...], ...]
    cbar_D: float
    clow_D: float
    Clow: float
    cr_range: tuple[float, float]
    cd_range: tuple[float, float]


def _cell_centers(lo: float, hi: float, n: int) -> tuple[float, ...]:
    width = (hi - lo) / n
    return tuple(lo + (i + 0.5) * width for i in range(n))


def region_grid(base: ModelParams, cr_range: tuple[float, float],
                cd_range: tuple[float, float], resolution: int) -> RegionGrid:
    """Classify every cell center of a (c_R, c_D) raster.

    Invalid cells (e.g. ranges reaching into negative costs) are Skipped.
    Cell evaluation is pure and independent, so callers may shard it freely.
    """
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    crs = _cell_centers(cr_range[0], cr_range[1], resolution)
    cds = _cell_centers(cd_range[0], cd_range[1], resolution)
    ts = compute_thresholds(base)
    labels: list[tuple[RegionLabel, ...]] = []
    m_eff: list[tuple[float, ...]] = []
    m_cd: list[tuple[float, ...]] = []
    m_joint: list[tuple[float, ...]] = []
    for cd in cds:
        row_l, row_e, row_c, row_j = [], [], [], []
        for cr in crs:
            cell = base.with_overrides(c_D=cd, c_R=cr)
            try:
                rep = classify(cell)
            except InvalidParamsError:
                row_l.append(RegionLabel.SKIPPED)
                row_e.append(float("nan"))
                row_c.append(float("nan"))
                row_j.append(float("nan"))
                continue
            row_l.append(rep.label)
            row_e.append(rep.margins.efficient)
            row_c.append(rep.margins.cd)
            row_j.append(rep.margins.joint)
        labels.append(tuple(row_l))
        m_eff.append(tuple(row_e))
        m_cd.append(tuple(row_c))
        m_joint.append(tuple(row_j))
    return RegionGrid(
        cr_values=crs, cd_values=cds, labels=tuple(labels),
        margins_efficient=tuple(m_eff), margins_cd=tuple(m_cd),
        margins_joint=tuple(m_joint),
        cbar_D=ts.cbar_D, clow_D=ts.clow_D, Clow=ts.Clow,
        cr_range=tuple(cr_range), cd_range=tuple(cd_range),
    )


SWEEPABLE_KNOBS = ("mu", "p", "h0", "c_D", "c_R", "rho", "theta")


@dataclass(frozen=True)
class SweepPoint:
    value: float
    thresholds: ThresholdSet
    report: EquilibriumReport


def comparative_static(base: ModelParams, knob: str,
                       values: Iterable[float]) -> list[SweepPoint]:
    """Trace thresholds and classifications along one parameter knob."""
    if knob not in SWEEPABLE_KNOBS:
        raise ValueError(f"unknown knob {knob!r}; expected one of {SWEEPABLE_KNOBS}")
    out = []
    for value in values:
        point = base.with_overrides(**{knob: float(value)})
        rep = classify(point)
        out.append(SweepPoint(value=float(value), thresholds=rep.thresholds, report=rep))
    return out


@dataclass(frozen=True)
class IntersectionResult:
    found: bool
    witness: Optional[tuple[float, float]]   # (c_R, c_D)
    searched_box: tuple[tuple[float, float], tuple[float, float]]
    note: str

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "witness": list(self.witness) if self.witness else None,
            "searched_box": [list(self.searched_box[0]), list(self.searched_box[1])],
            "note": self.note,
        }


def intersection_nonempty(base: ModelParams, grid_points: int = 64) -> IntersectionResult:
    """Search a finite box for a cost pair supporting inefficient-but-not-
    efficient peace.  This is a numerical check, not a proof; an empty band
    is recorded as a counterexample candidate for the nonemptiness claim."""
    result = validate(base)
    if not result.ok:
        raise InvalidParamsError(result.violations)
    ts = compute_thresholds(base)
    cr_hi = 10.0 * max(1.0, abs(ts.Clow))
    cd_lo = max(ts.clow_D, 0.0)
    cd_hi = ts.cbar_D
    box = ((0.0, cr_hi), (cd_lo, max(cd_hi, cd_lo)))
    if not (cd_lo < cd_hi):
        note = (f"band empty: clow_D={ts.clow_D} vs cbar_D={ts.cbar_D}; "
                f"counterexample candidate for the nonemptiness claim")
        return IntersectionResult(False, None, box, note)
    for i in range(grid_points):
        cd = cd_lo + (cd_hi - cd_lo) * i / grid_points
        if cd >= cd_hi:
            continue
        for j in range(grid_points + 1):
            cr = cr_hi * j / grid_points
            if cd >= ts.clow_D and cd + cr >= ts.Clow and cd < ts.cbar_D:
                return IntersectionResult(True, (cr, cd), box, "witness found")
    return IntersectionResult(False, None, box,
                              "no witness in searched box despite nonempty band")
