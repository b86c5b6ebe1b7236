"""Empirical money distributions: CCDF, family fits and inequality metrics."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

DEFAULT_PARETO_X_MIN = 2000.0
MIN_FIT_SAMPLES = 30
GAMMA_GRID_POINTS = 200


class AnalysisError(ValueError):
    pass


class EmptySampleError(AnalysisError):
    pass


class DegenerateSampleError(AnalysisError):
    pass


class InsufficientTailError(AnalysisError):
    pass


class ZeroTotalError(AnalysisError):
    pass


class Family(enum.Enum):
    EXPONENTIAL = "exponential"
    GAMMA = "gamma"
    PARETO = "pareto"


@dataclass(frozen=True)
class FitReport:
    """Fitted parameters of one reference family.

    ``params`` keys: ``temperature`` (exponential), ``shape``/``scale``
    (gamma), ``alpha``/``x_min`` (Pareto tail). ``r_squared`` is measured in
    the family's natural coordinates.
    """

    family: Family
    params: dict
    r_squared: float
    n_samples: int

    def __getitem__(self, key):
        return self.params[key]

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "params": {k: float(v) for k, v in self.params.items()},
            "r_squared": float(self.r_squared),
            "n_samples": int(self.n_samples),
        }


@dataclass(frozen=True)
class ParticipantFilter:
    min_trades: int = 1

    def __post_init__(self):
        if self.min_trades < 1:
            raise ValueError(f"participant threshold must be at least 1, got {self.min_trades}")


@dataclass(frozen=True)
class EmpiricalCdf:
    """Complementary CDF ``P(m >= v)`` of a sample."""

    values: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.values.size

    def __call__(self, v):
        # right-continuous counting of samples >= v
        idx = np.searchsorted(self.values, v, side="left")
        return (self.n - idx) / self.n

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """Distinct sample values and ``P(m >= value)`` at each."""
        uniq, first = np.unique(self.values, return_index=True)
        return uniq, (self.n - first) / self.n


def _as_samples(samples) -> np.ndarray:
    arr = np.asarray(samples, dtype=np.float64).ravel()
    if arr.size == 0:
        raise EmptySampleError("sample is empty")
    if not np.all(np.isfinite(arr)):
        raise AnalysisError("sample contains non-finite values")
    return arr


def ccdf(samples) -> EmpiricalCdf:
    arr = _as_samples(samples)
    return EmpiricalCdf(np.sort(arr))


def filter_participants(result, f: ParticipantFilter = ParticipantFilter()) -> tuple[np.ndarray, int]:
    """Money of agents with at least ``f.min_trades`` executed trades, and the passive count.

    Agents that never traded must still hold exactly ``m0``.
    """
    pop = result.population
    never = pop.trades == 0
    if np.any(pop.money[never] != pop.m0):
        raise AssertionError("an agent with no executed trades does not hold its initial money")
    keep = pop.trades >= f.min_trades
    return pop.money[keep].copy(), int(pop.n_agents - np.count_nonzero(keep))


def _r_squared(y, y_fit) -> float:
    ss_res = float(np.sum((y - y_fit) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    if ss_tot == 0:
        return 0.0
    return min(max(1.0 - ss_res / ss_tot, 0.0), 1.0)


def fit_exponential(cdf: EmpiricalCdf, central: float = 0.9) -> FitReport:
    """Boltzmann-Gibbs fit: ``ln P(v)`` linear in ``v`` with slope ``-1 / T``.

    Only the central ``central`` fraction of the value range enters the
    regression; the sparse top end is too noisy.
    """
    if cdf.n < MIN_FIT_SAMPLES:
        raise DegenerateSampleError(f"need at least {MIN_FIT_SAMPLES} samples, got {cdf.n}")
    lo, hi = cdf.values[0], cdf.values[-1]
    if lo < 0:
        raise AnalysisError("exponential fit needs non-negative values")
    span = hi - lo
    if span <= 0:
        raise DegenerateSampleError("sample has zero variance")
    margin = 0.5 * (1.0 - central) * span
    v, p = cdf.points()
    mask = (v >= lo + margin) & (v <= hi - margin)
    if np.count_nonzero(mask) < 3:
        raise DegenerateSampleError("too few distinct values in the central range")
    reg = stats.linregress(v[mask], np.log(p[mask]))
    if not reg.slope < 0:
        raise DegenerateSampleError(f"log-CCDF slope is not negative ({reg.slope})")
    return FitReport(
        Family.EXPONENTIAL,
        {"temperature": float(-1.0 / reg.slope)},
        float(reg.rvalue**2),
        cdf.n,
    )


def fit_gamma(samples) -> FitReport:
    """Moment-matched Gamma: ``k = mean^2 / var``, ``theta = var / mean``.

    Goodness is the R^2 between model and empirical CCDF on an even grid
    spanning the sample.
    """
    arr = _as_samples(samples)
    if arr.size < MIN_FIT_SAMPLES:
        raise DegenerateSampleError(f"need at least {MIN_FIT_SAMPLES} samples, got {arr.size}")
    if np.any(arr < 0):
        raise AnalysisError("gamma fit needs non-negative values")
    mean = float(np.mean(arr))
    var = float(np.var(arr))
    if var == 0 or mean == 0:
        raise DegenerateSampleError("sample has zero variance")
    k = mean * mean / var
    theta = var / mean
    cdf = EmpiricalCdf(np.sort(arr))
    grid = np.linspace(cdf.values[0], cdf.values[-1], GAMMA_GRID_POINTS)
    model = stats.gamma.sf(grid, k, scale=theta)
    return FitReport(Family.GAMMA, {"shape": float(k), "scale": float(theta)}, _r_squared(cdf(grid), model), arr.size)


def fit_pareto_tail(cdf: EmpiricalCdf, x_min: float = DEFAULT_PARETO_X_MIN) -> FitReport:
    """Power-law tail: ``log10 P(v)`` linear in ``log10 v`` for ``v >= x_min``.

    ``alpha`` is minus the slope. ``n_samples`` counts the tail only.
    """
    if not x_min > 0:
        raise ValueError(f"x_min must be positive, got {x_min}")
    n_tail = int(cdf.n - np.searchsorted(cdf.values, x_min, side="left"))
    if n_tail < MIN_FIT_SAMPLES:
        raise InsufficientTailError(f"only {n_tail} samples at or above x_min={x_min}, need {MIN_FIT_SAMPLES}")
    v, p = cdf.points()
    mask = v >= x_min
    if np.count_nonzero(mask) < 3:
        raise InsufficientTailError("too few distinct tail values")
    reg = stats.linregress(np.log10(v[mask]), np.log10(p[mask]))
    return FitReport(
        Family.PARETO,
        {"alpha": float(-reg.slope), "x_min": float(x_min)},
        float(reg.rvalue**2),
        n_tail,
    )


def gini(samples) -> float:
    arr = _as_samples(samples)
    if np.any(arr < 0):
        raise AnalysisError("Gini coefficient needs non-negative values")
    total = arr.sum()
    if total == 0:
        raise ZeroTotalError("all samples are zero")
    x = np.sort(arr)
    if x[0] == x[-1]:
        return 0.0
    n = x.size
    ranks = np.arange(1, n + 1, dtype=np.float64)
    g = 2.0 * np.dot(ranks, x) / (n * total) - (n + 1.0) / n
    return float(min(max(g, 0.0), 1.0))


def histogram(samples, bin_width: float) -> dict[int, int]:
    """Counts per bin ``[k w, (k + 1) w)``, keyed by ``k``; only occupied bins appear."""
    if not bin_width > 0:
        raise ValueError(f"bin width must be positive, got {bin_width}")
    arr = np.asarray(samples, dtype=np.float64).ravel()
    if arr.size == 0:
        return {}
    bins = np.floor(arr / bin_width).astype(np.int64)
    keys, counts = np.unique(bins, return_counts=True)
    return {int(k): int(c) for k, c in zip(keys, counts)}


@dataclass
class DistributionSummary:
    """Everything the CLI reports about one final population."""

    n_agents: int
    passive: int
    gini: float
    fits: dict = field(default_factory=dict)
    fit_errors: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n_agents": self.n_agents,
            "passive": self.passive,
            "participants": self.n_agents - self.passive,
            "gini": self.gini,
            "fits": {k: v.to_dict() for k, v in self.fits.items()},
            "fit_errors": dict(self.fit_errors),
        }


def summarize(
    result,
    families=(Family.EXPONENTIAL, Family.GAMMA, Family.PARETO),
    x_min: float = DEFAULT_PARETO_X_MIN,
    participant_filter: ParticipantFilter = ParticipantFilter(),
) -> DistributionSummary:
    """Fit the requested families to the participants' money.

    A family that cannot be fitted is listed in ``fit_errors`` instead.
    """
    money, passive = filter_participants(result, participant_filter)
    summary = DistributionSummary(
        n_agents=result.population.n_agents,
        passive=passive,
        gini=gini(money) if money.size and money.sum() > 0 else float("nan"),
    )
    for fam in families:
        fam = Family(fam)
        try:
            if fam is Family.EXPONENTIAL:
                rep = fit_exponential(ccdf(money))
            elif fam is Family.GAMMA:
                rep = fit_gamma(money)
            else:
                rep = fit_pareto_tail(ccdf(money), x_min)
        except AnalysisError as exc:
            summary.fit_errors[fam.value] = str(exc)
        else:
            summary.fits[fam.value] = rep
    return summary
