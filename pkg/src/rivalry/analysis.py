"""Dominance detection, duration statistics and regime labels.

A channel becomes dominant when its activity exceeds the other's by more than
``delta`` and stays dominant until the other channel exceeds it by more than
``delta`` (hysteresis).  Only the stretch before the first threshold crossing
can be undecided.

Sample ``k`` is taken to represent ``[t_k, t_k + h)`` where ``h`` is the
sample spacing, so an analysis window over samples ``t_a .. t_b`` spans
``[t_a, t_b + h)``.  Rates are reported per second on the assumption that the
model's time unit is the millisecond (Kalarickal's dimensionless time is
treated the same way).
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Any, Iterable, Sequence

import numpy as np

from .integrator import Trajectory

__all__ = [
    "AnalysisError",
    "Regime",
    "AnalysisConfig",
    "DominanceInterval",
    "DominanceReport",
    "detect_dominance",
    "detect_dominance_arrays",
    "dominance_stats",
    "classify_regime",
    "classify_arrays",
    "analyze",
    "analyze_arrays",
    "intervals_to_csv",
]


class AnalysisError(ValueError):
    """The trajectory cannot be analysed with the given configuration."""


class Regime(str, Enum):
    RIVALRY = "Rivalry"
    WINNER_TAKE_ALL = "WinnerTakeAll"
    FUSION = "Fusion"
    EQUAL_ACTIVITY = "EqualActivity"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class AnalysisConfig:
    """Detector settings.

    ``None`` fields are resolved per trajectory: ``t_transient`` to 20 % of
    the simulated duration, ``delta`` to 5 % of the model's activity scale,
    ``epsilon_fusion`` to ``delta`` and ``equal_activity_level`` to 25 % of
    the activity scale.

    ``fusion_fraction`` is the share of the window in which the margin must
    stay below ``epsilon_fusion`` for a non-alternating label; 1.0 demands it
    throughout.  The default of one half keeps sporadic noise-driven
    excursions around a fused state from counting as rivalry.
    """

    t_transient: float | None = None
    delta: float | None = None
    epsilon_fusion: float | None = None
    min_switches_rivalry: int = 3
    equal_activity_level: float | None = None
    fusion_fraction: float = 0.5

    def __post_init__(self):
        for name in ("t_transient", "delta", "epsilon_fusion", "equal_activity_level"):
            v = getattr(self, name)
            if v is not None and not (math.isfinite(v) and v >= 0):
                raise AnalysisError(f"{name} must be a nonnegative number, got {v!r}")
        if self.min_switches_rivalry < 0:
            raise AnalysisError("min_switches_rivalry must be >= 0")
        if not 0.0 < self.fusion_fraction <= 1.0:
            raise AnalysisError(f"fusion_fraction must lie in (0, 1], got {self.fusion_fraction!r}")

    def resolve(self, activity_scale: float, duration: float) -> "AnalysisConfig":
        delta = 0.05 * activity_scale if self.delta is None else self.delta
        return AnalysisConfig(
            t_transient=0.2 * duration if self.t_transient is None else self.t_transient,
            delta=delta,
            epsilon_fusion=delta if self.epsilon_fusion is None else self.epsilon_fusion,
            min_switches_rivalry=self.min_switches_rivalry,
            equal_activity_level=(0.25 * activity_scale if self.equal_activity_level is None
                                  else self.equal_activity_level),
            fusion_fraction=self.fusion_fraction,
        )

    def for_trajectory(self, traj: Trajectory) -> "AnalysisConfig":
        return self.resolve(traj.model.activity_scale, traj.config.duration)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class DominanceInterval:
    channel: int
    start: float
    end: float
    complete: bool

    @property
    def duration(self) -> float:
        return self.end - self.start


@dataclass
class DominanceReport:
    intervals: list[DominanceInterval]
    window: tuple[float, float]
    mean_duration_1: float | None
    mean_duration_2: float | None
    alternation_rate: float
    predominance_1: float
    predominance_2: float
    n_switches: int
    regime: Regime = Regime.UNDETERMINED
    winner: int | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def undecided_fraction(self) -> float:
        return 1.0 - self.predominance_1 - self.predominance_2

    @property
    def label(self) -> str:
        if self.regime is Regime.WINNER_TAKE_ALL:
            return f"WinnerTakeAll({self.winner})"
        return self.regime.value

    def summary(self) -> dict[str, Any]:
        """Scalar fields only, suitable for printing and tabulating."""
        return {
            "regime": self.regime.value,
            "winner": self.winner,
            "label": self.label,
            "mean_duration_1": self.mean_duration_1,
            "mean_duration_2": self.mean_duration_2,
            "alternation_rate": self.alternation_rate,
            "predominance_1": self.predominance_1,
            "predominance_2": self.predominance_2,
            "n_switches": self.n_switches,
            "n_intervals": len(self.intervals),
            "window": list(self.window),
        }

    def to_dict(self) -> dict[str, Any]:
        d = self.summary()
        d["intervals"] = [asdict(iv) for iv in self.intervals]
        if self.extra:
            d["extra"] = self.extra
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "DominanceReport":
        return cls(
            intervals=[DominanceInterval(**iv) for iv in d.get("intervals", [])],
            window=tuple(d["window"]),
            mean_duration_1=d["mean_duration_1"],
            mean_duration_2=d["mean_duration_2"],
            alternation_rate=d["alternation_rate"],
            predominance_1=d["predominance_1"],
            predominance_2=d["predominance_2"],
            n_switches=d["n_switches"],
            regime=Regime(d["regime"]),
            winner=d.get("winner"),
            extra=d.get("extra", {}),
        )

    def swapped(self) -> "DominanceReport":
        """The report of the channel-relabelled trajectory."""
        return replace(
            self,
            intervals=[replace(iv, channel=3 - iv.channel) for iv in self.intervals],
            mean_duration_1=self.mean_duration_2,
            mean_duration_2=self.mean_duration_1,
            predominance_1=self.predominance_2,
            predominance_2=self.predominance_1,
            winner=None if self.winner is None else 3 - self.winner,
        )


def intervals_to_csv(intervals: Iterable[DominanceInterval]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["channel", "start_ms", "end_ms", "complete"])
    for iv in intervals:
        w.writerow([iv.channel, format(iv.start, ".17g"), format(iv.end, ".17g"), int(iv.complete)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# detection
# ---------------------------------------------------------------------------

def _window(times: np.ndarray, t_transient: float) -> tuple[np.ndarray, float, float]:
    times = np.asarray(times, dtype=np.float64)
    if times.ndim != 1 or len(times) < 2:
        raise AnalysisError("need at least two samples")
    h = times[1] - times[0]
    mask = times >= t_transient
    if not mask.any():
        raise AnalysisError(f"trajectory ends at t={times[-1]:g}, before t_transient={t_transient:g}")
    t0 = float(times[mask][0])
    t1 = float(times[-1] + h)
    return mask, t0, t1


def detect_dominance_arrays(times: Sequence[float], a1: Sequence[float], a2: Sequence[float],
                            delta: float, t_transient: float = 0.0) -> list[DominanceInterval]:
    """Dominance intervals of the activity pair ``(a1, a2)`` sampled at `times`."""
    mask, t0, t1 = _window(times, t_transient)
    t = np.asarray(times, dtype=np.float64)[mask]
    margin = np.asarray(a1, dtype=np.float64)[mask] - np.asarray(a2, dtype=np.float64)[mask]

    up = margin > delta
    down = margin < -delta
    crossing = np.flatnonzero(up | down)
    if crossing.size == 0:
        return []
    # a channel change happens where the sign of consecutive crossings differs
    signs = up[crossing]
    change = np.flatnonzero(signs[1:] != signs[:-1]) + 1
    starts_idx = np.r_[crossing[0], crossing[change]]
    channels = np.where(signs[np.r_[0, change]], 1, 2)

    starts = [float(t[i]) for i in starts_idx]
    ends = starts[1:] + [t1]
    last = len(starts) - 1
    return [DominanceInterval(int(c), s, e, complete=(0 < k < last))
            for k, (c, s, e) in enumerate(zip(channels, starts, ends))]


def detect_dominance(traj: Trajectory, cfg: AnalysisConfig | None = None) -> list[DominanceInterval]:
    cfg = (cfg or AnalysisConfig()).for_trajectory(traj)
    a1, a2 = traj.activities
    return detect_dominance_arrays(traj.times, a1, a2, cfg.delta, cfg.t_transient)


def dominance_stats(intervals: Sequence[DominanceInterval], window: tuple[float, float]) -> DominanceReport:
    """Duration statistics over `window`; the regime is left undetermined.

    Mean durations use complete intervals only and are ``None`` when a
    channel has none.
    """
    t0, t1 = window
    length = t1 - t0
    if not length > 0:
        raise AnalysisError("empty analysis window")
    total = {1: 0.0, 2: 0.0}
    complete: dict[int, list[float]] = {1: [], 2: []}
    for iv in intervals:
        total[iv.channel] += iv.duration
        if iv.complete:
            complete[iv.channel].append(iv.duration)
    n_switches = sum(1 for a, b in zip(intervals, intervals[1:]) if a.channel != b.channel)
    means = {c: (math.fsum(v) / len(v) if v else None) for c, v in complete.items()}
    return DominanceReport(
        intervals=list(intervals),
        window=(t0, t1),
        mean_duration_1=means[1],
        mean_duration_2=means[2],
        alternation_rate=n_switches / (length / 1000.0),
        predominance_1=total[1] / length,
        predominance_2=total[2] / length,
        n_switches=n_switches,
    )


def _classify(report: DominanceReport, a1: np.ndarray, a2: np.ndarray,
              cfg: AnalysisConfig) -> tuple[Regime, int | None]:
    close = np.abs(a1 - a2) < cfg.epsilon_fusion
    if close.mean() >= cfg.fusion_fraction:
        if min(float(a1.mean()), float(a2.mean())) > cfg.equal_activity_level:
            return Regime.EQUAL_ACTIVITY, None
        return Regime.FUSION, None
    ivs = report.intervals
    if len(ivs) == 1 and ivs[0].start == report.window[0] and ivs[0].end == report.window[1]:
        return Regime.WINNER_TAKE_ALL, ivs[0].channel
    if report.n_switches >= cfg.min_switches_rivalry:
        return Regime.RIVALRY, None
    return Regime.UNDETERMINED, None


def analyze_arrays(times, a1, a2, cfg: AnalysisConfig) -> DominanceReport:
    """Full report for an activity pair; `cfg` must be fully resolved."""
    if cfg.delta is None or cfg.t_transient is None:
        raise AnalysisError("analyze_arrays needs a resolved AnalysisConfig")
    intervals = detect_dominance_arrays(times, a1, a2, cfg.delta, cfg.t_transient)
    mask, t0, t1 = _window(times, cfg.t_transient)
    report = dominance_stats(intervals, (t0, t1))
    a1 = np.asarray(a1, dtype=np.float64)[mask]
    a2 = np.asarray(a2, dtype=np.float64)[mask]
    report.regime, report.winner = _classify(report, a1, a2, cfg)
    return report


def classify_arrays(times, a1, a2, cfg: AnalysisConfig) -> tuple[Regime, int | None]:
    report = analyze_arrays(times, a1, a2, cfg)
    return report.regime, report.winner


def analyze(traj: Trajectory, cfg: AnalysisConfig | None = None) -> DominanceReport:
    """Detect dominance, compute statistics and label the regime."""
    cfg = (cfg or AnalysisConfig()).for_trajectory(traj)
    a1, a2 = traj.activities
    return analyze_arrays(traj.times, a1, a2, cfg)


def classify_regime(traj: Trajectory, cfg: AnalysisConfig | None = None) -> tuple[Regime, int | None]:
    """Regime label and, for winner-take-all, the winning channel.

    Rules, first match wins: equal activity (margin below
    ``epsilon_fusion`` for at least ``fusion_fraction`` of the window and
    both mean activities above
    ``equal_activity_level``), fusion (margin small, activities low),
    winner-take-all (one interval spanning the whole window), rivalry (at
    least ``min_switches_rivalry`` switches), otherwise undetermined.
    """
    report = analyze(traj, cfg)
    return report.regime, report.winner
