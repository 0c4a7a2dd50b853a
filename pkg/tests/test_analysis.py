import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from rivalry import (
    AnalysisConfig,
    AnalysisError,
    DominanceReport,
    Regime,
    SimConfig,
    Stimulus,
    Trajectory,
    analyze,
    default_params,
    simulate,
)
from rivalry.analysis import (
    analyze_arrays,
    classify_arrays,
    detect_dominance_arrays,
    dominance_stats,
    intervals_to_csv,
)


def square_wave(periods=4, half=300, h=1.0):
    t = np.arange(0, 2 * half * periods, h)
    u1 = ((t // half) % 2 == 0).astype(float)
    return t, u1, 1.0 - u1


@st.composite
def piecewise(draw):
    """Piecewise-constant activity pair on an exactly representable time grid."""
    h = draw(st.sampled_from([0.5, 1.0, 2.0]))
    levels = st.sampled_from([-1.0, -0.3, -0.1, -0.05, 0.0, 0.05, 0.1, 0.3, 1.0])
    segs = draw(st.lists(st.tuples(levels, st.integers(1, 40)), min_size=1, max_size=30))
    margin = np.concatenate([np.full(n, v) for v, n in segs])
    if len(margin) < 2:
        margin = np.r_[margin, margin]
    base = draw(st.sampled_from([0.0, 0.5, 2.0]))
    t = np.arange(len(margin)) * h
    t_transient = float(t[draw(st.integers(0, len(t) - 1))])
    return t, base + margin, np.full(len(t), base), t_transient


def test_square_wave_intervals():
    t, a1, a2 = square_wave()
    ivs = detect_dominance_arrays(t, a1, a2, delta=0.1, t_transient=0.0)
    assert len(ivs) == 8
    assert [iv.channel for iv in ivs] == [1, 2] * 4
    assert all(iv.duration == 300.0 for iv in ivs)
    assert [iv.complete for iv in ivs] == [False] + [True] * 6 + [False]


def test_square_wave_statistics_and_label():
    t, a1, a2 = square_wave()
    cfg = AnalysisConfig(t_transient=0.0, delta=0.1).resolve(1.0, 2400.0)
    r = analyze_arrays(t, a1, a2, cfg)
    assert r.mean_duration_1 == r.mean_duration_2 == 300.0
    assert r.n_switches == 7
    assert r.alternation_rate == pytest.approx(7 / 2.4)
    assert r.predominance_1 == r.predominance_2 == 0.5
    assert r.regime is Regime.RIVALRY


def test_subthreshold_gap_opens_nothing():
    t = np.arange(10.0)
    a1 = np.array([0, 0.05, 0.05, 0.2, 0.05, -0.05, 0.05, -0.2, -0.2, 0.0])
    ivs = detect_dominance_arrays(t, a1, np.zeros(10), delta=0.1)
    assert [(iv.channel, iv.start, iv.end) for iv in ivs] == [(1, 3.0, 7.0), (2, 7.0, 10.0)]


@given(piecewise(), st.sampled_from([0.0, 0.05, 0.1, 0.2]))
def test_detector_matches_scan_oracle(case, delta):
    t, a1, a2, t_tr = case
    got = [(iv.channel, iv.start, iv.end, iv.complete)
           for iv in detect_dominance_arrays(t, a1, a2, delta, t_tr)]
    assert got == oracles.scan_dominance(t, a1, a2, delta, t_tr)


@given(piecewise())
def test_intervals_tile_window(case):
    t, a1, a2, t_tr = case
    ivs = detect_dominance_arrays(t, a1, a2, 0.1, t_tr)
    h = t[1] - t[0]
    for a, b in zip(ivs, ivs[1:]):
        assert a.end == b.start and a.channel != b.channel
    if ivs:
        assert ivs[-1].end == t[-1] + h
        assert ivs[0].start >= t_tr


@given(piecewise(), st.floats(0, 0.5), st.floats(0, 0.5))
def test_widening_margin_never_adds_switches(case, d1, d2):
    t, a1, a2, _ = case
    lo, hi = sorted((d1, d2))
    n = lambda d: max(len(detect_dominance_arrays(t, a1, a2, d)) - 1, 0)
    assert n(hi) <= n(lo)


@given(piecewise())
def test_swapping_channels_swaps_report(case):
    t, a1, a2, t_tr = case
    cfg = AnalysisConfig(t_transient=t_tr, delta=0.1).resolve(1.0, float(t[-1]))
    r = analyze_arrays(t, a1, a2, cfg)
    s = analyze_arrays(t, a2, a1, cfg)
    assert s.to_dict() == r.swapped().to_dict()


def test_predominance_bounds_and_undecided_fraction():
    t = np.arange(100.0)
    a1 = np.where(t < 25, 0.0, 1.0)
    r = analyze_arrays(t, a1, np.zeros(100), AnalysisConfig(t_transient=0, delta=0.1).resolve(1, 100))
    assert r.predominance_1 == 0.75 and r.predominance_2 == 0.0
    assert r.undecided_fraction == 0.25
    # dominance starts late, so the winner does not hold the whole window
    assert r.regime is Regime.UNDETERMINED


# classification rules ----------------------------------------------------------------

def _cfg(**kw):
    kw = {"t_transient": 0.0, "delta": 0.1, **kw}
    return AnalysisConfig(**kw).resolve(1.0, 1000.0)


def test_all_zero_is_fusion():
    t = np.arange(1000.0)
    assert classify_arrays(t, np.zeros(1000), np.zeros(1000), _cfg()) == (Regime.FUSION, None)


def test_equal_high_activity():
    t = np.arange(1000.0)
    assert classify_arrays(t, np.full(1000, 0.9), np.full(1000, 0.9), _cfg())[0] is Regime.EQUAL_ACTIVITY


def test_winner_take_all_reports_channel():
    t = np.arange(1000.0)
    assert classify_arrays(t, np.zeros(1000), np.ones(1000), _cfg()) == (Regime.WINNER_TAKE_ALL, 2)


def test_winner_must_hold_whole_window():
    t = np.arange(1000.0)
    a1 = np.r_[np.zeros(10), np.ones(990)]
    assert classify_arrays(t, a1, np.zeros(1000), _cfg())[0] is Regime.UNDETERMINED


def test_few_switches_undetermined():
    t = np.arange(1000.0)
    a1 = np.where(t < 500, 1.0, 0.0)
    assert classify_arrays(t, a1, 1 - a1, _cfg())[0] is Regime.UNDETERMINED
    assert classify_arrays(t, a1, 1 - a1, _cfg(min_switches_rivalry=1))[0] is Regime.RIVALRY


def test_fusion_fraction_threshold():
    # margin exceeds epsilon 30 % of the time with clean alternations
    t = np.arange(1000.0)
    m = np.where((t % 100) < 15, 0.3, np.where((t % 100) < 50, 0.0, np.where((t % 100) < 65, -0.3, 0.0)))
    a1, a2 = 0.1 + m, np.full(1000, 0.1)
    assert classify_arrays(t, a1, a2, _cfg())[0] is Regime.FUSION
    assert classify_arrays(t, a1, a2, _cfg(fusion_fraction=0.8))[0] is Regime.RIVALRY
    assert classify_arrays(t, a1, a2, _cfg(fusion_fraction=1.0))[0] is Regime.RIVALRY


@pytest.mark.parametrize("bad", [dict(delta=-1.0), dict(t_transient=float("nan")),
                                 dict(min_switches_rivalry=-1), dict(fusion_fraction=0.0)])
def test_analysis_config_validation(bad):
    with pytest.raises(AnalysisError):
        AnalysisConfig(**bad)


def test_resolved_defaults():
    cfg = AnalysisConfig().resolve(100.0, 10_000.0)
    assert (cfg.t_transient, cfg.delta, cfg.epsilon_fusion, cfg.equal_activity_level) == (2000.0, 5.0, 5.0, 25.0)


def test_transient_longer_than_run():
    with pytest.raises(AnalysisError):
        analyze_arrays(np.arange(10.0), np.zeros(10), np.zeros(10), _cfg(t_transient=50.0))


def test_stats_empty_window_rejected():
    with pytest.raises(AnalysisError):
        dominance_stats([], (5.0, 5.0))


# simulated trajectories ------------------------------------------------------------------

def test_wilson_rivalry_from_simulation():
    model = default_params("wilson")
    traj = simulate(model, Stimulus.equal(20.0), SimConfig(dt=0.5, duration=30_000.0))
    r = analyze(traj)
    assert r.regime is Regime.RIVALRY
    assert 0.4 < r.predominance_1 < 0.6


def test_report_json_round_trip_and_interval_csv():
    t, a1, a2 = square_wave()
    r = analyze_arrays(t, a1, a2, AnalysisConfig(t_transient=0.0, delta=0.1).resolve(1, 2400))
    back = DominanceReport.from_dict(json.loads(r.to_json()))
    assert back.to_dict() == r.to_dict()
    lines = intervals_to_csv(r.intervals).splitlines()
    assert lines[0] == "channel,start_ms,end_ms,complete"
    assert lines[1] == "1,0,300,0" and len(lines) == 9


def test_analyze_uses_trajectory_scale():
    traj = Trajectory(np.arange(100.0), np.zeros((100, 6)), default_params("wilson"), Stimulus(0, 0),
                      SimConfig(dt=1.0, duration=100.0), default_params("wilson").labels)
    r = analyze(traj)
    assert r.regime is Regime.FUSION and r.window == (20.0, 100.0)
