"""Regime structure of Wilson's model under equal input to both eyes.

Sweeps the common input V and prints each regime band together with the
mean dominance time inside the rivalry bands.  Runs in a few seconds.
"""
from rivalry import Regime, default_params, default_sim_config, find_regime_bands, run_sweep
from rivalry.experiments import LEVELT_EQUAL_GRIDS, SweepSpec

model = default_params("wilson")
sim = default_sim_config(model, duration=60_000.0)

# the low-strength rivalry band is narrow, so the grid is refined around V = 3
spec = SweepSpec(model, "equal_stimulus", LEVELT_EQUAL_GRIDS["wilson"], sim=sim)
result = run_sweep(spec)

print(f"{len(result.rows)} grid points\n")
for band in find_regime_bands(result):
    print(f"{band.regime.value:14s} V = {band.lo:g} .. {band.hi:g}")

# Inside each rivalry band, how does dominance time depend on V?
# The answer differs between the two bands.
print()
for row in result.rows:
    if row.regime is Regime.RIVALRY:
        agg = row.aggregate()
        print(f"V = {row.value:5.1f}   mean dominance {agg['mean_duration']:7.1f} ms   "
              f"{agg['alternation_rate']:.3f} switches/s")
