"""Dominance time against cross-inhibition strength.

Weaker coupling shortens dominance in both Wilson's model (g) and the
Laing-Chow model (beta), at every input level tried here.
"""
from rivalry import default_sim_config
from rivalry.experiments import band_values, cross_inhibition_sweep, grid_range, rivalry_bands, spearman

cases = {
    "wilson": ((15.0, 20.0), grid_range(0.30, 0.60, 0.02), 60_000.0),
    "laing-chow": ((0.2, 0.3), grid_range(0.40, 1.00, 0.03), 10_000.0),
}
for kind, (levels, grid, duration) in cases.items():
    for s in levels:
        res = cross_inhibition_sweep(kind, grid, stimulus=s,
                                     sim=default_sim_config(kind, duration=duration))
        band = max(rivalry_bands(res), key=lambda b: b.n_rows)
        x, d = band_values(res, band.lo, band.hi, "mean_duration")
        print(f"{kind:10s} input {s:g}: {res.spec.cross_param} {band.lo:g}..{band.hi:g}, "
              f"dominance {d[0]:.0f} -> {d[-1]:.0f} ms, rank correlation {spearman(x, d):+.2f}")
