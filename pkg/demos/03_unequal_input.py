"""Raising one eye's input while the other stays fixed (Wilson model).

Eye 1's dominance time grows and the alternation rate falls.  Eye 2's
dominance time is not constant: it shrinks noticeably over the sweep.
"""
import numpy as np

from rivalry import default_sim_config
from rivalry.experiments import asymmetric_sweep

s2 = 22.0
result = asymmetric_sweep("wilson", s2, sim=default_sim_config("wilson", duration=60_000.0))

print(f"eye 2 held at {s2:g}")
print("   s1    regime        dur1 (ms)  dur2 (ms)  rate (1/s)  predominance1")
for row in result.rows:
    a = row.aggregate()
    if a["mean_duration_1"] is None:
        print(f"{row.value:6.2f}  {a['regime']}")
        continue
    print(f"{row.value:6.2f}  {a['regime']:12s}  {a['mean_duration_1']:9.1f}  {a['mean_duration_2']:9.1f}"
          f"  {a['alternation_rate']:10.3f}  {a['predominance_1']:.3f}")

d2 = np.array([d for d in result.column("mean_duration_2") if d is not None])
print(f"\neye-2 duration changes by {(d2.max() - d2.min()) / d2[0]:.0%} across the sweep")
