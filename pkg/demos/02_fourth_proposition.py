"""Alternation rate versus input strength: Wilson against Kalarickal-Marshall.

In Wilson's model the rate rises with strength only in the high-strength
rivalry band and falls in the low one.  The Kalarickal-Marshall model has a
single rivalry band in which the rate rises throughout.  Takes about a minute.
"""
from rivalry.experiments import run_levelt_suite

for kind in ("wilson", "kalarickal"):
    report = run_levelt_suite(kind)
    structure = report["regime_structure"].evidence["bands"]
    print(f"\n{kind}")
    for regime, lo, hi in structure:
        print(f"  {regime:14s} {lo:g} .. {hi:g}")
    for band in report["prop4_original"].evidence["bands"]:
        lo, hi = band["band"]
        print(f"  rivalry {lo:g}..{hi:g}: rank correlation of rate with strength "
              f"{band['rho_alternation_rate']:+.2f}")
    print(f"  reversal at low strength: {report['prop4_modified'].evidence['reversal']}")
