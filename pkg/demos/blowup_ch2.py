"""Compare ch2 on invariant surfaces before and after a codimension-2 blowup.

The surface meets the centre in k points (0 or 1 for invariant surfaces),
and ch2 drops by 3k/2.

    python3 demos/blowup_ch2.py
"""

from collections import Counter

from toricpc.chow import blowup_configurations, ch2_blowup_check
from toricpc.fan import projective_space, star_subdivision

fans = {
    "P3": projective_space(3),
    "P4": projective_space(4),
    "Y = Bl of P6 along a P3": star_subdivision(projective_space(6), (0, 1, 2)),
}

for label, y in fans.items():
    results = [ch2_blowup_check(y, c, t) for c, t in blowup_configurations(y)]
    ks = Counter(r.k for r in results)
    bad = [r for r in results if not r.holds]
    print(f"{label}: {len(results)} configurations, k counts {dict(sorted(ks.items()))}, "
          f"{len(bad)} failures")
    r = next(r for r in results if r.k == 1)
    print(f"  e.g. centre {list(r.center)}, surface V({list(r.tau)}): "
          f"ch2_Y = {r.ch2_y}, ch2_X = {r.ch2_x}")
