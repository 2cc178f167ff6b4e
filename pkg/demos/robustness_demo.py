"""
How much white noise does it take to wash out the entanglement?

Two numbers are reported for each state. ``omega0`` is the headline
L / (L + 1/4), which gives 4/5 for a Bell state. ``omega_separable`` is the
exact admixture at which the blended state first becomes separable, found by
solving the positivity condition of the partial transpose; a bisection on L
confirms it.
"""

import numpy as np

from xentangle import make_generalized_werner, make_werner, robustness
from xentangle.measures import robustness_bisection

print(f"{'state':>28} {'omega0':>8} {'omega_sep':>10} {'bisection':>10}")
for label, s in [
    ("Bell (Werner q=1)", make_werner(1, 1.0)),
    ("Werner q=0.6", make_werner(1, 0.6)),
    ("gen. Werner s=3/4 q=13/16", make_generalized_werner([13 / 16, -1 / 16, 0, 0], 0.75)),
    ("gen. Werner s=1/2 q=5/8", make_generalized_werner([5 / 8, -1 / 8, 0, 0], 0.5)),
]:
    r = robustness(s)
    print(f"{label:>28} {r.omega0:8.4f} {r.omega_separable:10.4f} {robustness_bisection(s):10.4f}")

# the headline value along the two-coefficient family
for s_ in (0.75, 0.5):
    lo, hi = max((s_ - 1) / 4, (3 * s_ - 3) / 4, s_ - 1), min((3 * s_ + 1) / 4, (s_ + 3) / 4, 1.0)
    qs = np.linspace(lo, hi, 2001)
    best = max(robustness(make_generalized_werner([q, s_ - q, 0, 0], s_, 1e-9)).omega0 for q in qs)
    print(f"s = {s_}: max omega0 over q = {best:.6f}")
