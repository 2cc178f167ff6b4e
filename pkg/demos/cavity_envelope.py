"""
Two atoms, two cavities, and an entropy envelope.

Both atoms start in a Bell state and each talks to its own cavity holding n
photons. The atoms' state stays X-shaped, both atoms always carry the same
entropy, and the curve through the entropy minima sits above L and EoF at
every time sampled.
"""

import numpy as np

from xentangle import CavityParams, TimeGrid, check_envelope_bound, sweep

grid = TimeGrid(0.0, 20.0, 1e-3)
for bell in (3, 1):
    tr = sweep(CavityParams(gamma=1.0, n=10, initial_bell=bell), grid)
    chk_l = check_envelope_bound(tr, measure="L")
    chk_e = check_envelope_bound(tr, measure="eof")
    dead = np.mean(tr.L == 0)
    print(f"Bell {bell}: {tr.envelope.minima_t.size} entropy minima, "
          f"L = 0 on {100 * dead:.1f}% of the grid")
    print(f"  envelope - L   >= {0.0 - chk_l.worst_violation:.2e}")
    print(f"  envelope - EoF >= {0.0 - chk_e.worst_violation:.2e}")
    print(f"  max |S1 - S2| = {np.max(np.abs(tr.entropy_sub - tr.entropy_sub2)):.1e}")

try:
    import matplotlib.pyplot as plt
except ImportError:
    pass
else:
    tr = sweep(CavityParams(1.0, 10, 3), grid)
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.plot(tr.t, tr.entropy_sub, lw=0.4, color="0.6", label="S")
    ax.plot(tr.t, tr.envelope.values, lw=1.2, label="envelope")
    ax.plot(tr.t, tr.L, lw=0.8, label="L")
    ax.set_xlabel("t")
    ax.legend(loc="lower left")
    fig.tight_layout()
    fig.savefig("cavity_envelope.png", dpi=120)
    print("saved cavity_envelope.png")
