"""
Entanglement profile of the Werner family.

The four Werner states q|beta_k><beta_k| + (1 - q) I/4 share one profile:
L vanishes up to q = 1/3 and then rises linearly to 1 at the Bell state.
Entanglement of formation follows the same threshold but grows more slowly.
"""

import numpy as np

from xentangle import entanglement_of_formation, l_measure_of, make_werner, robustness

qs = np.linspace(-1 / 3, 1, 17)

print(f"{'q':>7} {'L':>8} {'EoF':>8} {'omega0':>8}")
for q in qs:
    s = make_werner(1, q)
    L = l_measure_of(s)
    print(f"{q:7.3f} {L:8.4f} {entanglement_of_formation(L):8.4f} {robustness(s).omega0:8.4f}")

# the profile does not depend on which Bell state is mixed in
profiles = np.array([[l_measure_of(make_werner(k, q)) for q in qs] for k in range(1, 5)])
print("\nidentical for k = 1..4:", bool(np.all(profiles == profiles[0])))

try:
    import matplotlib.pyplot as plt
except ImportError:
    pass
else:
    q = np.linspace(-1 / 3, 1, 400)
    L = np.array([l_measure_of(make_werner(1, v)) for v in q])
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(q, L, ":", label="L")
    ax.plot(q, entanglement_of_formation(L), label="EoF")
    ax.axvline(1 / 3, color="gray", lw=0.5)
    ax.set_xlabel("q")
    ax.legend()
    fig.tight_layout()
    fig.savefig("werner_profile.png", dpi=120)
    print("saved werner_profile.png")
