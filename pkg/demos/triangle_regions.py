"""
Where X-states live in the amplitude triangle.

Each X-state maps to p = (|r14|, |r23|) and to its extreme points
x0 = sqrt(r11 r44), y0 = sqrt(r22 r33). The separable points fill the square
of side min(x0, y0); the rest of the rectangle [0, x0] x [0, y0] is entangled,
and L is twice the Chebyshev distance to the square.
"""

import numpy as np

from xentangle import XState, classify, l_measure, l_measure_closest_point, numerical_rank, to_point
from xentangle.geometry import entanglement_rectangle, separable_square

s = XState(0.45, 0.05, 0.05, 0.45, x=0.3, y=0.02)
p, e = to_point(s)
print("point", tuple(round(v, 4) for v in p), "extremes", tuple(round(v, 4) for v in e))
print("separable square", separable_square(e))
print("entangled rectangle", entanglement_rectangle(e))
q = l_measure_closest_point(p, e)
print("closest separable point", q, "-> L =", l_measure(p, e))

# walk across the rectangle and watch the label and the rank change
print(f"\n{'x':>6} {'y':>6} {'label':>20} {'rank':>4} {'L':>7}")
for x, y in [(0.02, 0.02), (0.05, 0.05), (0.2, 0.02), (0.45, 0.02), (0.2, 0.05), (0.45, 0.05), (0.3, 0.0)]:
    t = XState(0.45, 0.05, 0.05, 0.45, x=x, y=y)
    rc = classify(*to_point(t), populations=t.populations)
    print(f"{x:6.2f} {y:6.2f} {rc.label():>20} {numerical_rank(t.matrix()):4d} {l_measure(*to_point(t)):7.3f}")

# the strongest entanglement in this rectangle sits on the right edge
xs = np.linspace(0, e.x0, 101)
ys = np.linspace(0, e.y0, 101)
grid = np.array([[l_measure(type(p)(a, b), e) for b in ys] for a in xs])
i, j = np.unravel_index(np.argmax(grid), grid.shape)
print(f"\nmax L {grid.max():.3f} at x = {xs[i]:.3f} (x0 = {e.x0:.3f})")
