"""
The triangle of admissible coherence amplitudes and the L-measure.

An X-state maps to the point ``p = (x, y) = (|r14|, |r23|)`` together with its
extreme points ``x0 = sqrt(r11 r44)`` and ``y0 = sqrt(r22 r33)``. Positivity
confines ``p`` to the rectangle ``[0, x0] x [0, y0]`` inside the triangle
``x + y <= 1/2``. The square ``[0, z0]^2`` with ``z0 = min(x0, y0)`` holds the
separable points; whatever sticks out of it to the right (``y0 < x0``) or
upwards (``x0 < y0``) is entangled.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .states import XState

GEOM_TOL = 1e-10
TRIANGLE_BOUND = 0.5
L_NORMALIZATION = 2.0


class SPoint(NamedTuple):
    x: float
    y: float


class ExtremePoints(NamedTuple):
    x0: float
    y0: float


class Region(str, enum.Enum):
    M0 = "M0"
    M1 = "M1"
    M2 = "M2"


class Subregion(str, enum.Enum):
    INTERIOR = "interior"
    SEPARABLE_SQUARE = "separable_square"
    VERTEX_Q0 = "vertex_q0"
    RIGHT_EDGE = "right_edge"
    TOP_EDGE = "top_edge"
    LEG_MX = "leg_Mx"
    LEG_MY = "leg_My"


@dataclass(frozen=True)
class RegionClass:
    """Where a point sits in the triangle.

    ``predicted_rank`` is ``None`` when the geometry alone does not fix the
    rank (a vanishing extreme point with unknown populations).
    """

    region: Region
    subregion: Subregion
    predicted_rank: int | None
    entangled: bool

    def label(self) -> str:
        return f"{self.region.value}/{self.subregion.value}"


def to_point(s: XState, tol: float = GEOM_TOL) -> tuple[SPoint, ExtremePoints]:
    """Map an X-state to its point in the triangle and its extreme points."""
    p = SPoint(s.x, s.y)
    e = ExtremePoints(s.x0, s.y0)
    if p.x + p.y > TRIANGLE_BOUND + tol:
        raise ValueError(f"point {p} lies outside the triangle x + y <= 1/2")
    if e.x0 + e.y0 > TRIANGLE_BOUND + tol:
        raise ValueError(f"extreme points {e} exceed x0 + y0 <= 1/2")
    return p, e


def _block_rank(amp, amp0, pa, pb, tol):
    if amp0 > tol:
        return 1 if abs(amp - amp0) <= tol else 2
    if pa is None:
        return None
    return int(pa > tol) + int(pb > tol)


def classify(p: SPoint, e: ExtremePoints, tol: float = GEOM_TOL,
             populations: tuple[float, float, float, float] | None = None) -> RegionClass:
    """Region of ``p`` for the given extreme points.

    ``populations`` (r11, r22, r33, r44) is only consulted to predict the
    rank when ``x0`` or ``y0`` vanishes. The corner ``x0 = y0 = 0`` (both
    coherences closed) is reported as ``M0`` with no entanglement.
    """
    x, y = p
    x0, y0 = e
    if x > x0 + tol or y > y0 + tol or x < -tol or y < -tol:
        raise ValueError(f"point {tuple(p)} is inconsistent with extremes {tuple(e)}")

    if abs(x0 - y0) <= tol:
        region = Region.M0
    elif y0 < x0:
        region = Region.M1
    else:
        region = Region.M2

    if region is Region.M0:
        entangled = False
    elif region is Region.M1:
        entangled = x > y0 + tol
    else:
        entangled = y > x0 + tol

    on_right = abs(x - x0) <= tol
    on_top = abs(y - y0) <= tol
    if not entangled:
        sub = Subregion.SEPARABLE_SQUARE
    elif region is Region.M1 and y <= tol:
        sub = Subregion.LEG_MX
    elif region is Region.M2 and x <= tol:
        sub = Subregion.LEG_MY
    elif on_right and on_top:
        sub = Subregion.VERTEX_Q0
    elif on_right:
        sub = Subregion.RIGHT_EDGE
    elif on_top:
        sub = Subregion.TOP_EDGE
    else:
        sub = Subregion.INTERIOR

    if populations is not None:
        r11, r22, r33, r44 = populations
        k14 = _block_rank(x, x0, r11, r44, tol)
        k23 = _block_rank(y, y0, r22, r33, tol)
    else:
        k14 = _block_rank(x, x0, None, None, tol)
        k23 = _block_rank(y, y0, None, None, tol)
    rank = None if k14 is None or k23 is None else k14 + k23
    return RegionClass(region, sub, rank, bool(entangled))


def l_terms(p: SPoint, e: ExtremePoints) -> tuple[float, float]:
    """The two subtractions ``x - y0`` and ``y - x0``."""
    return p.x - e.y0, p.y - e.x0


def l_measure(p: SPoint, e: ExtremePoints) -> float:
    """``L = 2 max{0, x - y0, y - x0}``.

    Twice the Chebyshev distance from ``p`` to the nearest separable point.
    """
    a, b = l_terms(p, e)
    return L_NORMALIZATION * max(0.0, a, b)


def l_measure_of(s: XState) -> float:
    return l_measure(*to_point(s))


def chebyshev(r1, r2) -> float:
    return max(abs(r2[0] - r1[0]), abs(r2[1] - r1[1]))


def l_measure_closest_point(p: SPoint, e: ExtremePoints) -> SPoint:
    """Closest separable point to ``p`` in the Chebyshev metric.

    For ``x > y0`` this is ``(y0, y)``, for ``y > x0`` it is ``(x, x0)``; a
    point that is already separable is returned unchanged.
    """
    a, b = l_terms(p, e)
    if a > 0 and a >= b:
        return SPoint(e.y0, p.y)
    if b > 0:
        return SPoint(p.x, e.x0)
    return SPoint(p.x, p.y)


def separable_square(e: ExtremePoints) -> list[SPoint]:
    """Corners of the separable square, counter-clockwise from the origin."""
    z = min(e.x0, e.y0)
    return [SPoint(0.0, 0.0), SPoint(z, 0.0), SPoint(z, z), SPoint(0.0, z)]


def entanglement_rectangle(e: ExtremePoints) -> list[SPoint] | None:
    """Corners of the entangled rectangle, or None when there is none."""
    x0, y0 = e
    if x0 > y0:
        return [SPoint(y0, 0.0), SPoint(x0, 0.0), SPoint(x0, y0), SPoint(y0, y0)]
    if y0 > x0:
        return [SPoint(0.0, x0), SPoint(x0, x0), SPoint(x0, y0), SPoint(0.0, y0)]
    return None


def l_max(e: ExtremePoints) -> float:
    """Largest L reachable with these extreme points: ``2 |x0 - y0|``."""
    return L_NORMALIZATION * abs(e.x0 - e.y0)


def max_extreme_sum() -> float:
    """Maximum of ``sqrt(r11 r44) + sqrt(r22 r33)`` over the population simplex.

    Attained by ``r11 = r44`` and ``r22 = r33``, where the sum collapses to
    ``r11 + r22 = 1/2``.
    """
    return 0.5


def extreme_sum(r11, r22, r33, r44):
    return np.sqrt(r11 * r44) + np.sqrt(r22 * r33)


def simplex_grid_max_extreme_sum(step: float = 1e-3) -> tuple[float, tuple[float, ...]]:
    """Exhaustive grid maximum of ``sqrt(r11 r44) + sqrt(r22 r33)``.

    Every population vector on the lattice ``{i * step}`` with unit sum is
    visited. The sum splits as ``f(r11, r44) + g(r22, r33)`` where the
    second pair only sees the leftover mass, so the inner maximum is
    tabulated once per leftover mass. Returns the maximum and a maximizer.
    """
    n = int(round(1.0 / step))
    if not math.isclose(n * step, 1.0, rel_tol=0, abs_tol=1e-12):
        raise ValueError("step must divide 1")
    grid = np.arange(n + 1) / n
    # best_pair[m] = max_{j+k=m} sqrt(grid[j] grid[k]), argmax j
    best_pair = np.empty(n + 1)
    best_arg = np.empty(n + 1, dtype=int)
    for m in range(n + 1):
        j = np.arange(m + 1)
        vals = np.sqrt(grid[j] * grid[m - j])
        a = int(np.argmax(vals))
        best_pair[m] = vals[a]
        best_arg[m] = a
    i, k = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    ok = i + k <= n
    rest = np.where(ok, n - i - k, 0)
    total = np.where(ok, np.sqrt(grid[i] * grid[k]) + best_pair[rest], -np.inf)
    flat = int(np.argmax(total))
    bi, bk = np.unravel_index(flat, total.shape)
    m = n - bi - bk
    j = best_arg[m]
    arg = (grid[bi], grid[j], grid[m - j], grid[bk])
    return float(total[bi, bk]), arg
