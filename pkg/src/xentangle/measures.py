"""
Concurrence, entanglement of formation, PPT verdicts and robustness.

Concurrence has two independent routes. :func:`concurrence_x` is the closed
form for X-states and coincides with the L-measure. :func:`concurrence_general`
works for any two-qubit state through the spin-flipped spectrum and is used
as the oracle for the X-state route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .geometry import RegionClass, classify, l_measure, to_point
from .linalg import (
    PSD_TOL,
    RANK_TOL,
    binary_entropy,
    eigh_jacobi,
    eigvalsh_jacobi,
    partial_trace,
    partial_transpose_second,
    purity,
    sqrtm_psd,
)
from .states import NotXShaped, XState, _as_matrix, validate_density, x_state_from_density

_SY = np.array([[0, -1j], [1j, 0]])
SPIN_FLIP = np.kron(_SY, _SY)

CONSISTENCY_TOL = 1e-8


class ConsistencyError(RuntimeError):
    """Two routes to the same quantity disagreed."""


def concurrence_x(s: XState) -> float:
    """``2 max{0, |r14| - sqrt(r22 r33), |r23| - sqrt(r11 r44)}``."""
    return 2.0 * max(0.0, s.x - s.y0, s.y - s.x0)


def spin_flip_roots(m) -> np.ndarray:
    """Square roots of the spin-flipped spectrum, descending.

    These are the ``sqrt(l_k)`` with ``l_k`` the eigenvalues of
    ``rho (Y x Y) rho* (Y x Y)``. They are computed as singular values of
    ``A = sqrt(rho) (Y x Y) sqrt(rho)* (Y x Y)``, obtained as the positive
    half of the spectrum of the Hermitian dilation ``[[0, A], [A^H, 0]]``.
    This keeps everything on the Hermitian solver and avoids taking square
    roots of tiny eigenvalues of ``A A^H``. Accepts stacks.
    """
    m = _as_matrix(m) if not isinstance(m, np.ndarray) else m
    m = np.asarray(m, dtype=complex)
    r = sqrtm_psd(m)
    a = r @ SPIN_FLIP @ r.conj() @ SPIN_FLIP
    batch = a.shape[:-2]
    dil = np.zeros(batch + (8, 8), dtype=complex)
    dil[..., :4, 4:] = a
    dil[..., 4:, :4] = np.swapaxes(a, -1, -2).conj()
    w = eigvalsh_jacobi(dil)
    return np.clip(w[..., :4], 0.0, None)


def concurrence_general(m) -> np.ndarray | float:
    """Wootters concurrence ``max{0, s1 - s2 - s3 - s4}`` of any two-qubit state.

    ``s_k`` are the :func:`spin_flip_roots`. Accepts a stack of matrices.
    """
    s = spin_flip_roots(m)
    c = np.maximum(0.0, s[..., 0] - s[..., 1] - s[..., 2] - s[..., 3])
    return float(c) if c.ndim == 0 else c


def ppt_verdict(m, tol: float = PSD_TOL) -> tuple[bool, float]:
    """Entanglement by the partial-transpose test.

    Returns ``(entangled, min_eigenvalue)`` where ``entangled`` means the
    partial transpose has an eigenvalue below ``-tol``.
    """
    m = _as_matrix(m)
    w = eigvalsh_jacobi(partial_transpose_second(m))
    lo = w[..., -1]
    if np.ndim(lo) == 0:
        return bool(lo < -tol), float(lo)
    return lo < -tol, lo


def ppt_inequalities(s: XState, tol: float = 0.0) -> bool:
    """X-state form of the PPT test: ``|r23| > sqrt(r11 r44)`` or ``|r14| > sqrt(r22 r33)``."""
    return s.y > s.x0 + tol or s.x > s.y0 + tol


def entanglement_of_formation(c, tol: float = 1e-12):
    """``h((1 + sqrt(1 - C^2)) / 2)`` in bits, elementwise.

    Raises
    ------
    ValueError
        If ``C`` falls outside ``[0, 1]`` by more than ``tol``.
    """
    c = np.asarray(c, dtype=float)
    if np.any(c < -tol) or np.any(c > 1.0 + tol):
        raise ValueError(f"concurrence must lie in [0, 1], got {c}")
    c = np.clip(c, 0.0, 1.0)
    out = np.where(c > 0.0, binary_entropy((1.0 + np.sqrt(1.0 - c * c)) / 2.0), 0.0)
    return float(out) if out.ndim == 0 else out


def blend_with_maximally_mixed(s: XState, omega: float) -> XState:
    """``(1 - omega) rho + omega I/4``; stays X-shaped."""
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"omega={omega} outside [0, 1]")
    k = 1.0 - omega
    w = omega / 4.0
    return XState(k * s.r11 + w, k * s.r22 + w, k * s.r33 + w, k * s.r44 + w,
                  x=k * s.x, theta=s.theta, y=k * s.y, phi=s.phi)


@dataclass(frozen=True)
class RobustnessReport:
    """Robustness against white-noise admixture.

    Attributes
    ----------
    omega0 : float
        Headline robustness ``L / (L + 1/4)`` built from the active L term.
    active_term : float
        The active term, ``2 (x - y0)`` or ``2 (y - x0)``; zero if separable.
    channel : str or None
        ``"x"`` when the ``r14`` coherence carries the entanglement, ``"y"``
        for ``r23``.
    omega_separable : float
        Smallest ``omega`` at which the blended state is separable.
    """

    omega0: float
    active_term: float
    channel: str | None
    omega_separable: float
    curve: np.ndarray | None = field(default=None, repr=False)


def _threshold(amp, pa, pb):
    # blend separable on this channel iff amp^2 <= (pa + t)(pb + t), t = omega / (4 (1 - omega))
    t = 0.5 * (-(pa + pb) + math.sqrt((pa - pb) ** 2 + 4.0 * amp * amp))
    if t <= 0.0:
        return 0.0
    return 4.0 * t / (1.0 + 4.0 * t)


def robustness(s: XState, samples: int = 0) -> RobustnessReport:
    """Robustness of an X-state.

    ``omega_separable`` solves the blend's separability condition exactly for
    any X-state. With ``samples > 0`` the report also carries the curve
    ``L(blend(s, omega))`` on an even grid of that many points.
    """
    a = s.x - s.y0
    b = s.y - s.x0
    if a <= 0.0 and b <= 0.0:
        active, channel = 0.0, None
    elif a >= b:
        active, channel = 2.0 * a, "x"
    else:
        active, channel = 2.0 * b, "y"
    omega0 = active / (active + 0.25) if active > 0.0 else 0.0
    omega_sep = max(_threshold(s.x, s.r22, s.r33), _threshold(s.y, s.r11, s.r44))
    curve = None
    if samples:
        om = np.linspace(0.0, 1.0, samples)
        curve = np.array([om, [geometry.l_measure_of(blend_with_maximally_mixed(s, w))
                               for w in om]])
    return RobustnessReport(omega0, active, channel, omega_sep, curve)


def robustness_bisection(s: XState, tol: float = 1e-13) -> float:
    """Smallest ``omega`` with ``L(blend(s, omega)) == 0``, by bisection."""
    def ent(w):
        b = blend_with_maximally_mixed(s, w)
        return max(b.x - b.y0, b.y - b.x0) > 0.0

    if not ent(0.0):
        return 0.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ent(mid):
            lo = mid
        else:
            hi = mid
    return hi


@dataclass(frozen=True)
class MeasureReport:
    """Everything we know about one state.

    The geometric fields (``L``, ``point``, ``extremes``, ``region``,
    ``robustness``) are None for states that are not X-shaped.
    """

    concurrence: float
    eof: float
    ppt_entangled: bool
    min_pt_eigenvalue: float
    rank: int
    purity: float
    subsystem_entropy: float
    subsystem_entropies: tuple[float, float]
    L: float | None = None
    point: geometry.SPoint | None = None
    extremes: geometry.ExtremePoints | None = None
    region: RegionClass | None = None
    robustness: RobustnessReport | None = None

    def as_dict(self) -> dict:
        d = {
            "L": self.L,
            "concurrence": self.concurrence,
            "eof": self.eof,
            "ppt_entangled": self.ppt_entangled,
            "min_pt_eigenvalue": self.min_pt_eigenvalue,
            "rank": self.rank,
            "purity": self.purity,
            "subsystem_entropy": self.subsystem_entropy,
            "subsystem_entropies": list(self.subsystem_entropies),
            "x_shaped": self.L is not None,
        }
        if self.L is not None:
            d["point"] = {"x": self.point.x, "y": self.point.y}
            d["extremes"] = {"x0": self.extremes.x0, "y0": self.extremes.y0}
            d["region"] = {
                "region": self.region.region.value,
                "subregion": self.region.subregion.value,
                "predicted_rank": self.region.predicted_rank,
            }
            d["robustness"] = {
                "omega0": self.robustness.omega0,
                "active_term": self.robustness.active_term,
                "channel": self.robustness.channel,
                "omega_separable": self.robustness.omega_separable,
            }
        return d


def _entropy2(r: np.ndarray) -> float:
    tr = float(r[0, 0].real + r[1, 1].real)
    det = float((r[0, 0] * r[1, 1] - r[0, 1] * r[1, 0]).real)
    disc = math.sqrt(max(tr * tr - 4.0 * det, 0.0))
    return float(binary_entropy(0.5 * (tr + disc)))


def full_report(m, tol: float = PSD_TOL) -> MeasureReport:
    """Bundle every measure for a state and cross-check the routes.

    Raises
    ------
    ConsistencyError
        If L and the general concurrence disagree, or the PPT verdict and L
        disagree, beyond ``CONSISTENCY_TOL``.
    """
    dm = validate_density(m, tol)
    r = dm.m
    c = concurrence_general(r)
    entangled, lo = ppt_verdict(r, tol)
    w = eigh_jacobi(r)[0]
    rank = int(np.sum(w > RANK_TOL))
    s1 = _entropy2(partial_trace(r, "first"))
    s2 = _entropy2(partial_trace(r, "second"))
    extra = {}
    try:
        xs = x_state_from_density(r)
    except NotXShaped:
        xs = None
    if xs is not None:
        p, e = to_point(xs)
        L = l_measure(p, e)
        if abs(L - c) > CONSISTENCY_TOL:
            raise ConsistencyError(f"L={L!r} but general concurrence={c!r}")
        if entangled != (L > CONSISTENCY_TOL) and abs(lo) > CONSISTENCY_TOL:
            raise ConsistencyError(f"PPT verdict {entangled} contradicts L={L!r}")
        extra = dict(L=L, point=p, extremes=e,
                     region=classify(p, e, populations=xs.populations),
                     robustness=robustness(xs))
    eof = entanglement_of_formation(min(max(c, 0.0), 1.0))
    return MeasureReport(
        concurrence=float(c), eof=float(eof), ppt_entangled=bool(entangled),
        min_pt_eigenvalue=float(lo), rank=rank, purity=float(purity(r)),
        subsystem_entropy=s1, subsystem_entropies=(s1, s2), **extra)
