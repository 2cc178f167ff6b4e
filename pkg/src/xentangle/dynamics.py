"""
Two atoms in two separate, identical, lossless cavities.

Each atom exchanges one quantum with its own single-mode field through the
resonant coupling ``gamma (a sigma_+ + a^dag sigma_-)``; both cavities start
in the Fock state ``|n>`` and the atoms start in a Bell state. The atoms'
reduced state stays X-shaped. Here ``|+> = |0>`` is the excited level and
``|-> = |1>`` the ground level.

Two routes produce the reduced state:

* :func:`rho_2at_closed_form` evaluates the known trigonometric coefficients
  (initial Bell state 3 only);
* :func:`rho_2at_bruteforce` builds each atom-cavity unitary from a truncated
  Fock space, evolves the four-body pure state and traces the fields out.
  It works for any initial Bell state and is the oracle for the first route.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .geometry import ExtremePoints, SPoint, classify
from .linalg import binary_entropy
from .measures import entanglement_of_formation
from .states import XState, bell_vector, x_state_from_density

log = logging.getLogger(__name__)

ENVELOPE_REFINE_TOL = 1e-8
_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class CavityParams:
    gamma: float = 1.0
    n: int = 10
    initial_bell: int = 3

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"photon number must be a non-negative integer, got {self.n}")
        if self.initial_bell not in (1, 2, 3, 4):
            raise ValueError(f"initial Bell index must be 1..4, got {self.initial_bell}")


@dataclass(frozen=True)
class TimeGrid:
    t_start: float
    t_end: float
    step: float

    def __post_init__(self):
        if not self.t_start < self.t_end:
            raise ValueError("t_start must be smaller than t_end")
        if not 0 < self.step <= self.t_end - self.t_start:
            raise ValueError("step must be positive and no larger than the interval")

    def times(self) -> np.ndarray:
        count = int(math.floor((self.t_end - self.t_start) / self.step + 1e-9)) + 1
        return self.t_start + self.step * np.arange(count)


# --- closed form ----------------------------------------------------------

def _coefficients(params: CavityParams, t):
    t = np.asarray(t, dtype=float)
    a1 = params.gamma * t * math.sqrt(params.n + 1)
    a0 = params.gamma * t * math.sqrt(params.n)
    c1, s1 = np.cos(a1) ** 2, np.sin(a1) ** 2
    c0, s0 = np.cos(a0) ** 2, np.sin(a0) ** 2
    y0 = 0.5 * c1 * c0 + 0.5 * s1 * s0
    y = 0.5 * c1 * c0
    r11 = c1 * s0
    r44 = s1 * c0
    return r11, y0, y, r44


def rho_2at_closed_form(params: CavityParams, t: float) -> XState:
    """Reduced two-atom state for the initial Bell state 3."""
    if params.initial_bell != 3:
        raise ValueError("the closed form covers the initial Bell state 3 only")
    r11, y0, y, r44 = (float(v) for v in _coefficients(params, t))
    return XState(r11, y0, y0, r44, x=0.0, y=y, tol=1e-12)


# --- brute force ----------------------------------------------------------

@lru_cache(maxsize=32)
def _pair_eigensystem(gamma: float, n: int):
    """Spectral decomposition of one atom-cavity Hamiltonian.

    Basis index ``2 * f + a`` with atom level ``a`` (0 excited, 1 ground) and
    photon number ``f`` in ``0..n+2``.
    """
    nf = n + 3
    dim = 2 * nf
    h = np.zeros((dim, dim))
    for f in range(nf - 1):
        # |+, f> <-> |-, f+1> with amplitude gamma sqrt(f+1)
        i = 2 * f + 0
        j = 2 * (f + 1) + 1
        h[i, j] = h[j, i] = gamma * math.sqrt(f + 1)
    w, v = np.linalg.eigh(h)
    return nf, w, v


def _evolved_pair_states(params: CavityParams, times: np.ndarray) -> np.ndarray:
    """Amplitudes ``u[t, a_init, a, f]`` of ``exp(-iHt)|a_init, n>``."""
    nf, w, v = _pair_eigensystem(float(params.gamma), int(params.n))
    out = np.empty((times.size, 2, 2, nf), dtype=complex)
    for a_init in (0, 1):
        psi0 = np.zeros(2 * nf)
        psi0[2 * params.n + a_init] = 1.0
        coef = v.T @ psi0
        phases = np.exp(-1j * np.outer(times, w))
        psi = (phases * coef) @ v.T
        out[:, a_init] = psi.reshape(times.size, nf, 2).transpose(0, 2, 1)
    return out


def rho_2at_bruteforce_many(params: CavityParams, times) -> np.ndarray:
    """Reduced two-atom density matrices ``(T, 4, 4)`` by explicit trace-out."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    u = _evolved_pair_states(params, times)
    # field trace of |u_i><u_k| for one pair: g[t, i, k, a, a']
    g = np.einsum("tiaf,tkbf->tikab", u, u.conj())
    c = bell_vector(params.initial_bell).reshape(2, 2)
    rho = np.einsum("ij,kl,tikac,tjlbd->tabcd", c, c.conj(), g, g)
    return rho.reshape(times.size, 4, 4)


def rho_2at_bruteforce(params: CavityParams, t: float) -> np.ndarray:
    return rho_2at_bruteforce_many(params, [t])[0]


def rho_2at(params: CavityParams, t: float) -> XState:
    """Reduced two-atom X-state at time ``t``.

    Uses the closed form for the initial Bell state 3 and the explicit
    evolution for the other Bell states.
    """
    if t < 0:
        raise ValueError("time must be non-negative")
    if params.initial_bell == 3:
        return rho_2at_closed_form(params, t)
    return x_state_from_density(rho_2at_bruteforce(params, t))


# --- sweeps ---------------------------------------------------------------

def _x_columns(params: CavityParams, times: np.ndarray) -> dict[str, np.ndarray]:
    if params.initial_bell == 3:
        r11, y0c, y, r44 = _coefficients(params, times)
        pops = np.stack([r11, y0c, y0c, r44], axis=-1)
        r14 = np.zeros_like(times, dtype=complex)
        r23 = y.astype(complex)
    else:
        rho = rho_2at_bruteforce_many(params, times)
        off = np.abs(rho[:, [0, 0, 1, 2], [1, 2, 3, 3]]).max()
        if off > 1e-10:
            raise RuntimeError(f"evolved state left the X shape (|off| = {off:.2e})")
        pops = np.einsum("tii->ti", rho).real
        r14 = rho[:, 0, 3]
        r23 = rho[:, 1, 2]
    return {"pops": pops, "r14": r14, "r23": r23}


def _entropies(pops: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # reductions of an X-state are diagonal
    s1 = binary_entropy(pops[..., 0] + pops[..., 1])
    s2 = binary_entropy(pops[..., 0] + pops[..., 2])
    return np.asarray(s1), np.asarray(s2)


def subsystem_entropy(params: CavityParams, t) -> np.ndarray:
    """One-qubit entropy (bits) of the first atom at time(s) ``t``."""
    times = np.atleast_1d(np.asarray(t, dtype=float))
    return _entropies(_x_columns(params, times)["pops"])[0]


@dataclass
class Envelope:
    """Piecewise-linear curve through the local minima of ``S(t)``.

    ``values`` is sampled on ``t``. ``degenerate`` flags fewer than two
    minima, in which case the curve is flat.
    """

    t: np.ndarray
    values: np.ndarray
    minima_t: np.ndarray
    minima_s: np.ndarray
    degenerate: bool = False


@dataclass
class DynamicsTrace:
    """Column-oriented record of a time sweep.

    One entry per grid time in each array; ``region`` holds labels like
    ``"M2/leg_My"``. ``params`` is None for hand-built traces, which disables
    refinement of the entropy minima.
    """

    t: np.ndarray
    L: np.ndarray
    eof: np.ndarray
    entropy_sub: np.ndarray
    entropy_sub2: np.ndarray | None = None
    x0: np.ndarray | None = None
    y0: np.ndarray | None = None
    x: np.ndarray | None = None
    y: np.ndarray | None = None
    region: list[str] | None = None
    populations: np.ndarray | None = None
    r14: np.ndarray | None = None
    r23: np.ndarray | None = None
    params: CavityParams | None = None
    envelope: Envelope | None = field(default=None, repr=False)

    def __len__(self):
        return self.t.size


def sweep(params: CavityParams, grid: TimeGrid, envelope: bool = True) -> DynamicsTrace:
    """Evaluate L, entanglement of formation and entropies on a time grid."""
    times = grid.times()
    cols = _x_columns(params, times)
    pops = cols["pops"]
    if np.any(np.abs(pops.sum(axis=1) - 1.0) > 1e-12) or np.any(pops < -1e-12):
        raise RuntimeError("evolved populations are not a probability vector")
    x = np.abs(cols["r14"])
    y = np.abs(cols["r23"])
    x0 = np.sqrt(np.clip(pops[:, 0] * pops[:, 3], 0.0, None))
    y0 = np.sqrt(np.clip(pops[:, 1] * pops[:, 2], 0.0, None))
    if np.any(x > x0 + 1e-12) or np.any(y > y0 + 1e-12):
        raise RuntimeError("evolved state is not positive semidefinite")
    L = 2.0 * np.maximum(0.0, np.maximum(x - y0, y - x0))
    eof = entanglement_of_formation(np.minimum(L, 1.0))
    s1, s2 = _entropies(pops)
    regions = [
        classify(SPoint(xi, yi), ExtremePoints(a, b), populations=tuple(pp)).label()
        for xi, yi, a, b, pp in zip(x, y, x0, y0, pops)
    ]
    trace = DynamicsTrace(t=times, L=L, eof=np.asarray(eof), entropy_sub=s1, entropy_sub2=s2,
                          x0=x0, y0=y0, x=x, y=y, region=regions, populations=pops,
                          r14=cols["r14"], r23=cols["r23"], params=params)
    if envelope:
        trace.envelope = extract_min_envelope(trace)
    return trace


# --- envelope -------------------------------------------------------------

def golden_section_min(f, a: float, b: float, tol: float = ENVELOPE_REFINE_TOL):
    """Minimize a unimodal ``f`` on ``[a, b]``; returns ``(t, f(t))``."""
    c = b - _PHI * (b - a)
    d = a + _PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _PHI * (b - a)
            fd = f(d)
    t = 0.5 * (a + b)
    return t, f(t)


def _local_minima(s: np.ndarray) -> np.ndarray:
    i = np.arange(1, s.size - 1)
    return i[(s[i] < s[i - 1]) & (s[i] < s[i + 1])]


def extract_min_envelope(trace: DynamicsTrace, refine_tol: float = ENVELOPE_REFINE_TOL,
                         cap: float = 1.0) -> Envelope:
    """Envelope through the local minima of the subsystem entropy.

    Strict local minima of the sampled entropy are refined by golden-section
    search (when the trace knows its parameters), joined by straight lines,
    and continued past the first and last minimum along the line through
    the two nearest minima, capped at ``cap`` (one bit for a qubit).

    Raises
    ------
    ValueError
        If the trace has fewer than three samples.
    """
    t, s = trace.t, trace.entropy_sub
    if t.size < 3:
        raise ValueError("need at least three samples to look for minima")
    idx = _local_minima(s)
    if trace.params is not None and idx.size:
        f = lambda tt: float(subsystem_entropy(trace.params, tt)[0])
        refined = [golden_section_min(f, t[i - 1], t[i + 1], refine_tol) for i in idx]
        mt = np.array([r[0] for r in refined])
        ms = np.array([r[1] for r in refined])
    else:
        mt, ms = t[idx].astype(float), s[idx].astype(float)
    if mt.size < 2:
        log.warning("degenerate entropy envelope: %d local minima", mt.size)
        level = ms[0] if mt.size else float(np.min(s))
        return Envelope(t, np.full(t.shape, level), mt, ms, degenerate=True)
    env = np.interp(t, mt, ms)
    left = t < mt[0]
    right = t > mt[-1]
    slope_l = (ms[1] - ms[0]) / (mt[1] - mt[0])
    slope_r = (ms[-1] - ms[-2]) / (mt[-1] - mt[-2])
    env[left] = np.minimum(cap, ms[0] + slope_l * (t[left] - mt[0]))
    env[right] = np.minimum(cap, ms[-1] + slope_r * (t[right] - mt[-1]))
    return Envelope(t, env, mt, ms)


class EnvelopeCheck(NamedTuple):
    holds: bool
    worst_violation: float
    at_t: float


def check_envelope_bound(trace: DynamicsTrace, tol: float = 1e-6,
                         measure: str = "L") -> EnvelopeCheck:
    """Check ``measure(t) <= envelope(t) + tol`` on every sample.

    ``worst_violation`` is ``max(measure - envelope)``; it is negative when
    the bound holds with room to spare.
    """
    env = trace.envelope if trace.envelope is not None else extract_min_envelope(trace)
    values = getattr(trace, measure)
    margin = values - env.values
    i = int(np.argmax(margin))
    return EnvelopeCheck(bool(margin[i] <= tol), float(margin[i]), float(trace.t[i]))
