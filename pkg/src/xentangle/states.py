"""
Two-qubit density operators: validation, X-states and the standard families.

Basis ordering is fixed to ``e1=|00>, e2=|01>, e3=|10>, e4=|11>``. An
X-state keeps only the populations and the two anti-diagonal coherences
``r14 = x exp(i theta)`` and ``r23 = y exp(i phi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from .linalg import (
    HERMITIAN_TOL,
    PSD_TOL,
    TRACE_TOL,
    eigh_jacobi,
    is_hermitian,
    partial_trace,
    purity,
    von_neumann_entropy,
    Spectrum,
)

X_SHAPE_TOL = 1e-10
_NON_X = [(0, 1), (0, 2), (1, 3), (2, 3)]


class InvalidStateError(ValueError):
    """Base class for rejected density operators.

    ``worst`` holds the offending quantity (deviation, trace or eigenvalue).
    """

    def __init__(self, message: str, worst: float):
        super().__init__(message)
        self.worst = worst


class NotHermitian(InvalidStateError):
    pass


class TraceNotOne(InvalidStateError):
    pass


class NotPSD(InvalidStateError):
    pass


class NotXShaped(ValueError):
    def __init__(self, message: str, worst: float, index: tuple[int, int]):
        super().__init__(message)
        self.worst = worst
        self.index = index


@dataclass(frozen=True)
class DensityMatrix:
    """A validated 4x4 density operator. Build it with :func:`validate_density`."""

    m: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.m, dtype=complex)
        arr.setflags(write=False)
        object.__setattr__(self, "m", arr)

    def __array__(self, dtype=None, copy=None):
        return self.m if dtype is None else self.m.astype(dtype)

    @property
    def purity(self) -> float:
        return purity(self.m)

    def reduced(self, subsystem: str = "first") -> np.ndarray:
        return partial_trace(self.m, subsystem)


def _as_matrix(m) -> np.ndarray:
    if isinstance(m, DensityMatrix):
        return m.m
    if isinstance(m, XState):
        return m.matrix()
    return np.asarray(m, dtype=complex)


def validate_density(m: npt.ArrayLike, tol: float = PSD_TOL) -> DensityMatrix:
    """Check Hermiticity, unit trace and positivity of a 4x4 matrix.

    Raises
    ------
    NotHermitian, TraceNotOne, NotPSD
        With ``worst`` set to the largest asymmetry, the trace, or the most
        negative eigenvalue respectively.
    """
    m = _as_matrix(m)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    asym = float(np.max(np.abs(m - m.conj().T)))
    if asym > tol:
        raise NotHermitian(f"matrix is not Hermitian (max asymmetry {asym:.3e})", asym)
    tr = complex(np.trace(m))
    if abs(tr - 1.0) > tol:
        raise TraceNotOne(f"trace is {tr.real:.15g}{tr.imag:+.3g}j, expected 1", tr.real)
    w = eigh_jacobi(m)[0]
    if w[-1] < -tol:
        raise NotPSD(f"smallest eigenvalue {w[-1]:.6e} is negative", float(w[-1]))
    return DensityMatrix(m)


@dataclass(frozen=True)
class XState:
    """X-shaped two-qubit state in polar form.

    ``x = |r14|`` with phase ``theta`` and ``y = |r23|`` with phase ``phi``.
    Construction validates populations and the positivity bounds
    ``x <= sqrt(r11 r44)``, ``y <= sqrt(r22 r33)``.
    """

    r11: float
    r22: float
    r33: float
    r44: float
    x: float = 0.0
    theta: float = 0.0
    y: float = 0.0
    phi: float = 0.0
    tol: float = field(default=PSD_TOL, repr=False, compare=False)

    def __post_init__(self):
        pops = (self.r11, self.r22, self.r33, self.r44)
        if min(pops) < -self.tol:
            raise NotPSD(f"negative population in {pops}", min(pops))
        if abs(sum(pops) - 1.0) > self.tol:
            raise TraceNotOne(f"populations sum to {sum(pops):.15g}", sum(pops))
        if self.x < 0 or self.y < 0:
            raise ValueError("coherence amplitudes must be non-negative")
        if self.x > self.x0 + self.tol:
            raise NotPSD(f"|r14| = {self.x:.6g} exceeds sqrt(r11 r44) = {self.x0:.6g}",
                         self.x0 - self.x)
        if self.y > self.y0 + self.tol:
            raise NotPSD(f"|r23| = {self.y:.6g} exceeds sqrt(r22 r33) = {self.y0:.6g}",
                         self.y0 - self.y)
        object.__setattr__(self, "theta", float(self.theta) % (2 * math.pi))
        object.__setattr__(self, "phi", float(self.phi) % (2 * math.pi))

    @classmethod
    def from_signed(cls, r11, r22, r33, r44, r14: complex = 0.0, r23: complex = 0.0,
                    tol: float = PSD_TOL) -> "XState":
        """Build from populations and complex (or signed real) coherences."""
        r14, r23 = complex(r14), complex(r23)
        return cls(r11, r22, r33, r44,
                   abs(r14), _phase(r14), abs(r23), _phase(r23), tol=tol)

    @property
    def populations(self) -> tuple[float, float, float, float]:
        return (self.r11, self.r22, self.r33, self.r44)

    @property
    def r14(self) -> complex:
        return self.x * complex(math.cos(self.theta), math.sin(self.theta))

    @property
    def r23(self) -> complex:
        return self.y * complex(math.cos(self.phi), math.sin(self.phi))

    @property
    def x0(self) -> float:
        return math.sqrt(max(self.r11, 0.0) * max(self.r44, 0.0))

    @property
    def y0(self) -> float:
        return math.sqrt(max(self.r22, 0.0) * max(self.r33, 0.0))

    def matrix(self) -> np.ndarray:
        m = np.diag(np.array(self.populations, dtype=complex))
        m[0, 3] = self.r14
        m[3, 0] = self.r14.conjugate()
        m[1, 2] = self.r23
        m[2, 1] = self.r23.conjugate()
        return m

    def density(self) -> DensityMatrix:
        return DensityMatrix(self.matrix())

    def __array__(self, dtype=None, copy=None):
        m = self.matrix()
        return m if dtype is None else m.astype(dtype)

    def eigenvalues(self) -> np.ndarray:
        """Closed-form spectrum, blocks ``{e1, e4}`` then ``{e2, e3}``.

        Returned in block order ``(L1, L2, L3, L4)``, not sorted.
        """
        return x_eigenvalues(self.populations, self.x, self.y)

    def eigensystem(self) -> Spectrum:
        """Closed-form eigenvalues and eigenvectors, sorted descending."""
        lam = self.eigenvalues()
        vecs = np.zeros((4, 4), dtype=complex)
        for col, (i, j, a_ii, a_jj, c) in enumerate(
            [(0, 3, self.r11, self.r44, self.r14)] * 2
            + [(1, 2, self.r22, self.r33, self.r23)] * 2
        ):
            vecs[:, col] = _block_vector(i, j, a_ii, a_jj, c, lam[col], upper=col % 2 == 0)
        order = np.argsort(-lam, kind="stable")
        return Spectrum(eigenvalues=lam[order], eigenvectors=vecs[:, order])


def _block_pair(pa, pb, amp):
    total = pa + pb
    # (pa + pb)^2 - 4 (pa pb - amp^2) written without cancellation
    big = 0.5 * (total + np.sqrt((pa - pb) ** 2 + 4.0 * amp ** 2))
    amp0 = np.sqrt(np.clip(pa * pb, 0.0, None))
    with np.errstate(divide="ignore", invalid="ignore"):
        small = np.where(big > 0.0, (amp0 - amp) * (amp0 + amp) / np.where(big > 0.0, big, 1.0), 0.0)
    return big, small


def x_eigenvalues(populations, x, y) -> np.ndarray:
    """Closed-form X-state spectrum, vectorized over leading axes.

    ``populations`` has shape ``(..., 4)``; ``x`` and ``y`` are the coherence
    moduli. The result has shape ``(..., 4)`` in block order
    ``(L1, L2, L3, L4)``: the ``{e1, e4}`` pair first, larger member first.
    The smaller member of each pair is evaluated as
    ``(amp0^2 - amp^2) / larger`` so that near-rank-deficient blocks keep
    their relative accuracy.
    """
    p = np.asarray(populations, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    l1, l2 = _block_pair(p[..., 0], p[..., 3], x)
    l3, l4 = _block_pair(p[..., 1], p[..., 2], y)
    return np.stack([l1, l2, l3, l4], axis=-1)


def _phase(z: complex) -> float:
    if z == 0:
        return 0.0
    return math.atan2(z.imag, z.real) % (2 * math.pi)


def _block_vector(i, j, a_ii, a_jj, c, lam, upper):
    """Unit eigenvector of the 2x2 block ``[[a_ii, c], [c*, a_jj]]``."""
    v = np.zeros(4, dtype=complex)
    if abs(c) == 0.0:
        # block already diagonal; the larger eigenvalue goes with the larger population
        first = (a_ii >= a_jj) == upper
        v[i if first else j] = 1.0
        return v
    # (c, lam - a_ii) and (lam - a_jj, c*) span the same line; keep the better conditioned one
    cand1 = (c, lam - a_ii)
    cand2 = (lam - a_jj, c.conjugate())
    n1 = math.hypot(abs(cand1[0]), abs(cand1[1]))
    n2 = math.hypot(abs(cand2[0]), abs(cand2[1]))
    top, bot = cand1 if n1 >= n2 else cand2
    norm = max(n1, n2)
    v[i] = top / norm
    v[j] = bot / norm
    return v


@dataclass(frozen=True)
class PureAmplitudes:
    alpha: np.ndarray

    def vector(self) -> np.ndarray:
        return np.array(self.alpha)

    def projector(self) -> np.ndarray:
        a = np.asarray(self.alpha)
        return np.outer(a, a.conj())


@dataclass(frozen=True)
class NotFactorizable:
    """Outcome of :func:`proposition_q_factorize` for a mixed state."""

    purity: float
    reason: str = "mixed state"

    def __bool__(self):
        return False


def proposition_q_factorize(m, tol: float = 1e-10) -> PureAmplitudes | NotFactorizable:
    """Write a pure state's matrix as ``r_kj = alpha_k conj(alpha_j)``.

    Returns :class:`NotFactorizable` when the state is mixed (purity differs
    from one by more than ``2 * tol``). The global phase is fixed so the first
    amplitude with modulus above ``sqrt(tol)`` is real and positive.
    """
    m = _as_matrix(m)
    pur = float(purity(m))
    if abs(pur - 1.0) > 2 * tol:
        return NotFactorizable(pur)
    w, v = eigh_jacobi(m)
    alpha = math.sqrt(max(w[0], 0.0)) * v[:, 0]
    lead = np.flatnonzero(np.abs(alpha) > math.sqrt(tol))[0]
    mod = abs(alpha[lead])
    alpha = alpha * (mod / alpha[lead])
    alpha[lead] = mod
    if np.max(np.abs(np.outer(alpha, alpha.conj()) - m)) > tol:
        return NotFactorizable(pur, "rank-one fit residual above tolerance")
    return PureAmplitudes(alpha=alpha)


@dataclass(frozen=True)
class DeltaReport:
    """Entropy balance of the two one-qubit reductions.

    ``lambda1``/``lambda2`` are the smaller eigenvalues of the reduced
    states; both reductions have the same entropy iff ``delta == 0``.
    """

    delta: float
    lambda1: float
    lambda2: float
    entropy1: float
    entropy2: float
    entropies_equal: bool

    @property
    def vector1(self) -> tuple[float, float]:
        return (self.lambda1, 1.0 - self.lambda1)

    @property
    def vector2(self) -> tuple[float, float]:
        return (self.lambda2, 1.0 - self.lambda2)


def _smallest_eigenvalue_2x2(r: np.ndarray) -> float:
    det = float((r[0, 0] * r[1, 1] - r[0, 1] * r[1, 0]).real)
    return 0.5 * (1.0 - math.sqrt(max(1.0 - 4.0 * det, 0.0)))


def compute_delta(m, tol: float = 1e-12) -> DeltaReport:
    """``det rho_2 - det rho_1`` from the matrix elements, plus both reductions."""
    r = _as_matrix(m)
    delta = ((r[0, 0] - r[3, 3]) * (r[1, 1] - r[2, 2])).real \
        + abs(r[0, 2] + r[1, 3]) ** 2 - abs(r[0, 1] + r[2, 3]) ** 2
    l1 = _smallest_eigenvalue_2x2(partial_trace(r, "first"))
    l2 = _smallest_eigenvalue_2x2(partial_trace(r, "second"))
    s1 = von_neumann_entropy([l1, 1.0 - l1])
    s2 = von_neumann_entropy([l2, 1.0 - l2])
    return DeltaReport(float(delta), l1, l2, s1, s2, abs(delta) <= tol)


# --- families -------------------------------------------------------------

_SQ2 = 1.0 / math.sqrt(2.0)
_BELL_VECTORS = {
    1: np.array([_SQ2, 0, 0, _SQ2], dtype=complex),
    2: np.array([_SQ2, 0, 0, -_SQ2], dtype=complex),
    3: np.array([0, _SQ2, _SQ2, 0], dtype=complex),
    4: np.array([0, _SQ2, -_SQ2, 0], dtype=complex),
}


def bell_vector(k: int) -> np.ndarray:
    if k not in _BELL_VECTORS:
        raise ValueError(f"Bell index must be 1..4, got {k}")
    return _BELL_VECTORS[k].copy()


def make_bell(k: int) -> DensityMatrix:
    """Projector onto the Bell state ``beta_k``."""
    v = bell_vector(k)
    return DensityMatrix(np.outer(v, v.conj()))


def make_bell_mixture(b, tol: float = 1e-12) -> XState:
    """Convex combination ``sum_k b_k |beta_k><beta_k|``."""
    b = np.asarray(b, dtype=float)
    if b.shape != (4,):
        raise ValueError("expected four Bell weights")
    if np.any(b < -tol) or abs(b.sum() - 1.0) > tol:
        raise ValueError(f"Bell weights must be non-negative and sum to 1, got {b}")
    b1, b2, b3, b4 = b
    p14 = (b1 + b2) / 2
    p23 = (b3 + b4) / 2
    return XState.from_signed(p14, p23, p23, p14, (b1 - b2) / 2, (b3 - b4) / 2)


def make_werner(k: int, q: float) -> XState:
    """``q |beta_k><beta_k| + (1 - q)/4 I`` for ``-1/3 <= q <= 1``."""
    if k not in (1, 2, 3, 4):
        raise ValueError(f"Bell index must be 1..4, got {k}")
    if not -1.0 / 3.0 <= q <= 1.0:
        raise ValueError(f"Werner parameter q={q} outside [-1/3, 1]")
    hi = (1 + q) / 4
    lo = (1 - q) / 4
    if k in (1, 2):
        return XState.from_signed(hi, lo, lo, hi, (-1) ** (k + 1) * q / 2, 0.0)
    return XState.from_signed(lo, hi, hi, lo, 0.0, (-1) ** (k - 1) * q / 2)


def make_generalized_werner(q, s: float, tol: float = 1e-12) -> XState:
    """``sum_k q_k |beta_k><beta_k| + (1 - s)/4 I`` with ``sum_k q_k = s``.

    Raises
    ------
    ValueError
        Naming the first violated constraint.
    """
    q = np.asarray(q, dtype=float)
    if q.shape != (4,):
        raise ValueError("expected four coefficients q_k")
    if abs(q.sum() - s) > tol:
        raise ValueError(f"coefficients sum to {q.sum():.15g}, expected s={s}")
    lo, hi = (s - 1) / 4, (s + 3) / 4
    for k, qk in enumerate(q, start=1):
        if qk < lo - tol:
            raise ValueError(f"q_{k}={qk} below lower bound (s-1)/4={lo}")
        if qk > hi + tol:
            raise ValueError(f"q_{k}={qk} above upper bound (s+3)/4={hi}")
    if s > 1 + q.min() + tol:
        raise ValueError(f"s={s} exceeds 1 + min q_k = {1 + q.min()}")
    q1, q2, q3, q4 = q
    p11 = (1 + q1 + q2 - q3 - q4) / 4
    p22 = (1 - q1 - q2 + q3 + q4) / 4
    return XState.from_signed(p11, p22, p22, p11, (q1 - q2) / 2, (q3 - q4) / 2)


def x_state_from_density(m, tol: float = X_SHAPE_TOL) -> XState:
    """Read an X-state off a matrix whose non-X entries are below ``tol``.

    Raises
    ------
    NotXShaped
        Carrying the largest offending entry and its (0-based) index.
    """
    r = _as_matrix(m)
    if r.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {r.shape}")
    worst, where = 0.0, (0, 1)
    for i, j in _NON_X:
        for a, b in ((i, j), (j, i)):
            if abs(r[a, b]) > worst:
                worst, where = abs(r[a, b]), (a, b)
    if worst > tol:
        raise NotXShaped(
            f"entry r{where[0] + 1}{where[1] + 1} has magnitude {worst:.3e}", worst, where)
    if not is_hermitian(r, max(tol, HERMITIAN_TOL)):
        raise NotHermitian("matrix is not Hermitian", float(np.max(np.abs(r - r.conj().T))))
    pops = np.diag(r).real
    return XState(*pops, x=abs(r[0, 3]), theta=_phase(complex(r[0, 3])),
                  y=abs(r[1, 2]), phi=_phase(complex(r[1, 2])), tol=max(tol, TRACE_TOL))


def random_x_state(rng: np.random.Generator) -> XState:
    """Random valid X-state.

    Populations are uniform on the simplex, amplitudes uniform on
    ``[0, x0]`` and ``[0, y0]``, phases uniform.
    """
    p = rng.dirichlet(np.ones(4))
    p = p / p.sum()
    x0 = math.sqrt(p[0] * p[3])
    y0 = math.sqrt(p[1] * p[2])
    return XState(*p, x=rng.uniform(0, x0), theta=rng.uniform(0, 2 * math.pi),
                  y=rng.uniform(0, y0), phi=rng.uniform(0, 2 * math.pi))


def random_pure_state(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    return v / np.linalg.norm(v)


def random_mixed_state(rng: np.random.Generator, rank: int = 4) -> np.ndarray:
    """Random density matrix of the given rank (Ginibre construction)."""
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real
