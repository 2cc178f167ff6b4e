"""
Small dense complex linear algebra for two-qubit operators.

Everything here works on 4x4 (and 2x2) Hermitian matrices in the
computational basis ``|00>, |01>, |10>, |11>``. Most functions also accept
stacks of matrices with shape ``(..., n, n)`` so that parameter sweeps can be
evaluated without Python-level loops.

The Hermitian eigensolver is a cyclic complex Jacobi method. At this size it
is unconditionally stable and accurate to a few ulps, which matters for the
near-degenerate spectra that X-states produce.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
RANK_TOL = 1e-9
JACOBI_TOL = 1e-14
TRACE_TOL = 1e-10

_MAX_SWEEPS = 50


@dataclass(frozen=True)
class Spectrum:
    """Eigen-decomposition of a Hermitian matrix.

    Attributes
    ----------
    eigenvalues : ndarray, shape (n,)
        Real eigenvalues sorted in descending order.
    eigenvectors : ndarray, shape (n, n) or None
        Unit eigenvectors stored as columns, ordered like ``eigenvalues``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None

    def reconstruct(self) -> np.ndarray:
        if self.eigenvectors is None:
            raise ValueError("spectrum carries no eigenvectors")
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def is_hermitian(m: npt.ArrayLike, tol: float = HERMITIAN_TOL) -> bool:
    """Return True iff ``max |m[k, j] - conj(m[j, k])| <= tol``.

    Examples
    --------
    >>> is_hermitian(np.eye(4) / 4)
    True
    >>> m = np.zeros((4, 4), complex); m[0, 1] = m[1, 0] = 1j
    >>> is_hermitian(m)
    False
    """
    m = np.asarray(m)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    return bool(np.max(np.abs(m - np.swapaxes(m, -1, -2).conj())) <= tol)


hermitize_check = is_hermitian


def _split4(m: np.ndarray) -> np.ndarray:
    if m.shape[-2:] != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape[-2:]}")
    return m.reshape(m.shape[:-2] + (2, 2, 2, 2))


def partial_trace(
    m: npt.ArrayLike,
    subsystem: Literal["first", "second"] = "first",
    tol: float = TRACE_TOL,
) -> np.ndarray:
    """Reduced state of one qubit.

    ``subsystem`` names the qubit that is *kept*: ``"first"`` returns
    ``Tr_2 rho`` and ``"second"`` returns ``Tr_1 rho``.

    Raises
    ------
    ValueError
        If the trace of ``m`` differs from one by more than ``tol``.
    """
    m = np.asarray(m, dtype=complex)
    tr = np.trace(m, axis1=-2, axis2=-1)
    if np.any(np.abs(tr - 1.0) > tol):
        raise ValueError(f"partial trace needs a unit-trace operator, got trace {tr}")
    t = _split4(m)
    if subsystem == "first":
        return np.einsum("...ijkj->...ik", t)
    if subsystem == "second":
        return np.einsum("...ijil->...jl", t)
    raise ValueError(f"unknown subsystem {subsystem!r}")


def partial_transpose_second(m: npt.ArrayLike) -> np.ndarray:
    """Transpose with respect to the second qubit.

    On an X-shaped matrix this exchanges ``r14`` with ``r23`` (and their
    conjugate partners); on a general matrix ``r12 -> r12*`` and
    ``r34 -> r34*`` as well.
    """
    m = np.asarray(m, dtype=complex)
    t = _split4(m)
    return np.swapaxes(t, -3, -1).reshape(m.shape)


def _jacobi(a: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi on a stack ``(N, n, n)`` of Hermitian matrices."""
    n = a.shape[-1]
    nb = a.shape[0]
    v = np.broadcast_to(np.eye(n, dtype=complex), a.shape).copy()
    off_mask = ~np.eye(n, dtype=bool)
    scale = np.maximum(np.sqrt(np.sum(np.abs(a) ** 2, axis=(-2, -1))), 1e-300)
    idx = np.arange(nb)
    for _ in range(_MAX_SWEEPS):
        off = np.sqrt(np.sum(np.abs(a[:, off_mask]) ** 2, axis=-1))
        active = off > tol * scale
        if not np.any(active):
            break
        if not np.all(active):
            sel = idx[active]
        else:
            sel = slice(None)
        sub_a = a[sel]
        sub_v = v[sel]
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = sub_a[:, p, q]
                mag = np.abs(apq)
                # rotations on entries this small cannot move the spectrum
                nz = mag > 1e-150
                safe = np.where(nz, mag, 1.0)
                phase = np.where(nz, apq / safe, 1.0)
                theta = (sub_a[:, q, q].real - sub_a[:, p, p].real) / (2.0 * safe)
                sgn = np.where(theta >= 0.0, 1.0, -1.0)
                t = np.where(nz, sgn / (np.abs(theta) + np.hypot(theta, 1.0)), 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # columns: A <- A G with G[p,p]=c, G[p,q]=s, G[q,p]=-s conj(ph), G[q,q]=c conj(ph)
                cph = phase.conj()
                ap = sub_a[:, :, p].copy()
                aq = sub_a[:, :, q]
                sub_a[:, :, p] = c[:, None] * ap - (s * cph)[:, None] * aq
                sub_a[:, :, q] = s[:, None] * ap + (c * cph)[:, None] * aq
                vp = sub_v[:, :, p].copy()
                vq = sub_v[:, :, q]
                sub_v[:, :, p] = c[:, None] * vp - (s * cph)[:, None] * vq
                sub_v[:, :, q] = s[:, None] * vp + (c * cph)[:, None] * vq
                # rows: A <- G^H A
                rp = sub_a[:, p, :].copy()
                rq = sub_a[:, q, :]
                sub_a[:, p, :] = c[:, None] * rp - (s * phase)[:, None] * rq
                sub_a[:, q, :] = s[:, None] * rp + (c * phase)[:, None] * rq
                sub_a[:, p, q] = 0.0
                sub_a[:, q, p] = 0.0
                sub_a[:, p, p] = sub_a[:, p, p].real
                sub_a[:, q, q] = sub_a[:, q, q].real
        a[sel] = sub_a
        v[sel] = sub_v
    w = np.einsum("...ii->...i", a).real
    order = np.argsort(-w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    v = np.take_along_axis(v, order[:, None, :], axis=-1)
    return w, v


def eigh_jacobi(
    m: npt.ArrayLike, tol: float = JACOBI_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and eigenvectors of Hermitian matrices.

    Accepts a single matrix or a stack ``(..., n, n)``. The input is
    symmetrized as ``(m + m^H) / 2`` before rotating; callers that care about
    Hermiticity should check it first (see :func:`eigensystem_hermitian`).

    Returns
    -------
    w : ndarray, shape (..., n)
    v : ndarray, shape (..., n, n)
        Eigenvectors as columns.
    """
    m = np.asarray(m, dtype=complex)
    batch = m.shape[:-2]
    n = m.shape[-1]
    a = m.reshape((-1, n, n))
    a = 0.5 * (a + np.swapaxes(a, -1, -2).conj())
    w, v = _jacobi(a.copy(), tol)
    return w.reshape(batch + (n,)), v.reshape(batch + (n, n))


def eigvalsh_jacobi(m: npt.ArrayLike, tol: float = JACOBI_TOL) -> np.ndarray:
    return eigh_jacobi(m, tol)[0]


def eigensystem_hermitian(m: npt.ArrayLike, tol: float = HERMITIAN_TOL) -> Spectrum:
    """Full spectrum of one Hermitian matrix.

    Raises
    ------
    ValueError
        If ``m`` is not Hermitian within ``tol``.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not is_hermitian(m, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    w, v = eigh_jacobi(m)
    return Spectrum(eigenvalues=w, eigenvectors=v)


def sqrtm_psd(m: npt.ArrayLike) -> np.ndarray:
    """Principal square root of a PSD Hermitian matrix (stackable).

    Eigenvalues at the level of rounding noise are set to zero before taking
    roots, so a rank-deficient input keeps its null space.
    """
    w, v = eigh_jacobi(m)
    floor = 8.0 * np.finfo(float).eps * np.max(np.abs(w), axis=-1, keepdims=True)
    w = np.where(w > floor, w, 0.0)
    return (v * np.sqrt(w)[..., None, :]) @ np.swapaxes(v, -1, -2).conj()


def von_neumann_entropy(p: npt.ArrayLike, tol: float = PSD_TOL) -> float:
    """Shannon entropy in bits of an eigenvalue/probability vector.

    Tiny negative entries (down to ``-tol``) are clamped to zero and
    ``0 log 0`` is taken as 0.

    >>> von_neumann_entropy([0.5, 0.5])
    1.0
    """
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("expected a non-empty 1-d probability vector")
    if np.any(p < -tol) or abs(p.sum() - 1.0) > tol:
        raise ValueError(f"malformed probability vector {p}")
    p = np.clip(p, 0.0, None)
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log2(nz)) + 0.0)


def binary_entropy(z: npt.ArrayLike) -> np.ndarray | float:
    """``h(z) = -z log2 z - (1 - z) log2(1 - z)``, elementwise."""
    z = np.clip(np.asarray(z, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(z > 0.0, -z * np.log2(np.where(z > 0.0, z, 1.0)), 0.0)
        b = np.where(z < 1.0, -(1.0 - z) * np.log2(np.where(z < 1.0, 1.0 - z, 1.0)), 0.0)
    out = a + b
    return float(out) if out.ndim == 0 else out


def entropy_of_state(m: npt.ArrayLike) -> float:
    """von Neumann entropy (bits) of a small density matrix."""
    return von_neumann_entropy(eigvalsh_jacobi(m), tol=1e-9)


def purity(m: npt.ArrayLike) -> np.ndarray | float:
    """``Tr rho^2``; lies in ``[1/4, 1]`` for two-qubit states."""
    m = np.asarray(m, dtype=complex)
    out = np.einsum("...ij,...ji->...", m, m).real
    return float(out) if out.ndim == 0 else out


def numerical_rank(m: npt.ArrayLike, tol: float = RANK_TOL) -> int:
    """Number of eigenvalues strictly above ``tol``."""
    return int(np.sum(eigvalsh_jacobi(m) > tol))
