"""Dense complex matrix kernel.

Thin, convention-pinning wrappers around numpy/scipy factorizations.  The
wrappers exist so the rest of the package gets one fixed normalization:

* eigen/singular systems are ordered by decreasing value;
* returned basis columns have their first significant component real and
  non-negative (fixes the arbitrary phase);
* ``qr`` returns an R factor with real non-negative diagonal;
* rank decisions use one shared :class:`Tolerance` rule.

All functions accept anything ``np.asarray`` turns into a complex 2-D
array and raise :class:`DimensionMismatch` on shape violations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConvergenceFailure, DimensionMismatch, NotHermitian

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "as_matrix",
    "matmul",
    "adjoint",
    "transpose",
    "conjugate",
    "trace",
    "frobenius_inner",
    "frobenius_norm",
    "nearly_equal",
    "numeric_rank",
    "hermitian_eig",
    "svd",
    "qr",
    "schur",
    "polar",
    "sqrt_psd",
]


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative tolerance pair.

    A comparison at scale ``s`` uses the threshold ``max(abs, rel * s)``,
    where ``s`` is the Frobenius norm of the largest operand involved.
    """

    abs: float = 1e-12
    rel: float = 1e-9

    def __post_init__(self):
        if self.abs < 0 or self.rel < 0:
            raise ValueError("tolerances must be non-negative")

    def threshold(self, scale: float) -> float:
        return max(self.abs, self.rel * float(scale))


DEFAULT_TOL = Tolerance()


def as_matrix(a) -> np.ndarray:
    """Coerce to a complex 2-D ndarray, rejecting NaN/Inf entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D array, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T


def transpose(a) -> np.ndarray:
    return as_matrix(a).T


def conjugate(a) -> np.ndarray:
    return as_matrix(a).conj()


def trace(a) -> complex:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"trace needs a square matrix, got {a.shape}")
    return complex(np.trace(a))


def frobenius_inner(a, b) -> complex:
    """Tr(a† b); conjugate linear in the first argument."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def frobenius_norm(a) -> float:
    return float(np.linalg.norm(as_matrix(a)))


def nearly_equal(a, b, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Frobenius-distance comparison at the scale of the larger operand."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    scale = max(frobenius_norm(a), frobenius_norm(b))
    return frobenius_norm(a - b) <= tol.threshold(scale)


def numeric_rank(values: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> int:
    """Count entries of a non-negative 1-D array above the rank threshold.

    The threshold is taken at the scale of the largest entry, so uniform
    rescaling of the input does not change the answer.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 0
    top = float(values.max(initial=0.0))
    return int(np.count_nonzero(values > tol.threshold(top)))


def _fix_column_phases(u: np.ndarray) -> np.ndarray:
    """Rotate each column so its first significant entry is real >= 0."""
    u = np.array(u, dtype=complex)
    for c in range(u.shape[1]):
        col = u[:, c]
        mags = np.abs(col)
        top = mags.max(initial=0.0)
        if top == 0.0:
            continue
        lead = int(np.flatnonzero(mags > top * 1e-8)[0])
        u[:, c] = col * (mags[lead] / col[lead])
    return u


def hermitian_eig(a, tol: Tolerance = DEFAULT_TOL):
    """Eigensystem of a Hermitian matrix.

    Returns ``(w, v)`` with real eigenvalues ``w`` in decreasing order and
    orthonormal eigenvector columns ``v`` (phase-fixed as above), so that
    ``a ~= v @ diag(w) @ v†``.  Raises :class:`NotHermitian` when the
    input deviates from its adjoint beyond tolerance.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected square matrix, got {a.shape}")
    if frobenius_norm(a - a.conj().T) > tol.threshold(frobenius_norm(a)):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    try:
        w, v = np.linalg.eigh((a + a.conj().T) / 2.0)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    order = np.argsort(w)[::-1]
    return w[order], _fix_column_phases(v[:, order])


def svd(a, tol: Tolerance = DEFAULT_TOL):
    """Rank-truncated singular value decomposition.

    Returns ``(u, s, w)`` with ``a ~= u @ diag(s) @ w†`` where only the
    singular values above the rank threshold are kept, ``s`` is strictly
    decreasing up to ties, and the columns of ``u`` are phase-fixed (the
    compensating phase goes into ``w``).
    """
    a = as_matrix(a)
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    r = numeric_rank(s, tol)
    u, s, w = u[:, :r], s[:r], vh[:r].conj().T
    for c in range(r):
        col = u[:, c]
        mags = np.abs(col)
        lead = int(np.flatnonzero(mags > mags.max() * 1e-8)[0])
        phase = col[lead] / mags[lead]
        u[:, c] = col * phase.conj()
        w[:, c] = w[:, c] * phase.conj()
    return u, s, w


def qr(a):
    """Reduced QR with the diagonal of R real and non-negative.

    Requires at least as many rows as columns; Q then has orthonormal
    columns and ``a = q @ r`` with ``r`` upper triangular.
    """
    a = as_matrix(a)
    if a.shape[0] < a.shape[1]:
        raise DimensionMismatch(f"qr needs rows >= cols, got {a.shape}")
    try:
        q, r = np.linalg.qr(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    d = np.diagonal(r).copy()
    phases = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
    q = q * phases[np.newaxis, :]
    r = phases.conj()[:, np.newaxis] * r
    # kill the -0.0 that Householder reflections tend to leave behind
    r = r + 0.0
    return q, r


def schur(a):
    """Complex Schur form ``a = u @ t @ u†`` with t upper triangular.

    The eigenvalues of ``a`` appear on the diagonal of ``t``.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected square matrix, got {a.shape}")
    try:
        t, u = scipy.linalg.schur(a, output="complex")
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return u, t


def polar(a, tol: Tolerance = DEFAULT_TOL):
    """Polar forms of a tall or square matrix.

    Returns ``(u, j, k)`` with ``u`` an isometry (``u† u = id``) and
    ``j``, ``k`` positive semidefinite Hermitian such that
    ``a = u @ j = k @ u``.  ``j = sqrt(a† a)`` and ``k = sqrt(a a†)``
    restricted to the range of ``a``.
    """
    a = as_matrix(a)
    if a.shape[0] < a.shape[1]:
        raise DimensionMismatch(f"polar needs rows >= cols, got {a.shape}")
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    iso = u @ vh
    j = vh.conj().T @ (s[:, np.newaxis] * vh)
    k = u @ (s[:, np.newaxis] * u.conj().T)
    j = (j + j.conj().T) / 2.0
    k = (k + k.conj().T) / 2.0
    return iso, j, k


def sqrt_psd(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues inside the negative tolerance band are clipped to zero;
    anything below the band raises :class:`NotHermitian` upstream or a
    ValueError here.
    """
    w, v = hermitian_eig(a, tol)
    floor = -tol.threshold(float(np.abs(w).max(initial=0.0)))
    if w.min(initial=0.0) < floor:
        raise ValueError("matrix has a negative eigenvalue beyond tolerance")
    w = np.clip(w, 0.0, None)
    return v @ (np.sqrt(w)[:, np.newaxis] * v.conj().T)
