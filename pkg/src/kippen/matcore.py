"""Dense complex matrix helpers and a small Hermitian eigensolver.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` and shape
``(n, n)``.  The eigensolver is a cyclic complex Jacobi method that also
works on stacks of matrices, which is what the angle sweeps in
:mod:`kippen.kipp` feed it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NotHermitian

DEFAULT_TOL = 1e-10
MAX_SWEEPS = 50
OFF_THRESHOLD = 1e-13
MAX_DIM = 64


def as_matrix(A) -> np.ndarray:
    """Coerce ``A`` to a square complex128 array, raising ValueError otherwise."""
    M = np.array(A, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return M


def re_part(A) -> np.ndarray:
    A = as_matrix(A)
    return (A + A.conj().T) / 2


def im_part(A) -> np.ndarray:
    A = as_matrix(A)
    return 1j * (A.conj().T - A) / 2


def rotate(A, theta: float) -> np.ndarray:
    """Return ``exp(-i theta) A``."""
    return np.exp(-1j * theta) * as_matrix(A)


def op_norm(A) -> float:
    """Spectral norm (largest singular value)."""
    return float(np.linalg.norm(as_matrix(A), 2))


@dataclass(frozen=True)
class HermitianEigenResult:
    values: np.ndarray
    vectors: np.ndarray

    def __iter__(self):
        yield self.values
        yield self.vectors


@dataclass(frozen=True)
class RealPolynomial:
    """Real polynomial with coefficients in ascending degree order."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.trim_zeros(np.asarray(self.coeffs, dtype=float), "b")
        object.__setattr__(self, "coeffs", c if c.size else np.zeros(1))

    @property
    def degree(self) -> int:
        if self.coeffs.size == 1 and self.coeffs[0] == 0:
            return -1
        return self.coeffs.size - 1

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(x, self.coeffs)

    def monic(self) -> RealPolynomial:
        return RealPolynomial(self.coeffs / self.coeffs[-1])

    def roots(self) -> np.ndarray:
        return np.polynomial.polynomial.polyroots(self.coeffs)


def _check_hermitian(H: np.ndarray, tol: float) -> None:
    scale = np.linalg.norm(H, axis=(-2, -1))
    defect = np.linalg.norm(H - np.swapaxes(H.conj(), -1, -2), axis=(-2, -1))
    if np.any(defect > tol * np.maximum(scale, 1.0)):
        raise NotHermitian(
            f"matrix is not Hermitian (defect {float(np.max(defect)):.3g})")


def _jacobi_stack(H: np.ndarray, max_sweeps: int):
    """Diagonalize a stack of Hermitian matrices in place by cyclic Jacobi.

    Returns (diagonal, eigenvector stack).  Rotation for pair (p, q) uses
    J = [[c, s e^{i phi}], [-s e^{-i phi}, c]] where phi = arg H[p, q],
    and H <- J* H J, V <- V J.
    """
    m, n, _ = H.shape
    V = np.broadcast_to(np.eye(n, dtype=np.complex128), (m, n, n)).copy()
    if n == 1:
        return H[:, :, 0].real.copy(), V
    scale = np.linalg.norm(H, axis=(1, 2))
    target = OFF_THRESHOLD * scale
    offmask = ~np.eye(n, dtype=bool)
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]

    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(H[:, offmask]) ** 2, axis=1))
        if np.all(off <= target):
            break
        for p, q in pairs:
            hpq = H[:, p, q]
            mag = np.abs(hpq)
            active = mag > 0
            if not active.any():
                continue
            safe = np.where(active, mag, 1.0)
            phase = np.where(active, hpq / safe, 1.0)
            tau = (H[:, q, q].real - H[:, p, p].real) / (2 * safe)
            sgn = np.where(tau >= 0, 1.0, -1.0)
            t = sgn / (np.abs(tau) + np.hypot(1.0, tau))
            c = 1 / np.hypot(1.0, t)
            s = np.where(active, t * c, 0.0)
            c = np.where(active, c, 1.0)
            cs = (c[:, None], s[:, None], phase[:, None])
            _rotate_cols(H, p, q, *cs)
            _rotate_rows(H, p, q, *cs)
            _rotate_cols(V, p, q, *cs)
            H[:, p, q] = 0
            H[:, q, p] = 0
    else:
        off = np.sqrt(np.sum(np.abs(H[:, offmask]) ** 2, axis=1))
        if np.any(off > target):
            raise NoConvergence(
                f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    return np.einsum("kii->ki", H).real.copy(), V


def _rotate_cols(X, p, q, c, s, phase):
    xp = X[:, :, p].copy()
    xq = X[:, :, q]
    X[:, :, p] = c * xp - s * phase.conj() * xq
    X[:, :, q] = s * phase * xp + c * xq


def _rotate_rows(X, p, q, c, s, phase):
    xp = X[:, p, :].copy()
    xq = X[:, q, :]
    X[:, p, :] = c * xp - s * phase * xq
    X[:, q, :] = s * phase.conj() * xp + c * xq


def _lead_index(vecs: np.ndarray) -> np.ndarray:
    """Index of the first component above 1e-8 in each column (last axis)."""
    big = np.abs(vecs) > 1e-8
    return np.argmax(big, axis=-2)


def _break_ties(vals: np.ndarray, vecs: np.ndarray, tie_tol: float):
    # ties: ascending index of the first significant eigenvector component
    n = vals.size
    i = 0
    while i < n:
        j = i + 1
        while j < n and vals[j - 1] - vals[j] <= tie_tol:
            j += 1
        if j - i > 1:
            sub = np.argsort(_lead_index(vecs[:, i:j]), kind="stable") + i
            vals[i:j] = vals[sub]
            vecs[:, i:j] = vecs[:, sub]
        i = j


def hermitian_eigen_stack(H, tol: float = DEFAULT_TOL,
                          max_sweeps: int = MAX_SWEEPS):
    """Eigen-decompose a stack ``(m, n, n)`` of Hermitian matrices.

    Returns ``(values, vectors)`` with values ``(m, n)`` sorted descending
    and vectors ``(m, n, n)`` holding the paired eigenvectors as columns.
    """
    H = np.array(H, dtype=np.complex128)
    if H.ndim != 3 or H.shape[1] != H.shape[2]:
        raise ValueError(f"expected a stack of square matrices, got {H.shape}")
    if H.shape[1] > MAX_DIM:
        raise ValueError(f"dimension {H.shape[1]} exceeds {MAX_DIM}")
    _check_hermitian(H, tol)
    H = (H + np.swapaxes(H.conj(), 1, 2)) / 2
    scale = np.linalg.norm(H, axis=(1, 2))
    vals, vecs = _jacobi_stack(H, max_sweeps)

    order = np.argsort(-vals, axis=1, kind="stable")
    vals = np.take_along_axis(vals, order, axis=1)
    vecs = np.take_along_axis(vecs, order[:, None, :], axis=2)
    tie_tol = 1e3 * np.finfo(float).eps * np.maximum(scale, 1.0)
    tied = np.any(-np.diff(vals, axis=1) <= tie_tol[:, None], axis=1)
    for k in np.flatnonzero(tied):
        _break_ties(vals[k], vecs[k], tie_tol[k])
    lead = np.take_along_axis(vecs, _lead_index(vecs)[:, None, :], axis=1)
    mag = np.abs(lead)
    vecs = vecs * np.where(mag > 0, mag / np.where(mag > 0, lead, 1), 1)
    return vals, vecs


def hermitian_eigen(H, tol: float = DEFAULT_TOL) -> HermitianEigenResult:
    """Eigenvalues (descending) and orthonormal eigenvectors of Hermitian ``H``.

    Raises NotHermitian when ``||H - H*|| > tol ||H||`` and NoConvergence
    when the sweep budget runs out.
    """
    H = as_matrix(H)
    vals, vecs = hermitian_eigen_stack(H[None], tol)
    return HermitianEigenResult(vals[0], vecs[0])


def char_poly(H, tol: float = DEFAULT_TOL) -> RealPolynomial:
    """Coefficients of ``det(lambda I - H)`` via the Faddeev-LeVerrier recursion."""
    H = as_matrix(H)
    _check_hermitian(H[None], tol)
    n = H.shape[0]
    coeffs = np.zeros(n + 1, dtype=np.complex128)
    coeffs[n] = 1.0
    M = np.zeros_like(H)
    eye = np.eye(n, dtype=np.complex128)
    for k in range(1, n + 1):
        M = H @ M + coeffs[n - k + 1] * eye
        coeffs[n - k] = -np.trace(H @ M) / k
    return RealPolynomial(coeffs.real)
