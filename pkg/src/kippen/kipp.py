"""Angle sweeps of ``Re(exp(-i theta) A)`` and what they determine.

For each angle on a uniform grid over (-pi, pi] the full descending
spectrum of the rotated Hermitian part is computed.  From it come the
support function of the numerical range, boundary points, the numerical
radius, circular components of the Kippenhahn curve, and rank-k numerical
ranges as intersections of half-planes.

Grid-based verdicts are recomputed on the doubled grid and must agree;
otherwise :class:`~kippen.errors.GridUnstable` is raised.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import polygon
from .errors import GridUnstable, InvalidK
from .matcore import (
    DEFAULT_TOL,
    RealPolynomial,
    as_matrix,
    char_poly,
    hermitian_eigen,
    hermitian_eigen_stack,
    op_norm,
    re_part,
    rotate,
)
from .search import golden_max

DEFAULT_GRID = 720
CIRCLE_TOL = 1e-8
MIN_GRID = 8


def theta_grid(m: int) -> np.ndarray:
    """``m`` uniformly spaced angles in (-pi, pi], ending at pi."""
    if m < MIN_GRID:
        raise ValueError(f"grid size must be >= {MIN_GRID} (got {m})")
    return -np.pi + 2 * np.pi * np.arange(1, m + 1) / m


def rotated_hermitian_parts(A, thetas) -> np.ndarray:
    """Stack of ``Re(exp(-i theta) A)`` for every angle."""
    A = as_matrix(A)
    w = np.exp(-1j * np.asarray(thetas, dtype=float))[:, None, None]
    R = w * A[None]
    return (R + np.swapaxes(R.conj(), 1, 2)) / 2


def top_eigenvalue(A, theta: float) -> float:
    return float(hermitian_eigen(re_part(rotate(A, theta))).values[0])


@dataclass(frozen=True)
class SupportSweep:
    thetas: np.ndarray
    eigs: np.ndarray
    matrix_dim: int

    @property
    def support(self) -> np.ndarray:
        """lambda_1(theta) on the grid."""
        return self.eigs[:, 0]


@dataclass(frozen=True)
class BoundaryCurve:
    points: np.ndarray
    thetas: np.ndarray
    closed: bool = True


@dataclass(frozen=True)
class CircleSet:
    radii: tuple[float, ...]


@dataclass(frozen=True)
class EmptySet:
    def __str__(self):
        return "EmptySet"


@dataclass(frozen=True)
class SinglePoint:
    z: complex

    def __str__(self):
        return f"SinglePoint({self.z:.12g})"


@dataclass(frozen=True, repr=False)
class Polygon:
    vertices: np.ndarray

    def __repr__(self):
        return f"Polygon({self.vertices.size} vertices)"

    __str__ = __repr__


@dataclass(frozen=True)
class RankKRange:
    k: int
    verdict: EmptySet | SinglePoint | Polygon

    @property
    def kind(self) -> str:
        return type(self.verdict).__name__


def _sweep_full(A, m: int):
    thetas = theta_grid(m)
    vals, vecs = hermitian_eigen_stack(rotated_hermitian_parts(A, thetas))
    return thetas, vals, vecs


def sweep(A, m: int = DEFAULT_GRID) -> SupportSweep:
    """Descending spectra of ``Re(exp(-i theta) A)`` over the angle grid."""
    A = as_matrix(A)
    thetas, vals, _ = _sweep_full(A, m)
    return SupportSweep(thetas, vals, A.shape[0])


def boundary(A, m: int = DEFAULT_GRID) -> BoundaryCurve:
    """Support points ``<A x, x>`` for the top eigenvector x at each angle."""
    A = as_matrix(A)
    thetas, _, vecs = _sweep_full(A, m)
    x = vecs[:, :, 0]
    points = np.einsum("ki,ij,kj->k", x.conj(), A, x)
    return BoundaryCurve(points, thetas, closed=True)


def numerical_radius(A, m: int = DEFAULT_GRID) -> float:
    """``max_theta lambda_1(theta)``, golden-section refined around the grid max."""
    A = as_matrix(A)
    sw = sweep(A, m)
    i = int(np.argmax(sw.support))
    step = 2 * np.pi / m
    th = sw.thetas[i]
    _, best = golden_max(lambda u: top_eigenvalue(A, u), th - step, th + step)
    return max(best, float(sw.support[i]))


def kippenhahn_coeffs(A, theta: float) -> RealPolynomial:
    """Characteristic polynomial of ``Re(exp(-i theta) A)``."""
    return char_poly(re_part(rotate(A, theta)))


def _char_poly_values(Hs: np.ndarray, x: float) -> np.ndarray:
    """``det(x I - H)`` for a stack of H via vectorized Faddeev-LeVerrier."""
    m, n, _ = Hs.shape
    eye = np.eye(n)
    coeffs = np.zeros((m, n + 1), dtype=np.complex128)
    coeffs[:, n] = 1
    M = np.zeros_like(Hs)
    for k in range(1, n + 1):
        M = Hs @ M + coeffs[:, n - k + 1, None, None] * eye
        coeffs[:, n - k] = -np.trace(Hs @ M, axis1=1, axis2=2) / k
    powers = x ** np.arange(n + 1)
    return (coeffs.real * powers).sum(axis=1)


def _dedupe_radii(radii, tol: float) -> list[float]:
    out: list[float] = []
    for r in sorted(radii):
        if not out or r - out[-1] > tol:
            out.append(r)
    return out


def _detect_circles_once(A, m: int, tol: float) -> tuple[float, ...]:
    n = A.shape[0]
    roots = kippenhahn_coeffs(A, 0.0).roots()
    candidates = _dedupe_radii(np.abs(roots.real), 1e-7)
    Hs = rotated_hermitian_parts(A, theta_grid(m))
    bound = tol * (1 + op_norm(A)) ** n
    accepted = []
    for r in candidates:
        worst = max(np.max(np.abs(_char_poly_values(Hs, r))),
                    np.max(np.abs(_char_poly_values(Hs, -r))))
        if worst <= bound:
            accepted.append(float(r))
    return tuple(accepted)


def detect_circles(A, m: int = DEFAULT_GRID, tol: float = CIRCLE_TOL,
                   check_grid: bool = True) -> CircleSet:
    """Origin-centred circles contained in the Kippenhahn curve.

    A candidate radius r (absolute value of a root of P at theta = 0) is kept
    when ``P_theta(r)`` and ``P_theta(-r)`` vanish to ``tol (1 + ||A||)^n``
    over the whole grid.  Radius 0 is reported when 0 is a persistent root.
    """
    A = as_matrix(A)
    radii = _detect_circles_once(A, m, tol)
    if check_grid:
        fine = _detect_circles_once(A, 2 * m, tol)
        if len(fine) != len(radii) or not np.allclose(fine, radii, atol=1e-7):
            raise GridUnstable(f"circle radii differ between m={m} and m={2 * m}")
    return CircleSet(radii)


def _circular_once(A, m: int, tol: float) -> Optional[float]:
    lam1 = sweep(A, m).support
    if np.max(lam1) - np.min(lam1) <= tol:
        return float(np.mean(lam1))
    return None


def circular_disk_test(A, m: int = DEFAULT_GRID, tol: float = DEFAULT_TOL,
                       check_grid: bool = True) -> Optional[float]:
    """Radius of W(A) if it is an origin-centred disk, else None.

    The support function of such a disk is constant, so the test is that
    lambda_1 varies by at most ``tol`` over the grid.
    """
    A = as_matrix(A)
    r = _circular_once(A, m, tol)
    if check_grid and (r is None) != (_circular_once(A, 2 * m, tol) is None):
        raise GridUnstable(f"disk verdict differs between m={m} and m={2 * m}")
    return r


def _rank_k_once(A, k: int, m: int, tol: float) -> RankKRange:
    sw = sweep(A, m)
    scale = max(op_norm(A), 1.0)
    bound = polygon.square(0j, 4 * scale)
    # lower bounds lambda_{n-k+1}(theta) are the theta + pi upper bounds
    poly = polygon.intersect(sw.thetas, sw.eigs[:, k - 1] + tol, bound,
                             dedup=1e-12 * scale)
    if poly.size == 0:
        return RankKRange(k, EmptySet())
    if polygon.diameter(poly) <= 4 * tol:
        return RankKRange(k, SinglePoint(complex(np.mean(poly))))
    return RankKRange(k, Polygon(poly))


def rank_k_range(A, k: int, m: int = DEFAULT_GRID, tol: float = DEFAULT_TOL,
                 check_grid: bool = True) -> RankKRange:
    """Rank-k numerical range as an intersection of supporting half-planes.

    Each half-plane ``Re(exp(-i theta) z) <= lambda_k(theta)`` is relaxed
    by ``tol``; an empty clip is EmptySet, a clip of diameter at most
    ``4 tol`` is SinglePoint, anything larger is Polygon.
    """
    A = as_matrix(A)
    n = A.shape[0]
    if not (1 <= k <= n):
        raise InvalidK(f"k must satisfy 1 <= k <= {n} (got {k})")
    result = _rank_k_once(A, k, m, tol)
    if check_grid and _rank_k_once(A, k, 2 * m, tol).kind != result.kind:
        raise GridUnstable(f"rank-{k} verdict differs between m={m} and m={2 * m}")
    return result


def nilpotent4_radii(b: float) -> tuple[float, float]:
    """Closed-form (outer, inner) circle radii for the 4x4 nilpotent family."""
    c = math.sqrt(1 - b * b)
    return 0.5 * math.sqrt(1 + c), 0.5 * math.sqrt(1 - c)


def nilpotent5_radii(b: float, c: float, t: float) -> tuple[float, float]:
    """Closed-form (r_plus, r_minus) for the 5x5 family when bcst = 0."""
    d = math.sqrt(5 - 4 * (b * b + c * c * t * t))
    return 0.5 * math.sqrt((3 + d) / 2), 0.5 * math.sqrt((3 - d) / 2)
