"""Structural verdicts on numerical ranges.

Genericity (no eigenvalue collisions along the angle sweep), flat boundary
segments, the elliptic/ovular test for 3x3 upper-triangular matrices, the
disk criterion for the 5x5 nilpotent family, and unitary reducibility via
the Hermitian commutant of ``{A, A*}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kipp
from .errors import GridUnstable, InvalidSpec, NotTriangular, ReducibleInput
from .matcore import (
    DEFAULT_TOL,
    as_matrix,
    hermitian_eigen,
    im_part,
    op_norm,
    re_part,
    rotate,
)
from .pisom import NilpotentDim5, validate_partial_isometry
from .search import golden_min

GAP_TOL = 1e-7
COMMUTANT_TOL = 1e-8
# refine at most this many grid minima per level; beyond that the gap curve is flat
MAX_CANDIDATES = 16


@dataclass(frozen=True)
class Collision:
    theta: float
    level: int
    gap: float


@dataclass(frozen=True)
class GenericityReport:
    generic: bool
    min_gap: float
    witness_theta: Optional[float]
    witness_level: Optional[int]
    collisions: tuple[Collision, ...] = ()


@dataclass(frozen=True)
class FlatPortion:
    direction: float
    endpoints: tuple[complex, complex]
    support_value: float
    eigenspace_dim: int = 2


@dataclass(frozen=True)
class Classification3x3:
    verdict: str
    lambda_star: complex
    foci: Optional[tuple[complex, complex]] = None


@dataclass(frozen=True)
class CircularityVerdict:
    circular: bool
    radius: Optional[float]


@dataclass(frozen=True)
class ReducibilityReport:
    reducible: bool
    commutant_dim: int
    projector: Optional[np.ndarray] = field(default=None, repr=False)


def _gap_at(A, theta: float, level: int) -> float:
    vals = hermitian_eigen(re_part(rotate(A, theta))).values
    return float(vals[level - 1] - vals[level])


def _genericity_once(A, m: int, gap_tol: float) -> GenericityReport:
    n = A.shape[0]
    if n == 1:
        return GenericityReport(True, math.inf, None, None)
    sw = kipp.sweep(A, m)
    gaps = sw.eigs[:, :-1] - sw.eigs[:, 1:]
    step = 2 * np.pi / m
    # each gap is 2||A||-Lipschitz in theta, so a grid value above this
    # screen cannot hide a sub-tolerance dip between neighbouring nodes
    screen = gap_tol + 2 * op_norm(A) * step

    refined: list[Collision] = []
    for j in range(n - 1):
        g = gaps[:, j]
        is_min = (g <= np.roll(g, 1)) & (g <= np.roll(g, -1)) & (g <= screen)
        idx = np.flatnonzero(is_min)
        idx = idx[np.argsort(g[idx], kind="stable")][:MAX_CANDIDATES]
        for i in idx:
            th = float(sw.thetas[i])
            x, gx = golden_min(lambda u: _gap_at(A, u, j + 1),
                               th - step, th + step, xtol=1e-10)
            x = math.remainder(x, 2 * math.pi)
            if x == -math.pi:
                x = math.pi
            refined.append(Collision(x, j + 1, min(gx, float(g[i]))))

    grid_min = float(gaps.min())
    i, j = np.unravel_index(int(np.argmin(gaps)), gaps.shape)
    if not refined:
        return GenericityReport(grid_min > gap_tol, grid_min,
                                float(sw.thetas[i]), int(j) + 1)
    hits = sorted((c for c in refined if c.gap <= gap_tol),
                  key=lambda c: (c.level, abs(c.theta)))
    min_gap = min(grid_min, min(c.gap for c in refined))
    if hits:
        w = hits[0]
    else:
        w = min(refined, key=lambda c: c.gap)
    return GenericityReport(
        generic=min_gap > gap_tol,
        min_gap=min_gap,
        witness_theta=w.theta,
        witness_level=w.level,
        collisions=tuple(_unique_collisions(hits)),
    )


def _unique_collisions(hits):
    out: list[Collision] = []
    for c in hits:
        if not any(c.level == o.level and
                   abs(math.remainder(c.theta - o.theta, 2 * math.pi)) < 1e-6
                   for o in out):
            out.append(c)
    return out


def genericity(A, m: int = kipp.DEFAULT_GRID, gap_tol: float = GAP_TOL,
               check_grid: bool = True) -> GenericityReport:
    """Smallest adjacent eigenvalue gap of ``Re(exp(-i theta) A)`` over theta.

    Grid minima are refined by golden-section search in theta; the matrix is
    generic iff the refined minimum exceeds ``gap_tol``.  ``witness_level`` j
    names the pair (lambda_j, lambda_{j+1}), counted from 1.
    """
    A = as_matrix(A)
    report = _genericity_once(A, m, gap_tol)
    if check_grid and _genericity_once(A, 2 * m, gap_tol).generic != report.generic:
        raise GridUnstable(f"genericity differs between m={m} and m={2 * m}")
    return report


def compress_top_eigenspace(A, theta: float, cluster_tol: float = GAP_TOL):
    """Top eigenspace of ``Re(exp(-i theta) A)`` and the compression of the Im part.

    Returns ``(support_value, basis, compression)``.
    """
    H = re_part(rotate(A, theta))
    vals, vecs = hermitian_eigen(H)
    d = 1
    while d < vals.size and vals[d - 1] - vals[d] <= cluster_tol:
        d += 1
    V = vecs[:, :d]
    M = V.conj().T @ im_part(rotate(A, theta)) @ V
    return float(np.mean(vals[:d])), V, M


def flat_portions(A, m: int = kipp.DEFAULT_GRID, tol: float = DEFAULT_TOL,
                  gap_tol: float = GAP_TOL,
                  check_grid: bool = True) -> list[FlatPortion]:
    """Line segments on the boundary of W(A).

    At every refined angle where lambda_1 and lambda_2 meet, the imaginary
    part is compressed onto the top eigenspace; a non-scalar compression
    with eigenvalues mu_1 > mu_2 gives the segment from
    ``e^{i theta}(lambda + i mu_2)`` to ``e^{i theta}(lambda + i mu_1)``.
    """
    A = as_matrix(A)
    report = genericity(A, m, gap_tol, check_grid=check_grid)
    out = []
    for col in report.collisions:
        if col.level != 1:
            continue
        lam, V, M = compress_top_eigenspace(A, col.theta, gap_tol)
        mu = hermitian_eigen(M).values
        if mu[0] - mu[-1] > tol:
            w = np.exp(1j * col.theta)
            ends = (complex(w * (lam + 1j * mu[0])), complex(w * (lam + 1j * mu[-1])))
            out.append(FlatPortion(col.theta, ends, lam, V.shape[1]))
    return out


def lambda_star(A) -> complex:
    """The quantity (c|x|^2 + b|y|^2 + a|z|^2 - x conj(y) z) / (|x|^2 + |y|^2 + |z|^2)."""
    A = as_matrix(A)
    a, b, c = A[0, 0], A[1, 1], A[2, 2]
    x, y, z = A[0, 1], A[0, 2], A[1, 2]
    ax, ay, az = abs(x) ** 2, abs(y) ** 2, abs(z) ** 2
    return complex((c * ax + b * ay + a * az - x * y.conjugate() * z) / (ax + ay + az))


def classify_3x3(A, tol: float = DEFAULT_TOL,
                 m: int = kipp.DEFAULT_GRID) -> Classification3x3:
    """Shape of W(A) for an irreducible upper-triangular 3x3 matrix.

    EllipticalDisk when lambda_star equals a diagonal entry (foci are the
    other two); FlatPortion when the necessary segment condition holds and a
    segment is actually found on the boundary; Ovular otherwise.
    """
    A = as_matrix(A)
    if A.shape != (3, 3):
        raise NotTriangular(f"expected a 3x3 matrix, got {A.shape}")
    scale = 1 + op_norm(A)
    if np.max(np.abs(np.tril(A, -1))) > tol * scale:
        raise NotTriangular("entries below the diagonal are not zero")
    x, y, z = A[0, 1], A[0, 2], A[1, 2]
    if max(abs(x), abs(y), abs(z)) <= tol * scale:
        raise ReducibleInput("off-diagonal part vanishes; matrix is normal")

    diag = [A[0, 0], A[1, 1], A[2, 2]]
    ls = lambda_star(A)
    dist = [abs(ls - d) for d in diag]
    k = int(np.argmin(dist))
    if dist[k] <= tol:
        foci = tuple(complex(diag[i]) for i in range(3) if i != k)
        return Classification3x3("EllipticalDisk", ls, foci)

    if min(abs(x), abs(y), abs(z)) > tol * scale:
        theta0 = np.angle(x * y.conjugate() * z)
        w = np.exp(-1j * theta0)
        lhs = abs(x * y / z) - 2 * (w * diag[0]).real
        rhs = abs(x * z / y) - 2 * (w * diag[1]).real
        if abs(lhs - rhs) <= tol * scale and flat_portions(A, m, tol):
            return Classification3x3("FlatPortion", ls)
    return Classification3x3("Ovular", ls)


def circularity_criterion_5x5(spec: NilpotentDim5) -> CircularityVerdict:
    """Disk test for the 5x5 nilpotent family: circular iff b c s t = 0."""
    if not isinstance(spec, NilpotentDim5):
        raise InvalidSpec("circularity_criterion_5x5 needs a NilpotentDim5 spec")
    if spec.bcst != 0:
        return CircularityVerdict(False, None)
    r_plus, _ = kipp.nilpotent5_radii(spec.b, spec.c, spec.t)
    return CircularityVerdict(True, r_plus)


def irreducibility_claims(spec: NilpotentDim5) -> dict:
    """Irreducibility of a NilpotentDim5 member by the two published readings.

    ``statement``: bcst != 0, or exactly one of b and t is zero.
    ``case_analysis``: bcst != 0, or exactly one of b, c, s, t is zero and it
    is b or t (the other single-zero cases and all double-zero cases reduce).
    """
    b, c, s, t = spec.b, spec.c, spec.s, spec.t
    zeros = [v == 0 for v in (b, c, s, t)]
    statement = spec.bcst != 0 or ((b == 0) != (t == 0))
    case_analysis = spec.bcst != 0 or (sum(zeros) == 1 and (b == 0 or t == 0))
    return {"statement": bool(statement), "case_analysis": bool(case_analysis)}


def _hermitian_basis(n: int) -> list[np.ndarray]:
    basis = []
    for j in range(n):
        E = np.zeros((n, n), dtype=np.complex128)
        E[j, j] = 1
        basis.append(E)
    for j in range(n):
        for k in range(j + 1, n):
            E = np.zeros((n, n), dtype=np.complex128)
            E[j, k] = E[k, j] = 1
            basis.append(E)
            F = np.zeros((n, n), dtype=np.complex128)
            F[j, k] = 1j
            F[k, j] = -1j
            basis.append(F)
    return basis


def _as_real(M: np.ndarray) -> np.ndarray:
    return np.concatenate([M.real.ravel(), M.imag.ravel()])


def reducibility(A, tol: float = COMMUTANT_TOL) -> ReducibilityReport:
    """Unitary reducibility via Hermitian solutions of XA = AX, XA* = A*X.

    ``commutant_dim`` is the real dimension of that solution space (the
    count of singular values at most ``tol`` times the largest).  A value
    of at least 2 means a non-scalar X exists, and a spectral projector of
    X is returned as a reducing-subspace witness.
    """
    A = as_matrix(A)
    n = A.shape[0]
    if n > 12:
        raise ValueError(f"reducibility supports n <= 12 (got {n})")
    Ah = A.conj().T
    basis = _hermitian_basis(n)
    L = np.column_stack([
        np.concatenate([_as_real(E @ A - A @ E), _as_real(E @ Ah - Ah @ E)])
        for E in basis
    ])
    _, sv, Vt = np.linalg.svd(L)
    if sv[0] == 0:
        dim = n * n
        null = np.eye(n * n)
    else:
        rank = int(np.sum(sv > tol * sv[0]))
        dim = n * n - rank
        null = Vt[rank:].T
    if dim < 2:
        return ReducibilityReport(False, dim)

    ident = np.zeros(n * n)
    ident[:n] = 1 / math.sqrt(n)
    resid = null - np.outer(ident, ident @ null)
    coeffs = resid[:, int(np.argmax(np.linalg.norm(resid, axis=0)))]
    X = sum(cf * E for cf, E in zip(coeffs, basis))
    vals, vecs = hermitian_eigen(X, tol=1e-8)
    split = int(np.argmax(vals[:-1] - vals[1:])) + 1
    V = vecs[:, :split]
    return ReducibilityReport(True, dim, V @ V.conj().T)


@dataclass(frozen=True)
class RangeReport:
    partial_isometry: bool
    genericity: GenericityReport
    circular_radius: Optional[float]
    circles: tuple[float, ...]
    flat_portions: tuple[FlatPortion, ...]
    reducibility: ReducibilityReport
    rank_k: dict
    numerical_radius: float
    criterion: Optional[dict] = None


def analyze(A, m: int = kipp.DEFAULT_GRID, tol: float = DEFAULT_TOL,
            ks=None, spec=None) -> RangeReport:
    """Run every verdict on ``A``; ``spec`` adds family-specific criteria."""
    A = as_matrix(A)
    n = A.shape[0]
    ks = range(1, n + 1) if ks is None else ks
    gen = genericity(A, m)
    flats = flat_portions(A, m, tol) if not gen.generic else []
    criterion = None
    if isinstance(spec, NilpotentDim5):
        verdict = circularity_criterion_5x5(spec)
        criterion = {
            "bcst": spec.bcst,
            "circular": verdict.circular,
            "radius": verdict.radius,
            "irreducible": irreducibility_claims(spec),
        }
    return RangeReport(
        partial_isometry=validate_partial_isometry(A, tol),
        genericity=gen,
        circular_radius=kipp.circular_disk_test(A, m, tol),
        circles=kipp.detect_circles(A, m).radii,
        flat_portions=tuple(flats),
        reducibility=reducibility(A),
        rank_k={k: kipp.rank_k_range(A, k, m, tol) for k in ks},
        numerical_radius=kipp.numerical_radius(A, m),
        criterion=criterion,
    )
