"""Convex polygons as intersections of half-planes.

Points are complex numbers.  A half-plane is given by a direction angle
``theta`` and an offset ``h`` and contains every ``z`` with
``Re(exp(-i theta) z) <= h``.
"""
from __future__ import annotations

import numpy as np


def square(center: complex, side: float) -> np.ndarray:
    half = side / 2
    corners = np.array([1 - 1j, 1 + 1j, -1 + 1j, -1 - 1j]) * half
    return center + corners


def clip_halfplane(poly: np.ndarray, theta: float, h: float,
                   dedup: float = 0.0) -> np.ndarray:
    """Sutherland-Hodgman step: keep the part of ``poly`` inside one half-plane."""
    if poly.size == 0:
        return poly
    f = (np.exp(-1j * theta) * poly).real - h
    inside = f <= 0
    if inside.all():
        return poly
    if not inside.any():
        return poly[:0]
    nxt = np.roll(poly, -1)
    fn = np.roll(f, -1)
    cross = inside != np.roll(inside, -1)
    denom = np.where(cross, f - fn, 1.0)
    hits = poly + (f / denom) * (nxt - poly)
    # each edge contributes [vertex if inside][crossing point if it crosses]
    pts = np.stack([poly, hits], axis=1).ravel()
    keep = np.stack([inside, cross], axis=1).ravel()
    out = pts[keep]
    return dedupe(out, dedup)


def dedupe(poly: np.ndarray, tol: float) -> np.ndarray:
    """Drop vertices within ``tol`` of their predecessor (cyclically)."""
    if poly.size < 2 or tol <= 0:
        return poly
    keep = np.abs(poly - np.roll(poly, 1)) > tol
    if not keep.any():
        return poly[:1]
    return poly[keep]


def intersect(thetas, offsets, bound: np.ndarray, dedup: float = 0.0) -> np.ndarray:
    """Clip ``bound`` by every half-plane; returns CCW vertices (maybe empty)."""
    poly = bound
    for theta, h in zip(thetas, offsets):
        poly = clip_halfplane(poly, float(theta), float(h), dedup)
        if poly.size == 0:
            break
    return poly


def diameter(poly: np.ndarray) -> float:
    if poly.size < 2:
        return 0.0
    return float(np.max(np.abs(poly[:, None] - poly[None, :])))


def area(poly: np.ndarray) -> float:
    if poly.size < 3:
        return 0.0
    x, y = poly.real, poly.imag
    return float(0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def support(poly: np.ndarray, theta) -> np.ndarray:
    """Support function ``max_v Re(exp(-i theta) v)`` of a vertex set."""
    theta = np.atleast_1d(theta)
    return np.max((np.exp(-1j * theta)[:, None] * poly[None, :]).real, axis=1)


def contains(poly: np.ndarray, z: complex, tol: float = 0.0) -> bool:
    """Point-in-convex-polygon test for a CCW polygon, with slack ``tol``."""
    if poly.size == 0:
        return False
    if poly.size < 3:
        return bool(np.min(np.abs(poly - z)) <= tol) or _on_segment(poly, z, tol)
    a = poly
    b = np.roll(poly, -1)
    edge = b - a
    length = np.abs(edge)
    # near-duplicate vertices give edges with no usable direction
    real = length > 1e-12 * max(1.0, float(np.max(np.abs(poly))))
    cross = (edge.conjugate() * (z - a)).imag
    return bool(np.all(cross[real] >= -tol * length[real]))


def _on_segment(poly, z, tol):
    a, b = poly[0], poly[-1]
    d = b - a
    u = ((z - a) * d.conjugate()).real / (abs(d) ** 2)
    u = min(max(u, 0.0), 1.0)
    return abs(a + u * d - z) <= tol
