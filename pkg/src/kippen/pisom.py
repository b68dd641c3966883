"""Canonical families of partial isometries and their parameters.

Four families are built here:

* ``Rank2Dim3``: the upper-triangular normal form of an irreducible 3x3
  partial isometry of rank two, parameterized by its nonzero eigenvalues.
* ``NilpotentDim4``: 4x4 nilpotent rank-two partial isometries.
* ``NilpotentDim5``: 5x5 nilpotent rank-three partial isometries.
* ``ExceptionalDim5``: the two members of ``NilpotentDim5`` (up to a unimodular
  factor) whose Hermitian parts have repeated eigenvalues.

``RawBlocks`` assembles ``[[0, B], [0, C]]`` from arbitrary blocks with
orthonormal block columns.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import InvalidRank, InvalidSpec
from .matcore import DEFAULT_TOL, as_matrix, im_part

SPEC_TOL = 1e-12


@dataclass(frozen=True)
class ExceptionalConstants:
    alpha: float
    c_plus: float
    c_minus: float
    t_plus: float
    t_minus: float


def _newton_step(f, df, x: float) -> float:
    d = df(x)
    return x - f(x) / d if d != 0 else x


def exceptional_constants() -> ExceptionalConstants:
    """Values of c and t at which the 5x5 nilpotent family fails to be generic.

    ``c_plus`` is the root in [0, 1] of ``c^3 - 2c^2 - c + 1`` and ``c_minus``
    the root in [0, 1] of ``c^3 + 2c^2 - c - 1``; both start from their
    trigonometric closed forms and get one Newton polish on the cubic.
    """
    alpha = math.atan(3 * math.sqrt(3)) / 3
    c_plus = 2 / 3 * (1 - math.sqrt(7) * math.cos(alpha + math.pi / 3))
    c_minus = -2 / 3 * (1 - math.sqrt(7) * math.cos(alpha - math.pi / 3))
    c_plus = _newton_step(lambda c: c**3 - 2 * c**2 - c + 1,
                          lambda c: 3 * c**2 - 4 * c - 1, c_plus)
    c_minus = _newton_step(lambda c: c**3 + 2 * c**2 - c - 1,
                           lambda c: 3 * c**2 + 4 * c - 1, c_minus)
    return ExceptionalConstants(
        alpha=alpha,
        c_plus=c_plus,
        c_minus=c_minus,
        t_plus=1 / math.sqrt(2 - c_plus),
        t_minus=1 / math.sqrt(2 + c_minus),
    )


def _unit_interval(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0) or math.isnan(value):
        raise InvalidSpec(f"{name} must lie in [0, 1] (got {value!r})")
    return value


@dataclass(frozen=True)
class Rank2Dim3:
    lambda1: complex
    lambda2: complex

    def __post_init__(self):
        for name in ("lambda1", "lambda2"):
            value = complex(getattr(self, name))
            if not abs(value) < 1:
                raise InvalidSpec(f"|{name}| must be < 1 (got {abs(value)!r})")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class NilpotentDim4:
    b: float
    c: float = field(init=False)

    def __post_init__(self):
        b = _unit_interval("b", self.b)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", math.sqrt(1 - b * b))


@dataclass(frozen=True)
class NilpotentDim5:
    """Parameters (b, t) with derived c = sqrt(1 - b^2), s = sqrt(1 - t^2).

    ``c`` and ``s`` may be passed explicitly when they are known more
    accurately than the square roots would give; they are then checked
    against ``b^2 + c^2 = s^2 + t^2 = 1``.
    """

    b: float
    t: float
    c: float = None
    s: float = None

    def __post_init__(self):
        b = _unit_interval("b", self.b)
        t = _unit_interval("t", self.t)
        c = math.sqrt(1 - b * b) if self.c is None else _unit_interval("c", self.c)
        s = math.sqrt(1 - t * t) if self.s is None else _unit_interval("s", self.s)
        if abs(b * b + c * c - 1) > SPEC_TOL:
            raise InvalidSpec(f"b^2 + c^2 must equal 1 (got {b * b + c * c!r})")
        if abs(s * s + t * t - 1) > SPEC_TOL:
            raise InvalidSpec(f"s^2 + t^2 must equal 1 (got {s * s + t * t!r})")
        for name, value in zip("btcs", (b, t, c, s)):
            object.__setattr__(self, name, value)

    @property
    def bcst(self) -> float:
        return self.b * self.c * self.s * self.t


@dataclass(frozen=True)
class ExceptionalDim5:
    sign: str
    phi: float = 0.0

    def __post_init__(self):
        if self.sign not in ("+", "-"):
            raise InvalidSpec(f"sign must be '+' or '-' (got {self.sign!r})")
        phi = float(self.phi)
        if not math.isfinite(phi):
            raise InvalidSpec(f"phi must be finite (got {phi!r})")
        object.__setattr__(self, "phi", math.fmod(phi, 2 * math.pi) % (2 * math.pi))

    def base(self) -> NilpotentDim5:
        """The underlying NilpotentDim5 parameters (phi dropped)."""
        k = exceptional_constants()
        if self.sign == "+":
            c, t = k.c_plus, k.t_plus
            s = math.sqrt((1 - c) / (2 - c))
        else:
            c, t = k.c_minus, k.t_minus
            s = math.sqrt((1 + c) / (2 + c))
        return NilpotentDim5(b=math.sqrt(1 - c * c), t=t, c=c, s=s)


@dataclass(frozen=True)
class RawBlocks:
    B: np.ndarray
    C: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        B = np.atleast_2d(np.array(self.B, dtype=np.complex128))
        C = np.atleast_2d(np.array(self.C, dtype=np.complex128))
        if C.ndim != 2 or C.shape[0] != C.shape[1]:
            raise InvalidSpec(f"C must be square (got shape {C.shape})")
        if B.ndim != 2 or B.shape[1] != C.shape[1]:
            raise InvalidSpec(
                f"B must have {C.shape[1]} columns (got shape {B.shape})")
        gram = B.conj().T @ B + C.conj().T @ C
        defect = np.linalg.norm(gram - np.eye(C.shape[0]))
        if defect > self.tol:
            raise InvalidSpec(f"B*B + C*C must equal I (defect {defect:.3g})")
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)


PisomSpec = Union[Rank2Dim3, NilpotentDim4, NilpotentDim5, ExceptionalDim5, RawBlocks]


def _nil5(p: NilpotentDim5) -> np.ndarray:
    A = np.zeros((5, 5), dtype=np.complex128)
    A[0, 2] = 1
    A[1, 3] = p.b
    A[1, 4] = p.t * p.c
    A[2, 3] = p.c
    A[2, 4] = -p.t * p.b
    A[3, 4] = p.s
    return A


def build(spec: PisomSpec) -> np.ndarray:
    """Matrix of a canonical family member."""
    if isinstance(spec, NilpotentDim5):
        return _nil5(spec)
    if isinstance(spec, NilpotentDim4):
        A = np.zeros((4, 4), dtype=np.complex128)
        A[0, 2] = 1
        A[1, 3] = spec.b
        A[2, 3] = spec.c
        return A
    if isinstance(spec, ExceptionalDim5):
        return np.exp(1j * spec.phi) * _nil5(spec.base())
    if isinstance(spec, Rank2Dim3):
        l1, l2 = spec.lambda1, spec.lambda2
        r1 = math.sqrt(1 - abs(l1) ** 2)
        r2 = math.sqrt(1 - abs(l2) ** 2)
        return np.array([
            [0, r1, -l1.conjugate() * r2],
            [0, l1, r1 * r2],
            [0, 0, l2],
        ], dtype=np.complex128)
    if isinstance(spec, RawBlocks):
        d, r = spec.B.shape
        A = np.zeros((d + r, d + r), dtype=np.complex128)
        A[:d, d:] = spec.B
        A[d:, d:] = spec.C
        return A
    raise InvalidSpec(f"unknown spec type {type(spec).__name__}")


def validate_partial_isometry(A, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``||A A* A - A||_F <= tol (1 + ||A||_F)``."""
    A = as_matrix(A)
    defect = np.linalg.norm(A @ A.conj().T @ A - A)
    return bool(defect <= tol * (1 + np.linalg.norm(A)))


def kernel_vector_xi(spec: NilpotentDim5, tol: float = DEFAULT_TOL) -> np.ndarray:
    """The vector [t, -s, 0, tc, -b] spanning the kernel of Im(A)."""
    if not isinstance(spec, NilpotentDim5):
        raise InvalidSpec("kernel_vector_xi needs a NilpotentDim5 spec")
    xi = np.array([spec.t, -spec.s, 0, spec.t * spec.c, -spec.b],
                  dtype=np.complex128)
    residual = np.linalg.norm(im_part(build(spec)) @ xi)
    if residual > tol:
        raise InvalidSpec(f"Im(A) xi != 0 (residual {residual:.3g})")
    return xi


# Seeded generator: splitmix64 words -> 53-bit uniforms -> Box-Muller pairs.
_MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64 stream; ``next_double`` returns a uniform in [0, 1)."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_double(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def gaussian_pair(self) -> tuple[float, float]:
        u1 = 1.0 - self.next_double()  # (0, 1]
        u2 = self.next_double()
        r = math.sqrt(-2.0 * math.log(u1))
        return r * math.cos(2 * math.pi * u2), r * math.sin(2 * math.pi * u2)


def _gaussian_matrix(rng: SplitMix64, n: int) -> np.ndarray:
    """Row-major complex Gaussians; each entry takes one Box-Muller pair."""
    G = np.empty((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            re, im = rng.gaussian_pair()
            G[i, j] = complex(re, im)
    return G


def _gram_schmidt(G: np.ndarray) -> np.ndarray:
    # modified Gram-Schmidt on columns, applied twice for orthogonality
    Q = G.copy()
    n = Q.shape[1]
    for _ in range(2):
        for j in range(n):
            for i in range(j):
                Q[:, j] -= np.vdot(Q[:, i], Q[:, j]) * Q[:, i]
            Q[:, j] /= np.linalg.norm(Q[:, j])
    return Q


def random_unitary(n: int, rng: SplitMix64) -> np.ndarray:
    return _gram_schmidt(_gaussian_matrix(rng, n))


def random_partial_isometry(n: int, rank: int, seed: int) -> np.ndarray:
    """``U P V*`` with seeded random unitaries U, V and a rank-``rank`` projection P.

    ``rank == n`` is allowed and yields a unitary.
    """
    if not (1 <= rank <= n <= 12):
        raise InvalidRank(f"need 1 <= rank <= n <= 12 (got n={n}, rank={rank})")
    rng = SplitMix64(seed)
    U = random_unitary(n, rng)
    V = random_unitary(n, rng)
    P = np.diag([1.0] * rank + [0.0] * (n - rank))
    return U @ P @ V.conj().T
