import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kippen.errors import InvalidRank, InvalidSpec
from kippen.matcore import im_part
from kippen.pisom import (
    ExceptionalDim5,
    NilpotentDim4,
    NilpotentDim5,
    RawBlocks,
    Rank2Dim3,
    SplitMix64,
    build,
    exceptional_constants,
    kernel_vector_xi,
    random_partial_isometry,
    validate_partial_isometry,
)

unit = st.floats(0, 1, allow_nan=False)


def test_constants_solve_their_cubics():
    k = exceptional_constants()
    assert abs(k.c_plus**3 - 2 * k.c_plus**2 - k.c_plus + 1) < 1e-14
    assert abs(k.c_minus**3 + 2 * k.c_minus**2 - k.c_minus - 1) < 1e-14
    assert 0 < k.c_plus < 1 and 0 < k.c_minus < 1
    assert k.t_plus == pytest.approx(1 / math.sqrt(2 - k.c_plus))
    assert k.t_minus == pytest.approx(1 / math.sqrt(2 + k.c_minus))


def test_constants_against_polyroots():
    k = exceptional_constants()
    roots = np.roots([1, -2, -1, 1])
    inside = [r.real for r in roots if abs(r.imag) < 1e-12 and 0 < r.real < 1]
    assert inside == [pytest.approx(k.c_plus, abs=1e-12)]


@pytest.mark.parametrize("spec", [
    NilpotentDim4(0.3),
    NilpotentDim5(0.5, 0.5),
    NilpotentDim5(0.0, 1.0),
    ExceptionalDim5("+", 0.4),
    ExceptionalDim5("-"),
    Rank2Dim3(0.3, -0.2 + 0.1j),
])
def test_families_are_partial_isometries(spec):
    assert validate_partial_isometry(build(spec))


def test_nilpotent_families_are_nilpotent():
    A4 = build(NilpotentDim4(0.6))
    A5 = build(NilpotentDim5(0.6, 0.3))
    assert np.allclose(np.linalg.matrix_power(A4, 4), 0)
    assert np.allclose(np.linalg.matrix_power(A5, 5), 0)
    assert np.linalg.matrix_rank(A4) == 2
    assert np.linalg.matrix_rank(A5) == 3


def test_rank2dim3_spectrum():
    A = build(Rank2Dim3(0.5, 0.25j))
    assert sorted(np.abs(np.linalg.eigvals(A))) == pytest.approx([0, 0.25, 0.5])
    assert np.linalg.matrix_rank(A) == 2


def test_exceptional_phi_only_rotates():
    a = build(ExceptionalDim5("+", 0.0))
    b = build(ExceptionalDim5("+", 1.1))
    np.testing.assert_allclose(b, np.exp(1.1j) * a)
    assert ExceptionalDim5("-", 2 * math.pi + 0.5).phi == pytest.approx(0.5)


@pytest.mark.parametrize("bad", [
    lambda: NilpotentDim4(1.5),
    lambda: NilpotentDim4(float("nan")),
    lambda: NilpotentDim5(0.5, -0.1),
    lambda: NilpotentDim5(0.6, 0.5, c=0.5),
    lambda: ExceptionalDim5("x"),
    lambda: Rank2Dim3(1.0, 0),
    lambda: RawBlocks(np.eye(2), np.eye(2)),
])
def test_invalid_specs_raise(bad):
    with pytest.raises(InvalidSpec):
        bad()


def test_raw_blocks_layout():
    B = np.array([[1.0, 0.0]])
    C = np.array([[0.0, 1.0], [0.0, 0.0]])
    A = build(RawBlocks(B, C))
    assert A.shape == (3, 3)
    assert validate_partial_isometry(A)
    np.testing.assert_array_equal(A[:, 0], 0)


def test_validate_rejects_contraction():
    assert not validate_partial_isometry(0.5 * np.eye(3))
    assert validate_partial_isometry(np.zeros((2, 2)))


@settings(max_examples=40, deadline=None)
@given(unit, unit)
def test_xi_spans_kernel_of_imaginary_part(b, t):
    spec = NilpotentDim5(b, t)
    xi = kernel_vector_xi(spec)
    assert np.linalg.norm(im_part(build(spec)) @ xi) < 1e-12
    assert np.linalg.norm(xi) == pytest.approx(
        math.sqrt(1 + b * b + (t * spec.c) ** 2), abs=1e-12)


def test_splitmix_reference_stream():
    # published first outputs of splitmix64 seeded with 0
    rng = SplitMix64(0)
    assert rng.next_u64() == 0xE220A8397B1DCDAF
    assert rng.next_u64() == 0x6E789E6AA1B965F4


def test_next_double_range():
    rng = SplitMix64(7)
    xs = [rng.next_double() for _ in range(1000)]
    assert min(xs) >= 0 and max(xs) < 1


@pytest.mark.parametrize("n,rank", [(1, 1), (3, 2), (5, 3), (6, 6)])
def test_random_partial_isometry(n, rank):
    A = random_partial_isometry(n, rank, seed=42)
    assert validate_partial_isometry(A)
    assert np.linalg.matrix_rank(A) == rank
    np.testing.assert_array_equal(A, random_partial_isometry(n, rank, seed=42))


def test_random_partial_isometry_seed_changes_output():
    assert not np.allclose(random_partial_isometry(4, 2, 1),
                           random_partial_isometry(4, 2, 2))


@pytest.mark.parametrize("n,rank", [(3, 0), (3, 4), (13, 2)])
def test_random_partial_isometry_rejects_bad_rank(n, rank):
    with pytest.raises(InvalidRank):
        random_partial_isometry(n, rank, 0)
