import math

import numpy as np
import pytest

from kippen import analysis
from kippen.kipp import circular_disk_test
from kippen.acceptance import OVULAR
from kippen.errors import NotTriangular, ReducibleInput
from kippen.pisom import (
    ExceptionalDim5,
    NilpotentDim4,
    NilpotentDim5,
    Rank2Dim3,
    build,
    random_partial_isometry,
)


def test_generic_example():
    rep = analysis.genericity(build(NilpotentDim5(0.5, 0.5)), 180)
    assert rep.generic
    assert rep.min_gap > 1e-3
    assert rep.collisions == ()


@pytest.mark.parametrize("sign", ["+", "-"])
def test_exceptional_members_are_not_generic(sign):
    rep = analysis.genericity(build(ExceptionalDim5(sign)), 180)
    assert not rep.generic
    assert rep.min_gap < 1e-7
    assert rep.witness_theta is not None


def test_exceptional_plus_has_flat_portion_at_zero():
    A = build(ExceptionalDim5("+"))
    flats = analysis.flat_portions(A, 180)
    assert len(flats) == 1
    fp = flats[0]
    H = (A + A.conj().T) / 2
    top = np.linalg.eigvalsh(H)[-1]
    assert fp.support_value == pytest.approx(top, abs=1e-9)
    assert abs(math.remainder(fp.direction, 2 * math.pi)) < 1e-8
    lo, hi = sorted(fp.endpoints, key=lambda z: z.imag)
    assert lo.real == pytest.approx(top, abs=1e-8)
    assert hi.imag == pytest.approx(-lo.imag, abs=1e-8)
    assert hi.imag > 0


def test_flat_portion_rotates_with_phi():
    phi = 0.9
    flats = analysis.flat_portions(build(ExceptionalDim5("+", phi)), 180)
    assert len(flats) == 1
    assert abs(math.remainder(flats[0].direction - phi, 2 * math.pi)) < 1e-7


def test_exceptional_minus_collision_is_interior():
    A = build(ExceptionalDim5("-"))
    assert analysis.flat_portions(A, 180) == []
    rep = analysis.genericity(A, 180)
    assert all(c.level > 1 for c in rep.collisions)


def test_compress_top_eigenspace_dimension():
    lam, V, M = analysis.compress_top_eigenspace(build(ExceptionalDim5("+")), 0.0)
    assert V.shape[1] == 2
    np.testing.assert_allclose(M, M.conj().T, atol=1e-12)


def test_lambda_star_formula():
    A = np.array([[1, 1, 0], [0, 2, 1], [0, 0, 3]], dtype=complex)
    # x = 1, y = 0, z = 1: (3 + 0 + 1) / 2
    assert analysis.lambda_star(A) == pytest.approx(2.0)


def test_classify_elliptical():
    A = np.array([[1, 1, 0], [0, 2, 1], [0, 0, 3]], dtype=complex)
    cls = analysis.classify_3x3(A)
    assert cls.verdict == "EllipticalDisk"
    assert set(cls.foci) == {1, 3}


def test_classify_ovular():
    assert analysis.classify_3x3(OVULAR, m=180).verdict == "Ovular"


def test_classify_rank2dim3_with_real_eigenvalues_runs():
    cls = analysis.classify_3x3(build(Rank2Dim3(0.5, -0.5)), m=180)
    assert cls.verdict in {"EllipticalDisk", "FlatPortion", "Ovular"}


def test_classify_rejects_bad_input():
    with pytest.raises(NotTriangular):
        analysis.classify_3x3(np.ones((3, 3)))
    with pytest.raises(NotTriangular):
        analysis.classify_3x3(np.eye(2))
    with pytest.raises(ReducibleInput):
        analysis.classify_3x3(np.diag([1, 2, 3]))


@pytest.mark.parametrize("b,t,expected", [
    (0.5, 0.5, False),
    (0.0, 0.5, True),
    (0.5, 0.0, True),
    (1.0, 0.5, True),
    (0.5, 1.0, True),
])
def test_circularity_criterion(b, t, expected):
    verdict = analysis.circularity_criterion_5x5(NilpotentDim5(b, t))
    assert verdict.circular == expected
    numeric = circular_disk_test(build(NilpotentDim5(b, t)), 180)
    assert (numeric is not None) == expected
    if expected:
        assert numeric == pytest.approx(verdict.radius, abs=1e-9)


def test_reducibility_of_direct_sum():
    J = np.array([[0, 1], [0, 0]], dtype=complex)
    A = np.zeros((4, 4), dtype=complex)
    A[:2, :2] = J
    A[2:, 2:] = 0.5 * J
    rep = analysis.reducibility(A)
    assert rep.reducible and rep.commutant_dim >= 2
    P = rep.projector
    np.testing.assert_allclose(P @ P, P, atol=1e-8)
    np.testing.assert_allclose(P @ A, A @ P, atol=1e-8)
    assert 0 < np.trace(P).real < 4


def test_jordan_block_is_irreducible():
    J = np.diag(np.ones(3), 1).astype(complex)
    rep = analysis.reducibility(J)
    assert not rep.reducible and rep.commutant_dim == 1


def test_reducibility_invariant_under_similarity():
    A = build(NilpotentDim5(0.5, 0.5))
    U = random_partial_isometry(5, 5, seed=11)
    assert analysis.reducibility(U @ A @ U.conj().T).commutant_dim == 1


def test_irreducibility_claims():
    assert analysis.irreducibility_claims(NilpotentDim5(0.5, 0.5)) == {
        "statement": True, "case_analysis": True}
    assert analysis.irreducibility_claims(NilpotentDim5(0.0, 0.5))["case_analysis"]
    assert not analysis.irreducibility_claims(NilpotentDim5(0.0, 0.0))["case_analysis"]


def test_analyze_report():
    spec = NilpotentDim5(0.5, 0.5)
    rep = analysis.analyze(build(spec), m=90, ks=[1, 3], spec=spec)
    assert rep.partial_isometry
    assert rep.genericity.generic
    assert rep.circular_radius is None
    assert not rep.reducibility.reducible
    assert rep.rank_k[3].kind == "EmptySet"
    assert rep.criterion["bcst"] == pytest.approx(0.1875)


def test_analyze_nilpotent4_report():
    rep = analysis.analyze(build(NilpotentDim4(0.5)), m=90)
    assert rep.circular_radius == pytest.approx(0.5 * math.sqrt(1 + math.sqrt(0.75)))
    assert rep.criterion is None
