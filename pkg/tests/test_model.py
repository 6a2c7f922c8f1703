"""Core value types: matrices, exponents, witnesses."""

import math

import numpy as np
import pytest

from regnorm.errors import DomainError, ParseError, StructuralError
from regnorm.instances import matrix_from_obj, matrix_to_obj
from regnorm.model import (ExponentSpec, FamilyWitness, MatrixOperator,
                           NonnegVector, entrywise_abs, transpose)


def test_matrix_from_obj_identity_scalar():
    A = matrix_from_obj({"rows": 1, "cols": 1, "entries": [[1, 0]]})
    assert A.rows == A.cols == 1
    assert A.data[0, 0] == 1.0 + 0.0j


def test_matrix_from_obj_row_major():
    obj = {"rows": 2, "cols": 2, "entries": [[1, 0], [-2, 0], [3, 0], [4, 0]]}
    A = matrix_from_obj(obj)
    assert np.array_equal(A.data, np.array([[1, -2], [3, 4]], dtype=complex))


def test_matrix_obj_round_trip():
    A = MatrixOperator(np.array([[1 + 2j, -0.5], [0, 3j]]))
    again = matrix_from_obj(matrix_to_obj(A))
    assert np.array_equal(A.data, again.data)


def test_matrix_from_obj_wrong_entry_count():
    obj = {"rows": 2, "cols": 2, "entries": [[1, 0], [2, 0], [3, 0]]}
    with pytest.raises(StructuralError):
        matrix_from_obj(obj)


def test_matrix_rejects_nan():
    with pytest.raises(DomainError):
        MatrixOperator(np.array([[np.nan, 0.0], [0.0, 1.0]], dtype=complex))


def test_matrix_rejects_bad_json_shapes():
    with pytest.raises(ParseError):
        matrix_from_obj({"rows": 2, "cols": 2})
    with pytest.raises(ParseError):
        matrix_from_obj({"rows": 0, "cols": 2, "entries": []})


def test_entrywise_abs_sign_removal():
    A = MatrixOperator(np.array([[1, -2], [3, 4]], dtype=complex))
    assert np.array_equal(entrywise_abs(A).data, np.array([[1, 2], [3, 4]], dtype=complex))


def test_entrywise_abs_unit_modulus():
    A = MatrixOperator(np.array([[1j]]))
    assert entrywise_abs(A).data[0, 0] == 1.0


def test_entrywise_abs_zero():
    Z = MatrixOperator(np.zeros((3, 2), dtype=complex))
    assert np.array_equal(entrywise_abs(Z).data, Z.data)


def test_transpose_swaps_indices():
    A = MatrixOperator(np.array([[1, 2], [3, 4]], dtype=complex))
    assert np.array_equal(transpose(A).data, np.array([[1, 3], [2, 4]], dtype=complex))


def test_transpose_shape():
    row = MatrixOperator(np.array([[1, 2, 3]], dtype=complex))
    assert transpose(row).rows == 3 and transpose(row).cols == 1


def test_transpose_symmetric_fixed_point():
    S = MatrixOperator(np.array([[2, 5], [5, -1]], dtype=complex))
    assert np.array_equal(transpose(S).data, S.data)


# ---------------------------------------------------------------------------
# exponents


@pytest.mark.parametrize("p,theta,p_conj", [
    (1.0, 1.0, math.inf),
    (2.0, 0.5, 2.0),
    (4.0, 0.25, 4.0 / 3.0),
    (math.inf, 0.0, 1.0),
])
def test_exponent_spec_table(p, theta, p_conj):
    spec = ExponentSpec(p)
    assert spec.theta == theta
    assert spec.p_conj == p_conj


def test_exponent_holder_relation():
    for p in (1.0, 1.25, 2.0, 3.0, 7.0, math.inf):
        spec = ExponentSpec(p)
        inv = (0.0 if spec.is_inf else 1.0 / spec.p)
        inv_conj = (0.0 if math.isinf(spec.p_conj) else 1.0 / spec.p_conj)
        assert abs(inv + inv_conj - 1.0) < 1e-15
        assert math.isclose(spec.conjugate().conjugate().p, spec.p, rel_tol=1e-12)


def test_exponent_parse_tokens():
    assert ExponentSpec.parse("inf").is_inf
    assert ExponentSpec.parse("2").p == 2.0
    assert ExponentSpec.parse(1).is_one
    with pytest.raises(DomainError):
        ExponentSpec.parse("0.5")
    with pytest.raises(DomainError):
        ExponentSpec.parse("garbage")


def test_exponent_from_theta_endpoints():
    assert ExponentSpec.from_theta(0.0).is_inf
    assert ExponentSpec.from_theta(1.0).is_one
    assert ExponentSpec.from_theta(0.25).p == 4.0
    with pytest.raises(DomainError):
        ExponentSpec.from_theta(1.5)


def test_extension_problem_obj_round_trip_inf():
    from regnorm.extension import ExtensionProblem
    from regnorm.instances import (extension_problem_from_obj,
                                   extension_problem_to_obj)

    prob = ExtensionProblem(p="inf", ambient_n=2, target_m=1,
                            basis=np.array([[1.0, 2.0]], dtype=complex),
                            images=np.array([[3.0 + 1j]], dtype=complex))
    again = extension_problem_from_obj(extension_problem_to_obj(prob))
    assert again.p.is_inf
    assert np.array_equal(again.basis, prob.basis)
    assert np.array_equal(again.images, prob.images)


def test_nonneg_vector_validation():
    v = NonnegVector(np.array([0.0, 1.0, 2.5]))
    assert v.coords.dtype == np.float64
    with pytest.raises(DomainError):
        NonnegVector(np.array([1.0, -1e-9]))
    with pytest.raises(DomainError):
        NonnegVector(np.array([np.inf]))


def test_family_witness_validation():
    fam = FamilyWitness(np.array([[1.0 + 0j, 2.0], [0.0, 1j]]))
    assert fam.size == 2 and fam.length == 2
    with pytest.raises(StructuralError):
        FamilyWitness(np.zeros((0, 3), dtype=complex))
