import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermult.errors import (
    DimensionMismatchError,
    NotPositiveDefiniteError,
    NotSymmetricError,
    SingularMatrixError,
    SizeLimitError,
)
from hermult.multiindex import enumerate_fixed_degree
from hermult.tensorlin import (
    DenseMatrix,
    DenseVector,
    colwise_kron_power,
    flat_index,
    invert_matrix,
    kron,
    kron_power,
    spd_factorize,
    vec,
)
from hermult.verify import trial_rng


def vec2(*entries):
    return DenseVector.from_entries(entries)


def test_kron_vectors():
    assert kron(vec2(1, 2), vec2(3, 4)).entries == (3, 4, 6, 8)
    assert kron(vec2(1), vec2(5, 6)).entries == (5, 6)
    e1 = vec2(1, 0)
    e2 = vec2(0, 1)
    assert kron(e1, e2).entries == (0, 1, 0, 0)


def test_kron_matrices():
    a = DenseMatrix.from_rows([[1, 2], [3, 4]])
    b = DenseMatrix.from_rows([[0, 1], [1, 0]])
    k = kron(a, b)
    assert k.rows == k.cols == 4
    assert k.data[0] == (0, 1, 0, 2)
    assert k.data[3] == (3, 0, 4, 0)


def test_kron_power():
    a, b = 2.0, -3.0
    assert kron_power(vec2(a, b), 2).entries == (a * a, a * b, b * a, b * b)
    assert kron_power(vec2(7, 9), 0).entries == (1,)
    assert kron_power(vec2(0, 1), 2).entries == (0, 0, 0, 1)


def test_kron_power_chains():
    v = vec2(Fraction(1, 2), Fraction(-2, 3), Fraction(3))
    for p in range(4):
        assert kron_power(v, p + 1) == kron(kron_power(v, p), v)


def test_kron_associativity_up_to_flat_reshape():
    a = vec2(1, 2)
    b = vec2(3, 4, 5)
    c = vec2(-1, 6)
    assert kron(kron(a, b), c) == kron(a, kron(b, c))


def test_colwise_kron_power():
    a = DenseMatrix.from_rows([[1, 2], [3, 4]])
    assert colwise_kron_power(a, (1, 1)) == kron(a.col_vec(0), a.col_vec(1))
    eye = DenseMatrix.identity(2)
    assert colwise_kron_power(eye, (1, 1)).entries == (0, 1, 0, 0)
    assert colwise_kron_power(a, (0, 0)).entries == (1,)


def test_colwise_arity_mismatch():
    a = DenseMatrix.from_rows([[1, 2], [3, 4]])
    with pytest.raises(DimensionMismatchError):
        colwise_kron_power(a, (1, 1, 1))


def test_tensor_size_cap():
    v = DenseVector.from_entries([1.0] * 100)
    with pytest.raises(SizeLimitError):
        kron_power(v, 4)


def test_vec_column_stacking():
    m = DenseMatrix.from_rows([[1, 2], [3, 4]])
    assert vec(m).entries == (1, 3, 2, 4)
    z = DenseMatrix.from_rows([[0, 0], [0, 0]])
    assert vec(z).entries == (0, 0, 0, 0)


def test_vec_quadratic_form_identity():
    m = DenseMatrix.from_rows([[2.0, -0.5], [-0.5, 1.5]])
    t = vec2(0.3, -1.2)
    lhs = vec(m).dot(kron(t, t))
    rhs = t.dot(m.matvec(t))
    assert lhs == pytest.approx(rhs, rel=1e-14)


def test_flat_index_matches_kron_layout():
    n = 3
    cols = [DenseVector.from_entries([1 if i == j else 0 for i in range(n)]) for j in range(n)]
    for slots in [(0,), (2,), (0, 1), (2, 1), (1, 0, 2)]:
        v = DenseVector((1,))
        for s in slots:
            v = kron(v, cols[s])
        assert v.entries[flat_index(slots, n)] == 1
        assert sum(v.entries) == 1


def test_spd_factorize_inverses():
    eye = spd_factorize(DenseMatrix.identity(3))
    assert eye.inverse().data == DenseMatrix.identity(3).data
    scaled = spd_factorize(DenseMatrix.from_rows([[4.0, 0.0], [0.0, 4.0]]))
    assert scaled.inverse().data[0][0] == pytest.approx(0.25)
    diag = spd_factorize(DenseMatrix.from_rows([[1.0, 0.0], [0.0, 4.0]]))
    inv = diag.inverse()
    assert inv.data[0][0] == pytest.approx(1.0)
    assert inv.data[1][1] == pytest.approx(0.25)


def test_spd_rejects_asymmetric_and_indefinite():
    with pytest.raises(NotSymmetricError):
        spd_factorize(DenseMatrix.from_rows([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(NotPositiveDefiniteError):
        spd_factorize(DenseMatrix.from_rows([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(DimensionMismatchError):
        spd_factorize(DenseMatrix.from_rows([[1.0, 0.0]]))


def test_spd_inverse_exact_in_rational_field():
    s = DenseMatrix.from_rows(
        [[Fraction(5), Fraction(2)], [Fraction(2), Fraction(3)]]
    )
    spd = spd_factorize(s)
    prod = s.matmul(spd.inverse())
    assert prod.data == DenseMatrix.identity(2).data


def test_spd_inverse_float_roundtrip():
    for trial in range(20):
        rng = trial_rng(31, trial)
        n = int(rng.integers(1, 5))
        q = DenseMatrix.from_rows(rng.uniform(-2, 2, size=(n, n)).tolist())
        s = q.transpose().matmul(q).add(DenseMatrix.identity(n))
        spd = spd_factorize(s)
        prod = s.matmul(spd.inverse())
        for i in range(n):
            for j in range(n):
                assert prod.data[i][j] == pytest.approx(
                    1.0 if i == j else 0.0, abs=1e-10
                )


def test_invert_matrix_exact_and_singular():
    m = DenseMatrix.from_rows([[1, 2], [3, 4]])
    inv = invert_matrix(m)
    assert m.matmul(inv).data == DenseMatrix.identity(2).data
    with pytest.raises(SingularMatrixError):
        invert_matrix(DenseMatrix.from_rows([[1, 2], [2, 4]]))


small_fraction = st.fractions(
    min_value=-3, max_value=3, max_denominator=4
)


@given(
    st.integers(1, 3),
    st.integers(1, 3),
    st.data(),
)
@settings(max_examples=40, deadline=None)
def test_power_of_mapped_vector_equals_selector_contraction(rows, cols, data):
    entries = data.draw(
        st.lists(small_fraction, min_size=rows * cols, max_size=rows * cols)
    )
    b_entries = data.draw(st.lists(small_fraction, min_size=rows, max_size=rows))
    a = DenseMatrix.from_rows(
        [entries[r * cols : (r + 1) * cols] for r in range(rows)]
    )
    b = DenseVector.from_entries(b_entries)
    degree = data.draw(st.integers(0, 4))
    ks = enumerate_fixed_degree(cols, degree)
    k = data.draw(st.sampled_from(ks))
    atb = a.transpose().matvec(b)
    lhs = Fraction(1)
    for v, e in zip(atb.entries, k.parts):
        lhs *= v**e
    rhs = colwise_kron_power(a, k).dot(kron_power(b, degree))
    assert lhs == rhs


def test_power_of_mapped_vector_float_tolerance():
    for trial in range(30):
        rng = trial_rng(77, trial)
        rows = int(rng.integers(1, 5))
        cols = int(rng.integers(1, 5))
        a = DenseMatrix.from_rows(rng.uniform(-2, 2, size=(rows, cols)).tolist())
        b = DenseVector.from_entries(rng.uniform(-2, 2, size=rows).tolist())
        degree = int(rng.integers(0, 5))
        for k in enumerate_fixed_degree(cols, degree):
            atb = a.transpose().matvec(b)
            lhs = 1.0
            for v, e in zip(atb.entries, k.parts):
                lhs *= v**e
            rhs = colwise_kron_power(a, k).dot(kron_power(b, degree))
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))


def test_selector_vectors_orthonormal():
    for n in (1, 2, 3):
        for degree in range(0, 5):
            ks = enumerate_fixed_degree(n, degree)
            eye = DenseMatrix.identity(n)
            sel = [colwise_kron_power(eye, k) for k in ks]
            for i in range(len(sel)):
                for j in range(len(sel)):
                    assert sel[i].dot(sel[j]) == (1 if i == j else 0)


def test_matrix_shape_errors():
    a = DenseMatrix.from_rows([[1, 2], [3, 4]])
    with pytest.raises(DimensionMismatchError):
        a.matmul(DenseMatrix.from_rows([[1, 2, 3]]))
    with pytest.raises(DimensionMismatchError):
        a.matvec(DenseVector.from_entries([1, 2, 3]))
    with pytest.raises(DimensionMismatchError):
        DenseMatrix.from_rows([])
    assert math.isfinite(sum(a.row_vec(0).entries))
