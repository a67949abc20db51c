"""Dense vectors/matrices, Kronecker powers, vec, and SPD handling.

Everything here is written once over duck-typed scalars and works for two
fields: 64-bit floats and exact rationals (int / fractions.Fraction).  The
int scalars 0 and 1 embed in both fields, so identity matrices and empty
products stay field-agnostic.

Flat tensor addressing: a 0-based slot tuple (j_1, ..., j_K) in [0, n)^K
maps to flat index sum_p j_p * n^(K-1-p), which is exactly the layout
produced by iterated `kron`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import (
    DimensionMismatchError,
    DomainError,
    NotPositiveDefiniteError,
    NotSymmetricError,
    SingularMatrixError,
    SizeLimitError,
)
from .multiindex import MultiIndex

# Tensor results above this length are rejected; sizes are desk scale.
MAX_TENSOR_LEN = 10**7

# Relative symmetry tolerance for float-valued SPD inputs.
SPD_SYMMETRY_RTOL = 1e-12


def is_exact_scalar(v) -> bool:
    """True for scalars of the exact rational field (int or Fraction)."""
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


def _check_finite(values: Iterable) -> None:
    for v in values:
        if isinstance(v, float) and not math.isfinite(v):
            raise DomainError(f"non-finite entry {v!r}")


@dataclass(frozen=True)
class DenseVector:
    """Immutable dense vector over floats or exact rationals."""

    entries: tuple

    def __post_init__(self) -> None:
        if not isinstance(self.entries, tuple):
            object.__setattr__(self, "entries", tuple(self.entries))
        if len(self.entries) < 1:
            raise DimensionMismatchError("vector dimension must be >= 1")

    @classmethod
    def from_entries(cls, values: Sequence) -> "DenseVector":
        entries = tuple(values)
        _check_finite(entries)
        return cls(entries)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def dot(self, other: "DenseVector"):
        if self.dim != other.dim:
            raise DimensionMismatchError(
                f"dot of dims {self.dim} and {other.dim}"
            )
        return sum(a * b for a, b in zip(self.entries, other.entries))

    def __iter__(self) -> Iterator:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int):
        return self.entries[i]

    def to_list(self) -> list:
        return list(self.entries)


@dataclass(frozen=True)
class DenseMatrix:
    """Immutable row-major dense matrix over floats or exact rationals."""

    rows: int
    cols: int
    data: tuple  # tuple of row tuples

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise DimensionMismatchError("matrix dimensions must be >= 1")
        if len(self.data) != self.rows or any(
            len(row) != self.cols for row in self.data
        ):
            raise DimensionMismatchError("matrix data does not match shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "DenseMatrix":
        data = tuple(tuple(row) for row in rows)
        if not data or not data[0]:
            raise DimensionMismatchError("matrix must be non-empty")
        for row in data:
            _check_finite(row)
        return cls(len(data), len(data[0]), data)

    @classmethod
    def identity(cls, n: int) -> "DenseMatrix":
        data = tuple(
            tuple(1 if i == j else 0 for j in range(n)) for i in range(n)
        )
        return cls(n, n, data)

    def entry(self, i: int, j: int):
        return self.data[i][j]

    def row_vec(self, i: int) -> DenseVector:
        return DenseVector(self.data[i])

    def col_vec(self, j: int) -> DenseVector:
        return DenseVector(tuple(row[j] for row in self.data))

    def transpose(self) -> "DenseMatrix":
        data = tuple(
            tuple(self.data[i][j] for i in range(self.rows))
            for j in range(self.cols)
        )
        return DenseMatrix(self.cols, self.rows, data)

    def matmul(self, other: "DenseMatrix") -> "DenseMatrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"matmul of {self.rows}x{self.cols} and "
                f"{other.rows}x{other.cols}"
            )
        data = tuple(
            tuple(
                sum(self.data[i][k] * other.data[k][j] for k in range(self.cols))
                for j in range(other.cols)
            )
            for i in range(self.rows)
        )
        return DenseMatrix(self.rows, other.cols, data)

    def matvec(self, v: DenseVector) -> DenseVector:
        if self.cols != v.dim:
            raise DimensionMismatchError(
                f"matvec of {self.rows}x{self.cols} and dim {v.dim}"
            )
        return DenseVector(
            tuple(
                sum(row[k] * v.entries[k] for k in range(self.cols))
                for row in self.data
            )
        )

    def add(self, other: "DenseMatrix") -> "DenseMatrix":
        self._same_shape(other)
        data = tuple(
            tuple(a + b for a, b in zip(ra, rb))
            for ra, rb in zip(self.data, other.data)
        )
        return DenseMatrix(self.rows, self.cols, data)

    def sub(self, other: "DenseMatrix") -> "DenseMatrix":
        self._same_shape(other)
        data = tuple(
            tuple(a - b for a, b in zip(ra, rb))
            for ra, rb in zip(self.data, other.data)
        )
        return DenseMatrix(self.rows, self.cols, data)

    def scale(self, c) -> "DenseMatrix":
        data = tuple(tuple(c * v for v in row) for row in self.data)
        return DenseMatrix(self.rows, self.cols, data)

    def _same_shape(self, other: "DenseMatrix") -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatchError(
                f"shape mismatch {self.rows}x{self.cols} vs "
                f"{other.rows}x{other.cols}"
            )

    def is_exact(self) -> bool:
        return all(is_exact_scalar(v) for row in self.data for v in row)

    def to_lists(self) -> list[list]:
        return [list(row) for row in self.data]


def flat_index(slots: Sequence[int], n: int) -> int:
    """Flat position of a 0-based slot tuple in an order-len(slots) tensor
    over [0, n)."""
    f = 0
    for s in slots:
        f = f * n + s
    return f


def _check_len(length: int) -> None:
    if length > MAX_TENSOR_LEN:
        raise SizeLimitError(
            f"tensor of length {length} exceeds cap {MAX_TENSOR_LEN}"
        )


def kron(a, b):
    """Kronecker product of two vectors or two matrices.

    For vectors the entry at flat position i*len(b)+j is a[i]*b[j].
    """
    if isinstance(a, DenseVector) and isinstance(b, DenseVector):
        _check_len(a.dim * b.dim)
        return DenseVector(tuple(x * y for x in a.entries for y in b.entries))
    if isinstance(a, DenseMatrix) and isinstance(b, DenseMatrix):
        _check_len(a.rows * b.rows * a.cols * b.cols)
        data = tuple(
            tuple(
                a.data[i][j] * b.data[r][c]
                for j in range(a.cols)
                for c in range(b.cols)
            )
            for i in range(a.rows)
            for r in range(b.rows)
        )
        return DenseMatrix(a.rows * b.rows, a.cols * b.cols, data)
    raise DimensionMismatchError("kron operands must be two vectors or two matrices")


def kron_power(v: DenseVector, p: int) -> DenseVector:
    """p-fold Kronecker power of a vector; the 0th power is [1]."""
    if p < 0:
        raise DomainError(f"Kronecker power must be >= 0, got {p}")
    _check_len(v.dim**p)
    out = DenseVector((1,))
    for _ in range(p):
        out = kron(out, v)
    return out


def colwise_kron_power(a: DenseMatrix, q: MultiIndex | Iterable[int]) -> DenseVector:
    """Kronecker product of column powers: column j of `a` enters q_j times,
    columns in increasing order.  The zero index gives [1]."""
    q = MultiIndex.of(q)
    if q.arity != a.cols:
        raise DimensionMismatchError(
            f"index arity {q.arity} does not match column count {a.cols}"
        )
    _check_len(a.rows ** q.degree())
    out = DenseVector((1,))
    for j, power in enumerate(q.parts):
        if power:
            out = kron(out, kron_power(a.col_vec(j), power))
    return out


def vec(m: DenseMatrix) -> DenseVector:
    """Columnwise vectorization: columns stacked top to bottom."""
    return DenseVector(
        tuple(m.data[i][j] for j in range(m.cols) for i in range(m.rows))
    )


def _as_exact_rows(m: DenseMatrix) -> list[list[Fraction]]:
    return [[Fraction(v) for v in row] for row in m.data]


def invert_matrix(m: DenseMatrix) -> DenseMatrix:
    """Matrix inverse by Gauss-Jordan elimination with partial pivoting.

    Exact over rationals (entries all int/Fraction), floating otherwise.
    """
    if m.rows != m.cols:
        raise DimensionMismatchError("inverse of a non-square matrix")
    n = m.rows
    exact = m.is_exact()
    if exact:
        a = _as_exact_rows(m)
        aug = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    else:
        a = [[float(v) for v in row] for row in m.data]
        aug = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col]))
        if a[piv][col] == 0:
            raise SingularMatrixError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        aug[col], aug[piv] = aug[piv], aug[col]
        d = a[col][col]
        a[col] = [v / d for v in a[col]]
        aug[col] = [v / d for v in aug[col]]
        for r in range(n):
            if r == col:
                continue
            f = a[r][col]
            if f == 0:
                continue
            a[r] = [v - f * w for v, w in zip(a[r], a[col])]
            aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return DenseMatrix(n, n, tuple(tuple(row) for row in aug))


def check_symmetric(m: DenseMatrix, rtol: float | None = None) -> None:
    """Raise NotSymmetricError unless m is symmetric.

    Exact-field matrices must be exactly symmetric; float matrices are
    checked entrywise against |m_ij - m_ji| <= rtol * max(1, |m_ij|).
    """
    if m.rows != m.cols:
        raise DimensionMismatchError("symmetry check on a non-square matrix")
    exact = m.is_exact()
    tol = SPD_SYMMETRY_RTOL if rtol is None else rtol
    for i in range(m.rows):
        for j in range(i + 1, m.cols):
            a, b = m.data[i][j], m.data[j][i]
            if exact:
                if a != b:
                    raise NotSymmetricError(
                        f"entries ({i},{j}) and ({j},{i}) differ: {a} vs {b}"
                    )
            elif not abs(a - b) <= tol * max(1.0, abs(a)):
                raise NotSymmetricError(
                    f"entries ({i},{j}) and ({j},{i}) differ: {a!r} vs {b!r}"
                )


class SpdMatrix:
    """Symmetric positive-definite matrix with a cached factorization.

    Factorization is the square-root-free L*D*L^T form, which stays inside
    the scalar field: exact for rational entries, ordinary doubles for
    floats.  Positive definiteness is certified by all pivots d_i > 0.
    """

    __slots__ = ("matrix", "_lower", "_diag", "_inverse")

    def __init__(self, matrix: DenseMatrix, lower: tuple, diag: tuple):
        self.matrix = matrix
        self._lower = lower
        self._diag = diag
        self._inverse: DenseMatrix | None = None

    @property
    def dim(self) -> int:
        return self.matrix.rows

    def inverse_apply(self, v: DenseVector) -> DenseVector:
        """Solve S u = v via the cached factorization."""
        n = self.dim
        if v.dim != n:
            raise DimensionMismatchError(
                f"inverse_apply of dim {n} to vector of dim {v.dim}"
            )
        low = self._lower
        z = list(v.entries)
        for i in range(n):
            z[i] = z[i] - sum(low[i][j] * z[j] for j in range(i))
        w = [z[i] / self._diag[i] for i in range(n)]
        for i in range(n - 1, -1, -1):
            w[i] = w[i] - sum(low[j][i] * w[j] for j in range(i + 1, n))
        return DenseVector(tuple(w))

    def inverse(self) -> DenseMatrix:
        """The full inverse matrix, computed once and cached."""
        if self._inverse is None:
            n = self.dim
            cols = [
                self.inverse_apply(
                    DenseVector(tuple(1 if i == j else 0 for i in range(n)))
                )
                for j in range(n)
            ]
            data = tuple(
                tuple(cols[j].entries[i] for j in range(n)) for i in range(n)
            )
            self._inverse = DenseMatrix(n, n, data)
        return self._inverse

    def __repr__(self) -> str:
        return f"SpdMatrix(dim={self.dim})"


def spd_factorize(s: DenseMatrix) -> SpdMatrix:
    """Validate symmetry, factorize, and certify positive definiteness."""
    if s.rows != s.cols:
        raise DimensionMismatchError("SPD input must be square")
    check_symmetric(s)
    n = s.rows
    exact = s.is_exact()
    if exact:
        a = _as_exact_rows(s)
    else:
        a = [[float(v) for v in row] for row in s.data]
    low = [[0] * n for _ in range(n)]
    diag = [0] * n
    for j in range(n):
        pivot = a[j][j] - sum(low[j][k] * low[j][k] * diag[k] for k in range(j))
        if not pivot > 0:
            raise NotPositiveDefiniteError(
                f"non-positive pivot {pivot!r} at index {j}"
            )
        diag[j] = pivot
        low[j][j] = 1
        for i in range(j + 1, n):
            v = a[i][j] - sum(low[i][k] * low[j][k] * diag[k] for k in range(j))
            low[i][j] = v / pivot
    return SpdMatrix(s, tuple(tuple(row) for row in low), tuple(diag))
