"""Evaluation of univariate and general multivariate Hermite polynomials.

All evaluators run three-term or coordinate-raising recurrences rather than
coefficient tables, and work in either scalar field: float inputs give
doubles, int/Fraction inputs give exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import DimensionMismatchError, DomainError, SizeLimitError
from .multiindex import MultiIndex, enumerate_fixed_degree, mi_factorial
from .tensorlin import DenseVector, SpdMatrix, is_exact_scalar

# Degrees above this are outside the supported (non-asymptotic) regime.
MAX_DEGREE = 60

# Generating-function partial sums are capped at this total degree.
MAX_GF_DEGREE = 12

PROBABILISTS_KIND = "probabilists"
PHYSICISTS_KIND = "physicists"
SCALED_KIND = "scaled"
GENERAL_KIND = "general"


@dataclass(frozen=True)
class HermiteFamily:
    """One of the supported polynomial families.

    kind "probabilists" and "physicists" need no parameters; "scaled"
    carries a positive variance sigma_sq; "general" carries an SPD
    covariance.
    """

    kind: str
    sigma_sq: object = None
    sigma: SpdMatrix | None = None

    def __post_init__(self) -> None:
        if self.kind not in (
            PROBABILISTS_KIND,
            PHYSICISTS_KIND,
            SCALED_KIND,
            GENERAL_KIND,
        ):
            raise DomainError(f"unknown Hermite family kind {self.kind!r}")
        if self.kind == SCALED_KIND:
            s2 = self.sigma_sq
            if s2 is None or not s2 > 0:
                raise DomainError(f"scaled family needs sigma_sq > 0, got {s2!r}")
            if isinstance(s2, float) and not math.isfinite(s2):
                raise DomainError(f"scaled family needs finite sigma_sq, got {s2!r}")
        if self.kind == GENERAL_KIND and self.sigma is None:
            raise DomainError("general family needs a covariance")

    @classmethod
    def scaled(cls, sigma_sq) -> "HermiteFamily":
        return cls(SCALED_KIND, sigma_sq=sigma_sq)

    @classmethod
    def general(cls, sigma: SpdMatrix) -> "HermiteFamily":
        return cls(GENERAL_KIND, sigma=sigma)


PROBABILISTS = HermiteFamily(PROBABILISTS_KIND)
PHYSICISTS = HermiteFamily(PHYSICISTS_KIND)


def _inverse_variance(family: HermiteFamily):
    if family.kind == PROBABILISTS_KIND:
        return 1
    if family.kind == PHYSICISTS_KIND:
        return 2
    if family.kind == SCALED_KIND:
        s2 = family.sigma_sq
        return Fraction(1) / s2 if is_exact_scalar(s2) else 1.0 / s2
    raise DomainError(f"univariate evaluation undefined for kind {family.kind!r}")


def hermite_uni(family: HermiteFamily, k: int, x):
    """Value of the degree-k univariate polynomial of the given family.

    Uses the recurrence p_{j+1} = b*x*p_j - j*b*p_{j-1} with b the inverse
    variance (1, 2, or 1/sigma_sq).
    """
    if k < 0:
        raise DomainError(f"degree must be >= 0, got {k}")
    if k > MAX_DEGREE:
        raise SizeLimitError(f"degree {k} exceeds cap {MAX_DEGREE}")
    if isinstance(x, float) and not math.isfinite(x):
        raise DomainError(f"non-finite evaluation point {x!r}")
    b = _inverse_variance(family)
    prev, cur = 0, 1
    for j in range(k):
        prev, cur = cur, b * x * cur - j * b * prev
    return cur


def _raise_value(parts, bx, b_rows, memo):
    """Memoized coordinate-raising recurrence; the rightmost positive
    coordinate is lowered first, matching a left-to-right build order."""
    val = memo.get(parts)
    if val is not None:
        return val
    i = len(parts) - 1
    while parts[i] == 0:
        i -= 1
    lowered = parts[:i] + (parts[i] - 1,) + parts[i + 1 :]
    acc = bx[i] * _raise_value(lowered, bx, b_rows, memo)
    row = b_rows[i]
    for j, c in enumerate(lowered):
        if c:
            twice = lowered[:j] + (lowered[j] - 1,) + lowered[j + 1 :]
            acc = acc - c * row[j] * _raise_value(twice, bx, b_rows, memo)
    memo[parts] = acc
    return acc


def _evaluation_state(x: DenseVector, sigma: SpdMatrix):
    if x.dim != sigma.dim:
        raise DimensionMismatchError(
            f"point dim {x.dim} does not match covariance dim {sigma.dim}"
        )
    b = sigma.inverse()
    bx = b.matvec(x).entries
    memo = {(0,) * x.dim: 1}
    return bx, b.data, memo


def hermite_multi(k: MultiIndex | Iterable[int], x: DenseVector, sigma: SpdMatrix):
    """Value of the general multivariate Hermite polynomial at x."""
    k = MultiIndex.of(k)
    if k.arity != x.dim:
        raise DimensionMismatchError(
            f"index arity {k.arity} does not match point dim {x.dim}"
        )
    if k.degree() > MAX_DEGREE:
        raise SizeLimitError(f"total degree {k.degree()} exceeds cap {MAX_DEGREE}")
    bx, b_rows, memo = _evaluation_state(x, sigma)
    return _raise_value(k.parts, bx, b_rows, memo)


def hermite_multi_batch(
    ks: Iterable[MultiIndex | Iterable[int]], x: DenseVector, sigma: SpdMatrix
) -> list:
    """Values of several multivariate Hermite polynomials at one point,
    sharing the recurrence memo across indices."""
    bx, b_rows, memo = _evaluation_state(x, sigma)
    out = []
    for k in ks:
        k = MultiIndex.of(k)
        if k.arity != x.dim:
            raise DimensionMismatchError(
                f"index arity {k.arity} does not match point dim {x.dim}"
            )
        if k.degree() > MAX_DEGREE:
            raise SizeLimitError(
                f"total degree {k.degree()} exceeds cap {MAX_DEGREE}"
            )
        out.append(_raise_value(k.parts, bx, b_rows, memo))
    return out


def hermite_multi_product(
    k: MultiIndex | Iterable[int], x: DenseVector, family: HermiteFamily
):
    """Product-form evaluation for the identity-like families."""
    if family.kind not in (PROBABILISTS_KIND, PHYSICISTS_KIND):
        raise DomainError(
            f"product form requires probabilists or physicists, got {family.kind!r}"
        )
    k = MultiIndex.of(k)
    if k.arity != x.dim:
        raise DimensionMismatchError(
            f"index arity {k.arity} does not match point dim {x.dim}"
        )
    out = 1
    for ki, xi in zip(k.parts, x.entries):
        out = out * hermite_uni(family, ki, xi)
    return out


def gf_partial_sum(
    t: DenseVector, x: DenseVector, sigma: SpdMatrix, degree_cap: int
):
    """Partial sum over all indices of total degree <= degree_cap of
    t^k / k! times the Hermite value at x."""
    if degree_cap < 0:
        raise DomainError(f"degree cap must be >= 0, got {degree_cap}")
    if degree_cap > MAX_GF_DEGREE:
        raise SizeLimitError(
            f"degree cap {degree_cap} exceeds limit {MAX_GF_DEGREE}"
        )
    if t.dim != x.dim:
        raise DimensionMismatchError(
            f"t dim {t.dim} does not match x dim {x.dim}"
        )
    bx, b_rows, memo = _evaluation_state(x, sigma)
    n = x.dim
    total = 0
    for d in range(degree_cap + 1):
        for k in enumerate_fixed_degree(n, d):
            tk = 1
            for ti, ki in zip(t.entries, k.parts):
                if ki:
                    tk = tk * ti**ki
            if tk == 0:
                continue
            h = _raise_value(k.parts, bx, b_rows, memo)
            total = total + Fraction(1, mi_factorial(k)) * tk * h
    return total
