"""Multiplication-theorem coefficients and full expansions.

Given covariances for both sides and a linear map, the Hermite polynomial
of the mapped argument expands over Hermite polynomials of the original
argument; this module computes the expansion coefficients in full
generality plus the isotropic, inner-product, and univariate reductions.

Conventions fixed here:
  * the linear map has shape m x n so that its transpose sends points in
    R^m to arguments in R^n, with the left index k of arity n;
  * coefficients contract the tensor A^{(.)q} (x) vec(M)^{(x)i} where
    A = Sigma^-1 Lambda^T Upsilon and M = Sigma^-1 Lambda^T Upsilon
    Lambda Sigma^-1 - Sigma^-1;
  * a slot tuple addresses that tensor by consuming the first |q| slots
    in blocks of sizes q_j (block j multiplying column j of A) and the
    remaining 2i slots pairwise, pair (a, b) reading M[b][a].  M is
    symmetric so the pair orientation is immaterial, but it is fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable

from .errors import (
    DimensionMismatchError,
    DomainError,
    ParityError,
    SizeLimitError,
)
from .hermite import (
    PHYSICISTS_KIND,
    PROBABILISTS,
    PROBABILISTS_KIND,
    HermiteFamily,
    hermite_multi_batch,
)
from .multiindex import (
    MultiIndex,
    ascending_tuple,
    enumerate_fixed_degree,
    index_tuples,
    mi_factorial,
    q_support,
)
from .tensorlin import (
    DenseMatrix,
    DenseVector,
    SpdMatrix,
    check_symmetric,
    is_exact_scalar,
)

# Expansion sources above this degree are rejected (factorial contraction cost).
MAX_EXPANSION_DEGREE = 12

# Float-mode expansion terms at or below this relative magnitude are dropped.
ZERO_SUPPRESSION_RTOL = 1e-14

# Relative symmetry tolerance for the float-valued quadratic part.
MAP_SYMMETRY_RTOL = 1e-10


class CoeffVariant(Enum):
    """How the degree-matching step of the derivation is read.

    SYMMETRIZED sums the contraction tensor over every slot tuple with the
    occurrence counts of k and is the correct form.  PAPER_LITERAL reads
    only the single canonical (sorted) slot tuple; it coincides with
    SYMMETRIZED for arity 1 but provably drops terms for arity >= 2, and is
    retained to demonstrate that discrepancy.
    """

    SYMMETRIZED = "symmetrized"
    PAPER_LITERAL = "paper-literal"


@dataclass(frozen=True)
class TransformedMap:
    """The pair (A, M) contracted by the coefficient formula.

    A is n x m, M is n x n and symmetric.
    """

    A: DenseMatrix
    M: DenseMatrix


@dataclass(frozen=True)
class ExpansionTerm:
    q: MultiIndex
    coeff: object


def transformed_map(
    lam: DenseMatrix, sigma: SpdMatrix, upsilon: SpdMatrix
) -> TransformedMap:
    """Build (A, M) from the map and the two covariances."""
    if lam.rows != upsilon.dim or lam.cols != sigma.dim:
        raise DimensionMismatchError(
            f"map shape {lam.rows}x{lam.cols} inconsistent with covariance "
            f"dims {sigma.dim} and {upsilon.dim}"
        )
    return transformed_map_from_inverses(lam, sigma.inverse(), upsilon.matrix)


def transformed_map_from_inverses(
    lam: DenseMatrix, sigma_inv: DenseMatrix, upsilon: DenseMatrix
) -> TransformedMap:
    """Build (A, M) given the already-inverted left covariance.

    Useful when the left covariance is symmetric and invertible but not
    necessarily certified positive definite (the exact-oracle path).
    """
    if lam.rows != upsilon.rows or lam.cols != sigma_inv.rows:
        raise DimensionMismatchError(
            f"map shape {lam.rows}x{lam.cols} inconsistent with matrix dims "
            f"{sigma_inv.rows} and {upsilon.rows}"
        )
    a = sigma_inv.matmul(lam.transpose()).matmul(upsilon)
    m = a.matmul(lam).matmul(sigma_inv).sub(sigma_inv)
    check_symmetric(m, rtol=MAP_SYMMETRY_RTOL)
    return TransformedMap(A=a, M=m)


def _parity_split(k: MultiIndex, q: MultiIndex) -> int:
    kd, qd = k.degree(), q.degree()
    if qd > kd or (kd - qd) % 2:
        raise ParityError(
            f"degrees |k|={kd}, |q|={qd} must satisfy |q| <= |k| with equal parity"
        )
    return (kd - qd) // 2


def _prefactor(k: MultiIndex, q: MultiIndex, i: int) -> Fraction:
    return Fraction(
        mi_factorial(k), (1 << i) * mi_factorial(q) * math.factorial(i)
    )


def _contraction(
    k: MultiIndex, q: MultiIndex, a: DenseMatrix, m: DenseMatrix, variant: CoeffVariant
):
    """Sum of contraction-tensor entries over the slot tuples of k.

    Entries are produced on the fly as products of A and M entries; the
    tensor itself (length n^|k|) is never materialized.
    """
    i = (k.degree() - q.degree()) // 2
    a_cols: list[int] = []
    for j, power in enumerate(q.parts):
        a_cols.extend([j] * power)
    split = len(a_cols)
    if variant is CoeffVariant.SYMMETRIZED:
        tuples = index_tuples(k)
    else:
        tuples = [ascending_tuple(k)]
    a_data = a.data
    m_data = m.data
    total = 0
    for e in tuples:
        prod = 1
        for p in range(split):
            prod = prod * a_data[e[p]][a_cols[p]]
            if prod == 0:
                break
        else:
            for pair in range(i):
                prod = prod * m_data[e[split + 2 * pair + 1]][e[split + 2 * pair]]
                if prod == 0:
                    break
        total = total + prod
    return total


def coeff_from_map(
    k: MultiIndex | Iterable[int],
    q: MultiIndex | Iterable[int],
    tmap: TransformedMap,
    variant: CoeffVariant = CoeffVariant.SYMMETRIZED,
):
    """Expansion coefficient for one (k, q) pair from a prebuilt map."""
    k = MultiIndex.of(k)
    q = MultiIndex.of(q)
    if k.arity != tmap.A.rows or q.arity != tmap.A.cols:
        raise DimensionMismatchError(
            f"arities ({k.arity}, {q.arity}) do not match map shape "
            f"{tmap.A.rows}x{tmap.A.cols}"
        )
    if k.degree() > MAX_EXPANSION_DEGREE:
        raise SizeLimitError(
            f"degree {k.degree()} exceeds cap {MAX_EXPANSION_DEGREE}"
        )
    i = _parity_split(k, q)
    return _prefactor(k, q, i) * _contraction(k, q, tmap.A, tmap.M, variant)


def coeff_general(
    k: MultiIndex | Iterable[int],
    q: MultiIndex | Iterable[int],
    lam: DenseMatrix,
    sigma: SpdMatrix,
    upsilon: SpdMatrix,
    variant: CoeffVariant = CoeffVariant.SYMMETRIZED,
):
    """Expansion coefficient in full generality."""
    return coeff_from_map(k, q, transformed_map(lam, sigma, upsilon), variant)


def _suppress_zeros(terms: list[ExpansionTerm]) -> list[ExpansionTerm]:
    if not terms:
        return terms
    if all(is_exact_scalar(t.coeff) for t in terms):
        return [t for t in terms if t.coeff != 0]
    peak = max(abs(t.coeff) for t in terms)
    if peak == 0:
        return []
    cut = ZERO_SUPPRESSION_RTOL * peak
    return [t for t in terms if abs(t.coeff) > cut]


def expand_general(
    k: MultiIndex | Iterable[int],
    lam: DenseMatrix,
    sigma: SpdMatrix,
    upsilon: SpdMatrix,
    variant: CoeffVariant = CoeffVariant.SYMMETRIZED,
) -> list[ExpansionTerm]:
    """All nonzero expansion terms of one source index, in canonical order
    (descending degree, then descending-lex within a degree)."""
    k = MultiIndex.of(k)
    tmap = transformed_map(lam, sigma, upsilon)
    m = lam.rows
    terms = []
    for d in q_support(k.degree()):
        for q in enumerate_fixed_degree(m, d):
            terms.append(ExpansionTerm(q, coeff_from_map(k, q, tmap, variant)))
    return _suppress_zeros(terms)


def expand_from_map(
    k: MultiIndex | Iterable[int],
    tmap: TransformedMap,
    variant: CoeffVariant = CoeffVariant.SYMMETRIZED,
) -> list[ExpansionTerm]:
    """Expansion terms from a prebuilt map; same ordering as expand_general."""
    k = MultiIndex.of(k)
    m = tmap.A.cols
    terms = []
    for d in q_support(k.degree()):
        for q in enumerate_fixed_degree(m, d):
            terms.append(ExpansionTerm(q, coeff_from_map(k, q, tmap, variant)))
    return _suppress_zeros(terms)


def coeff_isotropic(
    k: MultiIndex | Iterable[int],
    q: MultiIndex | Iterable[int],
    lam: DenseMatrix,
    sigma_sq,
    variant: CoeffVariant = CoeffVariant.SYMMETRIZED,
):
    """Coefficient when both covariances are sigma_sq times the identity.

    Reduces to the pair A = Lambda^T, M0 = Lambda^T Lambda - I with the
    2^i prefactor replaced by (2 sigma_sq)^i; equals coeff_general at
    matching covariances.
    """
    if not sigma_sq > 0:
        raise DomainError(f"sigma_sq must be > 0, got {sigma_sq!r}")
    if isinstance(sigma_sq, float) and not math.isfinite(sigma_sq):
        raise DomainError(f"sigma_sq must be finite, got {sigma_sq!r}")
    k = MultiIndex.of(k)
    q = MultiIndex.of(q)
    if k.arity != lam.cols or q.arity != lam.rows:
        raise DimensionMismatchError(
            f"arities ({k.arity}, {q.arity}) do not match map shape "
            f"{lam.rows}x{lam.cols}"
        )
    if k.degree() > MAX_EXPANSION_DEGREE:
        raise SizeLimitError(
            f"degree {k.degree()} exceeds cap {MAX_EXPANSION_DEGREE}"
        )
    i = _parity_split(k, q)
    a = lam.transpose()
    m0 = a.matmul(lam).sub(DenseMatrix.identity(lam.cols))
    inv_s2 = Fraction(1) / sigma_sq if is_exact_scalar(sigma_sq) else 1.0 / sigma_sq
    return _prefactor(k, q, i) * inv_s2**i * _contraction(k, q, a, m0, variant)


def _vec_coeff(k: int, q: MultiIndex, lam: DenseVector, pair_weight: int):
    if k < 0:
        raise DomainError(f"degree must be >= 0, got {k}")
    if q.arity != lam.dim:
        raise DimensionMismatchError(
            f"index arity {q.arity} does not match vector dim {lam.dim}"
        )
    qd = q.degree()
    if qd > k or (k - qd) % 2:
        raise ParityError(
            f"degrees k={k}, |q|={qd} must satisfy |q| <= k with equal parity"
        )
    i = (k - qd) // 2
    pref = Fraction(
        math.factorial(k), pair_weight**i * mi_factorial(q) * math.factorial(i)
    )
    lam_q = 1
    for lj, qj in zip(lam.entries, q.parts):
        if qj:
            lam_q = lam_q * lj**qj
    norm_sq = sum(lj * lj for lj in lam.entries)
    return pref * lam_q * (norm_sq - 1) ** i


def coeff_vec_prob(k: int, q: MultiIndex | Iterable[int], lam: DenseVector):
    """Inner-product expansion coefficient, probabilists' family."""
    return _vec_coeff(k, MultiIndex.of(q), lam, 2)


def coeff_vec_phys(k: int, q: MultiIndex | Iterable[int], lam: DenseVector):
    """Inner-product expansion coefficient, physicists' family."""
    return _vec_coeff(k, MultiIndex.of(q), lam, 1)


def coeff_univariate(k: int, i: int, lam, family: HermiteFamily = PROBABILISTS):
    """Coefficient of the degree k-2i term in the univariate multiplication
    identity for the scaled argument lam * x."""
    if family.kind == PROBABILISTS_KIND:
        pair_weight = 2
    elif family.kind == PHYSICISTS_KIND:
        pair_weight = 1
    else:
        raise DomainError(
            f"univariate coefficients need probabilists or physicists, "
            f"got {family.kind!r}"
        )
    if k < 0:
        raise DomainError(f"degree must be >= 0, got {k}")
    if i < 0 or 2 * i > k:
        raise DomainError(f"term index i={i} out of range for degree {k}")
    pref = Fraction(
        math.factorial(k),
        pair_weight**i * math.factorial(i) * math.factorial(k - 2 * i),
    )
    return pref * (lam * lam - 1) ** i * lam ** (k - 2 * i)


def evaluate_expansion(
    terms: Iterable[ExpansionTerm], x: DenseVector, upsilon: SpdMatrix
):
    """Right-hand-side value sum(coeff * H_q(x)) in the given term order."""
    terms = list(terms)
    values = hermite_multi_batch([t.q for t in terms], x, upsilon)
    total = 0
    for t, h in zip(terms, values):
        total = total + t.coeff * h
    return total
