"""Randomized and exhaustive verification of the expansion identities.

Each suite draws every trial's inputs from its own counter-based stream, so
reports depend only on the seed, never on execution order.  Failures are
data: suites count them and record the worst trial instead of raising.

Per-trial error functions take plain JSON-friendly inputs (nested lists of
floats), so any report's worst case can be replayed directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import coeffs
from .coeffs import CoeffVariant
from .errors import DomainError, SizeLimitError
from .hermite import (
    PHYSICISTS,
    PROBABILISTS,
    HermiteFamily,
    hermite_multi,
    hermite_uni,
    gf_partial_sum,
)
from .multiindex import MultiIndex, enumerate_fixed_degree, q_support
from .tensorlin import (
    DenseMatrix,
    DenseVector,
    colwise_kron_power,
    kron_power,
    spd_factorize,
)

RNG_NAME = "philox4x64"

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class TrialConfig:
    """Inputs controlling one randomized verification run."""

    seed: int
    trials: int = 100
    n_max: int = 3
    m_max: int = 3
    k_max: int = 5
    tol_rel: float = 1e-8
    entry_range: tuple[float, float] = (-2.0, 2.0)

    def __post_init__(self) -> None:
        if self.seed < 0:
            raise DomainError("seed must be a natural")
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        if not self.tol_rel > 0:
            raise DomainError("tol_rel must be > 0")
        if not self.entry_range[0] < self.entry_range[1]:
            raise DomainError("entry_range must be a nonempty interval")


@dataclass
class VerifyReport:
    """Aggregated outcome of one suite run."""

    checks_run: int
    failures: int
    max_rel_err: float
    worst_case: dict | None
    rng: str
    seed: int

    def to_json_obj(self) -> dict:
        return {
            "checks_run": self.checks_run,
            "failures": self.failures,
            "max_rel_err": self.max_rel_err,
            "worst_case": self.worst_case,
            "rng": self.rng,
            "seed": self.seed,
        }


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent per-trial stream: Philox keyed by (seed, trial)."""
    return np.random.Generator(
        np.random.Philox(key=[seed & _MASK64, trial & _MASK64])
    )


def _uniform_rows(rng, rows: int, cols: int, lo: float, hi: float) -> list[list[float]]:
    return rng.uniform(lo, hi, size=(rows, cols)).tolist()


def _uniform_list(rng, dim: int, lo: float, hi: float) -> list[float]:
    return rng.uniform(lo, hi, size=dim).tolist()


def _spd_rows(rng, dim: int, lo: float, hi: float) -> list[list[float]]:
    """Q^T Q + I for uniform Q: symmetric, positive definite, moderate
    condition number."""
    q = DenseMatrix.from_rows(_uniform_rows(rng, dim, dim, lo, hi))
    return q.transpose().matmul(q).add(DenseMatrix.identity(dim)).to_lists()


def _draw_multiindex(rng, arity: int, k_max: int) -> MultiIndex:
    degree = int(rng.integers(0, k_max + 1))
    choices = enumerate_fixed_degree(arity, degree)
    return choices[int(rng.integers(0, len(choices)))]


class _Aggregator:
    """Shared counting/worst-case bookkeeping for all suites."""

    def __init__(self, tol: float):
        self.tol = tol
        self.checks = 0
        self.failures = 0
        self.max_err = 0.0
        self.worst: dict | None = None

    def record(self, err: float, inputs: dict) -> None:
        self.checks += 1
        if not err <= self.tol:
            self.failures += 1
        if self.worst is None or err > self.max_err:
            self.max_err = err
            self.worst = dict(inputs, rel_err=err)

    def record_exact(self, ok: bool, inputs: dict) -> None:
        self.record(0.0 if ok else 1.0, inputs)

    def report(self, seed: int, rng_name: str = RNG_NAME) -> VerifyReport:
        return VerifyReport(
            checks_run=self.checks,
            failures=self.failures,
            max_rel_err=self.max_err,
            worst_case=self.worst,
            rng=rng_name,
            seed=seed,
        )


def _guarded_rel_err(lhs: float, rhs: float, abs_term_sum: float) -> float:
    den = max(1.0, abs(lhs), abs_term_sum)
    return abs(lhs - rhs) / den


def main_identity_error(
    k: list[int],
    lam: list[list[float]],
    sigma: list[list[float]],
    upsilon: list[list[float]],
    x: list[float],
    variant: CoeffVariant = CoeffVariant.SYMMETRIZED,
) -> float:
    """Relative discrepancy of one instance of the main expansion identity,
    with the cancellation-guarded denominator."""
    ki = MultiIndex.of(k)
    lam_m = DenseMatrix.from_rows(lam)
    sig = spd_factorize(DenseMatrix.from_rows(sigma))
    ups = spd_factorize(DenseMatrix.from_rows(upsilon))
    xv = DenseVector.from_entries(x)
    lhs = hermite_multi(ki, lam_m.transpose().matvec(xv), sig)
    rhs = 0.0
    abs_sum = 0.0
    for term in coeffs.expand_general(ki, lam_m, sig, ups, variant):
        contrib = term.coeff * hermite_multi(term.q, xv, ups)
        rhs += contrib
        abs_sum += abs(contrib)
    return _guarded_rel_err(lhs, rhs, abs_sum)


def verify_main_identity(
    cfg: TrialConfig, variant: CoeffVariant = CoeffVariant.SYMMETRIZED
) -> VerifyReport:
    agg = _Aggregator(cfg.tol_rel)
    lo, hi = cfg.entry_range
    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, trial)
        n = int(rng.integers(1, cfg.n_max + 1))
        m = int(rng.integers(1, cfg.m_max + 1))
        k = _draw_multiindex(rng, n, cfg.k_max)
        inputs = {
            "trial": trial,
            "k": k.to_list(),
            "Lambda": _uniform_rows(rng, m, n, lo, hi),
            "Sigma": _spd_rows(rng, n, lo, hi),
            "Upsilon": _spd_rows(rng, m, lo, hi),
            "x": _uniform_list(rng, m, lo, hi),
            "variant": variant.value,
        }
        err = main_identity_error(
            inputs["k"], inputs["Lambda"], inputs["Sigma"], inputs["Upsilon"],
            inputs["x"], variant,
        )
        agg.record(err, inputs)
    return agg.report(cfg.seed)


GF_DEGREE = 10


def gf_error(t: list[float], x: list[float], sigma: list[list[float]]) -> float:
    """Absolute gap between the degree-10 partial sum and the closed-form
    exponential."""
    sig = spd_factorize(DenseMatrix.from_rows(sigma))
    tv = DenseVector.from_entries(t)
    xv = DenseVector.from_entries(x)
    partial = gf_partial_sum(tv, xv, sig, GF_DEGREE)
    inv = sig.inverse()
    exponent = tv.dot(inv.matvec(xv)) - 0.5 * tv.dot(inv.matvec(tv))
    return abs(partial - math.exp(exponent))


def verify_generating_function(cfg: TrialConfig) -> VerifyReport:
    agg = _Aggregator(cfg.tol_rel)
    lo, hi = cfg.entry_range
    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, trial)
        n = int(rng.integers(1, min(cfg.n_max, 3) + 1))
        scale_t = 0.1 / math.sqrt(n)
        scale_x = 1.0 / math.sqrt(n)
        inputs = {
            "trial": trial,
            "t": [scale_t * v for v in _uniform_list(rng, n, -1.0, 1.0)],
            "x": [scale_x * v for v in _uniform_list(rng, n, -1.0, 1.0)],
            "Sigma": _spd_rows(rng, n, lo, hi),
        }
        err = gf_error(inputs["t"], inputs["x"], inputs["Sigma"])
        agg.record(err, inputs)
    return agg.report(cfg.seed)


def kron_identity_error(a: list[list[float]], b: list[float], k: list[int]) -> float:
    """Relative gap between the componentwise power of A^T b and the
    columnwise-Kronecker-power contraction."""
    am = DenseMatrix.from_rows(a)
    bv = DenseVector.from_entries(b)
    ki = MultiIndex.of(k)
    atb = am.transpose().matvec(bv)
    lhs = 1.0
    for v, e in zip(atb.entries, ki.parts):
        lhs *= v**e
    rhs = colwise_kron_power(am, ki).dot(kron_power(bv, ki.degree()))
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


def kron_identity_exact(a_num: list[list[int]], b_num: list[int], den: int, k: list[int]) -> bool:
    """Exact-field check of the same identity at rational inputs."""
    d = Fraction(1, den)
    am = DenseMatrix.from_rows([[v * d for v in row] for row in a_num])
    bv = DenseVector.from_entries([v * d for v in b_num])
    ki = MultiIndex.of(k)
    atb = am.transpose().matvec(bv)
    lhs = Fraction(1)
    for v, e in zip(atb.entries, ki.parts):
        lhs *= v**e
    rhs = colwise_kron_power(am, ki).dot(kron_power(bv, ki.degree()))
    return lhs == rhs


def verify_kron_identity(cfg: TrialConfig) -> VerifyReport:
    agg = _Aggregator(cfg.tol_rel)
    lo, hi = cfg.entry_range
    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, trial)
        rows = int(rng.integers(1, 5))
        cols = int(rng.integers(1, 5))
        k = _draw_multiindex(rng, cols, min(cfg.k_max, 4))
        inputs = {
            "trial": trial,
            "A": _uniform_rows(rng, rows, cols, lo, hi),
            "b": _uniform_list(rng, rows, lo, hi),
            "k": k.to_list(),
        }
        agg.record(
            kron_identity_error(inputs["A"], inputs["b"], inputs["k"]), inputs
        )
        a_num = [[int(v) for v in row] for row in rng.integers(-4, 5, size=(rows, cols))]
        b_num = [int(v) for v in rng.integers(-4, 5, size=rows)]
        den = int(rng.integers(1, 4))
        exact_inputs = {
            "trial": trial,
            "A_num": a_num,
            "b_num": b_num,
            "den": den,
            "k": k.to_list(),
        }
        agg.record_exact(
            kron_identity_exact(a_num, b_num, den, inputs["k"]), exact_inputs
        )
    return agg.report(cfg.seed)


def verify_selector_orthonormality(n: int, total_degree: int) -> VerifyReport:
    """Pairwise inner products of the identity's columnwise Kronecker
    powers at one fixed degree; exact 0/1 arithmetic throughout."""
    if n > 3 or total_degree > 4:
        raise SizeLimitError(
            f"selector check capped at n <= 3, degree <= 4, got ({n}, {total_degree})"
        )
    agg = _Aggregator(tol=0.5)
    eye = DenseMatrix.identity(n)
    ks = enumerate_fixed_degree(n, total_degree)
    selectors = [colwise_kron_power(eye, k) for k in ks]
    for a in range(len(ks)):
        for b in range(a, len(ks)):
            expected = 1 if a == b else 0
            dev = abs(selectors[a].dot(selectors[b]) - expected)
            agg.record(
                float(dev),
                {
                    "n": n,
                    "degree": total_degree,
                    "k_a": ks[a].to_list(),
                    "k_b": ks[b].to_list(),
                },
            )
    return agg.report(seed=0, rng_name="none")


def univariate_identity_error(
    family: HermiteFamily, k: int, lam: float, xs: list[float]
) -> float:
    """Worst guarded relative error of the univariate multiplication
    identity over the grid xs."""
    worst = 0.0
    for x in xs:
        lhs = hermite_uni(family, k, lam * x)
        rhs = 0.0
        abs_sum = 0.0
        for i in range(k // 2 + 1):
            contrib = coeffs.coeff_univariate(k, i, lam, family) * hermite_uni(
                family, k - 2 * i, x
            )
            rhs += contrib
            abs_sum += abs(contrib)
        worst = max(worst, _guarded_rel_err(lhs, rhs, abs_sum))
    return worst


def inner_product_error(
    family: HermiteFamily, k: int, lam: list[float], x: list[float]
) -> float:
    """Guarded relative error of the inner-product expansion identity at
    one point."""
    lam_v = DenseVector.from_entries(lam)
    x_v = DenseVector.from_entries(x)
    coeff_fn = (
        coeffs.coeff_vec_prob
        if family.kind == PROBABILISTS.kind
        else coeffs.coeff_vec_phys
    )
    lhs = hermite_uni(family, k, lam_v.dot(x_v))
    rhs = 0.0
    abs_sum = 0.0
    for d in q_support(k):
        for q in enumerate_fixed_degree(lam_v.dim, d):
            t = coeff_fn(k, q, lam_v)
            if t == 0:
                continue
            prod = 1.0
            for qj, xj in zip(q.parts, x):
                prod *= hermite_uni(family, qj, xj)
            contrib = t * prod
            rhs += contrib
            abs_sum += abs(contrib)
    return _guarded_rel_err(lhs, rhs, abs_sum)


_UNIVARIATE_GRID = [round(-3.0 + 0.3 * j, 10) for j in range(21)]

_HALF = Fraction(1, 2)


def _coeff_chain_exact(k: int, lam: Fraction, m: int, q: MultiIndex) -> bool:
    """Exact agreement of the univariate, inner-product, and general
    coefficient routes for one (k, q, lam) at both base families."""
    lam_vec = DenseVector.from_entries([lam] * m)
    lam_mat = DenseMatrix(m, 1, tuple((lam,) for _ in range(m)))
    eye1 = spd_factorize(DenseMatrix.identity(1))
    eye_m = spd_factorize(DenseMatrix.identity(m))
    half1 = spd_factorize(DenseMatrix(1, 1, ((_HALF,),)))
    half_m = spd_factorize(
        DenseMatrix(m, m, tuple(
            tuple(_HALF if i == j else Fraction(0) for j in range(m))
            for i in range(m)
        ))
    )
    vec_prob = coeffs.coeff_vec_prob(k, q, lam_vec)
    vec_phys = coeffs.coeff_vec_phys(k, q, lam_vec)
    gen_prob = coeffs.coeff_general((k,), q, lam_mat, eye1, eye_m)
    gen_phys = coeffs.coeff_general((k,), q, lam_mat, half1, half_m)
    ok = vec_prob == gen_prob and vec_phys == gen_phys
    if m == 1:
        i = (k - q.degree()) // 2
        ok = ok and vec_prob == coeffs.coeff_univariate(k, i, lam, PROBABILISTS)
        ok = ok and vec_phys == coeffs.coeff_univariate(k, i, lam, PHYSICISTS)
    return ok


def verify_univariate_closed_forms(cfg: TrialConfig) -> VerifyReport:
    """Multiplication identity for scalar and inner-product arguments, plus
    exact agreement of every coefficient specialization."""
    agg = _Aggregator(cfg.tol_rel)
    lo, hi = cfg.entry_range
    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, trial)
        k = int(rng.integers(0, min(cfg.k_max, 12) + 1))
        lam = float(rng.uniform(lo, hi))
        for family, name in ((PROBABILISTS, "he"), (PHYSICISTS, "h")):
            err = univariate_identity_error(family, k, lam, _UNIVARIATE_GRID)
            agg.record(
                err,
                {"trial": trial, "check": "scalar", "family": name, "k": k,
                 "lam": lam},
            )
        m = int(rng.integers(1, cfg.m_max + 1))
        k_ip = int(rng.integers(0, min(cfg.k_max, 8) + 1))
        lam_vec = _uniform_list(rng, m, lo, hi)
        x_vec = _uniform_list(rng, m, lo, hi)
        for family, name in ((PROBABILISTS, "he"), (PHYSICISTS, "h")):
            err = inner_product_error(family, k_ip, lam_vec, x_vec)
            agg.record(
                err,
                {"trial": trial, "check": "inner-product", "family": name,
                 "k": k_ip, "lam": lam_vec, "x": x_vec},
            )
        lam_exact = Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4)))
        degrees = q_support(k_ip)
        degree = degrees[int(rng.integers(0, len(degrees)))]
        qs = enumerate_fixed_degree(m, degree)
        q = qs[int(rng.integers(0, len(qs)))]
        ok = _coeff_chain_exact(k_ip, lam_exact, m, q)
        agg.record_exact(
            ok,
            {"trial": trial, "check": "coeff-chain", "k": k_ip,
             "lam": str(lam_exact), "q": q.to_list()},
        )
    return agg.report(cfg.seed)
