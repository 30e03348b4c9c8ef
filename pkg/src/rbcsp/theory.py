"""Closed-form satisfiability and robustness formulas, evaluated in log space.

The quantities here describe expectations over the random instance model:
the satisfiability threshold for the constraint density r, the probability
that a single constraint tolerates every one-variable repair of a fixed
assignment, its two-variable analogue, the chance that some variable of a
solution admits no repair at all, and first-moment brackets on the expected
number of robust solutions.  Everything is computed with expm1/log1p
chains and compensated summation so the results stay meaningful when
d^n * p^m spans thousands of orders of magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import chain

from .core import DegreeProfile, ParameterError, RBParams

_NEG_INF = float("-inf")


def _check_pdk(p: float, d: int, k: int) -> None:
    if not (math.isfinite(p) and 0.0 < p < 1.0):
        raise ParameterError(f"p must lie strictly in (0, 1), got {p!r}")
    if not isinstance(d, int) or d < 2:
        raise ParameterError(f"d must be an integer >= 2, got {d!r}")
    if not isinstance(k, int) or k < 2:
        raise ParameterError(f"k must be an integer >= 2, got {k!r}")


def threshold(alpha: float, p: float) -> float:
    """Critical constraint density: below it solutions (and robust ones)
    abound, above it the expected count vanishes.  Equals -alpha/ln(p)."""
    if not (math.isfinite(alpha) and alpha > 0):
        raise ParameterError(f"alpha must be finite and > 0, got {alpha!r}")
    if not (math.isfinite(p) and 0.0 < p < 1.0):
        raise ParameterError(f"p must lie strictly in (0, 1), got {p!r}")
    return -alpha / math.log(p)


def _log_q_pow(p: float, exponent: float) -> float:
    # ln(q^exponent) for q = 1 - p
    return exponent * math.log1p(-p)


def repair_sat_prob(p: float, d: int, k: int) -> float:
    """Probability that a constraint over a variable being repaired accepts
    at least one of its candidate tuples: 1 - q^(1+(d-1)(k-1)).

    A one-variable repair exposes the constraint to 1 + (d-1)(k-1) tuples
    (the incumbent plus each alternative value of each other scope
    variable); each is permitted independently with probability p.
    """
    _check_pdk(p, d, k)
    return -math.expm1(_log_q_pow(p, 1 + (d - 1) * (k - 1)))


def pair_repair_sat_prob(p: float, d: int, k: int) -> float:
    """Probability that a constraint accepts the repair tuples of both
    members of a variable pair: 1 - 2q^(1+(d-1)(k-1)) + q^(1+2(d-1)(k-1)).

    Inclusion-exclusion over the two repair events; the joint miss shares
    the incumbent tuple, hence the exponent 1 + 2(d-1)(k-1).
    """
    _check_pdk(p, d, k)
    single_hit = -math.expm1(_log_q_pow(p, 1 + (d - 1) * (k - 1)))
    joint_hit = -math.expm1(_log_q_pow(p, 1 + 2 * (d - 1) * (k - 1)))
    # 1 - 2q^a + q^b rewritten to avoid cancellation near p -> 0
    return 2.0 * single_hit - joint_hit


def _log_repair_sat(p: float, d: int, k: int) -> float:
    # ln rho, stable when rho is within an ulp of 1
    t = math.exp(_log_q_pow(p, 1 + (d - 1) * (k - 1)))
    if t >= 1.0:
        return _NEG_INF
    return math.log1p(-t)


def _log_one_minus_pow(log_rho: float, exponent: float) -> float:
    # ln(1 - rho^exponent); -inf when rho^exponent rounds to 1
    if exponent == 0.0 or log_rho == 0.0:
        return _NEG_INF
    if log_rho == _NEG_INF:
        return 0.0
    t = -math.expm1(exponent * log_rho)
    if t <= 0.0:
        return _NEG_INF
    return math.log(t)


def variable_failure_prob(p: float, d: int, k: int, m_i: float) -> float:
    """Probability that a solution variable appearing in m_i constraints has
    no one-variable repair: (1 - rho^m_i)^(d-1).

    Each of the d-1 alternative values survives all m_i incident
    constraints independently with probability rho^m_i (independence across
    constraints taken as modelled; see the Monte Carlo cross-checks).
    Returns 0 for m_i = 0 and degrades to 0 rather than NaN when rho rounds
    to 1.
    """
    _check_pdk(p, d, k)
    if m_i < 0:
        raise ParameterError(f"m_i must be >= 0, got {m_i!r}")
    if m_i == 0:
        return 0.0
    log_term = _log_one_minus_pow(_log_repair_sat(p, d, k), m_i)
    if log_term == _NEG_INF:
        return 0.0
    return math.exp((d - 1) * log_term)


def log_expected_solutions(params: RBParams) -> float:
    """ln E[#solutions] = n*ln(d) + m*ln(p_hat).

    Exact for the implemented generator by linearity of expectation: each
    of the d^n assignments satisfies the m independent constraints with
    probability p_hat^m, where p_hat is the effective tightness
    (rel_size/d^k in exact mode, p in bernoulli mode).
    """
    return params.n * math.log(params.d) + params.m * params.log_p_hat()


@dataclass(frozen=True)
class MomentReport:
    """Log-space first-moment brackets on the expected number of solutions
    whose variables are all singly repairable.

    log_base is ln E[#solutions]; the corrections bracket
    ln P(every variable repairable | solution) via inclusion-exclusion:
    lower bracket 1 - sum_i (1-rho^m_i)^(d-1), upper bracket adds
    sum_{i<j} (1-rho^min(m_i,m_j))^((d-1)^2) and is clamped by the trivial
    bound 1.  correction_lower is -inf when the lower bracket is
    nonpositive (vacuous at small n).
    """

    log_base: float
    correction_lower: float
    correction_upper: float
    log_lower: float
    log_upper: float
    repair_sat_prob: float


def log_expected_super_bounds(params: RBParams, profile: DegreeProfile) -> MomentReport:
    """Bracket ln E[#(1,0)-robust solutions] for a given degree profile.

    The profile may be fractional (see regular_profile); it must satisfy
    sum(m_i) = k*m.  All summation is compensated; per-term powers are
    evaluated in log space.
    """
    degrees = profile.degrees
    if len(degrees) != params.n:
        raise ParameterError(
            f"profile has {len(degrees)} degrees, params require n={params.n}"
        )
    if any(mi < 0 for mi in degrees):
        raise ParameterError("profile degrees must be >= 0")
    total = math.fsum(degrees)
    expected = params.k * params.m
    if not math.isclose(total, expected, rel_tol=1e-9, abs_tol=1e-9):
        raise ParameterError(
            f"profile degree sum {total} != k*m = {expected}"
        )

    p_hat = params.p_hat
    d, k, n = params.d, params.k, params.n
    log_rho = _log_repair_sat(p_hat, d, k)
    rho = -math.expm1(_log_q_pow(p_hat, 1 + (d - 1) * (k - 1)))

    fail_exp = d - 1
    pair_exp = (d - 1) ** 2

    def term(m_i: float, exponent: int) -> float:
        log_term = _log_one_minus_pow(log_rho, m_i)
        if log_term == _NEG_INF:
            return 0.0
        return math.exp(exponent * log_term)

    fails = [term(m_i, fail_exp) for m_i in degrees]
    sum_fail = math.fsum(fails)
    # sum over i<j of f(min(m_i, m_j)): after ascending sort, the element at
    # position idx is the minimum in exactly (n - 1 - idx) pairs
    ordered = sorted(degrees)
    pair_terms = (
        (n - 1 - idx) * term(m_i, pair_exp) for idx, m_i in enumerate(ordered)
    )
    # net offset of the upper bracket from 1, kept exact by a single fsum so
    # corrections of order 1e-19 survive
    delta_upper = math.fsum(chain(pair_terms, (-f for f in fails)))

    # brackets are 1 - sum_fail and 1 + delta_upper; stay in log1p form
    correction_lower = math.log1p(-sum_fail) if sum_fail < 1.0 else _NEG_INF
    if delta_upper >= 0.0:
        # raw upper bracket exceeds 1: the trivial bound P <= 1 is tighter
        # (and implies the classical factor-2 cap)
        correction_upper = 0.0
    elif delta_upper > -1.0:
        correction_upper = math.log1p(delta_upper)
    else:
        correction_upper = _NEG_INF

    log_base = log_expected_solutions(params)
    return MomentReport(
        log_base=log_base,
        correction_lower=correction_lower,
        correction_upper=correction_upper,
        log_lower=log_base + correction_lower,
        log_upper=log_base + correction_upper,
        repair_sat_prob=rho,
    )
