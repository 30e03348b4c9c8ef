"""Seeded Monte Carlo experiments for the closed-form repair probabilities.

Each experiment is a pure function of its arguments: trial t draws from the
substream mix(seed, tag, t), so results are reproducible under any worker
partition, and all aggregation happens in exact integer tallies before a
single final division.  The experiments deliberately re-derive their events
from first principles (bit draws, exhaustive repair search) rather than via
the closed forms they are testing.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .core import (
    BERNOULLI,
    Instance,
    ParameterError,
    RBParams,
    ResourceBudgetError,
    STREAM_POINT,
    STREAM_SCOPE,
    STREAM_TRIAL,
    _sample_scope,
    generate_with_resamples,
)
from .fileio import fmt_real
from .rng import MASK64, SplitMix64, bernoulli_threshold, mix
from .search import count_all
from .theory import repair_sat_prob, variable_failure_prob

# elementary bernoulli draws allowed per experiment
_DRAW_BUDGET = 2 * 10**9


@dataclass(frozen=True)
class MCEstimate:
    """Sample mean with its standard error and the seed that produced it.

    resamples counts bernoulli relations redrawn for being empty or full
    (zero for experiments whose sampling law never rejects).
    """

    mean: float
    stderr: float
    trials: int
    seed: int
    resamples: int

    def __post_init__(self):
        if self.trials < 1:
            raise ParameterError(f"trials must be >= 1, got {self.trials}")
        if not self.stderr >= 0.0:
            raise ParameterError(f"stderr must be >= 0, got {self.stderr}")


def _binomial_estimate(successes: int, trials: int, seed: int, resamples: int = 0) -> MCEstimate:
    mean = successes / trials
    stderr = math.sqrt(mean * (1.0 - mean) / trials)
    return MCEstimate(mean=mean, stderr=stderr, trials=trials, seed=seed, resamples=resamples)


def _count_estimate(total: int, total_sq: int, trials: int, seed: int, resamples: int = 0) -> MCEstimate:
    mean = total / trials
    if trials > 1:
        # sample variance from exact integer tallies, clipped against
        # cancellation noise
        var = (total_sq - total * total / trials) / (trials - 1)
        stderr = math.sqrt(max(var, 0.0) / trials)
    else:
        stderr = 0.0
    return MCEstimate(mean=mean, stderr=stderr, trials=trials, seed=seed, resamples=resamples)


def _check_common(p: float, d: int, k: int, trials: int, seed: int, min_trials: int) -> None:
    if not (math.isfinite(p) and 0.0 < p < 1.0):
        raise ParameterError(f"p must lie strictly in (0, 1), got {p!r}")
    if d < 2:
        raise ParameterError(f"d must be >= 2, got {d}")
    if k < 2:
        raise ParameterError(f"k must be >= 2, got {k}")
    if trials < min_trials:
        raise ParameterError(f"trials must be >= {min_trials}, got {trials}")
    if not 0 <= seed <= MASK64:
        raise ParameterError(f"seed must be an unsigned 64-bit integer, got {seed}")


def mc_repair_prob(
    which: int, p: float, d: int, k: int, trials: int, seed: int
) -> MCEstimate:
    """Estimate a per-constraint repair probability by direct simulation.

    which=1: a constraint scope sees 1+(d-1)(k-1) candidate repair tuples
    (a fixed repair value for the repaired variable, every other scope
    variable allowed one move); each is permitted independently with
    probability p; success iff any is permitted.  The mean estimates
    repair_sat_prob.

    which=2: two repaired variables in a shared scope; their candidate
    families overlap in exactly one tuple (both moved, everyone else held).
    Success iff both families are hit; the mean estimates
    pair_repair_sat_prob.
    """
    if which not in (1, 2):
        raise ParameterError(f"which must be 1 or 2, got {which!r}")
    _check_common(p, d, k, trials, seed, min_trials=1000)
    family = 1 + (d - 1) * (k - 1)
    if trials * (2 * family - 1) > _DRAW_BUDGET:
        raise ResourceBudgetError(
            f"{trials} trials x {family}-tuple families exceed the draw budget"
        )
    threshold = bernoulli_threshold(p)
    successes = 0
    for t in range(trials):
        rng = SplitMix64(mix(seed, STREAM_TRIAL, t))
        if which == 1:
            hit = False
            for _ in range(family):
                if rng.chance(threshold):
                    hit = True
                    break
            successes += hit
        else:
            shared = rng.chance(threshold)
            if shared:
                successes += 1
                continue
            first = False
            for _ in range(family - 1):
                if rng.chance(threshold):
                    first = True
                    break
            if not first:
                continue
            for _ in range(family - 1):
                if rng.chance(threshold):
                    successes += 1
                    break
    return _binomial_estimate(successes, trials, seed)


@dataclass(frozen=True)
class RepairBoundsResult:
    """Empirical probability that every variable of the pinned solution is
    repairable, next to the closed-form brackets for the same hypergraph."""

    empirical: MCEstimate
    lower: float
    upper: float


def mc_repair_bounds(
    n: int, k: int, d: int, m: int, p: float, trials: int, seed: int
) -> RepairBoundsResult:
    """Test the first-moment brackets on one fixed random hypergraph.

    The scopes are drawn once from the seed; the pinned assignment sigma is
    all-zeros.  Each trial samples every relation conditioned on accepting
    sigma (sigma's tuple forced in, all other tuples present independently
    with probability p — the exact conditional law, no rejection), then
    checks by exhaustive search whether every variable admits a repair
    moving itself and at most one neighbour.  The brackets come from the
    hypergraph's actual degree profile: lower = 1 - sum_i fail(m_i), upper
    adds the pairwise min-degree terms, both clipped to [0, 1].
    """
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}")
    if not 2 <= k <= n:
        raise ParameterError(f"k must satisfy 2 <= k <= n, got {k}")
    if m < 1:
        raise ParameterError(f"m must be >= 1, got {m}")
    _check_common(p, d, k, trials, seed, min_trials=1)
    space = d**k
    if trials * m * (space - 1) > _DRAW_BUDGET:
        raise ResourceBudgetError(
            f"{trials} trials x {m} relations of {space} tuples exceed the draw budget"
        )

    scopes = [
        _sample_scope(n, k, SplitMix64(mix(seed, STREAM_SCOPE, ci))) for ci in range(m)
    ]
    by_var: list[list[int]] = [[] for _ in range(n)]
    neighbors: list[set[int]] = [set() for _ in range(n)]
    for ci, scope in enumerate(scopes):
        for a in scope:
            by_var[a].append(ci)
            for b in scope:
                if b != a:
                    neighbors[a].add(b)
    neighbor_list = [sorted(s) for s in neighbors]
    # weight of each scope position in the big-endian tuple code
    weight = [
        {v: d ** (k - 1 - pos) for pos, v in enumerate(scope)} for scope in scopes
    ]

    threshold = bernoulli_threshold(p)
    successes = 0
    for t in range(trials):
        rng = SplitMix64(mix(seed, STREAM_TRIAL, t))
        rels: list[set[int]] = []
        for _ in range(m):
            rel = {0}
            for code in range(1, space):
                if rng.chance(threshold):
                    rel.add(code)
            rels.append(rel)

        def repairable(i: int) -> bool:
            cis = by_var[i]
            if not cis:
                return True
            for y in range(1, d):
                if all(y * weight[ci][i] in rels[ci] for ci in cis):
                    return True
                for j in neighbor_list[i]:
                    cjs = [cj for cj in by_var[j] if cj not in cis]
                    for z in range(1, d):
                        ok = all(
                            y * weight[ci][i] + z * weight[ci].get(j, 0) in rels[ci]
                            for ci in cis
                        ) and all(z * weight[cj][j] in rels[cj] for cj in cjs)
                        if ok:
                            return True
            return False

        successes += all(repairable(i) for i in range(n))

    degrees = [len(by_var[i]) for i in range(n)]
    fail_sum = math.fsum(variable_failure_prob(p, d, k, mi) for mi in degrees)
    pair_exp = d - 1
    ordered = sorted(degrees)
    pair_sum = math.fsum(
        (n - 1 - idx) * variable_failure_prob(p, d, k, mi) ** pair_exp
        for idx, mi in enumerate(ordered)
    )
    raw_lower = 1.0 - fail_sum
    lower = max(0.0, raw_lower)
    upper = min(1.0, raw_lower + pair_sum)
    return RepairBoundsResult(
        empirical=_binomial_estimate(successes, trials, seed),
        lower=lower,
        upper=upper,
    )


@dataclass(frozen=True)
class ExpectedCounts:
    """Monte Carlo means of the exact per-instance enumeration counts."""

    mean_solutions: MCEstimate
    mean_super11: MCEstimate
    mean_super10: MCEstimate


def _expected_counts_chunk(
    params: RBParams, seed_parts: tuple[int, ...], t_start: int, t_stop: int
) -> tuple[int, int, int, int, int, int, int, int, int, int]:
    sum_sol = sq_sol = sum_s10 = sq_s10 = sum_s11 = sq_s11 = 0
    any_sat = any_s10 = any_s11 = resamples = 0
    for t in range(t_start, t_stop):
        inst, redraws = generate_with_resamples(params, mix(*seed_parts, t))
        resamples += redraws
        rep = count_all(inst)
        sum_sol += rep.n_solutions
        sq_sol += rep.n_solutions**2
        sum_s10 += rep.n_super10
        sq_s10 += rep.n_super10**2
        sum_s11 += rep.n_super11
        sq_s11 += rep.n_super11**2
        any_sat += rep.n_solutions > 0
        any_s10 += rep.n_super10 > 0
        any_s11 += rep.n_super11 > 0
    return (sum_sol, sq_sol, sum_s10, sq_s10, sum_s11, sq_s11, any_sat, any_s10, any_s11, resamples)


def _run_chunks(
    params: RBParams, seed_parts: tuple[int, ...], trials: int, workers: int
) -> tuple[int, ...]:
    """Integer tallies over all trials; identical for every worker count."""
    if workers < 1:
        raise ParameterError(f"workers must be >= 1, got {workers}")
    if workers == 1 or trials < 64:
        chunks = [_expected_counts_chunk(params, seed_parts, 0, trials)]
    else:
        chunk = -(-trials // workers)
        starts = list(range(0, trials, chunk))
        stops = [min(s + chunk, trials) for s in starts]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(
                pool.map(
                    _expected_counts_chunk,
                    [params] * len(starts),
                    [seed_parts] * len(starts),
                    starts,
                    stops,
                )
            )
    return tuple(sum(col) for col in zip(*chunks))


def mc_expected_counts(
    params: RBParams, trials: int, seed: int, workers: int = 1
) -> ExpectedCounts:
    """Average the exact enumeration counts over freshly generated instances.

    mean_solutions is an unbiased estimate of exp(log_expected_solutions);
    the counting per trial is exhaustive, so d^n must stay desk-scale.
    """
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    if not 0 <= seed <= MASK64:
        raise ParameterError(f"seed must be an unsigned 64-bit integer, got {seed}")
    tallies = _run_chunks(params, (seed, STREAM_TRIAL), trials, workers)
    (sum_sol, sq_sol, sum_s10, sq_s10, sum_s11, sq_s11, _, _, _, resamples) = tallies
    return ExpectedCounts(
        mean_solutions=_count_estimate(sum_sol, sq_sol, trials, seed, resamples),
        mean_super11=_count_estimate(sum_s11, sq_s11, trials, seed, resamples),
        mean_super10=_count_estimate(sum_s10, sq_s10, trials, seed, resamples),
    )


@dataclass(frozen=True)
class SweepRow:
    """One grid point of a density sweep: fractions of satisfiable /
    robust-solvable instances and mean counts, with a standard error on the
    pair-repairable mean."""

    r: float
    n: int
    k: int
    alpha: float
    p: float
    trials: int
    frac_sat: float
    frac_super11: float
    frac_super10: float
    mean_solutions: float
    mean_super11: float
    stderr_super11: float


SWEEP_COLUMNS = (
    "r",
    "n",
    "k",
    "alpha",
    "p",
    "trials",
    "frac_sat",
    "frac_super11",
    "frac_super10",
    "mean_solutions",
    "mean_super11",
    "stderr_super11",
)


def sweep(
    n: int,
    k: int,
    alpha: float,
    p: float,
    r_from: float,
    r_to: float,
    steps: int,
    trials: int,
    seed: int,
    mode: str = "exact",
    workers: int = 1,
) -> list[SweepRow]:
    """Sample the model across an evenly spaced grid of densities r.

    Each grid point generates `trials` instances from its own substream and
    enumerates them exactly.  Deterministic for fixed arguments, for any
    worker count.
    """
    if steps < 1:
        raise ParameterError(f"steps must be >= 1, got {steps}")
    if not (math.isfinite(r_from) and math.isfinite(r_to) and 0.0 < r_from <= r_to):
        raise ParameterError(f"need 0 < r_from <= r_to, got [{r_from}, {r_to}]")
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    if not 0 <= seed <= MASK64:
        raise ParameterError(f"seed must be an unsigned 64-bit integer, got {seed}")

    from .core import derive_params  # local to avoid a cycle at import time

    rows = []
    for pt in range(steps):
        if steps == 1:
            r = r_from
        else:
            r = r_from + pt * (r_to - r_from) / (steps - 1)
        try:
            params = derive_params(n, k, alpha, r, p, mode)
            tallies = _run_chunks(params, (seed, STREAM_POINT, pt), trials, workers)
        except ResourceBudgetError as exc:
            raise ResourceBudgetError(f"sweep point r={fmt_real(r)}: {exc}") from exc
        (sum_sol, _, sum_s10, _, sum_s11, sq_s11, any_sat, any_s10, any_s11, _) = tallies
        est_s11 = _count_estimate(sum_s11, sq_s11, trials, seed)
        rows.append(
            SweepRow(
                r=r,
                n=n,
                k=k,
                alpha=alpha,
                p=p,
                trials=trials,
                frac_sat=any_sat / trials,
                frac_super11=any_s11 / trials,
                frac_super10=any_s10 / trials,
                mean_solutions=sum_sol / trials,
                mean_super11=est_s11.mean,
                stderr_super11=est_s11.stderr,
            )
        )
    return rows


def render_sweep_csv(rows: list[SweepRow]) -> str:
    """CSV text for a sweep: header plus one row per grid point, LF line
    endings, reals at 17 significant digits."""
    lines = [",".join(SWEEP_COLUMNS)]
    for row in rows:
        lines.append(
            ",".join(
                (
                    fmt_real(row.r),
                    str(row.n),
                    str(row.k),
                    fmt_real(row.alpha),
                    fmt_real(row.p),
                    str(row.trials),
                    fmt_real(row.frac_sat),
                    fmt_real(row.frac_super11),
                    fmt_real(row.frac_super10),
                    fmt_real(row.mean_solutions),
                    fmt_real(row.mean_super11),
                    fmt_real(row.stderr_super11),
                )
            )
        )
    return "\n".join(lines) + "\n"
