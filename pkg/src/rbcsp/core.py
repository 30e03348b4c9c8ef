"""Model RB core: parameters, instance generation, checking, and repairs.

Model RB draws m = r*n*ln(n) constraints over n variables with a domain
that grows with the problem size, d = n^alpha.  Each constraint restricts
k distinct variables to a set of satisfying value tuples; the tightness p
is the fraction of tuples a constraint permits.  A solution is robust at
level (1,0) if every variable can be reassigned to another solution on its
own, and at level (1,1) if at most one extra variable may move with it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .rng import MASK64, SplitMix64, bernoulli_threshold, mix

EXACT = "exact"
BERNOULLI = "bernoulli"
MODES = (EXACT, BERNOULLI)

# exact mode tabulates relations as subsets of [0, d^k)
MAX_EXACT_SPACE = 1 << 48

# substream tags (see rng.mix)
STREAM_SCOPE = 0x5343
STREAM_RELATION = 0x5245
STREAM_TRIAL = 0x5452
STREAM_POINT = 0x504F

# safety valve for the empty/full resampling loop in bernoulli mode
_MAX_RELATION_RESAMPLES = 10**6

Assignment = tuple  # length-n tuple of domain values in [0, d)


class ParameterError(ValueError):
    """A model parameter is outside its documented range."""


class ExactSpaceError(ParameterError):
    """d^k is too large to tabulate relations; bernoulli mode has no such limit."""


class NotASolutionError(ValueError):
    """Repair queries are only defined for satisfying assignments."""


class ResourceBudgetError(RuntimeError):
    """An enumeration or sampling loop exceeded its configured budget."""


def _round_half_away(x: float) -> int:
    # positive inputs only; Python's round() would go to even
    return int(math.floor(x + 0.5))


def _derived(n: int, k: int, alpha: float, r: float, p: float) -> tuple[int, int, int]:
    d = max(2, _round_half_away(n**alpha))
    m = max(1, _round_half_away(r * n * math.log(n)))
    space = d**k
    if space <= 2**53:
        rel = _round_half_away(p * space)
    else:
        # space overflows float precision; scale p by 2^64 in integer arithmetic
        rel = (int(p * float(1 << 64)) * space) >> 64
    rel_size = min(max(rel, 1), space - 1)
    return d, m, rel_size


@dataclass(frozen=True)
class RBParams:
    """Control parameters (n, k, alpha, r, p) plus the derived integers.

    d = max(2, round(n^alpha)), m = max(1, round(r*n*ln n)) and
    rel_size = clamp(round(p*d^k), 1, d^k - 1), all rounded half away from
    zero.  rel_size is only meaningful in exact mode.
    """

    n: int
    k: int
    alpha: float
    r: float
    p: float
    d: int
    m: int
    rel_size: int
    mode: str

    def __post_init__(self):
        _validate_inputs(self.n, self.k, self.alpha, self.r, self.p, self.mode)
        d, m, rel_size = _derived(self.n, self.k, self.alpha, self.r, self.p)
        if (self.d, self.m, self.rel_size) != (d, m, rel_size):
            raise ParameterError(
                f"derived fields inconsistent: got (d={self.d}, m={self.m}, "
                f"rel_size={self.rel_size}), expected ({d}, {m}, {rel_size})"
            )
        if self.mode == EXACT and self.space > MAX_EXACT_SPACE:
            raise ExactSpaceError(
                f"d^k = {self.space} exceeds 2^48; use bernoulli mode"
            )

    @property
    def space(self) -> int:
        """Number of value tuples per constraint scope, d^k."""
        return self.d**self.k

    @property
    def p_hat(self) -> float:
        """Effective tightness of the generator: rel_size/d^k in exact mode
        (p after rounding), p itself in bernoulli mode."""
        if self.mode == EXACT:
            return self.rel_size / self.space
        return self.p

    def log_p_hat(self) -> float:
        if self.mode == EXACT:
            return math.log(self.rel_size) - self.k * math.log(self.d)
        return math.log(self.p)


def _validate_inputs(n, k, alpha, r, p, mode) -> None:
    if not isinstance(n, int) or n < 2:
        raise ParameterError(f"n must be an integer >= 2, got {n!r}")
    if not isinstance(k, int) or not 2 <= k <= n:
        raise ParameterError(f"k must be an integer with 2 <= k <= n, got {k!r}")
    if not (math.isfinite(alpha) and alpha > 0):
        raise ParameterError(f"alpha must be finite and > 0, got {alpha!r}")
    if not (math.isfinite(r) and r > 0):
        raise ParameterError(f"r must be finite and > 0, got {r!r}")
    if not (math.isfinite(p) and 0.0 < p < 1.0):
        raise ParameterError(f"p must lie strictly in (0, 1), got {p!r}")
    if mode not in MODES:
        raise ParameterError(f"mode must be one of {MODES}, got {mode!r}")


def derive_params(
    n: int, k: int, alpha: float, r: float, p: float, mode: str = EXACT
) -> RBParams:
    """Validate the control parameters and derive (d, m, rel_size)."""
    _validate_inputs(n, k, alpha, r, p, mode)
    d, m, rel_size = _derived(n, k, alpha, r, p)
    return RBParams(
        n=n, k=k, alpha=float(alpha), r=float(r), p=float(p),
        d=d, m=m, rel_size=rel_size, mode=mode,
    )


def alpha_for_domain(n: int, d: int) -> float:
    """alpha such that round(n^alpha) = d."""
    if d < 2 or n < 2:
        raise ParameterError("need n >= 2 and d >= 2")
    return math.log(d) / math.log(n)


def r_for_constraints(n: int, m: int) -> float:
    """r such that round(r*n*ln n) = m."""
    if m < 1 or n < 2:
        raise ParameterError("need n >= 2 and m >= 1")
    return m / (n * math.log(n))


def params_for(
    n: int, k: int, d: int, m: int, p: float, mode: str = EXACT
) -> RBParams:
    """Parameters hitting exact targets d and m (inverts the rounding)."""
    params = derive_params(n, k, alpha_for_domain(n, d), r_for_constraints(n, m), p, mode)
    if params.d != d or params.m != m:
        raise ParameterError(
            f"no parameters reproduce d={d}, m={m} (derived d={params.d}, m={params.m})"
        )
    return params


@dataclass(frozen=True)
class Constraint:
    """A scope of k variables plus the set of satisfying tuple codes.

    Scope indices and codes are stored strictly ascending; codes encode
    value tuples in scope order, big-endian base d (see encode_tuple).
    """

    scope: tuple[int, ...]
    relation: tuple[int, ...]

    def __post_init__(self):
        if any(a >= b for a, b in zip(self.scope, self.scope[1:])):
            raise ParameterError(f"scope not strictly ascending: {self.scope}")
        if any(v < 0 for v in self.scope):
            raise ParameterError(f"negative variable index in scope: {self.scope}")
        if any(a >= b for a, b in zip(self.relation, self.relation[1:])):
            raise ParameterError("relation codes not strictly ascending")
        if self.relation and self.relation[0] < 0:
            raise ParameterError("negative tuple code in relation")

    @cached_property
    def relation_set(self) -> frozenset[int]:
        return frozenset(self.relation)


@dataclass(frozen=True)
class Instance:
    """An ordered multiset of m constraints with its generation provenance."""

    params: RBParams
    constraints: tuple[Constraint, ...]
    seed: int

    def __post_init__(self):
        p = self.params
        if len(self.constraints) != p.m:
            raise ParameterError(
                f"instance has {len(self.constraints)} constraints, params require m={p.m}"
            )
        if not 0 <= self.seed <= MASK64:
            raise ParameterError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        space = p.space
        for c in self.constraints:
            if len(c.scope) != p.k:
                raise ParameterError(f"scope arity {len(c.scope)} != k={p.k}")
            if c.scope[-1] >= p.n:
                raise ParameterError(f"variable index {c.scope[-1]} out of range (n={p.n})")
            if not c.relation:
                raise ParameterError("empty relation")
            if c.relation[-1] >= space:
                raise ParameterError(f"tuple code {c.relation[-1]} out of range (d^k={space})")
            if p.mode == EXACT and len(c.relation) != p.rel_size:
                raise ParameterError(
                    f"relation size {len(c.relation)} != rel_size={p.rel_size} in exact mode"
                )

    @cached_property
    def constraints_by_var(self) -> tuple[tuple[int, ...], ...]:
        """For each variable, the indices of constraints whose scope contains it."""
        buckets: list[list[int]] = [[] for _ in range(self.params.n)]
        for ci, c in enumerate(self.constraints):
            for v in c.scope:
                buckets[v].append(ci)
        return tuple(tuple(b) for b in buckets)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        """For each variable, the variables sharing at least one constraint with it."""
        sets: list[set[int]] = [set() for _ in range(self.params.n)]
        for c in self.constraints:
            for a, b in combinations(c.scope, 2):
                sets[a].add(b)
                sets[b].add(a)
        return tuple(tuple(sorted(s)) for s in sets)


def _sample_scope(n: int, k: int, rng: SplitMix64) -> tuple[int, ...]:
    # Floyd's algorithm for a uniform k-subset of {0..n-1}
    chosen: set[int] = set()
    for j in range(n - k, n):
        t = rng.below(j + 1)
        chosen.add(j if t in chosen else t)
    return tuple(sorted(chosen))


def _sample_relation_exact(space: int, rel_size: int, rng: SplitMix64) -> tuple[int, ...]:
    codes: set[int] = set()
    while len(codes) < rel_size:
        codes.add(rng.below(space))
    return tuple(sorted(codes))


def _sample_relation_bernoulli(
    space: int, threshold: int, rng: SplitMix64
) -> tuple[tuple[int, ...], int]:
    resamples = 0
    while True:
        codes = tuple(c for c in range(space) if rng.next_u64() < threshold)
        if 0 < len(codes) < space:
            return codes, resamples
        resamples += 1
        if resamples > _MAX_RELATION_RESAMPLES:
            raise ResourceBudgetError(
                "bernoulli relation sampling rejected empty/full relations "
                f"{resamples} times; p={threshold / 2**64} is too extreme for d^k={space}"
            )


def generate_with_resamples(params: RBParams, seed: int) -> tuple[Instance, int]:
    """Like generate, additionally reporting how many bernoulli relations
    were redrawn because they came out empty or full."""
    if not 0 <= seed <= MASK64:
        raise ParameterError(f"seed must be an unsigned 64-bit integer, got {seed}")
    space = params.space
    threshold = bernoulli_threshold(params.p) if params.mode == BERNOULLI else 0
    constraints = []
    resamples = 0
    for ci in range(params.m):
        scope = _sample_scope(params.n, params.k, SplitMix64(mix(seed, STREAM_SCOPE, ci)))
        rng = SplitMix64(mix(seed, STREAM_RELATION, ci))
        if params.mode == EXACT:
            relation = _sample_relation_exact(space, params.rel_size, rng)
        else:
            relation, redraws = _sample_relation_bernoulli(space, threshold, rng)
            resamples += redraws
        constraints.append(Constraint(scope, relation))
    return Instance(params, tuple(constraints), seed), resamples


def generate(params: RBParams, seed: int) -> Instance:
    """Draw an instance: m independent uniform k-scopes (with replacement
    across constraints), each with an independently sampled relation.

    Pure function of (params, seed); byte-identical serialization on all
    platforms.
    """
    return generate_with_resamples(params, seed)[0]


def encode_tuple(values: Sequence[int], d: int) -> int:
    """Big-endian base-d code of a value tuple in scope order."""
    code = 0
    for v in values:
        if not 0 <= v < d:
            raise ParameterError(f"value {v} outside domain [0, {d})")
        code = code * d + v
    return code


def decode_tuple(code: int, d: int, k: int) -> tuple[int, ...]:
    """Inverse of encode_tuple."""
    if not 0 <= code < d**k:
        raise ParameterError(f"code {code} outside [0, d^k={d**k})")
    out = [0] * k
    for j in range(k - 1, -1, -1):
        code, out[j] = divmod(code, d)
    return tuple(out)


def _check_assignment(params: RBParams, a: Sequence[int]) -> None:
    if len(a) != params.n:
        raise ParameterError(f"assignment length {len(a)} != n={params.n}")
    d = params.d
    for v in a:
        if not 0 <= v < d:
            raise ParameterError(f"assignment value {v} outside domain [0, {d})")


def _satisfies_values(inst: Instance, values: Sequence[int]) -> bool:
    d = inst.params.d
    for c in inst.constraints:
        code = 0
        for v in c.scope:
            code = code * d + values[v]
        if code not in c.relation_set:
            return False
    return True


def satisfies(inst: Instance, a: Sequence[int]) -> bool:
    """True iff every constraint's restriction of ``a`` is in its relation."""
    _check_assignment(inst.params, a)
    return _satisfies_values(inst, a)


def delta(a: Sequence[int], b: Sequence[int]) -> set[int]:
    """Set of variable indices on which the two assignments disagree."""
    if len(a) != len(b):
        raise ParameterError(f"assignment lengths differ: {len(a)} vs {len(b)}")
    return {i for i, (x, y) in enumerate(zip(a, b)) if x != y}


def _touched_ok(inst: Instance, values: Sequence[int], cids: Iterable[int]) -> bool:
    # Valid shortcut: if sigma satisfies inst and values differs from sigma
    # only on variables covered by cids' scopes, untouched constraints stay
    # satisfied.
    d = inst.params.d
    constraints = inst.constraints
    for ci in cids:
        c = constraints[ci]
        code = 0
        for v in c.scope:
            code = code * d + values[v]
        if code not in c.relation_set:
            return False
    return True


def _single_repair_exists(inst: Instance, sigma: Sequence[int], i: int) -> bool:
    d = inst.params.d
    cids = inst.constraints_by_var[i]
    tau = list(sigma)
    si = sigma[i]
    for y in range(d):
        if y == si:
            continue
        tau[i] = y
        if _touched_ok(inst, tau, cids):
            return True
    return False


def _pair_repair_exists(inst: Instance, sigma: Sequence[int], i: int) -> bool:
    # Assumes single repairs already failed: then only variables sharing a
    # constraint with i can enable a two-variable repair (constraints over
    # x_i see the same tuple as in the failed single-variable attempt
    # otherwise).
    d = inst.params.d
    by_var = inst.constraints_by_var
    cids_i = by_var[i]
    set_i = set(cids_i)
    tau = list(sigma)
    si = sigma[i]
    for j in inst.neighbors[i]:
        merged = cids_i + tuple(ci for ci in by_var[j] if ci not in set_i)
        sj = sigma[j]
        for y in range(d):
            if y == si:
                continue
            tau[i] = y
            for z in range(d):
                if z == sj:
                    continue
                tau[j] = z
                if _touched_ok(inst, tau, merged):
                    return True
        tau[j] = sj
        tau[i] = si
    return False


def _repair_status(inst: Instance, sigma: Sequence[int], i: int, want_pair: bool = True):
    """(single-repairable, single-or-pair-repairable) for variable i of a solution."""
    if _single_repair_exists(inst, sigma, i):
        return True, True
    if want_pair and _pair_repair_exists(inst, sigma, i):
        return False, True
    return False, False


def find_repair(
    inst: Instance, sigma: Sequence[int], i: int, level: int
) -> tuple[int, ...] | None:
    """First repair of variable i in deterministic search order, or None.

    Level 10 admits only tau differing from sigma exactly at i; level 11
    additionally admits tau differing exactly at {i, j} for some j != i.
    Order: replacement value y ascending; within each y, the single-variable
    candidate first, then j ascending and z ascending.
    """
    params = inst.params
    _check_assignment(params, sigma)
    if not 0 <= i < params.n:
        raise ParameterError(f"variable index {i} out of range (n={params.n})")
    if level not in (10, 11):
        raise ParameterError(f"level must be 10 or 11, got {level!r}")
    if not _satisfies_values(inst, sigma):
        raise NotASolutionError("sigma does not satisfy the instance; repairs are undefined")

    d = params.d
    by_var = inst.constraints_by_var
    cids_i = by_var[i]
    set_i = set(cids_i)
    tau = list(sigma)
    si = sigma[i]
    for y in range(d):
        if y == si:
            continue
        tau[i] = y
        if _touched_ok(inst, tau, cids_i):
            return tuple(tau)
        if level != 11:
            continue
        # Only neighbors of i can work once the single-variable candidate
        # with this y has failed; skipping the rest never skips a repair.
        for j in inst.neighbors[i]:
            merged = cids_i + tuple(ci for ci in by_var[j] if ci not in set_i)
            sj = sigma[j]
            for z in range(d):
                if z == sj:
                    continue
                tau[j] = z
                if _touched_ok(inst, tau, merged):
                    return tuple(tau)
            tau[j] = sj
    return None


def is_super_solution(inst: Instance, sigma: Sequence[int], level: int) -> bool:
    """True iff sigma satisfies the instance and every variable is repairable
    at the given level (10 or 11).  Non-solutions return False."""
    if level not in (10, 11):
        raise ParameterError(f"level must be 10 or 11, got {level!r}")
    _check_assignment(inst.params, sigma)
    if not _satisfies_values(inst, sigma):
        return False
    values = list(sigma)
    want_pair = level == 11
    for i in range(inst.params.n):
        has10, has11 = _repair_status(inst, values, i, want_pair=want_pair)
        if not (has11 if level == 11 else has10):
            return False
    return True


def repair_levels(inst: Instance, sigma: Sequence[int]) -> tuple[bool, bool, bool]:
    """(satisfies, all vars singly repairable, all vars pair-repairable).

    One pass over the variables; the pair search for a variable runs only
    when its single-variable search fails.
    """
    _check_assignment(inst.params, sigma)
    if not _satisfies_values(inst, sigma):
        return False, False, False
    values = list(sigma)
    all10 = True
    for i in range(inst.params.n):
        has10, has11 = _repair_status(inst, values, i)
        if not has11:
            return True, False, False
        if not has10:
            all10 = False
    return True, all10, True


@dataclass(frozen=True)
class DegreeProfile:
    """Per-variable constraint counts and pairwise co-occurrence counts.

    degrees[i] counts constraints whose scope contains variable i, with
    multiplicity; overlaps[(i, j)] (i < j) counts constraints containing
    both.  Degrees may be fractional for the synthetic regular profile.
    """

    degrees: tuple
    overlaps: dict

    def degree_sum(self) -> float:
        return math.fsum(self.degrees)


def degree_profile(inst: Instance) -> DegreeProfile:
    n = inst.params.n
    degrees = [0] * n
    overlaps: dict[tuple[int, int], int] = {}
    for c in inst.constraints:
        for v in c.scope:
            degrees[v] += 1
        for a, b in combinations(c.scope, 2):
            overlaps[(a, b)] = overlaps.get((a, b), 0) + 1
    return DegreeProfile(tuple(degrees), overlaps)


def regular_profile(params: RBParams) -> DegreeProfile:
    """Synthetic profile with every degree equal to k*m/n (fractional).

    Lets the closed-form bound machinery run at sizes where generating an
    instance would be impractical.
    """
    mi = params.k * params.m / params.n
    return DegreeProfile((mi,) * params.n, {})
