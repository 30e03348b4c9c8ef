"""Exact enumeration and search over all d^n assignments, at desk scale.

Counting visits every assignment in lexicographic order and classifies it
with the core checkers — deliberately unpruned so the counts can serve as
an oracle for everything else.  A conventional backtracking solver is kept
alongside as an independent satisfiability cross-check.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .core import Instance, ParameterError, ResourceBudgetError, _repair_status

DEFAULT_CAP = 10**7


@dataclass(frozen=True)
class CountReport:
    """Exact enumeration tallies for one instance.

    enumerated is the number of assignments visited; capped marks a run an
    explicit cap stopped before covering all d^n of them.
    """

    n_solutions: int
    n_super10: int
    n_super11: int
    enumerated: int
    capped: bool


def _iter_assignments(d: int, n: int, start: int, stop: int):
    """Yield one reused list per assignment code in [start, stop), in
    lexicographic (= numeric code) order."""
    values = [0] * n
    code = start
    for j in range(n - 1, -1, -1):
        code, values[j] = divmod(code, d)
    for _ in range(stop - start):
        yield values
        for j in range(n - 1, -1, -1):
            values[j] += 1
            if values[j] < d:
                break
            values[j] = 0


def _count_range(inst: Instance, start: int, stop: int) -> tuple[int, int, int]:
    d = inst.params.d
    n = inst.params.n
    checks = [(c.scope, c.relation_set) for c in inst.constraints]
    n_solutions = n_super10 = n_super11 = 0
    for values in _iter_assignments(d, n, start, stop):
        sat = True
        for scope, relation in checks:
            code = 0
            for v in scope:
                code = code * d + values[v]
            if code not in relation:
                sat = False
                break
        if not sat:
            continue
        n_solutions += 1
        all10 = all11 = True
        for i in range(n):
            has10, has11 = _repair_status(inst, values, i)
            if not has11:
                all10 = all11 = False
                break
            if not has10:
                all10 = False
        n_super10 += all10
        n_super11 += all11
    return n_solutions, n_super10, n_super11


def count_all(
    inst: Instance, cap: int | None = None, workers: int = 1
) -> CountReport:
    """Classify every assignment by exhaustive enumeration.

    Without an explicit cap the space d^n must fit the default budget of
    10^7 visits; with one, enumeration stops at the cap and the report is
    marked capped.  Workers partition the code space; the additive tallies
    make the result identical for any worker count.
    """
    if workers < 1:
        raise ParameterError(f"workers must be >= 1, got {workers}")
    space = inst.params.d ** inst.params.n
    if cap is None:
        if space > DEFAULT_CAP:
            raise ResourceBudgetError(
                f"d^n = {space} exceeds the default enumeration budget "
                f"{DEFAULT_CAP}; pass an explicit cap"
            )
        limit = space
    else:
        if cap < 0:
            raise ParameterError(f"cap must be >= 0, got {cap}")
        limit = min(space, cap)

    if workers == 1 or limit < 4096:
        tallies = [_count_range(inst, 0, limit)]
    else:
        chunk = -(-limit // workers)
        starts = list(range(0, limit, chunk))
        stops = [min(s + chunk, limit) for s in starts]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            tallies = list(pool.map(_count_range, [inst] * len(starts), starts, stops))
    n_solutions = sum(t[0] for t in tallies)
    n_super10 = sum(t[1] for t in tallies)
    n_super11 = sum(t[2] for t in tallies)
    return CountReport(
        n_solutions=n_solutions,
        n_super10=n_super10,
        n_super11=n_super11,
        enumerated=limit,
        capped=limit < space,
    )


def backtrack_solve(inst: Instance) -> tuple[int, ...] | None:
    """Depth-first search in variable order 0..n-1 and value order 0..d-1,
    pruning on every constraint whose scope just became fully assigned.
    Returns the lexicographically first solution, or None."""
    params = inst.params
    d, n = params.d, params.n
    # constraints keyed by the last (largest) variable of their scope
    by_last: list[list[tuple[tuple[int, ...], frozenset[int]]]] = [[] for _ in range(n)]
    for c in inst.constraints:
        by_last[c.scope[-1]].append((c.scope, c.relation_set))

    values = [0] * n

    def extend(v: int) -> bool:
        if v == n:
            return True
        for y in range(d):
            values[v] = y
            ok = True
            for scope, relation in by_last[v]:
                code = 0
                for u in scope:
                    code = code * d + values[u]
                if code not in relation:
                    ok = False
                    break
            if ok and extend(v + 1):
                return True
        return False

    return tuple(values) if extend(0) else None


def find_super(
    inst: Instance, level: int, cap: int | None = None
) -> tuple[int, ...] | None:
    """Lexicographically first assignment that is a super solution at the
    given level (10 or 11), or None if none exists.  Raises once the visit
    budget (default 10^7) is exhausted before an answer is reached."""
    if level not in (10, 11):
        raise ParameterError(f"level must be 10 or 11, got {level!r}")
    params = inst.params
    d, n = params.d, params.n
    space = d**n
    budget = DEFAULT_CAP if cap is None else cap
    checks = [(c.scope, c.relation_set) for c in inst.constraints]
    want_pair = level == 11
    visited = 0
    for values in _iter_assignments(d, n, 0, space):
        visited += 1
        if visited > budget:
            raise ResourceBudgetError(
                f"no answer within the search budget {budget} (d^n = {space})"
            )
        sat = True
        for scope, relation in checks:
            code = 0
            for v in scope:
                code = code * d + values[v]
            if code not in relation:
                sat = False
                break
        if not sat:
            continue
        good = True
        for i in range(n):
            has10, has11 = _repair_status(inst, values, i, want_pair=want_pair)
            if not (has11 if want_pair else has10):
                good = False
                break
        if good:
            return tuple(values)
    return None
