"""Canonical partition numbers by exhaustive kernel enumeration.

For arity n and target m, the canonical number is the least N such
that every kernel of the increasing n-tuples from {0,...,N-1} admits
an m-element set M and an index set I of coordinates where two tuples
drawn from M get equal colors exactly when they agree on the
coordinates in I. Kernels are enumerated once per partition as
restricted-growth strings, so color renamings are never revisited.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterator, Optional

from .errors import BudgetExceededError, ParameterError
from .model import Config, DEFAULT_CONFIG


def restricted_growth_strings(k: int) -> Iterator[tuple[int, ...]]:
    """Yield every partition of range(k) exactly once, encoded as a
    restricted-growth string: a[0] = 0 and a[i] <= max(a[:i]) + 1."""
    if k < 0:
        raise ParameterError("cannot partition a negative number of items")
    if k == 0:
        yield ()
        return
    a = [0] * k
    high = [0] * k
    while True:
        yield tuple(a)
        i = k - 1
        while i > 0 and a[i] > high[i - 1]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        high[i] = max(high[i - 1], a[i])
        for j in range(i + 1, k):
            a[j] = 0
            high[j] = high[i]


def _witness_arity_one(
    kernel: tuple[int, ...], m: int
) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Witness for arity one: a class of size m gives a constant set,
    otherwise one point from each of m classes gives an injective set.
    When every class is smaller than m and there are fewer than m
    classes, any m-set meets some class twice without being contained
    in it, so neither index set works; the split is complete."""
    classes: dict[int, list[int]] = {}
    for point, color in enumerate(kernel):
        classes.setdefault(color, []).append(point)
    for members in classes.values():
        if len(members) >= m:
            return tuple(members[:m]), ()
    if len(classes) >= m:
        reps = sorted(members[0] for members in classes.values())[:m]
        return tuple(reps), (0,)
    return None


def _admits_witness(
    tuples: list[tuple[int, ...]],
    kernel: tuple[int, ...],
    n: int,
    m: int,
    points: int,
) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Search every m-set and index set for the canonical biconditional.
    Tuples that do not fit inside the m-set are outside the quantifier."""
    color = dict(zip(tuples, kernel))
    index_sets = [
        I for r in range(n + 1) for I in combinations(range(n), r)
    ]
    for chosen in combinations(range(points), m):
        inside = set(chosen)
        local = [t for t in tuples if inside.issuperset(t)]
        for I in index_sets:
            if all(
                (color[a] == color[b]) == all(a[i] == b[i] for i in I)
                for a, b in combinations(local, 2)
            ):
                return chosen, I
    return None


def canonical_ramsey_number(n: int, m: int, config: Config = DEFAULT_CONFIG) -> int:
    """Least N such that every kernel on the increasing n-tuples from
    {0,...,N-1} admits a size-m witness set with some index set.

    Arity one uses the complete constant-or-injective construction;
    higher arities fall back to the direct search, which is only
    feasible for tiny targets. Enumeration is metered against
    config.max_kernels; on exhaustion the error carries the largest N
    whose verdict was fully decided.
    """
    if n < 1 or m < 1:
        raise ParameterError("arity and target must both be at least 1")
    spent = 0
    largest_decided: Optional[int] = None
    N = m
    while True:
        tuples = list(combinations(range(N), n))
        all_good = True
        for kernel in restricted_growth_strings(len(tuples)):
            spent += 1
            if spent > config.max_kernels:
                err = BudgetExceededError(
                    f"kernel budget {config.max_kernels} exhausted while "
                    f"checking N={N}; largest fully decided N: {largest_decided}"
                )
                err.largest_checked = largest_decided
                raise err
            if n == 1:
                hit = _witness_arity_one(kernel, m)
            else:
                hit = _admits_witness(tuples, kernel, n, m, N)
            if hit is None:
                all_good = False
                break
        if all_good:
            return N
        largest_decided = N
        N += 1
