"""Canonical partition numbers and the kernel enumerator behind them."""

from __future__ import annotations

from itertools import combinations

import pytest

from trspace import (
    BudgetExceededError,
    Config,
    ParameterError,
    canonical_ramsey_number,
    restricted_growth_strings,
)


def bell_numbers(k: int) -> list[int]:
    """Bell triangle recurrence, independent of the enumerator."""
    rows = [[1]]
    for _ in range(k):
        prev = rows[-1]
        row = [prev[-1]]
        for v in prev:
            row.append(row[-1] + v)
        rows.append(row)
    return [r[0] for r in rows]


def test_growth_strings_count_matches_bell():
    bells = bell_numbers(8)
    for k in range(9):
        assert sum(1 for _ in restricted_growth_strings(k)) == bells[k], k


def test_growth_strings_are_valid_and_distinct():
    seen = set()
    for a in restricted_growth_strings(5):
        assert a[0] == 0
        for i in range(1, 5):
            assert a[i] <= max(a[:i]) + 1
        seen.add(a)
    assert len(seen) == bell_numbers(5)[5]


def test_growth_strings_edge_cases():
    assert list(restricted_growth_strings(0)) == [()]
    assert list(restricted_growth_strings(1)) == [(0,)]
    with pytest.raises(ParameterError):
        list(restricted_growth_strings(-1))


def brute_er_number_unary(m: int, limit: int = 16) -> int:
    """Direct witness search over every kernel of [N], no case analysis."""
    for points in range(m, limit + 1):
        good = True
        for kernel in restricted_growth_strings(points):
            if not _has_witness(kernel, points, m):
                good = False
                break
        if good:
            return points
    raise AssertionError("limit too small")


def _has_witness(kernel, points: int, m: int) -> bool:
    for chosen in combinations(range(points), m):
        for index_set in ((), (0,)):
            ok = True
            for a, b in combinations(chosen, 2):
                equal = kernel[a] == kernel[b]
                # distinct points agree on I iff I is empty
                agree = index_set == ()
                if equal != agree:
                    ok = False
                    break
            if ok:
                return True
    return False


def test_unary_numbers_match_direct_search():
    for m in range(1, 4):
        assert canonical_ramsey_number(1, m) == brute_er_number_unary(m)


def test_unary_number_values():
    # least N where every kernel of [N] is constant or injective on
    # some m points: 1, 2, 5, 10
    assert [canonical_ramsey_number(1, m) for m in range(1, 5)] == [1, 2, 5, 10]


def test_pair_numbers_small():
    assert canonical_ramsey_number(2, 1) == 1
    assert canonical_ramsey_number(2, 2) == 2


def test_budget_error_carries_progress():
    # N=4..7 are each decided by an early failing kernel; the budget
    # runs dry inside the N=8 sweep
    with pytest.raises(BudgetExceededError) as info:
        canonical_ramsey_number(1, 4, Config(max_kernels=50))
    assert info.value.largest_checked == 7


def test_parameter_guards():
    with pytest.raises(ParameterError):
        canonical_ramsey_number(0, 2)
    with pytest.raises(ParameterError):
        canonical_ramsey_number(2, 0)
