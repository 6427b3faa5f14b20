"""Bit-level primitives on positive integers.

``lam(n)`` and ``mu(n)`` are the positions of the lowest and highest set bit
of ``n``; a set is *apart* when the bit supports of its elements occupy
disjoint, ascending exponent intervals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetError, DomainError

DEFAULT_BIT_BUDGET = 63


def lam(n: int) -> int:
    """Index of the lowest set bit of ``n``."""
    if n <= 0:
        raise DomainError("lam undefined at 0" if n == 0 else f"lam undefined at {n}")
    return (n & -n).bit_length() - 1


def mu(n: int) -> int:
    """Index of the highest set bit of ``n``."""
    if n <= 0:
        raise DomainError("mu undefined at 0" if n == 0 else f"mu undefined at {n}")
    return n.bit_length() - 1


def pop(n: int) -> int:
    if n < 0:
        raise DomainError(f"pop undefined at {n}")
    return bin(n).count("1")


def max_value(bit_budget: int = DEFAULT_BIT_BUDGET) -> int:
    return (1 << bit_budget) - 1


def check_budget(n: int, bit_budget: int = DEFAULT_BIT_BUDGET) -> int:
    if n >= 1 << bit_budget:
        raise BudgetError(f"{n} exceeds the {bit_budget}-bit budget")
    return n


def _check_increasing(xs: Sequence[int]) -> None:
    if not xs:
        raise ValueError("expected a nonempty list")
    if xs[0] < 1:
        raise ValueError(f"elements must be positive, got {xs[0]}")
    for a, b in zip(xs, xs[1:]):
        if b <= a:
            raise ValueError(f"list is not strictly increasing at {a}, {b}")


def is_apart(xs: Sequence[int]) -> bool:
    """True iff ``mu(x) < lam(x')`` for each consecutive pair ``x < x'``.

    Checking consecutive pairs suffices because each interval
    ``[lam(x), mu(x)]`` is nonempty, so the inequalities chain.
    """
    _check_increasing(xs)
    return all(mu(a) < lam(b) for a, b in zip(xs, xs[1:]))


@dataclass(frozen=True)
class Run:
    """Sum of the consecutive elements ``h_i .. h_j`` (1-based, inclusive)."""

    start: int
    end: int
    sum: int

    @property
    def length(self) -> int:
        return self.end - self.start + 1


def adjacent_sums(h: Sequence[int], min_len: int = 1, max_len: int | None = None) -> list[Run]:
    """All runs with ``min_len <= length <= max_len``, ordered by start then end."""
    _check_increasing(h)
    if max_len is None:
        max_len = len(h)
    if not 1 <= min_len <= max_len:
        raise ValueError(f"need 1 <= min_len <= max_len, got {min_len}, {max_len}")
    runs = []
    for i in range(len(h)):
        total = 0
        for j in range(i, min(len(h), i + max_len)):
            total += h[j]
            if j - i + 1 >= min_len:
                runs.append(Run(i + 1, j + 1, total))
    return runs


def run_endpoints(h: Sequence[int], i: int, j: int) -> tuple[int, int]:
    """``(lam(h_i), mu(h_j))``, which equals ``(lam, mu)`` of the run sum when ``h`` is apart."""
    if not is_apart(h):
        raise ValueError("run_endpoints requires an apart set")
    if not 1 <= i <= j <= len(h):
        raise ValueError(f"run ({i}, {j}) out of range for a set of size {len(h)}")
    return lam(h[i - 1]), mu(h[j - 1])
