"""Exhaustive witness search for bounded instances of AHT, RT2, IPT2 and HIL.

Every solver walks candidates in ascending order with a depth-first search,
so the first complete witness it meets is the lexicographically least one.
A solver returns the witness, returns ``None`` once the whole space is
exhausted, or raises :class:`SearchBudgetExceeded` when ``node_limit``
candidates have been examined without a decision.
"""

from __future__ import annotations

import os
import threading
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

from .bits import lam, mu
from .coloring import Coloring, PairColoring
from .errors import SearchBudgetExceeded

THREADS_ENV = "AHTLAB_THREADS"


@dataclass(frozen=True)
class SearchBudget:
    bound: int
    size: int
    node_limit: int | None = None
    require_apart: bool = True
    threads: int = 1

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("target size must be at least 1")
        if self.bound < 1:
            raise ValueError("bound must be at least 1")
        if self.node_limit is not None and self.node_limit < 0:
            raise ValueError("node limit must be nonnegative")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")


@dataclass(frozen=True)
class AhtWitness:
    H: tuple[int, ...]
    color: int


@dataclass(frozen=True)
class Rt2Witness:
    J: tuple[int, ...]
    color: int


@dataclass(frozen=True)
class Ipt2Witness:
    H1: tuple[int, ...]
    H2: tuple[int, ...]
    color: int


@dataclass(frozen=True)
class HilWitness:
    X: tuple[int, ...]  # bitmasks, ascending
    color: int

    def sets(self) -> list[frozenset[int]]:
        return [frozenset(b for b in range(x.bit_length()) if x >> b & 1) for x in self.X]


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


# -- search engine ----------------------------------------------------------


class _Aborted(Exception):
    pass


class _Problem:
    """Increasing sequences of fixed length, grown one element at a time."""

    size: int

    def candidates(self, prefix: list[int]) -> Iterator[int]:
        raise NotImplementedError

    def admissible(self, prefix: list[int], x: int) -> bool:
        raise NotImplementedError

    def complete(self, prefix: list[int]) -> bool:
        return True


def _dfs(problem: _Problem, prefix: list[int], counter: list[int], limit: int | None, abort=None):
    for x in problem.candidates(prefix):
        counter[0] += 1
        if limit is not None and counter[0] > limit:
            raise SearchBudgetExceeded(counter[0])
        if abort is not None and abort():
            raise _Aborted
        if not problem.admissible(prefix, x):
            continue
        prefix.append(x)
        if len(prefix) == problem.size:
            if problem.complete(prefix):
                return list(prefix)
        else:
            found = _dfs(problem, prefix, counter, limit, abort)
            if found is not None:
                return found
        prefix.pop()
    return None


def _search(problem: _Problem, node_limit: int | None, threads: int):
    if threads <= 1:
        return _dfs(problem, [], [0], node_limit)
    return _search_parallel(problem, node_limit, threads)


def _search_parallel(problem: _Problem, limit: int | None, threads: int):
    """Fan out over first elements, then replay the branches in order.

    Each branch reports how many nodes it used; summing them in branch order
    reproduces the sequential node count exactly, so the outcome (witness,
    none, or budget exceeded) matches a single-threaded run.
    """
    best = [float("inf")]
    stop = threading.Event()
    lock = threading.Lock()

    def branch(idx: int, x: int):
        counter = [1]
        if limit is not None and counter[0] > limit:
            return None, counter[0], True

        def abort():
            return stop.is_set() or idx > best[0]

        try:
            if not problem.admissible([], x):
                return None, counter[0], False
            if problem.size == 1:
                found = [x] if problem.complete([x]) else None
            else:
                found = _dfs(problem, [x], counter, limit, abort)
        except SearchBudgetExceeded:
            return None, counter[0], True
        except _Aborted:
            return None, counter[0], False
        if found is not None:
            with lock:
                best[0] = min(best[0], idx)
        return found, counter[0], False

    firsts = enumerate(problem.candidates([]))
    pending: deque = deque()
    total = 0
    with ThreadPoolExecutor(max_workers=threads) as pool:

        def fill():
            while len(pending) < 2 * threads:
                nxt = next(firsts, None)
                if nxt is None:
                    return
                pending.append(pool.submit(branch, *nxt))

        try:
            fill()
            while pending:
                found, nodes, exceeded = pending.popleft().result()
                total += nodes
                if exceeded or (limit is not None and total > limit):
                    raise SearchBudgetExceeded(limit + 1)
                if found is not None:
                    return found
                fill()
            return None
        finally:
            stop.set()
            for fut in pending:
                fut.cancel()


# -- AHT --------------------------------------------------------------------


def _endpoint_representatives(low: int) -> Iterator[int]:
    """Ascending least integers for each ``(lam, mu)`` with ``lam >= low``: ``2^b`` and ``2^b + 2^a``."""
    b = low
    while True:
        yield 1 << b
        for a in range(low, b):
            yield (1 << b) + (1 << a)
        b += 1


class _AhtProblem(_Problem):
    def __init__(self, c: Coloring, budget: SearchBudget, min_lam: int, min_span: int):
        if budget.bound > c.bound:
            raise ValueError(f"search bound {budget.bound} exceeds the coloring domain [1, {c.bound}]")
        self.c = c
        self.size = budget.size
        self.bound = budget.bound
        self.apart = budget.require_apart
        self.min_lam = min_lam
        self.min_span = min_span
        # restricting to least representatives keeps the lexicographically least witness
        self.endpoint_mode = c.endpoint_determined and self.apart

    def _tail(self, x: int, r: int) -> int:
        # smallest possible total of r further elements after x
        if self.apart:
            return (1 << (mu(x) + 1)) * ((1 << r) - 1)
        return r * x + r * (r + 1) // 2

    def candidates(self, prefix):
        r = self.size - len(prefix) - 1
        psum = sum(prefix)
        if self.apart:
            low = mu(prefix[-1]) + 1 if prefix else self.min_lam
            if self.endpoint_mode:
                xs = _endpoint_representatives(low)
            else:
                step = 1 << low
                xs = iter(range(step, self.bound + 1, step))
        else:
            xs = iter(range(prefix[-1] + 1 if prefix else 1, self.bound + 1))
        for x in xs:
            if psum + x + self._tail(x, r) > self.bound:
                return
            if not self.apart and lam(x) < self.min_lam:
                continue
            yield x

    def admissible(self, prefix, x):
        c = self.c
        color = c(prefix[0]) if prefix else c(x)
        if c(x) != color:
            return False
        s = x
        for p in reversed(prefix):
            s += p
            if c(s) != color:
                return False
        return True

    def complete(self, prefix):
        return mu(prefix[-1]) - lam(prefix[0]) + 1 >= self.min_span


def solve_aht(c: Coloring, budget: SearchBudget, *, min_lam: int = 0, min_span: int = 0) -> AhtWitness | None:
    """Least ``H`` of size ``m`` in ``[1, N]`` whose run sums all share one color.

    ``min_lam`` forces every exponent of ``H`` to be at least that value and
    ``min_span`` forces ``mu(h_m) - lam(h_1) + 1 >= min_span``; both are used
    by the word pipeline to push witnesses into a periodic tail.
    """
    found = _search(_AhtProblem(c, budget, min_lam, min_span), budget.node_limit, budget.threads)
    if found is None:
        return None
    return AhtWitness(tuple(found), c(found[0]))


# -- RT2 --------------------------------------------------------------------


class _Rt2Problem(_Problem):
    def __init__(self, f: PairColoring, budget: SearchBudget):
        if budget.bound > f.bound:
            raise ValueError(f"search bound {budget.bound} exceeds the pair domain [0, {f.bound})")
        self.f = f
        self.size = budget.size
        self.bound = budget.bound

    def candidates(self, prefix):
        r = self.size - len(prefix) - 1
        return iter(range(prefix[-1] + 1 if prefix else 0, self.bound - r))

    def admissible(self, prefix, x):
        if not prefix:
            return True
        f = self.f
        color = f(prefix[0], prefix[1]) if len(prefix) > 1 else f(prefix[0], x)
        return all(f(p, x) == color for p in prefix)


def solve_rt2(f: PairColoring, budget: SearchBudget) -> Rt2Witness | None:
    """Least homogeneous ``J`` of size ``m`` in ``[0, N)``; a singleton gets color 0."""
    found = _search(_Rt2Problem(f, budget), budget.node_limit, budget.threads)
    if found is None:
        return None
    color = f(found[0], found[1]) if len(found) > 1 else 0
    return Rt2Witness(tuple(found), color)


# -- IPT2 -------------------------------------------------------------------


def _first_increasing_pair(h1: Sequence[int], h2: Sequence[int]):
    for x1 in h1:
        for x2 in h2:
            if x1 < x2:
                return x1, x2
    return None


class _Ipt2Problem(_Problem):
    """Sequence ``H1 + H2`` of length ``2m``; each half increasing."""

    def __init__(self, f: PairColoring, budget: SearchBudget):
        if budget.bound > f.bound:
            raise ValueError(f"search bound {budget.bound} exceeds the pair domain [0, {f.bound})")
        self.f = f
        self.m = budget.size
        self.size = 2 * budget.size
        self.bound = budget.bound

    def candidates(self, prefix):
        t, m = len(prefix), self.m
        start = 0 if t in (0, m) else prefix[-1] + 1
        r = (m - 1 - t) if t < m else (2 * m - 1 - t)
        return iter(range(start, self.bound - r))

    def admissible(self, prefix, x):
        m = self.m
        if len(prefix) < m:
            return True
        f = self.f
        h1 = prefix[:m]
        first = _first_increasing_pair(h1, prefix[m:])
        if first is None:
            first = _first_increasing_pair(h1, [x])
            if first is None:
                return True
        color = f(*first)
        return all(f(x1, x) == color for x1 in h1 if x1 < x)

    def complete(self, prefix):
        # at least one constrained pair, so the colour is witnessed
        return prefix[0] < prefix[-1]


def solve_ipt2(f: PairColoring, budget: SearchBudget) -> Ipt2Witness | None:
    """Least ``(H1, H2)`` (compared as ``H1 + H2``) with all increasing cross pairs one color.

    Witnesses must contain at least one increasing pair.
    """
    found = _search(_Ipt2Problem(f, budget), budget.node_limit, budget.threads)
    if found is None:
        return None
    m = budget.size
    h1, h2 = tuple(found[:m]), tuple(found[m:])
    return Ipt2Witness(h1, h2, f(*_first_increasing_pair(h1, h2)))


# -- HIL --------------------------------------------------------------------


def family_unions(masks: Sequence[int]) -> list[int]:
    """Unions of all nonempty subfamilies, in binary-counting order of the family index set."""
    out: list[int] = []
    for x in masks:
        out += [x] + [u | x for u in out]
    return out


class _HilProblem(_Problem):
    def __init__(self, f: Coloring, budget: SearchBudget):
        top = (1 << budget.bound) - 1
        if top > f.bound:
            raise ValueError(f"base {budget.bound} needs set colors up to {top}, coloring stops at {f.bound}")
        self.f = f
        self.size = budget.size
        self.top = top

    def candidates(self, prefix):
        r = self.size - len(prefix) - 1
        return iter(range(prefix[-1] + 1 if prefix else 1, self.top - r + 1))

    def admissible(self, prefix, x):
        f = self.f
        color = f(prefix[0]) if prefix else f(x)
        if f(x) != color:
            return False
        return all(f(u | x) == color for u in family_unions(prefix))


def solve_hil(f: Coloring, budget: SearchBudget) -> HilWitness | None:
    """Least ascending list of ``m`` distinct nonempty subsets of ``[0, base)``.

    ``budget.bound`` is the base; sets are bitmasks and ``f`` colors them.
    """
    found = _search(_HilProblem(f, budget), budget.node_limit, budget.threads)
    if found is None:
        return None
    return HilWitness(tuple(found), f(found[0]))
