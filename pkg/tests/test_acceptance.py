"""Acceptance criteria, one test each.

Every criterion prints a PASS/FAIL line (collected into the pytest terminal
summary by conftest.py). Run ``python tests/test_acceptance.py`` to get the
lines without pytest.
"""

from __future__ import annotations

import random
import sys
import time
from itertools import combinations
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ahtlab.bits import adjacent_sums, lam, mu
from ahtlab.certificates import (
    aht_certificate,
    hil_certificate,
    ipt2_certificate,
    read_certificate,
    rt2_certificate,
    verify_aht,
    verify_hil,
    verify_ipt2,
    verify_rt2,
    write_certificate,
)
from ahtlab.coloring import Coloring, PairColoring, projected_point_coloring
from ahtlab.dsl import parse_expr, to_source
from ahtlab.errors import NoWitnessFound
from ahtlab.reductions import chain_rt2_to_ipt2, reduce_aht_to_ipt2, reduce_rt2_to_aht, word_highest_letter
from ahtlab.solvers import SearchBudget, solve_aht, solve_hil, solve_ipt2, solve_rt2

from oracles import (
    naive_aht,
    naive_hil,
    naive_ipt2,
    naive_rt2,
    random_any_expr,
    random_apart_set,
    random_expr,
    random_pair_coloring,
    random_periodic_word,
    random_point_coloring,
    random_set_coloring,
    run_sums,
    support,
)

REPORT: list[str] = []


def _run(number: int, title: str, limit: float | None, check) -> None:
    start = time.perf_counter()
    failures, detail = check()
    elapsed = time.perf_counter() - start
    timely = limit is None or elapsed < limit
    ok = not failures and timely
    budget = f" (limit {limit:g} s)" if limit is not None else ""
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}; {detail}; {elapsed:.2f} s{budget}"
    print(line)
    REPORT.append(line)
    assert not failures, failures[:5]
    assert timely, f"took {elapsed:.2f} s, limit {limit} s"


# -- 1 ----------------------------------------------------------------------


def _rt2_to_aht_suite():
    rng = random.Random(101)
    failures, done = [], 0
    for t in range(200):
        k = 2 + t % 2
        c = Coloring.from_expr(random_expr(rng, "n"), k, (1 << 12) - 2)
        try:
            aht, cert = reduce_rt2_to_aht(c, 3, 12)
        except NoWitnessFound:
            continue
        done += 1
        H = aht.H
        rt2_color = cert.stages[0].color
        if len(H) != 3 or not all(max(support(a)) < min(support(b)) for a, b in zip(H, H[1:])):
            failures.append((c.source.expr, H, "not apart"))
        elif {c(s) for s in run_sums(H)} != {rt2_color}:
            failures.append((c.source.expr, H, "not monochromatic"))
    return failures, f"{done}/200 completed, {len(failures)} failures"


def test_criterion_1_rt2_to_aht():
    _run(1, "RT2 to AHT pipeline", 10, _rt2_to_aht_suite)


# -- 2 ----------------------------------------------------------------------


def _aht_to_ipt2_suite():
    rng = random.Random(202)
    failures, done = [], 0
    for _ in range(200):
        f = random_pair_coloring(rng, 2, 20)
        try:
            ipt, cert = reduce_aht_to_ipt2(f, 3, aht_stage="chain")
        except NoWitnessFound:
            continue
        done += 1
        stage_color = cert.stages[0].color
        pairs = [(x, y) for x in ipt.H1 for y in ipt.H2 if x < y]
        if ipt.color != stage_color or not pairs or {f(x, y) for x, y in pairs} != {stage_color}:
            failures.append((f.source, ipt))
    return failures, f"{done}/200 completed, {len(failures)} failures"


def test_criterion_2_aht_to_ipt2():
    _run(2, "AHT to IPT2 pipeline via chain", 30, _aht_to_ipt2_suite)


# -- 3 ----------------------------------------------------------------------


def _apartness_identity():
    rng = random.Random(303)
    failures = []
    for _ in range(10_000):
        m = rng.randint(1, 8)
        H = random_apart_set(rng, m, 63)
        runs = list(adjacent_sums(H))
        sums = [r.sum for r in runs]
        if len(runs) != m * (m + 1) // 2 or len(set(sums)) != len(sums):
            failures.append((H, "count"))
            continue
        for r in runs:
            s = support(r.sum)
            if lam(r.sum) != min(support(H[r.start - 1])) or mu(r.sum) != max(support(H[r.end - 1])):
                failures.append((H, r))
            if (min(s), max(s)) != (lam(r.sum), mu(r.sum)):
                failures.append((H, r, "bits"))
    return failures, f"10000 sets, {len(failures)} failures"


def test_criterion_3_apartness_sum_identity():
    _run(3, "apartness-sum identity", 5, _apartness_identity)


# -- 4 ----------------------------------------------------------------------


def _oracle_equivalence():
    rng = random.Random(404)
    failures, counts = [], {}

    def agree(name, got, want):
        counts[name] = counts.get(name, 0) + 1
        if got != want:
            failures.append((name, got, want))

    for m in (1, 2):
        for N in range(1, 17):
            for _ in range(100):
                k = rng.randint(1, 3)
                c = random_point_coloring(rng, k, N)
                for apart in (True, False):
                    w = solve_aht(c, SearchBudget(N, m, require_apart=apart))
                    agree("AHT", w and (w.H, w.color), naive_aht(c, N, m, apart))
                if N >= 2:
                    f = random_pair_coloring(rng, k, N)
                    w = solve_rt2(f, SearchBudget(N, m))
                    agree("RT2", w and (w.J, w.color), naive_rt2(f, N, m))
                    w = solve_ipt2(f, SearchBudget(N, m))
                    agree("IPT2", w and (w.H1, w.H2, w.color), naive_ipt2(f, N, m))
            # endpoint mode: projected colorings with domain 2^b - 1 <= 16
            if N in (3, 7, 15):
                b = N.bit_length()
                for _ in range(100):
                    g = projected_point_coloring(random_pair_coloring(rng, rng.randint(1, 3), b))
                    w = solve_aht(g, SearchBudget(N, m))
                    agree("AHT-endpoint", w and (w.H, w.color), naive_aht(g, N, m))
        # HIL: the search space is the 2^base - 1 <= 16 nonempty subsets
        for base in range(1, 5):
            for _ in range(100):
                f = random_set_coloring(rng, rng.randint(1, 3), base)
                w = solve_hil(f, SearchBudget(base, m))
                agree("HIL", w and (w.X, w.color), naive_hil(f, base, m))
    summary = ", ".join(f"{name} {n}" for name, n in sorted(counts.items()))
    return failures, f"{sum(counts.values())} instances ({summary}), {len(failures)} disagreements"


def test_criterion_4_oracle_equivalence():
    _run(4, "pruned search equals naive enumeration", 60, _oracle_equivalence)


# -- 5 ----------------------------------------------------------------------


def _word_suite():
    rng = random.Random(505)
    failures, checked = [], 0
    for _ in range(100):
        w = random_periodic_word(rng, 6, 8, 12)
        letter, aht, _ = word_highest_letter(w, 2)
        first = min(support(aht.H[0]))
        if first < w.prefix_length:
            continue
        checked += 1
        period = w.letters[w.prefix_length:]
        if letter != max(period):
            failures.append((w, aht.H, letter))
    return failures, f"{checked}/100 windows past the prefix, {len(failures)} failures"


def test_criterion_5_word_pipeline():
    _run(5, "word pipeline returns the top recurring letter", 10, _word_suite)


# -- 6 ----------------------------------------------------------------------


def _witness_corpus(rng):
    """100 valid witnesses per principle as (k, witness, color, verify)."""
    out = {"AHT": [], "RT2": [], "IPT2": [], "HIL": []}
    while min(len(v) for v in out.values()) < 100:
        k = rng.randint(2, 3)
        m = rng.randint(2, 3)
        if len(out["AHT"]) < 100:
            c = random_point_coloring(rng, k, 300)
            w = solve_aht(c, SearchBudget(300, m))
            if w:
                out["AHT"].append((k, list(w.H), w.color, lambda xs, col, c=c, m=m: verify_aht(c, xs, col, size=m)))
        f = random_pair_coloring(rng, k, 12)
        if len(out["RT2"]) < 100:
            w = solve_rt2(f, SearchBudget(12, m))
            if w:
                out["RT2"].append((k, list(w.J), w.color, lambda xs, col, f=f, m=m: verify_rt2(f, xs, col, size=m)))
        if len(out["IPT2"]) < 100:
            w = solve_ipt2(f, SearchBudget(12, m))
            if w:
                out["IPT2"].append((k, (list(w.H1), list(w.H2)), w.color,
                                    lambda hs, col, f=f, m=m: verify_ipt2(f, hs[0], hs[1], col, size=m)))
        if len(out["HIL"]) < 100:
            s = random_set_coloring(rng, k, 4)
            w = solve_hil(s, SearchBudget(4, 2))
            if w:
                out["HIL"].append((k, list(w.X), w.color, lambda xs, col, s=s: verify_hil(s, xs, col, size=2)))
    return out


def _drop(principle, wit):
    if principle == "IPT2":
        return (wit[0][:-1], wit[1])
    return wit[:-1]


def _breaking_insertion(principle, wit):
    """Insert one element that violates the structural side condition."""
    if principle == "AHT":
        # shares the top bit of the last element, so apartness fails
        return wit + [3 << mu(wit[-1])]
    if principle == "IPT2":
        return (wit[0][:1] + wit[0], wit[1])
    # a repeated element breaks strict increase (RT2) or distinctness (HIL)
    return wit[:1] + wit


def _adversarial():
    rng = random.Random(606)
    failures, total = [], 0
    for principle, items in _witness_corpus(rng).items():
        for k, wit, color, verify in items:
            if not verify(wit, color).ok:
                failures.append((principle, wit, "valid witness rejected"))
                continue
            mutants = {
                "color flip": verify(wit, (color + 1) % k),
                "element drop": verify(_drop(principle, wit), color),
                "breaking insertion": verify(_breaking_insertion(principle, wit), color),
            }
            for name, verdict in mutants.items():
                total += 1
                if verdict.status != "counterexample" or not verdict.message:
                    failures.append((principle, name, wit, verdict))
    return failures, f"{total} mutants, {total - len(failures)} rejected with a counterexample"


def test_criterion_6_adversarial_verifier():
    _run(6, "verifier rejects mutated witnesses", None, _adversarial)


# -- 7 ----------------------------------------------------------------------


def _certificate_corpus(rng):
    certs = []
    while len(certs) < 60:
        k = rng.randint(2, 3)
        roll = len(certs) % 6
        if roll == 0:
            c = random_point_coloring(rng, k, 200)
            w = solve_aht(c, SearchBudget(200, 2))
            if w:
                certs.append(aht_certificate(c, w, search_bound=200))
        elif roll == 1:
            f = random_pair_coloring(rng, k, 10)
            w = solve_rt2(f, SearchBudget(10, 3))
            if w:
                certs.append(rt2_certificate(f, w, search_bound=10))
            w = solve_ipt2(f, SearchBudget(10, 2))
            if w:
                certs.append(ipt2_certificate(f, w, search_bound=10))
        elif roll == 2:
            s = random_set_coloring(rng, k, 4)
            w = solve_hil(s, SearchBudget(4, 2))
            if w:
                certs.append(hil_certificate(s, w))
        elif roll == 3:
            c = random_point_coloring(rng, 2, (1 << 10) - 2)
            try:
                certs.append(reduce_rt2_to_aht(c, 2, 10)[1])
            except NoWitnessFound:
                pass
        elif roll == 4:
            try:
                certs.append(chain_rt2_to_ipt2(random_pair_coloring(rng, 2, 12), 2)[1])
            except NoWitnessFound:
                pass
        else:
            certs.append(word_highest_letter(random_periodic_word(rng, 4, 4, 5), 2)[2])
    return certs


def _format_stability():
    rng = random.Random(707)
    failures = []
    certs = _certificate_corpus(rng)
    staged = sum(1 for c in certs if c.stages)
    for cert in certs:
        text = write_certificate(cert)
        again = write_certificate(read_certificate(text))
        if again != text:
            failures.append(("certificate", cert.principle))
    exprs = 0
    for _ in range(150):
        names = rng.choice([("n",), ("i", "j"), ("s",)])
        src = random_any_expr(rng, names)
        tree = parse_expr(src, names)
        printed = to_source(tree)
        exprs += 1
        if parse_expr(printed, names) != tree or to_source(parse_expr(printed, names)) != printed:
            failures.append(("expr", src, printed))
    return failures, f"{len(certs)} certificates ({staged} staged), {exprs} expressions, {len(failures)} mismatches"


def test_criterion_7_format_stability():
    _run(7, "certificate and expression round trips", None, _format_stability)


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
