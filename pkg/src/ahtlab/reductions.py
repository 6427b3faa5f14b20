"""Executable reductions between the principles.

* RT2 => AHT: color pairs by ``f(i, j) = c(2^(i+1) + .. + 2^j)``, find an
  f-homogeneous ``J``, and return the blocks between consecutive exponents.
* AHT => IPT2: color points by ``g(n) = f(lam(n), mu(n))``, find an apart
  g-witness ``H``, and project it to its ``lam`` and ``mu`` images.
* The word pipeline colors ``n`` by the largest letter in the window
  ``[lam(n), mu(n)]`` and reads off the highest recurring letter.

Each pipeline returns its witness together with a staged certificate whose
stages can be re-verified on their own.
"""

from __future__ import annotations

from typing import Sequence

from . import certificates as cert_mod
from .bits import DEFAULT_BIT_BUDGET, check_budget, lam, mu
from .certificates import (
    CLAIM_HIGHEST_LETTER,
    CLAIM_MONOCHROMATIC,
    NOTE_BOUNDED,
    NOTE_TRUNCATION,
    Certificate,
    certify,
    format_int_list,
    make_instance,
    verify_aht,
    verify_ipt2,
)
from .coloring import Coloring, PairColoring, Word, induced_pair_coloring, projected_point_coloring, word_block_coloring
from .errors import BudgetError, NoWitnessFound, SearchBudgetExceeded
from .solvers import AhtWitness, Ipt2Witness, SearchBudget, solve_aht, solve_rt2


class ReductionFailure(AssertionError):
    """A reduction produced a witness its verifier rejects; indicates a bug."""


def blocks_from_rt2(J: Sequence[int], bit_budget: int = DEFAULT_BIT_BUDGET) -> tuple[int, ...]:
    """``h_n = 2^(j_n + 1) + .. + 2^(j_(n+1)) = 2^(j_(n+1) + 1) - 2^(j_n + 1)``."""
    if len(J) < 2:
        raise ValueError("need at least two exponents")
    for a, b in zip(J, J[1:]):
        if not 0 <= a < b:
            raise ValueError(f"exponents must be strictly increasing and nonnegative, got {a}, {b}")
    if J[-1] + 1 > bit_budget:
        raise BudgetError(f"exponent {J[-1]} needs more than {bit_budget} bits")
    return tuple(check_budget((1 << (b + 1)) - (1 << (a + 1)), bit_budget) for a, b in zip(J, J[1:]))


def project_aht_witness(H: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return tuple(lam(h) for h in H), tuple(mu(h) for h in H)


def _tag(exc: SearchBudgetExceeded, stage: str) -> SearchBudgetExceeded:
    exc.stage = stage
    return exc


def reduce_rt2_to_aht(
    c: Coloring,
    m: int,
    rt2_bound: int,
    *,
    node_limit: int | None = None,
    threads: int = 1,
    bit_budget: int = DEFAULT_BIT_BUDGET,
) -> tuple[AhtWitness, Certificate]:
    """AHT witness of size ``m`` for ``c`` via an RT2 witness of size ``m + 1`` on exponents below ``rt2_bound``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    f = induced_pair_coloring(c, rt2_bound)
    try:
        rt2 = solve_rt2(f, SearchBudget(rt2_bound, m + 1, node_limit, threads=threads))
    except SearchBudgetExceeded as exc:
        raise _tag(exc, "RT2") from None
    if rt2 is None:
        raise NoWitnessFound("RT2", f"no homogeneous set of size {m + 1} below {rt2_bound}")
    H = blocks_from_rt2(rt2.J, bit_budget)
    verdict = verify_aht(c, H, rt2.color, require_apart=True)
    if not verdict.ok:
        raise ReductionFailure(f"block set {H} of J = {rt2.J} failed: {verdict}")
    aht = AhtWitness(H, rt2.color)
    stages = [
        cert_mod.rt2_certificate(f, rt2, search_bound=rt2_bound, bit_budget=bit_budget),
        cert_mod.aht_certificate(c, aht, exhaustive=False, bit_budget=bit_budget),
    ]
    inst = make_instance(c, m=m, pair_bound=rt2_bound, bit_budget=bit_budget, require_apart=True, note=NOTE_TRUNCATION)
    wit = {"H": format_int_list(H), "J": format_int_list(rt2.J)}
    return aht, certify(Certificate("RT2_TO_AHT", inst, wit, rt2.color, True, stages=stages))


def reduce_aht_to_ipt2(
    f: PairColoring,
    m: int,
    budget: SearchBudget | None = None,
    *,
    aht_stage: str = "search",
    rt2_bound: int | None = None,
    witness: Sequence[int] | None = None,
    bit_budget: int = DEFAULT_BIT_BUDGET,
) -> tuple[Ipt2Witness, Certificate]:
    """IPT2 witness for ``f`` from an AHT witness for ``g(n) = f(lam(n), mu(n))``.

    The AHT stage is a direct search (``aht_stage="search"``, bounded by
    ``budget``), the RT2 pipeline (``"chain"``), or a caller-supplied apart
    set passed as ``witness``.
    """
    g = projected_point_coloring(f, bit_budget)
    if witness is not None:
        H = tuple(witness)
        color = g(H[0])
        verdict = verify_aht(g, H, color, require_apart=True)
        if not verdict.ok:
            raise ValueError(f"supplied H is not an AHT witness for g: {verdict}")
        aht = AhtWitness(H, color)
        aht_cert = cert_mod.aht_certificate(g, aht, exhaustive=False, bit_budget=bit_budget)
    elif aht_stage == "chain":
        aht, aht_cert = reduce_rt2_to_aht(
            g, m, rt2_bound if rt2_bound is not None else f.bound,
            node_limit=budget.node_limit if budget else None,
            threads=budget.threads if budget else 1,
            bit_budget=bit_budget,
        )
    elif aht_stage == "search":
        if budget is None:
            budget = SearchBudget(g.bound, m)
        if budget.size != m:
            budget = SearchBudget(budget.bound, m, budget.node_limit, True, budget.threads)
        try:
            aht = solve_aht(g, budget)
        except SearchBudgetExceeded as exc:
            raise _tag(exc, "AHT") from None
        if aht is None:
            raise NoWitnessFound("AHT", f"no apart witness of size {m} up to {budget.bound}")
        aht_cert = cert_mod.aht_certificate(g, aht, search_bound=budget.bound, bit_budget=bit_budget)
    else:
        raise ValueError(f"unknown AHT stage {aht_stage!r}")

    H1, H2 = project_aht_witness(aht.H)
    ipt = Ipt2Witness(H1, H2, aht.color)
    verdict = verify_ipt2(f, H1, H2, ipt.color)
    if not verdict.ok:
        raise ReductionFailure(f"projection of H = {aht.H} failed: {verdict}")
    ipt_cert = cert_mod.ipt2_certificate(f, ipt, exhaustive=False, bit_budget=bit_budget)
    inst = make_instance(f, m=len(aht.H), bit_budget=bit_budget, note=NOTE_BOUNDED)
    wit = {"H": format_int_list(aht.H), "H1": format_int_list(H1), "H2": format_int_list(H2)}
    cert = Certificate("AHT_TO_IPT2", inst, wit, ipt.color, aht_cert.exhaustive, stages=[aht_cert, ipt_cert])
    return ipt, certify(cert)


def chain_rt2_to_ipt2(
    f: PairColoring,
    m: int,
    rt2_bound: int | None = None,
    *,
    node_limit: int | None = None,
    threads: int = 1,
    bit_budget: int = DEFAULT_BIT_BUDGET,
) -> tuple[Ipt2Witness, Certificate]:
    """RT2 on the induced coloring of ``g``, then blocks, then projection."""
    budget = SearchBudget(f.bound, m, node_limit, threads=threads)
    ipt, staged = reduce_aht_to_ipt2(f, m, budget, aht_stage="chain", rt2_bound=rt2_bound, bit_budget=bit_budget)
    r2a, ipt_cert = staged.stages
    rt2_cert, aht_cert = r2a.stages
    inst = make_instance(f, m=m, pair_bound=rt2_bound if rt2_bound is not None else f.bound,
                         bit_budget=bit_budget, note=NOTE_TRUNCATION)
    wit = dict(staged.witness)
    cert = Certificate("CHAIN", inst, wit, ipt.color, True, stages=[rt2_cert, aht_cert, ipt_cert])
    return ipt, certify(cert)


def word_search_bound(w: Word, m: int, bit_budget: int = DEFAULT_BIT_BUDGET) -> int:
    """Smallest bound guaranteed to contain a tail-reaching witness of size ``m``.

    Taking a position ``q`` of the largest period letter in the first period
    after the prefix, ``2^q, 2^(q+p), .., 2^(q+(m-1)p)`` is such a witness.
    """
    if not w.periodic:
        return min((1 << len(w.letters)) - 1, (1 << bit_budget) - 1)
    exp = w.prefix_length + m * w.period
    if exp > bit_budget:
        raise BudgetError(f"word search needs {exp} bits, budget is {bit_budget}")
    return (1 << exp) - 1


def word_highest_letter(
    w: Word,
    m: int,
    budget: SearchBudget | None = None,
    *,
    bit_budget: int = DEFAULT_BIT_BUDGET,
) -> tuple[int, AhtWitness, Certificate]:
    """Color of an AHT witness for the window-maximum coloring of ``w``.

    For a periodic word the witness is required to start past the prefix
    and to cover at least one full period, so its longest run sum sees every
    period letter and the color is the largest letter occurring infinitely
    often. Finite words get the monochromatic color only.
    """
    if m < 2:
        raise ValueError("the word pipeline needs m >= 2")
    d = word_block_coloring(w, bit_budget)
    bound = budget.bound if budget else word_search_bound(w, m, bit_budget)
    search = SearchBudget(bound, m, budget.node_limit if budget else None, True, budget.threads if budget else 1)
    if w.periodic:
        min_lam, min_span, claim = w.prefix_length, w.period, CLAIM_HIGHEST_LETTER
    else:
        min_lam, min_span, claim = 0, 0, CLAIM_MONOCHROMATIC
    try:
        aht = solve_aht(d, search, min_lam=min_lam, min_span=min_span)
    except SearchBudgetExceeded as exc:
        raise _tag(exc, "AHT") from None
    if aht is None:
        raise NoWitnessFound("AHT", f"no witness of size {m} up to {bound}")
    stage = cert_mod.aht_certificate(d, aht, search_bound=bound, bit_budget=bit_budget)
    inst = make_instance(d, m=m, search_bound=bound, bit_budget=bit_budget, require_apart=True, note=NOTE_BOUNDED)
    wit = {"H": format_int_list(aht.H), "claim": claim}
    cert = certify(Certificate("WORD", inst, wit, aht.color, True, stages=[stage]))
    return aht.color, aht, cert
