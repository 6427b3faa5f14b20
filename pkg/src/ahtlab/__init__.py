"""Finite-instance laboratory for the Adjacent Hindman's Theorem and its neighbours."""

from .bits import DEFAULT_BIT_BUDGET, Run, adjacent_sums, is_apart, lam, mu, pop, run_endpoints
from .certificates import (
    Certificate,
    Verdict,
    aht_certificate,
    hil_certificate,
    ipt2_certificate,
    read_certificate,
    rt2_certificate,
    verify_aht,
    verify_certificate,
    verify_hil,
    verify_ipt2,
    verify_rt2,
    write_certificate,
)
from .coloring import (
    Coloring,
    PairColoring,
    Word,
    eval_coloring,
    induced_pair_coloring,
    projected_point_coloring,
    word_block_coloring,
)
from .dsl import parse_expr, to_source
from .errors import (
    AhtLabError,
    BudgetError,
    CertificateFormatError,
    DomainError,
    ExprRuntimeError,
    ExprSyntaxError,
    NoWitnessFound,
    SearchBudgetExceeded,
)
from .reductions import (
    blocks_from_rt2,
    chain_rt2_to_ipt2,
    project_aht_witness,
    reduce_aht_to_ipt2,
    reduce_rt2_to_aht,
    word_highest_letter,
)
from .solvers import (
    AhtWitness,
    HilWitness,
    Ipt2Witness,
    Rt2Witness,
    SearchBudget,
    solve_aht,
    solve_hil,
    solve_ipt2,
    solve_rt2,
)

__version__ = "0.1.0"
