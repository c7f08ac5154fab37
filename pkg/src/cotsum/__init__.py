"""Cotangent sums c0(a/q), the Estermann function D(1, x), the moment constants
H_k and the limiting distribution of c0, each with an independent cross-check.
"""
__version__ = "0.1.0"

from ._backend import BACKEND, set_threads
from .cotangent import (
    EULER_GAMMA,
    CotangentValue,
    Method,
    PsiValue,
    c0_cf_telescoped,
    c0_direct,
    c0_sweep,
    cf_psi_sum,
    psi_via_reciprocity,
    reciprocity_residual,
    three_term_defect,
    vasyunin,
)
from .distribution import (
    DensityWitness,
    EmpiricalDistribution,
    Histogram,
    cdf_query,
    find_density_witness,
    histogram,
    s_tail_probe,
    sample_distribution,
    verify_witness,
)
from .errors import BudgetExhausted, CotsumError, DomainError, PrecisionExhausted, ResourceError
from .estermann import (
    DivisorTable,
    EstermannValue,
    d1_cf,
    d1_fractional_series,
    d1_rational,
    d1_truncated,
    s_majorant,
    sieve_divisors,
)
from .moments import H2_EXACT, HkEstimate, MomentReport, empirical_moment, hk_brute, hk_dft, hk_growth_probe, totient
from .rationals import ContinuedFraction, ReducedFraction, cf_alternate, cf_expand, cf_of_real, mod_inverse
