"""Verification toolkit for triple-sum theorems over primes in a fixed
residue class (1 mod 3).

Subpackages cover: exact residue-ring sumsets, the local sumset theorem and
its sharpness example, exact rational LP certificates for the support-profile
bound table, interval branch-and-bound certification of the region
inequalities, randomized counterexample search for the sequence lemmas, and a
sieve/FFT engine for desk-scale representation counting and the W-trick
transference pipeline.
"""

__version__ = "0.1.0"

from .lemmas import random_counterexample_search
from .localcheck import (
    local_class_selection,
    random_weighted_check,
    verify_local_indicator,
    verify_sharpness,
)
from .lp import reproduce_table, solve_lp_exact, t_function
from .primes import build_subset, count_representations, scan_targets, sieve_primes
from .regions import certify_all_regions, certify_region
from .residues import factorize_squarefree, triple_sumset, unit_class_set
from .transfer import run_pipeline, spectrum, verify_decay

__all__ = [
    "build_subset",
    "certify_all_regions",
    "certify_region",
    "count_representations",
    "factorize_squarefree",
    "local_class_selection",
    "random_counterexample_search",
    "random_weighted_check",
    "reproduce_table",
    "run_pipeline",
    "scan_targets",
    "sieve_primes",
    "solve_lp_exact",
    "spectrum",
    "t_function",
    "triple_sumset",
    "unit_class_set",
    "verify_decay",
    "verify_local_indicator",
    "verify_sharpness",
]
