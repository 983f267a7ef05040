"""Schur-Hadamard products of patterned random matrices.

Builds patterned ensembles from O(n) bits of randomness, measures their
*-moments against circular/semicircular targets, counts the constrained
index classes behind the trace expansion exactly, and produces spectral
diagnostics for the unit-disk comparison.
"""

__version__ = "0.1.0"

from .counting import (ConstraintSystem, CountReport, CountRow, PairSummary,
                       ReconstructionCheck, compatibility_report, count_constrained,
                       count_satisfying, count_single, joint_circularity_report,
                       moment_reconstruction_check)
from .ensemble import (PatternedMatrix, ProductMatrix, entry_covariance_probe,
                       hermitize, sample_patterned, sample_product, schur_hadamard)
from .errors import BudgetExceeded
from .links import (LinkFunction, RegularityReport, delta, eval_eps, hankel,
                    joint_injectivity, linear, linear_admissible, parse_link, poly,
                    projection, regularity_report, sym_toeplitz, toeplitz)
from .moments import (StarMomentEstimate, circular_star_moment, empirical_star_moment,
                      empirical_star_moments, semicircle_moment, symmetric_moment)
from .partitions import (ElementClassification, Partition, catalan, classify,
                         enumerate_nc2, enumerate_pair_partitions, enumerate_partitions,
                         is_noncrossing, iter_nc2, iter_pair_partitions, iter_partitions)
from .rng import (DEFAULT_SEED, GAUSSIAN, RADEMACHER, UNIFORM, DISTRIBUTIONS,
                  EntryDistribution, derive_seed, parse_distribution)
from .spectrum import SpectrumStats, eigenvalues, esm_stats, figure_data, write_eigs_csv
from .words import Word, all_words

__all__ = [
    "__version__",
    "BudgetExceeded",
    # links
    "LinkFunction", "RegularityReport", "toeplitz", "hankel", "sym_toeplitz",
    "linear", "projection", "poly", "parse_link", "eval_eps", "delta",
    "regularity_report", "joint_injectivity", "linear_admissible",
    # rng / ensemble
    "EntryDistribution", "GAUSSIAN", "RADEMACHER", "UNIFORM", "DISTRIBUTIONS",
    "parse_distribution", "derive_seed", "DEFAULT_SEED",
    "PatternedMatrix", "ProductMatrix", "sample_patterned", "sample_product",
    "schur_hadamard", "hermitize", "entry_covariance_probe",
    # partitions / words
    "Partition", "ElementClassification", "classify", "is_noncrossing",
    "enumerate_pair_partitions", "iter_pair_partitions", "enumerate_nc2", "iter_nc2",
    "enumerate_partitions", "iter_partitions", "catalan",
    "Word", "all_words",
    # moments
    "StarMomentEstimate", "circular_star_moment", "semicircle_moment",
    "empirical_star_moment", "empirical_star_moments", "symmetric_moment",
    # counting
    "ConstraintSystem", "CountRow", "CountReport", "PairSummary",
    "count_constrained", "count_satisfying", "count_single",
    "joint_circularity_report", "compatibility_report",
    "ReconstructionCheck", "moment_reconstruction_check",
    # spectrum
    "SpectrumStats", "eigenvalues", "esm_stats", "figure_data", "write_eigs_csv",
]
