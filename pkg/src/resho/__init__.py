"""resho: rationally extended singular oscillators, their closed-form
propagators, and the axially symmetric magnetic fields that generate them.

Exact rational algebra builds the potentials and coefficient tables; every
closed form is cross-checked against independent numerical oracles.
"""
from .exactpoly import (BiPoly, RationalFunction, SturmChain, UniPoly,
                        isolate_roots, poly_gcd, rf_simplify,
                        sturm_root_count, wronskian)
from .hermite import NormalizationData, SeedSet, he, norm_data, seed_wronskians
from .magnetics import (FieldProfile, PositivityError, SingularityReport,
                        build_field, forward_check, singularity_match_report)
from .oracle import (DEFAULT_TOLERANCES, ConvergenceError, GridSpec,
                     QuadratureRule, SpectralSum, Tolerances,
                     eigenfunction_values, evolve_eigenfunction, gram_matrix,
                     schrodinger_residual, spectral_propagator)
from .qpropagator import (ComplexTime, PropagatorModel, QTable,
                          TimeDomainError, build_qtable, k_formal, k_osc,
                          propagator)
from .sequences import (GapSequence, SequenceError, SpectrumView,
                        WellPrediction, l_number, lenient, parse,
                        predicted_wells, spectrum, validate)
from .spectralmodel import (DegenerateCriticalPointError, Eigenstate,
                            PotentialModel, RegularityCertificate,
                            RegularityError, SpectrumMembershipError,
                            build_potential, certify_regular, count_wells,
                            eigenfunction, susy_check)

__version__ = "0.1.0"

__all__ = [
    "BiPoly", "ComplexTime", "ConvergenceError", "DEFAULT_TOLERANCES",
    "DegenerateCriticalPointError", "Eigenstate", "FieldProfile",
    "GapSequence", "GridSpec", "NormalizationData", "PositivityError",
    "PotentialModel", "PropagatorModel", "QTable", "QuadratureRule",
    "RationalFunction", "RegularityCertificate", "RegularityError",
    "SeedSet", "SequenceError", "SingularityReport", "SpectralSum",
    "SpectrumMembershipError", "SpectrumView", "SturmChain",
    "TimeDomainError", "Tolerances", "UniPoly", "WellPrediction",
    "build_field", "build_potential", "build_qtable", "certify_regular",
    "count_wells", "eigenfunction", "eigenfunction_values",
    "evolve_eigenfunction", "forward_check", "gram_matrix", "he",
    "isolate_roots", "k_formal", "k_osc", "l_number", "lenient",
    "norm_data", "parse", "poly_gcd", "predicted_wells", "propagator",
    "rf_simplify", "schrodinger_residual", "seed_wronskians",
    "singularity_match_report", "spectral_propagator", "spectrum",
    "sturm_root_count", "susy_check", "validate", "wronskian",
]
