"""Perron-Frobenius structure of positive matrices on the coordinate lattice R^n.

Spectral data, peripheral cycle structure, ideal irreducibility of collections
and super-commutants, commutant collapse, and nilpotency certificates for
commutators of semi-commuting pairs.
"""

from .commutant import (Side, commutant_equality_gap, is_super_commutant_irreducible,
                        sample_semi_commuting, semi_commutant_feasible, super_commutant_relation)
from .errors import (BandSeparationFailure, CertificateFailure, DichotomyUndetected, EigensolverFailure,
                     HypothesisViolated, LatticeError, MatrixFormatError, PreconditionViolation,
                     QuasiNilpotentInput, QuotientNotScalarZero, SolverFailure)
from .lattice import DEFAULT_TOL, CoordinateIdeal, PosMatrix, Tolerances, is_invariant_ideal, is_quasi_interior
from .matrix_io import load_matrix, save_matrix
from .perron import (common_peripheral_eigenpair, commuting_eigenvalue, is_ideal_irreducible,
                     nonnegative_eigenvector, perron_pair, peripheral_cycle_structure, strongly_expanding_sum)
from .spectral import (local_spectral_radius, peripheral_projection, power_dichotomy, spectral_radius,
                       spectrum)
from .triangularize import (commutator_nilpotency, invariant_ideal_chain, nilpotency_index,
                            refine_to_maximal_chain)
from .verify import (SuiteConfig, comparison_check, random_irreducible, reducibility_detectors,
                     run_theorem_suite)

__version__ = "0.1.0"
