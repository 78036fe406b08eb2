"""Desk-scale experiments on prime-factor counting statistics.

The package sieves exact factor counts over large ranges, measures
level-set densities against the Gaussian they approach, compares
two-point correlations with their predicted product form, and probes
the Fourier/pretentious machinery that links the two: frequency
expansions over shrinking intervals, reduced mean-square sums over
prime windows, and distance-based mean-value bounds.
"""

from .errors import (CapacityError, ContractError, DegenerateWindowError,
                     EmptyDomainError, UnknownPresetError)
from .sieve import (BigOmega, CountMode, FactorCountBlock, PrimeTable,
                    SieveConfig, SmallOmega, TruncatedOmega, enumerate_primes,
                    factor_counts, liouville, omega_oracle, read_block,
                    truncation_cutoff, write_block, write_block_csv)
from .averaging import (CESARO, LOGARITHMIC, WeightedAverage, cesaro_avg,
                        cesaro_to_log_decompose, harmonic_mass, log_avg)
from .stats import (DensityTable, GaussianModel, TypicalRange, density_table,
                    density_l1_gap, erdos_kac_ks, gaussian_density,
                    gaussian_model, normal_cdf, sathe_selberg_ratio_check,
                    tail_densities, turan_kubilius_check, typical_range,
                    write_density_csv)
from .profiles import TwoPointProfile, adopt_block, shared_counts, two_point_profile
from .correlation import (BoundedFunction, CorrelationReport, constant_function,
                          fourier_mode_function, indicator_function,
                          k_point_explore, parity_function, prime_shift_identity,
                          random_bounded_function, theorem_a_report,
                          theorem_b_prediction, theorem_c_sum, two_point_lhs,
                          typical_ell_exceptions)
from .pretentious import (FrequencyFamily, MultFunSpec, TwistSpec,
                          dirichlet_characters, dist_formula_residual, distance,
                          distance_sq_profile, distance_sq_to_twist, eval_multfun,
                          frequency_family, halasz_audit, liouville_spec,
                          log_t_grid, m0, mean_over_range, mode_spec,
                          twisted_distance, unit_spec)
from .reduction import (FourierTable, PrimeWindow, fourier_expand,
                        major_arc_measure, omega_truncation_gap, parseval_audit,
                        prime_exponential_sum, prime_window, reduced_sum,
                        reduced_sum_terms, reduction_inequality_audit,
                        taylor_truncation, window_formula_bounds)
from .oracle import (PeriodicCombo, PeriodicTerm, brute_correlation,
                     indicator_combo, moment_identity_check,
                     periodic_independence_check)

__version__ = "0.1.0"
