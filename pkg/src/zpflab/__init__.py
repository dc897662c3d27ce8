"""Random-phase field response toolkit.

Single particles responding to resonant field modes, two-particle brackets and
covariances on a shared field, spin labels, exchange parity and exclusion.
"""

__version__ = "0.1.0"

from .bipartite import (BipartitePair, Family, FamilyTag, PhaseAssignment, bracket_xp_distinct,
                        bracket_xp_same, bracket_xx_distinct, bracket_xx_same, classify_family,
                        degeneracy, phase_assignment, zeta12)
from .config import ScenarioConfig, config_from_dict, load_config
from .covariance import (Configuration, CovarianceReport, EntangledState, ObservablePair,
                         analytic_covariance, build_entangled_state, config_average,
                         covariance_terms, independent_covariance, mc_covariance,
                         mc_independent_covariance, product_state, quantum_covariance)
from .errors import (ConfigError, DimensionError, MissingModeError, ParityError, SameLevelError,
                     TruncationWarning)
from .halfint import HalfInt, PhaseParameter, SpinLabel
from .modes import (FieldRealization, Quadratures, all_modes, canonical, normal_from_quadratures,
                    normal_variable, pairing_estimate, quadratures_from_normal, sample_realization)
from .report import CheckRecord, RunReport, emit_trace
from .response import (LevelSystem, ParticleResponse, ResponseMatrix, bracket_closed_form,
                       canonical_commutator_deviation, commutator, evaluate_response,
                       harmonic_oscillator, heisenberg_operator, heisenberg_residual,
                       momentum_matrix, poisson_bracket_numeric, random_hermitian,
                       schrodinger_element, trk_sum, trk_table)
from .runner import run_scenario
from .spin import (CompleteState, Parity, PauliResult, build_complete_state, exchange_factor,
                   exchange_parity, pauli_feasibility, required_zeta_parity, spin_config_average,
                   spin_covariance, spin_space_covariance, swap_parity)
