"""Ground states of the transverse-field Ising chain with a translationally
symmetric restricted Boltzmann machine, optimized by variational Monte Carlo
with stochastic reconfiguration, plus classical-spin analysis of what the
optimized couplings encode.
"""

from .analysis import (GammaScan, GammaScanPoint, TailReport, align_origin,
                       gamma_scan, tail_report, tail_window, w_tail)
from .errors import (CapabilityError, ConfigurationError, DegenerateInputError,
                     NumericalFault, OptimizationFault, RbmTfiError,
                     StatisticalFault)
from .exact import (EdResult, ExactMoments, ed_ground_state, exact_expectations,
                    free_fermion_energy)
from .rbm import (RbmParams, ThetaCache, lncosh2, load_params, log_derivatives,
                  log_psi, make_cache, psi_ratio, save_params, update_cache)
from .spins import TfiParams, as_spins, diagonal_energy, enumerate_spins, random_spins, shift
from .sr import OptTrace, SrConfig, optimize, optimize_exact, solve_sr, sr_update
from .stats import McEstimate, binning_estimate, jackknife
from .thermo import (JointConfig, Temperature, ThermalSample, ThermoPoint,
                     ThermoScan, rbm_energy, specific_heat, temperature_scan,
                     thermal_sample)
from .vmc import (ChainState, SamplerConfig, VmcMoments, estimate, local_energy,
                  make_chain_state, metropolis_sweep)

__version__ = "0.1.0"
