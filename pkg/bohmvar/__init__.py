__version__ = "unknown"
try:
    from . import version
    __version__ = version.version
except ImportError:
    pass

import warnings

from .utils import warning_format, to_json, write_json, write_csv  # NOQA
from .utils import abspath, check_file_existence  # NOQA
from .utils import ensure_dir_existence, StdAndFileLogger  # NOQA

from .states import WaveFunction, PolarForm, NodalHint, AtNodeError  # NOQA
from .states import polar, make_state, get_state, all_states  # NOQA
from .states import get_potential, all_potentials  # NOQA
from .operators import DiffOperator, Term, build_operator  # NOQA
from .operators import parse_operator, operator_for_state  # NOQA
from .fields import weak_field, imag_density, quantum_potential  # NOQA
from .fields import guiding_velocity, local_energy, pointwise_identity  # NOQA
from .fields import spin_weak_field, continuity_divergence  # NOQA
from .fields import field_scan, write_field_scan  # NOQA
from .quadrature import IntegrationScheme, EpsilonConvergence  # NOQA
from .quadrature import get_engine, all_engines, engine_for  # NOQA
from .quadrature import integrate, eps_excluded_integrate  # NOQA
from .quadrature import EquilibriumSampler, sample_equilibrium  # NOQA
from .decomposition import DecompositionReport, Decomposer, decompose  # NOQA
from .decomposition import expectation, var_q, var_b, q_term  # NOQA
from .decomposition import deficit_term, quantum_potential_mean  # NOQA
from .decomposition import check_qp_relation, uncertainty_check  # NOQA
from .decomposition import energy_q_term_polar  # NOQA
from .nodal import NodalDiagnostics, locate_nodes, estimate_zero_order  # NOQA
from .nodal import volume_growth, h6_verdict, diagnose  # NOQA
from .trajectories import Path, TrajectoryEnsemble  # NOQA
from .trajectories import integrate_trajectory, propagate_ensemble  # NOQA
from .trajectories import equivariance_stat, weak_value_series  # NOQA
from .cli import SettingsStorage, version, usage, get_settings  # NOQA
from .cli import settings  # NOQA
from .core import ScenarioRun, run_scenario  # NOQA

warnings.simplefilter('always', UserWarning)
warnings.formatwarning = warning_format
