from .scheme import IntegrationScheme, box_half_width, exclusion_radii  # NOQA
from .eps_exclusion import EpsilonConvergence, classify_sequence  # NOQA
from .engine import Engine, GaussLegendreEngine, MidpointEngine,\
    SphericalEngine, register_engine, get_engine, all_engines, engine_for,\
    integrate, eps_excluded_integrate  # NOQA
from .sampler import EquilibriumSampler, sample_equilibrium,\
    marginal_edges, chi_square  # NOQA
