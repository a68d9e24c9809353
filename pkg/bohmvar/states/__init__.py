from .wave_function import WaveFunction, PolarForm, NodalHint, AtNodeError  # NOQA
from .wave_function import polar, TAU_NODE, MAX_DERIVATIVE_ORDER  # NOQA
from .potentials import Potential, FreePotential, HarmonicPotential  # NOQA
from .potentials import CoulombPotential, register_potential  # NOQA
from .potentials import get_potential, all_potentials  # NOQA
from .catalog import register_state, get_state, all_states, make_state  # NOQA
from .catalog import CatalogState, HarmonicOscillator1D  # NOQA
from .catalog import HarmonicOscillator2D, Superposition  # NOQA
from .catalog import AngularHarmonicOscillator2D, Hydrogen1s  # NOQA
from .catalog import GaussianPacket, Spinor, SpinorSplit  # NOQA
from .hermite import hermite_functions, hermite_function_derivative  # NOQA
from .hermite import hermite_roots, radial_partial  # NOQA
