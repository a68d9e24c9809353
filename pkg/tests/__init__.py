from . import test_utils
from . import test_states
from . import test_operators
from . import test_fields
from . import test_quadrature
from . import test_nodal
from . import test_decomposition
from . import test_trajectories
from . import test_cli
