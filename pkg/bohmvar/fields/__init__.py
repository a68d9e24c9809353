from .fields import FieldSample, weak_field, imag_density  # NOQA
from .fields import quantum_potential, guiding_velocity, local_energy  # NOQA
from .fields import pointwise_identity, spin_weak_field  # NOQA
from .fields import continuity_divergence, field_scan, write_field_scan  # NOQA
from .fields import operator_products, amplitude_laplacian_ratio  # NOQA
from .fields import phase_gradient, amplitude_gradient  # NOQA
