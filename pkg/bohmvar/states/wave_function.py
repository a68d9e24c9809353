import numpy as np
from scipy import optimize

from ..utils import as_points

TAU_NODE = 1e-10
MAX_DERIVATIVE_ORDER = 4
NODE_REGION = 0.5


class AtNodeError(ValueError):
    """
    Raised when a field that divides by |psi|^2 is evaluated at a point
    where |psi| < TAU_NODE * max|psi|.
    """
    pass


class NodalHint(object):
    """
    Declared description of the nodal set of a state.

    :param kind: One of ``'empty'``, ``'points'`` or ``'hyperplanes'``.
    :param points: For ``'points'``: list of node positions.
    :param hyperplanes: For ``'hyperplanes'``: list of pairs
                        (axis, coordinate) of hyperplanes x_axis = coordinate.
    """
    KINDS = ['empty', 'points', 'hyperplanes']

    def __init__(self, kind='empty', points=None, hyperplanes=None):
        if kind not in self.KINDS:
            raise ValueError(f"Kind of nodal hint ({kind}) must be one of "
                             f"{self.KINDS}.")
        self.kind = kind
        self.points = [np.array(p, dtype=float) for p in (points or [])]
        self.hyperplanes = [(int(a), float(c)) for a, c in
                            (hyperplanes or [])]

    @property
    def is_empty(self):
        return len(self.points) == 0 and len(self.hyperplanes) == 0

    def coordinates(self, axis):
        """
        Sorted coordinates along ``axis`` where the nodal set crosses the
        axis direction.
        """
        coords = [p[axis] for p in self.points]
        coords += [c for a, c in self.hyperplanes if a == axis]
        return sorted(set(coords))

    def locations(self, anchor):
        """
        Representative node positions. For hyperplanes the position on the
        hyperplane closest to ``anchor`` is taken.
        """
        locs = [p.copy() for p in self.points]
        for axis, coord in self.hyperplanes:
            loc = np.array(anchor, dtype=float)
            loc[axis] = coord
            locs.append(loc)
        return locs

    def distance(self, X):
        """
        Distance from points X (N, d) to the declared nodal set (inf when
        the set is empty).
        """
        X = np.asarray(X, dtype=float)
        dist = np.full(X.shape[0], np.inf)
        for p in self.points:
            dist = np.minimum(dist, np.sqrt(np.sum((X - p)**2, axis=1)))
        for axis, coord in self.hyperplanes:
            dist = np.minimum(dist, np.abs(X[:, axis] - coord))
        return dist

    def to_dict(self):
        return {'kind': self.kind,
                'points': [p.tolist() for p in self.points],
                'hyperplanes': [list(h) for h in self.hyperplanes]}

    def __repr__(self):
        if self.is_empty:
            return "NodalHint(empty)"
        return f"NodalHint({self.kind}, points={len(self.points)}, "\
               f"hyperplanes={len(self.hyperplanes)})"


class PolarForm(object):
    """
    Polar representation psi = R exp(iS/hbar) sampled at points: amplitude R
    and phase gradient grad S (the phase itself is never unwrapped).
    """
    def __init__(self, amplitude, phase_gradient):
        self.amplitude = amplitude
        self.phase_gradient = phase_gradient

    def __repr__(self):
        return f"PolarForm(R={self.amplitude}, grad_S={self.phase_gradient})"


class WaveFunction(object):
    """
    Abstract class representing a normalized, possibly multi-component,
    wave function in d <= 3 dimensions with exact derivatives.

    New state must be inheritted from this class and implement
    :meth:`_evaluate` and :meth:`_derivative` on arrays of points of shape
    (N, dim) returning arrays of shape (N, components).

    :cvar str WaveFunction.id: the unique identifier of the state kind.
    :param hbar: Reduced Planck constant in units of the state.
    :param mass: Particle mass in units of the state.
    """
    id = ''
    max_order = MAX_DERIVATIVE_ORDER
    real_valued = False

    def __init__(self, dim=1, components=1, hbar=1.0, mass=1.0):
        if dim not in [1, 2, 3]:
            raise ValueError(f"Dimension ({dim}) must be 1, 2 or 3.")
        if components not in [1, 2]:
            raise ValueError(f"Number of components ({components}) must be 1"
                             " or 2.")
        if hbar <= 0 or mass <= 0:
            raise ValueError(f"Units hbar ({hbar}) and mass ({mass}) must be"
                             " positive.")
        self.dim = dim
        self.components = components
        self.hbar = float(hbar)
        self.mass = float(mass)
        self._max_abs = None
        self._peak = None

    # Methods to implement in subclasses
    def _evaluate(self, X):
        raise NotImplementedError

    def _derivative(self, X, alpha):
        raise NotImplementedError

    @property
    def decay_rate(self):
        """
        Positive alpha with |psi(x)| <= C exp(-alpha |x|).
        """
        raise NotImplementedError

    @property
    def length_scale(self):
        return 1.0

    @property
    def nodal_hint(self):
        return NodalHint()

    @property
    def center_offset(self):
        """
        Distance from origin of the region where the state is concentrated.
        """
        return 0.0

    @property
    def cusps(self):
        """
        Points where the state is not smooth (e.g. Coulomb cusp).
        """
        return []

    @property
    def energy(self):
        """
        Eigenenergy for stationary states and None otherwise.
        """
        return None

    @property
    def potential(self):
        return None

    @property
    def params(self):
        return {}

    # Common methods
    @property
    def units(self):
        return (self.hbar, self.mass)

    @property
    def is_stationary(self):
        return self.energy is not None

    @property
    def characteristic_time(self):
        """
        Time scale 2 pi hbar / |E| of the state, 2 pi for zero energy.
        """
        if self.energy is None or self.energy == 0:
            return 2 * np.pi
        return 2 * np.pi * self.hbar / abs(self.energy)

    @property
    def descriptor(self):
        items = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.id}:{items}" if items else self.id

    def _check_alpha(self, alpha):
        alpha = tuple(int(a) for a in np.atleast_1d(alpha))
        if len(alpha) != self.dim or any(a < 0 for a in alpha):
            raise ValueError(f"Multi-index {alpha} is not valid for "
                             f"dimension {self.dim}.")
        if sum(alpha) > self.max_order:
            raise ValueError(f"Derivative order {sum(alpha)} exceeds "
                             f"available order {self.max_order} of state "
                             f"{self.descriptor}.")
        return alpha

    def value(self, x):
        """
        Value of the state at position ``x`` (shape (d,)) or positions
        (shape (N, d)). Returns array of shape (components,) or
        (N, components).
        """
        X, single = as_points(x, self.dim)
        result = self._evaluate(X)
        return result[0] if single else result

    def partial(self, x, alpha):
        """
        Partial derivative d^alpha psi at ``x``, exact.

        :param alpha: Multi-index of length d with sum not greater than 4.
        """
        alpha = self._check_alpha(alpha)
        X, single = as_points(x, self.dim)
        if sum(alpha) == 0:
            result = self._evaluate(X)
        else:
            result = self._derivative(X, alpha)
        return result[0] if single else result

    def unit_index(self, axis, order=1):
        return tuple(order if i == axis else 0 for i in range(self.dim))

    def gradient(self, x):
        """
        Gradient of shape (N, d, components) (or (d, components)).
        """
        X, single = as_points(x, self.dim)
        grad = np.stack([self._derivative(X, self.unit_index(j))
                         for j in range(self.dim)], axis=1)
        return grad[0] if single else grad

    def laplacian(self, x):
        X, single = as_points(x, self.dim)
        lap = sum(self._derivative(X, self.unit_index(j, 2))
                  for j in range(self.dim))
        return lap[0] if single else lap

    def density(self, x):
        """
        Born density |psi|^2 (summed over components).
        """
        X, single = as_points(x, self.dim)
        rho = np.sum(np.abs(self._evaluate(X))**2, axis=1)
        return rho[0] if single else rho

    def _search_maximum(self):
        n_per_axis = {1: 2001, 2: 201, 3: 41}[self.dim]
        half = self.center_offset + 6 * self.length_scale
        axis = np.linspace(-half, half, n_per_axis)
        grids = np.meshgrid(*([axis] * self.dim), indexing='ij')
        X = np.stack([g.ravel() for g in grids], axis=1)
        for cusp in self.cusps:
            X = np.vstack([X, np.reshape(cusp, (1, self.dim))])
        abs_values = np.sqrt(self.density(X))
        best = X[np.argmax(abs_values)]

        def neg_density(point):
            return -self.density(np.reshape(point, (1, self.dim)))[0]

        res = optimize.minimize(neg_density, best, method='Nelder-Mead',
                                options={'xatol': 1e-10, 'fatol': 1e-14})
        if -res.fun > np.max(abs_values)**2:
            best = res.x
        self._peak = np.array(best, dtype=float)
        self._max_abs = float(np.sqrt(self.density(
            self._peak.reshape(1, self.dim))[0]))

    @property
    def max_abs(self):
        """
        Maximum of |psi| found numerically (cached).
        """
        if self._max_abs is None:
            self._search_maximum()
        return self._max_abs

    @property
    def peak(self):
        """
        Position of the maximum of |psi| (cached).
        """
        if self._peak is None:
            self._search_maximum()
        return self._peak

    @property
    def node_threshold(self):
        return TAU_NODE * self.max_abs

    def near_nodes(self, X):
        """
        Mask of points within NODE_REGION length scales of the declared
        nodal set.
        """
        region = NODE_REGION * self.length_scale
        return self.nodal_hint.distance(X) < region

    def at_node(self, x):
        """
        Boolean mask of points that count as nodes: exact zeros of psi and
        points near the declared nodal set where |psi| is below the node
        threshold. Far-field underflow is not a node.
        """
        X, single = as_points(x, self.dim)
        abs_values = np.sqrt(self.density(X))
        mask = (abs_values == 0) | ((abs_values < self.node_threshold) &
                                    self.near_nodes(X))
        return mask[0] if single else mask

    def __repr__(self):
        return f"{self.__class__.__name__}({self.descriptor})"


def polar(psi, x):
    """
    Polar form (R, grad S) of scalar state at position(s) ``x``.

    :raises AtNodeError: if some point is at node.
    :raises ValueError: for spinor states.
    """
    if psi.components != 1:
        raise ValueError("Polar form is not supported for spinor states.")
    X, single = as_points(x, psi.dim)
    values = psi.value(X)[:, 0]
    amplitude = np.abs(values)
    if np.any(psi.at_node(X)):
        raise AtNodeError(f"Polar form is undefined at node of "
                          f"{psi.descriptor}.")
    grad = psi.gradient(X)[:, :, 0]
    phase_gradient = psi.hbar * np.imag(grad / values[:, None])
    if single:
        return PolarForm(amplitude[0], phase_gradient[0])
    return PolarForm(amplitude, phase_gradient)
