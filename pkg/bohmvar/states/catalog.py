import math
import numbers

import numpy as np

from .wave_function import WaveFunction, NodalHint
from .hermite import hermite_function_derivative, hermite_roots,\
    radial_partial, exponent_derivative_polynomial
from .potentials import HarmonicPotential, CoulombPotential
from ..utils import parse_descriptor

_registered_states = {}


def register_state(state, id=None):
    """
    Registers the specified class of states under ``id`` (``state.id`` by
    default).

    :raises ValueError: if state with the same ``id`` was already\
                        registered.
    """
    id = id or state.id
    if id in _registered_states:
        raise ValueError(f"State '{id}' already registered.")
    _registered_states[id] = state


def get_state(id):
    """
    Returns the class of states with the specified id.

    :raises ValueError: if state with such ``id`` was not registered.
    """
    if id not in _registered_states:
        raise ValueError(f"State '{id}' not registered. Available states: "
                         f"{', '.join(_registered_states)}.")
    return _registered_states[id]


def all_states():
    """
    Returns an iterator over ids of all registered states.
    """
    for id in _registered_states:
        yield id


def make_state(descriptor, **params):
    """
    Creates normalized state from descriptor ``name:key=value,...``.
    Keyword arguments override values from descriptor.

    :raises ValueError: for unknown name or invalid parameters.
    """
    if isinstance(descriptor, WaveFunction):
        return descriptor
    name, parsed = parse_descriptor(descriptor)
    parsed.update(params)
    cls = get_state(name)
    try:
        return cls.from_params(**parsed)
    except TypeError as e:
        raise ValueError(f"Wrong parameters for state '{name}': {e}")


def _check_quantum_number(name, value):
    if isinstance(value, numbers.Real) and not isinstance(value, bool) and\
            float(value).is_integer() and value >= 0:
        return int(value)
    raise ValueError(f"Quantum number {name} ({value}) must be a "
                     "non-negative integer.")


def _ho_factor(n, k, beta, coords):
    """
    k-th derivative of the 1D oscillator eigenfunction
    sqrt(beta) phi_n(beta x).
    """
    return beta**(k + 0.5) * hermite_function_derivative(n, k, beta * coords)


class CatalogState(WaveFunction):
    """
    Base class of catalog states that could be created from parameters.
    """
    @classmethod
    def from_params(cls, **params):
        return cls(**params)

    def _units_params(self):
        params = {}
        if self.hbar != 1:
            params['hbar'] = self.hbar
        if self.mass != 1:
            params['mass'] = self.mass
        return params


class HarmonicOscillator1D(CatalogState):
    """
    Eigenstate n of the one-dimensional harmonic oscillator

        psi_n(x) = (m w / pi hbar)^{1/4} (2^n n!)^{-1/2} H_n(xi) e^{-xi^2/2},
        xi = sqrt(m w / hbar) x.

    :param n: Quantum number.
    :param omega: Frequency of the oscillator.
    """
    id = 'ho1d'
    real_valued = True

    def __init__(self, n=0, omega=1.0, hbar=1.0, mass=1.0):
        super(HarmonicOscillator1D, self).__init__(dim=1, components=1,
                                                   hbar=hbar, mass=mass)
        self.n = _check_quantum_number('n', n)
        if omega <= 0:
            raise ValueError(f"Frequency ({omega}) must be positive.")
        self.omega = float(omega)
        self.beta = math.sqrt(self.mass * self.omega / self.hbar)

    def _evaluate(self, X):
        value = _ho_factor(self.n, 0, self.beta, X[:, 0])
        return value.astype(complex)[:, None]

    def _derivative(self, X, alpha):
        value = _ho_factor(self.n, alpha[0], self.beta, X[:, 0])
        return value.astype(complex)[:, None]

    @property
    def decay_rate(self):
        # Gaussian tails are below any exponential outside 8 / beta.
        return 4 * self.beta

    @property
    def length_scale(self):
        return 1 / self.beta

    @property
    def nodal_hint(self):
        roots = hermite_roots(self.n) / self.beta
        if len(roots) == 0:
            return NodalHint()
        return NodalHint('points', points=[[r] for r in roots])

    @property
    def energy(self):
        return (self.n + 0.5) * self.hbar * self.omega

    @property
    def potential(self):
        return HarmonicPotential(self.omega, self.mass)

    @property
    def params(self):
        params = {'n': self.n}
        if self.omega != 1:
            params['omega'] = self.omega
        params.update(self._units_params())
        return params


class HarmonicOscillator2D(CatalogState):
    """
    Product eigenstate psi_nx(x) psi_ny(y) of the isotropic two-dimensional
    oscillator. Its nodal set is a union of lines through Hermite roots.
    """
    id = 'ho2d'
    real_valued = True

    def __init__(self, nx=0, ny=0, omega=1.0, hbar=1.0, mass=1.0):
        super(HarmonicOscillator2D, self).__init__(dim=2, components=1,
                                                   hbar=hbar, mass=mass)
        self.nx = _check_quantum_number('nx', nx)
        self.ny = _check_quantum_number('ny', ny)
        if omega <= 0:
            raise ValueError(f"Frequency ({omega}) must be positive.")
        self.omega = float(omega)
        self.beta = math.sqrt(self.mass * self.omega / self.hbar)

    def _derivative(self, X, alpha):
        fx = _ho_factor(self.nx, alpha[0], self.beta, X[:, 0])
        fy = _ho_factor(self.ny, alpha[1], self.beta, X[:, 1])
        return (fx * fy).astype(complex)[:, None]

    def _evaluate(self, X):
        return self._derivative(X, (0, 0))

    @property
    def decay_rate(self):
        return 4 * self.beta

    @property
    def length_scale(self):
        return 1 / self.beta

    @property
    def nodal_hint(self):
        planes = [(0, r / self.beta) for r in hermite_roots(self.nx)]
        planes += [(1, r / self.beta) for r in hermite_roots(self.ny)]
        if len(planes) == 0:
            return NodalHint()
        return NodalHint('hyperplanes', hyperplanes=planes)

    @property
    def energy(self):
        return (self.nx + self.ny + 1) * self.hbar * self.omega

    @property
    def potential(self):
        return HarmonicPotential(self.omega, self.mass)

    @property
    def params(self):
        params = {'nx': self.nx, 'ny': self.ny}
        if self.omega != 1:
            params['omega'] = self.omega
        params.update(self._units_params())
        return params


class Superposition(CatalogState):
    """
    Linear combination sum_k c_k psi_k of states with equal dimension,
    number of components and units.

    :param states: List of states.
    :param coefficients: Complex coefficients.
    :param normalize: If True coefficients are divided by
                      sqrt(sum |c_k|^2), that gives normalized state when
                      members are orthonormal.
    :param nodal_hint: Declared nodal set, it could not be derived from
                       members in general.
    """
    id = 'superposition'

    def __init__(self, states, coefficients, normalize=True, nodal_hint=None):
        if len(states) == 0 or len(states) != len(coefficients):
            raise ValueError("Superposition needs equal non-zero numbers of "
                             "states and coefficients.")
        first = states[0]
        for state in states[1:]:
            if (state.dim != first.dim or
                    state.components != first.components or
                    state.units != first.units):
                raise ValueError("States of superposition must have the same"
                                 " dimension, components and units.")
        super(Superposition, self).__init__(dim=first.dim,
                                            components=first.components,
                                            hbar=first.hbar,
                                            mass=first.mass)
        coefficients = np.array(coefficients, dtype=complex)
        if normalize:
            norm = np.sqrt(np.sum(np.abs(coefficients)**2))
            if norm == 0:
                raise ValueError("All coefficients of superposition are "
                                 "zero.")
            coefficients = coefficients / norm
        self.states = list(states)
        self.coefficients = coefficients
        self._nodal_hint = nodal_hint or NodalHint()
        self.real_valued = (all(s.real_valued for s in states) and
                            np.all(np.imag(coefficients) == 0))

    def _evaluate(self, X):
        return sum(c * s._evaluate(X)
                   for c, s in zip(self.coefficients, self.states))

    def _derivative(self, X, alpha):
        return sum(c * s._derivative(X, alpha)
                   for c, s in zip(self.coefficients, self.states))

    @property
    def decay_rate(self):
        return min(s.decay_rate for s in self.states)

    @property
    def length_scale(self):
        return max(s.length_scale for s in self.states)

    @property
    def center_offset(self):
        return max(s.center_offset for s in self.states)

    @property
    def cusps(self):
        return [c for s in self.states for c in s.cusps]

    @property
    def nodal_hint(self):
        return self._nodal_hint

    @property
    def energy(self):
        energies = [s.energy for s in self.states]
        if any(e is None for e in energies):
            return None
        if max(energies) - min(energies) > 1e-12 * max(1, abs(energies[0])):
            return None
        return energies[0]

    @property
    def potential(self):
        potentials = [s.potential for s in self.states]
        if all(p == potentials[0] for p in potentials):
            return potentials[0]
        return None

    @property
    def descriptor(self):
        inner = "+".join(f"({c})*{s.descriptor}"
                         for c, s in zip(self.coefficients, self.states))
        return f"{self.id}:{inner}"


class AngularHarmonicOscillator2D(Superposition):
    """
    Eigenstate of the two-dimensional oscillator with angular momentum
    l hbar, l = +1 or -1:

        psi = (x +- i y) exp(-r^2/2) / sqrt(pi)   (beta = 1),

    built as (psi_10 +- i psi_01) / sqrt(2). Single point node at origin.
    """
    id = 'ho2d_angular'

    def __init__(self, l=1, omega=1.0, hbar=1.0, mass=1.0):
        if l not in [1, -1]:
            raise ValueError(f"Angular number l ({l}) must be 1 or -1.")
        self.l = int(l)
        self.omega = float(omega)
        states = [HarmonicOscillator2D(1, 0, omega, hbar, mass),
                  HarmonicOscillator2D(0, 1, omega, hbar, mass)]
        super(AngularHarmonicOscillator2D, self).__init__(
            states, [1.0, 1j * self.l],
            nodal_hint=NodalHint('points', points=[[0.0, 0.0]]))

    @property
    def params(self):
        params = {'l': self.l}
        if self.omega != 1:
            params['omega'] = self.omega
        params.update(self._units_params())
        return params

    @property
    def descriptor(self):
        return CatalogState.descriptor.fget(self)


class Hydrogen1s(CatalogState):
    """
    Ground state of hydrogen-like atom exp(-kappa r) sqrt(kappa^3 / pi) with
    kappa = Z m / hbar^2 (atomic units with unit Coulomb coupling).
    """
    id = 'hydrogen_1s'
    real_valued = True

    def __init__(self, charge=1.0, hbar=1.0, mass=1.0):
        super(Hydrogen1s, self).__init__(dim=3, components=1,
                                         hbar=hbar, mass=mass)
        if charge <= 0:
            raise ValueError(f"Charge ({charge}) must be positive.")
        self.charge = float(charge)
        self.kappa = self.charge * self.mass / self.hbar**2
        self.norm = math.sqrt(self.kappa**3 / math.pi)

    def _profile(self, k, r):
        return self.norm * (-self.kappa)**k * np.exp(-self.kappa * r)

    def _evaluate(self, X):
        r = np.sqrt(np.sum(X**2, axis=1))
        return self._profile(0, r).astype(complex)[:, None]

    def _derivative(self, X, alpha):
        value = radial_partial(self._profile, X, alpha)
        return value.astype(complex)[:, None]

    @property
    def decay_rate(self):
        return self.kappa

    @property
    def length_scale(self):
        return 1 / self.kappa

    @property
    def cusps(self):
        return [np.zeros(3)]

    @property
    def energy(self):
        return -self.hbar**2 * self.kappa**2 / (2 * self.mass)

    @property
    def potential(self):
        return CoulombPotential(self.charge)

    @property
    def params(self):
        params = {}
        if self.charge != 1:
            params['charge'] = self.charge
        params.update(self._units_params())
        return params


class GaussianPacket(CatalogState):
    """
    Gaussian wave packet (not stationary)

        psi(x) = (pi sigma^2)^{-1/4} exp(-(x - x0)^2 / (2 sigma^2)
                                         + i p0 x / hbar).

    With x0 = 0, p0 = 0, sigma = 1 it coincides with ho1d:n=0.
    """
    id = 'gaussian'

    def __init__(self, x0=0.0, p0=0.0, sigma=1.0, hbar=1.0, mass=1.0):
        super(GaussianPacket, self).__init__(dim=1, components=1,
                                             hbar=hbar, mass=mass)
        if sigma <= 0:
            raise ValueError(f"Width sigma ({sigma}) must be positive, "
                             "otherwise state is not normalizable.")
        self.x0 = float(x0)
        self.p0 = float(p0)
        self.sigma = float(sigma)
        self.norm = (math.pi * self.sigma**2)**(-0.25)
        self.real_valued = self.p0 == 0

    def _evaluate(self, X):
        x = X[:, 0]
        exponent = (-(x - self.x0)**2 / (2 * self.sigma**2) +
                    1j * self.p0 * x / self.hbar)
        return (self.norm * np.exp(exponent))[:, None]

    def _derivative(self, X, alpha):
        x = X[:, 0]
        u = -(x - self.x0) / self.sigma**2 + 1j * self.p0 / self.hbar
        c = -1 / self.sigma**2
        factor = np.zeros_like(u)
        for (i, j), coef in exponent_derivative_polynomial(alpha[0]):
            factor = factor + coef * u**i * c**j
        return factor[:, None] * self._evaluate(X)

    @property
    def decay_rate(self):
        return 4 / self.sigma

    @property
    def length_scale(self):
        return self.sigma

    @property
    def center_offset(self):
        return abs(self.x0)

    @property
    def params(self):
        params = {'x0': self.x0, 'p0': self.p0, 'sigma': self.sigma}
        params.update(self._units_params())
        return params


class Spinor(CatalogState):
    """
    Spin-1/2 product state (a, b)^T phi(x) with normalized spinor (a, b).

    :param a: Amplitude of spin-up component.
    :param b: Amplitude of spin-down component.
    :param spatial: Scalar state phi, ho1d:n=0 by default.
    :param theta: Mixing angle, if set then (a, b) = (cos theta, sin theta).
    """
    id = 'spinor'

    def __init__(self, a=1.0, b=0.0, spatial=None, theta=None):
        if spatial is None:
            spatial = HarmonicOscillator1D(0)
        spatial = make_state(spatial)
        if spatial.components != 1:
            raise ValueError("Spatial part of spinor must be scalar state.")
        super(Spinor, self).__init__(dim=spatial.dim, components=2,
                                     hbar=spatial.hbar, mass=spatial.mass)
        self.theta = theta
        if theta is not None:
            a, b = math.cos(theta), math.sin(theta)
        chi = np.array([a, b], dtype=complex)
        norm = np.sqrt(np.sum(np.abs(chi)**2))
        if norm == 0:
            raise ValueError("Spinor amplitudes could not be both zero.")
        self.chi = chi / norm
        self.spatial = spatial

    @classmethod
    def from_params(cls, a=1.0, b=0.0, theta=None, spatial='ho1d', **params):
        if isinstance(spatial, str):
            spatial = make_state(spatial, **params)
        elif params:
            raise ValueError(f"Unknown parameters of spinor: {params}.")
        return cls(a=a, b=b, spatial=spatial, theta=theta)

    def _evaluate(self, X):
        return self.spatial._evaluate(X) * self.chi[None, :]

    def _derivative(self, X, alpha):
        return self.spatial._derivative(X, alpha) * self.chi[None, :]

    @property
    def decay_rate(self):
        return self.spatial.decay_rate

    @property
    def length_scale(self):
        return self.spatial.length_scale

    @property
    def center_offset(self):
        return self.spatial.center_offset

    @property
    def cusps(self):
        return self.spatial.cusps

    @property
    def nodal_hint(self):
        return self.spatial.nodal_hint

    @property
    def energy(self):
        return self.spatial.energy

    @property
    def potential(self):
        return self.spatial.potential

    @property
    def params(self):
        if self.theta is not None:
            params = {'theta': self.theta}
        else:
            params = {}
            for key, amp in zip(['a', 'b'], self.chi):
                params[key] = amp if amp.imag != 0 else amp.real
        params['spatial'] = self.spatial.id
        params.update(self.spatial.params)
        return params


class SpinorSplit(CatalogState):
    """
    Spinor with spatially separated components

        psi_up(x) = phi_0(x - s/2) / sqrt(2),
        psi_down(x) = phi_0(x + s/2) / sqrt(2),

    phi_0 is the oscillator ground state. For large separation s the
    components have numerically disjoint supports.
    """
    id = 'spinor_split'

    def __init__(self, separation=20.0, hbar=1.0, mass=1.0):
        super(SpinorSplit, self).__init__(dim=1, components=2,
                                          hbar=hbar, mass=mass)
        if separation <= 0:
            raise ValueError(f"Separation ({separation}) must be positive.")
        self.separation = float(separation)
        self.beta = math.sqrt(self.mass / self.hbar)

    def _derivative(self, X, alpha):
        x = X[:, 0]
        shift = self.separation / 2
        up = _ho_factor(0, alpha[0], self.beta, x - shift)
        down = _ho_factor(0, alpha[0], self.beta, x + shift)
        return (np.stack([up, down], axis=1) / math.sqrt(2)).astype(complex)

    def _evaluate(self, X):
        return self._derivative(X, (0,))

    @property
    def decay_rate(self):
        return 4 * self.beta

    @property
    def length_scale(self):
        return 1 / self.beta

    @property
    def center_offset(self):
        return self.separation / 2

    @property
    def params(self):
        params = {'separation': self.separation}
        params.update(self._units_params())
        return params


register_state(HarmonicOscillator1D)
register_state(HarmonicOscillator2D)
register_state(AngularHarmonicOscillator2D)
register_state(Hydrogen1s)
register_state(GaussianPacket)
register_state(Spinor)
register_state(Spinor, id='spinor_uniform')
register_state(SpinorSplit)
