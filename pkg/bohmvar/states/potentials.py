import numpy as np

_registered_potentials = {}


def register_potential(potential):
    """
    Registers the specified potential class.

    :raises ValueError: if potential with the same ``id`` was already\
                        registered.
    """
    if potential.id in _registered_potentials:
        raise ValueError(f"Potential '{potential.id}' already registered.")
    _registered_potentials[potential.id] = potential


def get_potential(id, **params):
    """
    Returns the potential with the specified id built with ``params``.

    :raises ValueError: if potential with such ``id`` was not registered.
    """
    if id not in _registered_potentials:
        raise ValueError(f"Potential '{id}' not registered. Available: "
                         f"{list(_registered_potentials)}.")
    return _registered_potentials[id](**params)


def all_potentials():
    """
    Returns an iterator over all registered potentials.
    """
    for potential in _registered_potentials.values():
        yield potential()


class Potential(object):
    """
    Real potential V(x) evaluated on points of shape (N, d).

    :cvar str Potential.id: the unique identifier of the potential.
    :cvar bool Potential.bounded: whether V is bounded on every box.
    """
    id = ''
    bounded = True

    def __call__(self, X):
        raise NotImplementedError

    @property
    def params(self):
        return {}

    def __repr__(self):
        items = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.__class__.__name__}({items})"

    def __eq__(self, other):
        return (isinstance(other, self.__class__) and
                self.params == other.params)


class FreePotential(Potential):
    id = 'free'

    def __call__(self, X):
        return np.zeros(np.asarray(X).shape[0])


class HarmonicPotential(Potential):
    """
    Isotropic harmonic potential m omega^2 |x|^2 / 2.
    """
    id = 'ho'
    bounded = False

    def __init__(self, omega=1.0, mass=1.0):
        if omega <= 0 or mass <= 0:
            raise ValueError(f"Frequency ({omega}) and mass ({mass}) of "
                             "harmonic potential must be positive.")
        self.omega = float(omega)
        self.mass = float(mass)

    def __call__(self, X):
        X = np.asarray(X, dtype=float)
        return 0.5 * self.mass * self.omega**2 * np.sum(X**2, axis=1)

    @property
    def params(self):
        return {'omega': self.omega, 'mass': self.mass}


class CoulombPotential(Potential):
    """
    Attractive Coulomb potential -Z/|x| (unit coupling).
    """
    id = 'coulomb'
    bounded = False

    def __init__(self, charge=1.0):
        if charge <= 0:
            raise ValueError(f"Charge ({charge}) must be positive.")
        self.charge = float(charge)

    def __call__(self, X):
        X = np.asarray(X, dtype=float)
        with np.errstate(divide='ignore'):
            return -self.charge / np.sqrt(np.sum(X**2, axis=1))

    @property
    def params(self):
        return {'charge': self.charge}


register_potential(FreePotential)
register_potential(HarmonicPotential)
register_potential(CoulombPotential)
