import warnings

import numpy as np

from ..utils import chunk_slices, deterministic_sum
from .scheme import IntegrationScheme
from .eps_exclusion import EpsilonConvergence

_registered_engines = {}


def register_engine(engine):
    """
    Registers the specified integration engine.

    :raises ValueError: if engine with the same ``id`` was already\
                        registered.
    """
    if engine.id in _registered_engines:
        raise ValueError(f"Integration engine '{engine.id}' already "
                         "registered.")
    _registered_engines[engine.id] = engine


def get_engine(id):
    """
    Returns the integration engine with the specified id.

    :raises ValueError: if engine with such ``id`` was not registered.
    """
    if id not in _registered_engines:
        raise ValueError(f"Integration engine '{id}' not registered.")
    return _registered_engines[id]()


def all_engines():
    """
    Returns an iterator over all registered integration engines.
    """
    for engine in _registered_engines.values():
        yield engine()


class Engine(object):
    """
    Abstract class representing an integration engine over configuration
    space of a state.

    New engine should be inheritted from this class and implement
    :meth:`_build_grid` returning nodes (N, d) and weights (N,) for the
    given level (level 2 doubles number of nodes per panel and axis).

    :cvar str Engine.id: the unique identifier of the engine.
    """
    id = ''

    def __init__(self, state=None, scheme=None):
        self._state = state
        self._scheme = scheme
        self._cache = {}

    @property
    def state(self):
        return self._state

    @state.setter
    def state(self, state):
        self._state = state
        self._cache = {}

    @property
    def scheme(self):
        return self._scheme

    @scheme.setter
    def scheme(self, scheme):
        if scheme is not None and scheme.rule != self.id:
            raise ValueError(f"Scheme with rule {scheme.rule} could not be "
                             f"used by {self.id} engine.")
        self._scheme = scheme
        self._cache = {}

    def _build_grid(self, level):
        raise NotImplementedError

    def _cached(self, key, func):
        if key not in self._cache:
            self._cache[key] = func()
        return self._cache[key]

    def grid(self, level=1):
        """
        Nodes and weights of the engine for the state and scheme.
        """
        if self.state is None or self.scheme is None:
            raise ValueError("State and scheme should be set before "
                             "integration.")
        return self._cached(('grid', level),
                            lambda: self._build_grid(level))

    def abs_values(self, level=1):
        X, _ = self.grid(level)
        return self._cached(
            ('abs', level),
            lambda: np.concatenate([np.sqrt(self.state.density(X[s]))
                                    for s in chunk_slices(len(X))]))

    def node_mask(self, level=1):
        """
        Mask of grid nodes that are at the nodal set of the state.
        """
        X, _ = self.grid(level)

        def build():
            abs_values = self.abs_values(level)
            near = np.concatenate([self.state.near_nodes(X[s])
                                   for s in chunk_slices(len(X))])
            return (abs_values == 0) | (
                (abs_values < self.state.node_threshold) & near)
        return self._cached(('node', level), build)

    def exclusion_masks(self, level=1):
        """
        Masks of grid nodes excluded for every level of exclusion schedule:
        points near declared nodes with |psi| <= eps * max|psi|.
        """
        X, _ = self.grid(level)

        def build():
            abs_values = self.abs_values(level)
            near = np.concatenate([self.state.near_nodes(X[s])
                                   for s in chunk_slices(len(X))])
            masks = []
            for eps in self.scheme.eps_schedule:
                masks.append(near & (abs_values <= eps *
                                     self.state.max_abs))
            return masks
        return self._cached(('exclusion', level), build)

    def evaluate(self, f, level=1):
        """
        Values of field ``f`` on grid nodes, zero at nodes of the state.
        Field could be scalar (values of shape (N,)) or vector (N, k).

        :raises ValueError: if ``f`` is not finite outside nodes.
        """
        X, _ = self.grid(level)
        skip = self.node_mask(level)
        parts = []
        for s in chunk_slices(len(X)):
            keep = ~skip[s]
            part = None
            if np.any(keep):
                values = np.asarray(f(X[s][keep]), dtype=float)
                if not np.all(np.isfinite(values)):
                    raise ValueError("Integrand is not finite at quadrature "
                                     "point outside nodal set.")
                part = np.zeros((s.stop - s.start,) + values.shape[1:])
                part[keep] = values
            parts.append(part)
        shape = next((p.shape[1:] for p in parts if p is not None), ())
        parts = [np.zeros((s.stop - s.start,) + shape) if p is None else p
                 for p, s in zip(parts, chunk_slices(len(X)))]
        return np.concatenate(parts)

    def weighted_sum(self, values, level=1, mask=None):
        """
        Deterministic weighted sum of ``values`` over nodes where ``mask``
        is True (all nodes if mask is None).
        """
        _, W = self.grid(level)
        if mask is not None:
            W = np.where(mask, W, 0.0)
        if values.ndim == 1:
            return deterministic_sum(np.sum(values[s] * W[s])
                                     for s in chunk_slices(len(W)))
        return np.array([
            deterministic_sum(np.sum(values[s, j] * W[s])
                              for s in chunk_slices(len(W)))
            for j in range(values.shape[1])])

    def integrate(self, f):
        """
        Integral of field ``f`` and estimate of error from comparison of
        two resolutions.

        :returns: value and error estimate (arrays for vector fields).
        """
        coarse = self.weighted_sum(self.evaluate(f, 1), 1)
        fine = self.weighted_sum(self.evaluate(f, 2), 2)
        if np.ndim(fine) == 0:
            return float(fine), float(abs(fine - coarse))
        return fine, np.abs(fine - coarse)

    def eps_excluded_integrate(self, f):
        """
        Integrals of field ``f`` over the box without neighborhoods of nodes
        {|psi| <= eps * max|psi|} for the exclusion schedule.

        :returns: last value of sequence and
                  :class:`EpsilonConvergence` report.
        """
        fine = self.evaluate(f, 2)
        if fine.ndim != 1:
            raise ValueError("Exclusion is supported for scalar fields "
                             "only.")
        report = self.exclusion_report(fine, self.evaluate(f, 1))
        return report.value, report

    def exclusion_report(self, fine, coarse):
        """
        Exclusion sequence from values of a field on grids of level 2
        (``fine``) and 1 (``coarse``).
        """
        sequence = [self.weighted_sum(fine, 2, ~mask)
                    for mask in self.exclusion_masks(2)]
        last_mask = self.exclusion_masks(1)[-1]
        coarse = self.weighted_sum(coarse, 1, ~last_mask)
        report = EpsilonConvergence(self.scheme.eps_schedule, sequence,
                                    self.scheme.tol_conv,
                                    error=abs(sequence[-1] - coarse))
        if report.status == 'settling':
            warnings.warn(f"Exclusion sequence settles geometrically "
                          f"without convergence to {report.tol_conv}, "
                          f"last value {report.value} is reported.")
        return report


class GaussLegendreEngine(Engine):
    """
    Tensor product of composite Gauss-Legendre rules.
    """
    id = 'gauss'

    def _build_grid(self, level):
        if self.scheme.dim != self.state.dim:
            raise ValueError(f"Scheme dimension ({self.scheme.dim}) differs "
                             f"from dimension of state ({self.state.dim}).")
        rules = [self.scheme.nodes_1d(axis, level)
                 for axis in range(self.scheme.dim)]
        nodes = np.meshgrid(*[r[0] for r in rules], indexing='ij')
        weights = np.meshgrid(*[r[1] for r in rules], indexing='ij')
        X = np.stack([n.ravel() for n in nodes], axis=1)
        W = np.prod(np.stack([w.ravel() for w in weights], axis=1), axis=1)
        return X, W


class MidpointEngine(GaussLegendreEngine):
    """
    Tensor product of composite midpoint rules.
    """
    id = 'midpoint'


class SphericalEngine(Engine):
    """
    Spherical coordinates around the cusp of a three-dimensional state:
    composite Gauss-Legendre in r, Gauss-Legendre in cos(theta) and
    uniform trapezoid in phi.
    """
    id = 'spherical'

    def _build_grid(self, level):
        if self.state.dim != 3:
            raise ValueError("Spherical engine needs three-dimensional "
                             "state.")
        r, w_r = self.scheme.nodes_1d(0, level)
        n = self.scheme.points * level
        mu, w_mu = np.polynomial.legendre.leggauss(n)
        n_phi = 2 * n
        phi = 2 * np.pi * np.arange(n_phi) / n_phi
        w_phi = np.full(n_phi, 2 * np.pi / n_phi)
        R, MU, PHI = np.meshgrid(r, mu, phi, indexing='ij')
        WR, WMU, WPHI = np.meshgrid(w_r * r**2, w_mu, w_phi, indexing='ij')
        sin_theta = np.sqrt(1 - MU**2)
        center = np.zeros(3)
        if self.state.cusps:
            center = np.asarray(self.state.cusps[0], dtype=float)
        X = np.stack([(R * sin_theta * np.cos(PHI)).ravel(),
                      (R * sin_theta * np.sin(PHI)).ravel(),
                      (R * MU).ravel()], axis=1) + center
        W = (WR * WMU * WPHI).ravel()
        return X, W


register_engine(GaussLegendreEngine)
register_engine(MidpointEngine)
register_engine(SphericalEngine)


def engine_for(psi, scheme=None):
    """
    Returns engine of the scheme rule set up for the state. Default scheme
    of the state is used if ``scheme`` is None.
    """
    if scheme is None:
        scheme = IntegrationScheme.for_state(psi)
    engine = get_engine(scheme.rule)
    engine.state = psi
    engine.scheme = scheme
    return engine


def integrate(f, psi, scheme=None):
    """
    Integral of real field ``f`` over the box of the scheme.

    :returns: value and error estimate from two resolutions.
    """
    return engine_for(psi, scheme).integrate(f)


def eps_excluded_integrate(f, psi, scheme=None):
    """
    Integral of field ``f`` singular at nodes of ``psi`` by exclusion of
    shrinking node neighborhoods.

    :returns: last value of the sequence and its convergence report.
    """
    return engine_for(psi, scheme).eps_excluded_integrate(f)
