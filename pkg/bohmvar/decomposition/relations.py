import numpy as np

from ..fields import quantum_potential, amplitude_gradient,\
    continuity_divergence
from ..operators import build_operator
from ..quadrature import engine_for
from .decomposition import Decomposer


def _check_scalar(psi):
    if psi.components != 1:
        raise ValueError("Relation is defined for scalar states only.")


def _momentum(psi, axis):
    return build_operator('momentum', psi.dim, psi.hbar, psi.mass,
                          axis=axis)


def quantum_potential_mean(psi, scheme=None):
    """
    Mean quantum potential <Q> by two routes: integral of R^2 Q with
    exclusion of node neighborhoods and (hbar^2 / 2m) times integral of
    |grad R|^2.

    :returns: both values and the exclusion report of the first route.
    """
    _check_scalar(psi)
    engine = engine_for(psi, scheme)

    def weighted_potential(X):
        return psi.density(X) * quantum_potential(psi, X)

    def gradient_squared(X):
        return np.sum(amplitude_gradient(psi, X)**2, axis=1)

    via_potential, report = engine.eps_excluded_integrate(weighted_potential)
    via_gradient, _ = engine.integrate(gradient_squared)
    via_gradient *= psi.hbar**2 / (2 * psi.mass)
    return via_potential, via_gradient, report


def check_qp_relation(psi, scheme=None):
    """
    Compares quantum fluctuation term of momentum (summed over axes) with
    2m<Q>.

    :returns: tuple (q_p, 2m<Q>, gap).
    """
    _check_scalar(psi)
    decomposer = Decomposer(psi, scheme)
    q_p = sum(decomposer.q_term(_momentum(psi, axis))
              for axis in range(1, psi.dim + 1))
    _, mean_q, _ = quantum_potential_mean(psi, decomposer.scheme)
    two_m_q = 2 * psi.mass * mean_q
    return q_p, two_m_q, q_p - two_m_q


def uncertainty_check(psi, scheme=None, tol=1e-9):
    """
    Checks Dx_B^2 (Dp_B^2 + Q_p) >= hbar^2 / 4 on every axis, Dx_B^2 is
    var_b of position that equals its quantum variance.

    :returns: list of tuples (dx2, dp2, q_p, product, holds) per axis.
    """
    _check_scalar(psi)
    decomposer = Decomposer(psi, scheme)
    bound = psi.hbar**2 / 4
    result = []
    for axis in range(1, psi.dim + 1):
        position = build_operator('position', psi.dim, psi.hbar, psi.mass,
                                  axis=axis)
        momentum = _momentum(psi, axis)
        dx2 = decomposer.var_b(position)
        dp2 = decomposer.var_b(momentum)
        q_p = decomposer.q_term(momentum)
        product = dx2 * (dp2 + q_p)
        holds = bool(product >= bound - tol * max(1.0, bound))
        result.append((dx2, dp2, q_p, product, holds))
    return result


def energy_q_term_polar(psi, scheme=None):
    """
    Quantum fluctuation term of the hamiltonian by the polar route
    (hbar^2 / 4m^2) * integral of [div(R^2 grad S)]^2 / R^2. Zero for
    stationary states.

    :returns: value and exclusion report.
    """
    _check_scalar(psi)
    factor = psi.hbar**2 / (4 * psi.mass**2)

    def integrand(X):
        div = continuity_divergence(psi, X)
        return factor * div**2 / psi.density(X)

    return engine_for(psi, scheme).eps_excluded_integrate(integrand)
