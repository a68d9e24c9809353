import math
import warnings

import numpy as np

from ..fields import operator_products, weak_field
from ..nodal import zero_orders, operator_h6
from ..quadrature import engine_for, EquilibriumSampler
from .report import DecompositionReport

TOL_IDENTITY = 1e-6
MC_SAMPLES = 100000


def _divide(numerator, denominator):
    result = np.zeros_like(numerator)
    np.divide(numerator, denominator, out=result, where=denominator > 0)
    return result


# Singular integrands from columns (|psi|^2, Re, Im of psi^dagger A psi,
# |A psi|^2) of operator products.
def _var_b_integrand(cols):
    return _divide(cols[:, 1]**2, cols[:, 0])


def _q_term_integrand(cols):
    return _divide(cols[:, 2]**2, cols[:, 0])


def _deficit_integrand(cols):
    gap = cols[:, 0] * cols[:, 3] - cols[:, 1]**2 - cols[:, 2]**2
    return _divide(np.maximum(gap, 0.0), cols[:, 0])


class Decomposer(object):
    """
    Computes the terms of the variance decomposition of observables on a
    state. Every term is a separate integral so the residual
    var_q - var_b - q_term - deficit is an end-to-end check. Operator
    products on the quadrature grids are cached per operator.

    :param psi: Normalized state.
    :param scheme: :class:`IntegrationScheme`, default scheme of the state
                   if None.
    :param sampler: :class:`EquilibriumSampler` for the Monte Carlo route of
                    var_b, default one if None.
    :param tol_identity: Relative tolerance of residual, absolute tolerance
                         is tol_identity * max(1, var_q).
    :param mc_n: Number of samples of the Monte Carlo route.
    :param workers: Number of processes for sampling.
    """
    def __init__(self, psi, scheme=None, sampler=None,
                 tol_identity=TOL_IDENTITY, mc_n=MC_SAMPLES, workers=1):
        if tol_identity <= 0:
            raise ValueError(f"Tolerance of identity ({tol_identity}) must "
                             "be positive.")
        self.psi = psi
        self.engine = engine_for(psi, scheme)
        self.scheme = self.engine.scheme
        self.sampler = sampler if sampler is not None else \
            EquilibriumSampler()
        self.tol_identity = tol_identity
        self.mc_n = mc_n
        self.workers = workers
        self._columns = {}
        self._samples = None
        self._fits = None

    def _check(self, op):
        if op.dim != self.psi.dim:
            raise ValueError(f"Operator of dimension {op.dim} could not be "
                             f"applied to state of dimension {self.psi.dim}.")

    def columns(self, op, level):
        """
        Operator products (|psi|^2, Re, Im of psi^dagger A psi, |A psi|^2)
        on the grid of ``level``, zero at nodes.
        """
        self._check(op)
        key = (op, level)
        if key not in self._columns:
            def products(X):
                rho, inner, abs2 = operator_products(op, self.psi, X)
                return np.stack([rho, inner.real, inner.imag, abs2], axis=1)
            self._columns[key] = self.engine.evaluate(products, level)
        return self._columns[key]

    def _regular(self, op, column):
        fine = self.engine.weighted_sum(self.columns(op, 2)[:, column], 2)
        coarse = self.engine.weighted_sum(self.columns(op, 1)[:, column], 1)
        return fine, abs(fine - coarse)

    def _singular(self, op, integrand):
        return self.engine.exclusion_report(integrand(self.columns(op, 2)),
                                            integrand(self.columns(op, 1)))

    def expectation(self, op):
        """
        <A> = integral of Re[psi^dagger A psi], defined through nodes.
        """
        return self._regular(op, 1)[0]

    def second_moment(self, op):
        """
        Integral of |A psi|^2 and its error estimate.
        """
        return self._regular(op, 3)

    def var_q(self, op):
        """
        Quantum variance: integral of |A psi|^2 minus squared mean.
        """
        return self.second_moment(op)[0] - self.expectation(op)**2

    def var_b_report(self, op):
        return self._singular(op, _var_b_integrand)

    def var_b(self, op, route='quadrature'):
        """
        Bohmian ensemble variance of a_w by quadrature with exclusion of
        node neighborhoods (``route='quadrature'``) or by equilibrium
        sampling (``route='mc'``).
        """
        if route == 'mc':
            return self.var_b_mc(op)['var_b']
        if route != 'quadrature':
            raise ValueError(f"Route ({route}) must be quadrature or mc.")
        return self.var_b_report(op).value - self.expectation(op)**2

    def q_term(self, op):
        """
        Quantum fluctuation term: integral of (Im[psi^dagger A psi])^2 /
        |psi|^2 with exclusion of node neighborhoods.
        """
        return self.q_term_report(op).value

    def q_term_report(self, op):
        return self._singular(op, _q_term_integrand)

    def deficit_term(self, op):
        """
        Multi-component deficit, exactly 0 for scalar states.
        """
        if self.psi.components == 1:
            return 0.0
        return self.deficit_report(op).value

    def deficit_report(self, op):
        return self._singular(op, _deficit_integrand)

    def samples(self):
        if self._samples is None:
            X = self.sampler.sample(self.psi, self.mc_n,
                                    workers=self.workers)
            chain_index = self.sampler.chain_index
            at_node = self.psi.at_node(X)
            if np.any(at_node):
                warnings.warn(f"{np.sum(at_node)} equilibrium samples at "
                              "nodes are dropped.")
            self._samples = (X[~at_node], chain_index[~at_node])
        return self._samples

    def var_b_mc(self, op):
        """
        Monte Carlo route of var_b: empirical variance of a_w over
        equilibrium samples with batch-means standard error.
        """
        self._check(op)
        X, chain_index = self.samples()
        a_w = weak_field(op, self.psi, X)
        mean = float(np.mean(a_w))
        deviations = (a_w - mean)**2
        return {'n': int(len(a_w)),
                'mean': mean,
                'var_b': float(np.mean(deviations)),
                'std_error': self.sampler.standard_error(deviations,
                                                         chain_index),
                'acceptance': [float(np.min(self.sampler.acceptance)),
                               float(np.max(self.sampler.acceptance))]}

    def h6(self, op):
        if self._fits is None:
            self._fits = zero_orders(self.psi)
        return operator_h6(self.psi, op.order, self._fits)

    def decompose(self, op, monte_carlo=False):
        """
        Assembles mean, var_q, var_b, q_term, deficit and the residual.

        :param monte_carlo: Whether to add the Monte Carlo route of var_b.
        :returns: :class:`DecompositionReport`.
        """
        self._check(op)
        if not op.bounded:
            warnings.warn(f"Operator {op.kind} has globally unbounded "
                          "coefficients, they are checked on the "
                          "integration box only.")
        op.check_coefficients(self.engine.grid(1)[0])
        mean, mean_error = self._regular(op, 1)
        second, second_error = self.second_moment(op)
        var_q = second - mean**2
        convergence = {'var_b': self.var_b_report(op),
                       'q_term': self.q_term_report(op)}
        var_b = convergence['var_b'].value - mean**2
        q_term = convergence['q_term'].value
        deficit = 0.0
        if self.psi.components > 1:
            convergence['deficit'] = self.deficit_report(op)
            deficit = convergence['deficit'].value
        squared_mean_error = 2 * abs(mean) * mean_error
        errors = {'mean': mean_error,
                  'var_q': second_error + squared_mean_error,
                  'var_b': convergence['var_b'].error + squared_mean_error,
                  'q_term': convergence['q_term'].error,
                  'deficit': (convergence['deficit'].error
                              if 'deficit' in convergence else 0.0)}
        tol = self.tol_identity * max(1.0, var_q)
        mc = None
        if monte_carlo:
            mc = self.var_b_mc(op)
            combined = math.sqrt(mc['std_error']**2 + errors['var_b']**2)
            mc['combined_error'] = combined
            mc['agree'] = bool(abs(mc['var_b'] - var_b) <= 3 * combined)
        spin_ledger = None
        if self.psi.components > 1 and op.has_matrix:
            residual = var_q - var_b - q_term - deficit
            spin_ledger = {
                'as_stated': ('holds' if abs(var_q - var_b) <= tol
                              else 'violated'),
                'deficit_corrected': ('holds' if abs(residual) <= tol
                                      else 'violated')}
            if spin_ledger['as_stated'] == 'violated':
                warnings.warn(f"Var_Q = Var_B does not hold for {op.kind} on"
                              f" {self.psi.descriptor}: gap {var_q - var_b}"
                              f", deficit {deficit}.")
        h6 = self.h6(op)
        method = {'state': self.psi.descriptor,
                  'operator': op.kind,
                  'order': op.order,
                  'engine': self.engine.id,
                  'scheme': self.scheme.to_dict(),
                  'zero_orders': [fit.to_dict() for fit in self._fits]}
        return DecompositionReport(mean, var_q, var_b, q_term, deficit, tol,
                                   h6=h6, method=method,
                                   errors=errors, convergence=convergence,
                                   mc=mc, spin_ledger=spin_ledger)


def expectation(op, psi, scheme=None):
    return Decomposer(psi, scheme).expectation(op)


def var_q(op, psi, scheme=None):
    return Decomposer(psi, scheme).var_q(op)


def var_b(op, psi, scheme=None, sampler=None, route='quadrature',
          mc_n=MC_SAMPLES):
    """
    Bohmian ensemble variance by quadrature or by sampling (``route='mc'``).
    """
    return Decomposer(psi, scheme, sampler, mc_n=mc_n).var_b(op, route)


def q_term(op, psi, scheme=None):
    return Decomposer(psi, scheme).q_term(op)


def deficit_term(op, psi, scheme=None):
    return Decomposer(psi, scheme).deficit_term(op)


def decompose(op, psi, scheme=None, sampler=None, tol_identity=TOL_IDENTITY,
              mc_n=MC_SAMPLES, workers=1):
    """
    Variance decomposition report of ``op`` on ``psi``. Monte Carlo route
    of var_b is added when ``sampler`` is given.
    """
    decomposer = Decomposer(psi, scheme, sampler, tol_identity, mc_n,
                            workers)
    return decomposer.decompose(op, monte_carlo=sampler is not None)
