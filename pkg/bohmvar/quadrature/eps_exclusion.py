import numpy as np

STATUSES = ['converged', 'settling', 'diverging']
# Increments shrinking at least by this factor per level are settling.
SETTLING_RATIO = 0.9
SETTLING_TAIL = 4
# Increments below this are rounding noise.
ABS_TOL = 1e-14


def classify_sequence(values, tol_conv):
    """
    Status of exclusion sequence I(eps_j).

    * ``converged``: the last two increments are below ``tol_conv``
      relative to the value (or are at rounding level).
    * ``settling``: increments shrink geometrically, the limit is finite.
    * ``diverging``: increments do not shrink.
    """
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        return 'diverging'
    steps = np.abs(np.diff(values))
    small = steps <= tol_conv * np.abs(values[1:]) + ABS_TOL
    if np.all(small[-2:]):
        return 'converged'
    tail = steps[-SETTLING_TAIL:]
    prev, last = tail[:-1], tail[1:]
    ratios = np.where(prev > 0, last / np.where(prev > 0, prev, 1.0),
                      np.where(last > 0, np.inf, 0.0))
    if np.all(ratios < SETTLING_RATIO):
        return 'settling'
    return 'diverging'


class EpsilonConvergence(object):
    """
    Report of integration with exclusion of neighborhoods
    {|psi| <= eps * max|psi|} of nodes.

    :param eps: Exclusion levels.
    :param values: Integrals I(eps) for each level.
    :param tol_conv: Relative tolerance of convergence.
    :param error: Estimate of quadrature error of the last value.
    """
    def __init__(self, eps, values, tol_conv, error=0.0):
        if len(eps) != len(values) or len(eps) < 2:
            raise ValueError("Exclusion sequence should have at least two "
                             "levels and one value per level.")
        self.eps = [float(e) for e in eps]
        self.values = [float(v) for v in values]
        self.tol_conv = float(tol_conv)
        self.error = float(error)
        self.status = classify_sequence(self.values, self.tol_conv)

    @property
    def value(self):
        return self.values[-1]

    @property
    def converged(self):
        return self.status == 'converged'

    @property
    def diverging(self):
        return self.status == 'diverging'

    def to_dict(self):
        return {'eps': self.eps,
                'values': self.values,
                'status': self.status,
                'converged': self.converged,
                'error': self.error}

    def __repr__(self):
        return f"EpsilonConvergence(value={self.value}, "\
               f"status={self.status})"
