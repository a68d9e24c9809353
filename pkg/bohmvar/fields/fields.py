"""
Pointwise Bohmian fields. Every function accepts a single position (shape
(d,)) or an array of positions (shape (N, d)) and returns a scalar/vector or
an array accordingly. Fields that divide by |psi|^2 raise
:class:`AtNodeError` when some point is at node.
"""
import numpy as np

from ..states import AtNodeError
from ..utils import as_points, write_csv


class FieldSample(object):
    """
    Value of a field at one position. ``value`` is None at nodes.
    """
    def __init__(self, position, value, at_node=False):
        self.position = np.atleast_1d(np.array(position, dtype=float))
        self.value = value
        self.at_node = bool(at_node)

    def __repr__(self):
        return f"FieldSample(x={self.position.tolist()}, value={self.value},"\
               f" at_node={self.at_node})"


def _check_scalar(psi, name):
    if psi.components != 1:
        raise ValueError(f"Field {name} is defined for scalar states only.")


def _check_nodes(psi, X, name):
    mask = psi.at_node(X)
    if np.any(mask):
        raise AtNodeError(f"Field {name} is undefined at node point "
                          f"{X[np.argmax(mask)].tolist()} of "
                          f"{psi.descriptor}.")


def _result(values, single):
    return values[0] if single else values


def operator_products(op, psi, X):
    """
    Returns pointwise |psi|^2, psi^dagger (A psi) and |A psi|^2 at points X.
    """
    values = psi.value(X)
    applied = op.apply(psi, X)
    rho = np.sum(np.abs(values)**2, axis=1)
    inner = np.sum(np.conj(values) * applied, axis=1)
    abs2 = np.sum(np.abs(applied)**2, axis=1)
    return rho, inner, abs2


def weak_field(op, psi, x):
    """
    Weak actual value field a_w = Re[psi^dagger A psi] / |psi|^2.
    """
    X, single = as_points(x, psi.dim)
    _check_nodes(psi, X, 'weak_field')
    rho, inner, _ = operator_products(op, psi, X)
    return _result(np.real(inner) / rho, single)


def imag_density(op, psi, x):
    """
    Im[psi^dagger A psi], defined at nodes too.
    """
    X, single = as_points(x, psi.dim)
    _, inner, _ = operator_products(op, psi, X)
    return _result(np.imag(inner), single)


def _density_derivatives(psi, X):
    values = psi.value(X)[:, 0]
    grad = psi.gradient(X)[:, :, 0]
    lap = psi.laplacian(X)[:, 0]
    rho = np.abs(values)**2
    grad_rho = 2 * np.real(np.conj(values)[:, None] * grad)
    lap_rho = (2 * np.real(np.conj(values) * lap) +
               2 * np.sum(np.abs(grad)**2, axis=1))
    return values, grad, rho, grad_rho, lap_rho


def amplitude_laplacian_ratio(psi, X):
    """
    Laplacian(R) / R from R^2 = psi^* psi:
    Laplacian(R) = (Laplacian(R^2) - |grad R^2|^2 / (2 R^2)) / (2 R).
    """
    _, _, rho, grad_rho, lap_rho = _density_derivatives(psi, X)
    return (lap_rho - np.sum(grad_rho**2, axis=1) / (2 * rho)) / (2 * rho)


def amplitude_gradient(psi, x):
    """
    Gradient of amplitude R = |psi|: grad R = grad(R^2) / (2 R).
    """
    _check_scalar(psi, 'amplitude_gradient')
    X, single = as_points(x, psi.dim)
    _check_nodes(psi, X, 'amplitude_gradient')
    _, _, rho, grad_rho, _ = _density_derivatives(psi, X)
    return _result(grad_rho / (2 * np.sqrt(rho))[:, None], single)


def quantum_potential(psi, x):
    """
    Quantum potential Q = -(hbar^2 / 2m) Laplacian(R) / R.
    """
    _check_scalar(psi, 'quantum_potential')
    X, single = as_points(x, psi.dim)
    _check_nodes(psi, X, 'quantum_potential')
    ratio = amplitude_laplacian_ratio(psi, X)
    return _result(-psi.hbar**2 / (2 * psi.mass) * ratio, single)


def phase_gradient(psi, X):
    values = psi.value(X)[:, 0]
    grad = psi.gradient(X)[:, :, 0]
    return psi.hbar * np.imag(grad / values[:, None])


def guiding_velocity(psi, x):
    """
    Guiding velocity (hbar / m) Im[grad psi / psi].
    """
    _check_scalar(psi, 'guiding_velocity')
    X, single = as_points(x, psi.dim)
    _check_nodes(psi, X, 'guiding_velocity')
    return _result(phase_gradient(psi, X) / psi.mass, single)


def local_energy(psi, potential, x):
    """
    Local energy E_w = |grad S|^2 / 2m + V + Q.

    :param potential: Callable V on points (N, d); the potential of the
                      state if None.
    """
    _check_scalar(psi, 'local_energy')
    if potential is None:
        potential = psi.potential
    if potential is None:
        raise ValueError(f"State {psi.descriptor} has no potential, it "
                         "should be set explicitly.")
    X, single = as_points(x, psi.dim)
    _check_nodes(psi, X, 'local_energy')
    grad_s = phase_gradient(psi, X)
    q = -psi.hbar**2 / (2 * psi.mass) * amplitude_laplacian_ratio(psi, X)
    energy = np.sum(grad_s**2, axis=1) / (2 * psi.mass) + potential(X) + q
    return _result(energy, single)


def pointwise_identity(op, psi, x):
    """
    Pointwise ledger: lhs = |A psi|^2,
    scalar_rhs = |psi|^2 a_w^2 + (Im[psi^dagger A psi])^2 / |psi|^2 and
    deficit = lhs - scalar_rhs (zero for scalar states, the Cauchy-Schwarz
    gap for spinors).
    """
    X, single = as_points(x, psi.dim)
    _check_nodes(psi, X, 'pointwise_identity')
    rho, inner, abs2 = operator_products(op, psi, X)
    a_w = np.real(inner) / rho
    scalar_rhs = rho * a_w**2 + np.imag(inner)**2 / rho
    lhs = abs2
    deficit = lhs - scalar_rhs
    if single:
        return lhs[0], scalar_rhs[0], deficit[0]
    return lhs, scalar_rhs, deficit


def spin_weak_field(psi, x):
    """
    S_z weak field (hbar / 2)(|psi_up|^2 - |psi_down|^2) / |psi|^2.
    """
    if psi.components != 2:
        raise ValueError("Spin weak field is defined for spinor states.")
    X, single = as_points(x, psi.dim)
    _check_nodes(psi, X, 'spin_weak_field')
    values = np.abs(psi.value(X))**2
    result = psi.hbar / 2 * (values[:, 0] - values[:, 1]) / values.sum(axis=1)
    return _result(result, single)


def continuity_divergence(psi, x):
    """
    div(R^2 grad S) = hbar Im[psi^* Laplacian(psi)]. Zero for stationary
    states.
    """
    _check_scalar(psi, 'continuity_divergence')
    X, single = as_points(x, psi.dim)
    values = psi.value(X)[:, 0]
    lap = psi.laplacian(X)[:, 0]
    return _result(psi.hbar * np.imag(np.conj(values) * lap), single)


def field_scan(field, psi, points, op=None, potential=None):
    """
    Evaluates field at every point, points at nodes give samples with
    ``at_node`` set and ``value`` None.

    :param field: One of the field functions of this module.
    :param op: Operator for fields that need it.
    :param potential: Potential for :func:`local_energy`.
    """
    X, _ = as_points(points, psi.dim)
    mask = psi.at_node(X) if X.shape[0] > 0 else np.array([], dtype=bool)
    samples = [None] * X.shape[0]
    good = np.where(~mask)[0]
    if len(good) > 0:
        if op is not None:
            args = (op, psi)
        elif field is local_energy:
            args = (psi, potential)
        else:
            args = (psi,)
        values = field(*args, X[good])
        if isinstance(values, tuple):
            values = np.stack(values, axis=1)
        for i, value in zip(good, values):
            samples[i] = FieldSample(X[i], np.array(value).tolist())
    for i in np.where(mask)[0]:
        samples[i] = FieldSample(X[i], None, at_node=True)
    return samples


def write_field_scan(filename, samples):
    """
    Writes samples into csv with columns x1..xd, value, at_node. Vector
    values are written as value1..valuek.
    """
    if len(samples) == 0:
        return write_csv(filename, ['value', 'at_node'], [])
    dim = len(samples[0].position)
    present = [np.atleast_1d(s.value) for s in samples if s.value is not None]
    width = max((len(v) for v in present), default=1)
    value_cols = ['value'] if width == 1 else\
        [f'value{i + 1}' for i in range(width)]
    header = [f'x{i + 1}' for i in range(dim)] + value_cols + ['at_node']
    rows = []
    for s in samples:
        if s.value is None:
            values = [None] * width
        else:
            values = list(np.atleast_1d(s.value))
        rows.append(list(s.position) + values + [s.at_node])
    return write_csv(filename, header, rows)
