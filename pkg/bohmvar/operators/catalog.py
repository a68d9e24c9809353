import re

import numpy as np

from .operator import DiffOperator, Term, CoordinateCoefficient,\
    FunctionCoefficient
from ..states import get_potential, Potential
from ..utils import parse_descriptor

KINDS = ['position', 'momentum', 'kinetic', 'hamiltonian',
         'spin_x', 'spin_y', 'spin_z', 'custom']

PAULI = {'spin_x': np.array([[0, 1], [1, 0]], dtype=complex),
         'spin_y': np.array([[0, -1j], [1j, 0]], dtype=complex),
         'spin_z': np.array([[1, 0], [0, -1]], dtype=complex)}


def _unit(dim, axis, order=1):
    return tuple(order if i == axis else 0 for i in range(dim))


def _split_kind(kind, axis):
    match = re.fullmatch(r"(position|momentum)_(\d)", kind)
    if match is not None:
        if axis is not None and int(axis) != int(match.group(2)):
            raise ValueError(f"Axis in kind `{kind}` differs from axis "
                             f"{axis}.")
        return match.group(1), int(match.group(2))
    return kind, axis


def _potential_coefficient(potential, mass, params):
    if potential is None:
        raise ValueError("Hamiltonian requires potential V(x).")
    if isinstance(potential, str):
        if potential == 'ho':
            params = {'mass': mass, **params}
        potential = get_potential(potential, **params)
    elif params:
        raise ValueError(f"Unknown parameters of hamiltonian: {params}.")
    if isinstance(potential, Potential):
        return FunctionCoefficient(potential, bounded=potential.bounded)
    return FunctionCoefficient(potential)


def parse_terms(terms):
    """
    Parses custom terms from string ``i1.i2:coef;j1.j2:coef`` (multi-index
    components separated by dots, items by semicolons) into list of pairs.
    """
    if not isinstance(terms, str):
        return list(terms)
    result = []
    for item in terms.split(';'):
        alpha, sep, coef = item.partition(':')
        if sep == "":
            raise ValueError(f"Bad custom term `{item}`: expected "
                             "multi-index:coefficient.")
        try:
            alpha = tuple(int(a) for a in alpha.split('.'))
            coef = float(coef)
        except ValueError:
            raise ValueError(f"Bad custom term `{item}`.")
        result.append((alpha, coef))
    return result


def build_operator(kind, dim=1, hbar=1.0, mass=1.0, axis=None,
                   potential=None, terms=None, scale=None, **params):
    """
    Builds operator of the catalog.

    :param kind: One of position, momentum (with ``axis`` or as
                 ``momentum_1`` etc.), kinetic, hamiltonian, spin_x, spin_y,
                 spin_z, custom.
    :param dim: Dimension of configuration space.
    :param axis: Axis (starting from 1) for position and momentum.
    :param potential: Potential for hamiltonian: registered id (``ho``,
                      ``coulomb``, ``free``), :class:`Potential` or callable.
    :param terms: Terms of custom operator: list of (alpha, coefficient)
                  or string accepted by :func:`parse_terms`.
    :param scale: Optional real factor c to build c * A.
    :param params: Parameters of the registered potential.
    """
    kind, axis = _split_kind(kind, axis)
    if kind not in KINDS:
        raise ValueError(f"Unknown operator kind `{kind}`. Available: "
                         f"{KINDS}.")
    if kind in ['position', 'momentum']:
        if axis is None:
            axis = 1
        if int(axis) != axis or not 1 <= axis <= dim:
            raise ValueError(f"Axis ({axis}) must be between 1 and {dim}.")
        axis = int(axis)
    if params and kind != 'hamiltonian':
        raise ValueError(f"Unknown parameters {params} for operator {kind}.")
    zero = (0,) * dim

    if kind == 'position':
        op = DiffOperator([Term(zero, CoordinateCoefficient(axis - 1))], dim,
                          f"position_{axis}", hbar=hbar, mass=mass,
                          axis=axis - 1)
    elif kind == 'momentum':
        op = DiffOperator([Term(_unit(dim, axis - 1), 1.0)], dim,
                          f"momentum_{axis}", hbar=hbar, mass=mass,
                          axis=axis - 1)
    elif kind in ['kinetic', 'hamiltonian']:
        op_terms = [Term(_unit(dim, j, 2), 1 / (2 * mass))
                    for j in range(dim)]
        if kind == 'hamiltonian':
            coef = _potential_coefficient(potential, mass, params)
            op_terms.append(Term(zero, coef))
        op = DiffOperator(op_terms, dim, kind, hbar=hbar, mass=mass)
    elif kind in PAULI:
        op = DiffOperator([Term(zero, 1.0)], dim, kind,
                          matrix=hbar / 2 * PAULI[kind], hbar=hbar, mass=mass)
    else:
        if terms is None:
            raise ValueError("Custom operator requires explicit terms.")
        op = DiffOperator(parse_terms(terms), dim, 'custom', hbar=hbar,
                          mass=mass)
    if scale is not None:
        op = op.scaled(scale)
    return op


def parse_operator(descriptor, dim=1, hbar=1.0, mass=1.0, potential=None):
    """
    Builds operator from descriptor like ``momentum:axis=1``,
    ``hamiltonian:potential=ho``, ``spin_z`` or ``custom:terms=2:-0.5``.
    If hamiltonian has no potential in descriptor then ``potential`` is
    used (usually the potential of the state).
    """
    if isinstance(descriptor, DiffOperator):
        return descriptor
    name, params = parse_descriptor(descriptor)
    if name == 'hamiltonian' and 'potential' not in params:
        params['potential'] = potential
    return build_operator(name, dim=dim, hbar=hbar, mass=mass, **params)


def operator_for_state(descriptor, psi):
    """
    Builds operator for the dimension, units and potential of ``psi``.
    """
    return parse_operator(descriptor, psi.dim, psi.hbar, psi.mass,
                          psi.potential)
