import numbers

import numpy as np

from ..utils import as_points


class Coefficient(object):
    """
    Real coefficient function a(x) of an operator term evaluated on points
    of shape (N, d).

    :cvar bool Coefficient.bounded: whether a(x) is bounded globally.
    """
    bounded = True
    constant = None

    def __call__(self, X):
        raise NotImplementedError

    def scaled(self, factor):
        return ScaledCoefficient(self, factor)


class ConstantCoefficient(Coefficient):
    def __init__(self, value):
        if (not isinstance(value, numbers.Real) or isinstance(value, bool) or
                not np.isfinite(value)):
            raise ValueError(f"Coefficient ({value}) must be a finite real "
                             "number.")
        self.constant = float(value)

    def __call__(self, X):
        return np.full(np.asarray(X).shape[0], self.constant)

    def scaled(self, factor):
        return ConstantCoefficient(self.constant * factor)

    def __repr__(self):
        return repr(self.constant)


class CoordinateCoefficient(Coefficient):
    """
    Coordinate x_axis (axis is zero-based).
    """
    bounded = False

    def __init__(self, axis):
        self.axis = int(axis)

    def __call__(self, X):
        return np.asarray(X, dtype=float)[:, self.axis]

    def __repr__(self):
        return f"x{self.axis + 1}"


class FunctionCoefficient(Coefficient):
    """
    Coefficient given by arbitrary callable (e.g. potential).
    """
    def __init__(self, function, bounded=None):
        if not callable(function):
            raise ValueError(f"Coefficient {function} is not callable.")
        self.function = function
        if bounded is None:
            bounded = getattr(function, 'bounded', False)
        self.bounded = bounded

    def __call__(self, X):
        return np.asarray(self.function(X), dtype=float)

    def __repr__(self):
        return repr(self.function)


class ScaledCoefficient(Coefficient):
    def __init__(self, inner, factor):
        self.inner = inner
        self.factor = float(factor)
        self.bounded = inner.bounded

    def __call__(self, X):
        return self.factor * self.inner(X)

    def __repr__(self):
        return f"{self.factor}*{self.inner!r}"


def as_coefficient(value):
    if isinstance(value, Coefficient):
        return value
    if callable(value):
        return FunctionCoefficient(value)
    return ConstantCoefficient(value)


class Term(object):
    """
    Term a(x) D^alpha with D^alpha = (-i hbar)^{|alpha|} d^alpha.

    :param alpha: Multi-index.
    :param coefficient: Number, callable or :class:`Coefficient`.
    """
    def __init__(self, alpha, coefficient):
        alpha = tuple(int(a) for a in np.atleast_1d(alpha))
        if any(a < 0 for a in alpha):
            raise ValueError(f"Multi-index {alpha} has negative elements.")
        self.alpha = alpha
        self.coefficient = as_coefficient(coefficient)

    @property
    def order(self):
        return sum(self.alpha)

    def derivative_factor(self, hbar=1.0):
        """
        Full constant factor a * (-i hbar)^{|alpha|} in front of d^alpha,
        None for non-constant coefficients.
        """
        if self.coefficient.constant is None:
            return None
        return self.coefficient.constant * (-1j * hbar)**self.order

    def __repr__(self):
        return f"Term({self.alpha}, {self.coefficient!r})"


class DiffOperator(object):
    """
    Differential operator sum_alpha a_alpha(x) D^alpha with optional
    constant 2x2 Hermitian matrix acting on spinor components after the
    differential part. Immutable after construction.

    :param terms: List of :class:`Term` or pairs (alpha, coefficient).
    :param dim: Dimension of configuration space.
    :param kind: Kind tag (position_j, momentum_j, kinetic, hamiltonian,
                 spin_z, spin_x, spin_y or custom).
    :param matrix: Optional 2x2 Hermitian matrix.
    :param hbar: Reduced Planck constant.
    :param mass: Mass (kept for kinetic-type operators).
    """
    def __init__(self, terms, dim=1, kind='custom', matrix=None, hbar=1.0,
                 mass=1.0, axis=None):
        if dim not in [1, 2, 3]:
            raise ValueError(f"Dimension ({dim}) must be 1, 2 or 3.")
        terms = [t if isinstance(t, Term) else Term(*t) for t in terms]
        if len(terms) == 0:
            raise ValueError("Operator should have at least one term.")
        for term in terms:
            if len(term.alpha) != dim:
                raise ValueError(f"Multi-index {term.alpha} does not match "
                                 f"dimension {dim}.")
        if matrix is not None:
            matrix = np.array(matrix, dtype=complex)
            if matrix.shape != (2, 2):
                raise ValueError("Matrix part must be 2x2.")
            if not np.all(np.isfinite(matrix)):
                raise ValueError("Matrix part must be finite.")
            if not np.allclose(matrix, matrix.conj().T, atol=0):
                raise ValueError("Matrix part must be Hermitian.")
        if hbar <= 0 or mass <= 0:
            raise ValueError(f"Units hbar ({hbar}) and mass ({mass}) must be"
                             " positive.")
        self._terms = tuple(terms)
        self._matrix = matrix
        self.dim = dim
        self.kind = kind
        self.hbar = float(hbar)
        self.mass = float(mass)
        self.axis = axis

    @property
    def terms(self):
        return self._terms

    @property
    def matrix(self):
        return None if self._matrix is None else self._matrix.copy()

    @property
    def order(self):
        return max(term.order for term in self._terms)

    @property
    def bounded(self):
        return all(term.coefficient.bounded for term in self._terms)

    @property
    def has_matrix(self):
        return self._matrix is not None

    def check_coefficients(self, X):
        """
        Checks that coefficients are finite reals at points X.

        :raises ValueError: if some coefficient is not finite.
        """
        for term in self._terms:
            values = term.coefficient(X)
            if not np.all(np.isfinite(values)):
                raise ValueError(f"Coefficient of term {term} is not finite "
                                 "on the evaluation box.")

    def _apply(self, psi, X):
        if psi.dim != self.dim:
            raise ValueError(f"Operator of dimension {self.dim} could not be"
                             f" applied to state of dimension {psi.dim}.")
        if (psi.hbar, psi.mass) != (self.hbar, self.mass):
            raise ValueError(f"Units of operator {(self.hbar, self.mass)} "
                             f"differ from units of state {psi.units}.")
        if self.has_matrix and psi.components != 2:
            raise ValueError(f"Operator {self.kind} with matrix part needs "
                             "two-component state.")
        if self.order > psi.max_order:
            raise ValueError(f"Operator order {self.order} exceeds available"
                             f" derivatives of state ({psi.max_order}).")
        result = np.zeros((X.shape[0], psi.components), dtype=complex)
        with np.errstate(divide='ignore', invalid='ignore'):
            for term in self._terms:
                factor = (-1j * self.hbar)**term.order
                derivative = psi.partial(X, term.alpha)
                result += (term.coefficient(X) * factor)[:, None] * derivative
        if self.has_matrix:
            result = result @ self._matrix.T
        return result

    def apply(self, psi, x):
        """
        Returns (A psi)(x) of shape (components,) or (N, components).
        """
        X, single = as_points(x, self.dim)
        result = self._apply(psi, X)
        return result[0] if single else result

    def scaled(self, factor):
        """
        Returns operator c * A for real constant c.
        """
        if (not isinstance(factor, numbers.Real) or
                not np.isfinite(factor)):
            raise ValueError(f"Scale factor ({factor}) must be finite real.")
        terms = [Term(t.alpha, t.coefficient.scaled(factor))
                 for t in self._terms]
        kind = self.kind if factor == 1 else f"{factor}*{self.kind}"
        return DiffOperator(terms, self.dim, kind, self._matrix, self.hbar,
                            self.mass, self.axis)

    def __repr__(self):
        return f"DiffOperator({self.kind}, order={self.order}, "\
               f"terms={list(self._terms)})"


def apply_operator(op, psi, x):
    """
    Returns sum_terms a_alpha(x) (-i hbar)^{|alpha|} d^alpha psi(x) with the
    matrix part applied to components.
    """
    return op.apply(psi, x)
