"""
Exact evaluation of Hermite functions, their derivatives and derivatives of
radial profiles. All evaluations are vectorized over points.
"""
import math
import functools
from collections import defaultdict

import numpy as np


def hermite_functions(nmax, xi):
    """
    Returns array of shape (nmax + 1, N) with normalized Hermite functions
    phi_j(xi) = (2^j j! sqrt(pi))^{-1/2} H_j(xi) exp(-xi^2/2), j = 0..nmax.
    Three-term recurrence is used, it is stable for large j and xi.
    """
    xi = np.asarray(xi, dtype=float)
    phi = np.empty((nmax + 1,) + xi.shape)
    phi[0] = math.pi**(-0.25) * np.exp(-0.5 * xi**2)
    if nmax >= 1:
        phi[1] = math.sqrt(2.0) * xi * phi[0]
    for j in range(1, nmax):
        phi[j + 1] = (math.sqrt(2.0 / (j + 1)) * xi * phi[j] -
                      math.sqrt(j / (j + 1)) * phi[j - 1])
    return phi


@functools.lru_cache(maxsize=None)
def hermite_derivative_coefficients(n, k):
    """
    Coefficients c_j such that d^k/dxi^k phi_n = sum_j c_j phi_j. Obtained by
    applying ladder relation
    phi_j' = sqrt(j/2) phi_{j-1} - sqrt((j+1)/2) phi_{j+1} k times.
    """
    coefs = {n: 1.0}
    for _ in range(k):
        new_coefs = defaultdict(float)
        for j, c in coefs.items():
            if j > 0:
                new_coefs[j - 1] += c * math.sqrt(j / 2.0)
            new_coefs[j + 1] -= c * math.sqrt((j + 1) / 2.0)
        coefs = dict(new_coefs)
    return tuple(sorted(coefs.items()))


def hermite_function_derivative(n, k, xi):
    """
    Returns k-th derivative of normalized Hermite function phi_n at xi.
    """
    coefs = hermite_derivative_coefficients(n, k)
    phi = hermite_functions(n + k, xi)
    result = np.zeros_like(np.asarray(xi, dtype=float))
    for j, c in coefs:
        result = result + c * phi[j]
    return result


def hermite_roots(n):
    """
    Roots of physicists' Hermite polynomial H_n in increasing order.
    """
    if n == 0:
        return np.array([])
    coefs = np.zeros(n + 1)
    coefs[n] = 1
    return np.sort(np.polynomial.hermite.hermroots(coefs).real)


@functools.lru_cache(maxsize=None)
def radial_derivative_terms(alpha):
    """
    Expansion of the partial derivative of a radial function F(|x|):

        d^alpha F(r) = sum coef * F^{(k)}(r) * x^beta * r^{-p}

    Returns tuple of terms (coef, k, beta, p). Derived by the rules
    d_j F^{(k)}(r) = F^{(k+1)} x_j / r, d_j x^beta = beta_j x^{beta - e_j},
    d_j r^{-p} = -p x_j r^{-p-2}.
    """
    dim = len(alpha)
    terms = {(0, (0,) * dim, 0): 1.0}
    for axis, order in enumerate(alpha):
        for _ in range(order):
            new_terms = defaultdict(float)
            for (k, beta, p), coef in terms.items():
                plus = tuple(b + (i == axis) for i, b in enumerate(beta))
                new_terms[(k + 1, plus, p + 1)] += coef
                if beta[axis] > 0:
                    minus = tuple(b - (i == axis) for i, b in enumerate(beta))
                    new_terms[(k, minus, p)] += coef * beta[axis]
                if p > 0:
                    new_terms[(k, plus, p + 2)] -= coef * p
            terms = {key: c for key, c in new_terms.items() if c != 0}
    return tuple((c, k, beta, p) for (k, beta, p), c in sorted(terms.items()))


def radial_partial(profile_derivative, X, alpha):
    """
    Partial derivative of radial function F(|x|) at points X (N, d).

    :param profile_derivative: Function (k, r) -> F^{(k)}(r).
    :param X: Points of shape (N, d).
    :param alpha: Multi-index.
    """
    r = np.sqrt(np.sum(X**2, axis=1))
    result = np.zeros(X.shape[0])
    with np.errstate(divide='ignore', invalid='ignore'):
        for coef, k, beta, p in radial_derivative_terms(tuple(alpha)):
            monomial = np.prod(X**np.array(beta), axis=1)
            result = result + coef * profile_derivative(k, r) * monomial / r**p
    return result


@functools.lru_cache(maxsize=None)
def exponent_derivative_polynomial(k):
    """
    For g with constant second derivative c, d^k exp(g) = P_k(g', c) exp(g).
    Returns coefficients as dict {(i, j): coef} for g'^i c^j, built from
    P_{k+1} = u P_k + c dP_k/du.
    """
    poly = {(0, 0): 1.0}
    for _ in range(k):
        new_poly = defaultdict(float)
        for (i, j), coef in poly.items():
            new_poly[(i + 1, j)] += coef
            if i > 0:
                new_poly[(i - 1, j + 1)] += coef * i
        poly = dict(new_poly)
    return tuple(sorted(poly.items()))
