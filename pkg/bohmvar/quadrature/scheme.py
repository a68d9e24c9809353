import copy
import math
import numbers

import numpy as np
from scipy import optimize

from ..states.wave_function import NODE_REGION

RULES = ['gauss', 'midpoint', 'spherical']
MIN_HALF_WIDTH = 8.0


def box_half_width(psi, tail=1e-12):
    """
    Half-width of the integration box: max(8, ln(1/tail) / alpha) plus
    offset of the state center, alpha is decay rate of the state.
    """
    half_width = max(MIN_HALF_WIDTH, math.log(1 / tail) / psi.decay_rate)
    half_width += psi.center_offset
    locations = psi.nodal_hint.locations(np.zeros(psi.dim))
    for loc in locations:
        half_width = max(half_width, np.max(np.abs(loc)) + MIN_HALF_WIDTH)
    return half_width


def exclusion_radii(psi, node, axis, levels):
    """
    Distances s along +-e_axis from ``node`` where
    |psi(node + s e_axis)| = level * max|psi| for each level. Levels without
    crossing inside the node region are skipped.
    """
    max_abs = psi.max_abs
    s_max = NODE_REGION * psi.length_scale
    radii = []
    for sign in [1.0, -1.0]:
        def excess(s, level):
            point = np.array(node, dtype=float)
            point[axis] += sign * s
            return (math.sqrt(psi.density(point.reshape(1, -1))[0]) -
                    level * max_abs)
        for level in levels:
            if excess(s_max, level) <= 0:
                continue
            s = optimize.brentq(excess, 0.0, s_max, args=(level,),
                                xtol=1e-15, rtol=1e-14)
            radii.append(sign * s)
    return radii


class IntegrationScheme(object):
    """
    Quadrature scheme on the box [-L, L]^d.

    Every axis is split into panels of width ``panel`` and additionally at
    ``breakpoints`` (node coordinates and exclusion shells), every panel gets
    ``points`` nodes of the rule. For the ``spherical`` rule the radius
    [0, L] is split into panels, cos(theta) gets ``points`` Gauss nodes and
    phi gets 2 * ``points`` uniform nodes.

    :param half_width: Half-width L of the box (number or list per axis).
    :param points: Number of nodes per panel, at least 16.
    :param rule: ``gauss``, ``midpoint`` or ``spherical``.
    :param panel: Width of regular panels.
    :param breakpoints: List (per axis) of additional panel edges.
    :param eps0: First level of exclusion schedule (relative to max|psi|).
    :param eps_ratio: Ratio of geometric exclusion schedule.
    :param eps_count: Number of levels in exclusion schedule.
    :param tail: Tail mass bound used to choose the box.
    :param tol_conv: Relative tolerance of convergence of exclusion
                     sequences.
    """
    def __init__(self, half_width, points=16, rule='gauss', panel=1.0,
                 breakpoints=None, eps0=1e-3, eps_ratio=0.5, eps_count=13,
                 tail=1e-12, tol_conv=1e-6):
        half_width = np.atleast_1d(np.array(half_width, dtype=float))
        if np.any(half_width <= 0):
            raise ValueError(f"Half-width of box ({half_width}) must be "
                             "positive.")
        if (not isinstance(points, numbers.Integral) or
                isinstance(points, bool) or points < 16):
            raise ValueError(f"Number of points per panel ({points}) must be"
                             " integer not less than 16.")
        if rule not in RULES:
            raise ValueError(f"Rule ({rule}) must be one of {RULES}.")
        if panel <= 0:
            raise ValueError(f"Panel width ({panel}) must be positive.")
        if not 0 < eps0 < 1:
            raise ValueError(f"First exclusion level ({eps0}) must be "
                             "between 0 and 1.")
        if not 0 < eps_ratio < 1:
            raise ValueError(f"Exclusion ratio ({eps_ratio}) must be between"
                             " 0 and 1.")
        if (not isinstance(eps_count, numbers.Integral) or eps_count < 2):
            raise ValueError(f"Number of exclusion levels ({eps_count}) must"
                             " be integer not less than 2.")
        if not 0 < tail <= 1e-10:
            raise ValueError(f"Tail bound ({tail}) must be in (0, 1e-10].")
        if tol_conv <= 0:
            raise ValueError(f"Convergence tolerance ({tol_conv}) must be "
                             "positive.")
        self.half_width = half_width
        self.points = int(points)
        self.rule = rule
        self.panel = float(panel)
        if breakpoints is None:
            breakpoints = [[] for _ in half_width]
        if len(breakpoints) != len(half_width):
            raise ValueError("Breakpoints should be given for every axis.")
        self.breakpoints = [sorted(float(b) for b in bp)
                            for bp in breakpoints]
        self.eps0 = float(eps0)
        self.eps_ratio = float(eps_ratio)
        self.eps_count = int(eps_count)
        self.tail = float(tail)
        self.tol_conv = float(tol_conv)

    @property
    def dim(self):
        return len(self.half_width)

    @property
    def eps_schedule(self):
        return self.eps0 * self.eps_ratio**np.arange(self.eps_count)

    def panel_edges(self, axis):
        """
        Sorted edges of panels along ``axis``.
        """
        L = self.half_width[axis]
        lower = 0.0 if self.rule == 'spherical' else -L
        n_panels = max(1, int(math.ceil((L - lower) / self.panel)))
        edges = list(np.linspace(lower, L, n_panels + 1))
        edges += [b for b in self.breakpoints[axis] if lower < b < L]
        edges = np.unique(np.array(edges))
        keep = np.concatenate([[True], np.diff(edges) > 1e-14 * L])
        return edges[keep]

    def nodes_1d(self, axis, level=1):
        """
        Nodes and weights of the composite rule along ``axis`` with
        ``level * points`` nodes per panel.
        """
        edges = self.panel_edges(axis)
        n = self.points * level
        if self.rule == 'midpoint':
            base = (np.arange(n) + 0.5) / n * 2 - 1
            base_weights = np.full(n, 2.0 / n)
        else:
            base, base_weights = np.polynomial.legendre.leggauss(n)
        left, right = edges[:-1, None], edges[1:, None]
        nodes = (left + right) / 2 + (right - left) / 2 * base[None, :]
        weights = (right - left) / 2 * base_weights[None, :]
        return nodes.ravel(), weights.ravel()

    def copy(self, **overrides):
        new = copy.deepcopy(self)
        for key, value in overrides.items():
            if not hasattr(new, key):
                raise AttributeError(f"Unknown scheme attribute {key}.")
        kwargs = new.to_dict()
        kwargs['breakpoints'] = new.breakpoints
        kwargs.update(overrides)
        return IntegrationScheme(**kwargs)

    def to_dict(self):
        return {'half_width': self.half_width.tolist(),
                'points': self.points,
                'rule': self.rule,
                'panel': self.panel,
                'eps0': self.eps0,
                'eps_ratio': self.eps_ratio,
                'eps_count': self.eps_count,
                'tail': self.tail,
                'tol_conv': self.tol_conv}

    @staticmethod
    def for_state(psi, points=16, rule=None, panel=1.0, eps0=1e-3,
                  eps_ratio=0.5, eps_count=13, tail=1e-12, tol_conv=1e-6):
        """
        Default scheme for the state: box from decay rate, spherical rule
        for three-dimensional states with cusps, panels split at node
        coordinates and at the exclusion shells of every level.
        """
        if rule is None:
            rule = 'spherical' if (psi.dim == 3 and psi.cusps) else 'gauss'
        if rule == 'spherical' and not psi.nodal_hint.is_empty:
            raise ValueError("Spherical rule supports nodeless states only.")
        if rule == 'spherical' and psi.dim != 3:
            raise ValueError("Spherical rule needs three-dimensional state.")
        half_width = box_half_width(psi, tail)
        breakpoints = [[] for _ in range(psi.dim)]
        hint = psi.nodal_hint
        levels = eps0 * eps_ratio**np.arange(eps_count)
        if not hint.is_empty:
            for node in hint.points:
                for axis in range(psi.dim):
                    breakpoints[axis].append(node[axis])
                    breakpoints[axis] += [node[axis] + s for s in
                                          exclusion_radii(psi, node, axis,
                                                          levels)]
            for axis, coord in hint.hyperplanes:
                node = np.array(psi.peak, dtype=float)
                node[axis] = coord
                breakpoints[axis].append(coord)
                breakpoints[axis] += [coord + s for s in
                                      exclusion_radii(psi, node, axis,
                                                      levels)]
        if rule == 'spherical':
            half_width = [half_width]
            breakpoints = [[]]
        else:
            half_width = [half_width] * psi.dim
        return IntegrationScheme(half_width, points=points, rule=rule,
                                 panel=panel, breakpoints=breakpoints,
                                 eps0=eps0, eps_ratio=eps_ratio,
                                 eps_count=eps_count, tail=tail,
                                 tol_conv=tol_conv)

    def __repr__(self):
        return f"IntegrationScheme(rule={self.rule}, half_width="\
               f"{self.half_width.tolist()}, points={self.points})"
