import itertools
import math
import warnings

import numpy as np
from scipy import ndimage, optimize, spatial

from ..states.wave_function import TAU_NODE

DEFAULT_RESOLUTION = {1: 4000, 2: 400, 3: 60}
ZERO_ORDER_RADII = np.logspace(-4, -2, 9)
MAX_FIT_RESIDUAL = 0.05
MAX_INTEGER_DEVIATION = 0.05
VOLUME_RADII = [0.1, 0.05, 0.025]
MAX_VOLUME_ERROR = 0.2


def h6_verdict(k, m, d):
    """
    Integrability verdict k - m + d / 2 > 0 for zero order ``k``, operator
    order ``m`` and dimension ``d``.
    """
    if k < 1 or m < 0 or d < 1:
        raise ValueError(f"Zero order ({k}) must be at least 1, operator "
                         f"order ({m}) non-negative and dimension ({d}) "
                         "positive.")
    return bool(k - m + d / 2 > 0)


class NodeCluster(object):
    """
    Connected group of grid cells containing nodes.

    :param center: Point of the nodal set representing the cluster.
    :param cells: Positions of cells (n_cells, d) on the nodal set.
    :param extended: Whether cluster is a curve/surface rather than a point.
    :param spacing: Grid spacing of cells.
    """
    def __init__(self, center, cells, extended=False, spacing=0.0):
        self.center = np.array(center, dtype=float)
        self.cells = np.atleast_2d(np.array(cells, dtype=float))
        self.extended = bool(extended)
        self.spacing = float(spacing)

    def to_dict(self):
        return {'center': self.center.tolist(),
                'cells': len(self.cells),
                'extended': self.extended}

    def __repr__(self):
        return f"NodeCluster(center={self.center.tolist()}, "\
               f"cells={len(self.cells)}, extended={self.extended})"


def _scan_grid(psi, resolution):
    half = psi.center_offset + 6 * psi.length_scale
    axis = np.linspace(-half, half, resolution)
    grids = np.meshgrid(*([axis] * psi.dim), indexing='ij')
    X = np.stack([g.ravel() for g in grids], axis=1)
    shape = (resolution,) * psi.dim
    values = psi.value(X)[:, 0].reshape(shape)
    near = psi.near_nodes(X).reshape(shape)
    return axis, values, near


def _wrapped(delta):
    return (delta + np.pi) % (2 * np.pi) - np.pi


def _node_cells(psi, axis, values, near):
    """
    Boolean array over cells (resolution - 1)^d with nodes inside and array
    of axes of sign changes (-1 for other detections).
    """
    dim = psi.dim
    n = len(axis)
    max_abs = np.max(np.abs(values))
    cell_shape = (n - 1,) * dim
    cells = np.zeros(cell_shape, dtype=bool)
    change_axis = np.full(cell_shape, -1, dtype=int)
    corners = [tuple(slice(c, n - 1 + c) for c in offset)
               for offset in itertools.product([0, 1], repeat=dim)]
    real = np.max(np.abs(np.imag(values))) <= 1e-14 * max_abs
    if real:
        signs = np.sign(np.real(values))
        for j in range(dim):
            left = [slice(0, n - 1)] * dim
            right = [slice(0, n - 1)] * dim
            right[j] = slice(1, n)
            change = signs[tuple(left)] * signs[tuple(right)] < 0
            change_axis[change & ~cells] = j
            cells |= change
    elif dim == 2:
        loop = [(0, 0), (1, 0), (1, 1), (0, 1)]
        phases = [np.angle(values[i:n - 1 + i, j:n - 1 + j])
                  for i, j in loop]
        winding = sum(_wrapped(phases[(i + 1) % 4] - phases[i])
                      for i in range(4))
        cells |= np.abs(winding) > np.pi
    # far-field underflow is not a node
    small = (np.abs(values) < TAU_NODE * max_abs) & near
    for corner in corners:
        cells |= small[corner]
    return cells, change_axis


def _refine(psi, point, change_axis, spacing):
    """
    Refines point on the nodal set: root along axis of sign change or
    minimum of |psi|^2 near the point.
    """
    point = np.array(point, dtype=float)
    if change_axis >= 0:
        def along(t):
            x = point.copy()
            x[change_axis] = t
            return np.real(psi.value(x.reshape(1, -1))[0, 0])
        lo = point[change_axis] - spacing
        hi = point[change_axis] + spacing
        if along(lo) * along(hi) < 0:
            point[change_axis] = optimize.brentq(along, lo, hi, xtol=1e-14,
                                                 rtol=1e-14)
            return point

    def density(x):
        return psi.density(np.reshape(x, (1, -1)))[0]
    res = optimize.minimize(density, point, method='Nelder-Mead',
                            options={'xatol': 1e-12, 'fatol': 1e-30,
                                     'maxiter': 4000})
    return res.x


def locate_nodes(psi, resolution=None):
    """
    Locates nodes of scalar state on a grid around its center: cells with
    sign changes (real states), phase winding (complex states in 2D) or
    |psi| below node threshold. Cells are grouped in connected clusters.

    :param resolution: Number of grid points per axis.
    :returns: list of :class:`NodeCluster`.
    :raises ValueError: for spinors and when resolution does not separate
                        declared nodes.
    """
    if psi.components != 1:
        raise ValueError("Nodes are located for scalar states only.")
    if resolution is None:
        resolution = DEFAULT_RESOLUTION[psi.dim]
    if resolution < 4:
        raise ValueError(f"Resolution ({resolution}) must be at least 4.")
    axis, values, near = _scan_grid(psi, resolution)
    spacing = axis[1] - axis[0]
    cells, change_axis = _node_cells(psi, axis, values, near)
    structure = ndimage.generate_binary_structure(psi.dim, psi.dim)
    labels, n_clusters = ndimage.label(cells, structure=structure)
    clusters = []
    for label in range(1, n_clusters + 1):
        indices = np.argwhere(labels == label)
        positions = axis[indices] + spacing / 2
        extended = np.any(np.ptp(indices, axis=0) > 2)
        # extended sets are represented away from their crossings
        target = psi.peak if extended else positions.mean(axis=0)
        closest = np.argmin(np.sum((positions - target)**2, axis=1))
        center = _refine(psi, positions[closest],
                         change_axis[tuple(indices[closest])], spacing)
        if not extended:
            positions = center.reshape(1, -1)
        clusters.append(NodeCluster(center, positions, extended, spacing))
    hint = psi.nodal_hint
    if len(hint.hyperplanes) == 0 and n_clusters < len(hint.points):
        raise ValueError(f"Resolution ({resolution}) is too coarse to "
                         f"separate {len(hint.points)} declared nodes of "
                         f"{psi.descriptor}: {n_clusters} found.")
    clusters.sort(key=lambda c: tuple(c.center))
    return clusters


def nodes_from_hint(psi):
    """
    Node clusters from declared nodal hint of the state.
    """
    hint = psi.nodal_hint
    clusters = [NodeCluster(p, p) for p in hint.points]
    for loc in hint.locations(psi.peak)[len(hint.points):]:
        clusters.append(NodeCluster(loc, loc, extended=True))
    return clusters


def _directions(dim):
    if dim == 1:
        return [np.array([1.0]), np.array([-1.0])]
    if dim == 2:
        angles = np.arange(8) * np.pi / 4
        return [np.array([np.cos(a), np.sin(a)]) for a in angles]
    return [np.array(s) / math.sqrt(3)
            for s in itertools.product([1.0, -1.0], repeat=3)]


class ZeroOrderFit(object):
    """
    Fit of local vanishing order |psi(x0 + r u)| ~ C r^k.

    :param k_fit: Maximum over directions of fitted slopes.
    :param residual: Maximum RMS of fits.
    :param slopes: Slopes per used direction.
    """
    def __init__(self, node, k_fit, residual, slopes):
        self.node = np.array(node, dtype=float)
        self.k_fit = float(k_fit)
        self.residual = float(residual)
        self.slopes = [float(s) for s in slopes]

    @property
    def inconclusive(self):
        return bool(self.residual > MAX_FIT_RESIDUAL or
                    abs(self.k_fit - round(self.k_fit)) >
                    MAX_INTEGER_DEVIATION)

    @property
    def k(self):
        """
        Integer order, None if fit is inconclusive.
        """
        return None if self.inconclusive else int(round(self.k_fit))

    def to_dict(self):
        return {'node': self.node.tolist(),
                'k_fit': self.k_fit,
                'residual': self.residual,
                'k': self.k,
                'inconclusive': self.inconclusive}

    def __repr__(self):
        return f"ZeroOrderFit(k_fit={self.k_fit}, residual={self.residual})"


def estimate_zero_order(psi, node, radii=None):
    """
    Fits log|psi(x0 + r u)| against log r for several directions u. Order is
    the maximum slope as vanishing order bounds |psi| from below.

    :param node: Position of the node.
    :param radii: Radii of fit, two decades in [1e-4, 1e-2] by default.
    :returns: :class:`ZeroOrderFit`.
    """
    node = np.atleast_1d(np.array(node, dtype=float))
    if len(node) != psi.dim:
        raise ValueError(f"Node {node.tolist()} has wrong dimension.")
    radii = ZERO_ORDER_RADII if radii is None else np.asarray(radii)
    log_r = np.log(radii)
    threshold = TAU_NODE * psi.max_abs
    slopes, residuals = [], []
    for u in _directions(psi.dim):
        X = node + radii[:, None] * u
        abs_values = np.sqrt(psi.density(X))
        if np.any(abs_values <= threshold):
            # direction inside the nodal set
            continue
        coefs, res, _, _, _ = np.polyfit(log_r, np.log(abs_values), 1,
                                         full=True)
        slopes.append(coefs[0])
        rms = math.sqrt(res[0] / len(radii)) if len(res) > 0 else 0.0
        residuals.append(rms)
    if len(slopes) == 0:
        raise ValueError(f"State vanishes in all directions from "
                         f"{node.tolist()}.")
    fit = ZeroOrderFit(node, max(slopes), max(residuals), slopes)
    if fit.inconclusive:
        warnings.warn(f"Zero order fit at {node.tolist()} is inconclusive: "
                      f"k = {fit.k_fit}, residual = {fit.residual}.")
    return fit


class VolumeGrowth(object):
    """
    Volumes of neighborhoods {x: dist(x, N) < r} of the nodal set with
    fitted growth exponent and constant C_V = max Vol / r.
    """
    def __init__(self, radii, volumes, errors, exponent, cv,
                 distance_accuracy=0.0):
        self.radii = [float(r) for r in radii]
        self.volumes = [float(v) for v in volumes]
        self.errors = [float(e) for e in errors]
        self.exponent = exponent
        self.cv = float(cv)
        self.distance_accuracy = float(distance_accuracy)

    @property
    def pairs(self):
        return list(zip(self.radii, self.volumes))

    def to_dict(self):
        return {'pairs': [list(p) for p in self.pairs],
                'errors': self.errors,
                'exponent': self.exponent,
                'cv': self.cv,
                'distance_accuracy': self.distance_accuracy}

    def __repr__(self):
        return f"VolumeGrowth(exponent={self.exponent}, cv={self.cv})"


def volume_growth(psi, radii=None, nodes=None, samples=200000, seed=0):
    """
    Monte Carlo estimate of volumes of node neighborhoods. Points are drawn
    in cubes of half-width max(radii) around every node position and
    counted only in the cube of the nearest position.

    :param nodes: list of :class:`NodeCluster`, located if None.
    :raises ValueError: when relative error of the smallest volume is above
                        20%.
    """
    radii = sorted(VOLUME_RADII if radii is None else radii, reverse=True)
    if any(r <= 0 for r in radii):
        raise ValueError(f"Radii ({radii}) must be positive.")
    if nodes is None:
        nodes = (locate_nodes(psi) if psi.components == 1
                 else nodes_from_hint(psi))
    if len(nodes) == 0:
        return VolumeGrowth(radii, [0.0] * len(radii), [0.0] * len(radii),
                            None, 0.0)
    sources = np.vstack([c.cells for c in nodes])
    # cell centers approximate extended nodal sets to half a cell diagonal
    accuracy = max([c.spacing * math.sqrt(psi.dim) / 2
                    for c in nodes if c.extended] + [0.0])
    r_max = radii[0]
    n_per_source = max(int(math.ceil(samples / len(sources))), 1)
    rng = np.random.default_rng(seed)
    owner = np.repeat(np.arange(len(sources)), n_per_source)
    X = sources[owner] + rng.uniform(-r_max, r_max,
                                     size=(len(owner), psi.dim))
    dist, nearest = spatial.cKDTree(sources).query(X)
    keep = nearest == owner
    cube = (2 * r_max)**psi.dim
    volumes, errors = [], []
    for r in radii:
        hits = keep & (dist < r)
        p = np.bincount(owner[hits], minlength=len(sources)) / n_per_source
        volumes.append(cube * np.sum(p))
        errors.append(cube * math.sqrt(np.sum(p * (1 - p)) / n_per_source))
    if volumes[-1] == 0 or errors[-1] / volumes[-1] > MAX_VOLUME_ERROR:
        raise ValueError(f"Not enough samples ({samples}) to estimate volume"
                         f" of neighborhood of radius {radii[-1]}.")
    exponent = float(np.polyfit(np.log(radii), np.log(volumes), 1)[0])
    cv = max(v / r for r, v in zip(radii, volumes))
    return VolumeGrowth(radii, volumes, errors, exponent, cv, accuracy)


def zero_orders(psi, nodes=None):
    """
    Zero order fits at nodes (declared nodes if None).
    """
    if nodes is None:
        nodes = nodes_from_hint(psi)
    return [estimate_zero_order(psi, c.center) for c in nodes]


def operator_h6(psi, order, fits=None):
    """
    Integrability verdict for operator of ``order`` on the state: smallest
    integer zero order over nodes is used, inconclusive fits are floored.
    True for nodeless states.
    """
    if fits is None:
        fits = zero_orders(psi)
    if len(fits) == 0:
        return True
    orders = [fit.k if fit.k is not None else max(1, math.floor(fit.k_fit))
              for fit in fits]
    return h6_verdict(min(orders), order, psi.dim)


class NodalDiagnostics(object):
    """
    Nodal diagnostics of a state: located nodes, zero-order fits, volume
    growth and integrability verdicts per operator order.
    """
    def __init__(self, nodes, fits, volume, h6):
        self.nodes = nodes
        self.fits = fits
        self.volume = volume
        self.h6 = dict(h6)

    @property
    def k_fit(self):
        return [fit.k_fit for fit in self.fits]

    @property
    def cv(self):
        return self.volume.cv

    def to_dict(self):
        return {'nodes': [c.to_dict() for c in self.nodes],
                'k_fit': [fit.to_dict() for fit in self.fits],
                'cv': self.cv,
                'volume': self.volume.to_dict(),
                'h6': {str(m): v for m, v in self.h6.items()}}

    def __repr__(self):
        return f"NodalDiagnostics(nodes={len(self.nodes)}, "\
               f"k_fit={self.k_fit}, cv={self.cv}, h6={self.h6})"


def diagnose(psi, orders=(1, 2), resolution=None, radii=None,
             samples=200000, seed=0):
    """
    Runs node location, zero-order fits, volume growth and integrability
    verdicts for operator ``orders``. Spinors use their declared nodal hint.
    """
    if psi.components == 1:
        nodes = locate_nodes(psi, resolution)
    else:
        nodes = nodes_from_hint(psi)
    fits = zero_orders(psi, nodes)
    volume = volume_growth(psi, radii, nodes, samples, seed)
    h6 = {m: operator_h6(psi, m, fits) for m in orders}
    return NodalDiagnostics(nodes, fits, volume, h6)
