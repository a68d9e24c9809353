import math
import warnings
from multiprocessing import Pool

import numpy as np

from ..fields import phase_gradient, weak_field
from ..quadrature import sample_equilibrium, marginal_edges
from ..states import AtNodeError
from ..utils import as_points, write_csv

DT_FRACTION = 1e-3
MIN_DT_FRACTION = 1e-12
RECORDS = 21
ENSEMBLE_CHUNK = 1000


def _check_stationary(psi):
    if psi.components != 1:
        raise ValueError("Trajectories are defined for scalar states only.")
    if not psi.is_stationary:
        raise ValueError(f"State {psi.descriptor} is not stationary, its "
                         "velocity field is not frozen.")


def default_dt(psi):
    return DT_FRACTION * psi.characteristic_time


def _steps(T, dt, multiple=1):
    """
    Number of RK4 steps (a multiple of ``multiple``) and effective step.
    """
    if T <= 0:
        raise ValueError(f"Horizon ({T}) must be positive.")
    if dt <= 0 or dt < MIN_DT_FRACTION * T:
        raise ValueError(f"Step ({dt}) underflows horizon {T}.")
    n_steps = int(math.ceil(T / dt))
    n_steps = multiple * int(math.ceil(n_steps / multiple))
    return n_steps, T / n_steps


def _velocity(psi, X, active):
    """
    Guiding velocity at active points, trajectories reaching a node become
    inactive.
    """
    at_node = np.zeros(len(X), dtype=bool)
    at_node[active] = psi.at_node(X[active])
    active = active & ~at_node
    V = np.zeros_like(X)
    if np.any(active):
        V[active] = phase_gradient(psi, X[active]) / psi.mass
    return V, active


def _rk4(psi, X, dt, n_steps, record_every):
    """
    Classic 4th-order Runge-Kutta for several trajectories at once. Halted
    trajectories stay at their last position.

    :returns: records (n_records, N, d) and halting step of every
              trajectory (-1 if not halted).
    """
    X = np.array(X, dtype=float)
    halted_at = np.full(len(X), -1)
    active = np.ones(len(X), dtype=bool)
    records = [X.copy()]
    for step in range(n_steps):
        k1, ok = _velocity(psi, X, active)
        k2, ok = _velocity(psi, X + dt / 2 * k1, ok)
        k3, ok = _velocity(psi, X + dt / 2 * k2, ok)
        k4, ok = _velocity(psi, X + dt * k3, ok)
        X[ok] += dt / 6 * (k1[ok] + 2 * k2[ok] + 2 * k3[ok] + k4[ok])
        halted_at[active & ~ok] = step
        active = ok
        if (step + 1) % record_every == 0:
            records.append(X.copy())
    return np.array(records), halted_at


class Path(object):
    """
    Trajectory Q(t_j) on a uniform time grid.

    :param times: Times of records.
    :param positions: Positions of shape (n_records, d).
    :param halted: Whether integration halted near a node.
    :param halt_time: Time of halting or None.
    """
    def __init__(self, times, positions, halted=False, halt_time=None):
        self.times = np.asarray(times, dtype=float)
        self.positions = np.asarray(positions, dtype=float)
        self.halted = bool(halted)
        self.halt_time = halt_time

    @property
    def dt(self):
        return float(self.times[1] - self.times[0])

    def __len__(self):
        return len(self.times)

    def __repr__(self):
        return f"Path(records={len(self)}, halted={self.halted})"


def integrate_trajectory(psi, x0, T, dt=None):
    """
    Integrates the guiding equation dQ/dt = (hbar / m) Im[grad psi / psi]
    from ``x0`` over horizon ``T`` with RK4. The number of steps is
    ceil(T / dt) and the step is adjusted to hit ``T`` exactly.

    :raises AtNodeError: if ``x0`` is at node.
    """
    _check_stationary(psi)
    X0, _ = as_points(x0, psi.dim)
    if X0.shape[0] != 1:
        raise ValueError("Single starting position is expected.")
    if psi.at_node(X0)[0]:
        raise AtNodeError(f"Starting position {X0[0].tolist()} is at node.")
    n_steps, dt = _steps(T, dt if dt is not None else default_dt(psi))
    records, halted_at = _rk4(psi, X0, dt, n_steps, 1)
    times = dt * np.arange(n_steps + 1)
    halt_time = None
    if halted_at[0] >= 0:
        halt_time = float(times[halted_at[0]])
        warnings.warn(f"Trajectory from {X0[0].tolist()} halted near node "
                      f"at t = {halt_time}.")
    return Path(times, records[:, 0, :], halt_time is not None, halt_time)


def _propagate_chunk(args):
    psi, X, dt, n_steps, record_every = args
    return _rk4(psi, X, dt, n_steps, record_every)


class TrajectoryEnsemble(object):
    """
    Ensemble of trajectories started from equilibrium samples.

    :param times: Recorded times (uniform).
    :param positions: Positions of shape (n, n_records, d).
    :param halted: Halting flags of trajectories.
    :param dt: Integration step.
    :param seed: Seed of initial sampling.
    """
    def __init__(self, times, positions, halted, dt, seed=None):
        self.times = np.asarray(times, dtype=float)
        self.positions = np.asarray(positions, dtype=float)
        self.halted = np.asarray(halted, dtype=bool)
        self.dt = float(dt)
        self.seed = seed
        self.order = 4

    @property
    def n(self):
        return self.positions.shape[0]

    def index_of(self, t):
        """
        Index of the recorded time closest to ``t``.
        """
        if not self.times[0] - 1e-12 <= t <= self.times[-1] + 1e-12:
            raise ValueError(f"Time {t} is outside of recorded range "
                             f"[{self.times[0]}, {self.times[-1]}].")
        return int(np.argmin(np.abs(self.times - t)))

    def at_time(self, t):
        return self.positions[:, self.index_of(t), :]

    def path(self, i):
        return Path(self.times, self.positions[i], self.halted[i])

    def to_dict(self):
        return {'n': self.n,
                'records': len(self.times),
                'horizon': float(self.times[-1]),
                'dt': self.dt,
                'order': self.order,
                'seed': self.seed,
                'initial': 'equilibrium',
                'halted': int(np.sum(self.halted))}

    def __repr__(self):
        return f"TrajectoryEnsemble(n={self.n}, records={len(self.times)})"


def propagate_ensemble(psi, n, sampler=None, T=None, dt=None,
                       records=RECORDS, workers=1):
    """
    Propagates ``n`` trajectories started from equilibrium samples. Paths
    are recorded at ``records`` equally spaced times.

    :param T: Horizon, characteristic time of the state if None.
    """
    _check_stationary(psi)
    if records < 2:
        raise ValueError(f"Number of records ({records}) must be at least "
                         "2.")
    T = psi.characteristic_time if T is None else T
    n_steps, dt = _steps(T, dt if dt is not None else default_dt(psi),
                         records - 1)
    record_every = n_steps // (records - 1)
    X0 = sample_equilibrium(psi, n, sampler, workers)
    tasks = [(psi, X0[start:start + ENSEMBLE_CHUNK], dt, n_steps,
              record_every) for start in range(0, n, ENSEMBLE_CHUNK)]
    if workers > 1:
        with Pool(processes=workers) as pool:
            results = pool.map(_propagate_chunk, tasks)
    else:
        results = [_propagate_chunk(task) for task in tasks]
    positions = np.concatenate([r[0] for r in results], axis=1)
    halted = np.concatenate([r[1] for r in results]) >= 0
    if np.any(halted):
        warnings.warn(f"{np.sum(halted)} of {n} trajectories halted near "
                      "nodes.")
    times = dt * record_every * np.arange(records)
    seed = None if sampler is None else sampler.seed
    return TrajectoryEnsemble(times, np.transpose(positions, (1, 0, 2)),
                              halted, dt, seed)


def equivariance_stat(ensemble, psi, t, bins=20, scheme=None):
    """
    Total variation distance between the histogram of positions at time
    ``t`` over ``bins`` equal-probability bins of the marginal of |psi|^2
    and the uniform law over bins. Computed for every axis, the largest
    distance is returned.
    """
    positions = ensemble.at_time(t)
    distance = 0.0
    for axis in range(psi.dim):
        edges = marginal_edges(psi, bins, axis, scheme)
        values = positions[:, axis]
        counts = np.bincount(np.searchsorted(edges[1:-1], values,
                                             side='right'),
                             minlength=bins)
        distance = max(distance, float(
            0.5 * np.sum(np.abs(counts / len(values) - 1 / bins))))
    return distance


def weak_value_series(op, psi, path):
    """
    Weak actual value a_w(Q(t)) along the path.

    :param path: :class:`Path` or array of positions.
    :raises AtNodeError: if some path point is at node.
    """
    positions = path.positions if isinstance(path, Path) else path
    X, _ = as_points(positions, psi.dim)
    return weak_field(op, psi, X)


def angular_momentum(psi, positions):
    """
    m (x v_y - y v_x) at positions of a two-dimensional path.
    """
    if psi.dim != 2:
        raise ValueError("Angular momentum is computed for two-dimensional "
                         "states.")
    positions = positions.positions if isinstance(positions, Path) else \
        positions
    X, _ = as_points(positions, 2)
    V, active = _velocity(psi, X, np.ones(len(X), dtype=bool))
    if not np.all(active):
        raise AtNodeError("Angular momentum is undefined at node.")
    return psi.mass * (X[:, 0] * V[:, 1] - X[:, 1] * V[:, 0])


def write_paths(filename, ensemble):
    """
    Writes paths as CSV rows (t, x_1..x_d, trajectory id).
    """
    dim = ensemble.positions.shape[2]
    header = ['t'] + [f"x_{j + 1}" for j in range(dim)] + ['trajectory']
    rows = []
    for i in range(ensemble.n):
        for j, t in enumerate(ensemble.times):
            rows.append([t] + list(ensemble.positions[i, j]) + [i])
    return write_csv(filename, header, rows)
