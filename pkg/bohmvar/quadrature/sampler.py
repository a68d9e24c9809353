import math
import numbers
from multiprocessing import Pool

import numpy as np
from scipy import stats

from ..utils import seed_streams
from .engine import engine_for

MIN_ACCEPTANCE = 0.2
MAX_ACCEPTANCE = 0.8


def _log_density(psi, X):
    with np.errstate(divide='ignore'):
        return np.log(psi.density(X))


def _walk(psi, positions, logp, steps, n_steps, rngs, thin=0):
    """
    Random-walk Metropolis steps of several chains at once. Every chain
    draws its proposals from its own generator.

    :returns: positions, log-densities, acceptance rates and recorded
              positions (every ``thin`` step) of shape (n_rec, chains, d).
    """
    n_chains, dim = positions.shape
    noise = np.stack([rng.standard_normal((n_steps, dim)) for rng in rngs],
                     axis=1)
    log_u = np.log(np.stack([rng.random(n_steps) for rng in rngs], axis=1))
    accepted = np.zeros(n_chains)
    records = []
    for t in range(n_steps):
        proposal = positions + steps[:, None] * noise[t]
        logp_new = _log_density(psi, proposal)
        with np.errstate(invalid='ignore'):
            accept = log_u[t] < logp_new - logp
        positions = np.where(accept[:, None], proposal, positions)
        logp = np.where(accept, logp_new, logp)
        accepted += accept
        if thin and (t + 1) % thin == 0:
            records.append(positions.copy())
    records = np.array(records).reshape(-1, n_chains, dim)
    return positions, logp, accepted / n_steps, records


def _run_chains(args):
    """
    Runs group of chains: start near the peak, tuning, burn-in and
    sampling.
    """
    psi, rngs, n_per_chain, options = args
    n_chains = len(rngs)
    peak = np.asarray(psi.peak, dtype=float)
    positions = np.array([peak + 0.5 * psi.length_scale *
                          rng.standard_normal(psi.dim) for rng in rngs])
    logp = _log_density(psi, positions)
    bad = ~np.isfinite(logp)
    if np.any(bad):
        positions[bad] = peak
        logp[bad] = _log_density(psi, positions[bad])
    steps = np.full(n_chains, options['step'])
    for _ in range(options['tuning_rounds']):
        positions, logp, acceptance, _ = _walk(
            psi, positions, logp, steps, options['tuning_steps'], rngs)
        steps = steps * np.exp(2 * (acceptance - options['target']))
    positions, logp, _, _ = _walk(psi, positions, logp, steps,
                                  options['burn_in'], rngs)
    _, _, acceptance, records = _walk(
        psi, positions, logp, steps, n_per_chain * options['thin'], rngs,
        thin=options['thin'])
    # (chains, n_per_chain, d)
    return np.transpose(records, (1, 0, 2)), acceptance, steps


class EquilibriumSampler(object):
    """
    Random-walk Metropolis sampler of quantum equilibrium density |psi|^2.

    Each chain has its own random stream spawned from ``seed`` by the chain
    index, so results do not depend on the number of workers. Proposal step
    of every chain is tuned towards ``target_acceptance`` during a fixed
    number of tuning rounds before burn-in.

    :param seed: Master seed.
    :param step: Initial proposal step (length scale of the state if None).
    :param burn_in: Number of burn-in steps of every chain.
    :param thin: Thinning stride.
    :param chains: Number of chains.
    """
    def __init__(self, seed=0, step=None, burn_in=10000, thin=5, chains=16,
                 target_acceptance=0.5, tuning_rounds=20, tuning_steps=200):
        for name, value in [('burn-in', burn_in), ('thinning', thin),
                            ('number of chains', chains),
                            ('number of tuning rounds', tuning_rounds),
                            ('number of tuning steps', tuning_steps)]:
            if (not isinstance(value, numbers.Integral) or
                    isinstance(value, bool) or value < 0):
                raise ValueError(f"Sampler {name} ({value}) must be "
                                 "non-negative integer.")
        if thin < 1 or chains < 1:
            raise ValueError("Sampler thinning and number of chains must be "
                             "positive.")
        if step is not None and step <= 0:
            raise ValueError(f"Proposal step ({step}) must be positive.")
        if not MIN_ACCEPTANCE <= target_acceptance <= MAX_ACCEPTANCE:
            raise ValueError(f"Target acceptance ({target_acceptance}) must "
                             f"be in [{MIN_ACCEPTANCE}, {MAX_ACCEPTANCE}].")
        self.seed = seed
        self.step = step
        self.burn_in = burn_in
        self.thin = thin
        self.chains = chains
        self.target_acceptance = target_acceptance
        self.tuning_rounds = tuning_rounds
        self.tuning_steps = tuning_steps
        self.acceptance = None
        self.steps = None
        self.chain_index = None

    def sample(self, psi, n, workers=1):
        """
        Draws ``n`` positions from |psi|^2.

        :returns: array of shape (n, d), chain-major order.
        :raises RuntimeError: if acceptance of some chain is outside
                              [0.2, 0.8] after tuning.
        """
        if not isinstance(n, numbers.Integral) or n < 1:
            raise ValueError(f"Number of samples ({n}) must be positive "
                             "integer.")
        n_per_chain = int(math.ceil(n / self.chains))
        options = {'step': self.step or psi.length_scale,
                   'target': self.target_acceptance,
                   'tuning_rounds': self.tuning_rounds,
                   'tuning_steps': self.tuning_steps,
                   'burn_in': self.burn_in,
                   'thin': self.thin}
        rngs = seed_streams(self.seed, self.chains)
        groups = [list(g) for g in
                  np.array_split(np.arange(self.chains),
                                 min(max(1, workers), self.chains))]
        tasks = [(psi, [rngs[i] for i in group], n_per_chain, options)
                 for group in groups]
        if workers > 1:
            with Pool(processes=workers) as pool:
                results = pool.map(_run_chains, tasks)
        else:
            results = [_run_chains(task) for task in tasks]
        samples = np.concatenate([r[0] for r in results], axis=0)
        self.acceptance = np.concatenate([r[1] for r in results])
        self.steps = np.concatenate([r[2] for r in results])
        bad = ((self.acceptance < MIN_ACCEPTANCE) |
               (self.acceptance > MAX_ACCEPTANCE))
        if np.any(bad):
            raise RuntimeError(f"Sampler tuning failed: acceptance rates "
                               f"{self.acceptance[bad]} are outside "
                               f"[{MIN_ACCEPTANCE}, {MAX_ACCEPTANCE}].")
        self.chain_index = np.repeat(np.arange(self.chains),
                                     n_per_chain)[:n]
        return samples.reshape(-1, psi.dim)[:n]

    def standard_error(self, values, chain_index=None):
        """
        Standard error of the mean of ``values`` from the means of chains
        (batch means). Values correspond to the last samples unless
        ``chain_index`` of every value is given.
        """
        values = np.asarray(values, dtype=float)
        if chain_index is None:
            chain_index = self.chain_index
        if chain_index is None or len(values) != len(chain_index):
            raise ValueError("Values should correspond to the last samples.")
        means = np.array([np.mean(values[chain_index == c])
                          for c in np.unique(chain_index)])
        if len(means) < 2:
            return float(np.std(values) / math.sqrt(len(values)))
        return float(np.std(means, ddof=1) / math.sqrt(len(means)))

    def to_dict(self):
        return {'seed': self.seed,
                'step': self.step,
                'burn_in': self.burn_in,
                'thin': self.thin,
                'chains': self.chains,
                'target_acceptance': self.target_acceptance}

    def __repr__(self):
        return f"EquilibriumSampler(seed={self.seed}, chains={self.chains})"


def sample_equilibrium(psi, n, sampler=None, workers=1):
    """
    Draws ``n`` positions distributed as |psi|^2.

    :param sampler: :class:`EquilibriumSampler`, default one if None.
    """
    if sampler is None:
        sampler = EquilibriumSampler()
    return sampler.sample(psi, n, workers=workers)


def marginal_edges(psi, bins=20, axis=0, scheme=None):
    """
    Edges of ``bins`` equal-probability bins of the marginal of |psi|^2
    along ``axis`` computed on the quadrature grid. Outer edges are
    infinite.
    """
    engine = engine_for(psi, scheme)
    X, W = engine.grid(1)
    mass = W * engine.abs_values(1)**2
    coords, inverse = np.unique(X[:, axis], return_inverse=True)
    mass = np.bincount(inverse, weights=mass)
    # mass of every node is centered at the node
    cdf = np.cumsum(mass) - mass / 2
    cdf /= np.sum(mass)
    levels = np.arange(1, bins) / bins
    inner = np.interp(levels, cdf, coords)
    return np.concatenate([[-np.inf], inner, [np.inf]])


def chi_square(samples, psi, bins=20, axis=0, scheme=None):
    """
    Chi-square statistic of axis marginal of ``samples`` against
    equal-probability bins of |psi|^2 and its p-value.
    """
    edges = marginal_edges(psi, bins, axis, scheme)
    values = np.asarray(samples).reshape(len(samples), -1)[:, axis]
    counts = np.bincount(np.searchsorted(edges[1:-1], values, side='right'),
                         minlength=bins)
    result = stats.chisquare(counts)
    return float(result.statistic), float(result.pvalue)
