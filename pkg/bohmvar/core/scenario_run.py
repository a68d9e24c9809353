import itertools
import os
import sys
import warnings

import numpy as np

from ..decomposition import Decomposer, DecompositionReport,\
    quantum_potential_mean, check_qp_relation, uncertainty_check,\
    energy_q_term_polar
from ..fields import pointwise_identity
from ..cli.arg_parser import version
from ..nodal import diagnose
from ..operators import operator_for_state
from ..trajectories import TrajectoryEnsemble, integrate_trajectory,\
    propagate_ensemble, equivariance_stat, weak_value_series, write_paths
from ..utils import ensure_dir_existence, write_json, write_csv,\
    warning_format, bcolors, float_repr

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_IDENTITY_FAILED = 2
EXIT_DIVERGING = 3

# tolerance of pointwise identity relative to max(1, lhs)
TOL_POINTWISE = 1e-10


def _status_of(report):
    if report.diverging:
        return EXIT_DIVERGING
    if not report.identity_holds:
        return EXIT_IDENTITY_FAILED
    return EXIT_OK


def _combine(*statuses):
    """
    Exit status of several results: divergence takes precedence over
    identity failure.
    """
    statuses = set(statuses)
    for status in [EXIT_CONFIG_ERROR, EXIT_DIVERGING, EXIT_IDENTITY_FAILED]:
        if status in statuses:
            return status
    return EXIT_OK


class ScenarioRun(object):
    """
    Class of one scenario run. Has a :meth:`run` method that performs the
    task of settings and writes ``report.json``, ``manifest.json``, saved
    settings and task-specific CSV files into the output directory.

    :param settings: Settings of the run.
    :type settings: :class:`bohmvar.cli.settings_storage.SettingsStorage`
    """
    REPORT_FILENAME = 'report.json'
    MANIFEST_FILENAME = 'manifest.json'
    PARAMS_FILENAME = 'params_file'
    LOG_FILENAME = 'bohmvar.log'
    DECOMPOSITION_FILENAME = 'decomposition.csv'
    POINTWISE_FILENAME = 'pointwise.csv'
    NODES_FILENAME = 'nodes.csv'
    PATHS_FILENAME = 'paths.csv'
    EQUIVARIANCE_FILENAME = 'equivariance.csv'
    WEAK_VALUES_FILENAME = 'weak_values.csv'
    SWEEP_FILENAME = 'sweep.csv'

    def __init__(self, settings):
        self.settings = settings
        self.output_dir = ensure_dir_existence(settings.output_directory)
        self.files = []
        self.errors = []
        self.warnings = []

    def _filename(self, name):
        self.files.append(name)
        return os.path.join(self.output_dir, name)

    def _scheme(self, psi):
        return self.settings.get_scheme(psi)

    def _decomposer(self, psi, monte_carlo=False):
        sampler = self.settings.get_sampler() if monte_carlo else None
        return Decomposer(psi, self._scheme(psi), sampler,
                          tol_identity=self.settings.tol_identity,
                          mc_n=self.settings.mc_n,
                          workers=self.settings.workers)

    def _operators(self, psi):
        return [(desc, operator_for_state(desc, psi))
                for desc in self.settings.operators]

    def run_decompose(self):
        psi = self.settings.get_state()
        monte_carlo = self.settings.mc_enabled
        decomposer = self._decomposer(psi, monte_carlo)
        reports = {}
        rows = []
        statuses = []
        for desc, op in self._operators(psi):
            report = decomposer.decompose(op, monte_carlo=monte_carlo)
            print(f"{bcolors.OKBLUE}{desc} on {psi.descriptor}{bcolors.ENDC}")
            print(report)
            if report.spin_ledger is not None:
                print(f"Ledger as stated: {report.spin_ledger['as_stated']},"
                      " with deficit: "
                      f"{report.spin_ledger['deficit_corrected']}")
            print()
            reports[desc] = report.to_dict()
            rows.append([desc] + report.csv_row())
            statuses.append(_status_of(report))
        write_csv(self._filename(self.DECOMPOSITION_FILENAME),
                  ['operator'] + DecompositionReport.csv_header(), rows)
        return {'state': psi.descriptor, 'reports': reports},\
            _combine(*statuses)

    def _random_points(self, psi, n):
        """
        ``n`` uniform random points off nodes in the box of the state.
        """
        rng = np.random.default_rng(self.settings.seed)
        half_width = psi.center_offset + 3 * psi.length_scale
        points = np.empty((0, psi.dim))
        while len(points) < n:
            X = rng.uniform(-half_width, half_width, size=(n, psi.dim))
            points = np.concatenate([points, X[~psi.at_node(X)]])
        return points[:n]

    def run_pointwise_check(self):
        psi = self.settings.get_state()
        X = self._random_points(psi, self.settings.pointwise_n)
        header = ['operator'] + [f"x_{j + 1}" for j in range(psi.dim)] +\
            ['lhs', 'scalar_rhs', 'deficit']
        rows = []
        results = {}
        status = EXIT_OK
        for desc, op in self._operators(psi):
            lhs, scalar_rhs, deficit = pointwise_identity(op, psi, X)
            rows.extend([desc] + list(x) + [a, b, c]
                        for x, a, b, c in zip(X, lhs, scalar_rhs, deficit))
            relative = deficit / np.maximum(1.0, lhs)
            if psi.components == 1:
                holds = bool(np.max(np.abs(relative)) < TOL_POINTWISE)
            else:
                holds = bool(np.min(relative) > -TOL_POINTWISE)
            results[desc] = {'max_relative_deficit':
                             float(np.max(np.abs(relative))),
                             'min_deficit': float(np.min(deficit)),
                             'max_deficit': float(np.max(deficit)),
                             'holds': holds}
            print(f"{desc}: max relative deficit "
                  f"{float_repr(np.max(np.abs(relative)))}, "
                  f"{'holds' if holds else 'fails'}")
            if not holds:
                status = EXIT_IDENTITY_FAILED
        write_csv(self._filename(self.POINTWISE_FILENAME), header, rows)
        return {'state': psi.descriptor, 'n': len(X),
                'tol': TOL_POINTWISE, 'operators': results}, status

    def run_nodal(self):
        psi = self.settings.get_state()
        diagnostics = diagnose(psi, orders=self.settings.nodal_orders,
                               resolution=self.settings.nodal_resolution,
                               radii=self.settings.nodal_radii,
                               samples=self.settings.nodal_samples,
                               seed=self.settings.seed)
        print(diagnostics)
        header = ['node'] + [f"x_{j + 1}" for j in range(psi.dim)] +\
            ['extended', 'k_fit', 'fit_residual']
        rows = [[i] + list(node.center) + [node.extended, fit.k_fit,
                                           fit.residual]
                for i, (node, fit) in enumerate(zip(diagnostics.nodes,
                                                    diagnostics.fits))]
        write_csv(self._filename(self.NODES_FILENAME), header, rows)
        decomposer = self._decomposer(psi)
        convergence = {}
        status = EXIT_OK
        for desc, op in self._operators(psi):
            report = decomposer.q_term_report(op)
            convergence[desc] = report.to_dict()
            print(f"Exclusion sequence of q_term for {desc}: "
                  f"{report.status}")
            if report.diverging:
                status = EXIT_DIVERGING
        result = diagnostics.to_dict()
        result.update({'state': psi.descriptor, 'convergence': convergence})
        return result, status

    def run_trajectories(self):
        psi = self.settings.get_state()
        sampler = self.settings.get_sampler()
        if self.settings.traj_x0 is not None:
            T = self.settings.traj_horizon or psi.characteristic_time
            path = integrate_trajectory(psi, self.settings.traj_x0, T,
                                        self.settings.traj_dt)
            ensemble = TrajectoryEnsemble(path.times, path.positions[None],
                                          [path.halted], path.dt)
            header = ['t'] + [desc for desc in self.settings.operators]
            series = [weak_value_series(op, psi, path)
                      for _, op in self._operators(psi)]
            write_csv(self._filename(self.WEAK_VALUES_FILENAME), header,
                      [[t] + [s[i] for s in series]
                       for i, t in enumerate(path.times)])
            result = ensemble.to_dict()
            result['initial'] = 'fixed'
        else:
            ensemble = propagate_ensemble(psi, self.settings.traj_n, sampler,
                                          T=self.settings.traj_horizon,
                                          dt=self.settings.traj_dt,
                                          records=self.settings.traj_records,
                                          workers=self.settings.workers)
            scheme = self._scheme(psi)
            stats = [equivariance_stat(ensemble, psi, t, scheme=scheme)
                     for t in ensemble.times]
            write_csv(self._filename(self.EQUIVARIANCE_FILENAME),
                      ['t', 'tv'], list(zip(ensemble.times, stats)))
            result = ensemble.to_dict()
            result['equivariance'] = {'max_tv': max(stats),
                                      'tv': stats}
            print(f"Maximum total variation over recorded times: "
                  f"{float_repr(max(stats))}")
        write_paths(self._filename(self.PATHS_FILENAME), ensemble)
        result['state'] = psi.descriptor
        return result, EXIT_OK

    def run_uncertainty(self):
        psi = self.settings.get_state()
        checks = uncertainty_check(psi, self._scheme(psi))
        axes = []
        for axis, (dx2, dp2, q_p, product, holds) in enumerate(checks):
            axes.append({'axis': axis + 1, 'dx2': dx2, 'dp2': dp2,
                         'q_p': q_p, 'product': product, 'holds': holds})
            print(f"Axis {axis + 1}: Dx^2 (Dp_B^2 + Q_p) = "
                  f"{float_repr(product, 10)}, "
                  f"{'holds' if holds else 'fails'}")
        status = EXIT_OK if all(a['holds'] for a in axes) else\
            EXIT_IDENTITY_FAILED
        return {'state': psi.descriptor, 'bound': psi.hbar**2 / 4,
                'axes': axes}, status

    def run_qp_relation(self):
        psi = self.settings.get_state()
        scheme = self._scheme(psi)
        q_p, two_m_q, gap = check_qp_relation(psi, scheme)
        via_potential, via_gradient, report = quantum_potential_mean(psi,
                                                                     scheme)
        tol = self.settings.tol_identity
        result = {'state': psi.descriptor,
                  'q_p': q_p,
                  'two_m_q': two_m_q,
                  'gap': gap,
                  'mean_q': {'via_potential': via_potential,
                             'via_gradient': via_gradient,
                             'convergence': report.to_dict()},
                  'holds': bool(abs(gap) <= tol * max(1.0, abs(q_p)))}
        if psi.is_stationary:
            q_h, q_h_report = energy_q_term_polar(psi, scheme)
            result['q_h_polar'] = {'value': q_h,
                                   'convergence': q_h_report.to_dict()}
        print(f"Q_p = {float_repr(q_p, 10)}, 2m<Q> = "
              f"{float_repr(two_m_q, 10)}, gap = {float_repr(gap)}")
        if report.diverging:
            return result, EXIT_DIVERGING
        return result, EXIT_OK if result['holds'] else EXIT_IDENTITY_FAILED

    def run_sweep(self):
        params = [self.settings.sweep_param]
        grids = [self.settings.sweep_values]
        if self.settings.sweep_param2 is not None:
            params.append(self.settings.sweep_param2)
            grids.append(self.settings.sweep_values2)
        header = params + ['operator', 'status'] +\
            DecompositionReport.csv_header()
        rows = []
        statuses = []
        failed = 0
        for values in itertools.product(*grids):
            overrides = dict(zip(params, values))
            try:
                psi = self.settings.get_state(**overrides)
                decomposer = self._decomposer(psi)
                operators = self._operators(psi)
            except Exception as e:
                failed += 1
                rows.append(list(values) + ['', f"error: {e}"] +
                            [''] * len(DecompositionReport.csv_header()))
                continue
            for desc, op in operators:
                try:
                    report = decomposer.decompose(op)
                except Exception as e:
                    failed += 1
                    rows.append(list(values) + [desc, f"error: {e}"] +
                                [''] * len(DecompositionReport.csv_header()))
                    continue
                status = _status_of(report)
                statuses.append(status)
                label = {EXIT_OK: 'ok', EXIT_IDENTITY_FAILED: 'residual',
                         EXIT_DIVERGING: 'diverging'}[status]
                rows.append(list(values) + [desc, label] + report.csv_row())
            print(f"{overrides}: done")
        if failed:
            warnings.warn(f"{failed} rows of sweep failed, see status "
                          "column.")
        write_csv(self._filename(self.SWEEP_FILENAME), header, rows)
        return {'params': params, 'rows': len(rows), 'failed': failed},\
            _combine(*statuses)

    def _capture(self, caught):
        for w in caught:
            entry = {'category': w.category.__name__,
                     'message': str(w.message)}
            if entry not in self.warnings:
                self.warnings.append(entry)
            print(warning_format(w.message, w.category, w.filename,
                                 w.lineno), file=sys.stderr, end='')

    def run(self):
        """
        Runs the task and writes all output files.

        :returns: exit status.
        """
        task = self.settings.task
        self.settings.to_file(self._filename(self.PARAMS_FILENAME))
        result = None
        status = EXIT_CONFIG_ERROR
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter('always')
            try:
                method = getattr(self, 'run_' + task.replace('-', '_'))
                result, status = method()
            except Exception as e:
                self.errors.append({'type': type(e).__name__,
                                    'message': str(e)})
                status = EXIT_CONFIG_ERROR
                raise
            finally:
                self._capture(caught)
                self.write_report(result, status)
        return status

    def write_report(self, result, status):
        report = {'task': self.settings.task,
                  'status': status,
                  'result': result,
                  'errors': self.errors,
                  'warnings': self.warnings}
        write_json(self._filename(self.REPORT_FILENAME), report)
        self.files.append(self.MANIFEST_FILENAME)
        self.files.append(self.LOG_FILENAME)
        manifest = {'version': version().split()[-1],
                    'settings': self.settings.to_dict(),
                    'files': sorted(set(self.files))}
        write_json(os.path.join(self.output_dir, self.MANIFEST_FILENAME),
                   manifest)


def run_scenario(settings):
    """
    Runs scenario of ``settings`` and returns the exit status.
    """
    return ScenarioRun(settings).run()
