import unittest
import os
import math
import tempfile
import shutil

import numpy as np
from scipy import integrate as sp_integrate

from bohmvar import *
from bohmvar.trajectories import angular_momentum, write_paths, default_dt

SLOW_TESTS = "BOHMVAR_SLOW_TESTS" in os.environ


def _orbit_error(psi, dt):
    path = integrate_trajectory(psi, [1.0, 0.0], 2 * math.pi, dt=dt)
    return np.linalg.norm(path.positions[-1] - [1.0, 0.0])


class TestPath(unittest.TestCase):
    def test_circular_orbit(self):
        psi = make_state('ho2d_angular:l=1')
        path = integrate_trajectory(psi, [1.0, 0.0], 2 * math.pi)
        self.assertFalse(path.halted)
        self.assertAlmostEqual(path.times[-1], 2 * math.pi)
        np.testing.assert_allclose(np.linalg.norm(path.positions, axis=1),
                                   1.0, atol=1e-6)
        self.assertLess(np.linalg.norm(path.positions[-1] - [1.0, 0.0]),
                        1e-6)
        # quarter period
        quarter = np.argmin(np.abs(path.times - math.pi / 2))
        np.testing.assert_allclose(path.positions[quarter], [0.0, 1.0],
                                   atol=1e-2)

        psi = make_state('ho2d_angular:l=-1')
        path = integrate_trajectory(psi, [1.0, 0.0], math.pi / 2,
                                    dt=1e-3)
        np.testing.assert_allclose(path.positions[-1], [0.0, -1.0],
                                   atol=1e-9)

    def test_fourth_order(self):
        psi = make_state('ho2d_angular:l=1')
        coarse = _orbit_error(psi, 2 * math.pi / 100)
        fine = _orbit_error(psi, 2 * math.pi / 200)
        self.assertLess(coarse, 1e-5)
        self.assertGreater(coarse / fine, 12)
        self.assertLess(coarse / fine, 20)

    def test_real_state_at_rest(self):
        psi = make_state('ho1d:n=1')
        path = integrate_trajectory(psi, 0.7, 1.0, dt=0.1)
        self.assertEqual(len(path), 11)
        self.assertAlmostEqual(path.dt, 0.1)
        np.testing.assert_array_equal(path.positions, 0.7)

    def test_steps(self):
        psi = make_state('ho1d:n=0')
        path = integrate_trajectory(psi, 0.0, 1.0, dt=0.3)
        # ceil(1 / 0.3) steps hitting the horizon exactly
        self.assertEqual(len(path), 5)
        self.assertAlmostEqual(path.times[-1], 1.0)
        self.assertAlmostEqual(path.dt, 0.25)
        self.assertAlmostEqual(default_dt(psi), 1e-3 * 4 * math.pi)

    def test_errors(self):
        psi = make_state('ho2d_angular:l=1')
        self.assertRaises(AtNodeError, integrate_trajectory, psi,
                          [0.0, 0.0], 1.0)
        self.assertRaises(ValueError, integrate_trajectory, psi,
                          [[1.0, 0.0], [0.0, 1.0]], 1.0)
        self.assertRaises(ValueError, integrate_trajectory, psi, [1.0, 0.0],
                          0.0)
        self.assertRaises(ValueError, integrate_trajectory, psi, [1.0, 0.0],
                          1.0, dt=-0.1)
        self.assertRaises(ValueError, integrate_trajectory, psi, [1.0, 0.0],
                          1.0, dt=1e-13)
        self.assertRaises(ValueError, integrate_trajectory,
                          make_state('gaussian:p0=1'), 0.0, 1.0)
        self.assertRaises(ValueError, integrate_trajectory,
                          make_state('spinor'), 0.0, 1.0)


class TestAlongPath(unittest.TestCase):
    def test_angular_momentum(self):
        psi = make_state('ho2d_angular:l=1')
        path = integrate_trajectory(psi, [0.5, 1.0], math.pi, dt=0.01)
        np.testing.assert_allclose(angular_momentum(psi, path), 1.0)
        np.testing.assert_allclose(
            angular_momentum(psi, np.array([[2.0, 0.0], [0.0, -0.1]])), 1.0)
        self.assertRaises(AtNodeError, angular_momentum, psi, [0.0, 0.0])
        self.assertRaises(ValueError, angular_momentum,
                          make_state('ho1d:n=0'), [0.0])

    def test_weak_value_series(self):
        psi = make_state('ho2d_angular:l=1')
        path = integrate_trajectory(psi, [1.0, 0.0], math.pi, dt=0.01)
        energy = weak_value_series(operator_for_state('hamiltonian', psi),
                                   psi, path)
        np.testing.assert_allclose(energy, 2.0, rtol=1e-10)
        # p_x weak value -y / r^2 on the unit circle
        momentum = weak_value_series(operator_for_state('momentum_1', psi),
                                     psi, path)
        np.testing.assert_allclose(momentum, -path.positions[:, 1],
                                   atol=1e-6)
        self.assertRaises(AtNodeError, weak_value_series,
                          operator_for_state('momentum_1', psi), psi,
                          np.array([[0.0, 0.0]]))

    def test_weak_momentum_time_average(self):
        psi = make_state('ho2d_angular:l=1')
        period = 2 * math.pi
        path = integrate_trajectory(psi, [1.0, 0.0], period, dt=0.01)
        for kind in ['momentum_1', 'momentum_2']:
            series = weak_value_series(operator_for_state(kind, psi), psi,
                                       path)
            # nonzero along the orbit, zero on average over a period
            self.assertGreater(np.max(np.abs(series)), 0.9)
            average = sp_integrate.trapezoid(series, path.times) / period
            self.assertLess(abs(average), 1e-6, msg=kind)


class TestEnsemble(unittest.TestCase):
    def setUp(self):
        self.psi = make_state('ho2d_angular:l=1')
        self.sampler = EquilibriumSampler(seed=2, burn_in=500, chains=4,
                                          tuning_rounds=5)

    def test_equivariance(self):
        ensemble = propagate_ensemble(self.psi, 4000, self.sampler,
                                      dt=0.05, records=5)
        self.assertEqual(ensemble.positions.shape, (4000, 5, 2))
        self.assertAlmostEqual(ensemble.times[-1], math.pi)
        # radius is conserved on paths with resolved angular velocity
        radii = np.linalg.norm(ensemble.positions, axis=2)
        outer = radii[:, 0] > 0.5
        np.testing.assert_allclose(radii[outer], radii[outer, :1],
                                   rtol=1e-4)
        for t in ensemble.times:
            self.assertLess(equivariance_stat(ensemble, self.psi, t), 0.12)

        shifted = TrajectoryEnsemble(ensemble.times,
                                     ensemble.positions + 2.0,
                                     ensemble.halted, ensemble.dt)
        self.assertGreater(equivariance_stat(shifted, self.psi, 0.0), 0.5)

    def test_equivariance_every_axis(self):
        psi = make_state('ho2d')
        samples = self.sampler.sample(psi, 4000)
        moved = samples.copy()
        moved[:, 1] = 5.0
        ensemble = TrajectoryEnsemble([0.0, 1.0],
                                      np.stack([samples, moved], axis=1),
                                      np.zeros(4000, dtype=bool), 1.0)
        self.assertLess(equivariance_stat(ensemble, psi, 0.0), 0.12)
        self.assertGreater(equivariance_stat(ensemble, psi, 1.0), 0.5)

    def test_static_paths(self):
        psi = make_state('ho1d:n=0')
        ensemble = propagate_ensemble(psi, 2000, self.sampler, T=5.0,
                                      dt=0.1, records=3)
        np.testing.assert_array_equal(ensemble.positions[:, -1],
                                      ensemble.positions[:, 0])
        self.assertEqual(equivariance_stat(ensemble, psi, 5.0),
                         equivariance_stat(ensemble, psi, 0.0))

    @unittest.skipIf(not SLOW_TESTS, "Slow tests are disabled")
    def test_equivariance_long_horizon(self):
        ensemble = propagate_ensemble(self.psi, 10000, self.sampler,
                                      T=10.0, records=10)
        self.assertEqual(len(ensemble.times), 10)
        self.assertAlmostEqual(ensemble.times[-1], 10.0)
        for t in ensemble.times:
            self.assertLessEqual(equivariance_stat(ensemble, self.psi, t),
                                 0.13)

    def test_workers(self):
        kwargs = {'T': 0.5, 'dt': 0.05, 'records': 3}
        single = propagate_ensemble(self.psi, 1500, self.sampler, **kwargs)
        parallel = propagate_ensemble(self.psi, 1500, self.sampler,
                                      workers=2, **kwargs)
        np.testing.assert_array_equal(single.positions, parallel.positions)

    def test_access(self):
        ensemble = propagate_ensemble(self.psi, 100, self.sampler, T=1.0,
                                      dt=0.1, records=3)
        self.assertEqual(ensemble.n, 100)
        self.assertEqual(ensemble.index_of(0.49), 1)
        self.assertEqual(ensemble.at_time(1.0).shape, (100, 2))
        self.assertRaises(ValueError, ensemble.index_of, 1.5)
        path = ensemble.path(3)
        self.assertIsInstance(path, Path)
        np.testing.assert_array_equal(path.positions,
                                      ensemble.positions[3])
        info = ensemble.to_dict()
        self.assertEqual(info['records'], 3)
        self.assertEqual(info['seed'], 2)
        self.assertEqual(info['order'], 4)
        self.assertEqual(info['initial'], 'equilibrium')

    def test_errors(self):
        self.assertRaises(ValueError, propagate_ensemble, self.psi, 10,
                          self.sampler, records=1)
        self.assertRaises(ValueError, propagate_ensemble,
                          make_state('gaussian'), 10)


class TestWritePaths(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.directory)

    def test_write_paths(self):
        psi = make_state('ho2d_angular:l=1')
        sampler = EquilibriumSampler(seed=1, burn_in=100, chains=2,
                                     tuning_rounds=5)
        ensemble = propagate_ensemble(psi, 4, sampler, T=0.2, dt=0.1,
                                      records=3)
        filename = write_paths(os.path.join(self.directory, 'paths.csv'),
                               ensemble)
        with open(filename) as fl:
            lines = fl.read().splitlines()
        self.assertEqual(lines[0], 't,x_1,x_2,trajectory')
        self.assertEqual(len(lines), 1 + 4 * 3)
        self.assertTrue(lines[1].startswith('0,'))
        self.assertTrue(lines[-1].endswith(',3'))


if __name__ == "__main__":
    unittest.main()
