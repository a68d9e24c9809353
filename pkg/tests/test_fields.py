import unittest
import os
import math
import tempfile
import shutil

import numpy as np

from bohmvar import *
from bohmvar.fields import FieldSample, amplitude_gradient,\
    operator_products

SCALAR_PAIRS = [('ho1d:n=0', ['position', 'momentum', 'kinetic',
                              'hamiltonian']),
                ('ho1d:n=3', ['position', 'momentum', 'kinetic',
                              'hamiltonian']),
                ('ho2d_angular:l=1', ['position_2', 'momentum_1',
                                      'momentum_2', 'kinetic',
                                      'hamiltonian']),
                ('ho2d_angular:l=-1', ['momentum_1', 'kinetic']),
                ('hydrogen_1s', ['position_3', 'momentum_1', 'kinetic',
                                 'hamiltonian']),
                ('gaussian:x0=0.5,p0=1.5,sigma=0.8', ['momentum',
                                                      'kinetic'])]


class TestFields(unittest.TestCase):
    def test_weak_field(self):
        psi = make_state('ho1d:n=0')
        momentum = operator_for_state('momentum', psi)
        x = np.linspace(-2, 2, 9)
        np.testing.assert_allclose(weak_field(momentum, psi, x), 0.0,
                                   atol=1e-15)
        np.testing.assert_allclose(imag_density(momentum, psi, x),
                                   x * psi.density(x), atol=1e-15)
        position = operator_for_state('position', psi)
        np.testing.assert_allclose(weak_field(position, psi, x), x)
        np.testing.assert_allclose(imag_density(position, psi, x), 0.0)

        psi = make_state('ho2d_angular:l=1')
        X = np.array([[0.0, 1.0], [1.0, 0.0], [0.6, -0.8], [2.0, 1.0]])
        r2 = np.sum(X**2, axis=1)
        np.testing.assert_allclose(
            weak_field(operator_for_state('momentum_1', psi), psi, X),
            -X[:, 1] / r2, atol=1e-13)
        np.testing.assert_allclose(
            weak_field(operator_for_state('momentum_2', psi), psi, X),
            X[:, 0] / r2, atol=1e-13)
        self.assertAlmostEqual(
            weak_field(operator_for_state('momentum_1', psi), psi,
                       [0.0, 1.0]), -1.0)

        psi = make_state('gaussian:x0=0,p0=1.5,sigma=1')
        np.testing.assert_allclose(
            weak_field(operator_for_state('momentum', psi), psi, x), 1.5)

    def test_nodes(self):
        psi = make_state('ho1d:n=1')
        momentum = operator_for_state('momentum', psi)
        self.assertRaises(AtNodeError, weak_field, momentum, psi, 0.0)
        self.assertRaises(AtNodeError, weak_field, momentum, psi,
                          [0.5, 0.0])
        self.assertRaises(AtNodeError, quantum_potential, psi, 0.0)
        self.assertRaises(AtNodeError, guiding_velocity, psi, 0.0)
        self.assertRaises(AtNodeError, pointwise_identity, momentum, psi,
                          0.0)
        self.assertRaises(AtNodeError, amplitude_gradient, psi, 0.0)
        self.assertTrue(issubclass(AtNodeError, ValueError))
        self.assertEqual(imag_density(momentum, psi, 0.0), 0.0)
        self.assertEqual(continuity_divergence(psi, 0.0), 0.0)

        psi = make_state('spinor:theta=0.3')
        self.assertRaises(ValueError, quantum_potential, psi, 0.1)
        self.assertRaises(ValueError, guiding_velocity, psi, 0.1)
        self.assertRaises(ValueError, local_energy, psi, None, 0.1)
        self.assertRaises(ValueError, continuity_divergence, psi, 0.1)
        self.assertRaises(ValueError, spin_weak_field, make_state('ho1d'),
                          0.1)
        self.assertRaises(ValueError, local_energy,
                          make_state('gaussian:p0=1'), None, 0.1)

    def test_quantum_potential(self):
        psi = make_state('ho1d:n=0')
        x = np.linspace(-3, 3, 13)
        np.testing.assert_allclose(quantum_potential(psi, x),
                                   -0.5 * (x**2 - 1), atol=1e-12)
        self.assertAlmostEqual(quantum_potential(psi, 0.0), 0.5)

        psi = make_state('hydrogen_1s')
        X = np.array([[1.0, 0.0, 0.0], [0.3, -0.4, 1.2]])
        r = np.sqrt(np.sum(X**2, axis=1))
        np.testing.assert_allclose(quantum_potential(psi, X), -0.5 + 1 / r,
                                   rtol=1e-10)
        np.testing.assert_allclose(amplitude_gradient(psi, X[0]),
                                   [-math.sqrt(psi.density(X[0])), 0, 0],
                                   atol=1e-14)

        psi = make_state('ho2d_angular:l=1')
        X = np.array([[1.0, 0.0], [0.3, 0.4]])
        r2 = np.sum(X**2, axis=1)
        # R = r exp(-r^2 / 2) / sqrt(pi): Laplacian(R) / R = 1/r^2 - 4 + r^2
        np.testing.assert_allclose(quantum_potential(psi, X),
                                   -0.5 * (1 / r2 - 4 + r2), rtol=1e-10)

    def test_guiding_velocity(self):
        psi = make_state('ho2d_angular:l=1')
        np.testing.assert_allclose(guiding_velocity(psi, [1.0, 0.0]),
                                   [0.0, 1.0], atol=1e-14)
        X = np.array([[0.5, 0.5], [-2.0, 0.1]])
        r2 = np.sum(X**2, axis=1)
        expected = np.stack([-X[:, 1] / r2, X[:, 0] / r2], axis=1)
        np.testing.assert_allclose(guiding_velocity(psi, X), expected,
                                   atol=1e-13)
        psi = make_state('ho2d_angular:l=-1')
        np.testing.assert_allclose(guiding_velocity(psi, [1.0, 0.0]),
                                   [0.0, -1.0], atol=1e-14)
        psi = make_state('ho1d:n=2')
        np.testing.assert_allclose(guiding_velocity(psi, [0.1, 1.5]), 0.0)
        psi = make_state('gaussian:p0=2,sigma=1,mass=2')
        np.testing.assert_allclose(guiding_velocity(psi, [0.1, 1.5]), 1.0)

    def test_local_energy(self):
        for descriptor in ['ho1d:n=0', 'ho1d:n=3', 'ho2d_angular:l=1',
                           'hydrogen_1s', 'ho2d:nx=2,ny=1']:
            psi = make_state(descriptor)
            rng = np.random.default_rng(3)
            X = rng.uniform(-2, 2, size=(50, psi.dim))
            X = X[~psi.at_node(X)]
            hamiltonian = operator_for_state('hamiltonian', psi)
            np.testing.assert_allclose(local_energy(psi, None, X),
                                       psi.energy, rtol=1e-8, atol=1e-8)
            np.testing.assert_allclose(weak_field(hamiltonian, psi, X),
                                       psi.energy, rtol=1e-8, atol=1e-8)
            np.testing.assert_allclose(continuity_divergence(psi, X), 0.0,
                                       atol=1e-12)
        psi = make_state('gaussian:p0=1')
        self.assertNotEqual(continuity_divergence(psi, 0.5), 0.0)
        self.assertAlmostEqual(
            local_energy(psi, get_potential('free'), 0.0), 0.5 + 0.5)

    def test_pointwise_identity(self):
        rng = np.random.default_rng(5)
        for descriptor, operators in SCALAR_PAIRS:
            psi = make_state(descriptor)
            X = rng.uniform(-3, 3, size=(200, psi.dim))
            X = X[~psi.at_node(X)]
            for desc in operators:
                op = operator_for_state(desc, psi)
                lhs, scalar_rhs, deficit = pointwise_identity(op, psi, X)
                relative = np.abs(deficit) / np.maximum(1.0, lhs)
                self.assertLess(np.max(relative), 1e-10,
                                msg=f"{descriptor} {desc}")

        psi = make_state('spinor_uniform:theta=0.7853981633974483')
        op = operator_for_state('spin_z', psi)
        x = np.array([-0.5, 0.0, 1.2])
        lhs, scalar_rhs, deficit = pointwise_identity(op, psi, x)
        np.testing.assert_allclose(lhs, 0.25 * psi.density(x))
        np.testing.assert_allclose(scalar_rhs, 0.0, atol=1e-16)
        np.testing.assert_allclose(deficit, 0.25 * psi.density(x))
        self.assertTrue(np.all(deficit >= 0))

        psi = make_state('spinor:theta=0.3')
        rho, inner, abs2 = operator_products(op, psi, x)
        np.testing.assert_allclose(rho, psi.density(x))
        self.assertEqual(inner.shape, (3,))

    def test_spin_weak_field(self):
        psi = make_state('spinor:theta=0.3')
        np.testing.assert_allclose(spin_weak_field(psi, [0.0, 1.0]),
                                   0.5 * math.cos(0.6))
        np.testing.assert_allclose(
            weak_field(operator_for_state('spin_z', psi), psi, [0.0, 1.0]),
            0.5 * math.cos(0.6))
        np.testing.assert_allclose(
            imag_density(operator_for_state('spin_z', psi), psi, 0.4), 0.0)
        split = make_state('spinor_split:separation=20')
        self.assertAlmostEqual(spin_weak_field(split, 10.0), 0.5)
        self.assertAlmostEqual(spin_weak_field(split, -10.0), -0.5)

    def test_field_scan(self):
        psi = make_state('ho1d:n=1')
        samples = field_scan(quantum_potential, psi, [-1.0, 0.0, 1.0])
        self.assertEqual(len(samples), 3)
        self.assertTrue(samples[1].at_node)
        self.assertIsNone(samples[1].value)
        self.assertIsInstance(samples[0], FieldSample)
        # R = |x| exp(-x^2 / 2): Laplacian(R) / R = x^2 - 3 outside node
        self.assertAlmostEqual(samples[0].value, 1.0)
        momentum = operator_for_state('momentum', psi)
        samples = field_scan(pointwise_identity, psi, [-1.0, 0.0, 1.0],
                             op=momentum)
        self.assertEqual(len(samples[0].value), 3)
        samples_e = field_scan(local_energy, psi, [0.5])
        self.assertAlmostEqual(samples_e[0].value, 1.5)
        repr(samples_e[0])

        dirname = tempfile.mkdtemp()
        try:
            filename = os.path.join(dirname, "scan.csv")
            write_field_scan(filename, samples)
            with open(filename) as fl:
                lines = fl.read().splitlines()
            self.assertEqual(lines[0], "x1,value1,value2,value3,at_node")
            self.assertEqual(len(lines), 4)
            self.assertTrue(lines[2].endswith("None,None,None,True"))
        finally:
            shutil.rmtree(dirname)
