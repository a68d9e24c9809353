import unittest
import math

import numpy as np

from bohmvar import *
from bohmvar.states import HarmonicOscillator1D, HarmonicOscillator2D,\
    AngularHarmonicOscillator2D, Hydrogen1s, GaussianPacket, Spinor,\
    SpinorSplit, Superposition, register_state, hermite_roots,\
    hermite_functions, TAU_NODE


def finite_difference(psi, x, alpha, axis, h=1e-3):
    """
    Fourth-order central difference of the partial ``alpha`` along ``axis``.
    """
    def shifted(t):
        point = np.array(x, dtype=float)
        point[axis] += t * h
        return psi.partial(point, alpha)
    return (-shifted(2) + 8 * shifted(1) - 8 * shifted(-1) +
            shifted(-2)) / (12 * h)


def raised(alpha, axis):
    alpha = list(alpha)
    alpha[axis] += 1
    return tuple(alpha)


class TestStates(unittest.TestCase):
    def test_registry(self):
        ids = list(all_states())
        for id in ['ho1d', 'ho2d', 'ho2d_angular', 'hydrogen_1s',
                   'gaussian', 'spinor', 'spinor_uniform', 'spinor_split']:
            self.assertIn(id, ids)
        self.assertIs(get_state('spinor_uniform'), Spinor)
        self.assertRaises(ValueError, get_state, 'ho4d')
        self.assertRaises(ValueError, register_state, HarmonicOscillator1D)
        self.assertRaises(ValueError, make_state, 'unknown:n=1')
        self.assertRaises(ValueError, make_state, 'ho1d:k=1')
        self.assertRaises(ValueError, make_state, 'ho1d:n=-1')
        self.assertRaises(ValueError, make_state, 'ho1d:n=1.5')
        self.assertRaises(ValueError, make_state, 'gaussian:sigma=0')
        self.assertRaises(ValueError, make_state, 'ho2d_angular:l=2')
        self.assertRaises(ValueError, make_state, 'hydrogen_1s:charge=-1')

    def test_make_state(self):
        psi = make_state('ho1d:n=2')
        self.assertIsInstance(psi, HarmonicOscillator1D)
        self.assertEqual(psi.n, 2)
        self.assertEqual(psi.dim, 1)
        self.assertEqual(psi.components, 1)
        self.assertEqual(psi.units, (1.0, 1.0))
        self.assertAlmostEqual(psi.energy, 2.5)
        self.assertEqual(psi.descriptor, 'ho1d:n=2')
        self.assertEqual(make_state(psi.descriptor).n, 2)
        self.assertIs(make_state(psi), psi)
        self.assertEqual(make_state('ho1d:n=0', n=3).n, 3)
        self.assertAlmostEqual(psi.characteristic_time, 2 * math.pi / 2.5)
        self.assertTrue(psi.is_stationary)
        self.assertFalse(make_state('gaussian:p0=1').is_stationary)

    def test_ho1d(self):
        psi = make_state('ho1d:n=0')
        self.assertAlmostEqual(psi.value(0.0)[0].real, math.pi**(-0.25))
        x = np.linspace(-3, 3, 7)
        expected = math.pi**(-0.25) * np.exp(-x**2 / 2)
        np.testing.assert_allclose(psi.value(x)[:, 0].real, expected,
                                   rtol=1e-12)
        psi = make_state('ho1d:n=2')
        hint = psi.nodal_hint
        self.assertEqual(hint.kind, 'points')
        np.testing.assert_allclose(sorted(p[0] for p in hint.points),
                                   [-1 / math.sqrt(2), 1 / math.sqrt(2)],
                                   rtol=1e-12)
        np.testing.assert_allclose(hermite_roots(2),
                                   [-1 / math.sqrt(2), 1 / math.sqrt(2)])
        self.assertTrue(make_state('ho1d:n=0').nodal_hint.is_empty)
        values = hermite_functions(3, np.array([0.0]))
        self.assertEqual(values.shape[0], 4)

    def test_ho2d_angular(self):
        psi = make_state('ho2d_angular:l=1')
        self.assertEqual(psi.dim, 2)
        self.assertAlmostEqual(psi.energy, 2.0)
        value = psi.value([1.0, 0.0])[0]
        self.assertAlmostEqual(value.real, math.exp(-0.5) / math.sqrt(math.pi))
        self.assertAlmostEqual(value.imag, 0.0)
        value = psi.value([0.0, 1.0])[0]
        self.assertAlmostEqual(value.imag, math.exp(-0.5) / math.sqrt(math.pi))
        self.assertTrue(psi.at_node([0.0, 0.0]))
        self.assertFalse(psi.at_node([1.0, 0.0]))
        # far-field underflow is not a node
        self.assertFalse(psi.at_node([3.0, 3.0]))
        self.assertAlmostEqual(psi.max_abs,
                               math.exp(-0.5) / math.sqrt(math.pi), places=8)
        self.assertAlmostEqual(np.linalg.norm(psi.peak), 1.0, places=4)
        self.assertAlmostEqual(psi.node_threshold, TAU_NODE * psi.max_abs)

        form = polar(psi, [1.0, 0.0])
        self.assertAlmostEqual(form.amplitude,
                               math.exp(-0.5) / math.sqrt(math.pi))
        np.testing.assert_allclose(form.phase_gradient, [0.0, 1.0],
                                   atol=1e-12)
        self.assertRaises(AtNodeError, polar, psi, [0.0, 0.0])
        self.assertRaises(ValueError, polar, make_state('spinor'), 0.1)

    def test_ho2d(self):
        psi = make_state('ho2d:nx=1,ny=2')
        self.assertAlmostEqual(psi.energy, 4.0)
        hint = psi.nodal_hint
        self.assertEqual(hint.kind, 'hyperplanes')
        self.assertEqual(len(hint.hyperplanes), 3)
        self.assertEqual(hint.coordinates(0), [0.0])
        self.assertEqual(len(hint.coordinates(1)), 2)
        self.assertTrue(psi.at_node([0.0, 0.3]))
        self.assertAlmostEqual(hint.distance(np.array([[0.2, 0.0]]))[0],
                               0.2)

    def test_gaussian(self):
        packet = make_state('gaussian:x0=0,p0=0,sigma=1')
        ground = make_state('ho1d:n=0')
        x = np.linspace(-4, 4, 17)
        for alpha in range(5):
            np.testing.assert_allclose(packet.partial(x, alpha),
                                       ground.partial(x, alpha),
                                       rtol=1e-10, atol=1e-14)
        moving = make_state('gaussian:x0=1.5,p0=2,sigma=0.5')
        self.assertAlmostEqual(moving.center_offset, 1.5)
        self.assertAlmostEqual(moving.density(1.5),
                               1 / math.sqrt(math.pi * 0.25))

    def test_spinors(self):
        psi = make_state('spinor:theta=0.5')
        self.assertEqual(psi.components, 2)
        np.testing.assert_allclose(psi.chi, [math.cos(0.5), math.sin(0.5)])
        self.assertAlmostEqual(psi.density(0.0), math.pi**(-0.5))
        psi = make_state('spinor_uniform:a=1,b=1')
        np.testing.assert_allclose(np.abs(psi.chi)**2, [0.5, 0.5])
        psi = make_state('spinor:a=1,b=0,spatial=ho1d,n=1')
        self.assertEqual(psi.spatial.n, 1)
        self.assertFalse(psi.nodal_hint.is_empty)
        self.assertRaises(ValueError, make_state, 'spinor:a=0,b=0')

        split = make_state('spinor_split:separation=20')
        up, down = split.value(10.0)
        self.assertAlmostEqual(abs(up), math.pi**(-0.25) / math.sqrt(2))
        self.assertLess(abs(down), 1e-40)

    def test_superposition(self):
        a = HarmonicOscillator1D(0)
        b = HarmonicOscillator1D(2)
        psi = Superposition([a, b], [1.0, 1.0])
        self.assertIsNone(psi.energy)
        self.assertFalse(psi.is_stationary)
        x = np.array([0.3, -0.7])
        np.testing.assert_allclose(
            psi.value(x)[:, 0],
            (a.value(x)[:, 0] + b.value(x)[:, 0]) / math.sqrt(2))
        self.assertRaises(ValueError, Superposition, [a, Hydrogen1s()],
                          [1.0, 1.0])
        self.assertRaises(ValueError, Superposition, [a], [0.0])
        self.assertRaises(ValueError, Superposition, [], [])

    def test_normalization(self):
        for descriptor in ['ho1d:n=0', 'ho1d:n=3', 'ho2d_angular:l=-1',
                           'ho2d:nx=1,ny=1', 'gaussian:x0=1,p0=1,sigma=0.7',
                           'spinor:theta=0.3', 'spinor_split']:
            psi = make_state(descriptor)
            norm, error = integrate(psi.density, psi)
            self.assertAlmostEqual(norm, 1.0, places=8, msg=descriptor)
            self.assertLess(error, 1e-8)

    def test_hydrogen(self):
        psi = make_state('hydrogen_1s')
        self.assertAlmostEqual(psi.energy, -0.5)
        self.assertAlmostEqual(psi.density(np.zeros(3)), 1 / math.pi)
        self.assertTrue(psi.nodal_hint.is_empty)
        self.assertEqual(len(psi.cusps), 1)
        norm, _ = integrate(psi.density, psi)
        self.assertAlmostEqual(norm, 1.0, places=8)

    def test_derivatives(self):
        rng = np.random.default_rng(0)
        cases = [('ho1d:n=3', [(0,), (1,), (2,), (3,)]),
                 ('gaussian:x0=0.5,p0=1.5,sigma=0.8', [(0,), (1,), (3,)]),
                 ('ho2d_angular:l=1', [(0, 0), (1, 0), (0, 1), (1, 1)]),
                 ('ho2d:nx=2,ny=1', [(0, 0), (2, 0), (1, 2)]),
                 ('hydrogen_1s', [(0, 0, 0), (1, 0, 0), (0, 1, 1)]),
                 ('spinor_split:separation=2', [(0,), (2,)])]
        for descriptor, alphas in cases:
            psi = make_state(descriptor)
            for _ in range(5):
                x = rng.uniform(-1.5, 1.5, psi.dim)
                if np.linalg.norm(x) < 0.3 or np.any(psi.at_node(x)):
                    continue
                for alpha in alphas:
                    for axis in range(psi.dim):
                        exact = psi.partial(x, raised(alpha, axis))
                        approx = finite_difference(psi, x, alpha, axis)
                        scale = max(1.0, np.max(np.abs(exact)))
                        self.assertLess(np.max(np.abs(exact - approx)),
                                        1e-6 * scale,
                                        msg=f"{descriptor} {alpha} {axis}")
        psi = make_state('ho1d:n=1')
        self.assertRaises(ValueError, psi.partial, 0.1, (5,))
        self.assertRaises(ValueError, psi.partial, 0.1, (1, 0))
        np.testing.assert_allclose(psi.laplacian(0.4), psi.partial(0.4, 2))
        self.assertEqual(make_state('ho2d:nx=1').gradient([0.1, 0.2]).shape,
                         (2, 1))

    def test_decay(self):
        for descriptor in ['ho1d:n=4', 'ho2d_angular', 'hydrogen_1s']:
            psi = make_state(descriptor)
            direction = np.full(psi.dim, 1 / math.sqrt(psi.dim))
            near = math.sqrt(psi.density(6.0 * direction))
            for r in [8.0, 10.0]:
                far = math.sqrt(psi.density(r * direction))
                self.assertLessEqual(
                    far, near * math.exp(-psi.decay_rate * (r - 6.0)) *
                    (1 + 1e-9), msg=descriptor)

    def test_potentials(self):
        ids = [p.id for p in all_potentials()]
        self.assertEqual(sorted(ids), ['coulomb', 'free', 'ho'])
        ho = get_potential('ho', omega=2.0)
        self.assertAlmostEqual(ho(np.array([[1.0, 1.0]]))[0], 4.0)
        coulomb = get_potential('coulomb')
        self.assertAlmostEqual(coulomb(np.array([[0.0, 3.0, 4.0]]))[0], -0.2)
        self.assertEqual(get_potential('free')(np.zeros((3, 2))).tolist(),
                         [0, 0, 0])
        self.assertRaises(ValueError, get_potential, 'morse')
        self.assertEqual(make_state('ho1d').potential,
                         get_potential('ho'))

    def test_node_threshold(self):
        self.assertEqual(TAU_NODE, 1e-10)
        psi = make_state('ho1d:n=1')
        slope = psi.value(np.array([1e-6]))[0, 0] / 1e-6
        inside = 0.5 * TAU_NODE * psi.max_abs / slope
        outside = 5 * TAU_NODE * psi.max_abs / slope
        self.assertTrue(np.all(psi.at_node(np.array([inside]))))
        self.assertFalse(np.any(psi.at_node(np.array([outside]))))
