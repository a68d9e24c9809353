import unittest
import os
import math
import json
import tempfile
import shutil

import numpy as np

from bohmvar import *
from bohmvar.utils import parse_descriptor, build_descriptor, parse_scalar,\
    format_float, deterministic_sum, seed_streams, as_points, chunk_slices,\
    float_repr


class TestUtils(unittest.TestCase):
    def test_parse_descriptor(self):
        name, params = parse_descriptor("ho1d:n=2")
        self.assertEqual(name, "ho1d")
        self.assertEqual(params, {'n': 2})

        name, params = parse_descriptor(" spinor : a=0.707, b=1e-3,x=true")
        self.assertEqual(name, "spinor")
        self.assertEqual(params, {'a': 0.707, 'b': 1e-3, 'x': True})

        name, params = parse_descriptor("momentum")
        self.assertEqual(name, "momentum")
        self.assertEqual(params, {})

        self.assertEqual(build_descriptor("ho1d", {'n': 2, 'omega': 2.0}),
                         "ho1d:n=2,omega=2.0")
        self.assertEqual(build_descriptor("hydrogen_1s", {}), "hydrogen_1s")
        descriptor = "ho2d:nx=1,ny=0"
        self.assertEqual(build_descriptor(*parse_descriptor(descriptor)),
                         descriptor)

        for bad in ["", "   ", None, "ho1d:n", "ho1d:=2"]:
            self.assertRaises(ValueError, parse_descriptor, bad)

    def test_parse_scalar(self):
        self.assertEqual(parse_scalar("3"), 3)
        self.assertIsInstance(parse_scalar("3"), int)
        self.assertEqual(parse_scalar("0.25"), 0.25)
        self.assertEqual(parse_scalar("None"), None)
        self.assertEqual(parse_scalar("False"), False)
        self.assertEqual(parse_scalar("1+2j"), 1 + 2j)
        self.assertEqual(parse_scalar("ho"), "ho")

    def test_json(self):
        self.assertEqual(format_float(0.1), "0.10000000000000001")
        self.assertEqual(float(format_float(math.pi)), math.pi)
        obj = {'b': [1, 2.5, None], 'a': {'y': True, 'x': float('nan')},
               'c': np.array([0.5, 1.0])}
        text = to_json(obj)
        self.assertEqual(text, to_json(dict(reversed(list(obj.items())))))
        loaded = json.loads(text)
        self.assertEqual(list(loaded), ['a', 'b', 'c'])
        self.assertIsNone(loaded['a']['x'])
        self.assertEqual(loaded['b'], [1, 2.5, None])
        self.assertEqual(loaded['c'], [0.5, 1.0])
        self.assertTrue(text.endswith("\n"))
        self.assertRaises(TypeError, to_json, {'a': object()})

    def test_files(self):
        dirname = tempfile.mkdtemp()
        try:
            filename = os.path.join(dirname, "table.csv")
            write_csv(filename, ['a', 'b', 'c'], [[0.1, 2, True],
                                                  ['x', None, 1e-20]])
            with open(filename) as fl:
                lines = fl.read().splitlines()
            self.assertEqual(lines[0], "a,b,c")
            self.assertEqual(lines[1], "0.10000000000000001,2,True")
            self.assertEqual(lines[2], "x,None,9.9999999999999995e-21")

            write_json(os.path.join(dirname, "obj.json"), {'x': 1})
            self.assertTrue(check_file_existence(
                os.path.join(dirname, "obj.json")))
            self.assertRaises(RuntimeError, ensure_dir_existence, dirname,
                              True)
            new_dir = os.path.join(dirname, "new")
            self.assertEqual(ensure_dir_existence(new_dir, True),
                             abspath(new_dir))
            self.assertTrue(os.path.isdir(new_dir))
        finally:
            shutil.rmtree(dirname)

    def test_logger(self):
        dirname = tempfile.mkdtemp()
        try:
            log_file = os.path.join(dirname, "log")
            logger = StdAndFileLogger(log_file, silent=True)
            logger.write("first line\n")
            logger.flush()
            StdAndFileLogger(log_file, silent=True).write("second line\n")
            with open(log_file) as fl:
                self.assertEqual(fl.read(), "first line\nsecond line\n")
        finally:
            shutil.rmtree(dirname)

    def test_deterministic_sum(self):
        rng = np.random.default_rng(1)
        values = rng.standard_normal(1000) * 10.0**rng.integers(-8, 8, 1000)
        self.assertEqual(deterministic_sum(values),
                         deterministic_sum(values[::-1]))
        self.assertEqual(deterministic_sum([]), 0.0)
        self.assertEqual(deterministic_sum([1 + 1j, 2 - 3j]), 3 - 2j)

        slices = list(chunk_slices(10, 4))
        self.assertEqual([(s.start, s.stop) for s in slices],
                         [(0, 4), (4, 8), (8, 10)])

    def test_seed_streams(self):
        first = [rng.random() for rng in seed_streams(7, 3)]
        second = [rng.random() for rng in seed_streams(7, 3)]
        self.assertEqual(first, second)
        self.assertEqual(len(set(first)), 3)
        # streams do not depend on how many are spawned
        self.assertEqual(seed_streams(7, 5)[0].random(), first[0])

    def test_as_points(self):
        X, single = as_points(0.5, 1)
        self.assertEqual(X.shape, (1, 1))
        self.assertTrue(single)
        X, single = as_points([0.1, 0.2, 0.3], 1)
        self.assertEqual(X.shape, (3, 1))
        self.assertFalse(single)
        X, single = as_points([0.1, 0.2], 2)
        self.assertEqual(X.shape, (1, 2))
        self.assertTrue(single)
        X, single = as_points(np.zeros((4, 3)), 3)
        self.assertEqual(X.shape, (4, 3))
        self.assertRaises(ValueError, as_points, [0.1, 0.2, 0.3], 2)
        self.assertRaises(ValueError, as_points, np.zeros((4, 2)), 3)

    def test_float_repr(self):
        self.assertEqual(float_repr(None), "None")
        self.assertEqual(float_repr(0.123456789), "0.12346")
        self.assertEqual(float_repr(1.5e-8), "1.50e-08")
