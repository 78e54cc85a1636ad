#!/usr/bin/env python

"""Tests for `trlearn.settings` and log formatting."""

import io
import unittest
from datetime import datetime, timedelta, timezone

import trlearn as tr
from trlearn import logging as logg
from trlearn._settings import Verbosity


class TestSettings(unittest.TestCase):
    def tearDown(self):
        tr.settings.rank_tol = 1e-12
        tr.settings.n_jobs = None
        tr.settings.verbosity = "warning"

    def test_verbosity(self):
        tr.settings.verbosity = "debug"
        self.assertEqual(tr.settings.verbosity, Verbosity.debug)
        tr.settings.verbosity = 2
        self.assertEqual(tr.settings.verbosity, Verbosity.info)
        with self.assertRaises(ValueError):
            tr.settings.verbosity = "loud"
        with self.assertRaises(TypeError):
            tr.settings.verbosity = 1.5

    def test_threads(self):
        import numba

        tr.settings.n_jobs = 1
        self.assertEqual(numba.get_num_threads(), 1)
        tr.settings.n_jobs = 10**6
        self.assertEqual(tr.settings.n_jobs, numba.config.NUMBA_NUM_THREADS)
        tr.settings.n_jobs = None
        self.assertEqual(numba.get_num_threads(), numba.config.NUMBA_NUM_THREADS)

    def test_numeric_checks(self):
        tr.settings.rank_tol = 1e-10
        self.assertEqual(tr.settings.rank_tol, 1e-10)
        with self.assertRaises(ValueError):
            tr.settings.rank_tol = 0.0
        with self.assertRaises(ValueError):
            tr.settings.n_jobs = 0
        with self.assertRaises(TypeError):
            tr.settings.seed = "zero"


class TestLogging(unittest.TestCase):
    def setUp(self):
        self.stream = io.StringIO()
        tr.settings.logfile = self.stream

    def tearDown(self):
        tr.settings.logfile = None
        tr.settings.verbosity = "warning"

    def test_levels(self):
        tr.settings.verbosity = "hint"
        logg.info("fitted")
        logg.hint("try a wider grid")
        logg.debug("hidden")
        logg.warning("ill-conditioned")
        self.assertEqual(
            self.stream.getvalue().splitlines(),
            ["fitted", "--> try a wider grid", "WARNING: ill-conditioned"],
        )

    def test_elapsed(self):
        tr.settings.verbosity = "info"
        start = datetime.now(timezone.utc) - timedelta(seconds=90)
        now = logg.info("finished", time=start)
        self.assertGreaterEqual(now, start)
        self.assertRegex(self.stream.getvalue(), r"^finished \(0:01:3\d\)$")

    def test_hint_hidden_at_info(self):
        tr.settings.verbosity = "info"
        logg.hint("try a wider grid")
        logg.info("fitted")
        self.assertEqual(self.stream.getvalue(), "fitted\n")

    def test_quiet(self):
        tr.settings.verbosity = "error"
        logg.warning("not shown")
        logg.error("shown")
        self.assertEqual(self.stream.getvalue(), "ERROR: shown\n")
