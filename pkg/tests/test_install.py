"""
Tests that everything is installed correctly.
"""

import unittest


class TestInstall(unittest.TestCase):
    """Tests for `trlearn` importability, i.e. correct installation."""

    def test_namespaces(self):
        import trlearn as tr

        self.assertTrue(callable(tr.tl.fit_family))
        self.assertTrue(callable(tr.pp.build_operator))

    def test_cli(self):
        """Tests the command line entry point can be imported."""
        from trlearn.app.cli import main

        self.assertEqual(main.name, "trlearn")

    def test_kernels(self):
        import trlearn.tools.crossval._kernels as kernels

        self.assertTrue(hasattr(kernels, "leverage_corrected_residuals"))
