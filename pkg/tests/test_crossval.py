#!/usr/bin/env python

"""Tests for leave-one-out, generalised, segmented and virtual cross-validation."""

import itertools
import time
import unittest
from unittest import mock

import numpy as np

import trlearn as tr
from trlearn._errors import (
    ConfigError,
    ContractError,
    LeverageOverflowError,
    SingularSystemError,
)
from trlearn.tools.crossval import build_vircv_transform, fit_vircv_family
from trlearn.tools.crossval._kernels import leverage_corrected_residuals
from trlearn.tools.crossval.segcv import segment_corrected
from trlearn.tools.model import family as family_module
from trlearn.tools.model import with_grid
from .utils import (
    direct_tikhonov,
    explicit_segment_residuals,
    identical_rows_dataset,
    random_dataset,
    random_orthogonal,
    random_problem,
)

GRID = tr.tl.LambdaGrid.logspace(1e-3, 1e3, 13)


def fit(data, kind="identity", grid=GRID, **kwargs):
    return tr.tl.fit_family(data, tr.pp.RegularizationSpec(kind), grid, **kwargs)


class TestLoocv(unittest.TestCase):
    def test_matches_refits(self):
        x, y = random_problem(n=10, p=4, q=2, seed=1)
        data = tr.tl.Dataset(x=x, y=y)
        curve = tr.tl.loocv_press(fit(data))
        segments = np.arange(10)
        for j, lam in enumerate(GRID.values):
            ref = explicit_segment_residuals(x, y, segments, np.eye(4), lam)
            np.testing.assert_allclose(curve.cv_residuals[:, j], ref, rtol=1e-8, atol=1e-10)
        self.assertEqual(curve.strategy, "loocv")

    def test_derivative_regularisation(self):
        x, y = random_problem(n=9, p=6, seed=2)
        data = tr.tl.Dataset(x=x, y=y)
        family = fit(data, "d2")
        curve = tr.tl.loocv_press(family)
        ref = explicit_segment_residuals(x, y, np.arange(9), family.operator.l, GRID[4])
        np.testing.assert_allclose(curve.cv_residuals[:, 4], ref, rtol=1e-8, atol=1e-10)

    def test_single_residual(self):
        cv, bad = leverage_corrected_residuals(
            np.ones((1, 1, 1)), np.array([[0.04]]), np.array([0.06]), 1e-12
        )
        self.assertAlmostEqual(cv[0, 0, 0], 1.0 / 0.9)
        self.assertEqual(bad[0], -1)

    def test_press_at_least_rss(self):
        curve = tr.tl.loocv_press(fit(random_dataset(n=14, p=5, q=2)))
        self.assertTrue(np.all(curve.press >= curve.rss))

    def test_large_lambda_limit(self):
        x, y = random_problem(n=8, p=3, seed=3)
        data = tr.tl.Dataset(x=x, y=y)
        grid = tr.tl.LambdaGrid([1e14])
        curve = tr.tl.loocv_press(fit(data, grid=grid))
        expected = (y[:, 0] - y[:, 0].mean()) / (1.0 - 1.0 / 8)
        np.testing.assert_allclose(curve.cv_residuals[:, 0, 0], expected, rtol=1e-6)

    def test_leverage_overflow(self):
        x, y = random_problem(n=5, p=4, seed=4)
        data = tr.tl.Dataset(x=x, y=y)
        grid = tr.tl.LambdaGrid([0.0, 1.0], allow_zero=True)
        with self.assertRaises(LeverageOverflowError) as cm:
            tr.tl.loocv_press(fit(data, grid=grid))
        self.assertEqual(cm.exception.lambda_index, 0)

    def test_no_intercept(self):
        x, y = random_problem(n=9, p=3, seed=5)
        data = tr.tl.Dataset(x=x, y=y)
        curve = tr.tl.loocv_press(fit(data, fit_intercept=False))
        ref = explicit_segment_residuals(
            x, y, np.arange(9), np.eye(3), GRID[6], fit_intercept=False
        )
        np.testing.assert_allclose(curve.cv_residuals[:, 6], ref, rtol=1e-8)


class TestGcv(unittest.TestCase):
    def test_formula(self):
        family = fit(random_dataset(n=4, p=2), grid=tr.tl.LambdaGrid([1.0]))
        df = tr.tl.degrees_of_freedom(family)[0]
        curve = tr.tl.gcv_curve(family)
        expected = family.rss[0, 0] / (1.0 - df / 4) ** 2
        self.assertAlmostEqual(curve.press[0, 0], expected)
        self.assertEqual(curve.strategy, "gcv")

    def test_rotation_invariance(self):
        x, y = random_problem(n=10, p=4, seed=6)
        q = random_orthogonal(10, seed=7)
        a = fit(tr.tl.Dataset(x=x, y=y), fit_intercept=False)
        b = fit(tr.tl.Dataset(x=q @ x, y=q @ y), fit_intercept=False)
        np.testing.assert_allclose(
            tr.tl.gcv_curve(a).press, tr.tl.gcv_curve(b).press, rtol=1e-8
        )

    def test_attached_to_loocv(self):
        family = fit(random_dataset())
        np.testing.assert_allclose(
            tr.tl.loocv_press(family).gcv, tr.tl.gcv_curve(family).press
        )


class TestSegcv(unittest.TestCase):
    def test_implicit_matches_refits(self):
        x, y = random_problem(n=15, p=6, q=2, seed=8)
        segments = np.arange(15) % 4 + 1
        data = tr.tl.Dataset(x=x, y=y, segments=segments)
        for kind in ("identity", "d1", "d2"):
            family = fit(data, kind)
            curve = tr.tl.segcv_press_implicit(family, data)
            for j in (0, 6, 12):
                ref = explicit_segment_residuals(x, y, segments, family.operator.l, GRID[j])
                np.testing.assert_allclose(
                    curve.cv_residuals[:, j], ref, rtol=1e-8, atol=1e-10
                )

    def test_exactness_grid(self):
        for n, p, q in itertools.product((12, 20, 40), (4, 8, 60), (1, 3)):
            x, y = random_problem(n=n, p=p, q=q, seed=n + p + q)
            for k in (2, 4, n // 2):
                segments = np.arange(n) % k + 1
                data = tr.tl.Dataset(x=x, y=y, segments=segments)
                grid = tr.tl.LambdaGrid([1e-4, 1.0, 1e4])
                curve = tr.tl.segcv_press_implicit(fit(data, grid=grid), data)
                for j, lam in enumerate(grid.values):
                    ref = explicit_segment_residuals(x, y, segments, np.eye(p), lam)
                    np.testing.assert_allclose(
                        curve.cv_residuals[:, j],
                        ref,
                        rtol=1e-8,
                        atol=1e-8 * np.abs(ref).max(),
                        err_msg=f"n={n} p={p} q={q} K={k} lambda={lam}",
                    )

    def test_implicit_matches_explicit(self):
        data = random_dataset(n=12, p=20, q=2, k=3, seed=9)
        implicit = tr.tl.segcv_press_implicit(fit(data), data)
        explicit = tr.tl.segcv_press_explicit(data, tr.pp.RegularizationSpec(), GRID)
        np.testing.assert_allclose(implicit.press, explicit.press, rtol=1e-8)
        np.testing.assert_allclose(implicit.rss, explicit.rss, rtol=1e-10)
        self.assertEqual(explicit.strategy, "segcv_explicit")

    def test_standardize_fixed_scaling(self):
        data = random_dataset(n=12, p=4, k=4, seed=10)
        family = fit(data, "std")
        implicit = tr.tl.segcv_press_implicit(family, data)
        explicit = tr.tl.segcv_press_explicit(data, tr.pp.RegularizationSpec("std"), GRID)
        np.testing.assert_allclose(implicit.press, explicit.press, rtol=1e-8)
        refit = tr.tl.segcv_press_explicit(
            data, tr.pp.RegularizationSpec("std"), GRID, refit_scaling=True
        )
        self.assertFalse(np.allclose(refit.press, explicit.press, rtol=1e-8))

    def test_singletons_equal_loocv(self):
        data = random_dataset(n=11, p=4).with_segments(np.arange(1, 12))
        family = fit(data)
        np.testing.assert_allclose(
            tr.tl.segcv_press_implicit(family, data).press,
            tr.tl.loocv_press(family).press,
            rtol=1e-10,
        )

    def test_permutation_invariance(self):
        x, y = random_problem(n=12, p=5, seed=11)
        segments = np.arange(12) % 3 + 1
        order = np.random.default_rng(0).permutation(12)
        a = tr.tl.Dataset(x=x, y=y, segments=segments)
        b = tr.tl.Dataset(x=x[order], y=y[order], segments=segments[order])
        np.testing.assert_allclose(
            tr.tl.segcv_press_implicit(fit(a), a).press,
            tr.tl.segcv_press_implicit(fit(b), b).press,
            rtol=1e-10,
        )

    def test_no_intercept(self):
        x, y = random_problem(n=12, p=4, seed=12)
        segments = np.arange(12) % 4 + 1
        data = tr.tl.Dataset(x=x, y=y, segments=segments)
        curve = tr.tl.segcv_press_implicit(fit(data, fit_intercept=False), data)
        ref = explicit_segment_residuals(
            x, y, segments, np.eye(4), GRID[3], fit_intercept=False
        )
        np.testing.assert_allclose(curve.cv_residuals[:, 3], ref, rtol=1e-8)

    def test_single_segment_is_singular(self):
        data = random_dataset(n=6, p=3).with_segments(np.ones(6, dtype=int))
        with self.assertRaises(SingularSystemError) as cm:
            tr.tl.segcv_press_implicit(fit(data), data)
        self.assertEqual(cm.exception.segment, 1)

    def test_segment_block(self):
        data = random_dataset(n=10, p=3, k=2)
        family = fit(data)
        rows = data.segment_indices()[0]
        out = segment_corrected(family, rows, 1)
        self.assertEqual(out.shape, (rows.shape[0], len(GRID), 1))

    def test_transformed_family_rejected(self):
        data = random_dataset(n=9, p=3, k=3)
        family, _ = fit_vircv_family(data, tr.pp.RegularizationSpec(), GRID)
        with self.assertRaises(ContractError):
            tr.tl.segcv_press_implicit(family, data)


class TestVircv(unittest.TestCase):
    def test_identical_rows_are_exact(self):
        data = identical_rows_dataset(k=8, size=3, p=6, seed=13)
        vircv = tr.tl.vircv_press(data, tr.pp.RegularizationSpec(), GRID)
        explicit = tr.tl.segcv_press_explicit(data, tr.pp.RegularizationSpec(), GRID)
        np.testing.assert_allclose(vircv.press, explicit.press, rtol=1e-8)
        self.assertEqual(vircv.strategy, "vircv")

    def test_identical_rows_transform(self):
        data = identical_rows_dataset(k=4, size=3, p=5, seed=14)
        transform = build_vircv_transform(data, seed=0)
        np.testing.assert_allclose(transform.m[transform.rows[0]], [3.0, 0.0, 0.0], atol=1e-12)
        self.assertAlmostEqual(transform.m.sum(), data.n)
        t = transform.as_matrix()
        np.testing.assert_allclose(t.T @ t, np.eye(data.n), atol=1e-12)
        self.assertTrue(np.all(transform.t_ones >= 0))

    def test_singletons_are_loocv(self):
        data = random_dataset(n=9, p=3).with_segments(np.arange(1, 10))
        transform = build_vircv_transform(data)
        np.testing.assert_allclose(np.abs(transform.as_matrix()), np.eye(9))
        np.testing.assert_allclose(transform.m, np.ones(9))
        np.testing.assert_allclose(
            tr.tl.vircv_press(data, tr.pp.RegularizationSpec(), GRID).press,
            tr.tl.loocv_press(fit(data)).press,
            rtol=1e-10,
        )

    def test_gcv_is_unchanged(self):
        data = random_dataset(n=12, p=4, k=3, seed=15)
        np.testing.assert_allclose(
            tr.tl.vircv_press(data, tr.pp.RegularizationSpec(), GRID).gcv,
            tr.tl.gcv_curve(fit(data)).press,
            rtol=1e-8,
        )

    def test_coefficients_are_unchanged(self):
        data = random_dataset(n=12, p=4, k=3, seed=16)
        family, _ = fit_vircv_family(data, tr.pp.RegularizationSpec("d1"), GRID)
        b, b0 = tr.tl.coefficients_at(family, 5)
        ref_b, ref_b0 = direct_tikhonov(data.x, data.y, family.operator.l, GRID[5])
        np.testing.assert_allclose(b, ref_b, rtol=1e-8)
        np.testing.assert_allclose(b0, ref_b0, rtol=1e-8)

    def test_deterministic(self):
        data = random_dataset(n=12, p=20, k=3, seed=17)
        a = tr.tl.vircv_press(data, tr.pp.RegularizationSpec(), GRID, seed=3)
        b = tr.tl.vircv_press(data, tr.pp.RegularizationSpec(), GRID, seed=3)
        np.testing.assert_array_equal(a.press, b.press)


class TestCrossValidate(unittest.TestCase):
    def test_strategies(self):
        data = random_dataset(n=12, p=4, k=4, seed=18)
        reg = tr.pp.RegularizationSpec()
        for strategy in ("loocv", "gcv", "segcv", "segcv_explicit", "vircv"):
            curve = tr.tl.cross_validate(data, reg, GRID, strategy=strategy)
            self.assertEqual(curve.press.shape, (len(GRID), 1))
            self.assertIsNotNone(curve.gcv)

    def test_explicit_reuses_family(self):
        data = random_dataset(n=12, p=4, k=3, seed=24)
        reg = tr.pp.RegularizationSpec("d1")
        family = tr.tl.fit_family(data, reg, GRID)
        with mock.patch("trlearn.tools.crossval.segcv.fit_family") as refit:
            curve = tr.tl.cross_validate(
                data, reg, GRID, strategy="segcv_explicit", family=family
            )
        refit.assert_not_called()
        np.testing.assert_array_equal(curve.df, tr.tl.degrees_of_freedom(family))
        np.testing.assert_array_equal(curve.rss, family.rss)

    def test_segments_required(self):
        with self.assertRaises(ConfigError):
            tr.tl.cross_validate(
                random_dataset(), tr.pp.RegularizationSpec(), GRID, strategy="vircv"
            )

    def test_unknown_strategy(self):
        with self.assertRaises(ConfigError):
            tr.tl.cross_validate(
                random_dataset(), tr.pp.RegularizationSpec(), GRID, strategy="kfold"
            )


class TestPressEvaluator(unittest.TestCase):
    def test_matches_curve(self):
        data = random_dataset(n=12, p=4, q=2, k=4, seed=19)
        reg = tr.pp.RegularizationSpec("d1")
        for strategy in ("loocv", "gcv", "segcv", "segcv-explicit", "vircv"):
            curve = tr.tl.cross_validate(data, reg, GRID, strategy=strategy, seed=1)
            evaluator = tr.tl.press_evaluator(
                data, reg, GRID, strategy=strategy, response=1, seed=1
            )
            for j in (0, 7, 12):
                self.assertAlmostEqual(
                    evaluator(j) / curve.press[j, 1], 1.0, places=8, msg=strategy
                )

    def test_cache(self):
        evaluator = tr.tl.press_evaluator(random_dataset(), tr.pp.RegularizationSpec(), GRID)
        evaluator(3)
        evaluator(3)
        evaluator(4)
        self.assertEqual(evaluator.n_evaluations, 2)
        self.assertEqual(list(evaluator.evaluated), [3, 4])
        with self.assertRaises(IndexError):
            evaluator(len(GRID))

    def test_response_name(self):
        data = tr.tl.Dataset(
            x=random_dataset().x, y=random_dataset(q=2).y, y_names=["fat", "protein"]
        )
        evaluator = tr.tl.press_evaluator(
            data, tr.pp.RegularizationSpec(), GRID, response="protein"
        )
        self.assertEqual(evaluator.response, 1)
        with self.assertRaises(ConfigError):
            tr.tl.press_evaluator(data, tr.pp.RegularizationSpec(), GRID, response="water")

    def test_evaluates_single_lambda(self):
        data = random_dataset(n=12, p=6, k=4, seed=23)
        grid = tr.tl.LambdaGrid.logspace(1e-3, 1e3, 200)
        for strategy in ("loocv", "gcv", "segcv", "segcv-explicit", "vircv"):
            with mock.patch.object(
                family_module, "_evaluate_grid", wraps=family_module._evaluate_grid
            ) as evaluate_grid:
                evaluator = tr.tl.press_evaluator(
                    data, tr.pp.RegularizationSpec("d2"), grid, strategy=strategy
                )
                evaluator(3)
            sizes = [len(call[0][2]) for call in evaluate_grid.call_args_list]
            self.assertTrue(sizes, strategy)
            self.assertEqual(set(sizes), {1}, strategy)


class TestPerLambdaCost(unittest.TestCase):
    def test_arrays_do_not_grow_with_p(self):
        grid = tr.tl.LambdaGrid.logspace(1e-3, 1e3, 50)
        for p in (200, 400):
            family = tr.tl.fit_family(
                random_dataset(n=20, p=p, seed=p), tr.pp.RegularizationSpec(), grid
            )
            self.assertEqual(family.c.shape, (19, 50, 1))
            self.assertEqual(family.d.shape, (19, 50))
            self.assertEqual(family.leverages.shape, (20, 50))

    def test_time_per_lambda(self):
        grid = tr.tl.LambdaGrid.logspace(1e-2, 1e4, 10000)
        timings = []
        for p in (2000, 4000):
            data = random_dataset(n=100, p=p, seed=p)
            family = tr.tl.fit_family(
                data, tr.pp.RegularizationSpec(), tr.tl.LambdaGrid([1.0])
            )
            tr.tl.loocv_press(with_grid(family, grid))
            best = np.inf
            for _ in range(5):
                start = time.perf_counter()
                tr.tl.loocv_press(with_grid(family, grid))
                best = min(best, time.perf_counter() - start)
            timings.append(best)
        self.assertLess(max(timings), 2.0)
        self.assertLess(timings[1] / timings[0], 1.25)
