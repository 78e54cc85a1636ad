from .curve import CvCurve, press_from_residuals
from .loocv import loocv_press, gcv_curve, gcv_values, leverage_corrected
from .segcv import segcv_press_implicit, segcv_press_explicit, fold_families
from .vircv import VircvTransform, build_vircv_transform, fit_vircv_family, vircv_press
from .evaluator import (
    PressEvaluator,
    press_evaluator,
    cross_validate,
    normalize_strategy,
    STRATEGIES,
)
