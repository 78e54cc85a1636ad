from .tools.model import (
    Dataset,
    LambdaGrid,
    relabel_segments,
    ModelFamily,
    fit_family,
    coefficients_at,
    coefficient_paths,
    predict,
    degrees_of_freedom,
)
from .tools.crossval import (
    CvCurve,
    loocv_press,
    gcv_curve,
    segcv_press_implicit,
    segcv_press_explicit,
    VircvTransform,
    build_vircv_transform,
    vircv_press,
    PressEvaluator,
    press_evaluator,
    cross_validate,
)
from .tools.select import (
    SelectionResult,
    grid_minimum,
    min_press_search,
    SplineEstimate,
    spline_press_estimate,
    one_se_rule,
    chi_square_rule,
    chi2_lower_quantile,
)
from .tools.tikhonov import tikhonov_cv
