from .rules import (
    SelectionResult,
    grid_minimum,
    one_se_rule,
    chi_square_rule,
    chi2_lower_quantile,
)
from .search import min_press_search
from .spline import SplineEstimate, spline_press_estimate
