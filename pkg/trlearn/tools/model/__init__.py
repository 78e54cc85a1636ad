from .dataset import Dataset, LambdaGrid, relabel_segments
from .family import (
    ModelFamily,
    fit_family,
    fit_arrays,
    fit_standard,
    operator_for,
    with_grid,
    coefficients_at,
    coefficient_paths,
    predict,
    degrees_of_freedom,
)
