from .regularization import (
    RegularizationSpec,
    RegularizationOperator,
    build_operator,
    to_standard_form,
    back_transform,
)
