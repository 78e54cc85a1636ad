from . import model
from . import crossval
from . import select
from .tikhonov import tikhonov_cv
