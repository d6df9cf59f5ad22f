"""Vector fields, prolongation, invariance checks, the symmetry algebra and its optimal system."""
from .algebra import *  # noqa: F401,F403
from .algebra import __all__ as _algebra_all
from .fields import *  # noqa: F401,F403
from .fields import __all__ as _fields_all
from .optimal import *  # noqa: F401,F403
from .optimal import __all__ as _optimal_all

__all__ = sorted(set(_fields_all) | set(_algebra_all) | set(_optimal_all))
