"""Formal Lagrangian, adjoint equation, self-adjointness and conserved vectors."""
from .core import *  # noqa: F401,F403
from .core import __all__ as _core_all
from .numeric import *  # noqa: F401,F403
from .numeric import __all__ as _numeric_all

__all__ = sorted(set(_core_all) | set(_numeric_all))
