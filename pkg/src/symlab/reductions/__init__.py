"""Similarity reductions, power-series solutions and numeric reference solvers."""
from .oracle import *  # noqa: F401,F403
from .oracle import __all__ as _oracle_all
from .reduce import *  # noqa: F401,F403
from .reduce import __all__ as _reduce_all
from .series import *  # noqa: F401,F403
from .series import __all__ as _series_all

__all__ = sorted(set(_reduce_all) | set(_series_all) | set(_oracle_all))
