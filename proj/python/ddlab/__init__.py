"""Drawdown first-passage laws for time-homogeneous Markov models.

Thin wrapper over the compiled core: model specs, local drawdown rates,
the terminal-value solvers, and the Monte Carlo oracle.
"""

try:
    from ._ddlab import *  # noqa: F401,F403  (installed package layout)
    from . import _ddlab as _core
except ImportError:  # in-tree builds put the module directly on sys.path
    from _ddlab import *  # noqa: F401,F403
    import _ddlab as _core

__version__ = "0.1.0"
__all__ = [name for name in dir(_core) if not name.startswith("_")]
