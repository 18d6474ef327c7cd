"""Equilibrium solvers and brute-force deviation verifiers for price-coupling games."""

try:
    from ._pricegame import *  # noqa: F401,F403
    from ._pricegame import __version__  # noqa: F401
except ImportError:  # build-tree layout: the extension sits on PYTHONPATH beside the package
    from _pricegame import *  # noqa: F401,F403
    from _pricegame import __version__  # noqa: F401
