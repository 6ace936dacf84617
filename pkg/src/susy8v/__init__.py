"""Numerical verification toolkit for the supersymmetric eight-vertex model.

Modules:

- :mod:`susy8v.hilbert`  spin-chain basis, linear maps, symmetries, XYZ Hamiltonian
- :mod:`susy8v.susy`     supercharges, representatives, zero-energy states
- :mod:`susy8v.vertex`   R-matrix, transfer matrix and the ``(a+b)**L`` eigenvalue
- :mod:`susy8v.elliptic` theta functions and the elliptic weight map
- :mod:`susy8v.spectral` dense and Krylov eigen-solvers, clustering
- :mod:`susy8v.harness`  verification suites and JSON reports
- :mod:`susy8v.cli`      command-line interface
"""

__version__ = "0.1.0"

from .hilbert import LinearMap, SpinState  # noqa: E402
from .vertex import ConstraintError, VertexWeights, solve_d  # noqa: E402
from .elliptic import EllipticParams, weights_from_elliptic  # noqa: E402

__all__ = [
    "LinearMap",
    "SpinState",
    "VertexWeights",
    "ConstraintError",
    "solve_d",
    "EllipticParams",
    "weights_from_elliptic",
    "__version__",
]
