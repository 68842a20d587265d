"""Flag-qubit syndrome extraction for distance-3 codes.

Construction of extraction circuits (flag, cat, and half-cat styles),
distinguishability checks for coupling orders, single-fault exhaustive
verification, and Monte Carlo memory benchmarks.
"""

from flagqec.pauli import PauliOperator, StabilizerCode, symplectic_product

__all__ = ["PauliOperator", "StabilizerCode", "symplectic_product"]
