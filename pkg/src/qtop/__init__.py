"""Quantum-group R-matrices, L-operators and q-tensor operator machinery.

The package constructs the standard objects of the R-matrix formalism for
quantized enveloping algebras -- fundamental R-matrices of U_q(sl(n)), the
universal R-matrix of U_q(sl(2)) in finite-dimensional representations,
L-operators on a truncated model space, covariant and contravariant
generating matrices of q-tensor operators, Clebsch-Gordan maps and the
classical (q -> 1) limit -- and mechanically verifies the algebraic
identities tying them together (Yang-Baxter, RLL and reflection equations,
covariance relations, Wigner-Eckart factorization, fusion, crossing
symmetry).

Two scalar backends are available everywhere: exact Laurent polynomials in
a root of q with arbitrary-precision rational coefficients, and complex
floating point at a fixed generic q.
"""

from .qscalar import QContext, ExactScalar, qnum, qnum_rational, qfactorial

__all__ = [
    "QContext",
    "ExactScalar",
    "qnum",
    "qnum_rational",
    "qfactorial",
]

__version__ = "0.1.0"
