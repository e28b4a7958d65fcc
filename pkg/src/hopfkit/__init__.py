"""hopfkit: exact-arithmetic construction and verification of finite-dimensional
Hopf algebras built from grouplike/skew-primitive presentations, small quantum
sl2, their semidirect biproducts, and finite-characteristic triple products."""

__version__ = "0.1.0"
