"""Exact rational coefficient type: gmpy2.mpq when available, Fraction otherwise."""

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

ZERO = Q(0)
ONE = Q(1)


def is_rat(x):
    return isinstance(x, (int, type(ZERO)))
