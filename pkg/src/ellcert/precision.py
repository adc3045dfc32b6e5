"""Working-precision control for the numeric parts of the library.

Everything numeric runs on mpmath. The default precision is 128 bits and
the floor is 64 bits; routines that need scratch headroom wrap their work
in `extra_bits`.
"""

from contextlib import contextmanager

import mpmath

DEFAULT_BITS = 128
MIN_BITS = 64


class PrecisionError(ArithmeticError):
    """Raised when a computation cannot reach its stated error bound.

    Reported instead of silently truncating; callers may retry at higher
    precision themselves.
    """


def validate_bits(bits):
    if int(bits) != bits or bits < MIN_BITS:
        raise ValueError(f"precision must be an integer >= {MIN_BITS} bits, got {bits!r}")
    return int(bits)


@contextmanager
def working_bits(bits):
    """Run a block at the given binary precision."""
    bits = validate_bits(bits)
    with mpmath.workprec(bits):
        yield mpmath.mp


@contextmanager
def extra_bits(extra):
    """Temporarily add guard bits on top of the current precision."""
    with mpmath.extraprec(extra):
        yield mpmath.mp
