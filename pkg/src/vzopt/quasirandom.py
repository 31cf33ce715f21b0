"""Radical inverse, prime sieve and the probe-line IPD alias."""

import numpy as np

from .errors import RangeError

MAX_INDEX = 2**63 - 2
_BELOW_ONE = float(np.nextafter(1.0, 0.0))


def radical_inverse(n, base):
    """Van der Corput radical inverse of ``n`` in ``base``.

    The base-``base`` digits of ``n`` are mirrored about the radix point.
    The mirrored digits are summed as an exact integer fraction and
    divided once, so the result is the correctly rounded double (0.44,
    not 0.44000000000000006, for n=7 in base 5).
    """
    n = int(n)
    base = int(base)
    if base < 2:
        raise RangeError(f"base must be >= 2, got {base}")
    if n < 0 or n > MAX_INDEX:
        raise RangeError(f"index {n} outside [0, {MAX_INDEX}]")
    num, den = 0, 1
    while n > 0:
        n, d = divmod(n, base)
        num = num * base + d
        den *= base
    # 1 - base**-k rounds up to 1.0 once k passes the double's precision
    return min(num / den, _BELOW_ONE)


def primes_up_to(n):
    """All primes in [2, n], ascending (Sieve of Eratosthenes)."""
    n = int(n)
    if n < 2:
        raise RangeError(f"n must be >= 2, got {n}")
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for k in range(2, int(n**0.5) + 1):
        if sieve[k]:
            sieve[k * k :: k] = False
    return [int(p) for p in np.flatnonzero(sieve)]


def halton_ipd(space, np_per_dim, gamma):
    """Named alias of the probe-line placement.

    The reference routine of this name never draws from the radical
    inverse; its body is the probe-line IPD, so it is delegated here.
    """
    from .cfo import init_probe_lines

    return init_probe_lines(space, np_per_dim, gamma)
