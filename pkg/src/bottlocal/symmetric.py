"""Newton's identities over any commutative ring with ``+``, ``-``, ``*`` and
multiplication by rationals (Chow classes, local classes, numbers)."""

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial


def power_sums(e, n, zero):
    """Power sums ``p_1..p_n`` from elementary symmetric functions.

    ``e[i]`` is ``e_i`` for ``1 <= i < len(e)`` (``e[0]`` is ignored); missing
    entries are zero.  Returns a list indexed from 0 with ``p[0]`` unused.
    """

    def el(i):
        return e[i] if i < len(e) else zero

    p = [zero] * (n + 1)
    for k in range(1, n + 1):
        acc = el(k) * ((-1) ** (k - 1) * k)
        for i in range(1, k):
            term = el(i) * p[k - i]
            acc = acc + term if i % 2 == 1 else acc - term
        p[k] = acc
    return p


def elementary(p, n, one, zero):
    """Elementary symmetric functions ``e_0..e_n`` from power sums ``p``."""
    e = [one] + [zero] * n
    for k in range(1, n + 1):
        acc = zero
        for i in range(1, k + 1):
            if i >= len(p):
                break
            term = e[k - i] * p[i]
            acc = acc + term if i % 2 == 1 else acc - term
        e[k] = acc * Fraction(1, k)
    return e


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli numbers with ``B_1 = -1/2``."""
    if n == 0:
        return Fraction(1)
    return -sum(comb(n + 1, k) * bernoulli(k) for k in range(n)) / (n + 1)


@lru_cache(maxsize=None)
def todd_log_coefficient(k: int) -> Fraction:
    """Coefficient of ``x^k`` in ``log(x / (1 - exp(-x)))``."""
    if k == 1:
        return Fraction(1, 2)
    return -bernoulli(k) / (k * factorial(k))


@lru_cache(maxsize=None)
def todd_series(n: int) -> tuple:
    """Coefficients of ``x / (1 - exp(-x))`` up to ``x^n``."""
    # 1/x (1 - e^{-x}) = sum (-1)^k x^k / (k+1)!, inverted term by term
    a = [Fraction((-1) ** k, factorial(k + 1)) for k in range(n + 1)]
    inv = [Fraction(0)] * (n + 1)
    inv[0] = Fraction(1)
    for k in range(1, n + 1):
        inv[k] = -sum(a[j] * inv[k - j] for j in range(1, k + 1))
    return tuple(inv)
