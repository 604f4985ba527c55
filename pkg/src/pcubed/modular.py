"""Small exact-arithmetic helpers for Z/m with m an odd prime power."""

from functools import lru_cache
from math import gcd


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def inverse_mod(a: int, m: int) -> int:
    a, m = int(a), int(m)
    if gcd(a, m) != 1:
        raise ValueError(f"{a} is not a unit mod {m}")
    return pow(a, -1, m)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for odd prime p: 0, 1 or -1."""
    a %= p
    if a == 0:
        return 0
    s = pow(a, (p - 1) // 2, p)
    return 1 if s == 1 else -1


def units(m: int) -> list[int]:
    return [a for a in range(1, m) if gcd(a, m) == 1]


@lru_cache(maxsize=None)
def primitive_root(m: int) -> int:
    """Smallest positive primitive root mod m (m an odd prime power)."""
    us = units(m)
    n = len(us)
    for g in range(2, m):
        if gcd(g, m) != 1:
            continue
        x, k = g, 1
        while x != 1:
            x = x * g % m
            k += 1
        if k == n:
            return g
    raise ValueError(f"no primitive root mod {m}")


def least_nonsquare(m: int) -> int:
    """Smallest unit mod m that is not a square of a unit (m odd prime power)."""
    squares = {u * u % m for u in units(m)}
    for a in units(m):
        if a not in squares:
            return a
    raise ValueError(f"all units mod {m} are squares")
