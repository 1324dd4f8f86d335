from __future__ import annotations

# Deterministic for every n < 2**64 (Jaeschke / Sorenson-Webster bound).
_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _WITNESSES:
        if n % p == 0:
            return n == p
    if n >= 1 << 64:
        raise ValueError("witness set only valid below 2**64")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_in_range(lo: int, hi: int) -> list[int]:
    """All primes ``p`` with ``lo <= p <= hi``."""
    return [p for p in range(max(2, lo), hi + 1) if is_prime(p)]


def prime_divisors_in_range(value: int, lo: int, hi: int) -> list[int]:
    value = abs(int(value))
    return [p for p in primes_in_range(lo, hi) if value % p == 0] if value else primes_in_range(lo, hi)
