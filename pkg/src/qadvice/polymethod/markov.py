"""Markov-brothers inequalities and the degree bounds built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .poly import Poly, chebyshev_derivative_at_one, double_factorial_odd, sup_norm


def markov_bounds(r0, rm, N, d: int, m: int, r1=None) -> tuple[float | None, float]:
    """``(aa_lower_degree, va_rhs)``.

    ``aa_lower_degree = sqrt(N r1 / (2 r0))`` is the degree forced by the
    first-derivative inequality; ``r1`` defaults to ``rm`` when ``m = 1`` and
    the value is ``None`` otherwise.  ``va_rhs = (2 r0 / N)^m T_d^(m)(1)``
    bounds ``r^(m)`` for any degree-``d`` polynomial.
    """
    if r0 <= 0:
        raise ValueError("r0 must be positive")
    if N <= 0:
        raise ValueError("N must be positive")
    if r1 is None and m == 1:
        r1 = rm
    aa = None if r1 is None else math.sqrt(float(Fraction(N) * Fraction(r1) / (2 * Fraction(r0))))
    va = float((2 * Fraction(r0) / Fraction(N)) ** m * chebyshev_derivative_at_one(d, m))
    return aa, va


@dataclass(frozen=True)
class FloorCheck:
    K: int
    delta: Fraction
    sups: tuple[Fraction, ...]  # r^(m) for m = 0..K

    @property
    def verdict(self) -> bool:
        return all(float(s) >= float(self.delta) / math.factorial(m) - 1e-12 for m, s in enumerate(self.sups))


def derivative_floor_check(p: Poly, K: int, delta, N=None) -> FloorCheck:
    """``r^(m) >= delta / m!`` on ``[0, N]`` for ``m <= K`` whenever ``p``
    vanishes on ``0..K-1`` and ``p(K) = delta`` (``N`` defaults to ``K``)."""
    delta = Fraction(delta)
    N = K if N is None else N
    if K < 1 or N < K:
        raise ValueError("need 1 <= K <= N")
    if delta <= 0:
        raise ValueError("delta must be positive")
    if any(p(Fraction(i)) != 0 for i in range(K)) or p(Fraction(K)) != delta:
        raise ValueError("p must vanish on 0..K-1 and equal delta at K")
    sups = tuple(sup_norm(p, 0, N, m) for m in range(K + 1))
    return FloorCheck(K, delta, sups)


@dataclass(frozen=True)
class DegreeBound:
    N: int
    K: int
    delta: float
    r0: float
    value: float
    branch: str  # markov | factorial

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("bound must be nonnegative")

    def to_json(self) -> dict:
        return {"N": self.N, "K": self.K, "delta": self.delta, "r0": self.r0, "value": self.value, "branch": self.branch}


def degree_lower_bound(N: int, K: int, delta, r0) -> DegreeBound:
    """Degree forced on a polynomial bounded in ``[0, 1]`` at ``0..N`` that
    vanishes on ``0..K-1`` and equals ``delta`` at ``K``.

    If its sup over ``[0, N]`` is ``r0 >= 2`` the first-derivative
    inequality gives ``sqrt(N (r0 - 1) / r0)``; otherwise the ``K``-th
    derivative must reach ``delta / K!`` and the higher-derivative inequality
    gives ``sqrt((N/4) ((2K-1)!! delta / K!)^(1/K))``.
    """
    delta = float(delta)
    r0 = float(r0)
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    if not 1 <= K <= N:
        raise ValueError("need 1 <= K <= N")
    if r0 >= 2:
        return DegreeBound(N, K, delta, r0, math.sqrt(N * (r0 - 1) / r0), "markov")
    inner = double_factorial_odd(K) * delta / math.factorial(K)
    return DegreeBound(N, K, delta, r0, math.sqrt(N / 4 * inner ** (1 / K)), "factorial")


def direct_product_bound(N: int, K: int, T: int) -> float:
    """Largest success probability for finding all ``K`` marked items with
    ``T`` queries that the degree bound allows.

    Inverts the factorial branch with ``deg <= 2T``:
    ``delta <= (16 T^2 / N)^K K! / (2K-1)!!``, clipped to 1.  When
    ``2T >= sqrt(N/2)`` the other branch no longer rules anything out, so the
    bound is vacuous.
    """
    if T < 0 or K < 0 or N < 1:
        raise ValueError("need N >= 1 and K, T >= 0")
    if K == 0:
        return 1.0
    if T == 0:
        return 0.0 if K >= 1 else 1.0
    if 2 * T >= math.sqrt(N / 2):
        return 1.0
    value = (16 * T * T / N) ** K * math.factorial(K) / double_factorial_odd(K)
    return min(1.0, value)
