"""Exact univariate polynomials over the rationals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Number = int | Fraction


def _frac(c) -> Fraction:
    if isinstance(c, float):
        if not math.isfinite(c):
            raise ValueError("non-finite coefficient")
    return Fraction(c)


@dataclass(frozen=True)
class Poly:
    """Coefficients in the monomial basis, lowest degree first.

    Trailing zeros are stripped, so the zero polynomial has no coefficients
    and degree -1.
    """

    coefficients: tuple[Fraction, ...] = ()

    def __post_init__(self):
        cs = [_frac(c) for c in self.coefficients]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coefficients", tuple(cs))

    @classmethod
    def of(cls, *coefficients) -> "Poly":
        return cls(tuple(coefficients))

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls((c,))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0.0
        for c in reversed(self.coefficients):
            acc = acc * x + (c if isinstance(acc, Fraction) else float(c))
        return acc

    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        return Poly(tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coefficients))

    def __sub__(self, other) -> "Poly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "Poly":
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a:
                for j, b in enumerate(other.coefficients):
                    out[i + j] += a * b
        return Poly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coefficients)
        q = [Fraction(0)] * max(0, len(rem) - len(other.coefficients) + 1)
        lead = other.leading
        dv = other.degree
        while len(rem) - 1 >= dv and any(rem):
            shift = len(rem) - 1 - dv
            f = rem[-1] / lead
            q[shift] = f
            for i, c in enumerate(other.coefficients):
                rem[shift + i] -= f * c
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(tuple(q)), Poly(tuple(rem))

    def derivative(self, m: int = 1) -> "Poly":
        cs = list(self.coefficients)
        for _ in range(m):
            cs = [i * c for i, c in enumerate(cs)][1:]
        return Poly(tuple(cs))

    def compose_affine(self, a, b) -> "Poly":
        """``p(a x + b)``."""
        inner = Poly((b, a))
        out = Poly()
        for c in reversed(self.coefficients):
            out = out * inner + Poly.constant(c)
        return out

    def effective_degree(self, tol: float = 1e-9) -> int:
        return self.truncate(tol).degree

    def truncate(self, tol: float = 1e-9) -> "Poly":
        """Drop trailing coefficients with magnitude below ``tol``."""
        cs = list(self.coefficients)
        while cs and abs(cs[-1]) < tol:
            cs.pop()
        return Poly(tuple(cs))

    def to_json(self) -> dict:
        return {"coefficients": [[c.numerator, c.denominator] for c in self.coefficients]}

    @classmethod
    def interpolate(cls, xs: Sequence, ys: Sequence) -> "Poly":
        """Lagrange interpolation through ``(xs[i], ys[i])`` in exact arithmetic."""
        xs = [_frac(x) for x in xs]
        ys = [_frac(y) for y in ys]
        if len(set(xs)) != len(xs):
            raise ValueError("interpolation nodes must be distinct")
        # Newton divided differences
        coef = list(ys)
        n = len(xs)
        for j in range(1, n):
            for i in range(n - 1, j - 1, -1):
                coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
        out = Poly.constant(coef[-1]) if coef else Poly()
        for i in range(n - 2, -1, -1):
            out = out * Poly((-xs[i], 1)) + Poly.constant(coef[i])
        return out


def _as_poly(v) -> Poly:
    return v if isinstance(v, Poly) else Poly.constant(v)


# ---------------------------------------------------------------------------
# real roots


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        _, r = seq[-2].divmod(seq[-1])
        seq.append(-r)
    return [q for q in seq if not q.is_zero()]


def _sign_changes(seq: Iterable[Poly], x: Fraction) -> int:
    signs = [s for s in ((q(x) > 0) - (q(x) < 0) for q in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(seq: list[Poly], a: Fraction, b: Fraction) -> int:
    """Distinct roots in ``(a, b]`` (Sturm's theorem)."""
    return _sign_changes(seq, a) - _sign_changes(seq, b)


def isolate_roots(p: Poly, a, b, width=Fraction(1, 2**60)) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals ``(lo, hi]`` each holding one distinct root of ``p``
    in ``(a, b]``, refined to at most ``width``."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no isolated roots")
    a, b = Fraction(a), Fraction(b)
    if p.degree < 1:
        return []
    seq = sturm_sequence(p)
    out = []
    stack = [(a, b, count_roots(seq, a, b))]
    while stack:
        lo, hi, k = stack.pop()
        if k == 0:
            continue
        if k == 1 and hi - lo <= width:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        left = count_roots(seq, lo, mid)
        stack.append((mid, hi, k - left))
        stack.append((lo, mid, left))
    return sorted(out)


def sup_norm(p: Poly, lo, hi, m: int = 0, width=Fraction(1, 2**60)) -> Fraction:
    """``max |p^(m)|`` over ``[lo, hi]``.

    Candidates are the endpoints and the critical points of ``p^(m)``,
    located as roots of ``p^(m+1)`` by Sturm isolation.  Each critical point
    is known to within ``width``; since ``p^(m)`` is stationary there the
    error in the returned value is second order in ``width``.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if hi <= lo:
        raise ValueError("need lo < hi")
    q = p.derivative(m)
    if q.is_zero():
        return Fraction(0)
    cands = [lo, hi]
    dq = q.derivative()
    if not dq.is_zero():
        cands += [(a + b) / 2 for a, b in isolate_roots(dq, lo, hi, width)]
    return max(abs(q(x)) for x in cands)


# ---------------------------------------------------------------------------
# Chebyshev polynomials


def double_factorial_odd(m: int) -> int:
    """``1 * 3 * 5 * ... * (2m - 1)``; 1 for ``m = 0``."""
    return math.prod(range(1, 2 * m, 2))


def chebyshev(d: int) -> Poly:
    """``T_d`` from ``T_{k+1} = 2x T_k - T_{k-1}``."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    prev, cur = Poly.constant(1), Poly.x()
    if d == 0:
        return prev
    for _ in range(d - 1):
        prev, cur = cur, 2 * Poly.x() * cur - prev
    return cur


def chebyshev_derivative_at_one(d: int, m: int) -> Fraction:
    """Closed form ``prod_{k<m} (d^2 - k^2) / (1*3*...*(2m-1))``; 0 for ``m > d``."""
    if m > d:
        return Fraction(0)
    return Fraction(math.prod(d * d - k * k for k in range(m)), double_factorial_odd(m))


def chebyshev_tools(d: int, m: int) -> tuple[Poly, Fraction]:
    """``T_d`` and ``T_d^(m)(1)``, checking the closed form against the
    recurrence-built polynomial."""
    if not 0 <= d <= 64 or m < 0:
        raise ValueError("need 0 <= d <= 64 and m >= 0")
    t = chebyshev(d)
    value = t.derivative(m)(Fraction(1))
    if value != chebyshev_derivative_at_one(d, m):
        raise AssertionError(f"closed form disagrees with recurrence at d={d}, m={m}")
    return t, value


def rescaled_chebyshev(d: int, N) -> Poly:
    """``T_d(2x/N - 1)``, equioscillating on ``[0, N]``."""
    N = Fraction(N)
    return chebyshev(d).compose_affine(2 / N, Fraction(-1))
