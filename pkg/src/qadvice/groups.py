"""Explicit finite groups on integer labels ``0 .. order-1``.

Structured groups are products of cyclic factors with mixed-radix encoding:
for ``z3xz4`` the element ``(a, b)`` has label ``a * 4 + b``, so the first
factor is most significant.  Arbitrary (including nonabelian) groups can be
given by an operation table.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

MAX_ORDER = 4096


class GroupError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group with a full Cayley table.

    ``table[a, b]`` is the label of ``a * b``.  The identity has label 0 for
    every structured group; for table groups it is located by search.
    """

    table: np.ndarray
    name: str = "G"
    factors: tuple = field(default=())

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        n = t.shape[0]
        if t.shape != (n, n) or n < 1:
            raise GroupError("operation table must be square and nonempty")
        if n > MAX_ORDER:
            raise GroupError(f"group order {n} exceeds {MAX_ORDER}")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)
        _check_axioms(t)
        e = int(np.flatnonzero((t == np.arange(n)).all(axis=1))[0])
        inv = np.empty(n, dtype=np.int64)
        for a in range(n):
            inv[a] = int(np.flatnonzero(t[a] == e)[0])
        inv.setflags(write=False)
        object.__setattr__(self, "identity", e)
        object.__setattr__(self, "inverses", inv)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @property
    def elements(self) -> range:
        return range(self.order)

    def op(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.op(x, a)
            k += 1
        return k

    def decode(self, a: int) -> tuple[int, ...]:
        """Mixed-radix coordinates of a structured group's element."""
        if not self.factors:
            return (a,)
        return tuple(int(c) for c in np.unravel_index(a, self.factors))

    def encode(self, coords: Sequence[int]) -> int:
        if not self.factors:
            (a,) = coords
            return int(a)
        return int(np.ravel_multi_index(tuple(c % m for c, m in zip(coords, self.factors)), self.factors))

    def translate(self, g: int, subset: Iterable[int]) -> frozenset[int]:
        """The left translate ``gS``."""
        return frozenset(int(self.table[g, s]) for s in subset)

    def closure(self, generators: Iterable[int]) -> frozenset[int]:
        """Subgroup generated by ``generators`` (exhaustive closure)."""
        elems = {self.identity}
        frontier = list(elems)
        gens = [int(g) for g in generators]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    c = int(self.table[a, g])
                    if c not in elems:
                        elems.add(c)
                        nxt.append(c)
            frontier = nxt
        return frozenset(elems)

    def is_subgroup(self, subset: Iterable[int]) -> bool:
        s = set(int(a) for a in subset)
        if self.identity not in s:
            return False
        return all(int(self.table[a, self.inverses[b]]) in s for a in s for b in s)

    def subgroups(self) -> list[frozenset[int]]:
        """All subgroups, by closure of element pairs (fine for small groups)."""
        found = {self.closure([])}
        frontier = list(found)
        while frontier:
            nxt = []
            for h in frontier:
                for g in self.elements:
                    if g in h:
                        continue
                    k = self.closure(list(h) + [g])
                    if k not in found:
                        found.add(k)
                        nxt.append(k)
            frontier = nxt
        return sorted(found, key=lambda h: (len(h), sorted(h)))

    @classmethod
    def from_table(cls, table, name: str = "G") -> "FiniteGroup":
        return cls(np.asarray(table), name=name)


def _check_axioms(t: np.ndarray) -> None:
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        raise GroupError("table entries out of range")
    ids = np.flatnonzero((t == np.arange(n)).all(axis=1) & (t.T == np.arange(n)).all(axis=1))
    if ids.size != 1:
        raise GroupError("no unique two-sided identity")
    e = int(ids[0])
    if not ((t == e).sum(axis=1) == 1).all():
        raise GroupError("missing inverses")
    if n <= 256:
        gens = range(n)
    else:
        gens = _generating_set(t, e)
    # Light's test: (a g) c == a (g c) for every generator g suffices
    for g in gens:
        if not (t[t[:, g]] == t[:, t[g]]).all():
            raise GroupError("operation is not associative")


def _generating_set(t: np.ndarray, e: int) -> list[int]:
    n = t.shape[0]
    reached = np.zeros(n, dtype=bool)
    reached[e] = True
    gens: list[int] = []
    while not reached.all():
        g = int(np.flatnonzero(~reached)[0])
        gens.append(g)
        frontier = np.flatnonzero(reached)
        while frontier.size:
            new = np.unique(t[np.ix_(frontier, gens)])
            new = new[~reached[new]]
            reached[new] = True
            frontier = new
    return gens


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic order must be at least 1")
    if n > MAX_ORDER:
        raise GroupError(f"group order {n} exceeds {MAX_ORDER}")
    a = np.arange(n)
    return FiniteGroup((a[:, None] + a[None, :]) % n, name=f"z{n}", factors=(n,))


def direct_product(*moduli: int) -> FiniteGroup:
    """``Z_{m1} x Z_{m2} x ...`` with mixed-radix labels."""
    if not moduli:
        raise GroupError("need at least one factor")
    if any(m < 1 for m in moduli):
        raise GroupError("cyclic order must be at least 1")
    order = math.prod(moduli)
    if order > MAX_ORDER:
        raise GroupError(f"group order {order} exceeds {MAX_ORDER}")
    coords = np.unravel_index(np.arange(order), moduli)
    table = np.zeros((order, order), dtype=np.int64)
    stride = order
    for c, m in zip(coords, moduli):
        stride //= m
        table += ((c[:, None] + c[None, :]) % m) * stride
    return FiniteGroup(table, name=_canonical_name(moduli), factors=tuple(moduli))


def generated_group(generators: Sequence, mul, name: str = "G") -> FiniteGroup:
    """Group generated by hashable ``generators`` under ``mul`` (BFS closure).

    Labels follow discovery order, with the identity found as the unique
    idempotent.  Handy for small nonabelian groups given by permutations.
    """
    gens = list(generators)
    if not gens:
        raise GroupError("need at least one generator")
    elems = list(dict.fromkeys(gens))
    index = {g: i for i, g in enumerate(elems)}
    frontier = list(elems)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = mul(a, g)
                if c not in index:
                    if len(elems) >= MAX_ORDER:
                        raise GroupError(f"generated group exceeds order {MAX_ORDER}")
                    index[c] = len(elems)
                    elems.append(c)
                    nxt.append(c)
        frontier = nxt
    n = len(elems)
    table = np.array([[index[mul(a, b)] for b in elems] for a in elems], dtype=np.int64)
    return FiniteGroup(table, name=name)


def compose_permutations(p: tuple, q: tuple) -> tuple:
    """``(p q)(i) = p(q(i))``."""
    return tuple(p[i] for i in q)


def _canonical_name(moduli: Sequence[int]) -> str:
    parts, i = [], 0
    while i < len(moduli):
        j = i
        while j < len(moduli) and moduli[j] == moduli[i]:
            j += 1
        parts.append(f"z{moduli[i]}" + (f"^{j - i}" if j - i > 1 else ""))
        i = j
    return "x".join(parts)


_FACTOR = re.compile(r"^z(\d+)(?:\^(\d+))?$")


def parse_group(spec: str) -> FiniteGroup:
    """Parse ``z5``, ``z3^2``, ``z2^4`` or ``z3xz4`` style specs."""
    moduli: list[int] = []
    for part in spec.strip().lower().split("x"):
        m = _FACTOR.match(part)
        if not m:
            raise GroupError(f"cannot parse group spec {spec!r}")
        moduli += [int(m.group(1))] * int(m.group(2) or 1)
    return cyclic(moduli[0]) if len(moduli) == 1 else direct_product(*moduli)


def make_group(spec) -> FiniteGroup:
    """Build from a string spec, an int (cyclic) or a sequence of moduli."""
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, str):
        return parse_group(spec)
    if isinstance(spec, int):
        return cyclic(spec)
    return direct_product(*spec)


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        elems = tuple(sorted(set(int(a) for a in self.elements)))
        if not self.parent.is_subgroup(elems):
            raise GroupError(f"{elems} is not a subgroup of {self.parent.name}")
        object.__setattr__(self, "elements", elems)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, a):
        return int(a) in self.elements

    def cosets(self) -> list[tuple[int, ...]]:
        """Left cosets ``gH`` in order of their smallest element."""
        seen: set[int] = set()
        out = []
        for g in self.parent.elements:
            if g in seen:
                continue
            c = tuple(sorted(self.parent.translate(g, self.elements)))
            seen.update(c)
            out.append(c)
        return out

    @classmethod
    def generated_by(cls, group: FiniteGroup, generators: Iterable[int]) -> "Subgroup":
        return cls(group, tuple(group.closure(generators)))


@dataclass(frozen=True)
class SubsetInstance:
    group: FiniteGroup
    S: tuple[int, ...]

    def __post_init__(self):
        s = tuple(sorted(set(int(a) for a in self.S)))
        if not s:
            raise GroupError("S must be nonempty")
        if s[0] < 0 or s[-1] >= self.group.order:
            raise GroupError("S contains labels outside the group")
        if 2 * len(s) > self.group.order:
            raise GroupError(f"|S| = {len(s)} exceeds |G|/2 = {self.group.order / 2}")
        object.__setattr__(self, "S", s)


def order_stats(group: FiniteGroup) -> tuple[dict[int, int], int]:
    """Element orders and ``r``, the number of elements of order exactly 2."""
    orders = {a: group.element_order(a) for a in group.elements}
    r = sum(1 for o in orders.values() if o == 2)
    return orders, r


def periodicity(group: FiniteGroup, S: Iterable[int]) -> int:
    """Number of distinct translates ``gS``."""
    s = frozenset(int(a) for a in S)
    if not s:
        raise GroupError("S must be nonempty")
    return len({group.translate(g, s) for g in group.elements})


def cosets_and_periodicity(group: FiniteGroup, S: Iterable[int]):
    """Left cosets when ``S`` is a subgroup, otherwise ``None``; plus ``q``."""
    s = tuple(sorted(set(int(a) for a in S)))
    q = periodicity(group, s)
    cosets = Subgroup(group, s).cosets() if group.is_subgroup(s) else None
    return cosets, q
