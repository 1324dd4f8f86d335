"""One-way communication problems and concrete protocols for them.

Inputs are integers.  For bit-string problems the integer is the string read
most-significant-bit first, so ``x = 1100`` is the integer 12 and its first
bit ``x_1`` is the leading ``1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from . import groups as grp
from .primes import is_prime, primes_in_range
from .qcore import (
    DensityMatrix,
    DimensionError,
    MajorityMeasurement,
    TwoOutcomeMeasurement,
    basis,
    measurement_from_effect,
    measurement_from_predicate,
    uniform_superposition,
)
from .rng import stream

UNDEFINED = -1
MAX_MESSAGE_QUBITS = 10


class ProblemError(ValueError):
    pass


MAX_TABLE_ENTRIES = 2**24


def _popcount(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.uint32)
    return np.unpackbits(a.view(np.uint8).reshape(a.shape + (4,)), axis=-1).sum(axis=-1)


@dataclass(frozen=True, eq=False)
class OneWayProblem:
    """Partial Boolean function on ``range(alice_inputs) x range(bob_inputs)``.

    ``row(x)`` returns the int8 vector of ``f(x, .)`` with ``UNDEFINED`` off
    the domain.  Rows are computed on demand so large promise problems never
    need a full table.
    """

    name: str
    alice_inputs: int
    bob_inputs: int
    row_fn: Callable[[int], np.ndarray] = field(repr=False)

    def __post_init__(self):
        if self.alice_inputs < 1 or self.bob_inputs < 1:
            raise ProblemError("input sets must be nonempty")

    @classmethod
    def from_table(cls, name: str, table) -> "OneWayProblem":
        t = np.asarray(table, dtype=np.int8)
        if t.ndim != 2 or t.size == 0:
            raise ProblemError("problem table must be a nonempty matrix")
        if not np.isin(t, (0, 1, UNDEFINED)).all():
            raise ProblemError("table entries must be 0, 1 or UNDEFINED")
        t.setflags(write=False)
        prob = cls(name, t.shape[0], t.shape[1], t.__getitem__)
        prob.__dict__["table"] = t
        return prob

    @classmethod
    def from_function(cls, name: str, alice_inputs: int, bob_inputs: int, f: Callable) -> "OneWayProblem":
        def row(x):
            return np.array([UNDEFINED if (v := f(x, y)) is None else int(v) for y in range(bob_inputs)], dtype=np.int8)

        return cls.from_table(name, np.stack([row(x) for x in range(alice_inputs)]))

    @cached_property
    def table(self) -> np.ndarray:
        if self.alice_inputs * self.bob_inputs > MAX_TABLE_ENTRIES:
            raise ProblemError(f"{self.name}: table with {self.alice_inputs * self.bob_inputs} entries is too large")
        t = np.stack([np.asarray(self.row(x)) for x in range(self.alice_inputs)])
        t.setflags(write=False)
        return t

    def row(self, x: int) -> np.ndarray:
        if not 0 <= x < self.alice_inputs:
            raise ProblemError(f"Alice input {x} out of range")
        return self.row_fn(x)

    @property
    def n(self) -> int:
        """Alice's input length in bits."""
        return max(0, math.ceil(math.log2(self.alice_inputs)))

    @property
    def m(self) -> int:
        return max(0, math.ceil(math.log2(self.bob_inputs)))

    @cached_property
    def is_total(self) -> bool:
        return all(bool((self.row(x) != UNDEFINED).all()) for x in range(self.alice_inputs))

    def f(self, x: int, y: int) -> int | None:
        v = int(self.row(x)[y])
        return None if v == UNDEFINED else v

    def domain_of(self, x: int) -> list[int]:
        """``D_x``: Bob inputs paired with ``x`` in the domain, ascending."""
        return np.flatnonzero(self.row(x) != UNDEFINED).tolist()

    def domain(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.alice_inputs) for y in self.domain_of(x)]


# ---------------------------------------------------------------------------
# problem catalogue


def equality(n: int) -> OneWayProblem:
    if not 0 <= n <= 20:
        raise ProblemError("equality needs 0 <= n <= 20")
    size = 2**n

    def row(x):
        r = np.zeros(size, dtype=np.int8)
        r[x] = 1
        return r

    return OneWayProblem(f"eq:{n}", size, size, row)


def coset_problem(p: int) -> OneWayProblem:
    """Alice holds ``<x, y>``, Bob holds ``<a, b>`` (labels ``x*p + y``, ``a*p + b``).

    Output 1 iff ``y = a x + b (mod p)``.
    """
    if not is_prime(p):
        raise ProblemError(f"{p} is not prime")
    a, b = np.divmod(np.arange(p * p), p)

    def row(label):
        x, y = divmod(label, p)
        return (y == (a * x + b) % p).astype(np.int8)

    return OneWayProblem(f"coset:{p}", p * p, p * p, row)


def subset_problem(inst: grp.SubsetInstance) -> OneWayProblem:
    g = inst.group
    s = np.zeros(g.order, dtype=np.int8)
    s[list(inst.S)] = 1
    return OneWayProblem(
        f"subset:{g.name}:{','.join(map(str, inst.S))}", g.order, g.order, lambda x: s[g.table[x]]
    )


def membership_problem(group: grp.FiniteGroup, subgroup: grp.Subgroup) -> OneWayProblem:
    """Advice-style problem: a single Alice input, Bob holds ``x``; is ``x in H``?"""
    row = np.zeros((1, group.order), dtype=np.int8)
    row[0, list(subgroup.elements)] = 1
    name = f"membership:{group.name}:{','.join(map(str, subgroup.elements))}"
    return OneWayProblem.from_table(name, row)


def promise_example(n: int) -> OneWayProblem:
    """Partial function with a large deterministic but tiny randomized cost.

    ``f = 1`` when the first-half inner product is at least ``n/4`` and the
    second-half one is 0; ``f = 0`` in the mirrored case; undefined
    otherwise.
    """
    if n <= 0 or n % 4:
        raise ProblemError("n must be a positive multiple of 4")
    if n > 16:
        raise ProblemError("n must be at most 16")
    half = n // 2
    size = 2**n
    ys = np.arange(size, dtype=np.uint32)
    hi_mask = ((1 << half) - 1) << half
    lo_mask = (1 << half) - 1

    def row(x):
        both = ys & x
        first = _popcount(both & hi_mask)
        second = _popcount(both & lo_mask)
        r = np.full(size, UNDEFINED, dtype=np.int8)
        r[(first >= n / 4) & (second == 0)] = 1
        r[(first == 0) & (second >= n / 4)] = 0
        return r

    return OneWayProblem(f"promise:{n}", size, size, row)


def random_total_problem(n: int, m: int, rng: np.random.Generator, name: str | None = None) -> OneWayProblem:
    t = rng.integers(0, 2, size=(2**n, 2**m), dtype=np.int8)
    return OneWayProblem.from_table(name or f"random:{n}x{m}", t)


def parse_problem(spec: str) -> OneWayProblem:
    """Resolve ids like ``eq:3``, ``coset:5``, ``subset:z5:0,1``,
    ``promise:4`` and ``membership:z2^2:1`` (subgroup by generators)."""
    kind, _, rest = spec.partition(":")
    try:
        if kind == "eq":
            return equality(int(rest))
        if kind == "coset":
            return coset_problem(int(rest))
        if kind == "promise":
            return promise_example(int(rest))
        if kind == "subset":
            gspec, _, sspec = rest.partition(":")
            g = grp.parse_group(gspec)
            return subset_problem(grp.SubsetInstance(g, parse_int_list(sspec)))
        if kind == "membership":
            gspec, _, hspec = rest.partition(":")
            g = grp.parse_group(gspec)
            return membership_problem(g, grp.Subgroup.generated_by(g, parse_int_list(hspec)))
    except (ValueError, grp.GroupError) as exc:
        raise ProblemError(f"bad problem id {spec!r}: {exc}") from exc
    raise ProblemError(f"unknown problem id {spec!r}")


def parse_int_list(text: str) -> list[int]:
    text = text.strip().strip("{}")
    return [int(tok) for tok in text.split(",") if tok.strip()] if text else []


# ---------------------------------------------------------------------------
# quantum protocols


@dataclass(frozen=True, eq=False)
class QuantumOneWayProtocol:
    """Alice sends ``encoder(x)`` on ``L`` qubits; Bob measures ``decoder(y)``.

    Outcome 1 of ``decoder(y)`` is Bob's answer "f = 1".  Encoder and
    decoder outputs are memoized; both callables must be pure.
    """

    L: int
    encoder: Callable[[int], DensityMatrix]
    decoder: Callable[[int], TwoOutcomeMeasurement]
    name: str = "protocol"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not 0 <= self.L <= MAX_MESSAGE_QUBITS:
            raise DimensionError(f"message length {self.L} outside 0..{MAX_MESSAGE_QUBITS}")

    @property
    def message_dim(self) -> int:
        return 2**self.L

    def message(self, x: int) -> DensityMatrix:
        key = ("enc", x)
        if key not in self._cache:
            rho = self.encoder(x)
            if rho.dim != self.message_dim:
                raise DimensionError(f"encoder produced dim {rho.dim}, expected {self.message_dim}")
            self._cache[key] = rho
        return self._cache[key]

    def measurement(self, y: int) -> TwoOutcomeMeasurement:
        key = ("dec", y)
        if key not in self._cache:
            meas = self.decoder(y)
            if meas.system_dim != self.message_dim:
                raise DimensionError(f"decoder acts on dim {meas.system_dim}, expected {self.message_dim}")
            self._cache[key] = meas
        return self._cache[key]

    def accept_probability(self, x: int, y: int) -> float:
        return self.measurement(y).probability(self.message(x), 1)


@dataclass(frozen=True)
class ProtocolEvaluation:
    errors: np.ndarray  # NaN off the domain
    worst_case_error: float

    def certifies_bounded_error(self) -> bool:
        return self.worst_case_error <= 1 / 3


def evaluate_protocol(protocol: QuantumOneWayProtocol, problem: OneWayProblem) -> ProtocolEvaluation:
    """Exact error probability on every domain pair."""
    errors = np.full((problem.alice_inputs, problem.bob_inputs), np.nan)
    for x, y, fxy in iter_pairs(problem):
        p1 = protocol.accept_probability(x, y)
        errors[x, y] = p1 if fxy == 0 else 1 - p1
    worst = float(np.nanmax(errors)) if np.isfinite(errors).any() else 0.0
    return ProtocolEvaluation(errors, worst)


def boost(protocol: QuantumOneWayProtocol, r: int) -> QuantumOneWayProtocol:
    """``r`` copies of the message and a coherent majority vote over Bob's outcomes."""
    if r < 1 or r % 2 == 0:
        raise ValueError("r must be a positive odd integer")
    if r == 1:
        return protocol
    if r * protocol.L > MAX_MESSAGE_QUBITS:
        raise DimensionError(f"boosted message needs {r * protocol.L} qubits > {MAX_MESSAGE_QUBITS}")

    def encoder(x):
        rho = protocol.message(x).matrix
        out = rho
        for _ in range(r - 1):
            out = np.kron(out, rho)
        return DensityMatrix(out)

    def decoder(y):
        return MajorityMeasurement((protocol.measurement(y),) * r)

    return QuantumOneWayProtocol(r * protocol.L, encoder, decoder, name=f"{protocol.name}^maj{r}")


def boosted_error(e: float, r: int) -> float:
    """``Pr[Binomial(r, e) > r/2]``."""
    return sum(math.comb(r, k) * e**k * (1 - e) ** (r - k) for k in range(r // 2 + 1, r + 1))


def _qubits_for(size: int) -> int:
    return max(1, math.ceil(math.log2(size)))


def basis_protocol(problem: OneWayProblem, noise: float = 0.0) -> QuantumOneWayProtocol:
    """Alice sends ``|x>`` (optionally depolarized); Bob tests ``f(x, y) = 1``.

    With ``noise = g`` the message is ``(1-g)|x><x| + g I/d``.  Off-domain
    values count as 0 in Bob's test.
    """
    L = _qubits_for(problem.alice_inputs)
    d = 2**L
    if not 0 <= noise <= 1:
        raise ValueError("noise must lie in [0, 1]")

    def encoder(x):
        pure = np.zeros((d, d), dtype=complex)
        pure[x, x] = 1
        return DensityMatrix((1 - noise) * pure + noise * np.eye(d) / d)

    def decoder(y):
        col = problem.table[:, y]
        return measurement_from_predicate(d, np.flatnonzero(col == 1).tolist())

    tag = f"basis[{problem.name}]" + (f"~{noise:g}" if noise else "")
    return QuantumOneWayProtocol(L, encoder, decoder, name=tag)


def random_bit_protocol(problem: OneWayProblem) -> QuantumOneWayProtocol:
    """Bob ignores the message and outputs a fair coin."""
    L = _qubits_for(problem.alice_inputs)
    d = 2**L
    coin = measurement_from_effect(np.eye(d) / 2)

    def encoder(x):
        return basis(x, d).density()

    return QuantumOneWayProtocol(L, encoder, lambda y: coin, name="coin")


def coset_basis_protocol(p: int) -> QuantumOneWayProtocol:
    """Alice sends ``<x, y>`` as a basis state; zero error."""
    if p not in (2, 3, 5, 7):
        raise ProblemError("coset basis protocol supports p in {2, 3, 5, 7}")
    return basis_protocol(coset_problem(p))


# ---------------------------------------------------------------------------
# classical fingerprints


@dataclass(frozen=True)
class FingerprintProtocol:
    """Alice sends ``(p, x mod p)`` for a uniform prime ``p`` in ``[lo, hi]``.

    ``candidates(y)`` lists the Alice inputs Bob would accept on; he accepts
    iff some candidate agrees with the received residue.
    """

    lo: int
    hi: int
    seed: int
    candidates: Callable[[int], Sequence[int]]
    name: str = "fingerprint"

    @cached_property
    def primes(self) -> tuple[int, ...]:
        ps = tuple(primes_in_range(self.lo, self.hi))
        if not ps:
            raise ProblemError(f"no prime in [{self.lo}, {self.hi}]")
        return ps

    @property
    def message_bits(self) -> int:
        """Bits to send ``p`` and ``x mod p``."""
        return 2 * math.ceil(math.log2(self.hi + 1))

    def message(self, x: int, trial: int) -> tuple[int, int]:
        return self.message_with(x, stream(self.seed, trial))

    def message_with(self, x: int, rng: np.random.Generator) -> tuple[int, int]:
        p = self.primes[int(rng.integers(len(self.primes)))]
        return p, x % p

    def decide(self, msg: tuple[int, int], y: int) -> int:
        p, residue = msg
        return int(any(z % p == residue for z in self.candidates(y)))

    def run(self, x: int, y: int, trial: int) -> int:
        return self.decide(self.message(x, trial), y)

    def accept_probability(self, x: int, y: int) -> Fraction:
        """Exact probability over the prime draw."""
        cands = list(self.candidates(y))
        if x in cands:
            return Fraction(1)
        hits = sum(1 for p in self.primes if any((x - z) % p == 0 for z in cands))
        return Fraction(hits, len(self.primes))


def equality_fingerprint(n: int, target_error: float, seed: int = 0) -> FingerprintProtocol:
    """Rabin-Yao fingerprint for ``EQ_n`` with range ``[t n^2, 2 t n^2]``.

    ``t`` is the least power of two for which ``floor(n / log2(t n^2))``
    (the most prime divisors ``>= t n^2`` a nonzero ``|x - y| < 2^n`` can
    have) divided by the number of primes in the range is at most
    ``target_error``.
    """
    if not 1 <= n <= 32:
        raise ProblemError("n must lie in 1..32")
    if not 0 < target_error < 1:
        raise ValueError("target error must lie in (0, 1)")
    t = 1
    while True:
        lo = max(2, t * n * n)
        hi = 2 * lo
        count = len(primes_in_range(lo, hi))
        divisors = math.floor(n / math.log2(lo))
        if count and divisors / count <= target_error:
            break
        t *= 2
    return FingerprintProtocol(lo, hi, seed, lambda y: (y,), name=f"eq-fingerprint:{n}")


def subset_fingerprint(inst: grp.SubsetInstance, seed: int = 0) -> FingerprintProtocol:
    """Prime range ``[|S|^2 log^2 |G|, 2 |S|^2 log^2 |G|]`` (log base 2).

    Bob accepts iff some ``z`` with ``zy in S`` has ``z = x (mod p)``.
    """
    g = inst.group
    if g.order > 4096:
        raise ProblemError("|G| must be at most 4096")
    base = len(inst.S) ** 2 * math.log2(max(2, g.order)) ** 2
    lo = max(2, math.ceil(base))
    hi = max(lo + 1, math.floor(2 * base))
    table = g.table
    s_arr = np.array(inst.S)

    def candidates(y):
        # z y in S  <=>  z = s y^{-1}
        yinv = g.inverses[y]
        return tuple(sorted(int(v) for v in table[s_arr, yinv]))

    return FingerprintProtocol(lo, hi, seed, candidates, name=f"subset-fingerprint:{g.name}")


def subset_message_estimate(inst: grp.SubsetInstance) -> float:
    """Leading-order message size ``log|S|^2 + log log |G|`` in bits."""
    return math.log2(len(inst.S) ** 2) + math.log2(max(1.0, math.log2(inst.group.order)))


# ---------------------------------------------------------------------------
# advice examples


def group_membership_advice(group: grp.FiniteGroup, subgroup: grp.Subgroup, x: int) -> float:
    """Probability the Hadamard test on ``(|0>|H> + |1>|xH>)/sqrt(2)`` reads 0.

    Registers hold group labels in ``R = 2^ceil(log2 |G|)`` dimensions.  The
    controlled branch maps ``|y>|0> -> |y>|xy> -> |0>|xy>`` by XOR-ing
    labels, then swaps the registers so both branches share register one.
    """
    if subgroup.parent is not group:
        raise grp.GroupError("subgroup belongs to a different group")
    if group.order > 512:
        raise ProblemError("|G| must be at most 512")
    n = group.order
    R = 1 << max(0, (n - 1).bit_length())
    adv = uniform_superposition(subgroup.elements, R).amplitudes
    branch = np.zeros((R, R), dtype=complex)
    branch[:, 0] = adv
    r1, r2 = np.meshgrid(np.arange(R), np.arange(R), indexing="ij")
    valid1 = r1 < n
    valid2 = r2 < n
    # step 1: r2 ^= label(x * r1)
    xr1 = np.where(valid1, group.table[x, np.minimum(r1, n - 1)], 0)
    new_r2 = np.where(valid1, r2 ^ xr1, r2)
    branch = _permute(branch, r1, new_r2)
    # step 2: r1 ^= label(x^{-1} * r2)
    xinv = group.inverses[x]
    xr2 = np.where(valid2, group.table[xinv, np.minimum(r2, n - 1)], 0)
    new_r1 = np.where(valid2, r1 ^ xr2, r1)
    branch = _permute(branch, new_r1, r2)
    branch = branch.T  # swap registers
    zero = np.zeros((R, R), dtype=complex)
    zero[:, 0] = adv
    state = np.stack([zero, branch]) / math.sqrt(2)
    after_h = np.stack([state[0] + state[1], state[0] - state[1]]) / math.sqrt(2)
    return float(np.vdot(after_h[0], after_h[0]).real)


def _permute(amps: np.ndarray, to_r1: np.ndarray, to_r2: np.ndarray) -> np.ndarray:
    out = np.zeros_like(amps)
    out[to_r1, to_r2] = amps
    return out


def pqp_advice(truth_table: Sequence[int], x: int) -> Fraction:
    """Exact success probability of the unbounded-error advice algorithm.

    Advice ``2^{-n/2} sum_x |x>|L(x)>`` is measured in the standard basis;
    if the observed index is ``x`` output the observed bit, else a fair coin.
    """
    bits = [int(b) for b in truth_table]
    size = len(bits)
    n = size.bit_length() - 1
    if size != 2**n or n > 8:
        raise ProblemError("truth table length must be 2^n with n <= 8")
    amps = np.zeros(2 * size, dtype=complex)
    for z, b in enumerate(bits):
        amps[2 * z + b] = 2 ** (-n / 2)
    probs = np.abs(amps) ** 2
    weight = Fraction(1, size)  # each outcome |z>|L(z)> has amplitude 2^{-n/2}
    if not np.allclose(probs[probs > 0], float(weight), atol=1e-12):
        raise AssertionError("advice amplitudes inconsistent with uniform weights")
    correct = Fraction(0)
    for idx in np.flatnonzero(probs > 0):
        z, b = divmod(int(idx), 2)
        correct += weight * (Fraction(int(b == bits[x])) if z == x else Fraction(1, 2))
    return correct


# ---------------------------------------------------------------------------
# communication-matrix diagnostics


@dataclass(frozen=True)
class BoundReport:
    problem: str
    measure: str  # D1, R1_2, Q1_2, R1_0, Q1_0, Q1_E
    kind: str  # upper | lower
    value: float
    provenance: str

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("bound value must be nonnegative")
        if self.kind not in ("upper", "lower"):
            raise ValueError(f"bad bound kind {self.kind!r}")

    def to_json(self) -> dict:
        return {
            "problem": self.problem,
            "measure": self.measure,
            "kind": self.kind,
            "value": self.value,
            "provenance": self.provenance,
        }


@dataclass(frozen=True)
class CommMatrix:
    entries: np.ndarray
    rows: int
    cols: int
    vc: int

    @property
    def sauer_sum(self) -> int:
        return sum(math.comb(self.cols, i) for i in range(self.vc + 1))

    @property
    def sauer_holds(self) -> bool:
        # the polynomial form c^(d+1) needs c >= 2: one distinct column
        # still allows two rows
        return self.rows <= self.sauer_sum <= max(2, self.cols) ** (self.vc + 1)


def vc_dimension(matrix: np.ndarray, max_size: int = 20) -> int:
    """Largest number of columns on which the rows realize every pattern."""
    rows = np.unique(np.asarray(matrix, dtype=np.int8), axis=0)
    nrows = rows.shape[0]
    cols = np.unique(rows.T, axis=0)
    # a column constant over all rows can never be shattered
    cols = [c for c in cols if 0 < c.sum() < nrows]
    if not cols:
        return 0
    masks = [sum(1 << int(i) for i in np.flatnonzero(c)) for c in cols]
    full = (1 << nrows) - 1
    ceiling = min(max_size, nrows.bit_length() - 1, len(masks))
    best = 1

    def search(classes, start, depth):
        nonlocal best
        if depth > best:
            best = depth
        if best >= ceiling:
            return True
        # every further column must split every class, so a class of size s
        # allows at most log2(s) more columns
        room = min(cl.bit_count() for cl in classes).bit_length() - 1
        if depth + room <= best:
            return False
        for c in range(start, len(masks)):
            if depth + (len(masks) - c) <= best:
                return False
            m = masks[c]
            split = []
            for cl in classes:
                a, b = cl & m, cl & ~m
                if not a or not b:
                    break
                split += (a, b)
            else:
                if search(split, c + 1, depth + 1):
                    return True
        return False

    search([full], 0, 0)
    return best


def matrix_diagnostics(problem: OneWayProblem, max_vc_columns: int = 20) -> tuple[CommMatrix, list[BoundReport]]:
    """Distinct rows/columns, VC-dimension and the derived bound reports."""
    if not problem.is_total:
        raise ProblemError("matrix diagnostics need a total problem")
    if problem.alice_inputs * problem.bob_inputs > 2**20:
        raise ProblemError("communication matrix larger than 2^20 entries")
    m = problem.table
    rows = int(np.unique(m, axis=0).shape[0])
    cols = int(np.unique(m, axis=1).shape[1])
    vc = vc_dimension(m, max_vc_columns)
    cm = CommMatrix(m, rows, cols, vc)
    d1 = math.ceil(math.log2(rows)) if rows > 1 else 0
    reports = [
        BoundReport(problem.name, "D1", "upper", d1, "send the index of x's row class"),
        BoundReport(problem.name, "D1", "lower", d1, "distinct rows must get distinct messages"),
        BoundReport(problem.name, "Q1_2", "lower", vc, "VC-dimension (random access code bound, constant factor omitted)"),
        BoundReport(
            problem.name,
            "Q1_2",
            "lower",
            math.log2(math.log2(rows)) if rows > 2 else 0.0,
            "log log rows (constant factor omitted)",
        ),
    ]
    return cm, reports


def all_subgroups(group: grp.FiniteGroup) -> list[grp.Subgroup]:
    return [grp.Subgroup(group, tuple(h)) for h in group.subgroups()]


def iter_pairs(problem: OneWayProblem) -> Iterable[tuple[int, int, int]]:
    for x in range(problem.alice_inputs):
        row = problem.row(x)
        for y in np.flatnonzero(row != UNDEFINED).tolist():
            yield x, y, int(row[y])



