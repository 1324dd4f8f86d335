"""Query algorithms on ``X in {0,1}^N`` and their acceptance polynomials."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..qcore import random_unitary
from ..rng import sample_without_replacement, stream
from .markov import direct_product_bound
from .poly import Poly

MAX_REGISTER = 2**12
MAX_ORACLE_BITS = 16


class QueryError(ValueError):
    pass


def _index_unitary(name: str, N: int) -> np.ndarray:
    if name == "fourier":
        k = np.arange(N)
        return np.exp(2j * np.pi * np.outer(k, k) / N) / math.sqrt(N)
    if name == "hadamard":
        if N & (N - 1):
            raise QueryError("hadamard stage needs N a power of two")
        h = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
        out = np.ones((1, 1))
        for _ in range(N.bit_length() - 1):
            out = np.kron(out, h)
        return out.astype(complex)
    if name == "diffusion":
        return 2 * np.full((N, N), 1 / N, dtype=complex) - np.eye(N)
    if name == "shift":
        return np.roll(np.eye(N, dtype=complex), 1, axis=0)
    raise QueryError(f"unknown index stage {name!r}")


@dataclass(frozen=True, eq=False)
class QueryAlgorithm:
    """Alternating unitaries and oracle calls on ``index (N) x workspace (2^w)``.

    Stages are strings:

    * ``query``: phase oracle ``|i, w> -> (-1)^{X_i} |i, w>``;
    * ``bitquery:k``: XOR ``X_i`` into workspace qubit ``k`` (0 = most significant);
    * ``fourier``, ``hadamard``, ``diffusion``, ``shift``: fixed unitaries on the index;
    * ``random:SEED``: a Haar-random unitary on the whole register;

    or a unitary matrix on the whole register.  The acceptance predicate is
    evaluated on the final computational-basis measurement and never looks
    at ``X``: ``always``, ``never``, ``index:i,j,..`` or ``wbit:k``.
    """

    N: int
    stages: tuple
    workspace_qubits: int = 0
    accept: str = "always"
    _ops: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        if not 1 <= self.N <= MAX_ORACLE_BITS:
            raise QueryError(f"N must lie in 1..{MAX_ORACLE_BITS}")
        if self.register_dim > MAX_REGISTER:
            raise QueryError("register too large")
        object.__setattr__(self, "stages", tuple(self.stages))
        self._ops.extend(self._compile_stage(s) for s in self.stages)
        self._accept_mask()

    @property
    def register_dim(self) -> int:
        return self.N * 2**self.workspace_qubits

    @property
    def T(self) -> int:
        return sum(1 for op in self._ops if op[0] in ("query", "bitquery"))

    @classmethod
    def from_description(cls, desc: dict) -> "QueryAlgorithm":
        return cls(int(desc["N"]), tuple(desc["stages"]), int(desc.get("workspace", 0)), desc.get("accept", "always"))

    def _compile_stage(self, stage):
        dim = self.register_dim
        if isinstance(stage, np.ndarray):
            u = np.asarray(stage, dtype=complex)
            if u.shape != (dim, dim) or not np.allclose(u.conj().T @ u, np.eye(dim), atol=1e-9):
                raise QueryError("matrix stage must be a unitary on the whole register")
            return ("full", u)
        kind, _, arg = str(stage).partition(":")
        if kind == "query":
            return ("query", None)
        if kind == "bitquery":
            k = int(arg or 0)
            if not 0 <= k < self.workspace_qubits:
                raise QueryError("bitquery target outside the workspace")
            W = 2**self.workspace_qubits
            return ("bitquery", np.arange(W) ^ (1 << (self.workspace_qubits - 1 - k)))
        if kind == "random":
            return ("full", random_unitary(dim, stream(int(arg or 0), 0)))
        return ("index", _index_unitary(kind, self.N))

    def _accept_mask(self) -> np.ndarray:
        W = 2**self.workspace_qubits
        kind, _, arg = self.accept.partition(":")
        mask = np.zeros((self.N, W), dtype=bool)
        if kind == "always":
            mask[:] = True
        elif kind == "never":
            pass
        elif kind == "index":
            idx = [int(t) for t in arg.split(",") if t.strip()]
            if any(not 0 <= i < self.N for i in idx):
                raise QueryError("accepted index out of range")
            mask[idx, :] = True
        elif kind == "wbit":
            k = int(arg or 0)
            if not 0 <= k < self.workspace_qubits:
                raise QueryError("accepted workspace bit out of range")
            mask[:, (np.arange(W) >> (self.workspace_qubits - 1 - k)) & 1 == 1] = True
        else:
            raise QueryError(f"unknown accept predicate {self.accept!r}")
        return mask

    def acceptance(self, X) -> np.ndarray:
        """``A(X)`` for a batch of oracle strings (rows of ``X``)."""
        X = np.atleast_2d(np.asarray(X, dtype=bool))
        if X.shape[1] != self.N:
            raise QueryError(f"oracle strings must have length {self.N}")
        B, W = X.shape[0], 2**self.workspace_qubits
        state = np.zeros((B, self.N, W), dtype=complex)
        state[:, 0, 0] = 1
        sign = np.where(X, -1.0, 1.0)[:, :, None]
        for kind, op in self._ops:
            if kind == "query":
                state = state * sign
            elif kind == "bitquery":
                state = np.where(X[:, :, None], state[:, :, op], state)
            elif kind == "index":
                state = np.einsum("ij,bjw->biw", op, state)
            else:
                state = (state.reshape(B, -1) @ op.T).reshape(B, self.N, W)
        probs = np.abs(state) ** 2
        return probs[:, self._accept_mask()].sum(axis=1)


def weight_averages(alg: QueryAlgorithm, batch: int = 4096) -> list[float]:
    """``EX_{|X| = i}[A(X)]`` for ``i = 0..N`` by exhaustive enumeration."""
    N = alg.N
    totals = np.zeros(N + 1)
    counts = np.zeros(N + 1, dtype=np.int64)
    bits = 1 << np.arange(N - 1, -1, -1)
    for start in range(0, 2**N, batch):
        ints = np.arange(start, min(2**N, start + batch))
        X = (ints[:, None] & bits) > 0
        w = X.sum(axis=1)
        acc = alg.acceptance(X)
        np.add.at(totals, w, acc)
        np.add.at(counts, w, 1)
    return (totals / counts).tolist()


@dataclass(frozen=True)
class AcceptancePolynomial:
    poly: Poly
    values: tuple[float, ...]
    T: int

    @property
    def degree(self) -> int:
        return self.poly.degree


def acceptance_polynomial(alg: QueryAlgorithm, tol: float = 1e-9) -> AcceptancePolynomial:
    """The polynomial through the weight averages, truncated at ``tol``.

    Averages are rationalized with denominators up to ``2^40`` so that the
    interpolation itself is exact.
    """
    values = weight_averages(alg)
    if any(v < -tol or v > 1 + tol for v in values):
        raise AssertionError("acceptance averages outside [0, 1]")
    rats = [Fraction(v).limit_denominator(2**40) for v in values]
    p = Poly.interpolate(range(alg.N + 1), rats).truncate(tol)
    if p.degree > 2 * alg.T:
        raise AssertionError(f"acceptance polynomial has degree {p.degree} > 2T = {2 * alg.T}")
    return AcceptancePolynomial(p, tuple(values), alg.T)


def grover_algorithm(N: int, iterations: int) -> QueryAlgorithm:
    """Grover search followed by one bit query that checks the answer."""
    stages = ["fourier"] + ["query", "diffusion"] * iterations + ["bitquery:0"]
    return QueryAlgorithm(N, tuple(stages), workspace_qubits=1, accept="wbit:0")


# ---------------------------------------------------------------------------
# finding every marked item


def optimal_schedule(N: int, K: int) -> list[int]:
    out = []
    for s in range(K):
        theta = math.asin(math.sqrt((K - s) / N))
        out.append(max(0, round(math.pi / (4 * theta) - 0.5)))
    return out


def _normalize_schedule(schedule, K: int) -> list[int]:
    if isinstance(schedule, int):
        return [schedule] * K
    sched = [int(t) for t in schedule]
    if len(sched) != K:
        raise QueryError(f"schedule needs {K} stages, got {len(sched)}")
    if any(t < 0 for t in sched):
        raise QueryError("iteration counts must be nonnegative")
    return sched


def exact_find_all(N: int, K: int, schedule) -> float:
    """``prod_s sin^2((2 t_s + 1) theta_s)`` with ``sin^2 theta_s = (K - s)/N``."""
    sched = _normalize_schedule(schedule, K)
    out = 1.0
    for s, t in enumerate(sched):
        theta = math.asin(math.sqrt((K - s) / N))
        out *= math.sin((2 * t + 1) * theta) ** 2
    return out


def find_all_trial(N: int, K: int, schedule: Sequence[int], seed: int, index: int) -> bool:
    """One run: draw the marked set, then ``K`` amplitude-amplification stages
    whose oracle marks the marked items not yet guessed."""
    rng = stream(seed, index)
    marked = np.zeros(N, dtype=bool)
    marked[sample_without_replacement(rng, N, K)] = True
    guessed = np.zeros(N, dtype=bool)
    uniform = np.full(N, 1 / math.sqrt(N))
    for t in schedule:
        sign = np.where(marked & ~guessed, -1.0, 1.0)
        psi = uniform.copy()
        for _ in range(t):
            psi = sign * psi
            psi = 2 * psi.mean() - psi
        probs = psi**2
        guess = int(rng.choice(N, p=probs / probs.sum()))
        guessed[guess] = True
    return bool((guessed == marked).all())


@dataclass(frozen=True)
class FindAllReport:
    N: int
    K: int
    schedule: tuple[int, ...]
    trials: int
    seed: int
    successes: int
    exact: float

    @property
    def T_search(self) -> int:
        return sum(self.schedule)

    @property
    def T_total(self) -> int:
        """Search queries plus one query per item to confirm it."""
        return self.T_search + self.K

    @property
    def empirical(self) -> float:
        return self.successes / self.trials if self.trials else 1.0

    @property
    def standard_error(self) -> float:
        p = self.empirical
        return math.sqrt(p * (1 - p) / self.trials) if self.trials else 0.0

    @property
    def bound(self) -> float:
        return direct_product_bound(self.N, self.K, self.T_total)

    @property
    def verdict(self) -> bool:
        return self.empirical <= self.bound + 4 * self.standard_error

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "K": self.K,
            "schedule": list(self.schedule),
            "trials": self.trials,
            "seed": self.seed,
            "successes": self.successes,
            "empirical": self.empirical,
            "standard_error": self.standard_error,
            "exact": self.exact,
            "T_search": self.T_search,
            "T_total": self.T_total,
            "bound": self.bound,
            "bound_search_only": direct_product_bound(self.N, self.K, self.T_search),
            "verdict": self.verdict,
        }


def grover_find_all(N: int, K: int, schedule, seed: int = 0, trials: int = 10_000, budget: int | None = None) -> FindAllReport:
    if not 1 <= N <= 2**10:
        raise QueryError("N must lie in 1..1024")
    if not 0 <= K <= min(8, N):
        raise QueryError("K must lie in 0..min(8, N)")
    sched = _normalize_schedule(schedule, K)
    if budget is not None and sum(sched) > budget:
        raise QueryError(f"schedule uses {sum(sched)} queries, budget is {budget}")
    wins = sum(find_all_trial(N, K, sched, seed, i) for i in range(trials))
    return FindAllReport(N, K, tuple(sched), trials, seed, wins, exact_find_all(N, K, sched))


def constructed_algorithms() -> list[QueryAlgorithm]:
    """A fixed zoo used by tests and the diagnostics command."""
    return [
        QueryAlgorithm(4, (), accept="always"),
        QueryAlgorithm(4, ("bitquery:0",), workspace_qubits=1, accept="wbit:0"),
        grover_algorithm(4, 1),
        grover_algorithm(8, 1),
        grover_algorithm(8, 2),
        QueryAlgorithm(8, ("hadamard", "query", "hadamard"), accept="index:0"),
        QueryAlgorithm(6, ("fourier", "query", "fourier", "query", "fourier"), accept="index:0,3"),
        QueryAlgorithm(4, ("bitquery:0", "shift", "bitquery:1"), workspace_qubits=2, accept="wbit:1"),
        QueryAlgorithm(5, ("random:1", "query", "random:2"), workspace_qubits=1, accept="index:0,1"),
        QueryAlgorithm(5, ("random:3", "query", "random:4", "query", "random:5"), workspace_qubits=1, accept="wbit:0"),
        QueryAlgorithm(
            6, ("random:6", "bitquery:0", "random:7", "query", "random:8", "bitquery:1", "random:9"), workspace_qubits=2, accept="index:2"
        ),
        QueryAlgorithm(8, ("fourier", "query", "diffusion", "query", "diffusion", "query", "random:10"), accept="index:1,5"),
    ]


__all__ = [
    "QueryAlgorithm",
    "QueryError",
    "AcceptancePolynomial",
    "acceptance_polynomial",
    "weight_averages",
    "grover_algorithm",
    "optimal_schedule",
    "exact_find_all",
    "find_all_trial",
    "FindAllReport",
    "grover_find_all",
    "constructed_algorithms",
]
