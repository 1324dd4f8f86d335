"""Dense finite-dimensional quantum states and two-outcome measurements.

Every measurement is a two-outcome instrument whose outcome ``b`` maps a
state ``rho`` to ``sum_j K[b][j] rho K[b][j]^dagger``.  The Kraus operators
come from a unitary dilation: attach ancilla qubits in ``|0...0>``, apply the
unitary, project the designated output qubit onto ``b``, apply the inverse
unitary (uncomputing the garbage) and trace the ancillas out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

ATOL = 1e-9
MAX_DIM = 2**10
MAX_PURE_DIM = 2**20


class StateError(ValueError):
    """Raised when a matrix or vector violates a state invariant."""


class DimensionError(ValueError):
    """Raised on mismatched or unsupported dimensions."""


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def qubit_count(dim: int) -> int | None:
    """Number of qubits for a power-of-two dimension, else ``None``."""
    return dim.bit_length() - 1 if _is_power_of_two(dim) else None


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Positive semidefinite, unit-trace Hermitian matrix.

    Eigenvalues in ``[-1e-9, 0)`` are tolerated; anything more negative is
    rejected.  The stored array is read-only.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise StateError(f"density matrix must be square, got shape {m.shape}")
        if m.shape[0] > MAX_DIM:
            raise DimensionError(f"dimension {m.shape[0]} exceeds maximum {MAX_DIM}")
        if not np.allclose(m, m.conj().T, atol=ATOL, rtol=0):
            raise StateError("matrix is not Hermitian")
        m = (m + m.conj().T) / 2
        tr = np.trace(m).real
        if abs(tr - 1) > ATOL:
            raise StateError(f"trace {tr!r} differs from 1")
        lo = np.linalg.eigvalsh(m)[0]
        if lo < -ATOL:
            raise StateError(f"negative eigenvalue {lo!r}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def qubit_count(self) -> int | None:
        return qubit_count(self.dim)

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in ascending order, tiny negatives clipped to 0."""
        w = np.linalg.eigvalsh(self.matrix)
        return np.where((w < 0) & (w >= -ATOL), 0.0, w)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def tensor(self, other: "DensityMatrix") -> "DensityMatrix":
        return DensityMatrix(np.kron(self.matrix, other.matrix))

    def to_json(self) -> dict:
        return matrix_to_json(self.matrix)

    @classmethod
    def from_json(cls, data: dict) -> "DensityMatrix":
        return cls(matrix_from_json(data))

    @classmethod
    def from_pure(cls, state: "PureState") -> "DensityMatrix":
        v = state.amplitudes
        return cls(np.outer(v, v.conj()))


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector of complex amplitudes."""

    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if v.size < 1:
            raise StateError("empty state vector")
        if v.size > MAX_PURE_DIM:
            raise DimensionError(f"dimension {v.size} exceeds maximum {MAX_PURE_DIM}")
        norm2 = float(np.vdot(v, v).real)
        if abs(norm2 - 1) > ATOL:
            raise StateError(f"squared norm {norm2!r} differs from 1")
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> DensityMatrix:
        return DensityMatrix.from_pure(self)

    def overlap(self, other: "PureState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "entries": [[float(a.real), float(a.imag)] for a in self.amplitudes],
        }


def matrix_to_json(m: np.ndarray) -> dict:
    return {
        "dim": int(m.shape[0]),
        "entries": [[float(a.real), float(a.imag)] for a in np.asarray(m).reshape(-1)],
    }


def matrix_from_json(data: dict) -> np.ndarray:
    dim = int(data["dim"])
    flat = np.array([complex(re, im) for re, im in data["entries"]])
    if flat.size != dim * dim:
        raise StateError(f"expected {dim * dim} entries, got {flat.size}")
    return flat.reshape(dim, dim)


# ---------------------------------------------------------------------------
# state construction


def basis(index: int, dim: int) -> PureState:
    if dim < 1:
        raise DimensionError("dim must be positive")
    if not 0 <= index < dim:
        raise IndexError(f"basis index {index} out of range for dim {dim}")
    v = np.zeros(dim, dtype=complex)
    v[index] = 1
    return PureState(v)


def maximally_mixed(qubits: int) -> DensityMatrix:
    """The ``qubits``-qubit maximally mixed state ``I / 2**qubits``."""
    if qubits < 0:
        raise DimensionError("qubit count must be nonnegative")
    dim = 2**qubits
    return DensityMatrix(np.eye(dim, dtype=complex) / dim)


def uniform_superposition(subset: Sequence[int], dim: int) -> PureState:
    """Equal superposition over the basis states listed in ``subset``."""
    idx = sorted(set(int(i) for i in subset))
    if not idx:
        raise StateError("subset must be nonempty")
    if idx[0] < 0 or idx[-1] >= dim:
        raise IndexError("subset element out of range")
    v = np.zeros(dim, dtype=complex)
    v[idx] = 1 / math.sqrt(len(idx))
    return PureState(v)


def make_state(kind: str, *args):
    """Dispatch on ``basis``, ``maximally_mixed`` or ``uniform_superposition``."""
    builders = {
        "basis": basis,
        "maximally_mixed": maximally_mixed,
        "uniform_superposition": uniform_superposition,
    }
    try:
        return builders[kind](*args)
    except KeyError:
        raise ValueError(f"unknown state kind {kind!r}") from None


def as_density(state) -> DensityMatrix:
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, PureState):
        return state.density()
    return DensityMatrix(state)


# ---------------------------------------------------------------------------
# metrics and reductions


def trace_distance(rho, sigma) -> float:
    """Half the sum of absolute eigenvalues of ``rho - sigma``."""
    a = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    b = sigma.matrix if isinstance(sigma, DensityMatrix) else np.asarray(sigma)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    diff = (diff + diff.conj().T) / 2
    return float(min(1.0, 0.5 * np.abs(np.linalg.eigvalsh(diff)).sum()))


def partial_trace(rho, factor_dims: Sequence[int], keep: Sequence[int]) -> DensityMatrix:
    """Trace out every factor not listed in ``keep``.

    ``factor_dims`` lists the tensor factors in order (first factor most
    significant).  Kept factors stay in their original order.
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    dims = [int(d) for d in factor_dims]
    if math.prod(dims) != m.shape[0]:
        raise DimensionError(f"factor dims {dims} do not multiply to {m.shape[0]}")
    keep = sorted(set(keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionError(f"keep indices {keep} out of range")
    return DensityMatrix(_ptrace(m, dims, keep))


def _ptrace(m: np.ndarray, dims: list[int], keep: list[int]) -> np.ndarray:
    n = len(dims)
    t = m.reshape(dims + dims)
    drop = [i for i in range(n) if i not in keep]
    # contract each dropped row index with its column partner
    letters = [chr(ord("a") + i) for i in range(2 * n)]
    row, col = letters[:n], letters[n:]
    for i in drop:
        col[i] = row[i]
    out = [row[i] for i in keep] + [col[i] for i in keep]
    t = np.einsum("".join(row + col) + "->" + "".join(out), t)
    d = math.prod(dims[i] for i in keep) if keep else 1
    return t.reshape(d, d)


def purify(rho) -> PureState:
    """A purification on ``system (x) reference`` with reference dim = dim.

    Tracing out the second factor of the returned vector gives back ``rho``.
    """
    rho = as_density(rho)
    w, v = np.linalg.eigh(rho.matrix)
    w = np.clip(w, 0, None)
    w = w / w.sum()
    d = rho.dim
    psi = np.zeros(d * d, dtype=complex)
    for k in range(d):
        if w[k] > 0:
            psi += math.sqrt(w[k]) * np.kron(v[:, k], basis(k, d).amplitudes)
    return PureState(psi / np.linalg.norm(psi))


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Induced-measure random state (Ginibre ``G G^dagger`` normalized)."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_pure_state(dim: int, rng: np.random.Generator) -> PureState:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return PureState(v / np.linalg.norm(v))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


# ---------------------------------------------------------------------------
# measurements


class TwoOutcomeMeasurement:
    """Abstract two-outcome instrument on a ``system_dim``-dimensional system.

    Subclasses provide :meth:`kraus`.  Effects, probabilities and
    post-measurement states derive from it.
    """

    system_dim: int

    def labeled_kraus(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Pairs ``(K0_j, K1_j)`` sharing the ancilla label ``j``."""
        raise NotImplementedError

    def kraus(self, outcome: int) -> list[np.ndarray]:
        return [pair[outcome] for pair in self.labeled_kraus() if np.abs(pair[outcome]).max() > 1e-14]

    def effect(self, outcome: int) -> np.ndarray:
        """POVM element ``sum_j K_j^dagger K_j`` for ``outcome``."""
        cache = self.__dict__.setdefault("_effects", {})  # frozen dataclasses still own a __dict__
        if outcome not in cache:
            d = self.system_dim
            e = np.zeros((d, d), dtype=complex)
            for k in self.kraus(outcome):
                e += k.conj().T @ k
            e = (e + e.conj().T) / 2
            e.setflags(write=False)
            cache[outcome] = e
        return cache[outcome]

    def probability(self, rho, outcome: int) -> float:
        m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
        if m.shape[0] != self.system_dim:
            raise DimensionError(f"state dim {m.shape[0]} != measurement dim {self.system_dim}")
        p = float(np.real(np.sum(self.effect(outcome).T * m)))
        return min(1.0, max(0.0, p))

    def branch(self, rho, outcome: int) -> np.ndarray:
        """Unnormalized post-measurement matrix for ``outcome``."""
        m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
        if m.shape[0] != self.system_dim:
            raise DimensionError(f"state dim {m.shape[0]} != measurement dim {self.system_dim}")
        out = np.zeros_like(m, dtype=complex)
        for k in self.kraus(outcome):
            out += k @ m @ k.conj().T
        return out


def _kraus_from_dilation(unitary: np.ndarray, system_dim: int, ancilla_qubits: int, mask1: np.ndarray):
    """Label-aligned Kraus pairs of measure-then-uncompute."""
    da = 2**ancilla_qubits
    ops = []
    for b in (0, 1):
        proj = mask1 if b else ~mask1
        # V = U^dagger Pi_b U restricted to input ancilla |0>
        v = unitary.conj().T @ (proj[:, None] * unitary[:, ::da])
        ops.append(v.reshape(system_dim, da, system_dim))
    pairs = [(ops[0][:, j, :], ops[1][:, j, :]) for j in range(da)]
    return [p for p in pairs if max(np.abs(p[0]).max(), np.abs(p[1]).max()) > 1e-14]


@dataclass(frozen=True, eq=False)
class DilatedMeasurement(TwoOutcomeMeasurement):
    """Measurement realized as a unitary on ``system (x) ancilla`` qubits.

    Basis index of the joint register is ``s * 2**ancilla_qubits + a``.
    Qubits are numbered big-endian over the whole register; a system whose
    dimension is not a power of two counts as zero qubits, so then the
    output qubit must be an ancilla.
    """

    unitary: np.ndarray
    system_dim: int
    ancilla_qubits: int
    output_qubit: int

    def __post_init__(self):
        u = np.array(self.unitary, dtype=complex)
        total = self.system_dim * 2**self.ancilla_qubits
        if u.shape != (total, total):
            raise DimensionError(f"unitary shape {u.shape} does not match register dim {total}")
        if not np.allclose(u.conj().T @ u, np.eye(total), atol=ATOL, rtol=0):
            raise StateError("dilation is not unitary")
        n_sys = qubit_count(self.system_dim) or 0
        n_total = n_sys + self.ancilla_qubits
        if not 0 <= self.output_qubit < n_total:
            raise DimensionError(f"output qubit {self.output_qubit} outside register of {n_total} qubits")
        u.setflags(write=False)
        object.__setattr__(self, "unitary", u)

    @property
    def register_dim(self) -> int:
        return self.system_dim * 2**self.ancilla_qubits

    def outcome_mask(self) -> np.ndarray:
        """Boolean vector: joint basis states whose output qubit reads 1."""
        n_sys = qubit_count(self.system_dim) or 0
        shift = n_sys + self.ancilla_qubits - 1 - self.output_qubit
        idx = np.arange(self.register_dim)
        return ((idx >> shift) & 1).astype(bool)

    def labeled_kraus(self):
        cache = self.__dict__.get("_kraus")
        if cache is None:
            cache = _kraus_from_dilation(self.unitary, self.system_dim, self.ancilla_qubits, self.outcome_mask())
            self.__dict__["_kraus"] = cache
        return cache


@dataclass(frozen=True, eq=False)
class MajorityMeasurement(TwoOutcomeMeasurement):
    """Coherent majority vote over measurements on independent copies.

    The dilation is each copy's own dilation followed by a reversible
    majority of the output qubits into one fresh qubit, which is the
    designated output.  Because each part acts on its own factor, the Kraus
    operators for majority outcome ``m`` are ``sum_{b: maj(b)=m} (x)_i K[b_i]``
    and never require the joint unitary to be materialized.
    """

    parts: tuple

    def __post_init__(self):
        if len(self.parts) % 2 == 0:
            raise ValueError("majority vote needs an odd number of parts")
        object.__setattr__(self, "parts", tuple(self.parts))

    @property
    def system_dim(self) -> int:
        return math.prod(p.system_dim for p in self.parts)

    def labeled_kraus(self):
        cache = self.__dict__.get("_kraus")
        if cache is None:
            cache = self._build()
            self.__dict__["_kraus"] = cache
        return cache

    def _build(self):
        r = len(self.parts)
        labeled = [part.labeled_kraus() for part in self.parts]
        patterns = {m: [bits for bits in product((0, 1), repeat=r) if (2 * sum(bits) > r) == bool(m)] for m in (0, 1)}
        pairs = []
        for labels in product(*[range(len(lk)) for lk in labeled]):
            ops = []
            for m in (0, 1):
                acc = 0
                for bits in patterns[m]:
                    term = np.ones((1, 1), dtype=complex)
                    for i, (b, j) in enumerate(zip(bits, labels)):
                        term = np.kron(term, labeled[i][j][b])
                    acc = acc + term
                ops.append(acc)
            if max(np.abs(ops[0]).max(), np.abs(ops[1]).max()) > 1e-14:
                pairs.append((ops[0], ops[1]))
        return pairs

    def dilation(self) -> DilatedMeasurement:
        """Materialize the joint dilation (only for small registers)."""
        parts = [p if isinstance(p, DilatedMeasurement) else None for p in self.parts]
        if any(p is None for p in parts):
            raise TypeError("all parts must be DilatedMeasurement to build an explicit dilation")
        return _majority_dilation(parts)


def _majority_dilation(parts: list[DilatedMeasurement]) -> DilatedMeasurement:
    r = len(parts)
    sys_dims = [p.system_dim for p in parts]
    anc = [p.ancilla_qubits for p in parts]
    d_sys = math.prod(sys_dims)
    n_anc = sum(anc) + 1
    total = d_sys * 2**n_anc
    if total > 2**14:
        raise DimensionError(f"explicit majority dilation of dim {total} is too large")
    # register order: S_1..S_r, A_1..A_r, majority qubit
    dims = sys_dims + [2**a for a in anc] + [2]
    nfac = len(dims)
    u = np.eye(total, dtype=complex).reshape(dims + [total])
    for i, p in enumerate(parts):
        ui = p.unitary.reshape([p.system_dim, 2**p.ancilla_qubits] * 2)
        # ui[s', a', s, a] acting on factors i (system) and r+i (ancilla)
        letters = [chr(ord("a") + k) for k in range(nfac)]
        inp = letters.copy()
        out = letters.copy()
        out[i], out[r + i] = "X", "Y"
        expr = f"XY{letters[i]}{letters[r + i]}," + "".join(inp) + "Z->" + "".join(out) + "Z"
        u = np.einsum(expr, ui, u)
    u = u.reshape(total, total)
    # majority permutation on output bits
    idx = np.arange(total)
    digits = np.unravel_index(idx, dims)
    bits = []
    for i, p in enumerate(parts):
        mask = p.outcome_mask().reshape(p.system_dim, 2**p.ancilla_qubits)
        bits.append(mask[digits[i], digits[r + i]])
    maj = (np.sum(bits, axis=0) * 2 > r).astype(int)
    flipped = list(digits)
    flipped[-1] = digits[-1] ^ maj
    perm = np.ravel_multi_index(flipped, dims)
    pm = np.zeros((total, total))
    pm[perm, idx] = 1
    full = pm @ u
    # system factors first then ancillas; output qubit is the last one
    n_sys_q = qubit_count(d_sys) or 0
    return DilatedMeasurement(full, d_sys, n_anc, n_sys_q + n_anc - 1)


def measurement_from_predicate(dim: int, accept) -> DilatedMeasurement:
    """Projective test of ``s in accept`` realized with one ancilla qubit.

    Maps ``|s, a> -> |s, a xor [s in accept]>`` and reads the ancilla.
    """
    acc = np.zeros(dim, dtype=bool)
    for s in accept:
        acc[int(s)] = True
    total = 2 * dim
    u = np.zeros((total, total), dtype=complex)
    for s in range(dim):
        for a in (0, 1):
            u[2 * s + (a ^ int(acc[s])), 2 * s + a] = 1
    n_sys = qubit_count(dim) or 0
    return DilatedMeasurement(u, dim, 1, n_sys)


def measurement_from_effect(effect: np.ndarray) -> DilatedMeasurement:
    """Naimark dilation of the POVM ``{I - E, E}`` with one ancilla.

    ``U = [[sqrt(I-E), -sqrt(E)], [sqrt(E), sqrt(I-E)]]`` in ancilla-block
    form, reordered to the ``s * 2 + a`` register convention.
    """
    e = np.asarray(effect, dtype=complex)
    d = e.shape[0]
    w, v = np.linalg.eigh((e + e.conj().T) / 2)
    if w[0] < -ATOL or w[-1] > 1 + ATOL:
        raise StateError("effect must satisfy 0 <= E <= I")
    w = np.clip(w, 0, 1)
    a = (v * np.sqrt(1 - w)) @ v.conj().T
    b = (v * np.sqrt(w)) @ v.conj().T
    block = np.block([[a, -b], [b, a]])
    order = np.array([s + d * anc for s in range(d) for anc in (0, 1)])
    u = block[np.ix_(order, order)]
    n_sys = qubit_count(d) or 0
    return DilatedMeasurement(u, d, 1, n_sys)


def random_measurement(dim: int, rng: np.random.Generator, ancilla_qubits: int = 1) -> DilatedMeasurement:
    n_sys = qubit_count(dim) or 0
    if n_sys + ancilla_qubits == 0:
        ancilla_qubits = 1
    u = random_unitary(dim * 2**ancilla_qubits, rng)
    out = int(rng.integers(n_sys + ancilla_qubits))
    return DilatedMeasurement(u, dim, ancilla_qubits, out)


def apply_measurement(rho, meas: TwoOutcomeMeasurement):
    """Outcome probabilities and normalized post-measurement states.

    A zero-probability branch gets ``None`` as its post-state.
    """
    rho = as_density(rho)
    if rho.dim != meas.system_dim:
        raise DimensionError(f"state dim {rho.dim} != measurement dim {meas.system_dim}")
    probs, posts = [], []
    for b in (0, 1):
        br = meas.branch(rho, b)
        p = float(np.real(np.trace(br)))
        probs.append(max(0.0, p))
        posts.append(DensityMatrix(br / p) if p > 1e-12 else None)
    total = probs[0] + probs[1]
    if abs(total - 1) > ATOL:
        raise StateError(f"outcome probabilities sum to {total!r}")
    return probs[0], probs[1], posts[0], posts[1]


@dataclass(frozen=True)
class RecoveryResult:
    epsilon: float
    recovered: DensityMatrix
    intermediate_distance: float
    distance: float

    @property
    def bound(self) -> float:
        return math.sqrt(self.epsilon)


def measure_and_recover(rho, meas: DilatedMeasurement) -> RecoveryResult:
    """Measure, then undo the dilation on the dephased joint state.

    Follows the construction step by step: purify ``rho``, apply the
    dilation to ``|psi>|0_anc>``, split into the normalized branches
    ``phi_0, phi_1``, form ``sigma = (1-eps) phi_0 phi_0^+ + eps phi_1 phi_1^+``,
    apply the inverse unitary and trace out ancilla and reference.
    ``epsilon`` is the probability of outcome 1.
    """
    rho = as_density(rho)
    d = rho.dim
    if d != meas.system_dim:
        raise DimensionError(f"state dim {d} != measurement dim {meas.system_dim}")
    da = 2**meas.ancilla_qubits
    psi = purify(rho).amplitudes.reshape(d, d)  # [system, reference]
    joint = np.zeros((d, da, d), dtype=complex)
    joint[:, 0, :] = psi
    joint = joint.reshape(d * da, d)  # rows: register, cols: reference
    rotated = meas.unitary @ joint
    mask = meas.outcome_mask()
    branches = [np.where(mask[:, None], 0, rotated), np.where(mask[:, None], rotated, 0)]
    weights = [float(np.vdot(b, b).real) for b in branches]
    eps = weights[1]
    full = rotated.reshape(-1)
    sigma = np.zeros((full.size, full.size), dtype=complex)
    for w, b in zip(weights, branches):
        if w > 0:
            phi = b.reshape(-1) / math.sqrt(w)
            sigma += w * np.outer(phi, phi.conj())
    before = np.outer(full, full.conj())
    intermediate = trace_distance(sigma, before)
    # U^{-1} on the register factor, identity on the reference
    big_u = np.kron(meas.unitary, np.eye(d))
    back = big_u.conj().T @ sigma @ big_u
    recovered = DensityMatrix(_ptrace(back, [d, da, d], [0]))
    return RecoveryResult(eps, recovered, intermediate, trace_distance(recovered, rho))
