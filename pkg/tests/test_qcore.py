"""States, metrics, instruments and measure-and-recover."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qadvice import qcore as qc
from qadvice.rng import stream


def diag(p):
    return qc.DensityMatrix(np.diag(np.asarray(p, dtype=complex)))


def test_density_validation():
    with pytest.raises(qc.StateError):
        qc.DensityMatrix(np.eye(2))  # trace 2
    with pytest.raises(qc.StateError):
        qc.DensityMatrix(np.array([[0.5, 1], [0, 0.5]]))  # not Hermitian
    with pytest.raises(qc.StateError):
        qc.DensityMatrix(np.diag([1.5, -0.5]))
    with pytest.raises(qc.StateError):
        qc.PureState([1, 1])
    with pytest.raises(qc.DimensionError):
        qc.DensityMatrix(np.eye(2**11) / 2**11)


def test_constructors():
    assert qc.basis(2, 4).amplitudes[2] == 1
    with pytest.raises(IndexError):
        qc.basis(4, 4)
    mm = qc.maximally_mixed(2)
    assert np.allclose(mm.matrix, np.eye(4) / 4)
    assert mm.purity() == pytest.approx(0.25)
    u = qc.uniform_superposition([0, 3], 4)
    assert np.allclose(np.abs(u.amplitudes) ** 2, [0.5, 0, 0, 0.5])
    assert qc.make_state("basis", 1, 2).dim == 2
    with pytest.raises(ValueError):
        qc.make_state("ghz", 3)


def test_json_round_trip():
    rho = qc.random_density_matrix(3, stream(1))
    back = qc.DensityMatrix.from_json(rho.to_json())
    assert np.allclose(back.matrix, rho.matrix)


def test_trace_distance_known_values():
    # commuting states reduce to half the l1 distance of the spectra
    assert qc.trace_distance(diag([0.7, 0.3]), diag([0.2, 0.8])) == pytest.approx(0.5)
    # pure states: sqrt(1 - |<a|b>|^2)
    a = qc.basis(0, 2)
    b = qc.PureState([1 / math.sqrt(2), 1 / math.sqrt(2)])
    assert qc.trace_distance(a.density(), b.density()) == pytest.approx(math.sqrt(0.5))
    with pytest.raises(qc.DimensionError):
        qc.trace_distance(np.eye(2) / 2, np.eye(3) / 3)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 6))
def test_trace_distance_metric(seed, dim):
    rng = stream(seed)
    r, s, t = (qc.random_density_matrix(dim, rng) for _ in range(3))
    d_rs = qc.trace_distance(r, s)
    assert 0 <= d_rs <= 1
    assert d_rs == pytest.approx(qc.trace_distance(s, r), abs=1e-12)
    assert d_rs <= qc.trace_distance(r, t) + qc.trace_distance(t, s) + 1e-12
    # unitary invariance
    u = qc.random_unitary(dim, rng)
    assert qc.trace_distance(u @ r.matrix @ u.conj().T, u @ s.matrix @ u.conj().T) == pytest.approx(d_rs, abs=1e-9)


def test_pure_distance_formula():
    rng = stream(3)
    for _ in range(20):
        a, b = qc.random_pure_state(5, rng), qc.random_pure_state(5, rng)
        expect = math.sqrt(max(0.0, 1 - abs(a.overlap(b)) ** 2))
        assert qc.trace_distance(a.density(), b.density()) == pytest.approx(expect, abs=1e-9)


def test_partial_trace_of_product():
    rng = stream(4)
    a, b, c = qc.random_density_matrix(2, rng), qc.random_density_matrix(3, rng), qc.random_density_matrix(2, rng)
    abc = a.tensor(b).tensor(c)
    assert np.allclose(qc.partial_trace(abc, [2, 3, 2], [0]).matrix, a.matrix)
    assert np.allclose(qc.partial_trace(abc, [2, 3, 2], [1]).matrix, b.matrix)
    assert np.allclose(qc.partial_trace(abc, [2, 3, 2], [0, 2]).matrix, a.tensor(c).matrix)
    assert np.allclose(qc.partial_trace(abc, [2, 3, 2], []).matrix, [[1]])
    with pytest.raises(qc.DimensionError):
        qc.partial_trace(abc, [2, 2, 2], [0])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 8), st.integers(1, 8))
def test_purification_reduces_back(seed, dim, rank):
    rho = qc.random_density_matrix(dim, stream(seed), rank=min(rank, dim))
    psi = qc.purify(rho)
    assert psi.dim == dim * dim
    back = qc.partial_trace(psi.density(), [dim, dim], [0])
    assert qc.trace_distance(back, rho) < 1e-9


def test_predicate_measurement_probabilities():
    meas = qc.measurement_from_predicate(4, [1, 3])
    rho = diag([0.1, 0.2, 0.3, 0.4])
    assert meas.probability(rho, 1) == pytest.approx(0.6)
    p0, p1, post0, post1 = qc.apply_measurement(rho, meas)
    assert p0 + p1 == pytest.approx(1)
    assert np.allclose(post1.matrix, np.diag([0, 1 / 3, 0, 2 / 3]))
    never = qc.measurement_from_predicate(2, [])
    assert qc.apply_measurement(qc.basis(0, 2), never)[3] is None


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 8), st.integers(0, 2))
def test_kraus_completeness(seed, dim, anc):
    meas = qc.random_measurement(dim, stream(seed), ancilla_qubits=anc)
    total = meas.effect(0) + meas.effect(1)
    assert np.allclose(total, np.eye(dim), atol=1e-9)
    for b in (0, 1):
        w = np.linalg.eigvalsh(meas.effect(b))
        assert w.min() > -1e-9 and w.max() < 1 + 1e-9


def test_effect_dilation_reproduces_effect():
    rng = stream(5)
    g = qc.random_density_matrix(3, rng).matrix
    e = g / np.linalg.eigvalsh(g).max() * 0.9
    meas = qc.measurement_from_effect(e)
    assert np.allclose(meas.effect(1), e, atol=1e-9)
    with pytest.raises(qc.StateError):
        qc.measurement_from_effect(2 * np.eye(2))


def test_majority_matches_binomial():
    # on a product state the majority of three independent outcomes fires
    # with probability 3p^2 - 2p^3
    rng = stream(6)
    meas = qc.random_measurement(2, rng)
    rho = qc.random_density_matrix(2, rng)
    p = meas.probability(rho, 1)
    maj = qc.MajorityMeasurement((meas, meas, meas))
    big = rho.tensor(rho).tensor(rho)
    assert maj.system_dim == 8
    assert maj.probability(big, 1) == pytest.approx(3 * p**2 - 2 * p**3, abs=1e-10)
    assert np.allclose(maj.effect(0) + maj.effect(1), np.eye(8), atol=1e-9)
    with pytest.raises(ValueError):
        qc.MajorityMeasurement((meas, meas))


def test_majority_dilation_agrees_with_kraus_sum():
    rng = stream(7)
    parts = tuple(qc.measurement_from_predicate(2, [1]) for _ in range(3))
    maj = qc.MajorityMeasurement(parts)
    dil = maj.dilation()
    rho = qc.random_density_matrix(8, rng)
    for b in (0, 1):
        assert np.allclose(maj.branch(rho, b), dil.branch(rho, b), atol=1e-9)


def test_recover_certain_outcome_is_lossless():
    meas = qc.measurement_from_predicate(2, [1])
    res = qc.measure_and_recover(qc.basis(0, 2), meas)
    assert res.epsilon == pytest.approx(0)
    assert res.distance < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 8), st.integers(0, 2), st.booleans())
def test_good_as_new_bound(seed, dim, anc, pure):
    rng = stream(seed)
    rho = qc.random_pure_state(dim, rng).density() if pure else qc.random_density_matrix(dim, rng)
    meas = qc.random_measurement(dim, rng, ancilla_qubits=anc)
    res = qc.measure_and_recover(rho, meas)
    assert res.epsilon == pytest.approx(meas.probability(rho, 1), abs=1e-9)
    assert res.distance <= math.sqrt(res.epsilon) + 1e-8
    assert res.intermediate_distance == pytest.approx(math.sqrt(res.epsilon * (1 - res.epsilon)), abs=1e-8)
