"""Property checks of the engine over random states."""
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from cqsdc import qsim
from cqsdc.qsim import BELL_ORDER, PauliOp, StateVector

CASES = settings(max_examples=1000, deadline=None)


def random_state(seed: int, n: int) -> StateVector:
    rng = np.random.default_rng(seed)
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return StateVector(n, v / np.linalg.norm(v))


seeds = st.integers(0, 2**32 - 1)
sizes = st.integers(1, 6)


@st.composite
def state_and_qubit(draw):
    n = draw(sizes)
    return random_state(draw(seeds), n), draw(st.integers(0, n - 1))


@st.composite
def state_and_subset(draw):
    n = draw(sizes)
    perm = draw(st.permutations(range(n)))
    k = draw(st.integers(1, n))
    return random_state(draw(seeds), n), list(perm[:k])


@CASES
@given(state_and_qubit(), st.sampled_from(list(PauliOp)))
def test_pauli_preserves_norm(sq, op):
    state, q = sq
    assert abs(qsim.apply_pauli(state, q, op).norm() - 1) < 1e-9


@CASES
@given(state_and_qubit(), st.sampled_from([PauliOp.X, PauliOp.Z]))
def test_pauli_involution(sq, op):
    state, q = sq
    twice = qsim.apply_pauli(qsim.apply_pauli(state, q, op), q, op)
    assert np.max(np.abs(twice.amps - state.amps)) < 1e-12


@CASES
@given(state_and_subset())
def test_born_completeness(ss):
    state, qubits = ss
    assert abs(sum(p for _, p in qsim.outcome_distribution(state, qubits)) - 1) < 1e-9


@CASES
@given(seeds, st.permutations(range(5)).map(lambda p: tuple(p[:2])))
def test_bell_completeness(seed, pair):
    state = random_state(seed, 5)
    total = sum(qsim.project_bell(state, pair, o)[0] for o in BELL_ORDER)
    assert abs(total - 1) < 1e-9


@settings(max_examples=300, deadline=None)
@given(state_and_subset(), seeds)
def test_measurement_idempotent(ss, rng_seed):
    state, qubits = ss
    rng = np.random.default_rng(rng_seed)
    bits, _, post = qsim.measure_computational(state, qubits, rng)
    again, p, post2 = qsim.measure_computational(post, qubits, rng)
    assert again == bits
    assert abs(p - 1) < 1e-12
    assert post2.allclose(post)


@settings(max_examples=300, deadline=None)
@given(seeds, st.permutations(range(4)).map(lambda p: tuple(p[:2])), seeds)
def test_bell_measurement_idempotent(seed, pair, rng_seed):
    rng = np.random.default_rng(rng_seed)
    outcome, _, post = qsim.measure_bell(random_state(seed, 4), pair, rng)
    again, p, _ = qsim.measure_bell(post, pair, rng)
    assert again is outcome and abs(p - 1) < 1e-12


@settings(max_examples=200, deadline=None)
@given(state_and_qubit(), st.sampled_from(list(PauliOp)))
def test_pauli_matches_kron_matrix(sq, op):
    state, q = sq
    n = state.num_qubits
    full = np.array([[1]])
    for k in range(n):
        full = np.kron(full, op.matrix if k == q else np.eye(2))
    assert np.allclose(qsim.apply_pauli(state, q, op).amps, full @ state.amps, atol=1e-12)
