import math
import random

import numpy as np
import pytest

from cqsdc import qsim
from cqsdc.qsim import BellOutcome, PauliOp, StateVector
from cqsdc.states import bell, brown5, cluster4


def dist(state, qubits):
    return dict(qsim.outcome_distribution(state, qubits))


class TestBasisState:
    @pytest.mark.parametrize("n, index, ket", [(1, 0, "0"), (4, 9, "1001"), (2, 3, "11")])
    def test_examples(self, n, index, ket):
        s = qsim.basis_state(n, index)
        assert s.amplitude(ket) == 1
        assert np.count_nonzero(s.amps) == 1

    @pytest.mark.parametrize("n, index", [(2, 4), (2, -1), (0, 0), (13, 0)])
    def test_out_of_range(self, n, index):
        with pytest.raises(ValueError):
            qsim.basis_state(n, index)


class TestStateVector:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError, match="normalized"):
            StateVector(1, [1, 1])

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            StateVector(1, [float("nan"), 0])

    def test_amps_are_read_only(self):
        s = qsim.basis_state(2, 0)
        with pytest.raises(ValueError):
            s.amps[0] = 0


class TestApplyPauli:
    def test_x_flips(self):
        out = qsim.apply_pauli(qsim.basis_state(1, 0), 0, PauliOp.X)
        assert out.allclose(qsim.basis_state(1, 1))

    def test_z_phase(self):
        out = qsim.apply_pauli(qsim.basis_state(1, 1), 0, PauliOp.Z)
        assert out.amplitude("1") == -1

    def test_x_on_leftmost(self):
        out = qsim.apply_pauli(qsim.basis_state(4, 9), 0, PauliOp.X)
        assert out.allclose(qsim.basis_state(4, 0b0001))

    def test_x_on_inner_qubit(self):
        out = qsim.apply_pauli(qsim.basis_state(4, 9), 2, PauliOp.X)
        assert out.allclose(qsim.basis_state(4, 0b1011))

    def test_value_semantics(self):
        s = qsim.basis_state(2, 0)
        qsim.apply_pauli(s, 0, PauliOp.X)
        assert s.amplitude("00") == 1

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            qsim.apply_pauli(qsim.basis_state(2, 0), 2, PauliOp.X)


class TestOutcomeDistribution:
    def test_cluster_support(self):
        d = dist(cluster4().vector, [0, 1, 2, 3])
        assert d == pytest.approx({"0000": 0.25, "1001": 0.25, "0110": 0.25, "1111": 0.25})

    def test_trivial(self):
        assert dist(qsim.basis_state(1, 0), [0]) == {"0": 1.0}

    def test_brown_controller_marginal(self):
        # 8 terms of weight 1/8, each controller string appears twice
        d = dist(brown5().vector, [0, 1, 2])
        assert d == pytest.approx({"001": 0.25, "010": 0.25, "100": 0.25, "111": 0.25})

    def test_qubit_order_is_respected(self):
        s = qsim.basis_state(3, 0b110)
        assert dist(s, [2, 0]) == {"01": 1.0}

    def test_duplicate_qubit(self):
        with pytest.raises(ValueError, match="duplicate"):
            qsim.outcome_distribution(qsim.basis_state(2, 0), [0, 0])

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            qsim.outcome_distribution(qsim.basis_state(2, 0), [2])


class TestMeasureComputational:
    def test_eigenstate(self):
        bits, p, post = qsim.measure_computational(qsim.basis_state(4, 9), [0, 1, 2, 3], random.Random(3))
        assert (bits, p) == ("1001", 1.0)
        assert post.allclose(qsim.basis_state(4, 9))

    def test_cluster_outcomes(self):
        seen = set()
        for seed in range(40):
            bits, p, post = qsim.measure_computational(cluster4().vector, [0, 1, 2, 3], random.Random(seed))
            assert p == pytest.approx(0.25)
            # collapse keeps the sign of the surviving term, e.g. -|1111>
            assert np.allclose(np.abs(post.amps), qsim.basis_state(4, int(bits, 2)).amps)
            seen.add(bits)
        assert seen == {"0000", "1001", "0110", "1111"}

    def test_after_double_x(self):
        s = cluster4().vector
        s = qsim.apply_pauli(qsim.apply_pauli(s, 0, PauliOp.X), 1, PauliOp.X)
        assert dist(s, [0, 1, 2, 3]) == pytest.approx({"1100": 0.25, "0101": 0.25, "1010": 0.25, "0011": 0.25})
        bits, p, _ = qsim.measure_computational(s, [0, 1, 2, 3], random.Random(0))
        assert bits in {"1100", "0101", "1010", "0011"} and p == pytest.approx(0.25)

    def test_same_seed_same_outcome(self):
        a = qsim.measure_computational(cluster4().vector, [0, 1], random.Random(11))[0]
        b = qsim.measure_computational(cluster4().vector, [0, 1], random.Random(11))[0]
        assert a == b

    def test_partial_collapse(self):
        bits, p, post = qsim.measure_computational(cluster4().vector, [0], random.Random(1))
        expected = {"0": {"0000": 0.5, "0110": 0.5}, "1": {"1001": 0.5, "1111": 0.5}}[bits]
        assert p == pytest.approx(0.5)
        assert dist(post, [0, 1, 2, 3]) == pytest.approx(expected)


class TestMeasureBell:
    @pytest.mark.parametrize("kind", list(BellOutcome))
    def test_eigenstate(self, kind):
        s = bell(kind).vector
        outcome, p, post = qsim.measure_bell(s, (0, 1), random.Random(0))
        assert outcome is kind
        assert p == pytest.approx(1.0, abs=1e-12)
        assert post.allclose(s)

    def test_brown_uniform(self):
        d = dict(qsim.bell_distribution(brown5().vector, (3, 4)))
        assert set(d) == set(BellOutcome)
        assert all(p == pytest.approx(0.25, abs=1e-12) for p in d.values())

    def test_brown_collapse_phi_minus(self):
        p, post = qsim.project_bell(brown5().vector, (3, 4), BellOutcome.PHI_MINUS)
        assert p == pytest.approx(0.25)
        assert dist(post, [0, 1, 2]) == pytest.approx({"001": 1.0})
        # the full collapsed state is |001> (x) Phi-
        expected = np.kron([0, 1, 0, 0, 0, 0, 0, 0], BellOutcome.PHI_MINUS.vector)
        assert np.allclose(post.amps, expected, atol=1e-12)

    def test_pair_order_matters(self):
        # Psi- is antisymmetric: swapping the pair keeps the outcome, flips the sign
        s = bell(BellOutcome.PSI_MINUS).vector
        outcome, p, _ = qsim.measure_bell(s, (1, 0), random.Random(0))
        assert outcome is BellOutcome.PSI_MINUS and p == pytest.approx(1.0)

    def test_non_adjacent_pair(self):
        # Phi+ on qubits (0, 2) with |1> in the middle
        amps = np.zeros(8, dtype=complex)
        amps[0b010] = amps[0b111] = 1 / math.sqrt(2)
        d = dict(qsim.bell_distribution(StateVector(3, amps), (0, 2)))
        assert d == pytest.approx({BellOutcome.PHI_PLUS: 1.0})

    @pytest.mark.parametrize("pair", [(1, 1), (0, 5), (0,)])
    def test_bad_pair(self, pair):
        with pytest.raises(ValueError):
            qsim.measure_bell(brown5().vector, pair, random.Random(0))


def test_bell_wire_format():
    assert {o.symbol: o.bits for o in BellOutcome} == {"phi+": "00", "phi-": "01", "psi-": "10", "psi+": "11"}
    for o in BellOutcome:
        assert BellOutcome.from_bits(o.bits) is o
        assert BellOutcome.from_symbol(o.symbol) is o
