"""Small exact statevector engine.

Only what the two protocols need: Pauli I/X/Z on single qubits,
computational-basis measurement of qubit subsets and Bell-basis
measurement of qubit pairs.

Ordering is big-endian: qubit 0 is the leftmost symbol of a ket, so
``|1001>`` on four qubits lives at index 9.
"""
from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

MAX_QUBITS = 12
NORM_TOL = 1e-9
PRUNE_TOL = 1e-12

# Any object exposing ``random() -> float`` in [0, 1) will do.
RandomSource = random.Random

_SQRT1_2 = 1 / math.sqrt(2)


class PauliOp(enum.Enum):
    I = "I"
    X = "X"
    Z = "Z"

    @property
    def matrix(self) -> np.ndarray:
        return _PAULI_MATRICES[self]


_PAULI_MATRICES = {
    PauliOp.I: np.array([[1, 0], [0, 1]], dtype=complex),
    PauliOp.X: np.array([[0, 1], [1, 0]], dtype=complex),
    PauliOp.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}


class BellOutcome(enum.Enum):
    """The four Bell states, used both as states and as measurement labels.

    The enum value is the wire encoding (two classical bits).
    """

    PHI_PLUS = "00"
    PHI_MINUS = "01"
    PSI_MINUS = "10"
    PSI_PLUS = "11"

    @property
    def bits(self) -> str:
        return self.value

    @property
    def symbol(self) -> str:
        return _BELL_SYMBOLS[self]

    @property
    def vector(self) -> np.ndarray:
        """Amplitudes over |00>, |01>, |10>, |11> of the ordered pair."""
        return _BELL_VECTORS[self].copy()

    @classmethod
    def from_bits(cls, bits: str) -> "BellOutcome":
        return cls(bits)

    @classmethod
    def from_symbol(cls, symbol: str) -> "BellOutcome":
        for outcome, sym in _BELL_SYMBOLS.items():
            if sym == symbol:
                return outcome
        raise ValueError(f"unknown Bell symbol {symbol!r}")

    def __str__(self) -> str:
        return self.symbol


_BELL_SYMBOLS = {
    BellOutcome.PHI_PLUS: "phi+",
    BellOutcome.PHI_MINUS: "phi-",
    BellOutcome.PSI_PLUS: "psi+",
    BellOutcome.PSI_MINUS: "psi-",
}

_BELL_VECTORS = {
    BellOutcome.PHI_PLUS: np.array([1, 0, 0, 1], dtype=complex) * _SQRT1_2,
    BellOutcome.PHI_MINUS: np.array([1, 0, 0, -1], dtype=complex) * _SQRT1_2,
    BellOutcome.PSI_PLUS: np.array([0, 1, 1, 0], dtype=complex) * _SQRT1_2,
    BellOutcome.PSI_MINUS: np.array([0, 1, -1, 0], dtype=complex) * _SQRT1_2,
}

# Fixed order for enumeration and sampling.
BELL_ORDER = (
    BellOutcome.PHI_PLUS,
    BellOutcome.PHI_MINUS,
    BellOutcome.PSI_PLUS,
    BellOutcome.PSI_MINUS,
)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitudes of an n-qubit register (value semantics)."""

    num_qubits: int
    amps: np.ndarray

    def __post_init__(self):
        _check_num_qubits(self.num_qubits)
        amps = np.array(self.amps, dtype=complex).reshape(-1)
        if amps.shape != (2**self.num_qubits,):
            raise ValueError(
                f"expected {2**self.num_qubits} amplitudes, got {amps.shape[0]}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm^2={norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_amplitudes(cls, amps: Sequence[complex], normalize: bool = False) -> "StateVector":
        arr = np.asarray(amps, dtype=complex)
        n = int(round(math.log2(arr.size))) if arr.size else 0
        if arr.size != 2**n:
            raise ValueError("amplitude count must be a power of two")
        if normalize:
            arr = arr / np.linalg.norm(arr)
        return cls(n, arr)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def amplitude(self, bitstring: str) -> complex:
        if len(bitstring) != self.num_qubits:
            raise ValueError("bitstring length must equal num_qubits")
        return complex(self.amps[int(bitstring, 2)])

    def bitstring(self, index: int) -> str:
        return format(index, f"0{self.num_qubits}b")

    def allclose(self, other: "StateVector", atol: float = 1e-12) -> bool:
        return self.num_qubits == other.num_qubits and bool(
            np.allclose(self.amps, other.amps, rtol=0, atol=atol)
        )

    def __repr__(self) -> str:
        terms = [
            f"({a.real:+.4f}{a.imag:+.4f}j)|{self.bitstring(i)}>"
            for i, a in enumerate(self.amps)
            if abs(a) > PRUNE_TOL
        ]
        return f"StateVector({' + '.join(terms)})"


def _check_num_qubits(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"num_qubits must be in [1, {MAX_QUBITS}], got {n!r}")


def _check_qubits(state: StateVector, qubits: Sequence[int]) -> list[int]:
    qubits = [int(q) for q in qubits]
    if not qubits:
        raise ValueError("at least one qubit is required")
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"duplicate qubit in {qubits}")
    for q in qubits:
        if not 0 <= q < state.num_qubits:
            raise ValueError(f"qubit {q} out of range for {state.num_qubits} qubits")
    return qubits


def _tensor(state: StateVector) -> np.ndarray:
    return state.amps.reshape([2] * state.num_qubits)


def basis_state(num_qubits: int, index: int) -> StateVector:
    _check_num_qubits(num_qubits)
    if not 0 <= index < 2**num_qubits:
        raise ValueError(f"index {index} out of range for {num_qubits} qubits")
    amps = np.zeros(2**num_qubits, dtype=complex)
    amps[index] = 1.0
    return StateVector(num_qubits, amps)


def apply_pauli(state: StateVector, qubit: int, op: PauliOp) -> StateVector:
    (qubit,) = _check_qubits(state, [qubit])
    if op is PauliOp.I:
        return state
    psi = np.moveaxis(_tensor(state), qubit, 0)
    psi = np.tensordot(op.matrix, psi, axes=([1], [0]))
    psi = np.moveaxis(psi, 0, qubit)
    return StateVector(state.num_qubits, psi.reshape(-1))


def _marginal(state: StateVector, qubits: list[int]) -> np.ndarray:
    """Probabilities over the listed qubits, axes in the listed order."""
    probs = np.abs(_tensor(state)) ** 2
    rest = tuple(q for q in range(state.num_qubits) if q not in qubits)
    probs = probs.sum(axis=rest) if rest else probs
    # remaining axes are in ascending qubit order; reorder to the caller's
    kept = sorted(qubits)
    return np.transpose(probs, [kept.index(q) for q in qubits])


def outcome_distribution(state: StateVector, qubits: Sequence[int]) -> list[tuple[str, float]]:
    """Born-rule distribution over computational outcomes of ``qubits``.

    Bitstrings are written in the order the qubits were given. Entries
    below 1e-12 are dropped.
    """
    qubits = _check_qubits(state, qubits)
    probs = _marginal(state, qubits).reshape(-1)
    width = len(qubits)
    return [
        (format(i, f"0{width}b"), float(p))
        for i, p in enumerate(probs)
        if p >= PRUNE_TOL
    ]


def project_computational(
    state: StateVector, qubits: Sequence[int], bits: str
) -> tuple[float, StateVector | None]:
    """Project ``qubits`` onto ``bits``; returns (probability, collapsed state).

    The collapsed state is None when the outcome has zero probability.
    """
    qubits = _check_qubits(state, qubits)
    if len(bits) != len(qubits) or set(bits) - {"0", "1"}:
        raise ValueError(f"bits {bits!r} do not match qubits {qubits}")
    psi = _tensor(state).copy()
    mask = np.zeros_like(psi, dtype=bool)
    index = [slice(None)] * state.num_qubits
    for q, b in zip(qubits, bits):
        index[q] = int(b)
    mask[tuple(index)] = True
    psi[~mask] = 0
    prob = float(np.vdot(psi, psi).real)
    if prob < PRUNE_TOL:
        return prob, None
    return prob, StateVector(state.num_qubits, psi.reshape(-1) / math.sqrt(prob))


def _sample(options: Sequence, probs: Sequence[float], rng: RandomSource):
    u = rng.random()
    acc = 0.0
    for opt, p in zip(options, probs):
        acc += p
        if u < acc:
            return opt
    # float slack at the top of the interval
    return options[-1]


def measure_computational(
    state: StateVector, qubits: Sequence[int], rng: RandomSource
) -> tuple[str, float, StateVector]:
    dist = outcome_distribution(state, qubits)
    bits = _sample([b for b, _ in dist], [p for _, p in dist], rng)
    prob, post = project_computational(state, qubits, bits)
    return bits, prob, post


def _pair_matrix(state: StateVector, pair: tuple[int, int]) -> np.ndarray:
    """Amplitudes reshaped to (rest, 4) with the pair as the last axis."""
    q0, q1 = pair
    psi = np.moveaxis(_tensor(state), [q0, q1], [-2, -1])
    return psi.reshape(-1, 4)


def _unpair(matrix: np.ndarray, state: StateVector, pair: tuple[int, int]) -> np.ndarray:
    n = state.num_qubits
    psi = matrix.reshape([2] * n)
    return np.moveaxis(psi, [-2, -1], list(pair)).reshape(-1)


def _check_pair(state: StateVector, pair: tuple[int, int]) -> tuple[int, int]:
    if len(pair) != 2:
        raise ValueError("a Bell measurement needs exactly two qubits")
    q0, q1 = _check_qubits(state, pair)
    return q0, q1


def project_bell(
    state: StateVector, pair: tuple[int, int], outcome: BellOutcome
) -> tuple[float, StateVector | None]:
    """Project the ordered ``pair`` onto one Bell state."""
    pair = _check_pair(state, pair)
    rest = _pair_matrix(state, pair)
    bell = outcome.vector
    coeffs = rest @ bell.conj()
    prob = float(np.vdot(coeffs, coeffs).real)
    if prob < PRUNE_TOL:
        return prob, None
    collapsed = np.outer(coeffs / math.sqrt(prob), bell)
    return prob, StateVector(state.num_qubits, _unpair(collapsed, state, pair))


def bell_distribution(state: StateVector, pair: tuple[int, int]) -> list[tuple[BellOutcome, float]]:
    pair = _check_pair(state, pair)
    rest = _pair_matrix(state, pair)
    out = []
    for outcome in BELL_ORDER:
        coeffs = rest @ outcome.vector.conj()
        p = float(np.vdot(coeffs, coeffs).real)
        if p >= PRUNE_TOL:
            out.append((outcome, p))
    return out


def measure_bell(
    state: StateVector, pair: tuple[int, int], rng: RandomSource
) -> tuple[BellOutcome, float, StateVector]:
    dist = bell_distribution(state, pair)
    outcome = _sample([o for o, _ in dist], [p for _, p in dist], rng)
    prob, post = project_bell(state, pair, outcome)
    return outcome, prob, post
