"""Canonical constructors for the entangled resources used by both protocols.

Amplitudes are written out term by term instead of being built from a
circuit, so the states cannot drift with gate conventions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .qsim import BellOutcome, StateVector

CLUSTER4 = "cluster4"
BROWN5 = "brown5"

_HALF = 0.5
_BROWN_AMP = 1 / (2 * math.sqrt(2))


@dataclass(frozen=True)
class NamedState:
    label: str
    vector: StateVector
    qubit_names: tuple[str, ...]
    # position -> party holding that qubit
    qubit_roles: dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        n = self.vector.num_qubits
        if len(self.qubit_names) != n or set(self.qubit_roles) != set(range(n)):
            raise ValueError(f"{self.label}: roles must cover all {n} qubits")

    @property
    def num_qubits(self) -> int:
        return self.vector.num_qubits

    def qubits_of(self, party: str) -> tuple[int, ...]:
        return tuple(q for q, p in sorted(self.qubit_roles.items()) if p == party)

    def position(self, qubit_name: str) -> int:
        return self.qubit_names.index(qubit_name)


def _from_terms(num_qubits: int, terms: dict[str, float]) -> StateVector:
    amps = np.zeros(2**num_qubits, dtype=complex)
    for ket, amp in terms.items():
        amps[int(ket, 2)] = amp
    return StateVector(num_qubits, amps)


def cluster4() -> NamedState:
    """(|0000> + |1001> + |0110> - |1111>)/2 on qubits a1, a2, b1, c1."""
    vector = _from_terms(
        4, {"0000": _HALF, "1001": _HALF, "0110": _HALF, "1111": -_HALF}
    )
    return NamedState(
        label=CLUSTER4,
        vector=vector,
        qubit_names=("a1", "a2", "b1", "c1"),
        qubit_roles={0: "Alice", 1: "Alice", 2: "Bob", 3: "Charlie"},
    )


# Controller string -> Bell state carried by Alice's pair (d, e), with sign.
BROWN_BRANCHES: dict[str, tuple[BellOutcome, int]] = {
    "001": (BellOutcome.PHI_MINUS, +1),
    "010": (BellOutcome.PSI_MINUS, +1),
    "100": (BellOutcome.PHI_PLUS, +1),
    "111": (BellOutcome.PSI_PLUS, -1),
}


def brown5() -> NamedState:
    """(|001>Phi- + |010>Psi- + |100>Phi+ - |111>Psi+)/2 on qubits a..e.

    Expanded, this is eight terms of magnitude 1/(2*sqrt(2)).
    """
    vector = _from_terms(
        5,
        {
            "00100": _BROWN_AMP,
            "00111": -_BROWN_AMP,
            "01001": _BROWN_AMP,
            "01010": -_BROWN_AMP,
            "10000": _BROWN_AMP,
            "10011": _BROWN_AMP,
            "11101": -_BROWN_AMP,
            "11110": -_BROWN_AMP,
        },
    )
    return NamedState(
        label=BROWN5,
        vector=vector,
        qubit_names=("a", "b", "c", "d", "e"),
        qubit_roles={
            0: "Charlie1",
            1: "Charlie2",
            2: "Charlie3",
            3: "Alice",
            4: "Alice",
        },
    )


def bell(kind: BellOutcome) -> NamedState:
    return NamedState(
        label=f"bell:{kind.symbol}",
        vector=StateVector(2, kind.vector),
        qubit_names=("q0", "q1"),
        qubit_roles={0: "q0", 1: "q1"},
    )


def by_label(label: str) -> NamedState:
    """Look up a constructor by CLI-style label (cluster, brown, phi+, ...)."""
    label = label.lower()
    if label in ("cluster", CLUSTER4):
        return cluster4()
    if label in ("brown", BROWN5):
        return brown5()
    try:
        return bell(BellOutcome.from_symbol(label.removeprefix("bell:")))
    except ValueError:
        raise ValueError(f"unknown state label {label!r}") from None


def amplitude_table(state: NamedState, include_zero: bool = False) -> list[dict]:
    """Rows of (index, bitstring, re, im) for dumping a state."""
    vec = state.vector
    rows = []
    for i, a in enumerate(vec.amps):
        if not include_zero and abs(a) < 1e-12:
            continue
        rows.append(
            {"index": i, "bitstring": vec.bitstring(i), "re": float(a.real), "im": float(a.imag)}
        )
    return rows
