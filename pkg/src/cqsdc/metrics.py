"""Efficiency figures for the two protocols.

    eta1 = m_u / (q_k + b_k)        eta2 = m_u / q_k

with m_u message bits, q_k qubits consumed and b_k classical bits sent.
``b_k`` is sometimes written ``c_k``; it is the same count.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .protocol import Protocol, run


@dataclass(frozen=True)
class EfficiencyInput:
    m_u: int
    q_k: int
    b_k: int = 0

    def __post_init__(self):
        if min(self.m_u, self.q_k, self.b_k) < 0:
            raise ValueError("counts must be nonnegative")


def eta1(counts: EfficiencyInput) -> Fraction:
    if counts.q_k + counts.b_k <= 0:
        raise ZeroDivisionError("q_k + b_k must be positive")
    return Fraction(counts.m_u, counts.q_k + counts.b_k)


def eta2(counts: EfficiencyInput) -> Fraction:
    if counts.q_k <= 0:
        raise ZeroDivisionError("q_k must be positive")
    return Fraction(counts.m_u, counts.q_k)


def protocol_counts(protocol: Protocol | str) -> EfficiencyInput:
    """Counts read off an executed session rather than typed in."""
    t = run(protocol, "00", random.Random(0))
    return EfficiencyInput(m_u=len(str(t.secret)), q_k=t.num_qubits, b_k=t.transmitted_bits)


@dataclass(frozen=True)
class EfficiencyRow:
    name: str
    eta1: float
    eta2: float
    source: str  # "computed" or "cited"
    published_eta1: float
    published_eta2: float

    def to_dict(self) -> dict:
        return {
            "protocol": self.name,
            "eta1": self.eta1,
            "eta2": self.eta2,
            "source": self.source,
            "published_eta1": self.published_eta1,
            "published_eta2": self.published_eta2,
        }


# Competitor rows are reported values only; those schemes are not simulated.
CITED_ROWS = (
    ("Dong et al.", 0.125, 0.25),
    ("Kao et al.", 0.125, 0.25),
    ("Hassanpour et al.", 0.22, 0.33),
)

PUBLISHED_PROPOSED = {
    Protocol.CLUSTER: ("Proposed Protocol", 0.28, 0.50),
    Protocol.BROWN: ("Proposed (2-3) Brown", 0.25, 0.40),
}


def comparison_table() -> list[EfficiencyRow]:
    rows = [EfficiencyRow(name, e1, e2, "cited", e1, e2) for name, e1, e2 in CITED_ROWS]
    for protocol, (name, e1, e2) in PUBLISHED_PROPOSED.items():
        counts = protocol_counts(protocol)
        rows.append(
            EfficiencyRow(name, float(eta1(counts)), float(eta2(counts)), "computed", e1, e2)
        )
    return rows
