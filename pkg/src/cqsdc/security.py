"""Exact information audits of what a party or eavesdropper can see.

Everything is computed from the full joint distribution of (message,
observables), enumerated from the statevector with a uniform prior over
the four messages. Probabilities are kept as exact fractions; every
branch weight in these protocols is dyadic.
"""
from __future__ import annotations

import enum
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .protocol import (
    ALL_MESSAGES,
    CONTROLLERS,
    BrownKey,
    ClusterKey,
    Message2,
    Party,
    Protocol,
    enumerate_branches,
)

CLUSTER_FIELDS = ("alice", "bob", "charlie")
BROWN_FIELDS = ("alice", "charlie1", "charlie2", "charlie3")

_EXACT_TOL = 1e-12


def _exact(p: float) -> Fraction:
    f = Fraction(p).limit_denominator(1 << 20)
    if abs(float(f) - p) > _EXACT_TOL:
        raise ValueError(f"branch probability {p!r} is not a small rational")
    return f


def _observables(key) -> dict[str, str]:
    if isinstance(key, ClusterKey):
        return {"alice": key.alice, "bob": str(key.bob), "charlie": str(key.charlie)}
    assert isinstance(key, BrownKey)
    a, b, c = key.controllers
    return {"alice": key.alice.symbol, "charlie1": a, "charlie2": b, "charlie3": c}


@dataclass(frozen=True)
class Atom:
    message: Message2
    observed: dict[str, str]
    probability: Fraction


@dataclass(frozen=True)
class JointDistribution:
    protocol: Protocol
    atoms: tuple[Atom, ...]

    def total(self) -> Fraction:
        return sum((a.probability for a in self.atoms), Fraction(0))


def joint_distribution(protocol: Protocol | str) -> JointDistribution:
    protocol = Protocol.parse(protocol)
    prior = Fraction(1, len(ALL_MESSAGES))
    atoms = []
    for msg in ALL_MESSAGES:
        for branch in enumerate_branches(protocol, msg):
            atoms.append(Atom(msg, _observables(branch.key), prior * _exact(branch.probability)))
    return JointDistribution(protocol, tuple(atoms))


@dataclass(frozen=True)
class AdversaryView:
    name: str
    protocol: Protocol
    fields: tuple[str, ...]
    description: str = ""

    def project(self, observed: dict[str, str]) -> tuple[str, ...]:
        return tuple(observed[f] for f in self.fields)


def cluster_bob_without_charlie() -> AdversaryView:
    return AdversaryView(
        "cluster-bob", Protocol.CLUSTER, ("alice", "bob"),
        "Bob with Alice's report and his own bit, no permission from Charlie",
    )


def cluster_eve_all_classical() -> AdversaryView:
    return AdversaryView(
        "cluster-eve", Protocol.CLUSTER, ("alice", "charlie"),
        "eavesdropper reading every classical transmission",
    )


def brown_single_controller(which: Party | str | int) -> AdversaryView:
    party = CONTROLLERS[which - 1] if isinstance(which, int) else Party.parse(which)
    if party not in CONTROLLERS:
        raise ValueError(f"{party} is not a controller")
    n = CONTROLLERS.index(party) + 1
    return AdversaryView(
        f"brown-controller:{n}", Protocol.BROWN, ("alice", party.value.lower()),
        f"{party.value} alone, holding Alice's report and its own bit",
    )


def brown_eve_all_classical(
    recipient: Party | str = Party.CHARLIE1, permitter: Party | str = Party.CHARLIE2
) -> AdversaryView:
    recipient, permitter = Party.parse(recipient), Party.parse(permitter)
    if recipient is permitter or not {recipient, permitter} <= set(CONTROLLERS):
        raise ValueError("recipient and permitter must be distinct controllers")
    # Only the permitter's bit goes on the wire; the recipient's stays local.
    return AdversaryView(
        "brown-eve", Protocol.BROWN, ("alice", permitter.value.lower()),
        f"eavesdropper reading Alice's report and {permitter.value}'s bit to {recipient.value}",
    )


def full_view(protocol: Protocol | str) -> AdversaryView:
    protocol = Protocol.parse(protocol)
    fields = CLUSTER_FIELDS if protocol is Protocol.CLUSTER else BROWN_FIELDS
    return AdversaryView(f"{protocol.value}-full", protocol, fields, "every measurement outcome")


def published_views() -> list[AdversaryView]:
    return [
        cluster_bob_without_charlie(),
        cluster_eve_all_classical(),
        *(brown_single_controller(i) for i in (1, 2, 3)),
        brown_eve_all_classical(),
    ]


def view_by_name(name: str) -> AdversaryView:
    """Parse CLI view names such as ``cluster-bob`` or ``brown-controller:2``."""
    name = name.lower()
    if name == "cluster-bob":
        return cluster_bob_without_charlie()
    if name == "cluster-eve":
        return cluster_eve_all_classical()
    if name.startswith("brown-controller:"):
        tail = name.split(":", 1)[1]
        if tail in ("1", "2", "3"):
            return brown_single_controller(int(tail))
        return brown_single_controller(tail)
    if name == "brown-eve":
        return brown_eve_all_classical()
    if name.startswith("brown-eve:"):
        recipient, permitter = name.split(":", 1)[1].split(",")
        return brown_eve_all_classical(recipient, permitter)
    if name in ("cluster-full", "brown-full"):
        return full_view(name.split("-")[0])
    raise ValueError(f"unknown view {name!r}")


class DeterminedBit(enum.Enum):
    NONE = "none"
    FIRST_BIT = "first message bit"
    SECOND_BIT = "second message bit"
    PARITY = "parity"
    WHOLE_MESSAGE = "whole message"
    OTHER = "other deterministic function"


_BIT_FUNCTIONS: dict[DeterminedBit, Callable[[Message2], int]] = {
    DeterminedBit.FIRST_BIT: lambda m: m.m1,
    DeterminedBit.SECOND_BIT: lambda m: m.m2,
    DeterminedBit.PARITY: lambda m: m.parity,
}


@dataclass(frozen=True)
class SecurityReport:
    view: AdversaryView
    mutual_information_bits: float
    conditionals: dict[tuple[str, ...], dict[Message2, Fraction]]
    max_guess_probability: Fraction
    determined_bit: DeterminedBit

    def to_dict(self) -> dict:
        return {
            "view": self.view.name,
            "protocol": self.view.protocol.value,
            "visible_fields": list(self.view.fields),
            "mutual_information_bits": self.mutual_information_bits,
            "max_guess_probability": float(self.max_guess_probability),
            "determined_bit": self.determined_bit.value,
            "conditionals": [
                {
                    "visible": dict(zip(self.view.fields, visible)),
                    "distribution": {str(m): float(p) for m, p in sorted(dist.items())},
                }
                for visible, dist in sorted(self.conditionals.items())
            ],
        }


def _determined(conditionals: dict[tuple, dict[Message2, Fraction]]) -> DeterminedBit:
    constant = []
    for kind, fn in _BIT_FUNCTIONS.items():
        if all(len({fn(m) for m, p in dist.items() if p > 0}) == 1 for dist in conditionals.values()):
            constant.append(kind)
    if len(constant) == 3:
        return DeterminedBit.WHOLE_MESSAGE
    if len(constant) == 1:
        return constant[0]
    if all(len([p for p in dist.values() if p > 0]) == len(ALL_MESSAGES) for dist in conditionals.values()):
        return DeterminedBit.NONE
    return DeterminedBit.OTHER


def audit(view: AdversaryView, joint: JointDistribution | None = None) -> SecurityReport:
    joint = joint or joint_distribution(view.protocol)
    p_mv: dict[tuple, dict[Message2, Fraction]] = defaultdict(lambda: defaultdict(Fraction))
    p_m: dict[Message2, Fraction] = defaultdict(Fraction)
    for atom in joint.atoms:
        p_mv[view.project(atom.observed)][atom.message] += atom.probability
        p_m[atom.message] += atom.probability

    conditionals = {}
    mi = 0.0
    guess = Fraction(0)
    for visible, by_msg in p_mv.items():
        p_v = sum(by_msg.values(), Fraction(0))
        conditionals[visible] = {m: by_msg.get(m, Fraction(0)) / p_v for m in ALL_MESSAGES}
        guess += max(by_msg.values())
        for m, p in by_msg.items():
            if p > 0:
                mi += float(p) * math.log2(float(p / (p_m[m] * p_v)))

    return SecurityReport(
        view=view,
        mutual_information_bits=mi,
        conditionals=conditionals,
        max_guess_probability=guess,
        determined_bit=_determined(conditionals),
    )
