"""Party logic, encodings, decode tables and session execution.

Two protocols are covered:

* ``cluster``: Alice holds a1, a2 of the four-qubit cluster state, Bob b1
  and the controller Charlie c1. Bob needs Charlie's bit to decode.
* ``brown``: Alice holds d, e of the five-qubit Brown state, controllers
  Charlie1..3 hold a, b, c. Any two controllers can decode, because the
  third bit is fixed by odd parity of a, b, c.

Decode tables are never typed in by hand. :func:`derive_decode_table`
builds them by enumerating every nonzero measurement branch of the
encoded state. The published tables live here only as comparison
fixtures.
"""
from __future__ import annotations

import enum
import functools
import itertools
from types import MappingProxyType
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from . import qsim
from .qsim import BellOutcome, PauliOp, RandomSource, StateVector
from .states import NamedState, brown5, cluster4


class ProtocolError(Exception):
    pass


class CollisionError(ProtocolError):
    """Two messages produced the same observable tuple."""


class SamePartyError(ProtocolError):
    pass


class MissingEntryError(ProtocolError, KeyError):
    pass


class InsufficientHelpersError(ProtocolError):
    pass


class Protocol(enum.Enum):
    CLUSTER = "cluster"
    BROWN = "brown"

    @classmethod
    def parse(cls, value: "str | Protocol") -> "Protocol":
        if isinstance(value, Protocol):
            return value
        try:
            return cls(value.lower())
        except ValueError:
            raise ValueError(f"unknown protocol {value!r}") from None


class Party(enum.Enum):
    ALICE = "Alice"
    BOB = "Bob"
    CHARLIE = "Charlie"
    CHARLIE1 = "Charlie1"
    CHARLIE2 = "Charlie2"
    CHARLIE3 = "Charlie3"
    BROADCAST = "Broadcast"

    @classmethod
    def parse(cls, value: "str | Party") -> "Party":
        if isinstance(value, Party):
            return value
        aliases = {"c1": "Charlie1", "c2": "Charlie2", "c3": "Charlie3"}
        value = aliases.get(value.lower(), value)
        for p in cls:
            if p.value.lower() == value.lower():
                return p
        raise ValueError(f"unknown party {value!r}")


CLUSTER_PARTIES = (Party.ALICE, Party.BOB, Party.CHARLIE)
CONTROLLERS = (Party.CHARLIE1, Party.CHARLIE2, Party.CHARLIE3)
BROWN_PARTIES = (Party.ALICE,) + CONTROLLERS


class Message2(NamedTuple):
    m1: int
    m2: int

    @classmethod
    def parse(cls, text: "str | Message2") -> "Message2":
        if isinstance(text, Message2):
            return text
        if len(text) != 2 or set(text) - {"0", "1"}:
            raise ValueError(f"message must be two bits, got {text!r}")
        return cls(int(text[0]), int(text[1]))

    @property
    def parity(self) -> int:
        return self.m1 ^ self.m2

    def __str__(self) -> str:
        return f"{self.m1}{self.m2}"


ALL_MESSAGES = tuple(Message2(a, b) for a in (0, 1) for b in (0, 1))


# ---------------------------------------------------------------------------
# Encoding


@dataclass(frozen=True)
class EncodingRule:
    op_first: PauliOp
    op_second: PauliOp
    target_first: int
    target_second: int

    def apply(self, state: StateVector) -> StateVector:
        state = qsim.apply_pauli(state, self.target_first, self.op_first)
        return qsim.apply_pauli(state, self.target_second, self.op_second)

    def __str__(self) -> str:
        return f"{self.op_first.value}@q{self.target_first} {self.op_second.value}@q{self.target_second}"


_I, _X, _Z = PauliOp.I, PauliOp.X, PauliOp.Z

# message -> (op on Alice's first qubit, op on her second qubit)
_CLUSTER_OPS = {"00": (_I, _I), "01": (_X, _X), "10": (_X, _I), "11": (_I, _X)}
_BROWN_OPS = {"00": (_I, _I), "01": (_Z, _X), "10": (_Z, _I), "11": (_I, _X)}


def resource_state(protocol: Protocol | str) -> NamedState:
    protocol = Protocol.parse(protocol)
    return cluster4() if protocol is Protocol.CLUSTER else brown5()


def alice_qubits(protocol: Protocol | str) -> tuple[int, int]:
    first, second = resource_state(protocol).qubits_of(Party.ALICE.value)
    return first, second


def encoding_for(protocol: Protocol | str, msg: Message2 | str) -> EncodingRule:
    protocol = Protocol.parse(protocol)
    msg = Message2.parse(msg)
    ops = (_CLUSTER_OPS if protocol is Protocol.CLUSTER else _BROWN_OPS)[str(msg)]
    first, second = alice_qubits(protocol)
    return EncodingRule(ops[0], ops[1], first, second)


# ---------------------------------------------------------------------------
# Observables and the branch-enumeration oracle


class ClusterKey(NamedTuple):
    alice: str
    bob: int
    charlie: int

    def __str__(self) -> str:
        return f"{self.alice}|{self.bob}|{self.charlie}"


class BrownKey(NamedTuple):
    alice: BellOutcome
    controllers: str  # bits of Charlie1, Charlie2, Charlie3

    def __str__(self) -> str:
        return f"{self.alice.symbol}|{self.controllers}"


@dataclass(frozen=True)
class Branch:
    """One nonzero-probability measurement outcome for a given message."""

    message: Message2
    key: "ClusterKey | BrownKey"
    probability: float


def enumerate_branches(protocol: Protocol | str, msg: Message2 | str) -> list[Branch]:
    """Every measurement branch of the encoded resource, with Born weights.

    Cluster: all four qubits are measured in the computational basis.
    Brown: Alice's pair is projected on each Bell state in turn, then the
    controllers' qubits are measured on the collapsed state.
    """
    protocol = Protocol.parse(protocol)
    msg = Message2.parse(msg)
    named = resource_state(protocol)
    encoded = encoding_for(protocol, msg).apply(named.vector)
    branches = []
    if protocol is Protocol.CLUSTER:
        for bits, p in qsim.outcome_distribution(encoded, [0, 1, 2, 3]):
            key = ClusterKey(bits[:2], int(bits[2]), int(bits[3]))
            branches.append(Branch(msg, key, p))
        return branches
    pair = alice_qubits(protocol)
    controllers = [named.position(q) for q in ("a", "b", "c")]
    for outcome in qsim.BELL_ORDER:
        p_bell, post = qsim.project_bell(encoded, pair, outcome)
        if post is None:
            continue
        for bits, p in qsim.outcome_distribution(post, controllers):
            branches.append(Branch(msg, BrownKey(outcome, bits), p_bell * p))
    return branches


@dataclass(frozen=True)
class DecodeTable:
    protocol: Protocol
    entries: Mapping

    def __len__(self) -> int:
        return len(self.entries)

    def lookup(self, key) -> Message2:
        try:
            return self.entries[key]
        except KeyError:
            raise MissingEntryError(f"no {self.protocol.value} entry for {key}") from None

    def rows(self) -> list[tuple[object, Message2]]:
        """Entries grouped by message, then by Alice's outcome."""
        return sorted(self.entries.items(), key=lambda kv: (kv[1], _key_order(kv[0])))

    def keys_for(self, msg: Message2 | str) -> set:
        msg = Message2.parse(msg)
        return {k for k, m in self.entries.items() if m == msg}


def _key_order(key) -> tuple:
    if isinstance(key, BrownKey):
        return (key.controllers, key.alice.bits)
    return tuple(key)


def derive_decode_table(protocol: Protocol | str) -> DecodeTable:
    return _derive(Protocol.parse(protocol))


@functools.lru_cache(maxsize=None)
def _derive(protocol: Protocol) -> DecodeTable:
    entries: dict = {}
    for msg in ALL_MESSAGES:
        for branch in enumerate_branches(protocol, msg):
            prev = entries.setdefault(branch.key, msg)
            if prev != msg:
                raise CollisionError(
                    f"{branch.key} is reachable from both {prev} and {msg}"
                )
    return DecodeTable(protocol, MappingProxyType(entries))


def _cluster_rows(rows: Iterable[tuple[str, str]]) -> dict:
    out = {}
    for obs, msg in rows:
        alice, bob, charlie = obs.split()
        out[ClusterKey(alice, int(bob), int(charlie))] = Message2.parse(msg)
    return out


def _brown_rows(rows: Iterable[tuple[str, str]]) -> dict:
    out = {}
    for obs, msg in rows:
        symbol, abc = obs.split()
        out[BrownKey(BellOutcome.from_symbol(symbol), abc)] = Message2.parse(msg)
    return out


# Published decode tables, transcribed row by row: "alice bob charlie" -> message.
PUBLISHED_CLUSTER_TABLE = DecodeTable(
    Protocol.CLUSTER,
    _cluster_rows(
        [
            ("00 0 0", "00"), ("01 1 0", "00"), ("10 0 1", "00"), ("11 1 1", "00"),
            ("00 1 1", "01"), ("01 0 1", "01"), ("10 1 0", "01"), ("11 0 0", "01"),
            ("00 0 1", "10"), ("01 1 1", "10"), ("10 0 0", "10"), ("11 1 0", "10"),
            ("00 1 0", "11"), ("01 0 0", "11"), ("10 1 1", "11"), ("11 0 1", "11"),
        ]
    ),
)

# "alice-bell abc" -> message
PUBLISHED_BROWN_TABLE = DecodeTable(
    Protocol.BROWN,
    _brown_rows(
        [
            ("phi- 001", "00"), ("psi- 010", "00"), ("phi+ 100", "00"), ("psi+ 111", "00"),
            ("psi- 001", "01"), ("phi- 010", "01"), ("psi+ 100", "01"), ("phi+ 111", "01"),
            ("phi+ 001", "10"), ("psi+ 010", "10"), ("phi- 100", "10"), ("psi- 111", "10"),
            ("psi+ 001", "11"), ("phi+ 010", "11"), ("psi- 100", "11"), ("phi- 111", "11"),
        ]
    ),
)


def published_table(protocol: Protocol | str) -> DecodeTable:
    protocol = Protocol.parse(protocol)
    return PUBLISHED_CLUSTER_TABLE if protocol is Protocol.CLUSTER else PUBLISHED_BROWN_TABLE


@dataclass(frozen=True)
class TableDiff:
    key: object
    derived: Message2 | None
    published: Message2 | None


def diff_tables(derived: DecodeTable, published: DecodeTable) -> list[TableDiff]:
    """Rows where the two tables disagree, in the derived table's row order."""
    keys = [k for k, _ in derived.rows()]
    keys += [k for k, _ in published.rows() if k not in derived.entries]
    return [
        TableDiff(k, derived.entries.get(k), published.entries.get(k))
        for k in keys
        if derived.entries.get(k) != published.entries.get(k)
    ]


# ---------------------------------------------------------------------------
# Decoding


def third_bit_completion(known: dict[int, int]) -> tuple[int, int]:
    """Fill in the missing controller bit so that a^b^c = 1.

    ``known`` maps two of the positions 0, 1, 2 (Charlie1..3) to their
    bits; returns (missing position, bit).
    """
    if len(known) != 2 or not set(known) <= {0, 1, 2}:
        raise InsufficientHelpersError(f"need two distinct controller positions, got {sorted(known)}")
    (missing,) = {0, 1, 2} - set(known)
    return missing, 1 ^ known_parity(known.values())


def known_parity(bits: Iterable[int]) -> int:
    p = 0
    for b in bits:
        p ^= int(b)
    return p


def decode(
    table: DecodeTable,
    alice_payload: "str | BellOutcome",
    helper_bits: Sequence[tuple["Party | str", int]],
) -> Message2:
    """Recover the message from Alice's report plus two helper bits.

    Cluster helpers are Bob and Charlie; Brown helpers are any two
    distinct controllers.
    """
    helpers = [(Party.parse(p), int(b)) for p, b in helper_bits]
    parties = [p for p, _ in helpers]
    if len(helpers) != 2 or len(set(parties)) != 2:
        raise InsufficientHelpersError(f"need two distinct helper bits, got {parties}")
    bits = dict(helpers)
    if table.protocol is Protocol.CLUSTER:
        if set(parties) != {Party.BOB, Party.CHARLIE}:
            raise InsufficientHelpersError("cluster decoding needs Bob's and Charlie's bits")
        return table.lookup(ClusterKey(str(alice_payload), bits[Party.BOB], bits[Party.CHARLIE]))
    if not set(parties) <= set(CONTROLLERS):
        raise InsufficientHelpersError("brown decoding needs bits from two controllers")
    if not isinstance(alice_payload, BellOutcome):
        alice_payload = BellOutcome.from_bits(str(alice_payload))
    known = {CONTROLLERS.index(p): b for p, b in helpers}
    missing, bit = third_bit_completion(known)
    known[missing] = bit
    abc = "".join(str(known[i]) for i in range(3))
    return table.lookup(BrownKey(alice_payload, abc))


# ---------------------------------------------------------------------------
# Sessions and transcripts


class Purpose(enum.Enum):
    OUTCOME_REPORT = "outcome_report"
    PERMISSION = "permission"


@dataclass(frozen=True)
class ClassicalMessage:
    sender: Party
    receiver: Party
    payload: str
    purpose: Purpose

    def __post_init__(self):
        if self.purpose is Purpose.OUTCOME_REPORT and len(self.payload) not in (1, 2):
            raise ValueError("outcome reports carry one or two bits")
        if self.purpose is Purpose.PERMISSION and self.payload not in ("request", "grant"):
            raise ValueError("permission payload must be 'request' or 'grant'")

    @property
    def bit_cost(self) -> int:
        return len(self.payload) if self.purpose is Purpose.OUTCOME_REPORT else 0

    def to_dict(self) -> dict:
        return {
            "sender": self.sender.value,
            "receiver": self.receiver.value,
            "payload": self.payload,
            "purpose": self.purpose.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ClassicalMessage":
        return cls(Party.parse(d["sender"]), Party.parse(d["receiver"]), d["payload"], Purpose(d["purpose"]))


@dataclass(frozen=True)
class MeasurementRecord:
    party: Party
    qubits: tuple[str, ...]
    basis: str  # "computational" or "bell"
    outcome: str  # bits, or a Bell symbol such as "phi-"
    probability: float

    def to_dict(self) -> dict:
        return {
            "party": self.party.value,
            "qubits": list(self.qubits),
            "basis": self.basis,
            "outcome": self.outcome,
            "probability": self.probability,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MeasurementRecord":
        return cls(Party.parse(d["party"]), tuple(d["qubits"]), d["basis"], d["outcome"], float(d["probability"]))


@dataclass
class Transcript:
    protocol: Protocol
    secret: Message2
    num_qubits: int
    records: list[MeasurementRecord] = field(default_factory=list)
    classical: list[ClassicalMessage] = field(default_factory=list)
    decoded: Message2 | None = None
    recipient: Party | None = None
    permitter: Party | None = None

    @property
    def transmitted_bits(self) -> int:
        return sum(m.bit_cost for m in self.classical)

    def outcome_of(self, party: Party | str) -> str:
        party = Party.parse(party)
        for r in self.records:
            if r.party is party:
                return r.outcome
        raise KeyError(party)

    @property
    def branch_probability(self) -> float:
        """Joint probability of the recorded outcomes (product of the records)."""
        p = 1.0
        for r in self.records:
            p *= r.probability
        return p

    def to_dict(self) -> dict:
        return {
            "protocol": self.protocol.value,
            "secret": str(self.secret),
            "num_qubits": self.num_qubits,
            "recipient": self.recipient.value if self.recipient else None,
            "permitter": self.permitter.value if self.permitter else None,
            "records": [r.to_dict() for r in self.records],
            "classical": [m.to_dict() for m in self.classical],
            "transmitted_bits": self.transmitted_bits,
            "decoded": str(self.decoded) if self.decoded is not None else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Transcript":
        return cls(
            protocol=Protocol.parse(d["protocol"]),
            secret=Message2.parse(d["secret"]),
            num_qubits=int(d["num_qubits"]),
            records=[MeasurementRecord.from_dict(r) for r in d["records"]],
            classical=[ClassicalMessage.from_dict(m) for m in d["classical"]],
            decoded=Message2.parse(d["decoded"]) if d.get("decoded") else None,
            recipient=Party.parse(d["recipient"]) if d.get("recipient") else None,
            permitter=Party.parse(d["permitter"]) if d.get("permitter") else None,
        )


# Chooses an outcome: given the ordered (outcome, probability) list, return one.
Chooser = Callable[[list], object]


def _sampler(rng: RandomSource) -> Chooser:
    def choose(dist):
        return qsim._sample([o for o, _ in dist], [p for _, p in dist], rng)

    return choose


def _replayer(outcomes: Iterable[str]) -> Chooser:
    pending = iter(outcomes)

    def choose(dist):
        want = next(pending)
        for o, _ in dist:
            if str(o) == want:
                return o
        raise ProtocolError(f"recorded outcome {want!r} has zero probability")

    return choose


def _tidy(p: float) -> float:
    # strip float noise so serialized transcripts read 0.25 rather than 0.2499999999999999
    return round(p, 12)


class _Register:
    """The shared resource plus the measurements taken on it so far."""

    def __init__(self, named: NamedState, choose: Chooser):
        self.named = named
        self.state = named.vector
        self.choose = choose
        self.records: list[MeasurementRecord] = []

    def names(self, qubits: Sequence[int]) -> tuple[str, ...]:
        return tuple(self.named.qubit_names[q] for q in qubits)

    def measure(self, party: Party, qubits: Sequence[int]) -> str:
        bits = self.choose(qsim.outcome_distribution(self.state, qubits))
        prob, self.state = qsim.project_computational(self.state, qubits, bits)
        self.records.append(MeasurementRecord(party, self.names(qubits), "computational", bits, _tidy(prob)))
        return bits

    def measure_bell(self, party: Party, pair: tuple[int, int]) -> BellOutcome:
        outcome = self.choose(qsim.bell_distribution(self.state, pair))
        prob, self.state = qsim.project_bell(self.state, pair, outcome)
        self.records.append(MeasurementRecord(party, self.names(pair), "bell", outcome.symbol, _tidy(prob)))
        return outcome


def _run_cluster(msg: Message2, choose: Chooser) -> Transcript:
    named = cluster4()
    reg = _Register(named, choose)
    t = Transcript(Protocol.CLUSTER, msg, named.num_qubits, recipient=Party.BOB, permitter=Party.CHARLIE)

    # Preparation: Alice encodes, everyone measures, Alice reports to Bob.
    reg.state = encoding_for(Protocol.CLUSTER, msg).apply(reg.state)
    alice = reg.measure(Party.ALICE, named.qubits_of("Alice"))
    bob = int(reg.measure(Party.BOB, named.qubits_of("Bob")))
    charlie = int(reg.measure(Party.CHARLIE, named.qubits_of("Charlie")))
    t.classical.append(ClassicalMessage(Party.ALICE, Party.BOB, alice, Purpose.OUTCOME_REPORT))

    # Retrieval: Bob asks Charlie, Charlie grants by sending his bit.
    t.classical.append(ClassicalMessage(Party.BOB, Party.CHARLIE, "request", Purpose.PERMISSION))
    t.classical.append(ClassicalMessage(Party.CHARLIE, Party.BOB, str(charlie), Purpose.OUTCOME_REPORT))

    t.records = reg.records
    t.decoded = decode(
        derive_decode_table(Protocol.CLUSTER), alice, [(Party.BOB, bob), (Party.CHARLIE, charlie)]
    )
    return t


def run_cluster(msg: Message2 | str, rng: RandomSource) -> Transcript:
    return _run_cluster(Message2.parse(msg), _sampler(rng))


def _run_brown(
    msg: Message2, recipient: Party, permitter: Party, choose: Chooser, broadcast: bool
) -> Transcript:
    if recipient not in CONTROLLERS or permitter not in CONTROLLERS:
        raise ProtocolError("recipient and permitter must be controllers")
    if recipient is permitter:
        raise SamePartyError(f"{recipient.value} cannot grant permission to itself")
    named = brown5()
    reg = _Register(named, choose)
    t = Transcript(Protocol.BROWN, msg, named.num_qubits, recipient=recipient, permitter=permitter)

    reg.state = encoding_for(Protocol.BROWN, msg).apply(reg.state)
    pair = alice_qubits(Protocol.BROWN)
    outcome = reg.measure_bell(Party.ALICE, pair)
    bits = {c: int(reg.measure(c, named.qubits_of(c.value))) for c in CONTROLLERS}

    # One logical transmission even when delivered to every controller.
    to = Party.BROADCAST if broadcast else recipient
    t.classical.append(ClassicalMessage(Party.ALICE, to, outcome.bits, Purpose.OUTCOME_REPORT))
    t.classical.append(ClassicalMessage(recipient, permitter, "request", Purpose.PERMISSION))
    t.classical.append(ClassicalMessage(permitter, recipient, str(bits[permitter]), Purpose.OUTCOME_REPORT))

    t.records = reg.records
    t.decoded = decode(
        derive_decode_table(Protocol.BROWN),
        outcome,
        [(recipient, bits[recipient]), (permitter, bits[permitter])],
    )
    return t


def run_brown(
    msg: Message2 | str,
    recipient: Party | str,
    permitter: Party | str,
    rng: RandomSource,
    broadcast: bool = False,
) -> Transcript:
    return _run_brown(
        Message2.parse(msg), Party.parse(recipient), Party.parse(permitter), _sampler(rng), broadcast
    )


def run(protocol: Protocol | str, msg: Message2 | str, rng: RandomSource, **kwargs) -> Transcript:
    protocol = Protocol.parse(protocol)
    if protocol is Protocol.CLUSTER:
        return run_cluster(msg, rng)
    return run_brown(
        msg, kwargs.get("recipient", Party.CHARLIE1), kwargs.get("permitter", Party.CHARLIE2), rng,
        broadcast=kwargs.get("broadcast", False),
    )


def replay(transcript: Transcript) -> Transcript:
    """Re-run a session forcing the recorded measurement outcomes."""
    choose = _replayer(r.outcome for r in transcript.records)
    if transcript.protocol is Protocol.CLUSTER:
        return _run_cluster(transcript.secret, choose)
    broadcast = any(m.receiver is Party.BROADCAST for m in transcript.classical)
    return _run_brown(transcript.secret, transcript.recipient, transcript.permitter, choose, broadcast)


def all_sessions(protocol: Protocol | str, msg: Message2 | str, **kwargs) -> list[Transcript]:
    """One transcript per nonzero measurement branch, found by forcing outcomes."""
    protocol = Protocol.parse(protocol)
    msg = Message2.parse(msg)
    out = []
    for branch in enumerate_branches(protocol, msg):
        key = branch.key
        if protocol is Protocol.CLUSTER:
            outcomes = [key.alice, str(key.bob), str(key.charlie)]
            out.append(_run_cluster(msg, _replayer(outcomes)))
        else:
            outcomes = [key.alice.symbol, *key.controllers]
            out.append(
                _run_brown(
                    msg,
                    Party.parse(kwargs.get("recipient", Party.CHARLIE1)),
                    Party.parse(kwargs.get("permitter", Party.CHARLIE2)),
                    _replayer(outcomes),
                    kwargs.get("broadcast", False),
                )
            )
    return out


def coalitions() -> list[tuple[Party, Party]]:
    """Ordered (recipient, permitter) pairs over the unordered 2-of-3 coalitions."""
    return list(itertools.combinations(CONTROLLERS, 2))
