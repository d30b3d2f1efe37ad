"""Brute-force reference built from full 2^n x 2^n matrices.

Deliberately shares no code with cqsdc.qsim or cqsdc.states: states are
assembled with Kronecker products from their defining factors, and every
outcome probability is <psi|P|psi> for an explicit projector.
"""
import itertools
from functools import reduce

import numpy as np

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
R = 1 / np.sqrt(2)
PAULI = {"I": I2, "X": X, "Z": Z}

KET = {"0": np.array([1, 0], dtype=complex), "1": np.array([0, 1], dtype=complex)}


def ket(bits):
    return reduce(np.kron, [KET[b] for b in bits])


BELL = {
    "phi+": R * (ket("00") + ket("11")),
    "phi-": R * (ket("00") - ket("11")),
    "psi+": R * (ket("01") + ket("10")),
    "psi-": R * (ket("01") - ket("10")),
}


def op_on(n, qubit, m):
    return reduce(np.kron, [m if q == qubit else I2 for q in range(n)])


def cluster():
    return (ket("0000") + ket("1001") + ket("0110") - ket("1111")) / 2


def brown():
    return (
        np.kron(ket("001"), BELL["phi-"])
        + np.kron(ket("010"), BELL["psi-"])
        + np.kron(ket("100"), BELL["phi+"])
        - np.kron(ket("111"), BELL["psi+"])
    ) / 2


def comp_projector(n, qubit, bit):
    return op_on(n, qubit, np.outer(KET[bit], KET[bit]))


def bell_projector_last_pair(n, name):
    b = BELL[name]
    return np.kron(np.eye(2 ** (n - 2)), np.outer(b, b.conj()))


# Encodings as printed: message -> ops on Alice's (first, second) qubit.
CLUSTER_ENC = {"00": "II", "01": "XX", "10": "XI", "11": "IX"}
BROWN_ENC = {"00": "II", "01": "ZX", "10": "ZI", "11": "IX"}


def encoded(protocol, msg):
    if protocol == "cluster":
        psi, (q1, q2), ops = cluster(), (0, 1), CLUSTER_ENC[msg]
        n = 4
    else:
        psi, (q1, q2), ops = brown(), (3, 4), BROWN_ENC[msg]
        n = 5
    return op_on(n, q2, PAULI[ops[1]]) @ op_on(n, q1, PAULI[ops[0]]) @ psi


def branches(protocol, msg):
    """{observable tuple: probability} for one message, nonzero entries only.

    Cluster tuples are (alice bits, bob bit, charlie bit); brown tuples
    are (bell symbol, abc bits).
    """
    psi = encoded(protocol, msg)
    out = {}
    if protocol == "cluster":
        for bits in itertools.product("01", repeat=4):
            P = reduce(np.matmul, [comp_projector(4, q, b) for q, b in enumerate(bits)])
            p = float(np.real(psi.conj() @ P @ psi))
            if p > 1e-12:
                out[("".join(bits[:2]), int(bits[2]), int(bits[3]))] = p
        return out
    for name in BELL:
        for bits in itertools.product("01", repeat=3):
            P = bell_projector_last_pair(5, name)
            for q, b in enumerate(bits):
                P = P @ comp_projector(5, q, b)
            p = float(np.real(psi.conj() @ P @ psi))
            if p > 1e-12:
                out[(name, "".join(bits))] = p
    return out


def decode_table(protocol):
    table = {}
    for msg in ("00", "01", "10", "11"):
        for key in branches(protocol, msg):
            assert key not in table, f"collision at {key}"
            table[key] = msg
    return table
