"""Independent dense-matrix oracles used across the test suite.

Everything here is built from explicit 2x2 constants and numpy.kron, on
purpose sharing no code with the package's bitmask arithmetic.  Qubit 0 is
the leftmost label character and the least significant basis-index bit, so
the kron accumulation runs from the highest qubit down.
"""

import numpy as np

I2 = np.eye(2, dtype=complex)
MX = np.array([[0, 1], [1, 0]], dtype=complex)
MY = np.array([[0, -1j], [1j, 0]], dtype=complex)
MZ = np.array([[1, 0], [0, -1]], dtype=complex)
MH = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
MS = np.array([[1, 0], [0, 1j]], dtype=complex)

_LETTER = {"I": I2, "X": MX, "Y": MY, "Z": MZ}
_SIGN = {"": 1.0, "+": 1.0, "i": 1j, "+i": 1j, "-": -1.0, "-i": -1j}

# Two-qubit gates written out explicitly for both qubit orderings; the basis
# index is (q1 q0) in binary with qubit 0 the low bit.
CX_01 = np.array(  # control qubit 0, target qubit 1
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex
)
CX_10 = np.array(  # control qubit 1, target qubit 0
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
CZ2 = np.diag([1, 1, 1, -1]).astype(complex)


def label_matrix(label: str) -> np.ndarray:
    """Dense matrix for a signed Pauli label like ``-iYX``."""
    body = label
    prefix = ""
    while body and body[0] in "+-i":
        prefix += body[0]
        body = body[1:]
    mat = np.array([[1.0]], dtype=complex)
    for ch in reversed(body):  # highest qubit is the slow kron factor
        mat = np.kron(mat, _LETTER[ch])
    return _SIGN[prefix] * mat


def embed_1q(gate: np.ndarray, q: int, n: int) -> np.ndarray:
    mat = np.array([[1.0]], dtype=complex)
    for pos in reversed(range(n)):
        mat = np.kron(mat, gate if pos == q else I2)
    return mat


def embed_2q(gate4: np.ndarray, a: int, b: int, n: int) -> np.ndarray:
    """Embed a 4x4 gate given for qubits (0, 1) onto qubits (a, b) of n.

    Done by conjugating with explicit basis-relabeling permutations, again
    avoiding any shared bit tricks with the package.
    """
    dim = 2 ** n
    perm = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        bits = [(i >> k) & 1 for k in range(n)]
        # move qubit a -> slot 0, qubit b -> slot 1, others keep order
        rest = [bits[k] for k in range(n) if k not in (a, b)]
        new_bits = [bits[a], bits[b]] + rest
        j = sum(bit << k for k, bit in enumerate(new_bits))
        perm[j, i] = 1.0
    big = np.kron(np.eye(2 ** (n - 2), dtype=complex), gate4)
    return perm.conj().T @ big @ perm


def gate_matrix(gate: tuple, n: int) -> np.ndarray:
    name = gate[0]
    if name == "H":
        return embed_1q(MH, gate[1], n)
    if name == "S":
        return embed_1q(MS, gate[1], n)
    if name == "SDG":
        return embed_1q(MS.conj().T, gate[1], n)
    if name == "X":
        return embed_1q(MX, gate[1], n)
    if name == "CX":
        return embed_2q(CX_01, gate[1], gate[2], n)
    if name == "CZ":
        return embed_2q(CZ2, gate[1], gate[2], n)
    raise ValueError(name)


def circuit_matrix(gates, n: int) -> np.ndarray:
    """Unitary of a gate list with the first gate acting first."""
    mat = np.eye(2 ** n, dtype=complex)
    for g in gates:
        mat = gate_matrix(g, n) @ mat
    return mat
