"""Dense matrix oracles used to cross-check the counting route."""
from __future__ import annotations

import numpy as np

from .circuit import Circuit, Gate

STATEVECTOR_LIMIT = 12
UNITARY_LIMIT = 10


class OracleError(ValueError):
    pass


def _apply(state: np.ndarray, g: Gate, n: int) -> np.ndarray:
    k = g.arity
    m = g.matrix().reshape([2] * (2 * k))
    psi = state.reshape([2] * n)
    psi = np.tensordot(m, psi, axes=(list(range(k, 2 * k)), list(g.qubits)))
    # tensordot puts the gate's output axes first; move them back in place
    rest = [q for q in range(n) if q not in g.qubits]
    perm = np.argsort(list(g.qubits) + rest)
    return np.transpose(psi, perm).reshape(-1)


def statevector(c: Circuit) -> np.ndarray:
    """Amplitudes of ``C|0...0>``; qubit 0 is the most significant bit."""
    if c.n > STATEVECTOR_LIMIT:
        raise OracleError(f"{c.n} qubits exceeds the statevector limit of {STATEVECTOR_LIMIT}")
    state = np.zeros(2 ** c.n, dtype=complex)
    state[0] = 1
    for g in c.gates:
        state = _apply(state, g, c.n)
    return state


def circuit_unitary(c: Circuit) -> np.ndarray:
    if c.n > UNITARY_LIMIT:
        raise OracleError(f"{c.n} qubits exceeds the unitary limit of {UNITARY_LIMIT}")
    dim = 2 ** c.n
    u = np.eye(dim, dtype=complex)
    cols = []
    for col in range(dim):
        v = u[:, col]
        for g in c.gates:
            v = _apply(v, g, c.n)
        cols.append(v)
    return np.stack(cols, axis=1)


def embed(g: Gate, n: int) -> np.ndarray:
    return circuit_unitary(Circuit(n, [g]))


def projector_diag(spec, n: int) -> np.ndarray:
    """Diagonal of a computational-basis projector given as a string over I/0/1."""
    diag = np.ones(2 ** n)
    for q, s in enumerate(spec):
        if s == "I":
            continue
        bit = (np.arange(2 ** n) >> (n - 1 - q)) & 1
        diag *= bit == int(s)
    return diag
