"""Exact and approximate equivalence via the cyclic encoding."""
from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, dagger
from .cnf import WeightedCNF
from .counter import count_with
from .encoder import encode_circuit, encode_identity, free_frame

EXACT_TOL = 1e-9


class EquivalenceError(ValueError):
    pass


@dataclass(frozen=True)
class EquivVerdict:
    fidelity: float
    equivalent: bool
    epsilon: float
    trace_value: complex


def cyclic_formula(u: Circuit, v: Circuit) -> WeightedCNF:
    """Formula whose count is ``Tr(U V^dag)``: U, then V^dag, output tied back to input."""
    if u.n != v.n:
        raise EquivalenceError(f"qubit count mismatch: {u.n} vs {v.n}")
    f = WeightedCNF()
    start = free_frame(f, u.n)
    frame = encode_circuit(f, u, start)
    frame = encode_circuit(f, dagger(v), frame)
    encode_identity(f, frame, start)
    return f


def cyclic_trace(u: Circuit, v: Circuit, solver: str = "dpll") -> complex:
    return count_with(cyclic_formula(u, v), solver).value


def fidelity_from_trace(tr: complex, n: int) -> float:
    fid = abs(tr) ** 2 / 4 ** n
    if fid > 1 + EXACT_TOL:
        raise EquivalenceError(f"fidelity {fid!r} exceeds 1")
    return min(1.0, fid)


def fidelity(u: Circuit, v: Circuit, solver: str = "dpll") -> float:
    return fidelity_from_trace(cyclic_trace(u, v, solver), u.n)


def verdict(tr: complex, n: int, epsilon: float) -> EquivVerdict:
    if not 0 <= epsilon <= 1:
        raise EquivalenceError(f"epsilon {epsilon!r} outside [0, 1]")
    fid = fidelity_from_trace(tr, n)
    threshold = 1 - max(epsilon, EXACT_TOL)
    return EquivVerdict(fid, fid >= threshold, epsilon, tr)


def check_equiv(u: Circuit, v: Circuit, epsilon: float = 0.0,
                solver: str = "dpll") -> EquivVerdict:
    if not 0 <= epsilon <= 1:
        raise EquivalenceError(f"epsilon {epsilon!r} outside [0, 1]")
    return verdict(cyclic_trace(u, v, solver), u.n, epsilon)
