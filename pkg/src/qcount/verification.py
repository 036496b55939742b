"""Hoare triples {P} C {Q} over diagonal computational-basis projectors.

The triple holds iff ``Tr(C P C^dag Q) == Tr(P)``. The left side is counted
through a cyclic encoding; ``Tr(P)`` is ``2^(n - k)`` for ``k`` constrained
qubits.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .circuit import Circuit, dagger
from .cnf import WeightedCNF
from .counter import count_with
from .encoder import encode_circuit, encode_identity, encode_projector, free_frame

TRACE_TOL = 1e-9


class VerificationError(ValueError):
    pass


@dataclass(frozen=True)
class ConditionSpec:
    n: int
    constraints: tuple[tuple[int, int], ...] = ()

    def projector(self) -> str:
        syms = ["I"] * self.n
        for q, b in self.constraints:
            syms[q] = str(b)
        return "".join(syms)

    def trace(self) -> int:
        return 2 ** (self.n - len(self.constraints))

    def __str__(self):
        return "[" + ",".join(f"{q}:{b}" for q, b in self.constraints) + "]"


_COND = re.compile(r"^\[\s*(\d+\s*:\s*[01](\s*,\s*\d+\s*:\s*[01])*)?\s*\]$")


def parse_condition(s: str, n: int) -> ConditionSpec:
    s = s.strip()
    if not _COND.match(s):
        raise VerificationError(f"malformed condition {s!r}; expected e.g. [0:1,2:0]")
    body = s[1:-1].strip()
    pairs = []
    seen = set()
    if body:
        for item in body.split(","):
            q, b = (int(x) for x in item.split(":"))
            if q >= n:
                raise VerificationError(f"qubit {q} out of range for {n} qubit(s)")
            if q in seen:
                raise VerificationError(f"qubit {q} constrained twice")
            seen.add(q)
            pairs.append((q, b))
    return ConditionSpec(n, tuple(pairs))


def _check(p: ConditionSpec, c: Circuit, q: ConditionSpec):
    if p.n != c.n or q.n != c.n:
        raise VerificationError("condition qubit count does not match the circuit")


def verification_formula(p: ConditionSpec, c: Circuit, q: ConditionSpec) -> WeightedCNF:
    """Formula whose count is ``Tr(C^dag Q C P) = Tr(C P C^dag Q)``."""
    _check(p, c, q)
    f = WeightedCNF()
    start = free_frame(f, c.n)
    frame = encode_projector(f, p.projector(), start)
    frame = encode_circuit(f, c, frame)
    frame = encode_projector(f, q.projector(), frame)
    frame = encode_circuit(f, dagger(c), frame)
    encode_identity(f, frame, start)
    return f


def precondition_formula(p: ConditionSpec) -> WeightedCNF:
    f = WeightedCNF()
    encode_projector(f, p.projector(), free_frame(f, p.n))
    return f


@dataclass(frozen=True)
class VerifyResult:
    holds: bool
    lhs: complex
    rhs: complex


def verify_detailed(p: ConditionSpec, c: Circuit, q: ConditionSpec,
                    solver: str = "dpll", two_counts: bool = False) -> VerifyResult:
    lhs = count_with(verification_formula(p, c, q), solver).value
    if two_counts:
        rhs = count_with(precondition_formula(p), solver).value
    else:
        rhs = complex(p.trace())
    return VerifyResult(abs(lhs - rhs) <= TRACE_TOL * (1 + abs(rhs)), lhs, rhs)


def verify(p: ConditionSpec, c: Circuit, q: ConditionSpec, solver: str = "dpll",
           two_counts: bool = False) -> bool:
    return verify_detailed(p, c, q, solver, two_counts).holds
