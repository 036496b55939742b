"""Gate-level circuit representation and circuit transforms."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .gates import GateError, lookup


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: Optional[float] = None

    def __post_init__(self):
        d = lookup(self.kind)
        object.__setattr__(self, "kind", d.name)
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(self.qubits) != d.arity:
            raise GateError(f"{d.name} takes {d.arity} qubit(s), got {len(self.qubits)}")
        if len(set(self.qubits)) != len(self.qubits):
            raise GateError(f"{d.name}: repeated operand in {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise GateError(f"{d.name}: negative qubit index")
        if d.parametric:
            if self.angle is None or not math.isfinite(self.angle):
                raise GateError(f"{d.name} needs a finite angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise GateError(f"{d.name} takes no angle")

    @property
    def arity(self) -> int:
        return len(self.qubits)

    def matrix(self) -> np.ndarray:
        return lookup(self.kind).matrix(self.angle)

    def adjoint(self) -> "Gate":
        d = lookup(self.kind)
        if d.parametric:
            return Gate(self.kind, self.qubits, -self.angle)
        return Gate(d.adjoint, self.qubits)

    def __repr__(self):
        args = ",".join(map(str, self.qubits))
        if self.angle is not None:
            return f"{self.kind.upper()}({self.angle!r})({args})"
        return f"{self.kind.upper()}({args})"


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple[Gate, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n < 1:
            raise GateError("circuit needs at least one qubit")
        for g in self.gates:
            if max(g.qubits) >= self.n:
                raise GateError(f"{g!r}: qubit index out of range for {self.n} qubit(s)")

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def then(self, other: "Circuit") -> "Circuit":
        if other.n != self.n:
            raise GateError("qubit count mismatch")
        return Circuit(self.n, self.gates + other.gates)


def circuit(n: int, *specs) -> Circuit:
    """Shorthand builder: ``circuit(2, ("h", 0), ("cx", 0, 1), ("rz", 0.3, 1))``."""
    gates = []
    for spec in specs:
        kind, *rest = spec
        if lookup(kind).parametric:
            gates.append(Gate(kind, tuple(rest[1:]), rest[0]))
        else:
            gates.append(Gate(kind, tuple(rest)))
    return Circuit(n, gates)


def dagger(c: Circuit) -> Circuit:
    return Circuit(c.n, [g.adjoint() for g in reversed(c.gates)])


def layers(c: Circuit) -> list[list[Gate]]:
    """ASAP schedule: each gate goes in the layer after the latest gate sharing a qubit."""
    depth_at = [0] * c.n
    out: list[list[Gate]] = []
    for g in c.gates:
        d = max(depth_at[q] for q in g.qubits)
        if d == len(out):
            out.append([])
        out[d].append(g)
        for q in g.qubits:
            depth_at[q] = d + 1
    return out


def depth(c: Circuit) -> int:
    return len(layers(c))


def lower_swaps(gates: Iterable[Gate]) -> list[Gate]:
    out = []
    for g in gates:
        if g.kind == "swap":
            a, b = g.qubits
            out += [Gate("cx", (a, b)), Gate("cx", (b, a)), Gate("cx", (a, b))]
        else:
            out.append(g)
    return out
