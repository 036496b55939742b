import math
import os
import random

import numpy as np

from qcount.circuit import Circuit, Gate
from qcount.cnf import WeightedCNF

ONE_QUBIT = ["id", "x", "y", "z", "h", "s", "sdg", "t", "tdg", "rx", "ry", "rz"]
TWO_QUBIT = ["cx", "cz", "csx", "csxdg", "swap"]
ROTATIONS = ("rx", "ry", "rz")


def seed() -> int:
    return int(os.environ.get("QCOUNT_SEED", "20251016"))


def make_rng(offset: int = 0) -> random.Random:
    return random.Random(seed() + offset)


def random_gate(rng: random.Random, n: int) -> Gate:
    r = rng.random()
    if n >= 3 and r < 0.08:
        return Gate("ccx", tuple(rng.sample(range(n), 3)))
    if n >= 2 and r < 0.4:
        return Gate(rng.choice(TWO_QUBIT), tuple(rng.sample(range(n), 2)))
    kind = rng.choice(ONE_QUBIT)
    angle = rng.uniform(-math.pi, math.pi) if kind in ROTATIONS else None
    return Gate(kind, (rng.randrange(n),), angle)


def random_circuit(rng: random.Random, n: int, m: int) -> Circuit:
    return Circuit(n, [random_gate(rng, n) for _ in range(m)])


def measurement_probability(c: Circuit, spec: str) -> float:
    from qcount.oracle import statevector
    sv = statevector(c)
    total = 0.0
    for b, amp in enumerate(sv):
        bits = format(b, f"0{c.n}b")
        if all(s == "I" or s == x for s, x in zip(spec, bits)):
            total += abs(amp) ** 2
    return total


def matrix_trace(u: Circuit, v: Circuit) -> complex:
    from qcount.oracle import circuit_unitary
    return complex(np.trace(circuit_unitary(u) @ circuit_unitary(v).conj().T))


def random_formula(rng: random.Random, max_vars=20, max_clauses=60) -> WeightedCNF:
    f = WeightedCNF()
    n = rng.randint(1, max_vars)
    f.fresh_vars(n)
    for _ in range(rng.randint(0, max_clauses)):
        width = rng.randint(1, min(4, n))
        vs = rng.sample(range(1, n + 1), width)
        f.add_clause([v if rng.random() < 0.5 else -v for v in vs])
    for v in range(1, n + 1):
        for lit in (v, -v):
            if rng.random() < 0.6:
                r, phi = rng.uniform(0, 2), rng.uniform(-math.pi, math.pi)
                f.set_weight(lit, r * complex(math.cos(phi), math.sin(phi)))
    return f
