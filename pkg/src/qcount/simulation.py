"""Strong simulation: outcome probabilities of computational-basis measurements."""
from __future__ import annotations

from .circuit import Circuit, dagger
from .cnf import WeightedCNF
from .counter import count_with
from .encoder import (encode_bra, encode_circuit, encode_projector, encode_zero_state,
                      normalize_projector)

IMAG_TOL = 1e-9


class SimulationError(ValueError):
    pass


def simulation_formula(c: Circuit, spec) -> WeightedCNF:
    """Sandwich formula whose count is ``<0|C^dag P C|0>``."""
    syms = normalize_projector(spec)
    if len(syms) != c.n:
        raise SimulationError(f"measurement spec has {len(syms)} symbols, circuit has {c.n} qubits")
    f = WeightedCNF()
    frame = encode_zero_state(f, c.n)
    frame = encode_circuit(f, c, frame)
    frame = encode_projector(f, syms, frame)
    frame = encode_circuit(f, dagger(c), frame)
    encode_bra(f, frame, "0" * c.n)
    return f


def probability_from_count(value: complex) -> float:
    if abs(value.imag) > IMAG_TOL:
        raise SimulationError(f"imaginary residue {value.imag:.3g} in a probability")
    if not -IMAG_TOL <= value.real <= 1 + IMAG_TOL:
        raise SimulationError(f"probability {value.real!r} outside [0, 1]")
    return min(1.0, max(0.0, value.real))


def simulate(c: Circuit, spec, solver: str = "dpll") -> float:
    """Probability that measuring ``C|0..0>`` matches ``spec`` (a string over I/0/1)."""
    return probability_from_count(count_with(simulation_formula(c, spec), solver).value)
