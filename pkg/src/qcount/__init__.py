"""Quantum circuit analysis by complex weighted model counting."""
__version__ = "0.1.0"

from .circuit import Circuit, Gate, circuit, dagger, depth, layers
from .cnf import WeightedCNF, parse_wdimacs, write_wdimacs
from .counter import CountResult, count, count_bruteforce
from .equivalence import EquivVerdict, check_equiv, cyclic_trace, fidelity
from .gates import register_gate
from .oracle import circuit_unitary, statevector
from .qasm import parse_qasm, to_qasm
from .simulation import simulate
from .synthesis import GateSet, SynthesisResult, enumerate_layer_configs, synthesize
from .verification import ConditionSpec, parse_condition, verify

__all__ = [
    "Circuit", "Gate", "circuit", "dagger", "depth", "layers",
    "WeightedCNF", "parse_wdimacs", "write_wdimacs",
    "CountResult", "count", "count_bruteforce",
    "EquivVerdict", "check_equiv", "cyclic_trace", "fidelity",
    "register_gate", "circuit_unitary", "statevector",
    "parse_qasm", "to_qasm", "simulate",
    "GateSet", "SynthesisResult", "enumerate_layer_configs", "synthesize",
    "ConditionSpec", "parse_condition", "verify",
]
