"""Acceptance suite. Each test prints one ``CRITERION <n> PASS|FAIL`` line.

Run with ``pytest tests/test_acceptance.py -v``; add ``-m slow`` for the
optional Toffoli synthesis run.
"""
import itertools
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from qcount.circuit import Circuit, Gate, circuit
from qcount.cnf import WeightedCNF
from qcount.counter import count, count_bruteforce
from qcount.encoder import encode_basis_state, encode_bra, encode_gate
from qcount.equivalence import check_equiv, fidelity
from qcount.gates import lookup, registered_kinds
from qcount.simulation import simulate
from qcount.synthesis import GateSet, synthesize
from qcount.verification import parse_condition, verify

from helpers import make_rng, measurement_probability, random_circuit, random_formula


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(num, title, budget=None):
        t0 = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            dt = time.perf_counter() - t0
            if ok and budget is not None and dt >= budget:
                ok = False
                title += f" (over budget {budget} s)"
            with capsys.disabled():
                print(f"\nCRITERION {num} {'PASS' if ok else 'FAIL'} {title} [{dt:.3f} s]")
        if not ok:
            pytest.fail(f"criterion {num} exceeded its runtime budget")
    return run


def test_c1_hadamard_sandwich(criterion):
    with criterion(1, "H-sandwich probability is 1/2", budget=0.1):
        assert abs(simulate(circuit(1, ("h", 0)), "0") - 0.5) <= 1e-9


def test_c2_tt_equals_s(criterion):
    with criterion(2, "T.T equivalent to S at epsilon=0", budget=0.1):
        v = check_equiv(circuit(1, ("t", 0), ("t", 0)), circuit(1, ("s", 0)), 0)
        assert abs(v.fidelity - 1) <= 1e-9 and v.equivalent


def _rz_circuit(rng):
    n = rng.randint(1, 4)
    m = rng.randint(1, 15)
    c = random_circuit(rng, n, m - 1)
    gates = list(c.gates)
    gates.insert(rng.randrange(m), Gate("rz", (rng.randrange(n),), rng.uniform(-math.pi, math.pi)))
    return Circuit(n, gates)


def _perturb(c: Circuit, rng) -> Circuit:
    rot = [i for i, g in enumerate(c.gates) if g.angle is not None]
    i = rng.choice(rot)
    g = c.gates[i]
    gates = list(c.gates)
    gates[i] = Gate(g.kind, g.qubits, g.angle + 1e-4)
    return Circuit(c.n, gates)


def test_c3_phase_shift_detection(criterion):
    rng = make_rng(300)
    with criterion(3, "20 perturbed circuits: false at eps=0, true at eps=1e-6", budget=30):
        for _ in range(20):
            c = _rz_circuit(rng)
            assert any(g.kind == "rz" for g in c.gates) and len(c.gates) <= 15
            d = _perturb(c, rng)
            assert not check_equiv(c, d, 0).equivalent
            assert check_equiv(c, d, 1e-6).equivalent


def test_c4_simulation_oracle(criterion):
    rng = make_rng(400)
    with criterion(4, "200 random simulations match the statevector", budget=120):
        for _ in range(200):
            n = rng.randint(1, 5)
            c = random_circuit(rng, n, rng.randint(0, 20))
            spec = "".join(rng.choice("I01") for _ in range(n))
            assert abs(simulate(c, spec) - measurement_probability(c, spec)) <= 1e-9


def test_c5_counter_differential(criterion):
    rng = make_rng(500)
    with criterion(5, "1000 formulas: DPLL equals brute force", budget=60):
        for _ in range(1000):
            f = random_formula(rng, max_vars=20)
            ref = count_bruteforce(f)
            assert abs(count(f).value - ref) <= 1e-9 * max(1.0, abs(ref))


def test_c6_ancilla_verification(criterion):
    c = circuit(2, ("cx", 0, 1), ("t", 0), ("cx", 0, 1))
    with criterion(6, "ancilla miniature True, flipped post False", budget=1):
        pre = parse_condition("[1:0]", 2)
        assert verify(pre, c, parse_condition("[1:0]", 2)) is True
        assert verify(pre, c, parse_condition("[1:1]", 2)) is False


def test_c7_exact_synthesis(criterion):
    s = circuit(1, ("s", 0))
    swap = circuit(2, ("swap", 0, 1))
    with criterion(7, "S from {H,T} at depth 2, SWAP from {CX} at depth 3", budget=10):
        r = synthesize(s, GateSet.of("h", "t"), 0, 4)
        assert r.success and r.depth == 2
        assert r.circuit == circuit(1, ("t", 0), ("t", 0))
        assert fidelity(r.circuit, s) >= 1 - 1e-9
        assert not synthesize(s, GateSet.of("h", "t"), 0, 1).success

        r = synthesize(swap, GateSet.of("cx"), 0, 4)
        assert r.success and r.depth == 3
        assert fidelity(r.circuit, swap) >= 1 - 1e-9
        assert not synthesize(swap, GateSet.of("cx"), 0, 2).success


@pytest.mark.slow
def test_c8_toffoli_synthesis(criterion):
    ccx = circuit(3, ("ccx", 0, 1, 2))
    printed = circuit(3, ("csx", 0, 2), ("csx", 1, 2), ("cx", 0, 1), ("csxdg", 0, 2),
                      ("cx", 0, 1))
    with criterion(8, "Toffoli from {H,CX,CSX,CSXDG} by iteration 6", budget=3600):
        r = synthesize(ccx, GateSet.of("h", "cx", "csx", "csxdg"), 0, 6)
        assert r.success and r.iterations <= 6
        assert fidelity(r.circuit, ccx) >= 1 - 1e-9
        # the comparison circuit as printed; see README for why this part fails
        assert fidelity(r.circuit, printed) >= 1 - 1e-9


def _transfer_matrix(g: Gate) -> np.ndarray:
    n = len(g.qubits)
    dim = 2 ** n
    got = np.zeros((dim, dim), dtype=complex)
    for b, r in itertools.product(range(dim), repeat=2):
        f = WeightedCNF()
        frame = encode_gate(f, g, encode_basis_state(f, format(b, f"0{n}b")))
        encode_bra(f, frame, format(r, f"0{n}b"))
        got[r, b] = count(f).value
    return got


def test_c9_gate_encoding_soundness(criterion):
    angles = [0.0, 0.3, -1.7, math.pi / 8, math.pi]
    with criterion(9, "every registered gate reproduces its matrix within 1e-12"):
        checked = 0
        for kind in registered_kinds():
            d = lookup(kind)
            ops = tuple(range(d.arity))
            for a in (angles if d.parametric else [None]):
                g = Gate(kind, ops, a)
                assert np.max(np.abs(_transfer_matrix(g) - g.matrix())) <= 1e-12, repr(g)
                checked += 1
        assert checked >= len(registered_kinds())
