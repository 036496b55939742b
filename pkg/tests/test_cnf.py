import cmath
import math
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from qcount.cnf import CNFError, WeightedCNF, bra_weights, parse_wdimacs, write_wdimacs
from qcount.circuit import circuit
from qcount.counter import count_bruteforce
from qcount.encoder import encode_circuit, encode_zero_state

GOLDEN = Path(__file__).parent / "golden"


def test_fresh_var():
    f = WeightedCNF()
    assert f.fresh_var() == 1
    f.num_vars = 5
    assert f.fresh_var() == 6
    assert f.fresh_var() != f.fresh_var()


def test_add_clause():
    f = WeightedCNF()
    f.fresh_vars(2)
    f.add_clause((1, -2))
    assert f.clauses == [(1, -2)]
    f.add_clause((1, 1))
    assert f.clauses[-1] == (1,)
    with pytest.raises(CNFError, match="tautological"):
        f.add_clause((1, -1))
    with pytest.raises(CNFError, match="unallocated"):
        f.add_clause((3,))


def test_set_weight():
    f = WeightedCNF()
    h = f.fresh_var()
    f.set_weight(-h, math.sqrt(2) / 2)
    assert f.weight(-h) == 0.7071067811865476
    assert f.weight(h) == 1
    f.set_weight(h, -math.sqrt(2) / 2)
    assert f.weight(h) == -0.7071067811865476
    f.set_weight(h, cmath.exp(1j * math.pi / 4))
    assert f.weight(h) == cmath.exp(1j * math.pi / 4)
    assert f.weight(-h) == 0.7071067811865476
    with pytest.raises(CNFError):
        f.set_weight(h, complex("nan"))
    with pytest.raises(CNFError):
        f.set_weight(h, float("inf"))


def test_write_empty():
    assert write_wdimacs(WeightedCNF()) == "c t wmc\np cnf 0 0\n"


def test_write_single_clause_with_weight():
    f = WeightedCNF()
    f.fresh_var()
    f.add_clause((1,))
    f.set_weight(-1, 0.5)
    lines = write_wdimacs(f).splitlines()
    assert "p cnf 1 1" in lines
    assert "c p weight -1 0.5 0 0" in lines
    assert lines[-1] == "1 0"


def test_h_gate_golden():
    f = WeightedCNF()
    encode_circuit(f, circuit(1, ("h", 0)), encode_zero_state(f, 1))
    text = write_wdimacs(f)
    assert text == (GOLDEN / "h_gate.wcnf").read_text()
    # validated value: sum of H|0> amplitudes is sqrt(2)
    assert abs(count_bruteforce(parse_wdimacs(text)) - math.sqrt(2)) < 1e-12


def test_bra_weights_conjugates_only_the_block():
    f = WeightedCNF()
    a = f.fresh_var()
    f.set_weight(a, 1j)
    with bra_weights(f):
        b = f.fresh_var()
        f.set_weight(b, 1j)
        f.set_weight(-b, 2 - 1j)
    assert f.weight(a) == 1j
    assert f.weight(b) == -1j
    assert f.weight(-b) == 2 + 1j


@pytest.mark.parametrize("text, fragment", [
    ("1 0\n", "before header"),
    ("p cnf 1 2\n1 0\n", "declares 2"),
    ("p cnf 1 1\n1 -1 0\n", "tautological"),
    ("p cnf 1 1\n2 0\n", "unallocated"),
    ("p cnf 1 1\nc p weight 1 x 0 0\n1 0\n", "bad weight"),
    ("p cnf 1 1\n1\n", "not terminated"),
    ("c only\n", "missing"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(CNFError, match=fragment):
        parse_wdimacs(text)


finite = st.floats(-2, 2, allow_nan=False, allow_infinity=False)


@st.composite
def formulas(draw):
    f = WeightedCNF()
    n = draw(st.integers(0, 8))
    f.fresh_vars(n)
    if n:
        for _ in range(draw(st.integers(0, 10))):
            vs = draw(st.lists(st.integers(1, n), min_size=1, max_size=4, unique=True))
            f.add_clause([v if draw(st.booleans()) else -v for v in vs])
        for _ in range(draw(st.integers(0, 6))):
            v = draw(st.integers(1, n))
            f.set_weight(v if draw(st.booleans()) else -v, complex(draw(finite), draw(finite)))
        if draw(st.booleans()):
            f.mark_max(draw(st.integers(1, n)))
    return f


@settings(max_examples=200, deadline=None)
@given(formulas())
def test_round_trip_is_canonical(f):
    text = write_wdimacs(f)
    g = parse_wdimacs(text)
    assert g == f
    assert write_wdimacs(g) == text
    header = [ln for ln in text.splitlines() if ln.startswith("p ")][0]
    assert header == f"p cnf {f.num_vars} {len(f.clauses)}"
