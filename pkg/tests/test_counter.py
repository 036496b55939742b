import math

import numpy as np
import pytest

from qcount.circuit import circuit
from qcount.cnf import WeightedCNF
from qcount.counter import CounterError, count, count_bruteforce, statevector
from qcount.simulation import simulation_formula

from helpers import make_rng, random_formula


def test_single_unit_clause():
    f = WeightedCNF()
    f.fresh_var()
    f.add_clause((1,))
    assert count_bruteforce(f) == 1
    assert count(f).value == 1


def test_h_weights_cancel_when_free():
    f = WeightedCNF()
    h = f.fresh_var()
    f.set_weight(-h, 1 / math.sqrt(2))
    f.set_weight(h, -1 / math.sqrt(2))
    assert count_bruteforce(f) == 0
    assert count(f).value == 0


def test_h_sandwich():
    f = simulation_formula(circuit(1, ("h", 0)), "0")
    assert abs(count_bruteforce(f) - 0.5) < 1e-12
    assert abs(count(f).value - 0.5) < 1e-12


def test_unsat():
    f = WeightedCNF()
    f.fresh_var()
    f.add_clause((1,))
    f.add_clause((-1,))
    assert count(f).value == 0
    assert count_bruteforce(f) == 0


def test_empty_formula_two_vars():
    f = WeightedCNF()
    f.fresh_vars(2)
    assert count(f).value == 4
    assert count_bruteforce(f) == 4


def test_no_pure_literal_elimination():
    f = WeightedCNF()
    x, y = f.fresh_vars(2)
    f.add_clause((x, y))
    for lit in (x, -x, y, -y):
        f.set_weight(lit, 1)
    assert count(f).value == 3
    assert count_bruteforce(f) == 3


def test_bruteforce_guard():
    f = WeightedCNF()
    f.fresh_vars(27)
    with pytest.raises(CounterError):
        count_bruteforce(f)


def test_components_and_cache_are_used():
    # two disjoint copies of the same structure: the second is a cache hit
    f = WeightedCNF()
    for _ in range(2):
        a, b, c = f.fresh_vars(3)
        f.add_clause((a, b))
        f.add_clause((-b, c))
        f.set_weight(a, 0.5j)
    res = count(f)
    assert res.cache_hits >= 1
    assert abs(res.value - count_bruteforce(f)) < 1e-12


def test_differential_small_batch():
    rng = make_rng(7)
    for _ in range(150):
        f = random_formula(rng, max_vars=14, max_clauses=40)
        ref = count_bruteforce(f)
        assert abs(count(f).value - ref) <= 1e-9 * (1 + abs(ref))


def test_determinism():
    rng = make_rng(11)
    for _ in range(20):
        f = random_formula(rng)
        a, b = count(f), count(f)
        assert a.value == b.value
        assert (a.decisions, a.propagations, a.cache_hits) == (b.decisions, b.propagations,
                                                                b.cache_hits)


def test_statevector_examples():
    assert np.allclose(statevector(circuit(1)), [1, 0])
    s = 1 / math.sqrt(2)
    assert np.allclose(statevector(circuit(1, ("h", 0))), [s, s], atol=1e-15)
    assert np.allclose(statevector(circuit(2, ("h", 0), ("cx", 0, 1))), [s, 0, 0, s], atol=1e-15)


def test_statevector_limit():
    from qcount.oracle import OracleError
    with pytest.raises(OracleError):
        statevector(circuit(13))
