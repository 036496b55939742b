"""Exact complex weighted model counting.

Two independent routes: :func:`count_bruteforce` enumerates assignments, and
:func:`count` runs an exhaustive DPLL search with unit propagation,
connected-component decomposition and component caching.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field

import numpy as np

from .cnf import WeightedCNF
from .oracle import statevector  # noqa: F401  (re-exported oracle)

BRUTEFORCE_LIMIT = 26


class CounterError(ValueError):
    pass


@dataclass
class CountResult:
    value: complex
    decisions: int = 0
    propagations: int = 0
    cache_hits: int = 0
    components: int = 0
    stats: dict = field(default_factory=dict)

    def __complex__(self):
        return self.value


def count_bruteforce(f: WeightedCNF, limit: int = BRUTEFORCE_LIMIT) -> complex:
    """Sum of assignment weights over all models, by full enumeration."""
    n = f.num_vars
    if n > limit:
        raise CounterError(f"{n} variables exceeds the brute-force limit of {limit}")
    if n == 0:
        return 1.0 + 0j if not f.clauses else 0j
    total = 0j
    chunk_bits = min(n, 20)
    low = np.arange(2 ** chunk_bits, dtype=np.int64)
    for hi in range(2 ** (n - chunk_bits)):
        idx = (np.int64(hi) << chunk_bits) | low
        # bits[v-1] is the value of variable v
        bits = ((idx[None, :] >> np.arange(n, dtype=np.int64)[:, None]) & 1).astype(bool)
        ok = np.ones(idx.shape, dtype=bool)
        for clause in f.clauses:
            sat = np.zeros(idx.shape, dtype=bool)
            for lit in clause:
                sat |= bits[lit - 1] if lit > 0 else ~bits[-lit - 1]
            ok &= sat
            if not ok.any():
                break
        if not ok.any():
            continue
        w = np.ones(int(ok.sum()), dtype=complex)
        sel = bits[:, ok]
        for v in range(1, n + 1):
            wp, wn = f.weight(v), f.weight(-v)
            if wp != 1 or wn != 1:
                w *= np.where(sel[v - 1], wp, wn)
        total += w.sum()
    return complex(total)


class _Search:
    def __init__(self, weights: dict[int, complex]):
        self.weights = weights
        self.cache: dict = {}
        self.decisions = 0
        self.propagations = 0
        self.cache_hits = 0
        self.components = 0

    def w(self, lit: int) -> complex:
        return self.weights.get(lit, 1.0)

    def free_factor(self, v: int) -> complex:
        return self.weights.get(v, 1.0) + self.weights.get(-v, 1.0)

    def propagate(self, clauses, units):
        """Apply ``units`` and everything they imply.

        Returns ``(clauses, assigned)`` or ``None`` on conflict.
        """
        assigned: set[int] = set()
        for u in units:
            if -u in assigned:
                return None
            assigned.add(u)
        changed = True
        while changed:
            changed = False
            out = []
            for c in clauses:
                keep = []
                sat = False
                for lit in c:
                    if lit in assigned:
                        sat = True
                        break
                    if -lit not in assigned:
                        keep.append(lit)
                if sat:
                    continue
                if not keep:
                    return None
                if len(keep) == 1:
                    u = keep[0]
                    assigned.add(u)
                    self.propagations += 1
                    changed = True
                    continue
                out.append(keep if len(keep) != len(c) else c)
            clauses = out
        return clauses, assigned

    def solve(self, clauses, varset: frozenset, units=()) -> complex:
        """Count ``clauses`` over ``varset`` after asserting ``units``."""
        res = self.propagate(clauses, units)
        if res is None:
            return 0j
        clauses, assigned = res
        value = 1.0 + 0j
        for lit in sorted(assigned, key=abs):
            value *= self.w(lit)
        if value == 0:
            return 0j
        comps = _components(clauses)
        used = set()
        for comp_vars, _ in comps:
            used |= comp_vars
        for v in sorted(varset):
            if v not in used and v not in assigned and -v not in assigned:
                value *= self.free_factor(v)
        for comp_vars, comp_clauses in comps:
            if value == 0:
                return 0j
            value *= self.component(comp_clauses, comp_vars)
        return value

    def component(self, clauses, comp_vars) -> complex:
        self.components += 1
        key = self.cache_key(clauses)
        hit = self.cache.get(key)
        if hit is not None:
            self.cache_hits += 1
            return hit
        occ: dict[int, int] = {}
        for c in clauses:
            for lit in c:
                v = abs(lit)
                occ[v] = occ.get(v, 0) + 1
        branch = min(occ, key=lambda v: (-occ[v], v))
        rest = frozenset(comp_vars - {branch})
        total = 0j
        for lit in (branch, -branch):
            if self.w(lit) == 0:
                continue
            self.decisions += 1
            # solve() weighs the branch literal along with the implied ones
            total += self.solve(clauses, rest, (lit,))
        self.cache[key] = total
        return total

    def cache_key(self, clauses):
        norm = sorted(tuple(sorted(c, key=lambda l: (abs(l), l < 0))) for c in clauses)
        rename: dict[int, int] = {}
        order = []
        out = []
        for c in norm:
            cc = []
            for lit in c:
                v = abs(lit)
                r = rename.get(v)
                if r is None:
                    r = rename[v] = len(rename) + 1
                    order.append(v)
                cc.append(r if lit > 0 else -r)
            out.append(tuple(cc))
        ws = tuple((self.w(v), self.w(-v)) for v in order)
        return tuple(out), ws


def _components(clauses):
    """Split clauses into variable-connected groups, in deterministic order."""
    parent: dict[int, int] = {}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for c in clauses:
        first = abs(c[0])
        parent.setdefault(first, first)
        rf = find(first)
        for lit in c[1:]:
            v = abs(lit)
            parent.setdefault(v, v)
            rv = find(v)
            if rv != rf:
                if rv < rf:
                    rf, rv = rv, rf
                parent[rv] = rf
    groups: dict[int, tuple[set, list]] = {}
    for c in clauses:
        r = find(abs(c[0]))
        if r not in groups:
            groups[r] = (set(), [])
        groups[r][1].append(c)
    for v in parent:
        groups[find(v)][0].add(v)
    return [groups[r] for r in sorted(groups)]


def count(f: WeightedCNF) -> CountResult:
    """Exact weighted model count by DPLL search with component caching."""
    limit = sys.getrecursionlimit()
    need = 4 * f.num_vars + 1000
    if limit < need:
        sys.setrecursionlimit(need)
    try:
        s = _Search(f.weights)
        value = s.solve(list(f.clauses), frozenset(range(1, f.num_vars + 1)))
    finally:
        sys.setrecursionlimit(limit)
    return CountResult(complex(value), s.decisions, s.propagations, s.cache_hits,
                       s.components)


def count_with(f: WeightedCNF, solver: str = "dpll") -> CountResult:
    if solver == "dpll":
        return count(f)
    if solver == "bruteforce":
        return CountResult(count_bruteforce(f))
    raise CounterError(f"unknown solver {solver!r}")
