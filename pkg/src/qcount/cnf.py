"""Complex-weighted CNF formulas and the weighted DIMACS dialect.

Literals are non-zero ints in DIMACS style (``-3`` is the negation of
variable 3). Weights are stored sparsely; an unlisted literal weighs 1.

File layout::

    c t wmc
    p cnf <vars> <clauses>
    c p weight <lit> <re> <im> 0      (one per weighted literal)
    c max <var>                       (optional, selector variables)
    <lit> <lit> ... 0                 (one per clause)
"""
from __future__ import annotations

import cmath
from contextlib import contextmanager
from typing import Iterable, Optional


class CNFError(ValueError):
    pass


class WeightedCNF:
    def __init__(self):
        self.num_vars = 0
        self.clauses: list[tuple[int, ...]] = []
        self.weights: dict[int, complex] = {}
        self.max_vars: list[int] = []

    def fresh_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def fresh_vars(self, k: int) -> list[int]:
        return [self.fresh_var() for _ in range(k)]

    def _check_lit(self, lit: int):
        if not isinstance(lit, int) or lit == 0 or abs(lit) > self.num_vars:
            raise CNFError(f"literal {lit!r} refers to an unallocated variable")

    def add_clause(self, lits: Iterable[int]) -> None:
        seen: list[int] = []
        for lit in lits:
            self._check_lit(lit)
            if -lit in seen:
                raise CNFError(f"tautological clause (contains {lit} and {-lit})")
            if lit not in seen:
                seen.append(lit)
        if not seen:
            raise CNFError("empty clause")
        self.clauses.append(tuple(seen))

    def add_clauses(self, clauses: Iterable[Iterable[int]]) -> None:
        for c in clauses:
            self.add_clause(c)

    def set_weight(self, lit: int, w: complex) -> None:
        self._check_lit(lit)
        w = complex(w)
        if not (cmath.isfinite(w)):
            raise CNFError(f"non-finite weight {w!r}")
        self.weights[lit] = w

    def weight(self, lit: int) -> complex:
        return self.weights.get(lit, 1.0)

    def mark_max(self, var: int) -> None:
        self._check_lit(var)
        if var not in self.max_vars:
            self.max_vars.append(var)

    def conjugate_weights(self, first_var: int = 1, last_var: Optional[int] = None) -> None:
        """Complex-conjugate all weights on variables in ``[first_var, last_var]``."""
        last = self.num_vars if last_var is None else last_var
        for lit, w in self.weights.items():
            if first_var <= abs(lit) <= last:
                self.weights[lit] = w.conjugate()

    def copy(self) -> "WeightedCNF":
        f = WeightedCNF()
        f.num_vars = self.num_vars
        f.clauses = list(self.clauses)
        f.weights = dict(self.weights)
        f.max_vars = list(self.max_vars)
        return f

    def with_units(self, lits: Iterable[int]) -> "WeightedCNF":
        f = self.copy()
        for lit in lits:
            f.add_clause((lit,))
        return f

    def __eq__(self, other):
        if not isinstance(other, WeightedCNF):
            return NotImplemented
        return (self.num_vars == other.num_vars and self.clauses == other.clauses
                and self.weights == other.weights and self.max_vars == other.max_vars)

    def __repr__(self):
        return (f"WeightedCNF(vars={self.num_vars}, clauses={len(self.clauses)}, "
                f"weights={len(self.weights)})")


@contextmanager
def bra_weights(f: WeightedCNF):
    """Conjugate every weight introduced inside the block.

    Turns a ket encoding built in the block into the matching bra encoding.
    """
    mark = f.num_vars
    yield f
    f.conjugate_weights(mark + 1)


def _fmt(x: float) -> str:
    # repr is the shortest string that round-trips the double
    x = float(x) + 0.0
    s = repr(x)
    return s[:-2] if s.endswith(".0") else s


def write_wdimacs(f: WeightedCNF) -> str:
    out = ["c t wmc", f"p cnf {f.num_vars} {len(f.clauses)}"]
    for lit in sorted(f.weights, key=lambda l: (abs(l), l < 0)):
        w = f.weights[lit]
        out.append(f"c p weight {lit} {_fmt(w.real)} {_fmt(w.imag)} 0")
    for v in f.max_vars:
        out.append(f"c max {v}")
    for c in f.clauses:
        out.append(" ".join(map(str, c)) + " 0")
    return "\n".join(out) + "\n"


def parse_wdimacs(text: str) -> WeightedCNF:
    f = WeightedCNF()
    header = None
    pending: list[int] = []
    weights: list[tuple[int, complex, int]] = []
    maxes: list[tuple[int, int]] = []
    clauses: list[tuple[list[int], int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if parts[:3] == ["c", "p", "weight"]:
                if len(parts) not in (6, 7) or (len(parts) == 7 and parts[6] != "0"):
                    raise CNFError(f"line {lineno}: bad weight line")
                try:
                    lit = int(parts[3])
                    w = complex(float(parts[4]), float(parts[5]))
                except ValueError:
                    raise CNFError(f"line {lineno}: bad weight line") from None
                weights.append((lit, w, lineno))
            elif parts[:2] == ["c", "max"]:
                try:
                    maxes += [(int(p), lineno) for p in parts[2:] if p != "0"]
                except ValueError:
                    raise CNFError(f"line {lineno}: bad max line") from None
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf" or header is not None:
                raise CNFError(f"line {lineno}: bad header")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise CNFError(f"line {lineno}: bad header") from None
            continue
        if header is None:
            raise CNFError(f"line {lineno}: clause before header")
        try:
            nums = [int(t) for t in line.split()]
        except ValueError:
            raise CNFError(f"line {lineno}: bad clause line") from None
        for x in nums:
            if x == 0:
                clauses.append((pending, lineno))
                pending = []
            else:
                pending.append(x)
    if header is None:
        raise CNFError("missing 'p cnf' header")
    if pending:
        raise CNFError("last clause not terminated by 0")
    nvars, ncl = header
    if ncl != len(clauses):
        raise CNFError(f"header declares {ncl} clauses, found {len(clauses)}")
    f.num_vars = nvars
    try:
        for lits, lineno in clauses:
            f.add_clause(lits)
        for lit, w, lineno in weights:
            f.set_weight(lit, w)
        for v, lineno in maxes:
            f.mark_max(v)
    except CNFError as e:
        raise CNFError(f"line {lineno}: {e}") from None
    return f
