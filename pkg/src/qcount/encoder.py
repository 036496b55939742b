"""Computational-basis encoding of states, gates, projectors and circuits.

A frame is a list holding, for each qubit, the CNF variable that currently
represents it. Encoding a gate conjoins its transition relation and returns
the frame after the gate, so that the count of
``state(frame) & gate(frame -> frame')`` with ``frame'`` pinned to ``r`` is the
amplitude of ``|r>`` in ``U|state>``.
"""
from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from .circuit import Circuit, Gate
from .cnf import WeightedCNF
from .gates import lookup

QubitFrame = list[int]

_SQ2 = math.sqrt(0.5)
_ZERO_TOL = 1e-15


class EncodingError(ValueError):
    pass


def _bit_lit(var: int, bit: int) -> int:
    return var if bit else -var


def encode_basis_state(f: WeightedCNF, bits: str) -> QubitFrame:
    if not bits or set(bits) - {"0", "1"}:
        raise EncodingError(f"bad basis label {bits!r}")
    frame = f.fresh_vars(len(bits))
    for v, b in zip(frame, bits):
        f.add_clause((_bit_lit(v, b == "1"),))
    return frame


def encode_zero_state(f: WeightedCNF, n: int) -> QubitFrame:
    if n < 1:
        raise EncodingError("need at least one qubit")
    return encode_basis_state(f, "0" * n)


def free_frame(f: WeightedCNF, n: int) -> QubitFrame:
    return f.fresh_vars(n)


def encode_bra(f: WeightedCNF, frame: Sequence[int], bits: str) -> None:
    """Pin ``frame`` to the basis bra ``<bits|`` (real unit amplitude, no weights)."""
    if len(bits) != len(frame):
        raise EncodingError(f"bra length {len(bits)} does not match {len(frame)} qubit(s)")
    if set(bits) - {"0", "1"}:
        raise EncodingError(f"bad basis label {bits!r}")
    for v, b in zip(frame, bits):
        f.add_clause((_bit_lit(v, b == "1"),))


def normalize_projector(spec) -> list[str]:
    """Accept ``"0I1"`` or ``["P0", "I", "P1"]``; return symbols in {'I','0','1'}."""
    syms = list(spec) if isinstance(spec, str) else [str(s) for s in spec]
    out = []
    for s in syms:
        s = s.upper()
        if s in ("I", "0", "1"):
            out.append(s)
        elif s in ("P0", "P1"):
            out.append(s[1])
        else:
            raise EncodingError(f"bad projector symbol {s!r}")
    return out


def encode_projector(f: WeightedCNF, spec, frame: Sequence[int]) -> QubitFrame:
    syms = normalize_projector(spec)
    if len(syms) != len(frame):
        raise EncodingError(f"projector length {len(syms)} does not match {len(frame)} qubit(s)")
    for v, s in zip(frame, syms):
        if s != "I":
            f.add_clause((_bit_lit(v, s == "1"),))
    return list(frame)


def encode_identity(f: WeightedCNF, a: Sequence[int], b: Sequence[int]) -> None:
    """Clauses for ``a[i] <-> b[i]``."""
    if len(a) != len(b):
        raise EncodingError("frame size mismatch")
    for x, y in zip(a, b):
        if x != y:
            f.add_clause((-x, y))
            f.add_clause((x, -y))


def _iff_and(f: WeightedCNF, aux: int, lits: Sequence[int], guard: Optional[int] = None):
    g = () if guard is None else (-guard,)
    for lit in lits:
        f.add_clause(g + (-aux, lit))
    f.add_clause(g + (aux,) + tuple(-l for l in lits))


def _iff_xor(f: WeightedCNF, out: int, a: int, b: int):
    f.add_clause((-out, a, b))
    f.add_clause((-out, -a, -b))
    f.add_clause((out, -a, b))
    f.add_clause((out, a, -b))


def encode_matrix(f: WeightedCNF, matrix: np.ndarray, frame: Sequence[int],
                  out: Optional[Sequence[int]] = None,
                  guard: Optional[int] = None) -> QubitFrame:
    """Entry-indexed encoding of an arbitrary ``2^k x 2^k`` matrix.

    One auxiliary per nonzero entry ``U[r][c]`` is true exactly when the input
    spells ``c`` and the output spells ``r``; it carries weight ``U[r][c]``.
    A covering clause excludes transitions through zero entries. With a
    ``guard`` variable every clause is conditioned on it and the auxiliaries
    are forced false (weight 1) when the guard is false.
    """
    k = len(frame)
    dim = 2 ** k
    if matrix.shape != (dim, dim):
        raise EncodingError(f"matrix shape {matrix.shape} does not fit {k} qubit(s)")
    out = list(f.fresh_vars(k) if out is None else out)
    g = () if guard is None else (-guard,)
    cover = []
    for r in range(dim):
        for c in range(dim):
            w = complex(matrix[r, c])
            if abs(w) <= _ZERO_TOL:
                continue
            e = f.fresh_var()
            lits = [_bit_lit(frame[i], (c >> (k - 1 - i)) & 1) for i in range(k)]
            lits += [_bit_lit(out[i], (r >> (k - 1 - i)) & 1) for i in range(k)]
            _iff_and(f, e, lits, guard)
            if guard is not None:
                f.add_clause((-e, guard))
            if w != 1:
                f.set_weight(e, w)
            cover.append(e)
    if not cover:
        raise EncodingError("matrix has no nonzero entry")
    f.add_clause(g + tuple(cover))
    return out


def encode_gate(f: WeightedCNF, g: Gate, frame: Sequence[int]) -> QubitFrame:
    qs = g.qubits
    if max(qs) >= len(frame):
        raise EncodingError(f"{g!r} does not fit a {len(frame)}-qubit frame")
    new = list(frame)
    kind = g.kind
    d = lookup(kind)
    if kind == "id":
        return new
    if kind == "swap":
        a, b = qs
        new[a], new[b] = new[b], new[a]
        return new
    if kind == "x":
        q = frame[qs[0]]
        q2 = f.fresh_var()
        f.add_clause((q, q2))
        f.add_clause((-q, -q2))
        new[qs[0]] = q2
        return new
    if kind == "h":
        q = frame[qs[0]]
        q2, h = f.fresh_var(), f.fresh_var()
        _iff_and(f, h, (q, q2))
        f.set_weight(h, -_SQ2)
        f.set_weight(-h, _SQ2)
        new[qs[0]] = q2
        return new
    if d.arity == 1 and d.phase_fn is not None:
        q = frame[qs[0]]
        p = f.fresh_var()
        f.add_clause((-p, q))
        f.add_clause((p, -q))
        f.set_weight(p, d.phase_fn(g.angle))
        return new
    if kind == "cx":
        c, t = frame[qs[0]], frame[qs[1]]
        t2 = f.fresh_var()
        _iff_xor(f, t2, c, t)
        new[qs[1]] = t2
        return new
    if kind == "cz":
        p = f.fresh_var()
        _iff_and(f, p, (frame[qs[0]], frame[qs[1]]))
        f.set_weight(p, -1)
        return new
    if kind == "ccx":
        c1, c2, t = (frame[q] for q in qs)
        a = f.fresh_var()
        _iff_and(f, a, (c1, c2))
        t2 = f.fresh_var()
        _iff_xor(f, t2, t, a)
        new[qs[2]] = t2
        return new
    out = encode_matrix(f, g.matrix(), [frame[q] for q in qs])
    for q, v in zip(qs, out):
        new[q] = v
    return new


def encode_circuit(f: WeightedCNF, c: Circuit, frame: Sequence[int]) -> QubitFrame:
    if len(frame) != c.n:
        raise EncodingError(f"frame has {len(frame)} entries, circuit has {c.n} qubits")
    frame = list(frame)
    for g in c.gates:
        frame = encode_gate(f, g, frame)
    return frame
