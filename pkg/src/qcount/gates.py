"""Gate kinds, their unitary matrices, and the extension registry.

Matrices use the big-endian convention: for a gate on operands
``(a, b, ...)`` the local basis index has ``a`` as its most significant bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

_SQ2 = math.sqrt(0.5)
_SX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])


class GateError(ValueError):
    pass


def _controlled(u: np.ndarray) -> np.ndarray:
    k = u.shape[0]
    m = np.eye(2 * k, dtype=complex)
    m[k:, k:] = u
    return m


@dataclass(frozen=True)
class GateDef:
    name: str
    arity: int
    matrix_fn: Callable[[Optional[float]], np.ndarray] = field(compare=False)
    adjoint: str
    parametric: bool = False
    # phase on |1> for single-qubit diagonal gates; None when not diagonal
    phase_fn: Optional[Callable[[Optional[float]], complex]] = field(default=None, compare=False)

    def matrix(self, angle: Optional[float] = None) -> np.ndarray:
        return self.matrix_fn(angle)


_REGISTRY: dict[str, GateDef] = {}


def _fixed(m) -> Callable[[Optional[float]], np.ndarray]:
    arr = np.array(m, dtype=complex)
    arr.setflags(write=False)
    return lambda _angle=None: arr


def _builtin(name, arity, matrix_fn, adjoint, parametric=False, phase_fn=None):
    _REGISTRY[name] = GateDef(name, arity, matrix_fn, adjoint, parametric, phase_fn)


def _phase(p: complex):
    return lambda _angle=None: p


def _rx(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def _ry(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(t):
    # global-phase-free convention diag(1, e^{i t})
    return np.array([[1, 0], [0, np.exp(1j * t)]])


_T = complex(np.exp(1j * math.pi / 4))

_builtin("id", 1, _fixed(np.eye(2)), "id")
_builtin("x", 1, _fixed([[0, 1], [1, 0]]), "x")
_builtin("y", 1, _fixed([[0, -1j], [1j, 0]]), "y")
_builtin("z", 1, _fixed([[1, 0], [0, -1]]), "z", phase_fn=_phase(-1))
_builtin("h", 1, _fixed(np.array([[1, 1], [1, -1]]) * _SQ2), "h")
_builtin("s", 1, _fixed([[1, 0], [0, 1j]]), "sdg", phase_fn=_phase(1j))
_builtin("sdg", 1, _fixed([[1, 0], [0, -1j]]), "s", phase_fn=_phase(-1j))
_builtin("t", 1, _fixed([[1, 0], [0, _T]]), "tdg", phase_fn=_phase(_T))
_builtin("tdg", 1, _fixed([[1, 0], [0, _T.conjugate()]]), "t", phase_fn=_phase(_T.conjugate()))
_builtin("rx", 1, _rx, "rx", parametric=True)
_builtin("ry", 1, _ry, "ry", parametric=True)
_builtin("rz", 1, _rz, "rz", parametric=True,
         phase_fn=lambda t: complex(np.exp(1j * t)))
_builtin("cx", 2, _fixed(_controlled(np.array([[0, 1], [1, 0]]))), "cx")
_builtin("cz", 2, _fixed(np.diag([1, 1, 1, -1])), "cz")
_builtin("csx", 2, _fixed(_controlled(_SX)), "csxdg")
_builtin("csxdg", 2, _fixed(_controlled(_SX.conj().T)), "csx")
_builtin("ccx", 3, _fixed(_controlled(_controlled(np.array([[0, 1], [1, 0]])))), "ccx")
_builtin("swap", 2, _fixed([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]), "swap")

BUILTIN_KINDS = frozenset(_REGISTRY)


def lookup(name: str) -> GateDef:
    try:
        return _REGISTRY[name.lower()]
    except KeyError:
        raise GateError(f"unsupported gate {name!r}") from None


def is_registered(name: str) -> bool:
    return name.lower() in _REGISTRY


def registered_kinds() -> list[str]:
    return sorted(_REGISTRY)


def register_gate(name: str, matrix) -> GateDef:
    """Register a user gate by its unitary matrix.

    The adjoint is registered alongside as ``<name>_dg`` unless the matrix is
    self-adjoint. Returns the definition of the new gate.
    """
    name = name.lower()
    if name in BUILTIN_KINDS:
        raise GateError(f"cannot redefine built-in gate {name!r}")
    m = np.array(matrix, dtype=complex)
    dim = m.shape[0]
    if m.ndim != 2 or m.shape[1] != dim or dim < 2 or dim & (dim - 1):
        raise GateError(f"gate {name!r}: matrix must be 2^k x 2^k")
    if not np.all(np.isfinite(m)):
        raise GateError(f"gate {name!r}: non-finite matrix entry")
    if not np.allclose(m @ m.conj().T, np.eye(dim), atol=1e-9):
        raise GateError(f"gate {name!r}: matrix is not unitary")
    arity = dim.bit_length() - 1
    adj = m.conj().T
    if np.allclose(adj, m, atol=1e-12):
        _REGISTRY[name] = GateDef(name, arity, _fixed(m), name)
    else:
        _REGISTRY[name] = GateDef(name, arity, _fixed(m), name + "_dg")
        _REGISTRY[name + "_dg"] = GateDef(name + "_dg", arity, _fixed(adj), name)
    return _REGISTRY[name]


def unregister_gate(name: str) -> None:
    name = name.lower()
    if name in BUILTIN_KINDS:
        raise GateError(f"cannot remove built-in gate {name!r}")
    d = _REGISTRY.pop(name, None)
    if d is not None and d.adjoint != name:
        _REGISTRY.pop(d.adjoint, None)


def parse_gate_config(text: str) -> list[tuple[str, np.ndarray]]:
    """Parse a gate-extension file.

    Each gate is a header line ``name arity`` followed by ``2**arity`` rows of
    space-separated ``re,im`` pairs. Blank lines and ``#`` comments are skipped.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    out = []
    i = 0
    while i < len(lines):
        head = lines[i].split()
        if len(head) != 2 or not head[1].isdigit():
            raise GateError(f"bad gate header {lines[i]!r}")
        name, arity = head[0], int(head[1])
        dim = 2 ** arity
        rows = lines[i + 1:i + 1 + dim]
        if len(rows) != dim:
            raise GateError(f"gate {name!r}: expected {dim} matrix rows")
        m = np.zeros((dim, dim), dtype=complex)
        for r, row in enumerate(rows):
            pairs = row.split()
            if len(pairs) != dim:
                raise GateError(f"gate {name!r}: row {r} needs {dim} entries")
            for c, pair in enumerate(pairs):
                try:
                    re_s, im_s = pair.split(",")
                    m[r, c] = complex(float(re_s), float(im_s))
                except ValueError:
                    raise GateError(f"gate {name!r}: bad entry {pair!r}") from None
        out.append((name, m))
        i += 1 + dim
    return out


def load_gate_config(text: str) -> list[GateDef]:
    return [register_gate(name, m) for name, m in parse_gate_config(text)]
