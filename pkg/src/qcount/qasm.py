"""OpenQASM 2.0 subset reader and canonical printer."""
from __future__ import annotations

import ast
import math
import operator
import re

from .circuit import Circuit, Gate, lower_swaps
from .gates import GateError, is_registered, lookup


class QasmError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        super().__init__(f"line {line}, column {col}: {msg}" if line else msg)


_BINOPS = {
    ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
    ast.Div: operator.truediv, ast.Pow: operator.pow,
}
_FUNCS = {"sin": math.sin, "cos": math.cos, "tan": math.tan, "exp": math.exp,
          "ln": math.log, "sqrt": math.sqrt}


def eval_angle(expr: str) -> float:
    """Evaluate a constant arithmetic expression over ``pi``."""
    try:
        tree = ast.parse(expr.strip().replace("^", "**"), mode="eval")
    except SyntaxError:
        raise ValueError(f"bad expression {expr!r}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) \
                and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords:
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ValueError(f"unsupported expression {expr!r}")

    try:
        val = ev(tree)
    except (ZeroDivisionError, OverflowError) as e:
        raise ValueError(f"cannot evaluate {expr!r}: {e}") from None
    if not math.isfinite(val):
        raise ValueError(f"non-finite angle {expr!r}")
    return val


_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_QREG = re.compile(rf"qreg\s+({_IDENT})\s*\[\s*(\d+)\s*\]\s*$")
_CREG = re.compile(rf"creg\s+({_IDENT})\s*\[\s*(\d+)\s*\]\s*$")
_APPLY = re.compile(rf"({_IDENT})\s*(?:\((.*)\))?\s+(.+)$", re.S)
_ARG = re.compile(rf"^({_IDENT})(?:\s*\[\s*(\d+)\s*\])?$")
_REJECTED = {"measure": "measurement in circuit is not supported",
             "if": "classical control is not supported",
             "reset": "reset is not supported",
             "gate": "custom gate definitions are not supported",
             "opaque": "opaque gates are not supported"}


def _statements(text: str):
    """Yield (statement, line, col) with comments stripped."""
    text = re.sub(r"//[^\n]*", lambda m: " " * len(m.group()), text)
    start = 0
    for m in re.finditer(r";", text):
        chunk = text[start:m.start()]
        stripped = chunk.lstrip()
        if stripped:
            off = start + len(chunk) - len(stripped)
            line = text.count("\n", 0, off) + 1
            col = off - (text.rfind("\n", 0, off) + 1) + 1
            yield stripped.rstrip(), line, col
        start = m.end()
    rest = text[start:]
    if rest.strip():
        off = start + len(rest) - len(rest.lstrip())
        line = text.count("\n", 0, off) + 1
        col = off - (text.rfind("\n", 0, off) + 1) + 1
        raise QasmError("missing ';'", line, col)


def parse_qasm(text: str) -> Circuit:
    reg_name = None
    n = 0
    gates: list[Gate] = []
    for stmt, line, col in _statements(text):
        head = stmt.split(None, 1)[0].split("(")[0]
        if head == "OPENQASM":
            if stmt.split()[1:] not in (["2.0"], ["2"]):
                raise QasmError(f"unsupported version in {stmt!r}", line, col)
            continue
        if head == "include" or head == "barrier":
            continue
        if head in _REJECTED:
            raise QasmError(_REJECTED[head], line, col)
        if head == "qreg":
            m = _QREG.match(stmt)
            if not m:
                raise QasmError(f"syntax error in {stmt!r}", line, col)
            if reg_name is not None:
                raise QasmError("only a single quantum register is supported", line, col)
            reg_name, n = m.group(1), int(m.group(2))
            if n < 1:
                raise QasmError("register must have at least one qubit", line, col)
            continue
        if head == "creg":
            if not _CREG.match(stmt):
                raise QasmError(f"syntax error in {stmt!r}", line, col)
            continue
        m = _APPLY.match(stmt)
        if not m:
            raise QasmError(f"syntax error in {stmt!r}", line, col)
        name, params, args = m.group(1), m.group(2), m.group(3)
        if not is_registered(name):
            raise QasmError(f"unsupported gate {name!r}", line, col)
        if reg_name is None:
            raise QasmError("gate applied before qreg declaration", line, col)
        d = lookup(name)
        angle = None
        if d.parametric:
            if params is None or not params.strip():
                raise QasmError(f"{name} needs an angle", line, col)
            try:
                angle = eval_angle(params)
            except ValueError as e:
                raise QasmError(str(e), line, col) from None
        elif params is not None:
            raise QasmError(f"{name} takes no parameters", line, col)
        operands = []
        for a in args.split(","):
            am = _ARG.match(a.strip())
            if not am:
                raise QasmError(f"bad operand {a.strip()!r}", line, col)
            if am.group(1) != reg_name:
                raise QasmError(f"unknown register {am.group(1)!r}", line, col)
            operands.append(None if am.group(2) is None else int(am.group(2)))
        for q in operands:
            if q is not None and q >= n:
                raise QasmError(f"qubit index {q} out of range for {reg_name}[{n}]", line, col)
        try:
            if None in operands:
                if d.arity != 1 or len(operands) != 1:
                    raise QasmError("register broadcast only supported for 1-qubit gates",
                                    line, col)
                gates += [Gate(name, (q,), angle) for q in range(n)]
            else:
                gates.append(Gate(name, tuple(operands), angle))
        except GateError as e:
            raise QasmError(str(e), line, col) from None
    if reg_name is None:
        raise QasmError("no qreg declaration")
    return Circuit(n, lower_swaps(gates))


def to_qasm(c: Circuit) -> str:
    out = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{c.n}];"]
    for g in c.gates:
        args = ",".join(f"q[{q}]" for q in g.qubits)
        if g.angle is not None:
            out.append(f"{g.kind}({g.angle:.17g}) {args};")
        else:
            out.append(f"{g.kind} {args};")
    return "\n".join(out) + "\n"
