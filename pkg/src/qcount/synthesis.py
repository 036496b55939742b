"""Depth-optimal synthesis by iterative deepening over layered templates.

Each layer of the template picks one configuration: a set of gates from the
gate set on disjoint qubits, with identities filling the rest. At depth
``d`` the search maximizes the fidelity to the target over all selector
assignments (a Max#SAT query, answered here by exhaustive enumeration) and
stops at the first depth whose best candidate clears ``1 - epsilon``.

Two evaluation routes share the enumeration order:

* ``"matrix"``: partial products of layer unitaries are memoized and
  deduplicated, then every (prefix, suffix) pair is scored with one batched
  matrix product. Used for up to three qubits.
* ``"wmc"``: the cyclic parametric formula is built once per depth and
  counted with the selectors pinned, candidate by candidate.
"""
from __future__ import annotations

import itertools
import logging
import re
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .circuit import Circuit, Gate, dagger
from .cnf import CNFError, WeightedCNF, write_wdimacs
from .counter import count
from .encoder import encode_circuit, encode_identity, encode_matrix, free_frame
from .equivalence import EXACT_TOL, cyclic_trace, fidelity_from_trace
from .gates import GateError, lookup
from .oracle import circuit_unitary
from .qasm import eval_angle

log = logging.getLogger(__name__)

MATRIX_MAX_QUBITS = 3
TIE_TOL = 1e-12
_BLOCK = 2048


class SynthesisError(ValueError):
    pass


@dataclass(frozen=True)
class GateSet:
    entries: tuple[tuple[str, Optional[float]], ...]

    def __post_init__(self):
        clean = []
        for kind, angle in self.entries:
            d = lookup(kind)
            if d.name == "id":
                continue
            if d.parametric and angle is None:
                raise GateError(f"{d.name} in a gate set needs a fixed angle")
            if not d.parametric and angle is not None:
                raise GateError(f"{d.name} takes no angle")
            clean.append((d.name, None if angle is None else float(angle)))
        if not clean:
            raise GateError("gate set is empty")
        object.__setattr__(self, "entries", tuple(clean))

    @classmethod
    def of(cls, *kinds) -> "GateSet":
        return cls(tuple((k, None) if isinstance(k, str) else tuple(k) for k in kinds))

    @classmethod
    def parse(cls, text: str) -> "GateSet":
        """Parse ``"H,T,CX,RZ(pi/4)"``."""
        items = re.findall(r"([A-Za-z_]\w*)\s*(?:\(([^)]*)\))?", text)
        if not items or re.sub(r"[A-Za-z_]\w*\s*(\([^)]*\))?|[,\s]", "", text):
            raise GateError(f"bad gate list {text!r}")
        return cls(tuple((k, eval_angle(a) if a else None) for k, a in items))

    def __str__(self):
        return ",".join(k.upper() if a is None else f"{k.upper()}({a:.17g})"
                        for k, a in self.entries)


LayerConfig = tuple[Gate, ...]


def enumerate_layer_configs(gs: GateSet, n: int) -> list[LayerConfig]:
    """All maximal layers over ``gs`` plus identity, in deterministic order.

    The lowest uncovered qubit is filled first: by each gate-set entry in turn
    (every operand placement that includes that qubit, lexicographically),
    and finally by the identity.
    """
    if n < 1:
        raise SynthesisError("need at least one qubit")
    out: list[LayerConfig] = []

    def rec(free: tuple[int, ...], acc: list[Gate]):
        if not free:
            out.append(tuple(acc))
            return
        q, rest = free[0], free[1:]
        for kind, angle in gs.entries:
            k = lookup(kind).arity
            if k - 1 > len(rest):
                continue
            placements = []
            for others in itertools.combinations(rest, k - 1):
                placements += itertools.permutations((q,) + others)
            for ops in sorted(placements):
                acc.append(Gate(kind, ops, angle))
                rec(tuple(x for x in rest if x not in ops), acc)
                acc.pop()
        rec(rest, acc)

    rec(tuple(range(n)), [])
    return out


def config_circuit(n: int, configs: Sequence[LayerConfig], choice: Sequence[int]) -> Circuit:
    return Circuit(n, [g for layer, i in enumerate(choice) for g in configs[i]])


def encode_parametric(f: WeightedCNF, gs: GateSet, n: int, depth: int,
                      frame: Sequence[int], configs: Optional[list[LayerConfig]] = None):
    """Guarded layered template; returns ``(frame, selector_groups)``.

    Each layer gets fresh output variables and a one-hot selector group; the
    encoding of configuration ``i`` only binds the layer when selector ``i``
    is true.
    """
    if depth < 1:
        raise SynthesisError("depth must be at least 1")
    if len(frame) != n:
        raise SynthesisError("frame size does not match qubit count")
    configs = enumerate_layer_configs(gs, n) if configs is None else configs
    frame = list(frame)
    groups = []
    for _ in range(depth):
        out = f.fresh_vars(n)
        sel = f.fresh_vars(len(configs))
        f.add_clause(sel)
        for a, b in itertools.combinations(sel, 2):
            f.add_clause((-a, -b))
        for y, cfg in zip(sel, configs):
            covered = set()
            for g in cfg:
                encode_matrix(f, g.matrix(), [frame[q] for q in g.qubits],
                              [out[q] for q in g.qubits], guard=y)
                covered.update(g.qubits)
            for q in range(n):
                if q not in covered:
                    f.add_clause((-y, -frame[q], out[q]))
                    f.add_clause((-y, frame[q], -out[q]))
        groups.append(sel)
        frame = out
    return frame, groups


def synthesis_formula(target: Circuit, gs: GateSet, depth: int,
                      configs: Optional[list[LayerConfig]] = None):
    """Cyclic instance ``template(y) . target^dag`` closed on itself.

    Its count with the selectors pinned is ``Tr(U_y V^dag)``.
    """
    f = WeightedCNF()
    start = free_frame(f, target.n)
    frame, groups = encode_parametric(f, gs, target.n, depth, start, configs)
    frame = encode_circuit(f, dagger(target), frame)
    encode_identity(f, frame, start)
    return f, groups


def export_maxcount(f: WeightedCNF, selectors: Sequence[Sequence[int]]) -> str:
    """wDIMACS text with ``c max`` lines marking the selector variables."""
    flat = [v for group in selectors for v in group]
    if not flat:
        raise SynthesisError("no selector variables to maximize over")
    g = f.copy()
    for v in flat:
        try:
            g.mark_max(v)
        except CNFError as e:
            raise SynthesisError(str(e)) from None
    return write_wdimacs(g)


@dataclass
class IterationStats:
    depth: int
    candidates: int
    evaluated: int
    best_fidelity: float
    seconds: float


@dataclass
class SynthesisResult:
    circuit: Circuit
    depth: int
    fidelity: float
    iterations: int
    success: bool
    choice: tuple[int, ...] = ()
    stats: list[IterationStats] = field(default_factory=list)


def _threshold(epsilon: float) -> float:
    return 1 - max(epsilon, EXACT_TOL)


class _MatrixSearch:
    """Batched fidelity evaluation over memoized layer products."""

    def __init__(self, target: Circuit, configs: list[LayerConfig]):
        self.n = target.n
        self.dim = 2 ** self.n
        self.k = len(configs)
        self.id_index = configs.index(())
        self.layer = np.stack([circuit_unitary(Circuit(self.n, cfg)) for cfg in configs])
        self.vdag = circuit_unitary(target).conj().T
        self.levels = {0: (np.eye(self.dim, dtype=complex)[None], np.zeros(1, dtype=np.int64))}
        rng = np.random.default_rng(0)
        self._mix = rng.integers(1, 2 ** 62, size=2 * self.dim * self.dim, dtype=np.int64)

    def _dedup(self, mats, orig):
        """Drop products equal (up to global phase) to an earlier one."""
        flat = mats.reshape(len(mats), -1)
        pivot = np.argmax(np.abs(flat) > 1e-6, axis=1)
        ph = flat[np.arange(len(flat)), pivot]
        norm = flat * (np.abs(ph) / ph)[:, None]
        q = np.round(np.concatenate([norm.real, norm.imag], axis=1) * 1e8).astype(np.int64)
        h = q @ self._mix
        _, first, inverse = np.unique(h, return_index=True, return_inverse=True)
        rep = first[inverse.reshape(-1)]
        dup = (rep != np.arange(len(flat))) & np.all(q == q[rep], axis=1)
        keep = ~dup
        return mats[keep], orig[keep]

    def level(self, a: int):
        if a not in self.levels:
            prev, porig = self.level(a - 1)
            mats = np.einsum("lij,pjk->plik", self.layer, prev).reshape(-1, self.dim, self.dim)
            orig = (porig[:, None] * self.k + np.arange(self.k)[None, :]).reshape(-1)
            self.levels[a] = self._dedup(mats, orig)
        return self.levels[a]

    def _blocks(self, d: int):
        a = (d + 1) // 2
        b = d - a
        pre, pre_orig = self.level(a)
        suf, suf_orig = self.level(b)
        if b:
            # a final identity layer is a depth d-1 circuit, already rejected
            mask = suf_orig % self.k != self.id_index
            suf, suf_orig = suf[mask], suf_orig[mask]
        amat = suf.reshape(len(suf), -1)
        scale = float(self.k) ** b
        for start in range(0, len(pre), _BLOCK):
            p = pre[start:start + _BLOCK]
            m = p @ self.vdag
            bmat = m.transpose(0, 2, 1).reshape(len(p), -1)
            tr = amat @ bmat.T
            fid = np.abs(tr) ** 2 / self.dim ** 2
            yield fid, tr, pre_orig[start:start + _BLOCK], suf_orig, scale

    def best(self, d: int):
        evaluated = 0
        best = -1.0
        for fid, _, _, _, _ in self._blocks(d):
            evaluated += fid.size
            if fid.size:
                best = max(best, float(fid.max()))
        if best < 0:
            return None
        for fid, tr, porig, sorig, scale in self._blocks(d):
            hits = np.argwhere(fid >= best - TIE_TOL)
            if len(hits):
                gidx = sorig[hits[:, 0]].astype(float) + porig[hits[:, 1]].astype(float) * scale
                i = int(np.argmin(gidx))
                si, pj = hits[i]
                index = int(porig[pj]) * self.k ** (d - (d + 1) // 2) + int(sorig[si])
                return float(fid[si, pj]), complex(tr[si, pj]), index, evaluated
        return None


def _decode(index: int, k: int, d: int) -> tuple[int, ...]:
    digits = []
    for _ in range(d):
        index, r = divmod(index, k)
        digits.append(r)
    return tuple(reversed(digits))


def synthesize(target: Circuit, gs: GateSet, epsilon: float = 0.0, max_depth: int = 4,
               method: str = "auto") -> SynthesisResult:
    """Find a minimum-depth circuit over ``gs`` within fidelity ``1 - epsilon`` of ``target``."""
    if not 0 <= epsilon <= 1:
        raise SynthesisError(f"epsilon {epsilon!r} outside [0, 1]")
    if max_depth < 1:
        raise SynthesisError("max_depth must be at least 1")
    if method == "auto":
        method = "matrix" if target.n <= MATRIX_MAX_QUBITS else "wmc"
    if method not in ("matrix", "wmc"):
        raise SynthesisError(f"unknown method {method!r}")
    n = target.n
    configs = enumerate_layer_configs(gs, n)
    k = len(configs)
    id_index = configs.index(())
    threshold = _threshold(epsilon)
    search = _MatrixSearch(target, configs) if method == "matrix" else None
    stats: list[IterationStats] = []
    best_overall = None
    for d in range(1, max_depth + 1):
        t0 = time.perf_counter()
        candidates = k ** d if d == 1 else k ** (d - 1) * (k - 1)
        if search is not None:
            found = search.best(d)
            if found is None:
                continue
            fid, _, index, evaluated = found
            choice = _decode(index, k, d)
        else:
            fid, choice, evaluated = _wmc_best(target, gs, configs, d, id_index)
        dt = time.perf_counter() - t0
        stats.append(IterationStats(d, candidates, evaluated, fid, dt))
        log.info("depth %d: best fidelity %.12g over %d candidates (%.2fs)", d, fid, candidates, dt)
        if best_overall is None or fid > best_overall[0] + TIE_TOL:
            best_overall = (fid, choice, d)
        if fid >= threshold:
            return SynthesisResult(config_circuit(n, configs, choice), d, fid, d, True,
                                   choice, stats)
    fid, choice, d = best_overall
    return SynthesisResult(config_circuit(n, configs, choice), d, fid, max_depth, False,
                           choice, stats)


def _wmc_best(target, gs, configs, d, id_index):
    f, groups = synthesis_formula(target, gs, d, configs)
    scored = []
    for choice in itertools.product(range(len(configs)), repeat=d):
        if d > 1 and choice[-1] == id_index:
            continue
        units = [groups[layer][i] for layer, i in enumerate(choice)]
        tr = count(f.with_units(units)).value
        scored.append((fidelity_from_trace(tr, target.n), choice))
    top = max(fid for fid, _ in scored)
    fid, choice = next(s for s in scored if s[0] >= top - TIE_TOL)
    return fid, choice, len(scored)


def verify_result(result: SynthesisResult, target: Circuit) -> float:
    """Fidelity of the extracted circuit against the target, through the counter."""
    return fidelity_from_trace(cyclic_trace(result.circuit, target), target.n)
