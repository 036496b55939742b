"""Run reports: the machine-readable RESULT line and optional figures."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


@dataclass
class RunReport:
    subcommand: str
    inputs: list[str]
    result: dict[str, Any]
    seconds: float = 0.0
    stats: dict[str, Any] = field(default_factory=dict)

    def line(self) -> str:
        payload = {"subcommand": self.subcommand, "inputs": self.inputs,
                   "result": self.result, "seconds": round(self.seconds, 6),
                   "stats": self.stats}
        return "RESULT " + json.dumps(payload, sort_keys=True, default=_jsonable)


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


def parse_result_line(text: str) -> dict:
    for ln in text.splitlines():
        if ln.startswith("RESULT "):
            return json.loads(ln[len("RESULT "):])
    raise ValueError("no RESULT line")


def plot_synthesis(stats: Sequence, threshold: float, path) -> Path:
    """Best fidelity reached at each depth, against the acceptance threshold."""
    path = Path(path)
    depths = [s.depth for s in stats]
    fids = [s.best_fidelity for s in stats]
    fig, (ax, ax2) = plt.subplots(1, 2, figsize=(8, 3.2))
    ax.plot(depths, fids, "o-", color="k")
    ax.axhline(threshold, ls="--", color="tab:red", lw=1, label="threshold")
    ax.set_xlabel("depth")
    ax.set_ylabel("best fidelity")
    ax.set_ylim(0, 1.05)
    ax.set_xticks(depths)
    ax.legend(frameon=False, loc="lower right")
    ax2.bar(depths, [math.log10(max(s.candidates, 1)) for s in stats], color="0.6")
    ax2.set_xlabel("depth")
    ax2.set_ylabel("log10 candidates")
    ax2.set_xticks(depths)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
