"""Run records, CSV export, and complexity-model fitting.

Bit accounting counts semantic payload bits emitted by correct processes
(faulty traffic is free to the protocol's complexity, matching the standard
definition).  CSV output is fully deterministic: no timestamps, no ids
derived from anything but the run configuration.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .values import Bits

CSV_COLUMNS = [
    "run_id",
    "n",
    "t",
    "L",
    "strategy",
    "seed",
    "rounds",
    "total_bits",
    "agreement_ok",
    "strong_validity_applicable",
    "strong_validity_ok",
    "validity_ok",
    "contract_violated",
]


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


@dataclass
class RunMetrics:
    run_id: str
    n: int
    t: int
    length: int
    strategy: str
    seed: int
    rounds: int
    total_bits: int
    bits_by_round: dict[int, list[int]]
    decisions: dict[int, Bits | None]
    proposals: dict[int, Bits]
    agreement_ok: bool
    strong_validity_applicable: bool
    strong_validity_ok: bool
    validity_ok: bool
    contract_violated: bool
    terminated: bool
    dropped: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        """Every in-contract guarantee held in this run."""
        return (
            self.terminated
            and self.agreement_ok
            and self.validity_ok
            and self.strong_validity_ok
        )

    def bits_of(self, pid: int) -> int:
        return sum(self.bits_by_round.get(pid, ()))

    def csv_row(self) -> list[str]:
        return [
            _fmt(v)
            for v in (
                self.run_id,
                self.n,
                self.t,
                self.length,
                self.strategy,
                self.seed,
                self.rounds,
                self.total_bits,
                self.agreement_ok,
                self.strong_validity_applicable,
                self.strong_validity_ok,
                self.validity_ok,
                self.contract_violated,
            )
        ]


def render_csv(runs: Iterable[RunMetrics]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in runs:
        writer.writerow(r.csv_row())
    return buf.getvalue()


def write_csv(path: str, runs: Iterable[RunMetrics]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(render_csv(runs))


def fit_linear(columns: Sequence[Sequence[float]], y: Sequence[float]) -> tuple[np.ndarray, float]:
    """Least squares y ~ sum(coef_i * column_i); returns (coefficients, R^2)."""
    a = np.array(columns, dtype=np.float64).T
    yv = np.array(y, dtype=np.float64)
    coef, *_ = np.linalg.lstsq(a, yv, rcond=None)
    pred = a @ coef
    ss_res = float(((yv - pred) ** 2).sum())
    ss_tot = float(((yv - yv.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot else 1.0
    return coef, r2
