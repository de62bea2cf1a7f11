"""Monte Carlo rejection-probability experiments and table reproduction.

Replication r of an experiment with base seed s draws its sample path from
``numpy.random.SeedSequence(s, spawn_key=(r,))``.  Distinct spawn keys give
independent, non-overlapping streams, so replications can be run in any order
or in parallel and still produce identical counts.
"""

from __future__ import annotations

import csv
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import tables
from .errors import AdspecError, InvalidInputError, InvalidParameterError
from .models import ModelSpec, simulate
from .nulldist import blocked_quantile
from .spectral import BivariateSeries
from .testkit import BLOCKED, STATIONARY, TestConfig, default_blocks, run_test

log = logging.getLogger(__name__)

WORKERS_ENV = "ADSPEC_WORKERS"
GATE_SE = 3.0
MIN_REPLICATIONS = 100


class ReplicationError(AdspecError):
    """A model or test failure inside one Monte Carlo replication."""

    def __init__(self, index: int, cause: Exception):
        super().__init__(f"replication {index} failed: {cause}")
        self.index = index
        self.cause = cause


def replication_seed(base_seed: int, r: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(base_seed, spawn_key=(r,))


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class Experiment:
    model: ModelSpec
    alphas: Tuple[float, ...] = tables.ALPHAS
    replications: int = 1000
    test_kind: str = STATIONARY
    base_seed: int = 0

    def __post_init__(self):
        if self.replications < MIN_REPLICATIONS:
            raise InvalidParameterError(
                f"need at least {MIN_REPLICATIONS} replications, got {self.replications}"
            )
        if not self.alphas or any(not (0.0 < a < 1.0) for a in self.alphas):
            raise InvalidParameterError(f"every alpha must lie in (0, 1): {self.alphas}")
        if self.test_kind not in (STATIONARY, BLOCKED):
            raise InvalidParameterError(f"unknown test kind {self.test_kind!r}")
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))

    @property
    def T(self) -> int:
        return self.model.T


@dataclass(frozen=True)
class MCEstimate:
    rejection_rate: float
    rejections: int
    replications: int
    standard_error: float
    base_seed: int
    alpha: float
    config: Dict[str, object] = field(default_factory=dict)

    @classmethod
    def from_count(cls, rejections: int, replications: int, alpha: float,
                   base_seed: int, config: Dict[str, object]) -> "MCEstimate":
        p = rejections / replications
        return cls(
            rejection_rate=p,
            rejections=int(rejections),
            replications=int(replications),
            standard_error=math.sqrt(p * (1.0 - p) / replications),
            base_seed=int(base_seed),
            alpha=float(alpha),
            config=dict(config),
        )


def _critical_values(exp: Experiment) -> np.ndarray:
    B = default_blocks(exp.T)[0] if exp.test_kind == BLOCKED else 1
    return np.array([blocked_quantile(a, B).value for a in exp.alphas])


def _count_range(exp: Experiment, start: int, stop: int) -> np.ndarray:
    crit = _critical_values(exp)
    config = TestConfig(alpha=exp.alphas[0])
    counts = np.zeros(len(exp.alphas), dtype=np.int64)
    for r in range(start, stop):
        try:
            data = simulate(exp.model, replication_seed(exp.base_seed, r))
            stat = run_test(data, config, exp.test_kind).statistic
        except AdspecError as err:
            raise ReplicationError(r, err) from err
        counts += stat > crit
    return counts


def rejection_counts(exp: Experiment, workers: Optional[int] = None) -> np.ndarray:
    """Number of rejections at each level of ``exp.alphas``."""
    workers = default_workers() if workers is None else max(1, int(workers))
    R = exp.replications
    if workers == 1:
        return _count_range(exp, 0, R)
    bounds = np.linspace(0, R, min(R, 4 * workers) + 1).astype(int)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_count_range, [exp] * (len(bounds) - 1), bounds[:-1], bounds[1:])
        return np.sum(list(parts), axis=0)


def rejection_probability(exp: Experiment, workers: Optional[int] = None) -> List[MCEstimate]:
    """Empirical rejection rate of the test under the model, one per alpha."""
    counts = rejection_counts(exp, workers)
    echo = {
        "model": exp.model.id,
        "T": exp.T,
        "rho": exp.model.rho,
        "test": exp.test_kind,
    }
    return [
        MCEstimate.from_count(int(c), exp.replications, a, exp.base_seed, echo)
        for c, a in zip(counts, exp.alphas)
    ]


# --------------------------------------------------------------------------
# table reproduction


def gate_standard_error(p: float, replications: int) -> float:
    """Binomial SE at the published rate, floored at one event in R."""
    floor = (1.0 / replications) * (1.0 - 1.0 / replications)
    return math.sqrt(max(p * (1.0 - p), floor) / replications)


@dataclass(frozen=True)
class TableCell:
    table: int
    model: str
    T: int
    rho: float
    B: Optional[int]
    alpha: float
    published: float
    estimate: MCEstimate
    tolerance: float

    @property
    def passed(self) -> bool:
        return abs(self.estimate.rejection_rate - self.published) <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "table": self.table,
            "model": self.model,
            "T": self.T,
            "rho": self.rho,
            "B": self.B,
            "alpha": self.alpha,
            "published": self.published,
            "rejection_rate": self.estimate.rejection_rate,
            "rejections": self.estimate.rejections,
            "replications": self.estimate.replications,
            "standard_error": self.estimate.standard_error,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class TableReport:
    table: int
    replications: int
    base_seed: int
    cells: Tuple[TableCell, ...]

    @property
    def pass_fraction(self) -> float:
        return sum(c.passed for c in self.cells) / len(self.cells)

    def rows(self) -> List[dict]:
        return [c.to_dict() for c in self.cells]

    def format(self) -> str:
        return format_table(self)


def cell_seed(base_seed: int, table_id: int, index: int) -> int:
    """Base seed of one table row, derived from (base_seed, table, row index)."""
    return int(np.random.SeedSequence([base_seed, table_id, index]).generate_state(1)[0])


def reproduce_table(table_id: int, replications: int = 1000, base_seed: int = 0,
                    workers: Optional[int] = None) -> TableReport:
    """Re-estimate every cell of a published table with a 3-SE pass flag."""
    if table_id not in tables.TABLES:
        raise InvalidParameterError(f"unknown table {table_id!r}; choose 1, 2, 3 or 4")
    kind = tables.TABLE_KIND[table_id]
    out = []
    for index, (model, T, rho, published) in enumerate(tables.cells(table_id)):
        exp = Experiment(
            model=ModelSpec(model, T, rho),
            alphas=tables.ALPHAS,
            replications=replications,
            test_kind=kind,
            base_seed=cell_seed(base_seed, table_id, index),
        )
        log.info("table %d: model %s, T=%d, rho=%.1f", table_id, model, T, rho)
        estimates = rejection_probability(exp, workers)
        B = default_blocks(T)[0] if kind == BLOCKED else None
        for est, pub in zip(estimates, published):
            out.append(TableCell(
                table=table_id, model=model, T=T, rho=rho, B=B, alpha=est.alpha,
                published=pub, estimate=est,
                tolerance=GATE_SE * gate_standard_error(pub, replications),
            ))
    return TableReport(table=table_id, replications=replications,
                       base_seed=base_seed, cells=tuple(out))


def format_table(report: TableReport) -> str:
    blocked = tables.TABLE_KIND[report.table] == BLOCKED
    head = f"{'model':>5} {'T':>5} " + (f"{'B':>3} " if blocked else f"{'rho':>4} ")
    head += " ".join(f"{f'{a:.0%}':>15}" for a in tables.ALPHAS)
    lines = [
        f"Table {report.table}: rejection rates, {report.replications} replications, "
        f"base seed {report.base_seed}",
        "each cell: estimate (published) and '*' when outside 3 SE",
        head,
    ]
    by_row: Dict[Tuple[str, int, float], List[TableCell]] = {}
    for c in report.cells:
        by_row.setdefault((c.model, c.T, c.rho), []).append(c)
    for (model, T, rho), row in by_row.items():
        lead = f"{model:>5} {T:>5} " + (f"{row[0].B:>3} " if blocked else f"{rho:>4.1f} ")
        body = " ".join(
            f"{c.estimate.rejection_rate:.3f} ({c.published:.3f}){' ' if c.passed else '*'}"
            for c in row
        )
        lines.append(lead + body)
    passed = sum(c.passed for c in report.cells)
    lines.append(f"cells within 3 SE: {passed}/{len(report.cells)} "
                 f"({report.pass_fraction:.1%})")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# data ingestion


def _is_number(field_text: str) -> bool:
    try:
        float(field_text)
    except ValueError:
        return False
    return True


def read_columns(path) -> Tuple[np.ndarray, np.ndarray]:
    """Parse a two-column numeric CSV into two float arrays.

    A first line whose fields are not all numeric is treated as a header and
    skipped.  Errors name the offending 1-based line number.
    """
    x1: List[float] = []
    x2: List[float] = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            fields = [f.strip() for f in row]
            if not fields or all(f == "" for f in fields):
                continue
            if lineno == 1 and not all(_is_number(f) for f in fields):
                continue
            if len(fields) != 2:
                raise InvalidInputError(
                    f"{path}: line {lineno}: expected 2 columns, found {len(fields)}"
                )
            try:
                a, b = float(fields[0]), float(fields[1])
            except ValueError:
                raise InvalidInputError(
                    f"{path}: line {lineno}: cannot parse {row!r} as numbers"
                ) from None
            if not (math.isfinite(a) and math.isfinite(b)):
                raise InvalidInputError(f"{path}: line {lineno}: non-finite value")
            x1.append(a)
            x2.append(b)
    return np.asarray(x1), np.asarray(x2)


def load_csv(path) -> BivariateSeries:
    x1, x2 = read_columns(path)
    return BivariateSeries(x1, x2)


def write_csv(target, data: BivariateSeries) -> None:
    """Write ``x1,x2`` rows with round-trip exact floats to a path or stream."""
    if hasattr(target, "write"):
        _write_rows(target, data)
        return
    with open(target, "w", newline="") as fh:
        _write_rows(fh, data)


def _write_rows(fh, data: BivariateSeries) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["x1", "x2"])
    for a, b in zip(data.x1, data.x2):
        w.writerow([repr(float(a)), repr(float(b))])
