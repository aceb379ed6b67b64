"""Per-request metrics rows, run counters, epoch log, and CSV I/O.

metrics.csv carries one row per satisfied user request with the exact
header the downstream tooling expects; counters.csv and epochs.csv are
companion tables. Output is UTF-8 with LF line endings and minimal
RFC-4180 quoting, so a parsed file re-serializes byte-identically.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

METRICS_HEADER = [
    "scenario", "run_seed", "requester", "request_id", "content_name",
    "issue_ms", "satisfy_ms", "latency_ms", "served_by",
    "cache_hit_node_kind", "link_kind", "scheme", "epoch_candidate",
]

COUNTERS_HEADER = ["scenario", "run_seed", "counter", "value"]

EPOCHS_HEADER = [
    "scenario", "run_seed", "domain", "epoch", "at_ms",
    "alpha", "beta", "reward", "carried", "pin_count",
]


class SchemaError(Exception):
    """A CSV is missing a required column or has no data rows."""


@dataclass(frozen=True)
class MetricsRow:
    scenario: str
    run_seed: int
    requester: str
    request_id: int
    content_name: str
    issue_ms: int
    satisfy_ms: int
    latency_ms: int
    served_by: str
    cache_hit_node_kind: str
    link_kind: str
    scheme: str = ""
    epoch_candidate: str = ""

    def __post_init__(self) -> None:
        if self.latency_ms != self.satisfy_ms - self.issue_ms:
            raise ValueError("latency_ms must equal satisfy_ms - issue_ms")
        if self.latency_ms < 0:
            raise ValueError("latency_ms must be >= 0")


@dataclass(frozen=True)
class EpochRow:
    scenario: str
    run_seed: int
    domain: str
    epoch: int
    at_ms: int
    alpha: float
    beta: float
    reward: float
    carried: bool
    pin_count: int


@dataclass
class MetricsTable:
    rows: list[MetricsRow] = field(default_factory=list)
    # (scenario, run_seed) -> counter name -> value
    counters: dict[tuple[str, int], dict[str, int]] = field(default_factory=dict)
    epochs: list[EpochRow] = field(default_factory=list)

    def bump(self, scenario: str, run_seed: int, counter: str, by: int = 1) -> None:
        bucket = self.counters.setdefault((scenario, run_seed), {})
        bucket[counter] = bucket.get(counter, 0) + by

    def extend(self, other: "MetricsTable") -> None:
        self.rows.extend(other.rows)
        self.epochs.extend(other.epochs)
        for key, counts in other.counters.items():
            bucket = self.counters.setdefault(key, {})
            for name, value in counts.items():
                bucket[name] = bucket.get(name, 0) + value


def _writer(buffer: io.StringIO) -> csv.writer:
    return csv.writer(buffer, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)


def metrics_to_csv(rows: list[MetricsRow]) -> str:
    """Serialize rows sorted by (issue_ms, requester, request_id); ties
    keep insertion order, so merged multi-seed tables stay stable."""
    buffer = io.StringIO()
    writer = _writer(buffer)
    writer.writerow(METRICS_HEADER)
    ordered = sorted(rows, key=lambda r: (r.issue_ms, r.requester, r.request_id))
    for row in ordered:
        writer.writerow([
            row.scenario, row.run_seed, row.requester, row.request_id,
            row.content_name, row.issue_ms, row.satisfy_ms, row.latency_ms,
            row.served_by, row.cache_hit_node_kind, row.link_kind,
            row.scheme, row.epoch_candidate,
        ])
    return buffer.getvalue()


def counters_to_csv(counters: dict[tuple[str, int], dict[str, int]]) -> str:
    buffer = io.StringIO()
    writer = _writer(buffer)
    writer.writerow(COUNTERS_HEADER)
    for scenario, run_seed in sorted(counters):
        for name in sorted(counters[(scenario, run_seed)]):
            writer.writerow([scenario, run_seed, name,
                             counters[(scenario, run_seed)][name]])
    return buffer.getvalue()


def epochs_to_csv(epochs: list[EpochRow]) -> str:
    buffer = io.StringIO()
    writer = _writer(buffer)
    writer.writerow(EPOCHS_HEADER)
    for row in epochs:
        writer.writerow([
            row.scenario, row.run_seed, row.domain, row.epoch, row.at_ms,
            f"{row.alpha:g}", f"{row.beta:g}", f"{row.reward:g}",
            "yes" if row.carried else "no", row.pin_count,
        ])
    return buffer.getvalue()


def parse_metrics_csv(text: str) -> list[MetricsRow]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("empty file")
    missing = [col for col in METRICS_HEADER if col not in header]
    if missing:
        raise SchemaError(f"missing column {missing[0]!r}")
    index = {col: header.index(col) for col in METRICS_HEADER}
    rows = []
    for record in reader:
        rows.append(MetricsRow(
            scenario=record[index["scenario"]],
            run_seed=int(record[index["run_seed"]]),
            requester=record[index["requester"]],
            request_id=int(record[index["request_id"]]),
            content_name=record[index["content_name"]],
            issue_ms=int(record[index["issue_ms"]]),
            satisfy_ms=int(record[index["satisfy_ms"]]),
            latency_ms=int(record[index["latency_ms"]]),
            served_by=record[index["served_by"]],
            cache_hit_node_kind=record[index["cache_hit_node_kind"]],
            link_kind=record[index["link_kind"]],
            scheme=record[index["scheme"]],
            epoch_candidate=record[index["epoch_candidate"]],
        ))
    return rows


def write_table(table: MetricsTable, out_dir: str | Path) -> dict[str, Path]:
    """Write metrics.csv, counters.csv, and epochs.csv under out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "metrics": out / "metrics.csv",
        "counters": out / "counters.csv",
        "epochs": out / "epochs.csv",
    }
    paths["metrics"].write_bytes(metrics_to_csv(table.rows).encode("utf-8"))
    paths["counters"].write_bytes(counters_to_csv(table.counters).encode("utf-8"))
    paths["epochs"].write_bytes(epochs_to_csv(table.epochs).encode("utf-8"))
    return paths
