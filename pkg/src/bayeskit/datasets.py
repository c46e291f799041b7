"""CSV ingestion with schema validation.

Every loader checks the header against its schema, validates each row, and
reports offending rows by line number (1-based, counting the header).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .defects import BugCounts
from .errors import DuplicateKey, InvalidValue, SchemaMismatch
from .outcomes import OutcomeCounts, OutcomeDistribution, rescale_outcome
from .speedup import BenchmarkDataset, BenchmarkRecord

SCHEMAS = {
    "outcomes": ("project_id", "group", "raw_outcome"),
    "outcomes_binned": ("project_id", "group", "category"),
    "baseline": ("category", "k", "probability"),
    "bench": ("language", "task", "input_size", "variant", "metric", "value"),
    "primary": ("language", "task", "metric", "value"),
    "bugs": ("class_id", "found_simple", "found_strong", "public_methods", "loc"),
}


def _read_rows(path, expected_headers):
    """Yield (line_number, row) after validating the header against the schema.

    `expected_headers` is a list of acceptable header tuples; returns the one
    that matched alongside the row iterator.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SchemaMismatch(f"{path}: empty file, expected a header row")
    header = tuple(h.strip() for h in rows[0])
    for candidate in expected_headers:
        if header == candidate:
            return header, [(i + 2, row) for i, row in enumerate(rows[1:]) if row]
    expected = " or ".join(",".join(h) for h in expected_headers)
    raise SchemaMismatch(f"{path}: header {','.join(header)!r} does not match {expected!r}")


def _parse_float(path, line, field, raw, positive=False):
    try:
        value = float(raw)
    except ValueError:
        raise InvalidValue(f"{path} line {line}: {field}={raw!r} is not a number") from None
    if positive and value <= 0:
        raise InvalidValue(f"{path} line {line}: {field}={raw!r} must be positive")
    return value

def _parse_int(path, line, field, raw, minimum=None):
    try:
        value = int(raw)
    except ValueError:
        raise InvalidValue(f"{path} line {line}: {field}={raw!r} is not an integer") from None
    if minimum is not None and value < minimum:
        raise InvalidValue(f"{path} line {line}: {field}={raw!r} must be >= {minimum}")
    return value


@dataclass(frozen=True)
class OutcomeTable:
    """Per-project outcome rows: either raw 1..10 scores or pre-binned categories."""

    rows: tuple[tuple[str, str, int], ...]  # (project_id, group, value)
    binned: bool

    def groups(self) -> tuple[str, ...]:
        seen = []
        for _, group, _ in self.rows:
            if group not in seen:
                seen.append(group)
        return tuple(seen)

    def to_counts(
        self,
        k: int,
        rescale_b: int = 1,
        hypothesis_group: str | None = None,
    ) -> OutcomeCounts:
        """Bin raw scores when needed and tally the two groups.

        `hypothesis_group` names the group hypothesized to be better; it
        defaults to the first group in file order.
        """
        groups = self.groups()
        if len(groups) != 2:
            raise InvalidValue(f"expected exactly two groups, found {groups}")
        first = hypothesis_group if hypothesis_group is not None else groups[0]
        if first not in groups:
            raise InvalidValue(f"hypothesis group {first!r} not among {groups}")
        second = groups[1] if first == groups[0] else groups[0]
        tallies = {first: [0] * k, second: [0] * k}
        for _, group, value in self.rows:
            category = value if self.binned else rescale_outcome(value, rescale_b, k - 1)
            if not 0 <= category < k:
                raise InvalidValue(f"category {category} outside 0..{k - 1}")
            tallies[group][category] += 1
        return OutcomeCounts(tuple(tallies[first]), tuple(tallies[second]), first, second)


def load_outcomes(path) -> OutcomeTable:
    """Read `outcomes.csv`: project_id, group, and raw_outcome or category."""
    header, rows = _read_rows(path, [SCHEMAS["outcomes"], SCHEMAS["outcomes_binned"]])
    binned = header == SCHEMAS["outcomes_binned"]
    seen = set()
    out = []
    for line, row in rows:
        if len(row) != 3:
            raise InvalidValue(f"{path} line {line}: expected 3 fields, got {len(row)}")
        project, group, raw = (field.strip() for field in row)
        if project in seen:
            raise DuplicateKey(f"{path} line {line}: duplicate project_id {project!r}")
        seen.add(project)
        value = _parse_int(path, line, header[2], raw, minimum=0)
        if not binned and not 1 <= value <= 10:
            raise InvalidValue(f"{path} line {line}: raw_outcome {value} outside 1..10")
        out.append((project, group, value))
    return OutcomeTable(tuple(out), binned)


def load_baselines(path) -> dict[str, OutcomeDistribution]:
    """Read `baselines.csv` into named outcome distributions.

    Every named distribution must cover categories 0..K-1 exactly once and
    sum to 1 within 1e-6.
    """
    _, rows = _read_rows(path, [SCHEMAS["baseline"]])
    cells: dict[str, dict[int, float]] = {}
    for line, row in rows:
        if len(row) != 3:
            raise InvalidValue(f"{path} line {line}: expected 3 fields, got {len(row)}")
        name, k_raw, p_raw = (field.strip() for field in row)
        k = _parse_int(path, line, "k", k_raw, minimum=0)
        p = _parse_float(path, line, "probability", p_raw)
        if not 0.0 <= p <= 1.0:
            raise InvalidValue(f"{path} line {line}: probability {p} outside [0, 1]")
        per = cells.setdefault(name, {})
        if k in per:
            raise DuplicateKey(f"{path} line {line}: duplicate ({name!r}, k={k})")
        per[k] = p
    out = {}
    for name in sorted(cells):
        per = cells[name]
        k_max = max(per)
        if sorted(per) != list(range(k_max + 1)):
            raise InvalidValue(f"{path}: baseline {name!r} does not cover categories 0..{k_max}")
        try:
            out[name] = OutcomeDistribution(tuple(per[k] for k in range(k_max + 1)))
        except ValueError as exc:
            raise InvalidValue(f"{path}: baseline {name!r}: {exc}") from None
    return out


def load_benchmarks(path) -> dict[str, BenchmarkDataset]:
    """Read `bench.csv` into one dataset per metric."""
    _, rows = _read_rows(path, [SCHEMAS["bench"]])
    seen = set()
    per_metric: dict[str, list[BenchmarkRecord]] = {}
    for line, row in rows:
        if len(row) != 6:
            raise InvalidValue(f"{path} line {line}: expected 6 fields, got {len(row)}")
        language, task, size_raw, variant, metric, value_raw = (f.strip() for f in row)
        size = _parse_float(path, line, "input_size", size_raw, positive=True)
        value = _parse_float(path, line, "value", value_raw, positive=True)
        key = (language, task, size, variant, metric)
        if key in seen:
            raise DuplicateKey(f"{path} line {line}: duplicate key {key}")
        seen.add(key)
        per_metric.setdefault(metric, []).append(
            BenchmarkRecord(language, task, size, variant, value)
        )
    return {metric: BenchmarkDataset(recs, metric) for metric, recs in sorted(per_metric.items())}


def load_primary(path) -> dict[str, BenchmarkDataset]:
    """Read `primary.csv` (one best measurement per language and task) per metric."""
    _, rows = _read_rows(path, [SCHEMAS["primary"]])
    seen = set()
    per_metric: dict[str, list[BenchmarkRecord]] = {}
    for line, row in rows:
        if len(row) != 4:
            raise InvalidValue(f"{path} line {line}: expected 4 fields, got {len(row)}")
        language, task, metric, value_raw = (f.strip() for f in row)
        value = _parse_float(path, line, "value", value_raw, positive=True)
        key = (language, task, metric)
        if key in seen:
            raise DuplicateKey(f"{path} line {line}: duplicate key {key}")
        seen.add(key)
        per_metric.setdefault(metric, []).append(
            BenchmarkRecord(language, task, 1.0, "best", value)
        )
    return {metric: BenchmarkDataset(recs, metric) for metric, recs in sorted(per_metric.items())}


def load_bug_counts(path) -> tuple[BugCounts, ...]:
    """Read `bugs.csv`; public_methods and loc may be blank."""
    _, rows = _read_rows(path, [SCHEMAS["bugs"]])
    seen = set()
    out = []
    for line, row in rows:
        if len(row) != 5:
            raise InvalidValue(f"{path} line {line}: expected 5 fields, got {len(row)}")
        class_id, simple_raw, strong_raw, methods_raw, loc_raw = (f.strip() for f in row)
        if class_id in seen:
            raise DuplicateKey(f"{path} line {line}: duplicate class_id {class_id!r}")
        seen.add(class_id)
        simple = _parse_int(path, line, "found_simple", simple_raw, minimum=0)
        strong = _parse_int(path, line, "found_strong", strong_raw, minimum=0)
        methods = _parse_int(path, line, "public_methods", methods_raw, minimum=1) if methods_raw else None
        loc = _parse_int(path, line, "loc", loc_raw, minimum=1) if loc_raw else None
        out.append(BugCounts(class_id, simple, strong, methods, loc))
    return tuple(out)


_LOADERS = {
    "outcomes": load_outcomes,
    "baseline": load_baselines,
    "bench": load_benchmarks,
    "primary": load_primary,
    "bugs": load_bug_counts,
}


def ingest(path, schema: str):
    """Load and validate a CSV file against one of the named schemas."""
    try:
        loader = _LOADERS[schema]
    except KeyError:
        raise SchemaMismatch(f"unknown schema {schema!r}; expected one of {sorted(_LOADERS)}") from None
    return loader(path)
