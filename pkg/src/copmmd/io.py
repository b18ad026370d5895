"""CSV ingestion, run configuration, result documents and the Housing helpers."""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import logging
import math
import urllib.request
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import _random
from .copula import SampleMatrix, as_sample
from .errors import ConfigError, DataError
from .kernel import DEFAULT_SIGMA

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

HOUSING_SHA256 = "79ac716620024011b03c0c44d2bf99069b8173649181926d9109c25475a3804c"
HOUSING_TARGET = 13  # MEDV, column 14 in 1-based numbering


def _parse_selectors(header: list[str] | None, width: int, selectors) -> list[int]:
    if selectors is None:
        return list(range(width))
    if isinstance(selectors, str):
        selectors = [s.strip() for s in selectors.split(",") if s.strip()]
    out = []
    for sel in selectors:
        if isinstance(sel, int) or (isinstance(sel, str) and sel.lstrip("-").isdigit()):
            j = int(sel)
            if not (0 <= j < width):
                raise DataError(f"column index {j} out of range for {width} columns")
            out.append(j)
        elif header is not None and sel in header:
            out.append(header.index(sel))
        else:
            raise DataError(f"unknown column {sel!r}")
    return out


def load_csv(path, has_header: bool = True, columns=None) -> SampleMatrix:
    """Read a comma-separated numeric table.

    ``columns`` selects columns by 0-based index or header name (a list, or a
    comma-separated string). Blank lines are skipped and counted. Row numbers
    in error messages are 1-based file line numbers.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        lines = list(reader)
    header = None
    start = 0
    if has_header:
        if not lines:
            raise DataError(f"{path} is empty")
        header = [h.strip() for h in lines[0]]
        start = 1
    width = len(header) if header is not None else (len(lines[start]) if len(lines) > start else 0)
    sel = _parse_selectors(header, width, columns)
    names = [header[j] for j in sel] if header is not None else [f"x{j + 1}" for j in sel]
    rows, blank = [], 0
    for lineno, raw in enumerate(lines[start:], start=start + 1):
        if not raw or all(not c.strip() for c in raw):
            blank += 1
            continue
        if len(raw) != width:
            raise DataError(f"row {lineno}: expected {width} fields, got {len(raw)}")
        vals = []
        for j in sel:
            cell = raw[j].strip()
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"row {lineno}, column {names[sel.index(j)]!r}: "
                                f"cannot parse {cell!r} as a number") from None
            if not math.isfinite(v):
                raise DataError(f"row {lineno}, column {names[sel.index(j)]!r}: non-finite value {cell!r}")
            vals.append(v)
        rows.append(vals)
    if len(rows) < 2:
        raise DataError(f"{path}: need at least 2 data rows, got {len(rows)}")
    log.info("loaded %s: %d rows, %d columns, %d blank lines skipped", path, len(rows), len(sel), blank)
    return SampleMatrix(np.array(rows, dtype=np.float64), names)


def write_csv(X, path, header: bool = True) -> None:
    """Write with ``repr`` floats so that :func:`load_csv` reads back the exact doubles."""
    X = as_sample(X)
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        if header:
            w.writerow(X.column_names)
        for row in X.values:
            w.writerow([repr(float(v)) for v in row])


# ---------------------------------------------------------------------------
# Housing data


def housing_path() -> Path:
    return Path(str(resources.files("copmmd") / "data" / "housing.csv"))


def load_housing() -> SampleMatrix:
    """The vendored UCI Housing table: 506 rows, 14 attributes, MEDV last."""
    return load_csv(housing_path())


def fetch_housing(url: str, dest, sha256: str = HOUSING_SHA256) -> Path:
    """Download a Housing CSV in the vendored layout and verify its checksum."""
    with urllib.request.urlopen(url) as resp:  # noqa: S310 - user supplied URL
        payload = resp.read()
    digest = hashlib.sha256(payload).hexdigest()
    if digest != sha256:
        raise DataError(f"checksum mismatch for {url}: {digest}")
    dest = Path(dest)
    dest.write_bytes(payload)
    return dest


def train_test_split(m: int, n_train: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """First ``n_train`` rows of a seeded permutation for training, the rest for testing."""
    if not (1 <= n_train < m):
        raise ConfigError(f"n_train must be in [1, {m - 1}], got {n_train}")
    perm = _random.rng(seed).permutation(m)
    return np.sort(perm[:n_train]), np.sort(perm[n_train:])


def housing_regression_eval(X, target_index: int, feature_index: int, train_idx, test_idx) -> float:
    """Test-set mean squared error of the least-squares line target ~ a*feature + b."""
    X = as_sample(X)
    x_tr = X.values[train_idx, feature_index]
    y_tr = X.values[train_idx, target_index]
    xm = x_tr.mean()
    sxx = float(np.sum((x_tr - xm) ** 2))
    if sxx == 0.0:
        raise DataError(f"feature column {feature_index} is constant on the training rows")
    ym = y_tr.mean()
    a = float(np.sum((x_tr - xm) * (y_tr - ym))) / sxx
    b = ym - a * xm
    resid = X.values[test_idx, target_index] - (a * X.values[test_idx, feature_index] + b)
    return float(np.mean(resid * resid))


# ---------------------------------------------------------------------------
# Configuration and results


@dataclass
class RunConfig:
    kernel_family: str = "gaussian"
    sigma: float = DEFAULT_SIGMA
    estimator: str = "b"
    seed: int = 0
    n_uniform: int | None = None
    permutations: int = 199
    alpha: float = 0.05
    h: int = 1
    dims: int = 2
    objective: str = "mrmr"
    input: str | None = None
    output: str | None = None
    columns: list[str] | None = None
    target: str | None = None
    has_header: bool = True
    jitter: float | None = None
    n_train: int = 300
    scenario: str | None = None
    plot_dir: str | None = None
    seeds: int = 1
    extra: dict[str, Any] = field(default_factory=dict)

    def validate(self) -> "RunConfig":
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ConfigError(f"sigma must be positive, got {self.sigma}")
        if not (0 < self.alpha < 1):
            raise ConfigError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.n_uniform is not None and self.n_uniform < 1:
            raise ConfigError(f"n_uniform must be positive, got {self.n_uniform}")
        if not (0 <= self.seed < 2 ** 64):
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.h < 1 or self.dims < 1 or self.seeds < 1:
            raise ConfigError("h, dims and seeds must be positive")
        if self.jitter is not None and not (0 < self.jitter <= 1):
            raise ConfigError(f"jitter must be in (0, 1], got {self.jitter}")
        return self

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.from_dict(data)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        raise DataError(f"cannot serialize non-finite value {obj!r}")
    return obj


@dataclass
class ResultDocument:
    """Schema-versioned output of one CLI command.

    Floats are written with Python's shortest round-trip ``repr``, so
    :meth:`loads` returns the exact doubles that were dumped.
    """

    command: str
    config: dict
    payload: dict
    duration_s: float = 0.0
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "config": _jsonable(self.config),
            "payload": _jsonable(self.payload),
            "duration_s": self.duration_s,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"

    def payload_bytes(self) -> bytes:
        return json.dumps(_jsonable(self.payload), sort_keys=True, allow_nan=False).encode()

    @classmethod
    def loads(cls, text: str) -> "ResultDocument":
        data = json.loads(text)
        if data.get("schema_version") != SCHEMA_VERSION:
            raise DataError(f"unsupported schema version {data.get('schema_version')!r}")
        return cls(data["command"], data["config"], data["payload"], data["duration_s"],
                   data["schema_version"])


def write_series(path, header: Sequence[str], rows) -> None:
    """Plot-ready CSV series."""
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
