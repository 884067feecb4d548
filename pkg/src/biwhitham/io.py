"""Run configuration and on-disk formats.

Config files are flat ``key = value`` text with ``#`` comments.  Branches
are written as a CSV table plus a JSON sidecar holding the run metadata;
single profiles are JSON documents.  Floats are written with 17
significant digits, so every round trip is exact.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .continuation import Branch, BranchConfig
from .profile import gamma
from .spectral import CollocationGrid

__all__ = [
    "OUTPUT_DIR_ENV",
    "RunConfig",
    "ConfigError",
    "parse_config",
    "format_config",
    "write_config",
    "BRANCH_COLUMNS",
    "write_branch_csv",
    "read_branch_csv",
    "write_branch_metadata",
    "read_branch_metadata",
    "write_profile_json",
    "read_profile_json",
]

OUTPUT_DIR_ENV = "BIWHITHAM_OUTPUT_DIR"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    n_modes: int = 512
    k: int = 1
    epsilon0: float = 1e-2
    h0: float = 1e-2
    h_min: float = 1e-8
    h_max: float = 0.1
    gap_threshold_rel: float = 1e-3
    max_steps: int = 5000
    newton_tol: float = 1e-12
    newton_max_iter: int = 25
    output_dir: str = "out"
    emit_svg: bool = True
    refine_terminal: bool = True

    def validate(self) -> "RunConfig":
        if self.n_modes < 8:
            raise ConfigError(f"n_modes: must be >= 8, got {self.n_modes}")
        if self.k < 1:
            raise ConfigError(f"k: must be >= 1, got {self.k}")
        if not self.h_min > 0:
            raise ConfigError(f"h_min: must be positive, got {self.h_min}")
        if not self.h_min <= self.h0 <= self.h_max:
            raise ConfigError(f"h0: need h_min <= h0 <= h_max, got {self.h_min}, {self.h0}, {self.h_max}")
        if not 0 < self.gap_threshold_rel < 1:
            raise ConfigError(f"gap_threshold_rel: must lie in (0, 1), got {self.gap_threshold_rel}")
        if self.max_steps < 1:
            raise ConfigError(f"max_steps: must be >= 1, got {self.max_steps}")
        if not self.newton_tol > 0:
            raise ConfigError(f"newton_tol: must be positive, got {self.newton_tol}")
        if self.newton_max_iter < 1:
            raise ConfigError(f"newton_max_iter: must be >= 1, got {self.newton_max_iter}")
        return self

    def branch_config(self) -> BranchConfig:
        names = {f.name for f in fields(BranchConfig)}
        return BranchConfig(**{k: v for k, v in asdict(self).items() if k in names})


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, raw: str):
    kind = _TYPES[key]
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        if kind == "bool":
            low = raw.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        return raw
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {kind}") from None


def parse_config(path=None, overrides: dict | None = None, text: str | None = None) -> RunConfig:
    """Read a flat config file (or ``text``) and apply ``overrides`` on top.

    ``None`` values in ``overrides`` are ignored so argparse namespaces can
    be passed straight through.  The output directory falls back to
    ``$BIWHITHAM_OUTPUT_DIR`` when neither file nor overrides set it.
    """
    values: dict = {}
    if path is not None:
        text = Path(path).read_text()
    for lineno, line in enumerate((text or "").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in _TYPES:
            raise ConfigError(f"unknown key {key!r}; valid keys: {', '.join(_TYPES)}")
        values[key] = _coerce(key, raw)
    for key, val in (overrides or {}).items():
        if val is None:
            continue
        if key not in _TYPES:
            raise ConfigError(f"unknown key {key!r}; valid keys: {', '.join(_TYPES)}")
        values[key] = _coerce(key, str(val)) if isinstance(val, str) else val
    if "output_dir" not in values and os.environ.get(OUTPUT_DIR_ENV):
        values["output_dir"] = os.environ[OUTPUT_DIR_ENV]
    return RunConfig(**values).validate()


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def format_config(config: RunConfig) -> str:
    return "".join(f"{k} = {_fmt(v)}\n" for k, v in asdict(config).items())


def write_config(config: RunConfig, path) -> None:
    Path(path).write_text(format_config(config))


BRANCH_COLUMNS = ("index", "arclength", "c", "waveheight", "crest", "gap", "step", "newton_iters")


def write_branch_csv(branch: Branch, path) -> None:
    if not len(branch):
        raise ValueError("cannot write an empty branch")
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(BRANCH_COLUMNS)
            for i, p in enumerate(branch):
                w.writerow(
                    [i]
                    + [f"{v:.17g}" for v in (p.arclength, p.c, p.waveheight, p.crest, p.gap, p.step_used)]
                    + [p.newton_iters]
                )
    except OSError as exc:
        raise OSError(f"cannot write branch CSV {path}: {exc.strerror}") from exc


def read_branch_csv(path) -> dict[str, np.ndarray]:
    """Columns of a branch CSV as arrays keyed by header name."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    if tuple(header) != BRANCH_COLUMNS:
        raise ValueError(f"unexpected header {header}")
    out = {}
    for j, name in enumerate(header):
        cast = int if name in ("index", "newton_iters") else float
        out[name] = np.array([cast(r[j]) for r in body])
    return out


def write_branch_metadata(branch: Branch, config: RunConfig, path, extra: dict | None = None) -> None:
    doc = {
        "version": __version__,
        "config": asdict(config),
        "termination": branch.termination,
        "n_points": len(branch),
        "n_modes": branch.n_modes,
        "turning_points": branch.turning_points(),
    }
    doc.update(extra or {})
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def read_branch_metadata(path) -> tuple[dict, RunConfig]:
    doc = json.loads(Path(path).read_text())
    return doc, RunConfig(**doc["config"])


def write_profile_json(c: float, values, grid: CollocationGrid, path, metadata: dict | None = None) -> None:
    meta = {"version": __version__}
    meta.update(metadata or {})
    doc = {
        "n_modes": grid.n_modes,
        "c": float(c),
        "gamma": float(gamma(c)),
        "nodes": [float(x) for x in grid.nodes],
        "values": [float(v) for v in values],
        "metadata": meta,
    }
    try:
        Path(path).write_text(json.dumps(doc, indent=1) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write profile JSON {path}: {exc.strerror}") from exc


def read_profile_json(path) -> tuple[float, np.ndarray, dict]:
    """Return ``(c, values, document)``."""
    doc = json.loads(Path(path).read_text())
    values = np.array(doc["values"], dtype=float)
    if values.size != doc["n_modes"]:
        raise ValueError(f"{path}: n_modes does not match number of values")
    return float(doc["c"]), values, doc
