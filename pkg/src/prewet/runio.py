"""Run persistence: CSV schemas, config files and self-validating manifests.

All files are UTF-8 with LF newlines and mandatory headers; floats are
written with repr (shortest round-trip decimal), so a rerun with the same
config and seed produces byte-identical data files.  The manifest records the
config snapshot, per-replica stream keys and sha256 digests of every emitted
file; `report` refuses to summarize a run whose digests no longer match.
"""

from __future__ import annotations

import configparser
import hashlib
import io
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

__all__ = [
    "SCHEMAS",
    "SchemaMismatchError",
    "RunConfig",
    "RunManifest",
    "write_csv",
    "read_csv",
    "read_csv_rows",
    "sha256_file",
    "FORMAT_VERSION",
    "TOOL_VERSION",
]

FORMAT_VERSION = 1
TOOL_VERSION = "0.1.0"

# column name -> python type, per file kind
SCHEMAS: dict[str, list[tuple[str, type]]] = {
    "interface.csv": [("replica", int), ("sample", int), ("i", int),
                      ("gamma_plus", int), ("gamma_minus", int)],
    "interface_summary.csv": [("replica", int), ("sample", int), ("minus_area", int),
                              ("gamma_length", int), ("max_closed_diameter", int),
                              ("hits_box", int)],
    "steps.csv": [("replica", int), ("sample", int), ("step_index", int),
                  ("theta", int), ("zeta", int)],
    "walks.csv": [("replica", int), ("sample", int), ("k", int), ("T", int), ("Z", int)],
    "walk_stats.csv": [("replica", int), ("sample", int), ("area", int),
                       ("nsteps", int), ("gap", float)],
    "fs_reference.csv": [("r", float), ("phi0", float), ("density", float)],
    "fs_kernel.csv": [("t", float), ("r", float), ("y", float), ("value", float)],
    "step_law.csv": [("theta", int), ("zeta", int), ("prob", float)],
}


class SchemaMismatchError(ValueError):
    pass


def _format_value(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path: str | Path, rows: Iterable[tuple], schema_name: str) -> None:
    schema = SCHEMAS[schema_name]
    path = Path(path)
    with io.open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(name for name, _ in schema) + "\n")
        for row in rows:
            if len(row) != len(schema):
                raise SchemaMismatchError(f"{path.name}: row width {len(row)} != {len(schema)}")
            fh.write(",".join(_format_value(v) for v in row) + "\n")


def read_csv_rows(path: str | Path, schema_name: str) -> Iterator[tuple]:
    """Stream typed rows; memory use is independent of the file length."""
    schema = SCHEMAS[schema_name]
    names = [n for n, _ in schema]
    path = Path(path)
    with io.open(path, "r", encoding="utf-8", newline="") as fh:
        header = fh.readline().rstrip("\n").rstrip("\r")
        if header.split(",") != names:
            raise SchemaMismatchError(
                f"{path.name}: header {header!r} does not match schema {names}")
        for lineno, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").rstrip("\r").split(",")
            if len(parts) != len(schema):
                raise SchemaMismatchError(f"{path.name}:{lineno}: expected {len(schema)} columns")
            try:
                yield tuple(typ(raw) for raw, (_, typ) in zip(parts, schema))
            except ValueError as exc:
                raise SchemaMismatchError(f"{path.name}:{lineno}: {exc}") from exc


def read_csv(path: str | Path, schema_name: str) -> list[tuple]:
    return list(read_csv_rows(path, schema_name))


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


# typed option keys per command block
_OPTION_TYPES: dict[str, dict[str, type]] = {
    "ising": {"beta": float, "lambda": float, "n": int, "burnin": int,
              "thin": int, "samples": int, "sweeps": int},
    "walk": {"beta": float, "lambda": float, "m_star": float, "n": int,
             "samples": int, "z_start": int, "z_end": int, "h_max": int,
             "law": str, "theta_max": int},
    "fs": {"lambda": float, "m_star": float, "chi": float, "n": int,
           "kernel_times": str, "grid_points": int},
    "analyze": {"chi": float, "kappa": float, "eps": float, "c_area": float,
                "c_len": float, "t0": float, "window": float},
}
_RUN_KEYS = {"command": str, "seed": int, "replicas": int, "out": str}


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    replicas: int = 1
    out: str = "runs/out"
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in _OPTION_TYPES:
            raise ValueError(f"unknown command {self.command!r}")
        allowed = _OPTION_TYPES[self.command]
        for key, val in self.options.items():
            if key not in allowed:
                raise ValueError(f"unknown option {key!r} for command {self.command!r}")
            if not isinstance(val, allowed[key]):
                self.options[key] = allowed[key](val)

    def to_file(self, path: str | Path, relative_out: bool = False) -> None:
        """Persist the config; relative_out=True writes out as "." so that a
        snapshot inside the run directory is independent of its location."""
        cp = configparser.ConfigParser()
        cp["run"] = {"command": self.command, "seed": str(self.seed),
                     "replicas": str(self.replicas),
                     "out": "." if relative_out else self.out}
        cp[self.command] = {k: _format_value(v) for k, v in sorted(self.options.items())}
        with io.open(path, "w", encoding="utf-8", newline="\n") as fh:
            cp.write(fh)

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        cp = configparser.ConfigParser()
        with io.open(path, "r", encoding="utf-8") as fh:
            cp.read_file(fh)
        if "run" not in cp:
            raise ValueError("config file missing [run] section")
        run = dict(cp["run"])
        unknown = set(run) - set(_RUN_KEYS)
        if unknown:
            raise ValueError(f"unknown [run] keys: {sorted(unknown)}")
        command = run.get("command", "")
        if command not in _OPTION_TYPES:
            raise ValueError(f"unknown command {command!r}")
        options = {}
        for section in cp.sections():
            if section == "run":
                continue
            if section != command:
                raise ValueError(f"unexpected section [{section}] for command {command!r}")
            types = _OPTION_TYPES[command]
            for key, raw in cp[section].items():
                if key not in types:
                    raise ValueError(f"unknown option {key!r} in [{section}]")
                options[key] = types[key](raw)
        return cls(command=command, seed=int(run.get("seed", 0)),
                   replicas=int(run.get("replicas", 1)),
                   out=run.get("out", "runs/out"), options=options)

    def to_dict(self) -> dict:
        return {"command": self.command, "seed": self.seed, "replicas": self.replicas,
                "out": self.out, "options": dict(sorted(self.options.items()))}


@dataclass
class RunManifest:
    config: dict
    tool_version: str = TOOL_VERSION
    format_version: int = FORMAT_VERSION
    started: str = ""
    finished: str = ""
    replica_seeds: list = field(default_factory=list)
    outputs: dict = field(default_factory=dict)   # filename -> sha256

    @classmethod
    def begin(cls, config: RunConfig) -> "RunManifest":
        seeds = [f"{config.seed}:{r}" for r in range(config.replicas)]
        return cls(config=config.to_dict(), replica_seeds=seeds,
                   started=time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()))

    def finalize(self, out_dir: str | Path, files: list[str]) -> None:
        out_dir = Path(out_dir)
        self.outputs = {name: sha256_file(out_dir / name) for name in sorted(files)}
        self.finished = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        with io.open(out_dir / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
            json.dump(self.__dict__, fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, out_dir: str | Path) -> "RunManifest":
        with io.open(Path(out_dir) / "manifest.json", "r", encoding="utf-8") as fh:
            data = json.load(fh)
        return cls(**data)

    def verify(self, out_dir: str | Path) -> list[str]:
        """Names of files whose digest no longer matches (empty = valid)."""
        out_dir = Path(out_dir)
        bad = []
        for name, digest in self.outputs.items():
            p = out_dir / name
            if not p.exists() or sha256_file(p) != digest:
                bad.append(name)
        return bad


def worker_count() -> int:
    """Replica worker cap from PREWET_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("PREWET_THREADS", "1")))
    except ValueError:
        return 1
