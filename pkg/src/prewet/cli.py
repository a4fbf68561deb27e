"""Thin command-line client for the run engine.

Subcommands: simulate-ising, simulate-walk, fs-reference, analyze, report,
serve.  Flags override config-file values, which override defaults.  With
--server URL the command is executed by a running service instead and the
resulting files are downloaded into --out.  Exit codes: 0 ok, 1 validation
error, 2 runtime error; diagnostics go to stderr as one JSON object per line.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .runio import RunConfig
from .runner import run_command, run_report

_COMMANDS = {"simulate-ising": "ising", "simulate-walk": "walk",
             "fs-reference": "fs", "analyze": "analyze"}

# (flag, option key, type) per command block
_FLAG_MAP = {
    "ising": [("--beta", "beta", float), ("--lambda", "lambda", float),
              ("--n", "n", int), ("--sweeps", "sweeps", int),
              ("--burnin", "burnin", int), ("--samples", "samples", int),
              ("--thin", "thin", int)],
    "walk": [("--beta", "beta", float), ("--lambda", "lambda", float),
             ("--m-star", "m_star", float), ("--n", "n", int),
             ("--samples", "samples", int), ("--z-start", "z_start", int),
             ("--z-end", "z_end", int), ("--h-max", "h_max", int),
             ("--law", "law", str), ("--theta-max", "theta_max", int)],
    "fs": [("--lambda", "lambda", float), ("--m-star", "m_star", float),
           ("--chi", "chi", float), ("--n", "n", int),
           ("--kernel-times", "kernel_times", str),
           ("--grid-points", "grid_points", int)],
    "analyze": [("--chi", "chi", float), ("--kappa", "kappa", float),
                ("--eps", "eps", float), ("--c-area", "c_area", float),
                ("--c-len", "c_len", float), ("--t0", "t0", float),
                ("--window", "window", float)],
}


def _diag(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prewet",
                                     description="critical prewetting workbench")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, block in _COMMANDS.items():
        p = sub.add_parser(name)
        for flag, key, typ in _FLAG_MAP[block]:
            p.add_argument(flag, dest=f"opt_{key}", type=typ, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--replicas", type=int, default=None)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--config", type=str, default=None)
        p.add_argument("--server", type=str, default=None)
    p = sub.add_parser("report")
    p.add_argument("--out", type=str, required=True)
    p = sub.add_parser("serve")
    p.add_argument("--host", type=str, default="127.0.0.1")
    p.add_argument("--port", type=int, default=8710)
    p.add_argument("--workspace", type=str, default="runs")
    return parser


def _config_from_args(args) -> RunConfig:
    block = _COMMANDS[args.subcommand]
    if args.config:
        cfg = RunConfig.from_file(args.config)
        if cfg.command != block:
            raise ValueError(f"config file is for {cfg.command!r}, not {block!r}")
    else:
        cfg = RunConfig(command=block, options={})
    # flags override the file, the file overrides defaults
    for _, key, _typ in _FLAG_MAP[block]:
        val = getattr(args, f"opt_{key}")
        if val is not None:
            cfg.options[key] = val
    if args.seed is not None:
        cfg.seed = args.seed
    if args.replicas is not None:
        cfg.replicas = args.replicas
    if args.out is not None:
        cfg.out = args.out
    return RunConfig(command=cfg.command, seed=cfg.seed, replicas=cfg.replicas,
                     out=cfg.out, options=cfg.options)


def _run_via_server(cfg: RunConfig, server: str) -> int:
    import httpx

    body = cfg.to_dict()
    with httpx.Client(base_url=server, timeout=3600.0) as client:
        resp = client.post(f"/runs/{cfg.command}", json=body)
        resp.raise_for_status()
        job = resp.json()["job_id"]
        while True:
            status = client.get(f"/runs/{job}").json()
            if status["state"] in ("done", "error"):
                break
            time.sleep(0.2)
        if status["state"] == "error":
            _diag("RemoteRunError", status.get("error", "unknown"))
            return 2
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        names = client.get(f"/runs/{job}/files").json()["files"]
        for name in names:
            data = client.get(f"/runs/{job}/files/{name}")
            (out / name).write_bytes(data.content)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        if args.subcommand == "report":
            summary = run_report(args.out)
            sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
            return 0
        if args.subcommand == "serve":
            import uvicorn

            from .service import create_app

            uvicorn.run(create_app(Path(args.workspace)), host=args.host, port=args.port)
            return 0
        cfg = _config_from_args(args)
        if args.server:
            return _run_via_server(cfg, args.server)
        run_command(cfg)
        return 0
    except (ValueError, KeyError, FileNotFoundError) as exc:
        _diag(type(exc).__name__, str(exc))
        return 1
    except Exception as exc:  # noqa: BLE001 - runtime failures map to exit 2
        _diag(type(exc).__name__, str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
