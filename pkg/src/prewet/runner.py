"""Command orchestration: deterministic runs writing CSV outputs + manifests."""

from __future__ import annotations

import json
import math
import io
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import analysis, cones, fs, interface, sampler, walks
from .model import BoxGeometry, ModelParams, spontaneous_magnetization
from .runio import (RunConfig, RunManifest, SCHEMAS, read_csv_rows, sha256_file,
                    write_csv, worker_count, TOOL_VERSION, FORMAT_VERSION)

__all__ = ["run_command", "run_report"]


def run_command(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    dispatch = {"ising": run_simulate_ising, "walk": run_simulate_walk,
                "fs": run_fs_reference, "analyze": run_analyze}
    return dispatch[cfg.command](cfg, out)


# ---------------------------------------------------------------- ising


def _replica_map(fn, argses):
    if worker_count() > 1 and len(argses) > 1:
        with ProcessPoolExecutor(max_workers=worker_count()) as pool:
            return list(pool.map(fn, argses))
    return [fn(a) for a in argses]


def _ising_replica(args) -> tuple[list, list, list]:
    """Simulate one replica and extract per-sample interface records."""
    cfg_dict, replica = args
    cfg = RunConfig(**cfg_dict)
    opt = cfg.options
    params = ModelParams(beta=opt["beta"], lam=opt["lambda"], n=opt["n"])
    n = params.n
    schedule = sampler.SampleSchedule(burnin_sweeps=opt.get("burnin", 20 * n),
                                      thinning=opt.get("thin", 2 * n),
                                      samples=opt["samples"])
    geometry = BoxGeometry.half_box(n)
    th = analysis.default_thresholds(n)
    iface_rows, summary_rows, step_rows = [], [], []
    for k, config in enumerate(sampler._run_replica(geometry, params, schedule,
                                                    cfg.seed, replica)):
        contours = interface.trace_contours(config)
        profile = interface.envelopes(contours)
        for i, gp, gm in zip(profile.columns, profile.gamma_plus, profile.gamma_minus):
            iface_rows.append((replica, k, int(i), int(gp), int(gm)))
        hit = interface.hits_box(profile, th["box_half_width"], th["box_height"])
        summary_rows.append((replica, k, profile.minus_area, profile.gamma_length,
                             interface.max_closed_diameter(contours), int(hit)))
        try:
            path = cones.LatticePath.from_points(contours.open_gamma)
            walk = cones.effective_walk(cones.decompose(path))
            for j, (theta, zeta) in enumerate(walk.steps):
                step_rows.append((replica, k, j, int(theta), int(zeta)))
        except cones.NoConePointsError:
            pass  # reported by the absence of steps for this sample
    return iface_rows, summary_rows, step_rows


def run_simulate_ising(cfg: RunConfig, out: Path) -> Path:
    if "samples" not in cfg.options:
        if "sweeps" in cfg.options:
            thin = cfg.options.get("thin", 2 * cfg.options["n"])
            cfg.options["samples"] = max(1, cfg.options["sweeps"] // thin)
        else:
            raise ValueError("simulate-ising needs --samples (or --sweeps)")
    manifest = RunManifest.begin(cfg)
    argses = [(cfg.to_dict(), r) for r in range(cfg.replicas)]
    results = _replica_map(_ising_replica, argses)
    iface_rows, summary_rows, step_rows = [], [], []
    for ir, sr, st in results:
        iface_rows.extend(ir)
        summary_rows.extend(sr)
        step_rows.extend(st)
    write_csv(out / "interface.csv", iface_rows, "interface.csv")
    write_csv(out / "interface_summary.csv", summary_rows, "interface_summary.csv")
    write_csv(out / "steps.csv", step_rows, "steps.csv")
    cfg.to_file(out / "config.ini", relative_out=True)
    manifest.finalize(out, ["interface.csv", "interface_summary.csv", "steps.csv",
                            "config.ini"])
    return out


# ---------------------------------------------------------------- walk


def _load_law(opt: dict) -> walks.StepLaw:
    if "law" in opt:
        rows = list(read_csv_rows(opt["law"], "step_law.csv"))
        return walks.StepLaw(tuple((t, z) for t, z, _ in rows),
                             tuple(p for _, _, p in rows))
    return walks.default_step_law(opt.get("theta_max", 3))


def _walk_tilt(opt: dict) -> walks.TiltParams:
    m_star = opt.get("m_star")
    if m_star is None:
        m_star = spontaneous_magnetization(opt["beta"]) if "beta" in opt else 1.0
    return walks.TiltParams(lam=opt["lambda"], m_star=m_star, n=opt["n"],
                            h_max=opt.get("h_max"))


def _walk_replica(args):
    cfg_dict, replica = args
    cfg = RunConfig(**cfg_dict)
    opt = cfg.options
    law = _load_law(opt)
    tilt = _walk_tilt(opt)
    n = opt["n"]
    z0 = opt.get("z_start", max(1, round(n ** (1.0 / 3.0))))
    z1 = opt.get("z_end", z0)
    u, v = (0, z0), (2 * n, z1)
    rng = np.random.Generator(np.random.Philox(key=(cfg.seed % (1 << 64)) * (1 << 64) + replica))
    ensemble = walks.sample_bridge_ensemble(u, v, law, tilt, rng, size=opt["samples"])
    walk_rows, stat_rows = [], []
    for k, w in enumerate(ensemble):
        for j, (t, z) in enumerate(w.points):
            walk_rows.append((replica, k, j, int(t), int(z)))
        stat_rows.append((replica, k, walks.area(w), len(w), w.gap))
    return walk_rows, stat_rows


def run_simulate_walk(cfg: RunConfig, out: Path) -> Path:
    if "samples" not in cfg.options:
        raise ValueError("simulate-walk needs --samples")
    manifest = RunManifest.begin(cfg)
    law = _load_law(cfg.options)
    argses = [({**cfg.to_dict()}, r) for r in range(cfg.replicas)]
    results = _replica_map(_walk_replica, argses)
    walk_rows, stat_rows = [], []
    for wr, sr in results:
        walk_rows.extend(wr)
        stat_rows.extend(sr)
    write_csv(out / "walks.csv", walk_rows, "walks.csv")
    write_csv(out / "walk_stats.csv", stat_rows, "walk_stats.csv")
    write_csv(out / "step_law.csv",
              [(t, z, p) for (t, z), p in zip(law.support, law.probs)], "step_law.csv")
    cfg.to_file(out / "config.ini", relative_out=True)
    manifest.finalize(out, ["walks.csv", "walk_stats.csv", "step_law.csv", "config.ini"])
    return out


# ---------------------------------------------------------------- fs


def run_fs_reference(cfg: RunConfig, out: Path) -> Path:
    opt = cfg.options
    if "chi" not in opt or "lambda" not in opt:
        raise ValueError("fs-reference needs --lambda and --chi")
    manifest = RunManifest.begin(cfg)
    chi = opt["chi"]
    m_star = opt.get("m_star", 1.0)
    c = 2.0 * opt["lambda"] * m_star * math.sqrt(chi)
    params = fs.FSParams(c=c)
    dens = fs.stationary_density(params)
    phi0, _ = fs.ground_state(params)
    npts = opt.get("grid_points", 400)
    grid = np.linspace(0.0, dens.quantile(1.0 - 1e-9), npts)
    rows = [(float(r), float(phi0.normalized(r)), float(dens(r))) for r in grid]
    write_csv(out / "fs_reference.csv", rows, "fs_reference.csv")
    times = [float(s) for s in opt.get("kernel_times", "0.5,1.0").split(",") if s]
    kgrid = grid[:: max(1, npts // 40)]
    krows = []
    for t in times:
        kmat, _ = fs.transition_kernel(params, t, kgrid[:, None], kgrid[None, :])
        for i, r in enumerate(kgrid):
            for j, y in enumerate(kgrid):
                krows.append((t, float(r), float(y), float(kmat[i, j])))
    write_csv(out / "fs_kernel.csv", krows, "fs_kernel.csv")
    cfg.to_file(out / "config.ini", relative_out=True)
    manifest.finalize(out, ["fs_reference.csv", "fs_kernel.csv", "config.ini"])
    return out


# ---------------------------------------------------------------- analyze


def _load_profiles(out: Path) -> dict[tuple[int, int], dict]:
    """Rebuild per-sample profiles from interface.csv + interface_summary.csv."""
    samples: dict[tuple[int, int], dict] = {}
    cols: dict[tuple[int, int], list] = {}
    for replica, k, i, gp, gm in read_csv_rows(out / "interface.csv", "interface.csv"):
        cols.setdefault((replica, k), []).append((i, gp, gm))
    for key, triplets in cols.items():
        triplets.sort()
        samples[key] = {
            "profile": interface.InterfaceProfile(
                x_min=triplets[0][0],
                gamma_plus=np.array([t[1] for t in triplets]),
                gamma_minus=np.array([t[2] for t in triplets]),
                minus_area=0, gamma_length=0),
        }
    for replica, k, area_, length, diam, hit in read_csv_rows(
            out / "interface_summary.csv", "interface_summary.csv"):
        rec = samples[(replica, k)]
        rec["profile"].minus_area = area_
        rec["profile"].gamma_length = length
        rec["diam"] = diam
        rec["hit"] = hit
    return samples


def _pooled_steps(out: Path):
    by_sample: dict[tuple[int, int], list] = {}
    for replica, k, _, theta, zeta in read_csv_rows(out / "steps.csv", "steps.csv"):
        by_sample.setdefault((replica, k), []).append((theta, zeta))
    return by_sample


def _walk_from_steps(steps) -> "cones.EffectiveWalk":
    pts = [(0, 0)]
    for t, z in steps:
        pts.append((pts[-1][0] + t, pts[-1][1] + z))
    return cones.EffectiveWalk(points=tuple(pts))


def run_analyze(cfg: RunConfig, out: Path) -> Path:
    manifest_in = RunManifest.load(out)
    bad = manifest_in.verify(out)
    if bad:
        raise RuntimeError(f"input digests do not match manifest: {bad}")
    base_cfg = manifest_in.config
    opt = cfg.options
    report: dict = {
        "provenance": {
            "tool_version": TOOL_VERSION,
            "format_version": FORMAT_VERSION,
            "analyzed_run": base_cfg,
            "analyze_options": dict(sorted(opt.items())),
            "input_digests": dict(sorted(manifest_in.outputs.items())),
            "seed": cfg.seed,
        }
    }
    command = base_cfg["command"]
    if command == "ising":
        report["ising"] = _analyze_ising(out, base_cfg, opt, cfg.seed)
    elif command == "walk":
        report["walks"] = _analyze_walk(out, base_cfg, opt, cfg.seed)
    else:
        raise ValueError(f"nothing to analyze in a {command!r} run")
    payload = json.dumps(report, indent=2, sort_keys=True) + "\n"
    with io.open(out / "report.json", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(payload)
    return out


def _analyze_ising(out: Path, base_cfg: dict, opt: dict, seed: int) -> dict:
    n = base_cfg["options"]["n"]
    lam = base_cfg["options"]["lambda"]
    beta = base_cfg["options"]["beta"]
    m_star = spontaneous_magnetization(beta)
    samples = _load_profiles(out)
    keys = sorted(samples)
    profiles = [samples[k]["profile"] for k in keys]
    diams = [samples[k]["diam"] for k in keys]
    th = analysis.default_thresholds(n, eps=opt.get("eps", 0.1))
    for name in ("kappa", "c_area", "c_len"):
        if name in opt:
            th[name] = opt[name]
    diag = analysis.diagnostics(profiles, diams, n, th)

    by_sample = _pooled_steps(out)
    chi_se = None
    if "chi" in opt:
        chi, chi_source = opt["chi"], "override"
    elif by_sample:
        wobjs = [_walk_from_steps(s) for s in by_sample.values()]
        chi, chi_se = cones.estimate_chi(wobjs)
        chi_source = "estimated"
    else:
        raise ValueError("no steps.csv and no --chi override")
    if by_sample:
        # restrict to steps in the central half of the box: the full walk is a
        # bridge (sum of zeta identically 0), only bulk steps are informative
        sample_means = []
        for steps in by_sample.values():
            x = -n - 1
            central = []
            for theta, zeta in steps:
                if abs(x + theta / 2.0) <= n / 2.0:
                    central.append(zeta)
                x += theta
            if central:
                sample_means.append(float(np.mean(central)))
        sample_means = np.array(sample_means)
        diag.mean_zeta = float(sample_means.mean())
        diag.zeta_stderr = float(sample_means.std(ddof=1) / math.sqrt(len(sample_means)))

    result = {"diagnostics": diag.to_dict(), "chi": chi, "chi_stderr": chi_se,
              "chi_source": chi_source}
    window = opt.get("window", 0.5)
    t0 = opt.get("t0", 0.0)
    if len(profiles) >= 100 and chi > 0:
        ens = analysis.RescaledEnsemble(
            profiles=[analysis.rescale_interface(p, n, chi) for p in profiles],
            window=(-window, window), provenance="ising",
            meta={"n": n, "lambda": lam, "beta": beta, "chi": chi})
        params = fs.FSParams(c=2.0 * lam * m_star * math.sqrt(chi))
        dens = fs.stationary_density(params)
        stat, ci = analysis.ks_against_fs(ens, t0, dens, seed=seed)
        result["ks"] = {"t0": t0, "stat": stat, "ci": list(ci)}
        diag.ks_at_times[str(t0)] = stat
        dt = window / 2.0
        gap = analysis.two_time_check(ens, (-dt, dt), params)
        result["two_time_gap"] = {"t1": -dt, "t2": dt, "l1": gap}
        diag.two_time_gaps[f"{-dt},{dt}"] = gap
        result["diagnostics"] = diag.to_dict()
    return result


def _analyze_walk(out: Path, base_cfg: dict, opt: dict, seed: int) -> dict:
    from .cones import EffectiveWalk

    n = base_cfg["options"]["n"]
    lam = base_cfg["options"]["lambda"]
    m_star = base_cfg["options"].get("m_star", 1.0)
    rows = list(read_csv_rows(out / "walks.csv", "walks.csv"))
    pts: dict[tuple[int, int], list] = {}
    for replica, k, j, t, z in rows:
        pts.setdefault((replica, k), []).append((j, t, z))
    wobjs = []
    for key in sorted(pts):
        seq = sorted(pts[key])
        wobjs.append(EffectiveWalk(points=tuple((t, z) for _, t, z in seq)))
    stats = walks.ensemble_stats(wobjs)
    law_rows = list(read_csv_rows(out / "step_law.csv", "step_law.csv"))
    law = walks.StepLaw(tuple((t, z) for t, z, _ in law_rows),
                        tuple(p for _, _, p in law_rows))
    chi = opt.get("chi", law.chi)
    result = {"quantiles": stats.quantiles(), "chi": chi,
              "chi_source": "override" if "chi" in opt else "law",
              "mean_midpoint_height": float(stats.midpoint_heights.mean())}
    if len(wobjs) >= 100:
        scale = n ** (1.0 / 3.0) * math.sqrt(chi)
        rescaled = stats.midpoint_heights / scale
        params = fs.FSParams(c=2.0 * lam * m_star * math.sqrt(chi))
        dens = fs.stationary_density(params)
        stat = analysis.ks_statistic(rescaled, dens.cdf)
        result["ks_midpoint"] = stat
    return result


def run_report(out_dir: str | Path) -> dict:
    """Validate digests and return the manifest plus any report content."""
    out = Path(out_dir)
    manifest = RunManifest.load(out)
    bad = manifest.verify(out)
    if bad:
        raise RuntimeError(f"digest mismatch for: {', '.join(bad)}")
    summary = {"manifest": manifest.__dict__}
    report_path = out / "report.json"
    if report_path.exists():
        summary["report"] = json.loads(report_path.read_text(encoding="utf-8"))
    return summary
