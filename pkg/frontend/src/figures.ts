/** The four figure kinds, each a pure function of its input files.
 *
 * Builders return the plotted numeric series alongside the scene so tests can
 * checksum them against values re-extracted from the inputs; nothing here
 * computes statistics beyond axis limits and histogram bin counts.
 */

import { existsSync, readFileSync } from "node:fs";

import { column, readCsv, SchemaError } from "./csv.js";
import { Axis, drawAxis, makeScene, Scene, ticks, xPix, yPix } from "./scene.js";

export interface FigureResult {
  scene: Scene;
  series: Record<string, number[]>;
}

export interface FigureSpec {
  kind: "density-overlay" | "interface-snapshot" | "scaling-fit" | "diagnostics-bars";
  inputs: Record<string, string>;
  out: string;
  style?: Record<string, number>;
}

const W = 640;
const H = 420;
const FRAME: Omit<Axis, "xmin" | "xmax" | "ymin" | "ymax"> =
  { x0: 64, y0: 28, x1: W - 20, y1: H - 48 };

const CURVE = "#1f77b4";
const EMPIR = "#d62728";
const FILL = "#c6dbef";
const BAR = "#2ca02c";

function requireInputs(spec: FigureSpec, names: string[]): void {
  for (const n of names) {
    const p = spec.inputs[n];
    if (!p) throw new SchemaError(`figure ${spec.kind}: missing input '${n}'`);
    if (!existsSync(p)) throw new SchemaError(`figure ${spec.kind}: no such file ${p}`);
  }
}

/** Empirical midpoint-height histogram against the phi0^2 density curve. */
export function densityOverlay(spec: FigureSpec): FigureResult {
  requireInputs(spec, ["fs_reference", "walks"]);
  const ref = readCsv(spec.inputs.fs_reference, ["r", "phi0", "density"]);
  const rs = column(ref, "r");
  const dens = column(ref, "density");
  const walks = readCsv(spec.inputs.walks, ["replica", "sample", "k", "T", "Z"]);
  const scale = spec.style?.height_scale ?? 1.0;   // n^(1/3) sqrt(chi), from the run
  // midpoint height per (replica, sample): Z at the last breakpoint with
  // T <= (T_first + T_last)/2 (pure data extraction)
  const bySample = new Map<string, [number, number][]>();
  for (const [replica, sample, , t, z] of walks.rows) {
    const key = `${replica}:${sample}`;
    if (!bySample.has(key)) bySample.set(key, []);
    bySample.get(key)!.push([t, z]);
  }
  const mids: number[] = [];
  for (const pts of bySample.values()) {
    pts.sort((a, b) => a[0] - b[0]);
    const mid = (pts[0][0] + pts[pts.length - 1][0]) / 2;
    let zv = pts[0][1];
    for (const [t, z] of pts) if (t <= mid) zv = z;
    mids.push(zv / scale);
  }
  mids.sort((a, b) => a - b);

  const xmax = Math.max(rs[rs.length - 1], ...mids) * 1.02;
  const nbins = Math.round(spec.style?.bins ?? 24);
  const edges = Array.from({ length: nbins + 1 }, (_, i) => (xmax * i) / nbins);
  const counts = new Array<number>(nbins).fill(0);
  for (const m of mids) {
    const b = Math.min(nbins - 1, Math.floor((m / xmax) * nbins));
    counts[b] += 1;
  }
  const binw = xmax / nbins;
  const heights = counts.map((c) => c / (mids.length * binw));   // density normalization

  const ymax = Math.max(...dens, ...heights) * 1.1;
  const scene = makeScene(W, H);
  const a: Axis = { ...FRAME, xmin: 0, xmax, ymin: 0, ymax };
  for (let b = 0; b < nbins; b++) {
    if (heights[b] === 0) continue;
    const px = xPix(a, edges[b]);
    const pw = xPix(a, edges[b + 1]) - px;
    const py = yPix(a, heights[b]);
    scene.items.push({ kind: "rect", x: px, y: py, w: pw, h: a.y1 - py, fill: FILL });
  }
  scene.items.push({
    kind: "polyline",
    points: rs.map((r, i) => [xPix(a, r), yPix(a, dens[i])] as [number, number]),
    stroke: CURVE, width: 2,
  });
  drawAxis(scene, a, ticks(0, xmax), ticks(0, ymax), "rescaled height r", "density");
  scene.items.push({ kind: "text", x: W - 24, y: 40, s: "phi0^2", size: 12, fill: CURVE, anchor: "end" });
  scene.items.push({ kind: "text", x: W - 24, y: 56, s: "empirical", size: 12, fill: EMPIR, anchor: "end" });
  return { scene, series: { r: rs, density: dens, midpoints: mids } };
}

/** One sampled interface: minus region filled, upper envelope highlighted. */
export function interfaceSnapshot(spec: FigureSpec): FigureResult {
  requireInputs(spec, ["interface"]);
  const table = readCsv(spec.inputs.interface, ["replica", "sample", "i", "gamma_plus", "gamma_minus"]);
  const replica = spec.style?.replica ?? table.rows[0][0];
  const sample = spec.style?.sample ?? table.rows[0][1];
  const rows = table.rows.filter((r) => r[0] === replica && r[1] === sample)
    .sort((p, q) => p[2] - q[2]);
  if (rows.length === 0) throw new SchemaError(`no rows for replica ${replica} sample ${sample}`);
  const cols = rows.map((r) => r[2]);
  const gp = rows.map((r) => r[3]);
  const gm = rows.map((r) => r[4]);

  const ymax = Math.max(4, Math.max(...gp) + 2);
  const scene = makeScene(W, H);
  const a: Axis = { ...FRAME, xmin: cols[0], xmax: cols[cols.length - 1], ymin: -1, ymax };
  // minus phase: region below the lower envelope (+1), snapshot style
  const region: [number, number][] = cols.map((c, i) =>
    [xPix(a, c), yPix(a, gm[i] + 1)] as [number, number]);
  region.push([xPix(a, cols[cols.length - 1]), yPix(a, -1)]);
  region.push([xPix(a, cols[0]), yPix(a, -1)]);
  scene.items.push({ kind: "polygon", points: region, fill: FILL });
  // the single highlighted polyline: the upper envelope, wall to wall
  scene.items.push({
    kind: "polyline",
    points: cols.map((c, i) => [xPix(a, c), yPix(a, gp[i])] as [number, number]),
    stroke: EMPIR, width: 2,
  });
  drawAxis(scene, a, ticks(cols[0], cols[cols.length - 1]), ticks(-1, ymax),
           "column i", "height");
  return { scene, series: { i: cols, gamma_plus: gp, gamma_minus: gm } };
}

/** Mean midpoint height against n on log-log axes, with a slope guide. */
export function scalingFit(spec: FigureSpec): FigureResult {
  requireInputs(spec, []);
  const reports = Object.entries(spec.inputs)
    .filter(([k]) => k.startsWith("report"))
    .map(([, v]) => v);
  if (reports.length < 2) throw new SchemaError("scaling-fit needs >= 2 report inputs");
  const ns: number[] = [];
  const means: number[] = [];
  for (const path of reports) {
    if (!existsSync(path)) throw new SchemaError(`no such file ${path}`);
    const rep = JSON.parse(readFileSync(path, "utf-8"));
    const n = rep?.provenance?.analyzed_run?.options?.n;
    const mean = rep?.walks?.mean_midpoint_height;
    if (typeof n !== "number" || typeof mean !== "number") {
      throw new SchemaError(`${path}: missing walks.mean_midpoint_height or options.n`);
    }
    ns.push(n);
    means.push(mean);
  }
  const order = ns.map((_, i) => i).sort((p, q) => ns[p] - ns[q]);
  const xs = order.map((i) => Math.log(ns[i]));
  const ys = order.map((i) => Math.log(means[i]));
  const slope = spec.style?.slope ?? 1 / 3;   // fitted upstream; 1/3 guide otherwise

  const scene = makeScene(W, H);
  const a: Axis = {
    ...FRAME,
    xmin: Math.min(...xs) - 0.2, xmax: Math.max(...xs) + 0.2,
    ymin: Math.min(...ys) - 0.2, ymax: Math.max(...ys) + 0.2,
  };
  const xm = xs.reduce((s, v) => s + v, 0) / xs.length;
  const ym = ys.reduce((s, v) => s + v, 0) / ys.length;
  scene.items.push({
    kind: "line",
    x1: xPix(a, a.xmin), y1: yPix(a, ym + slope * (a.xmin - xm)),
    x2: xPix(a, a.xmax), y2: yPix(a, ym + slope * (a.xmax - xm)),
    stroke: CURVE, width: 1,
  });
  for (let i = 0; i < xs.length; i++) {
    scene.items.push({ kind: "circle", cx: xPix(a, xs[i]), cy: yPix(a, ys[i]), r: 4, fill: EMPIR });
  }
  drawAxis(scene, a, ticks(a.xmin, a.xmax), ticks(a.ymin, a.ymax),
           "log n", "log mean midpoint height");
  scene.items.push({ kind: "text", x: W - 24, y: 40, s: `slope ${slope.toFixed(3)}`, size: 12, fill: CURVE, anchor: "end" });
  return { scene, series: { n: order.map((i) => ns[i]), mean: order.map((i) => means[i]) } };
}

const RATE_KEYS = ["restricted_phase_rate", "repulsion_hit_rate",
                   "area_exceed_rate", "length_exceed_rate"] as const;

/** The four diagnostic event rates as bars in [0, 1]. */
export function diagnosticsBars(spec: FigureSpec): FigureResult {
  requireInputs(spec, ["report"]);
  const rep = JSON.parse(readFileSync(spec.inputs.report, "utf-8"));
  const diag = rep?.ising?.diagnostics;
  if (!diag) throw new SchemaError("report has no ising.diagnostics block");
  const rates = RATE_KEYS.map((k) => {
    const v = diag[k];
    if (typeof v !== "number" || v < 0 || v > 1) throw new SchemaError(`bad rate ${k}`);
    return v;
  });
  const scene = makeScene(W, H);
  const a: Axis = { ...FRAME, xmin: 0, xmax: RATE_KEYS.length, ymin: 0, ymax: 1.05 };
  rates.forEach((v, i) => {
    const px = xPix(a, i + 0.15);
    const pw = xPix(a, i + 0.85) - px;
    const py = yPix(a, v);
    scene.items.push({ kind: "rect", x: px, y: py, w: pw, h: a.y1 - py, fill: BAR });
    scene.items.push({
      kind: "text", x: xPix(a, i + 0.5), y: a.y1 + 16,
      s: RATE_KEYS[i].replace(/_rate$/, "").replace(/_/g, "-"), size: 10,
      fill: "#222222", anchor: "middle",
    });
    scene.items.push({
      kind: "text", x: xPix(a, i + 0.5), y: py - 5, s: v.toFixed(3), size: 10,
      fill: "#222222", anchor: "middle",
    });
  });
  drawAxis(scene, a, [], ticks(0, 1, 4), "", "event rate");
  return { scene, series: { rates } };
}

export function buildFigure(spec: FigureSpec): FigureResult {
  switch (spec.kind) {
    case "density-overlay":
      return densityOverlay(spec);
    case "interface-snapshot":
      return interfaceSnapshot(spec);
    case "scaling-fit":
      return scalingFit(spec);
    case "diagnostics-bars":
      return diagnosticsBars(spec);
    default:
      throw new SchemaError(`unknown figure kind ${(spec as FigureSpec).kind}`);
  }
}
