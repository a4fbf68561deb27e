/** Device-independent drawing primitives shared by the SVG and PNG backends.
 *
 * Coordinates are in pixels with the origin at the top-left; every figure
 * builder produces one Scene, so both output formats draw the same geometry.
 */

export type Primitive =
  | { kind: "rect"; x: number; y: number; w: number; h: number; fill: string }
  | { kind: "line"; x1: number; y1: number; x2: number; y2: number; stroke: string; width: number }
  | { kind: "polyline"; points: [number, number][]; stroke: string; width: number }
  | { kind: "polygon"; points: [number, number][]; fill: string }
  | { kind: "circle"; cx: number; cy: number; r: number; fill: string }
  | { kind: "text"; x: number; y: number; s: string; size: number; fill: string; anchor: "start" | "middle" | "end" };

export interface Scene {
  width: number;
  height: number;
  background: string;
  items: Primitive[];
}

export interface Axis {
  x0: number; y0: number; x1: number; y1: number;   // pixel frame (y0 above y1)
  xmin: number; xmax: number; ymin: number; ymax: number;
}

export function makeScene(width: number, height: number): Scene {
  return { width, height, background: "#ffffff", items: [] };
}

export function xPix(a: Axis, x: number): number {
  return a.x0 + ((x - a.xmin) / (a.xmax - a.xmin)) * (a.x1 - a.x0);
}

export function yPix(a: Axis, y: number): number {
  return a.y1 - ((y - a.ymin) / (a.ymax - a.ymin)) * (a.y1 - a.y0);
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1000 || a < 0.01) return v.toExponential(1);
  return Number(v.toPrecision(3)).toString();
}

/** Frame, ticks and labels for a data axis. */
export function drawAxis(scene: Scene, a: Axis, xticks: number[], yticks: number[],
                         xlabel: string, ylabel: string): void {
  const col = "#222222";
  scene.items.push({ kind: "line", x1: a.x0, y1: a.y1, x2: a.x1, y2: a.y1, stroke: col, width: 1 });
  scene.items.push({ kind: "line", x1: a.x0, y1: a.y0, x2: a.x0, y2: a.y1, stroke: col, width: 1 });
  for (const t of xticks) {
    const px = xPix(a, t);
    scene.items.push({ kind: "line", x1: px, y1: a.y1, x2: px, y2: a.y1 + 4, stroke: col, width: 1 });
    scene.items.push({ kind: "text", x: px, y: a.y1 + 16, s: fmtTick(t), size: 11, fill: col, anchor: "middle" });
  }
  for (const t of yticks) {
    const py = yPix(a, t);
    scene.items.push({ kind: "line", x1: a.x0 - 4, y1: py, x2: a.x0, y2: py, stroke: col, width: 1 });
    scene.items.push({ kind: "text", x: a.x0 - 7, y: py + 4, s: fmtTick(t), size: 11, fill: col, anchor: "end" });
  }
  scene.items.push({ kind: "text", x: (a.x0 + a.x1) / 2, y: a.y1 + 32, s: xlabel, size: 12, fill: col, anchor: "middle" });
  scene.items.push({ kind: "text", x: a.x0, y: a.y0 - 8, s: ylabel, size: 12, fill: col, anchor: "start" });
}

export function ticks(lo: number, hi: number, n = 5): number[] {
  const span = hi - lo;
  if (span <= 0) return [lo];
  const raw = span / n;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= n + 1) ?? mag * 10;
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = start; v <= hi + 1e-12 * span; v += step) out.push(Number(v.toPrecision(12)));
  return out;
}
