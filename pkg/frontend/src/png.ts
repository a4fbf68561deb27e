/** Scene -> PNG bytes: a small software rasterizer plus a minimal PNG encoder
 * (RGBA, deflate via node:zlib).  Text primitives are rendered as ticks only
 * in the raster backend; full labels live in the SVG output.
 */

import { deflateSync } from "node:zlib";

import { Primitive, Scene } from "./scene.js";

function parseColor(c: string): [number, number, number, number] {
  if (c === "none") return [0, 0, 0, 0];
  const hex = c.replace("#", "");
  const full = hex.length === 3 ? hex.split("").map((h) => h + h).join("") : hex;
  const v = parseInt(full, 16);
  return [(v >> 16) & 255, (v >> 8) & 255, v & 255, 255];
}

class Raster {
  readonly data: Uint8Array;
  constructor(readonly width: number, readonly height: number) {
    this.data = new Uint8Array(width * height * 4);
  }

  set(x: number, y: number, rgba: [number, number, number, number]): void {
    const xi = Math.round(x);
    const yi = Math.round(y);
    if (xi < 0 || yi < 0 || xi >= this.width || yi >= this.height || rgba[3] === 0) return;
    const o = (yi * this.width + xi) * 4;
    this.data[o] = rgba[0];
    this.data[o + 1] = rgba[1];
    this.data[o + 2] = rgba[2];
    this.data[o + 3] = rgba[3];
  }

  fillRect(x: number, y: number, w: number, h: number, c: [number, number, number, number]): void {
    for (let yy = Math.max(0, Math.round(y)); yy < Math.min(this.height, Math.round(y + h)); yy++) {
      for (let xx = Math.max(0, Math.round(x)); xx < Math.min(this.width, Math.round(x + w)); xx++) {
        this.set(xx, yy, c);
      }
    }
  }

  line(x1: number, y1: number, x2: number, y2: number, c: [number, number, number, number], width: number): void {
    const steps = Math.max(Math.abs(x2 - x1), Math.abs(y2 - y1), 1) * 2;
    const half = Math.max(0, (width - 1) / 2);
    for (let i = 0; i <= steps; i++) {
      const t = i / steps;
      const x = x1 + (x2 - x1) * t;
      const y = y1 + (y2 - y1) * t;
      if (half < 0.5) {
        this.set(x, y, c);
      } else {
        for (let dx = -half; dx <= half; dx++) {
          for (let dy = -half; dy <= half; dy++) this.set(x + dx, y + dy, c);
        }
      }
    }
  }

  circle(cx: number, cy: number, r: number, c: [number, number, number, number]): void {
    for (let y = Math.floor(cy - r); y <= Math.ceil(cy + r); y++) {
      for (let x = Math.floor(cx - r); x <= Math.ceil(cx + r); x++) {
        if ((x - cx) ** 2 + (y - cy) ** 2 <= r * r) this.set(x, y, c);
      }
    }
  }

  polygon(points: [number, number][], c: [number, number, number, number]): void {
    // even-odd scanline fill
    const ys = points.map((p) => p[1]);
    const y0 = Math.max(0, Math.floor(Math.min(...ys)));
    const y1 = Math.min(this.height - 1, Math.ceil(Math.max(...ys)));
    for (let y = y0; y <= y1; y++) {
      const xs: number[] = [];
      for (let i = 0; i < points.length; i++) {
        const [ax, ay] = points[i];
        const [bx, by] = points[(i + 1) % points.length];
        if ((ay <= y && by > y) || (by <= y && ay > y)) {
          xs.push(ax + ((y - ay) / (by - ay)) * (bx - ax));
        }
      }
      xs.sort((a, b) => a - b);
      for (let k = 0; k + 1 < xs.length; k += 2) {
        for (let x = Math.ceil(xs[k]); x <= Math.floor(xs[k + 1]); x++) this.set(x, y, c);
      }
    }
  }
}

function draw(r: Raster, p: Primitive): void {
  switch (p.kind) {
    case "rect":
      r.fillRect(p.x, p.y, p.w, p.h, parseColor(p.fill));
      return;
    case "line":
      r.line(p.x1, p.y1, p.x2, p.y2, parseColor(p.stroke), p.width);
      return;
    case "polyline": {
      const c = parseColor(p.stroke);
      for (let i = 0; i + 1 < p.points.length; i++) {
        r.line(p.points[i][0], p.points[i][1], p.points[i + 1][0], p.points[i + 1][1], c, p.width);
      }
      return;
    }
    case "polygon":
      r.polygon(p.points, parseColor(p.fill));
      return;
    case "circle":
      r.circle(p.cx, p.cy, p.r, parseColor(p.fill));
      return;
    case "text":
      return; // labels are SVG-only
  }
}

// ---- PNG encoding ----------------------------------------------------------

const CRC_TABLE = (() => {
  const t = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    t[n] = c >>> 0;
  }
  return t;
})();

function crc32(buf: Uint8Array): number {
  let c = 0xffffffff;
  for (const b of buf) c = CRC_TABLE[(c ^ b) & 255] ^ (c >>> 8);
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, data: Uint8Array): Uint8Array {
  const out = new Uint8Array(12 + data.length);
  const dv = new DataView(out.buffer);
  dv.setUint32(0, data.length);
  for (let i = 0; i < 4; i++) out[4 + i] = type.charCodeAt(i);
  out.set(data, 8);
  dv.setUint32(8 + data.length, crc32(out.subarray(4, 8 + data.length)));
  return out;
}

export function toPng(scene: Scene): Uint8Array {
  const raster = new Raster(scene.width, scene.height);
  raster.fillRect(0, 0, scene.width, scene.height, parseColor(scene.background));
  for (const item of scene.items) draw(raster, item);

  const stride = scene.width * 4;
  const filtered = new Uint8Array((stride + 1) * scene.height);
  for (let y = 0; y < scene.height; y++) {
    filtered[y * (stride + 1)] = 0; // filter: none
    filtered.set(raster.data.subarray(y * stride, (y + 1) * stride), y * (stride + 1) + 1);
  }
  const ihdr = new Uint8Array(13);
  const dv = new DataView(ihdr.buffer);
  dv.setUint32(0, scene.width);
  dv.setUint32(4, scene.height);
  ihdr[8] = 8;   // bit depth
  ihdr[9] = 6;   // color type RGBA
  const sig = Uint8Array.from([137, 80, 78, 71, 13, 10, 26, 10]);
  const idat = chunk("IDAT", new Uint8Array(deflateSync(filtered, { level: 9 })));
  const parts = [sig, chunk("IHDR", ihdr), idat, chunk("IEND", new Uint8Array(0))];
  const total = parts.reduce((n, p) => n + p.length, 0);
  const out = new Uint8Array(total);
  let off = 0;
  for (const p of parts) {
    out.set(p, off);
    off += p.length;
  }
  return out;
}
