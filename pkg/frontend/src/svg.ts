/** Scene -> SVG text. Fixed styling, no timestamps: identical scenes give
 * identical bytes. */

import { Primitive, Scene } from "./scene.js";

function num(v: number): string {
  // stable short representation
  return Number(v.toFixed(3)).toString();
}

function pointAttr(points: [number, number][]): string {
  return points.map(([x, y]) => `${num(x)},${num(y)}`).join(" ");
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function render(p: Primitive): string {
  switch (p.kind) {
    case "rect":
      return `<rect x="${num(p.x)}" y="${num(p.y)}" width="${num(p.w)}" height="${num(p.h)}" fill="${p.fill}"/>`;
    case "line":
      return `<line x1="${num(p.x1)}" y1="${num(p.y1)}" x2="${num(p.x2)}" y2="${num(p.y2)}" stroke="${p.stroke}" stroke-width="${num(p.width)}"/>`;
    case "polyline":
      return `<polyline points="${pointAttr(p.points)}" fill="none" stroke="${p.stroke}" stroke-width="${num(p.width)}"/>`;
    case "polygon":
      return `<polygon points="${pointAttr(p.points)}" fill="${p.fill}" stroke="none"/>`;
    case "circle":
      return `<circle cx="${num(p.cx)}" cy="${num(p.cy)}" r="${num(p.r)}" fill="${p.fill}"/>`;
    case "text":
      return `<text x="${num(p.x)}" y="${num(p.y)}" font-family="Helvetica,Arial,sans-serif" font-size="${num(p.size)}" fill="${p.fill}" text-anchor="${p.anchor}">${esc(p.s)}</text>`;
  }
}

export function toSvg(scene: Scene): string {
  const body = scene.items.map(render).join("\n  ");
  return `<svg xmlns="http://www.w3.org/2000/svg" width="${scene.width}" height="${scene.height}" viewBox="0 0 ${scene.width} ${scene.height}">
  <rect x="0" y="0" width="${scene.width}" height="${scene.height}" fill="${scene.background}"/>
  ${body}
</svg>
`;
}
