#!/usr/bin/env node
/** prewet-plot --spec spec.json [--out-dir DIR]
 *
 * Renders the figure described by the spec to <out>.svg and <out>.png.
 * Inputs are validated before rendering; a missing or malformed input exits
 * nonzero with a one-line JSON diagnostic on stderr.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname, resolve } from "node:path";
import { readFileSync } from "node:fs";

import { buildFigure, FigureSpec } from "./figures.js";
import { toPng } from "./png.js";
import { toSvg } from "./svg.js";

function fail(kind: string, message: string): never {
  process.stderr.write(JSON.stringify({ error: kind, message }) + "\n");
  process.exit(1);
}

export function main(argv: string[]): void {
  const idx = argv.indexOf("--spec");
  if (idx < 0 || idx + 1 >= argv.length) fail("Usage", "prewet-plot --spec spec.json");
  let spec: FigureSpec;
  try {
    spec = JSON.parse(readFileSync(argv[idx + 1], "utf-8"));
  } catch (e) {
    fail("SpecError", `cannot read spec: ${(e as Error).message}`);
  }
  if (!spec.out) fail("SpecError", "spec is missing 'out'");
  try {
    const { scene } = buildFigure(spec);
    const stem = resolve(spec.out);
    mkdirSync(dirname(stem), { recursive: true });
    writeFileSync(`${stem}.svg`, toSvg(scene));
    writeFileSync(`${stem}.png`, toPng(scene));
    process.stdout.write(`${stem}.svg\n${stem}.png\n`);
  } catch (e) {
    fail((e as Error).constructor.name, (e as Error).message);
  }
}

main(process.argv.slice(2));
