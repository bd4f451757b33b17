import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { aggregate } from "../src/aggregate.js";
import { parseRunsCsv } from "../src/csv.js";
import { encodePng, renderPng } from "../src/png.js";
import { renderSvg } from "../src/svg.js";

const HERE = dirname(fileURLToPath(import.meta.url));

function fixtureCurves() {
  const rows = parseRunsCsv(
    readFileSync(join(HERE, "fixtures", "small_runs.csv"), "utf-8"),
  );
  return aggregate(rows, "fig1");
}

describe("svg renderer", () => {
  it("is byte-deterministic", () => {
    const curves = fixtureCurves();
    expect(renderSvg(curves, 0.05)).toBe(renderSvg(curves, 0.05));
  });

  it("draws one polyline per eps plus the reference line", () => {
    const svg = renderSvg(fixtureCurves(), 0.05);
    expect(svg.match(/<polyline /g)?.length).toBe(2);
    expect(svg).toContain("stroke-dasharray");
    expect(svg).toContain("ε=0.10");
    expect(svg).toContain("ε=0.30");
    expect(svg).toContain("ρ");
  });

  it("uses the alt-outlier x label for fig3", () => {
    const curves = fixtureCurves();
    const relabelled = { ...curves, scenario: "fig3" };
    expect(renderSvg(relabelled, 0.001)).toContain("τ/t");
    expect(renderSvg(curves, 0.001)).toContain("l/ℓ");
  });
});

describe("png renderer", () => {
  it("emits a valid signature and is deterministic", () => {
    const curves = fixtureCurves();
    const a = renderPng(curves, 0.05);
    const b = renderPng(curves, 0.05);
    expect(a.subarray(0, 8)).toEqual(
      Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    );
    expect(a.equals(b)).toBe(true);
    expect(a.length).toBeGreaterThan(1000);
  });

  it("encodes round-trippable dimensions", () => {
    const png = encodePng(3, 2, new Uint8Array(3 * 2 * 4).fill(128));
    expect(png.readUInt32BE(16)).toBe(3);
    expect(png.readUInt32BE(20)).toBe(2);
  });
});
