/** Deterministic SVG renderer: same curves in, same bytes out. */

import { Curves } from "./aggregate.js";
import {
  HEIGHT,
  MARGIN,
  PALETTE,
  WIDTH,
  Y_AXIS_LABEL,
  formatEps,
  linearScale,
  ticks,
  xAxisLabel,
  yDomainMin,
} from "./chart.js";

function fmt(x: number): string {
  return x.toFixed(2);
}

export function renderSvg(curves: Curves, delta: number): string {
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  const yMin = yDomainMin(curves);
  const sx = linearScale(0, 1, x0, x1);
  const sy = linearScale(yMin, 1, y0, y1);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`);
  parts.push(
    `<text x="${fmt((x0 + x1) / 2)}" y="16" text-anchor="middle" font-size="14">` +
      `${curves.scenario}: fraction of correct classification</text>`,
  );

  // axes
  parts.push(
    `<line x1="${fmt(x0)}" y1="${fmt(y0)}" x2="${fmt(x1)}" y2="${fmt(y0)}" stroke="#000" stroke-width="1"/>`,
  );
  parts.push(
    `<line x1="${fmt(x0)}" y1="${fmt(y0)}" x2="${fmt(x0)}" y2="${fmt(y1)}" stroke="#000" stroke-width="1"/>`,
  );
  for (const t of ticks(0, 1, 0.2)) {
    const px = sx(t);
    parts.push(
      `<line x1="${fmt(px)}" y1="${fmt(y0)}" x2="${fmt(px)}" y2="${fmt(y0 + 5)}" stroke="#000"/>`,
    );
    parts.push(
      `<text x="${fmt(px)}" y="${fmt(y0 + 18)}" text-anchor="middle" font-size="11">${t.toFixed(1)}</text>`,
    );
  }
  const yStep = 1 - yMin <= 0.25 ? 0.05 : 0.1;
  for (const t of ticks(yMin, 1, yStep)) {
    const py = sy(t);
    parts.push(
      `<line x1="${fmt(x0 - 5)}" y1="${fmt(py)}" x2="${fmt(x0)}" y2="${fmt(py)}" stroke="#000"/>`,
    );
    parts.push(
      `<text x="${fmt(x0 - 8)}" y="${fmt(py + 4)}" text-anchor="end" font-size="11">${t.toFixed(2)}</text>`,
    );
  }
  parts.push(
    `<text x="${fmt((x0 + x1) / 2)}" y="${fmt(HEIGHT - 14)}" text-anchor="middle" font-size="13">` +
      `${xAxisLabel(curves.scenario)}</text>`,
  );
  parts.push(
    `<text x="20" y="${fmt((y0 + y1) / 2)}" text-anchor="middle" font-size="13" ` +
      `transform="rotate(-90 20 ${fmt((y0 + y1) / 2)})">${Y_AXIS_LABEL}</text>`,
  );

  // reference line at 1 - delta
  const ref = sy(1 - delta);
  parts.push(
    `<line x1="${fmt(x0)}" y1="${fmt(ref)}" x2="${fmt(x1)}" y2="${fmt(ref)}" ` +
      `stroke="#555" stroke-width="1" stroke-dasharray="6,4"/>`,
  );
  parts.push(
    `<text x="${fmt(x1 - 4)}" y="${fmt(ref - 5)}" text-anchor="end" font-size="11" fill="#555">` +
      `1−δ</text>`,
  );

  // one polyline + legend entry per eps
  curves.epsValues.forEach((eps, i) => {
    const color = PALETTE[i % PALETTE.length];
    const pts = curves.byEps
      .get(eps)!
      .map((p) => `${fmt(sx(p.fraction))},${fmt(sy(p.rho))}`)
      .join(" ");
    parts.push(
      `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="1.8"/>`,
    );
    for (const p of curves.byEps.get(eps)!) {
      parts.push(
        `<circle cx="${fmt(sx(p.fraction))}" cy="${fmt(sy(p.rho))}" r="2.2" fill="${color}"/>`,
      );
    }
    const ly = y1 + 14 + i * 18;
    parts.push(
      `<line x1="${fmt(x1 + 12)}" y1="${fmt(ly - 4)}" x2="${fmt(x1 + 34)}" y2="${fmt(ly - 4)}" ` +
        `stroke="${color}" stroke-width="1.8"/>`,
    );
    parts.push(
      `<text x="${fmt(x1 + 40)}" y="${fmt(ly)}" font-size="12">${formatEps(eps)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
