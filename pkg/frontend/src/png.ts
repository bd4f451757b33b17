/** PNG renderer: a tiny software rasterizer plus a zlib-backed PNG encoder.
 * No text shaping or anti-aliasing; labels use the embedded 5x7 font. */

import { deflateSync } from "node:zlib";

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
import { GLYPH_H, GLYPH_W, glyphRows, textWidth } from "./font5x7.js";

type RGB = [number, number, number];

function hex(color: string): RGB {
  return [
    parseInt(color.slice(1, 3), 16),
    parseInt(color.slice(3, 5), 16),
    parseInt(color.slice(5, 7), 16),
  ];
}

class Raster {
  data: Uint8Array;

  constructor(
    public width: number,
    public height: number,
  ) {
    this.data = new Uint8Array(width * height * 4).fill(255);
  }

  set(x: number, y: number, [r, g, b]: RGB): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) {
      return;
    }
    const i = (y * this.width + x) * 4;
    this.data[i] = r;
    this.data[i + 1] = g;
    this.data[i + 2] = b;
    this.data[i + 3] = 255;
  }

  disc(cx: number, cy: number, radius: number, color: RGB): void {
    for (let dy = -radius; dy <= radius; dy += 1) {
      for (let dx = -radius; dx <= radius; dx += 1) {
        if (dx * dx + dy * dy <= radius * radius) {
          this.set(cx + dx, cy + dy, color);
        }
      }
    }
  }

  line(x0: number, y0: number, x1: number, y1: number, color: RGB): void {
    let [ax, ay] = [Math.round(x0), Math.round(y0)];
    const [bx, by] = [Math.round(x1), Math.round(y1)];
    const dx = Math.abs(bx - ax);
    const dy = -Math.abs(by - ay);
    const sx = ax < bx ? 1 : -1;
    const sy = ay < by ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      this.set(ax, ay, color);
      if (ax === bx && ay === by) {
        break;
      }
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        ax += sx;
      }
      if (e2 <= dx) {
        err += dx;
        ay += sy;
      }
    }
  }

  dashedHLine(x0: number, x1: number, y: number, color: RGB, on = 6, off = 4): void {
    let x = Math.round(x0);
    const end = Math.round(x1);
    while (x <= end) {
      const stop = Math.min(x + on - 1, end);
      this.line(x, y, stop, y, color);
      x = stop + 1 + off;
    }
  }

  text(x: number, y: number, s: string, color: RGB): void {
    let cx = Math.round(x);
    const cy = Math.round(y);
    for (const ch of s) {
      const rows = glyphRows(ch);
      for (let r = 0; r < GLYPH_H; r += 1) {
        for (let c = 0; c < 5; c += 1) {
          if (rows[r][c] === "#") {
            this.set(cx + c, cy + r, color);
          }
        }
      }
      cx += GLYPH_W;
    }
  }
}

// ---------------------------------------------------------------------------
// PNG encoding (8-bit RGBA, filter 0 per scanline)
// ---------------------------------------------------------------------------

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n += 1) {
    let c = n;
    for (let k = 0; k < 8; k += 1) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(buf: Uint8Array): number {
  let c = 0xffffffff;
  for (const byte of buf) {
    c = CRC_TABLE[(c ^ byte) & 0xff] ^ (c >>> 8);
  }
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, payload: Uint8Array): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(payload.length, 0);
  head.write(type, 4, "latin1");
  const body = Buffer.concat([Buffer.from(type, "latin1"), Buffer.from(payload)]);
  const crc = Buffer.alloc(4);
  crc.writeUInt32BE(crc32(body), 0);
  return Buffer.concat([head, Buffer.from(payload), crc]);
}

export function encodePng(width: number, height: number, rgba: Uint8Array): Buffer {
  const stride = width * 4;
  const raw = Buffer.alloc(height * (stride + 1));
  for (let y = 0; y < height; y += 1) {
    raw[y * (stride + 1)] = 0;
    raw.set(rgba.subarray(y * stride, (y + 1) * stride), y * (stride + 1) + 1);
  }
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 6; // color type RGBA
  const signature = Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);
  return Buffer.concat([
    signature,
    chunk("IHDR", ihdr),
    chunk("IDAT", deflateSync(raw, { level: 9 })),
    chunk("IEND", new Uint8Array(0)),
  ]);
}

// ---------------------------------------------------------------------------
// Chart drawing (mirrors the SVG layout)
// ---------------------------------------------------------------------------

const BLACK: RGB = [0, 0, 0];
const GREY: RGB = [85, 85, 85];

export function renderPng(curves: Curves, delta: number): Buffer {
  const img = new Raster(WIDTH, HEIGHT);
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  const yMin = yDomainMin(curves);
  const sx = linearScale(0, 1, x0, x1);
  const sy = linearScale(yMin, 1, y0, y1);

  const title = `${curves.scenario}: fraction of correct classification`;
  img.text((x0 + x1) / 2 - textWidth(title) / 2, 8, title, BLACK);

  img.line(x0, y0, x1, y0, BLACK);
  img.line(x0, y0, x0, y1, BLACK);
  for (const t of ticks(0, 1, 0.2)) {
    const px = sx(t);
    img.line(px, y0, px, y0 + 5, BLACK);
    img.text(px - textWidth(t.toFixed(1)) / 2, y0 + 9, t.toFixed(1), BLACK);
  }
  const yStep = 1 - yMin <= 0.25 ? 0.05 : 0.1;
  for (const t of ticks(yMin, 1, yStep)) {
    const py = sy(t);
    img.line(x0 - 5, py, x0, py, BLACK);
    img.text(x0 - 8 - textWidth(t.toFixed(2)), py - 3, t.toFixed(2), BLACK);
  }
  const xl = xAxisLabel(curves.scenario);
  img.text((x0 + x1) / 2 - textWidth(xl) / 2, HEIGHT - 20, xl, BLACK);
  img.text(12, (y0 + y1) / 2 - 3, Y_AXIS_LABEL, BLACK);

  const ref = sy(1 - delta);
  img.dashedHLine(x0, x1, Math.round(ref), GREY);
  img.text(x1 - textWidth("1−δ") - 4, ref - 11, "1−δ", GREY);

  curves.epsValues.forEach((eps, i) => {
    const color = hex(PALETTE[i % PALETTE.length]);
    const points = curves.byEps.get(eps)!;
    for (let j = 1; j < points.length; j += 1) {
      img.line(
        sx(points[j - 1].fraction),
        sy(points[j - 1].rho),
        sx(points[j].fraction),
        sy(points[j].rho),
        color,
      );
    }
    for (const p of points) {
      img.disc(Math.round(sx(p.fraction)), Math.round(sy(p.rho)), 2, color);
    }
    const ly = y1 + 10 + i * 16;
    img.line(x1 + 12, ly, x1 + 34, ly, color);
    img.text(x1 + 40, ly - 3, formatEps(eps), BLACK);
  });

  return encodePng(WIDTH, HEIGHT, img.data);
}
