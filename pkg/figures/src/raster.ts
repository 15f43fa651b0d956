/**
 * Rasterize a display list and encode it as a PNG.
 *
 * Everything is integer pixel stamping with fixed parameters and a
 * pinned zlib level, so the same figure always encodes to the same
 * bytes; re-rendering a figure from identical CSVs is byte-identical.
 */
import { deflateSync } from "node:zlib";

import { ADVANCE, GLYPH_H, GLYPH_W, glyph, textWidth } from "./font.js";
import { Figure, Shape } from "./plot.js";
import { RASTER_SCALE } from "./style.js";

type Rgb = [number, number, number];

function parseColor(hex: string): Rgb {
  return [
    parseInt(hex.slice(1, 3), 16),
    parseInt(hex.slice(3, 5), 16),
    parseInt(hex.slice(5, 7), 16),
  ];
}

function parseDash(dash: string | undefined): number[] | null {
  if (!dash) return null;
  const parts = dash.split(",").map(Number);
  return parts.length % 2 === 0 ? parts : parts.concat(parts);
}

class Framebuffer {
  readonly data: Uint8Array;

  constructor(
    readonly w: number,
    readonly h: number,
  ) {
    this.data = new Uint8Array(w * h * 3).fill(255);
  }

  set(x: number, y: number, [r, g, b]: Rgb): void {
    if (x < 0 || y < 0 || x >= this.w || y >= this.h) return;
    const i = (y * this.w + x) * 3;
    this.data[i] = r;
    this.data[i + 1] = g;
    this.data[i + 2] = b;
  }

  fillRect(x0: number, y0: number, x1: number, y1: number, c: Rgb): void {
    const xa = Math.max(0, Math.round(x0));
    const ya = Math.max(0, Math.round(y0));
    const xb = Math.min(this.w, Math.round(x1));
    const yb = Math.min(this.h, Math.round(y1));
    for (let y = ya; y < yb; y++) {
      for (let x = xa; x < xb; x++) this.set(x, y, c);
    }
  }

  stamp(cx: number, cy: number, pen: number, c: Rgb): void {
    const r = (pen - 1) / 2;
    const x0 = Math.round(cx - r);
    const y0 = Math.round(cy - r);
    for (let y = y0; y < y0 + pen; y++) {
      for (let x = x0; x < x0 + pen; x++) this.set(x, y, c);
    }
  }
}

function drawLine(fb: Framebuffer, s: Extract<Shape, { kind: "line" }>): void {
  const c = parseColor(s.color);
  const pen = Math.max(1, Math.round(s.width * RASTER_SCALE));
  const dash = parseDash(s.dash);
  const period = dash ? dash.reduce((a, b) => a + b, 0) : 0;
  let travelled = 0;
  for (let i = 0; i + 1 < s.points.length; i++) {
    const [x0, y0] = s.points[i];
    const [x1, y1] = s.points[i + 1];
    const len = Math.hypot(x1 - x0, y1 - y0);
    const steps = Math.max(1, Math.ceil(len * RASTER_SCALE * 2));
    for (let k = 0; k <= steps; k++) {
      const t = k / steps;
      if (dash) {
        let phase = (travelled + t * len) % period;
        let on = true;
        for (const d of dash) {
          if (phase < d) break;
          phase -= d;
          on = !on;
        }
        if (!on) continue;
      }
      fb.stamp((x0 + t * (x1 - x0)) * RASTER_SCALE, (y0 + t * (y1 - y0)) * RASTER_SCALE, pen, c);
    }
    travelled += len;
  }
}

function drawText(fb: Framebuffer, s: Extract<Shape, { kind: "text" }>): void {
  const c = parseColor(s.color);
  const scale = Math.max(1, Math.round((s.size * RASTER_SCALE) / (GLYPH_H + 1)));
  const wpx = textWidth(s.text) * scale;
  const shift = s.anchor === "middle" ? -wpx / 2 : s.anchor === "end" ? -wpx : 0;
  const ox = Math.round(s.x * RASTER_SCALE);
  const oy = Math.round(s.y * RASTER_SCALE);
  for (let ci = 0; ci < s.text.length; ci++) {
    const cols = glyph(s.text[ci]);
    for (let gx = 0; gx < GLYPH_W; gx++) {
      for (let gy = 0; gy < GLYPH_H; gy++) {
        if (!((cols[gx] >> gy) & 1)) continue;
        // glyph-local pixel, baseline at the glyph bottom
        const lx = shift + (ci * ADVANCE + gx) * scale;
        const ly = (gy - GLYPH_H) * scale;
        for (let sy = 0; sy < scale; sy++) {
          for (let sx = 0; sx < scale; sx++) {
            const dx = lx + sx;
            const dy = ly + sy;
            if (s.rotated) fb.set(ox + Math.round(dy), oy - Math.round(dx), c);
            else fb.set(ox + Math.round(dx), oy + Math.round(dy), c);
          }
        }
      }
    }
  }
}

export function rasterize(fig: Figure): { width: number; height: number; rgb: Uint8Array } {
  const fb = new Framebuffer(fig.width * RASTER_SCALE, fig.height * RASTER_SCALE);
  for (const s of fig.shapes) {
    if (s.kind === "rect") {
      fb.fillRect(
        s.x * RASTER_SCALE, s.y * RASTER_SCALE,
        (s.x + s.w) * RASTER_SCALE, (s.y + s.h) * RASTER_SCALE,
        parseColor(s.fill),
      );
    } else if (s.kind === "line") {
      drawLine(fb, s);
    } else {
      drawText(fb, s);
    }
  }
  return { width: fb.w, height: fb.h, rgb: fb.data };
}

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(buf: Uint8Array): number {
  let c = 0xffffffff;
  for (let i = 0; i < buf.length; i++) c = CRC_TABLE[(c ^ buf[i]) & 0xff] ^ (c >>> 8);
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, data: Uint8Array): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(data.length, 0);
  head.write(type, 4, "latin1");
  const crc = Buffer.alloc(4);
  crc.writeUInt32BE(crc32(Buffer.concat([head.subarray(4), data])), 0);
  return Buffer.concat([head, data, crc]);
}

/** Encode 8-bit RGB scanlines as a PNG (color type 2, filter 0). */
export function encodePng(width: number, height: number, rgb: Uint8Array): Buffer {
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 2; // color type: truecolor
  const stride = width * 3;
  const raw = Buffer.alloc((stride + 1) * height);
  for (let y = 0; y < height; y++) {
    raw[y * (stride + 1)] = 0; // filter: none
    raw.set(rgb.subarray(y * stride, (y + 1) * stride), y * (stride + 1) + 1);
  }
  return Buffer.concat([
    Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    chunk("IHDR", ihdr),
    chunk("IDAT", deflateSync(raw, { level: 9 })),
    chunk("IEND", new Uint8Array(0)),
  ]);
}

export function toPng(fig: Figure): Buffer {
  const { width, height, rgb } = rasterize(fig);
  return encodePng(width, height, rgb);
}
