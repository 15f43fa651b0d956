/**
 * Figure model: panels emit a flat display list of primitive shapes in
 * figure coordinates, and the SVG and PNG writers serialize the same
 * list, so the two outputs always show identical content.
 */
import { FONT_SIZE, FRAME, GRID, TEXT, TICK_SIZE } from "./style.js";

export type Shape =
  | { kind: "rect"; x: number; y: number; w: number; h: number; fill: string }
  | { kind: "line"; points: [number, number][]; color: string; width: number; dash?: string }
  | {
      kind: "text";
      x: number;
      y: number;
      text: string;
      size: number;
      color: string;
      anchor: "start" | "middle" | "end";
      rotated?: boolean;
    };

export interface Figure {
  width: number;
  height: number;
  shapes: Shape[];
}

export interface LineStyle {
  color: string;
  width: number;
  dash?: string;
}

export interface AxisOpts {
  min: number;
  max: number;
  log?: boolean;
  label: string;
}

export interface PanelOpts {
  x: number;
  y: number;
  w: number;
  h: number;
  xAxis: AxisOpts;
  yAxis: AxisOpts;
  tag?: string;
}

/** Tick positions for a log axis: the decades inside [min, max]. */
export function logTicks(min: number, max: number): number[] {
  const ticks: number[] = [];
  const k0 = Math.ceil(Math.log10(min) - 1e-9);
  const k1 = Math.floor(Math.log10(max) + 1e-9);
  const step = k1 - k0 >= 8 ? 2 : 1;
  for (let k = k0; k <= k1; k += step) ticks.push(Math.pow(10, k));
  return ticks;
}

/** Round tick positions for a linear axis (1/2/5 progression). */
export function linearTicks(min: number, max: number, count = 5): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= rough) ?? rough;
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

export function formatTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-2) {
    const k = Math.round(Math.log10(a));
    if (Math.abs(a - Math.pow(10, k)) < a * 1e-9) return (v < 0 ? "-1e" : "1e") + k;
    return v.toExponential(1);
  }
  return String(Number(v.toPrecision(6)));
}

/** One plot area with frame, ticks, and data in axis coordinates. */
export class Panel {
  constructor(
    private readonly fig: Figure,
    private readonly o: PanelOpts,
  ) {}

  xOf(v: number): number {
    const { min, max, log } = this.o.xAxis;
    const t = log ? Math.log(v / min) / Math.log(max / min) : (v - min) / (max - min);
    return this.o.x + t * this.o.w;
  }

  yOf(v: number): number {
    const { min, max, log } = this.o.yAxis;
    const t = log ? Math.log(v / min) / Math.log(max / min) : (v - min) / (max - min);
    return this.o.y + this.o.h - t * this.o.h;
  }

  private ticksFor(axis: AxisOpts): number[] {
    return axis.log ? logTicks(axis.min, axis.max) : linearTicks(axis.min, axis.max);
  }

  /** Grid, frame, tick marks, tick labels, axis labels, corner tag. */
  frame(): void {
    const { x, y, w, h, xAxis, yAxis } = this.o;
    const xt = this.ticksFor(xAxis);
    const yt = this.ticksFor(yAxis);
    for (const v of xt) {
      const px = this.xOf(v);
      this.fig.shapes.push({ kind: "line", points: [[px, y], [px, y + h]], color: GRID, width: 0.5 });
    }
    for (const v of yt) {
      const py = this.yOf(v);
      this.fig.shapes.push({ kind: "line", points: [[x, py], [x + w, py]], color: GRID, width: 0.5 });
    }
    this.fig.shapes.push({
      kind: "line",
      points: [[x, y], [x + w, y], [x + w, y + h], [x, y + h], [x, y]],
      color: FRAME,
      width: 1,
    });
    for (const v of xt) {
      const px = this.xOf(v);
      this.fig.shapes.push({ kind: "line", points: [[px, y + h], [px, y + h + 4]], color: FRAME, width: 1 });
      this.fig.shapes.push({
        kind: "text", x: px, y: y + h + 14, text: formatTick(v),
        size: TICK_SIZE, color: TEXT, anchor: "middle",
      });
    }
    for (const v of yt) {
      const py = this.yOf(v);
      this.fig.shapes.push({ kind: "line", points: [[x - 4, py], [x, py]], color: FRAME, width: 1 });
      this.fig.shapes.push({
        kind: "text", x: x - 6, y: py + 3, text: formatTick(v),
        size: TICK_SIZE, color: TEXT, anchor: "end",
      });
    }
    this.fig.shapes.push({
      kind: "text", x: x + w / 2, y: y + h + 30, text: xAxis.label,
      size: FONT_SIZE, color: TEXT, anchor: "middle",
    });
    this.fig.shapes.push({
      kind: "text", x: x - 38, y: y + h / 2, text: yAxis.label,
      size: FONT_SIZE, color: TEXT, anchor: "middle", rotated: true,
    });
    if (this.o.tag) {
      this.fig.shapes.push({
        kind: "text", x: x + 6, y: y - 6, text: this.o.tag,
        size: FONT_SIZE, color: TEXT, anchor: "start",
      });
    }
  }

  /** Polyline of (xs, ys); non-finite points split the line, segments
   * are clipped to the panel box. */
  curve(xs: number[], ys: number[], style: LineStyle): void {
    let run: [number, number][] = [];
    const flush = () => {
      if (run.length > 1) {
        this.fig.shapes.push({ kind: "line", points: run, ...style });
      }
      run = [];
    };
    for (let i = 0; i < xs.length; i++) {
      const vx = xs[i];
      const vy = ys[i];
      const usable =
        Number.isFinite(vx) && Number.isFinite(vy) && (!this.o.xAxis.log || vx > 0) && (!this.o.yAxis.log || vy > 0);
      if (!usable) {
        flush();
        continue;
      }
      const p: [number, number] = [this.xOf(vx), this.yOf(vy)];
      if (run.length === 0) {
        run.push(p);
        continue;
      }
      const clipped = this.clip(run[run.length - 1], p);
      if (clipped === null) {
        flush();
        run = [p];
      } else {
        if (clipped.enter) {
          flush();
          run = [clipped.a];
        }
        run.push(clipped.b);
        if (clipped.exit) flush();
      }
    }
    flush();
  }

  /** Liang-Barsky segment clip against the panel box. */
  private clip(
    a: [number, number],
    b: [number, number],
  ): { a: [number, number]; b: [number, number]; enter: boolean; exit: boolean } | null {
    const { x, y, w, h } = this.o;
    const dx = b[0] - a[0];
    const dy = b[1] - a[1];
    let t0 = 0;
    let t1 = 1;
    const edges: [number, number][] = [
      [-dx, a[0] - x],
      [dx, x + w - a[0]],
      [-dy, a[1] - y],
      [dy, y + h - a[1]],
    ];
    for (const [p, q] of edges) {
      if (p === 0) {
        if (q < 0) return null;
      } else {
        const r = q / p;
        if (p < 0) {
          if (r > t1) return null;
          if (r > t0) t0 = r;
        } else {
          if (r < t0) return null;
          if (r < t1) t1 = r;
        }
      }
    }
    return {
      a: t0 > 0 ? [a[0] + t0 * dx, a[1] + t0 * dy] : a,
      b: t1 < 1 ? [a[0] + t1 * dx, a[1] + t1 * dy] : b,
      enter: t0 > 0,
      exit: t1 < 1,
    };
  }

  /** Vertical annotation line at axis value v, skipped when off-panel. */
  vline(v: number, style: LineStyle): void {
    if (v <= this.o.xAxis.min || v >= this.o.xAxis.max) return;
    const px = this.xOf(v);
    this.fig.shapes.push({
      kind: "line", points: [[px, this.o.y], [px, this.o.y + this.o.h]], ...style,
    });
  }

  /** Horizontal annotation line at axis value v. */
  hline(v: number, style: LineStyle): void {
    if (v <= this.o.yAxis.min || v >= this.o.yAxis.max) return;
    const py = this.yOf(v);
    this.fig.shapes.push({
      kind: "line", points: [[this.o.x, py], [this.o.x + this.o.w, py]], ...style,
    });
  }

  /** Straight segment between two axis-coordinate points (clipped). */
  segment(x0: number, y0: number, x1: number, y1: number, style: LineStyle): void {
    this.curve([x0, x1], [y0, y1], style);
  }

  /** Filled cell map: one rect per (xs[i], ys[j]) sample, cell edges at
   * midpoints between neighbors in pixel space. */
  cells(xs: number[], ys: number[], value: (i: number, j: number) => number,
        color: (v: number) => string): void {
    const xe = this.edges(xs.map((v) => this.xOf(v)));
    const ye = this.edges(ys.map((v) => this.yOf(v)));
    for (let i = 0; i < xs.length; i++) {
      for (let j = 0; j < ys.length; j++) {
        const v = value(i, j);
        if (!Number.isFinite(v)) continue;
        const x0 = Math.min(xe[i], xe[i + 1]);
        const y0 = Math.min(ye[j], ye[j + 1]);
        this.fig.shapes.push({
          kind: "rect", x: x0, y: y0,
          w: Math.abs(xe[i + 1] - xe[i]), h: Math.abs(ye[j + 1] - ye[j]),
          fill: color(v),
        });
      }
    }
  }

  private edges(centers: number[]): number[] {
    const e = [centers[0] - (centers[1] - centers[0]) / 2];
    for (let i = 0; i + 1 < centers.length; i++) e.push((centers[i] + centers[i + 1]) / 2);
    const n = centers.length;
    e.push(centers[n - 1] + (centers[n - 1] - centers[n - 2]) / 2);
    return e;
  }

  /** Line-sample legend in the top-right panel corner. */
  legend(entries: { label: string; style: LineStyle }[]): void {
    const lineLen = 18;
    const rowH = 13;
    const padX = 6;
    const textW = Math.max(...entries.map((e) => e.label.length)) * TICK_SIZE * 0.62;
    const w = lineLen + 4 + textW + 2 * padX;
    const h = entries.length * rowH + 6;
    const x = this.o.x + this.o.w - w - 6;
    const y = this.o.y + 6;
    this.fig.shapes.push({ kind: "rect", x, y, w, h, fill: "#ffffff" });
    this.fig.shapes.push({
      kind: "line",
      points: [[x, y], [x + w, y], [x + w, y + h], [x, y + h], [x, y]],
      color: GRID, width: 0.5,
    });
    entries.forEach((e, i) => {
      const cy = y + 3 + i * rowH + rowH / 2;
      this.fig.shapes.push({
        kind: "line", points: [[x + padX, cy], [x + padX + lineLen, cy]], ...e.style,
      });
      this.fig.shapes.push({
        kind: "text", x: x + padX + lineLen + 4, y: cy + 3, text: e.label,
        size: TICK_SIZE, color: TEXT, anchor: "start",
      });
    });
  }

  get box(): { x: number; y: number; w: number; h: number } {
    const { x, y, w, h } = this.o;
    return { x, y, w, h };
  }
}

export function newFigure(width: number, height: number, background: string): Figure {
  return { width, height, shapes: [{ kind: "rect", x: 0, y: 0, w: width, h: height, fill: background }] };
}

/** Diverging colormap on [-1, 1]: neg -> cold, 0 -> white, pos -> warm. */
export function divergingColor(
  v: number,
  cold: [number, number, number],
  warm: [number, number, number],
): string {
  const t = Math.max(-1, Math.min(1, v));
  const mix = (c: [number, number, number], a: number) =>
    c.map((ch) => Math.round(255 + (ch - 255) * a)) as [number, number, number];
  const [r, g, b] = t < 0 ? mix(cold, -t) : mix(warm, t);
  return "#" + [r, g, b].map((c) => c.toString(16).padStart(2, "0")).join("");
}
