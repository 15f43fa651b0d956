/**
 * The six figure recipes and the render entry point.
 *
 * Each recipe names its input CSVs (as produced by the srswitch CLI
 * invocations in the Makefile) and the columns it needs; render
 * validates every input of every requested figure before writing any
 * file, so a bad data directory never leaves partial output behind.
 */
import { mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { column, readTable, requireColumns, Table } from "./csv.js";
import { levelSegments } from "./contour.js";
import { divergingColor, Figure, newFigure, Panel, PanelOpts } from "./plot.js";
import { toPng } from "./raster.js";
import { toSvg } from "./svg.js";
import * as style from "./style.js";

export interface InputSpec {
  file: string;
  columns: string[];
}

export interface FigureRecipe {
  id: string;
  description: string;
  inputs: InputSpec[];
  build: (tables: Table[]) => Figure;
}

const SWEEP_COLS = ["kappa_L", "kappa_R", "eta_L", "eta_R", "unbalanced"];
const SCAN_COLS = ["kappa_L", "k"];

const PW = 250;
const PH = 230;
const ML = 64;
const MT = 34;
const MB = 56;
const GAP = 78;

function panel(fig: Figure, o: PanelOpts): Panel {
  const p = new Panel(fig, o);
  return p;
}

function padLog(values: number[], factor = 1.6): [number, number] {
  const finite = values.filter((v) => Number.isFinite(v) && v > 0);
  return [Math.min(...finite) / factor, Math.max(...finite) * factor];
}

/** Indices of strict interior local maxima. */
function localMaxima(ys: number[]): number[] {
  const out: number[] = [];
  for (let i = 1; i + 1 < ys.length; i++) {
    if (ys[i] > ys[i - 1] && ys[i] > ys[i + 1]) out.push(i);
  }
  return out;
}

/** ST positions (the two tallest peaks) and the minimum between them. */
function transitionMarks(kappa: number[], width: number[]): {
  stL?: number; stR?: number; switchAt?: number;
} {
  const peaks = localMaxima(width).sort((a, b) => width[b] - width[a]).slice(0, 2);
  if (peaks.length < 2) return {};
  const [a, b] = peaks.sort((x, y) => x - y);
  let m = a + 1;
  for (let i = a + 1; i < b; i++) if (width[i] < width[m]) m = i;
  return { stL: kappa[a], stR: kappa[b], switchAt: kappa[m] };
}

/** q = kappa_L / kappa_R, fixed along a 1-d sweep. */
function sweepRatio(t: Table): number {
  return column(t, "kappa_L")[0] / column(t, "kappa_R")[0];
}

function annotateSweepPanel(p: Panel, q: number): void {
  p.vline(1, style.ST_LINE);
  p.vline(q, style.ST_LINE);
  p.vline(Math.sqrt(q), style.SWITCH_LINE);
}

/** Row-major (kappa_L outer) sweep2d CSV back to grid form. */
function gridFrom(t: Table): {
  kl: number[]; kr: number[];
  etaL: number[][]; etaR: number[][]; unb: number[][];
} {
  const klCol = column(t, "kappa_L");
  const krCol = column(t, "kappa_R");
  const kl: number[] = [];
  for (const v of klCol) {
    if (kl.length === 0 || v !== kl[kl.length - 1]) kl.push(v);
  }
  const nr = t.rows.length / kl.length;
  const kr = krCol.slice(0, nr);
  const lift = (name: string) => {
    const col = column(t, name);
    return kl.map((_, i) => col.slice(i * nr, (i + 1) * nr));
  };
  return { kl, kr, etaL: lift("eta_L"), etaR: lift("eta_R"), unb: lift("unbalanced") };
}

function fig2a(tables: Table[]): Figure {
  const [t] = tables;
  const kappa = column(t, "kappa_L");
  const width = column(t, "avg_sub_width_over_D");
  const fig = newFigure(ML + 2 * PW + 30, MT + PH + MB, style.BACKGROUND);
  const p = panel(fig, {
    x: ML, y: MT, w: 2 * PW, h: PH,
    xAxis: { min: kappa[0], max: kappa[kappa.length - 1], log: true, label: "kappa_L" },
    yAxis: { min: padLog(width)[0], max: padLog(width)[1], log: true, label: "avg subradiant width / D" },
    tag: "(a) superradiance transitions",
  });
  p.frame();
  const marks = transitionMarks(kappa, width);
  if (marks.stL !== undefined) p.vline(marks.stL, style.ST_LINE);
  if (marks.stR !== undefined) p.vline(marks.stR, style.ST_LINE);
  if (marks.switchAt !== undefined) p.vline(marks.switchAt, style.SWITCH_LINE);
  p.curve(kappa, width, { color: style.QUANTUM, width: 1.6 });
  return fig;
}

function fig2b(tables: Table[]): Figure {
  const [quantum, classical] = tables;
  const fig = newFigure(ML + 2 * PW + 30, MT + PH + MB, style.BACKGROUND);
  const p = panel(fig, {
    x: ML, y: MT, w: 2 * PW, h: PH,
    xAxis: {
      min: column(quantum, "kappa_L")[0],
      max: column(quantum, "kappa_L").slice(-1)[0],
      log: true, label: "kappa_L",
    },
    yAxis: { min: -1.05, max: 1.05, label: "eta_L - eta_R" },
    tag: "(b) efficiency switching",
  });
  p.frame();
  annotateSweepPanel(p, sweepRatio(quantum));
  p.hline(0, { color: style.GRID, width: 1 });
  p.curve(column(quantum, "kappa_L"), column(quantum, "unbalanced"),
          { color: style.QUANTUM, width: 1.6 });
  p.curve(column(classical, "kappa_L"), column(classical, "unbalanced"),
          { color: style.CLASSICAL, width: 1.6 });
  p.legend([
    { label: "quantum", style: { color: style.QUANTUM, width: 1.6 } },
    { label: "classical", style: { color: style.CLASSICAL, width: 1.6 } },
  ]);
  return fig;
}

function mapPanel(fig: Figure, x: number, tag: string, t: Table): void {
  const g = gridFrom(t);
  const p = panel(fig, {
    x, y: MT, w: PW, h: PW,
    xAxis: { min: g.kl[0], max: g.kl[g.kl.length - 1], log: true, label: "kappa_L" },
    yAxis: { min: g.kr[0], max: g.kr[g.kr.length - 1], log: true, label: "kappa_R" },
    tag,
  });
  p.cells(g.kl, g.kr, (i, j) => g.unb[i][j],
          (v) => divergingColor(v, style.DIVERGING_BLUE, style.DIVERGING_RED));
  p.frame();
  p.vline(1, style.ST_LINE);
  p.hline(1, style.ST_LINE);
  const lo = Math.max(g.kl[0], g.kr[0]);
  const hi = Math.min(g.kl[g.kl.length - 1], g.kr[g.kr.length - 1]);
  p.segment(lo, lo, hi, hi, style.DIAGONAL);
  p.segment(1 / hi, hi, 1 / lo, lo, style.ANTIDIAGONAL);
  const xs = g.kl.map((v) => p.xOf(v));
  const ys = g.kr.map((v) => p.yOf(v));
  const logRatio = g.kl.map((_, i) =>
    g.kr.map((_, j) => Math.log10(g.etaL[i][j] / g.etaR[i][j])));
  const level = Math.log10(9);
  for (const lv of [level, -level]) {
    for (const [x0, y0, x1, y1] of levelSegments(xs, ys, logRatio, lv)) {
      fig.shapes.push({
        kind: "line", points: [[x0, y0], [x1, y1]],
        color: style.RATIO_CURVE, width: 1.4,
      });
    }
  }
}

function colorbar(fig: Figure, x: number, y: number, h: number): void {
  const n = 64;
  for (let i = 0; i < n; i++) {
    const v = 1 - (2 * (i + 0.5)) / n;
    fig.shapes.push({
      kind: "rect", x, y: y + (i * h) / n, w: 12, h: h / n + 0.5,
      fill: divergingColor(v, style.DIVERGING_BLUE, style.DIVERGING_RED),
    });
  }
  fig.shapes.push({
    kind: "line",
    points: [[x, y], [x + 12, y], [x + 12, y + h], [x, y + h], [x, y]],
    color: style.FRAME, width: 1,
  });
  for (const v of [-1, 0, 1]) {
    const py = y + ((1 - v) / 2) * h;
    fig.shapes.push({ kind: "line", points: [[x + 12, py], [x + 16, py]], color: style.FRAME, width: 1 });
    fig.shapes.push({
      kind: "text", x: x + 19, y: py + 3, text: String(v),
      size: style.TICK_SIZE, color: style.TEXT, anchor: "start",
    });
  }
  fig.shapes.push({
    kind: "text", x: x + 40, y: y + h / 2, text: "eta_L - eta_R",
    size: style.TICK_SIZE, color: style.TEXT, anchor: "middle", rotated: true,
  });
}

function fig3(tables: Table[]): Figure {
  const [quantum, classical] = tables;
  const width = ML + PW + GAP + PW + 70;
  const fig = newFigure(width, MT + PW + MB, style.BACKGROUND);
  mapPanel(fig, ML, "(a) quantum", quantum);
  mapPanel(fig, ML + PW + GAP, "(b) classical", classical);
  colorbar(fig, ML + PW + GAP + PW + 14, MT, PW);
  return fig;
}

function fig4(tables: Table[]): Figure {
  const [traj, thermal, quantum] = tables;
  const fig = newFigure(ML + PW + GAP + PW + 30, MT + PH + MB, style.BACKGROUND);
  const t = column(traj, "t_ps");
  const pa = panel(fig, {
    x: ML, y: MT, w: PW, h: PH,
    xAxis: { min: 0, max: t[t.length - 1], label: "t (ps)" },
    yAxis: { min: 0, max: 1.02, label: "population, coherence" },
    tag: "(a) decay with a thermal bath",
  });
  pa.frame();
  pa.curve(t, column(traj, "trace"), { color: style.QUANTUM, width: 1.6 });
  pa.curve(t, column(traj, "rho_11"), { color: style.STATES[0], width: 1.2 });
  pa.curve(t, column(traj, "rho_22"), { color: style.STATES[2], width: 1.2 });
  pa.curve(t, column(traj, "abs_rho_12"), { color: style.COHERENCE, width: 1.2, dash: "4,3" });
  pa.legend([
    { label: "trace", style: { color: style.QUANTUM, width: 1.6 } },
    { label: "rho_11", style: { color: style.STATES[0], width: 1.2 } },
    { label: "rho_22", style: { color: style.STATES[2], width: 1.2 } },
    { label: "|rho_12|", style: { color: style.COHERENCE, width: 1.2, dash: "4,3" } },
  ]);
  const kappa = column(thermal, "kappa_L");
  const pb = panel(fig, {
    x: ML + PW + GAP, y: MT, w: PW, h: PH,
    xAxis: { min: kappa[0], max: kappa[kappa.length - 1], log: true, label: "kappa_L" },
    yAxis: { min: -1.05, max: 1.05, label: "eta_L - eta_R" },
    tag: "(b) switching survives the bath",
  });
  pb.frame();
  annotateSweepPanel(pb, sweepRatio(thermal));
  pb.hline(0, { color: style.GRID, width: 1 });
  pb.curve(column(quantum, "kappa_L"), column(quantum, "unbalanced"),
           { color: style.QUANTUM, width: 1.2, dash: "5,3" });
  pb.curve(kappa, column(thermal, "unbalanced"), { color: style.THERMAL, width: 1.6 });
  pb.legend([
    { label: "thermal bath", style: { color: style.THERMAL, width: 1.6 } },
    { label: "no bath", style: { color: style.QUANTUM, width: 1.2, dash: "5,3" } },
  ]);
  return fig;
}

/** Rows of a spectral scan grouped by state index k (ascending). */
function byState(t: Table, name: string): { k: number; kappa: number[]; values: number[] }[] {
  const ks = column(t, "k");
  const kappa = column(t, "kappa_L");
  const values = column(t, name);
  const states = [...new Set(ks)].sort((a, b) => a - b);
  return states.map((k) => ({
    k,
    kappa: kappa.filter((_, i) => ks[i] === k),
    values: values.filter((_, i) => ks[i] === k),
  }));
}

function scanFigure(
  t: Table, name: string, yAxis: PanelOpts["yAxis"],
  tagA: string, secondary: { name: string; yAxis: PanelOpts["yAxis"]; tag: string },
): Figure {
  const fig = newFigure(ML + PW + GAP + PW + 30, MT + PH + MB, style.BACKGROUND);
  const kappa = column(t, "kappa_L");
  const mkPanel = (x: number, axis: PanelOpts["yAxis"], tag: string) =>
    panel(fig, {
      x, y: MT, w: PW, h: PH,
      xAxis: { min: Math.min(...kappa), max: Math.max(...kappa), log: true, label: "kappa_L" },
      yAxis: axis, tag,
    });
  const pa = mkPanel(ML, yAxis, tagA);
  pa.frame();
  for (const s of byState(t, name)) {
    pa.curve(s.kappa, s.values, { color: style.STATES[(s.k - 1) % style.STATES.length], width: 1.2 });
  }
  const pb = mkPanel(ML + PW + GAP, secondary.yAxis, secondary.tag);
  pb.frame();
  for (const s of byState(t, secondary.name)) {
    pb.curve(s.kappa, s.values, { color: style.STATES[(s.k - 1) % style.STATES.length], width: 1.2 });
  }
  pb.legend(byState(t, name).map((s) => ({
    label: `k=${s.k}`,
    style: { color: style.STATES[(s.k - 1) % style.STATES.length], width: 1.2 },
  })));
  return fig;
}

function fig5(tables: Table[]): Figure {
  return scanFigure(
    tables[0], "overlap_L", { min: 0, max: 1.05, label: "|<L|state>|^2" },
    "(a) left-end overlap",
    { name: "overlap_R", yAxis: { min: 0, max: 1.05, label: "|<R|state>|^2" }, tag: "(b) right-end overlap" },
  );
}

function fig6(tables: Table[]): Figure {
  const widths = column(tables[0], "Gamma_cm1");
  const [wLo, wHi] = padLog(widths, 2);
  return scanFigure(
    tables[0], "PR", { min: 1, max: 6.3, label: "participation ratio" },
    "(a) localization",
    { name: "Gamma_cm1", yAxis: { min: wLo, max: wHi, log: true, label: "width (1/cm)" }, tag: "(b) decay widths" },
  );
}

export const RECIPES: FigureRecipe[] = [
  {
    id: "fig2a",
    description: "normalized subradiant width with superradiance transitions",
    inputs: [{ file: "widths.csv", columns: ["kappa_L", "avg_sub_width_over_D"] }],
    build: fig2a,
  },
  {
    id: "fig2b",
    description: "unbalanced efficiency, quantum vs classical",
    inputs: [
      { file: "sweep_quantum.csv", columns: SWEEP_COLS },
      { file: "sweep_classical.csv", columns: SWEEP_COLS },
    ],
    build: fig2b,
  },
  {
    id: "fig3",
    description: "efficiency maps over (kappa_L, kappa_R), quantum and classical",
    inputs: [
      { file: "grid_quantum.csv", columns: SWEEP_COLS },
      { file: "grid_classical.csv", columns: SWEEP_COLS },
    ],
    build: fig3,
  },
  {
    id: "fig4",
    description: "trajectory decay plus thermal-bath switching curve",
    inputs: [
      { file: "trajectory.csv", columns: ["t_ps", "rho_11", "rho_22", "abs_rho_12", "trace"] },
      { file: "sweep_thermal.csv", columns: SWEEP_COLS },
      { file: "sweep_quantum.csv", columns: SWEEP_COLS },
    ],
    build: fig4,
  },
  {
    id: "fig5",
    description: "sink-site overlap of every eigenstate across kappa_L",
    inputs: [{ file: "modes.csv", columns: [...SCAN_COLS, "overlap_L", "overlap_R"] }],
    build: fig5,
  },
  {
    id: "fig6",
    description: "participation ratio and decay width of every eigenstate",
    inputs: [{ file: "modes.csv", columns: [...SCAN_COLS, "PR", "Gamma_cm1"] }],
    build: fig6,
  },
];

/**
 * Render one figure (or "all") from dataDir into outDir; returns the
 * written paths. Validates every input before writing anything.
 */
export function render(which: string, dataDir: string, outDir: string): string[] {
  const recipes = which === "all" ? RECIPES : RECIPES.filter((r) => r.id === which);
  if (recipes.length === 0) {
    const known = RECIPES.map((r) => r.id).join(", ");
    throw new Error(`unknown figure ${which}; expected one of ${known} or all`);
  }
  const loaded = recipes.map((recipe) => {
    const tables = recipe.inputs.map((spec) => {
      const table = readTable(join(dataDir, spec.file));
      requireColumns(table, spec.columns);
      return table;
    });
    return { recipe, tables };
  });
  mkdirSync(outDir, { recursive: true });
  const written: string[] = [];
  for (const { recipe, tables } of loaded) {
    const fig = recipe.build(tables);
    const svgPath = join(outDir, `${recipe.id}.svg`);
    const pngPath = join(outDir, `${recipe.id}.png`);
    writeFileSync(svgPath, toSvg(fig));
    writeFileSync(pngPath, toPng(fig));
    written.push(svgPath, pngPath);
  }
  return written;
}
