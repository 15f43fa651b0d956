/**
 * Pinned figure style. Rendering is deterministic with respect to the
 * input CSVs only while these constants stay fixed, so treat any edit
 * here as a figure change.
 */

export const FIG_W = 720;
export const FIG_H = 320;

/** Raster pixels per figure unit (PNG is FIG_W*RASTER_SCALE wide). */
export const RASTER_SCALE = 2;

export const FONT_FAMILY = "Helvetica, Arial, sans-serif";
export const FONT_SIZE = 11;
export const TITLE_SIZE = 12;
export const TICK_SIZE = 9;

export const BACKGROUND = "#ffffff";
export const FRAME = "#222222";
export const GRID = "#e5e5e5";
export const TEXT = "#222222";

/** Curve colors; quantum/classical follow the red-upper black-lower convention. */
export const QUANTUM = "#000000";
export const CLASSICAL = "#d7191c";
export const THERMAL = "#000000";
export const COHERENCE = "#7b3294";

/** Transport colormap convention: red = left branch, blue = right branch. */
export const DIVERGING_RED: [number, number, number] = [178, 24, 43];
export const DIVERGING_BLUE: [number, number, number] = [33, 102, 172];
export const RATIO_CURVE = "#ffffff";

/** Per-state colors for spectral scans (six states). */
export const STATES = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

/** Annotation line styles. */
export const ST_LINE = { color: "#555555", width: 1, dash: "4,3" };
export const SWITCH_LINE = { color: "#555555", width: 1, dash: "7,2,1,2" };
export const DIAGONAL = { color: "#222222", width: 1, dash: "4,3" };
export const ANTIDIAGONAL = { color: "#222222", width: 1.4 };
