/**
 * Serialize a display list to a standalone SVG document.
 */
import { Figure, Shape } from "./plot.js";
import { FONT_FAMILY } from "./style.js";

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function num(v: number): string {
  return Number(v.toFixed(2)).toString();
}

function shapeToSvg(s: Shape): string {
  if (s.kind === "rect") {
    return `<rect x="${num(s.x)}" y="${num(s.y)}" width="${num(s.w)}" height="${num(s.h)}" fill="${s.fill}"/>`;
  }
  if (s.kind === "line") {
    const pts = s.points.map(([x, y]) => `${num(x)},${num(y)}`).join(" ");
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    return (
      `<polyline points="${pts}" fill="none" stroke="${s.color}"` +
      ` stroke-width="${num(s.width)}"${dash} stroke-linejoin="round" stroke-linecap="round"/>`
    );
  }
  const rotate = s.rotated ? ` transform="rotate(-90 ${num(s.x)} ${num(s.y)})"` : "";
  const anchor = s.anchor === "start" ? "" : ` text-anchor="${s.anchor}"`;
  return (
    `<text x="${num(s.x)}" y="${num(s.y)}" font-size="${num(s.size)}"` +
    ` fill="${s.color}"${anchor}${rotate}>${esc(s.text)}</text>`
  );
}

export function toSvg(fig: Figure): string {
  const head =
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${fig.width} ${fig.height}"` +
    ` font-family="${FONT_FAMILY}">`;
  return [head, ...fig.shapes.map(shapeToSvg), "</svg>", ""].join("\n");
}
