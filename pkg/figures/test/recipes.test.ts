import { execSync } from "node:child_process";
import {
  copyFileSync,
  existsSync,
  mkdirSync,
  mkdtempSync,
  readdirSync,
  readFileSync,
  writeFileSync,
} from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { beforeAll, describe, expect, it } from "vitest";

import { EmptyCsvError, MissingColumnError, MissingInputError } from "../src/csv.js";
import { RECIPES, render } from "../src/recipes.js";

/**
 * The Makefile's srswitch invocations, at reduced grid resolution so
 * the whole pipeline runs in seconds. The CSVs are the only channel
 * between the simulator and the renderer.
 */
const INVOCATIONS: Record<string, string> = {
  "widths.csv": "transitions --q 100 --kappa-points 13",
  "sweep_quantum.csv": "sweep1d --law vonneumann --q 100 --kappa-points 9",
  "sweep_classical.csv": "sweep1d --law classical --q 100 --kappa-points 9",
  "sweep_thermal.csv": "sweep1d --law lindblad --bath 300,35,150 --q 100 --kappa-points 7",
  "grid_quantum.csv":
    "sweep2d --law vonneumann --kappa-l-points 7 --kappa-r-points 7",
  "grid_classical.csv":
    "sweep2d --law classical --kappa-l-points 7 --kappa-r-points 7",
  "trajectory.csv":
    "evolve --law lindblad --bath 300,35,150 --kappa-l 1 --q 100 --horizon-ps 20 --snapshots 81",
  "modes.csv": "scan-spectral --q 100 --kappa-points 9",
};

const IDS = ["fig2a", "fig2b", "fig3", "fig4", "fig5", "fig6"];

let work: string;
let data: string;

function freshOut(name: string): string {
  const dir = join(work, name);
  mkdirSync(dir, { recursive: true });
  return dir;
}

beforeAll(() => {
  work = mkdtempSync(join(tmpdir(), "srswitch-figs-"));
  data = join(work, "data");
  mkdirSync(data);
  for (const [file, args] of Object.entries(INVOCATIONS)) {
    execSync(`srswitch ${args} --out ${join(data, file)}`, {
      stdio: "pipe",
      maxBuffer: 1 << 24,
    });
  }
}, 300_000);

describe("render", () => {
  it("covers every recipe input with a documented invocation", () => {
    const produced = new Set(Object.keys(INVOCATIONS));
    for (const recipe of RECIPES) {
      for (const input of recipe.inputs) {
        expect(produced.has(input.file), input.file).toBe(true);
      }
    }
  });

  it("produces all six figures as SVG plus PNG", () => {
    const out = freshOut("all");
    const written = render("all", data, out);
    expect(written).toHaveLength(12);
    for (const id of IDS) {
      expect(existsSync(join(out, `${id}.svg`))).toBe(true);
      expect(existsSync(join(out, `${id}.png`))).toBe(true);
      expect(readFileSync(join(out, `${id}.svg`), "utf8")).toContain("</svg>");
    }
  });

  it("re-renders pixel-identical rasters", () => {
    const a = freshOut("first");
    const b = freshOut("second");
    render("all", data, a);
    render("all", data, b);
    for (const id of IDS) {
      const one = readFileSync(join(a, `${id}.png`));
      const two = readFileSync(join(b, `${id}.png`));
      expect(one.equals(two), id).toBe(true);
    }
  });

  it("renders a single figure by id", () => {
    const out = freshOut("single");
    const written = render("fig2a", data, out);
    expect(written).toHaveLength(2);
    expect(readdirSync(out).sort()).toEqual(["fig2a.png", "fig2a.svg"]);
  });

  it("rejects an unknown figure id", () => {
    expect(() => render("fig99", data, freshOut("unknown"))).toThrow(
      /unknown figure/i,
    );
  });

  it("fails with MissingColumnError when a column is dropped", () => {
    const broken = join(work, "broken-col");
    mkdirSync(broken, { recursive: true });
    for (const file of Object.keys(INVOCATIONS)) {
      copyFileSync(join(data, file), join(broken, file));
    }
    const lines = readFileSync(join(broken, "sweep_quantum.csv"), "utf8")
      .trimEnd()
      .split("\n");
    const drop = lines[0].split(",").indexOf("unbalanced");
    expect(drop).toBeGreaterThanOrEqual(0);
    const cut = lines.map((l) =>
      l
        .split(",")
        .filter((_, i) => i !== drop)
        .join(","),
    );
    writeFileSync(join(broken, "sweep_quantum.csv"), cut.join("\n") + "\n");

    const out = join(work, "broken-col-out");
    expect(() => render("fig2b", broken, out)).toThrow(MissingColumnError);
    expect(existsSync(out)).toBe(false);
  });

  it("fails with EmptyCsvError on a header-only file", () => {
    const broken = join(work, "broken-empty");
    mkdirSync(broken, { recursive: true });
    for (const file of Object.keys(INVOCATIONS)) {
      copyFileSync(join(data, file), join(broken, file));
    }
    const header = readFileSync(join(data, "widths.csv"), "utf8").split("\n")[0];
    writeFileSync(join(broken, "widths.csv"), header + "\n");
    expect(() => render("fig2a", broken, join(work, "never"))).toThrow(
      EmptyCsvError,
    );
  });

  it("writes nothing when any input of the batch is missing", () => {
    const empty = join(work, "empty-data");
    mkdirSync(empty, { recursive: true });
    const out = join(work, "empty-out");
    expect(() => render("all", empty, out)).toThrow(MissingInputError);
    expect(existsSync(out)).toBe(false);
  });
});
