import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { beforeAll, describe, expect, it } from "vitest";

import {
  column,
  EmptyCsvError,
  MissingColumnError,
  MissingInputError,
  parseCsv,
  readTable,
  requireColumns,
} from "../src/csv.js";

describe("parseCsv", () => {
  it("parses numeric rows under a header", () => {
    const t = parseCsv("a,b\n1,2\n3.5,-4e2\n", "x.csv");
    expect(t.columns).toEqual(["a", "b"]);
    expect(t.rows).toEqual([
      [1, 2],
      [3.5, -400],
    ]);
  });

  it("maps nan cells to NaN and keeps the row", () => {
    const t = parseCsv("a,b\n1,nan\n", "x.csv");
    expect(t.rows[0][0]).toBe(1);
    expect(Number.isNaN(t.rows[0][1])).toBe(true);
  });

  it("ignores blank lines", () => {
    const t = parseCsv("a\n1\n\n2\n\n", "x.csv");
    expect(column(t, "a")).toEqual([1, 2]);
  });

  it("rejects a header-only file with EmptyCsvError", () => {
    expect(() => parseCsv("a,b\n", "only.csv")).toThrow(EmptyCsvError);
    try {
      parseCsv("a,b\n", "only.csv");
    } catch (e) {
      expect((e as Error).name).toBe("EmptyCsvError");
      expect((e as Error).message).toContain("only.csv");
    }
  });
});

describe("requireColumns", () => {
  const t = parseCsv("a,b\n1,2\n", "t.csv");

  it("accepts present columns", () => {
    expect(() => requireColumns(t, ["a", "b"])).not.toThrow();
  });

  it("names the missing column and the file", () => {
    try {
      requireColumns(t, ["a", "eta_L"]);
      expect.unreachable();
    } catch (e) {
      expect(e).toBeInstanceOf(MissingColumnError);
      expect((e as Error).name).toBe("MissingColumnError");
      expect((e as Error).message).toContain("eta_L");
      expect((e as Error).message).toContain("t.csv");
    }
  });
});

describe("readTable", () => {
  let dir: string;
  beforeAll(() => {
    dir = mkdtempSync(join(tmpdir(), "srswitch-csv-"));
    writeFileSync(join(dir, "ok.csv"), "a\n7\n");
  });

  it("reads a file from disk", () => {
    expect(column(readTable(join(dir, "ok.csv")), "a")).toEqual([7]);
  });

  it("raises MissingInputError for an absent file", () => {
    const path = join(dir, "absent.csv");
    expect(() => readTable(path)).toThrow(MissingInputError);
    try {
      readTable(path);
    } catch (e) {
      expect((e as Error).name).toBe("MissingInputError");
      expect((e as Error).message).toContain("absent.csv");
    }
  });
});
