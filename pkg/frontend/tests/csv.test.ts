import { describe, expect, it } from "vitest";

import { CsvError, parseCurveFile } from "../src/csv.js";

const MULTI = [
  "delta,BT,BI",
  "1e-6,0.002,0.0001",
  "1e-3,,0.0002",
  "1,0.01,0.0004",
  "",
].join("\n");

const SINGLE = [
  "delta,rho,residual,iters",
  "1e-6,0.002,1e-13,30",
  "1,0.01,5e-14,28",
  "",
].join("\n");

describe("parseCurveFile", () => {
  it("parses multi-curve files with gaps", () => {
    const file = parseCurveFile(MULTI, "multi.csv");
    expect(file.labels).toEqual(["BT", "BI"]);
    expect(file.deltas).toEqual([1e-6, 1e-3, 1]);
    expect(file.series[0]).toEqual([0.002, null, 0.01]);
    expect(file.series[1]).toEqual([0.0001, 0.0002, 0.0004]);
  });

  it("parses the single-curve diagnostic schema as one labelled curve", () => {
    const file = parseCurveFile(SINGLE, "single.csv");
    expect(file.labels).toEqual(["rho"]);
    expect(file.series[0]).toEqual([0.002, 0.01]);
  });

  it("rejects a bad header on line 1", () => {
    expect(() => parseCurveFile("rho,delta\n1,2\n", "x.csv")).toThrowError(/line 1/);
  });

  it("rejects non-numeric cells with their line number", () => {
    const text = "delta,BT\n1e-6,0.1\n1e-3,abc\n";
    expect(() => parseCurveFile(text, "x.csv")).toThrowError(/line 3.*abc/);
  });

  it("rejects non-increasing delta", () => {
    const text = "delta,BT\n1e-3,0.1\n1e-6,0.2\n";
    expect(() => parseCurveFile(text, "x.csv")).toThrowError(/line 3.*increasing/);
  });

  it("rejects rho outside (0, 1)", () => {
    const text = "delta,BT\n1e-3,1.5\n";
    expect(() => parseCurveFile(text, "x.csv")).toThrowError(/line 2.*\(0, 1\)/);
  });

  it("rejects ragged rows", () => {
    const text = "delta,BT,BI\n1e-3,0.1\n";
    expect(() => parseCurveFile(text, "x.csv")).toThrowError(CsvError);
  });
});
