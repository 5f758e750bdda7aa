import { describe, expect, it } from "vitest";

import { parseCurveFile } from "../src/csv.js";
import { render } from "../src/svg.js";

const GAPPY = [
  "delta,ONE",
  "1e-6,0.002",
  "1e-4,0.003",
  "1e-2,",
  "1,0.01",
  "",
].join("\n");

function polylines(svg: string, label: string): string[] {
  const pattern = new RegExp(`<polyline[^>]*data-label="${label}"[^>]*>`, "g");
  return svg.match(pattern) ?? [];
}

describe("render", () => {
  it("breaks a curve at unsolved points", () => {
    const svg = render(parseCurveFile(GAPPY, "gappy.csv"));
    expect(polylines(svg, "ONE")).toHaveLength(2);
  });

  it("uses a log-scaled delta axis: decade gridlines are equally spaced", () => {
    const svg = render(parseCurveFile(GAPPY, "gappy.csv"));
    const ticks = [...svg.matchAll(/<text x="([0-9.]+)" y="[0-9.]+" text-anchor="middle" font-size="12">1e(-?\d)<\/text>/g)];
    expect(ticks).toHaveLength(7); // 1e-6 .. 1e0
    const xs = ticks.map((m) => Number(m[1]));
    const gaps = xs.slice(1).map((x, i) => x - xs[i]);
    for (const gap of gaps) {
      expect(Math.abs(gap - gaps[0])).toBeLessThan(0.02);
    }
  });

  it("is deterministic", () => {
    const file = parseCurveFile(GAPPY, "gappy.csv");
    expect(render(file, { title: "t" })).toBe(render(file, { title: "t" }));
  });

  it("escapes titles", () => {
    const svg = render(parseCurveFile(GAPPY, "gappy.csv"), { title: "a<b & c" });
    expect(svg).toContain("a&lt;b &amp; c");
    expect(svg).not.toContain("a<b");
  });

  it("refuses when nothing is solved", () => {
    const empty = "delta,ONE\n1e-6,\n1,\n";
    expect(() => render(parseCurveFile(empty, "empty.csv"))).toThrowError(/no solved/);
  });
});
