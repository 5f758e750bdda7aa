/**
 * Strict parser for the curve CSVs emitted by the expanders CLI.
 *
 * Two schemas are accepted:
 *   multi-curve:  delta,<label1>,<label2>,...   (one rho column per curve)
 *   single-curve: delta,rho,residual,iters      (diagnostics are dropped)
 *
 * Empty cells mark unsolved grid points and become nulls (rendered as line
 * breaks). Every parse error carries the 1-based line number.
 */

export interface CurveFile {
  path: string;
  labels: string[];
  deltas: number[];
  /** series[i][j] is the rho of curve `labels[i]` at `deltas[j]`, or null. */
  series: (number | null)[][];
}

export class CsvError extends Error {
  readonly line: number;

  constructor(line: number, message: string) {
    super(`line ${line}: ${message}`);
    this.line = line;
  }
}

const SINGLE_CURVE_HEADER = ["delta", "rho", "residual", "iters"];

function parseCell(raw: string, line: number, column: string): number | null {
  if (raw === "") {
    return null;
  }
  const value = Number(raw);
  if (!Number.isFinite(value)) {
    throw new CsvError(line, `${column} value ${JSON.stringify(raw)} is not a number`);
  }
  return value;
}

export function parseCurveFile(text: string, path: string): CurveFile {
  const lines = text.split("\n");
  if (lines.length > 0 && lines[lines.length - 1] === "") {
    lines.pop();
  }
  if (lines.length < 2) {
    throw new CsvError(1, "need a header and at least one data row");
  }
  const header = lines[0].split(",");
  if (header[0] !== "delta" || header.length < 2) {
    throw new CsvError(1, "header must be 'delta,<label>,...'");
  }
  const singleCurve =
    header.length === SINGLE_CURVE_HEADER.length &&
    header.every((cell, i) => cell === SINGLE_CURVE_HEADER[i]);
  const labels = singleCurve ? ["rho"] : header.slice(1);
  const deltas: number[] = [];
  const series: (number | null)[][] = labels.map(() => []);

  for (let row = 1; row < lines.length; row++) {
    const lineNo = row + 1;
    const cells = lines[row].split(",");
    if (cells.length !== header.length) {
      throw new CsvError(lineNo, `expected ${header.length} cells, found ${cells.length}`);
    }
    const delta = parseCell(cells[0], lineNo, "delta");
    if (delta === null || delta <= 0) {
      throw new CsvError(lineNo, "delta must be a positive number");
    }
    if (deltas.length > 0 && delta <= deltas[deltas.length - 1]) {
      throw new CsvError(lineNo, "delta must be strictly increasing");
    }
    deltas.push(delta);
    const take = singleCurve ? 1 : labels.length;
    for (let k = 0; k < take; k++) {
      const rho = parseCell(cells[k + 1], lineNo, labels[k]);
      if (rho !== null && (rho <= 0 || rho >= 1)) {
        throw new CsvError(lineNo, `${labels[k]} must lie in (0, 1)`);
      }
      series[k].push(rho);
    }
  }
  return { path, labels, deltas, series };
}
