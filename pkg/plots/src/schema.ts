/**
 * The sweep CSV contract.
 *
 * The columns must match the benchmark writer exactly (order included);
 * anything else is treated as the wrong file rather than guessed at.
 * Rows with p=0 are rejected up front because the whole presentation
 * divides by p^2.
 */

import Papa from "papaparse";

export const EXPECTED_COLUMNS = [
  "code",
  "method",
  "p",
  "p1",
  "p_prep",
  "p_meas",
  "rounds",
  "failures",
  "rate",
  "stderr",
  "rate_over_p2",
  "seed",
] as const;

export interface SweepRow {
  code: string;
  method: string;
  p: number;
  p1: number;
  p_prep: number;
  p_meas: number;
  rounds: number;
  failures: number;
  rate: number;
  stderr: number;
  rate_over_p2: number;
  seed: number;
}

export class SweepFormatError extends Error {}

const NUMERIC_FIELDS = [
  "p",
  "p1",
  "p_prep",
  "p_meas",
  "rounds",
  "failures",
  "rate",
  "stderr",
  "rate_over_p2",
  "seed",
] as const;

export function parseSweep(csvText: string): SweepRow[] {
  const parsed = Papa.parse<Record<string, unknown>>(csvText.trim(), {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  if (fields.join(",") !== EXPECTED_COLUMNS.join(",")) {
    throw new SweepFormatError(
      "unexpected columns\n" +
        `  expected: ${EXPECTED_COLUMNS.join(",")}\n` +
        `  got:      ${fields.join(",")}`,
    );
  }
  if (parsed.data.length === 0) {
    throw new SweepFormatError("no data rows in the sweep");
  }
  return parsed.data.map((raw, index) => toRow(raw, index + 2));
}

function toRow(raw: Record<string, unknown>, line: number): SweepRow {
  if (raw.p === 0) {
    throw new SweepFormatError(
      `line ${line}: p=0, the rate/p^2 ordinate is undefined`,
    );
  }
  for (const field of ["code", "method"] as const) {
    if (typeof raw[field] !== "string" || raw[field] === "") {
      throw new SweepFormatError(`line ${line}: ${field} is empty`);
    }
  }
  for (const field of NUMERIC_FIELDS) {
    const value = raw[field];
    if (typeof value !== "number" || !Number.isFinite(value)) {
      throw new SweepFormatError(
        `line ${line}: ${field} is not a number (got ${String(value)})`,
      );
    }
  }
  return raw as unknown as SweepRow;
}
