import { expect, test } from "vitest";

import { EXPECTED_COLUMNS, SweepFormatError, parseSweep } from "../src/schema.js";

export const HEADER = EXPECTED_COLUMNS.join(",");

export function sweepLine(
  code: string,
  method: string,
  p: number,
  failures: number,
  rounds = 200000,
): string {
  const rate = failures / rounds;
  const stderr = Math.sqrt((rate * (1 - rate)) / rounds);
  const overP2 = p === 0 ? "" : rate / p ** 2;
  return [code, method, p, p, p, p, rounds, failures, rate, stderr, overP2, 11].join(",");
}

export function sweepCsv(lines: string[]): string {
  return [HEADER, ...lines].join("\n") + "\n";
}

test("a well-formed sweep parses with typed fields", () => {
  const rows = parseSweep(
    sweepCsv([
      sweepLine("5_1_3", "two-qubit-flagged", 1e-4, 3),
      sweepLine("5_1_3", "two-qubit-flagged", 3e-4, 31),
      sweepLine("5_1_3", "two-qubit-flagged", 1e-3, 107),
    ]),
  );
  expect(rows).toHaveLength(3);
  expect(rows[0].code).toBe("5_1_3");
  expect(rows[2].p).toBeCloseTo(1e-3);
  expect(rows[2].rate_over_p2).toBeCloseTo(107 / 200000 / 1e-6);
});

test("mismatched columns are rejected with both column lists", () => {
  const renamed = sweepCsv([sweepLine("5_1_3", "shor-cat", 1e-3, 9)]).replace(
    "rate_over_p2",
    "ratio",
  );
  expect(() => parseSweep(renamed)).toThrowError(SweepFormatError);
  expect(() => parseSweep(renamed)).toThrowError(/expected: .*rate_over_p2/s);
  expect(() => parseSweep(renamed)).toThrowError(/got: .*ratio/s);
});

test("a header with no rows is rejected", () => {
  expect(() => parseSweep(HEADER + "\n")).toThrowError(/no data rows/);
});

test("rows with p=0 are rejected outright", () => {
  const csv = sweepCsv([
    sweepLine("5_1_3", "two-qubit-flagged", 1e-3, 12),
    sweepLine("5_1_3", "two-qubit-flagged", 0, 0),
  ]);
  expect(() => parseSweep(csv)).toThrowError(/line 3: p=0/);
});

test("non-numeric values in numeric columns are rejected", () => {
  const csv = sweepCsv([sweepLine("5_1_3", "shor-cat", 1e-3, 9)]).replace(
    "200000",
    "many",
  );
  expect(() => parseSweep(csv)).toThrowError(/rounds is not a number/);
});
