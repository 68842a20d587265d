import { EXPECTED_COLUMNS } from "../src/schema.js";

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
