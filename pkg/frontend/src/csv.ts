/** Strict parsers for the harness CSV schemas. */

export interface RunRow {
  scenario: string;
  eps: number;
  fraction: number;
  trialProfile: number;
  trialSample: number;
  decision: number;
  truth: number;
  queries: number;
}

export interface SummaryRow {
  scenario: string;
  eps: number;
  fraction: number;
  rho: number;
  rhoKind1: number;
  rhoKind0: number;
  trials: number;
}

export const RUNS_HEADER =
  "scenario,eps,fraction,trial_profile,trial_sample,decision,truth,queries";
export const SUMMARY_HEADER = "scenario,eps,fraction,rho,rho_kind1,rho_kind0,trials";

export class CsvFormatError extends Error {}

function splitLines(text: string): string[] {
  return text.split("\n").filter((line) => line.trim().length > 0);
}

function num(token: string, line: string): number {
  const value = Number(token);
  if (!Number.isFinite(value)) {
    throw new CsvFormatError(`non-numeric field ${JSON.stringify(token)} in line: ${line}`);
  }
  return value;
}

export function parseRunsCsv(text: string): RunRow[] {
  const lines = splitLines(text);
  if (lines.length === 0 || lines[0] !== RUNS_HEADER) {
    throw new CsvFormatError(`expected runs header ${JSON.stringify(RUNS_HEADER)}`);
  }
  return lines.slice(1).map((line) => {
    const f = line.split(",");
    if (f.length !== 8) {
      throw new CsvFormatError(`expected 8 fields, got ${f.length}: ${line}`);
    }
    return {
      scenario: f[0],
      eps: num(f[1], line),
      fraction: num(f[2], line),
      trialProfile: num(f[3], line),
      trialSample: num(f[4], line),
      decision: num(f[5], line),
      truth: num(f[6], line),
      queries: num(f[7], line),
    };
  });
}

export function parseSummaryCsv(text: string): SummaryRow[] {
  const lines = splitLines(text);
  if (lines.length === 0 || lines[0] !== SUMMARY_HEADER) {
    throw new CsvFormatError(`expected summary header ${JSON.stringify(SUMMARY_HEADER)}`);
  }
  return lines.slice(1).map((line) => {
    const f = line.split(",");
    if (f.length !== 7) {
      throw new CsvFormatError(`expected 7 fields, got ${f.length}: ${line}`);
    }
    return {
      scenario: f[0],
      eps: num(f[1], line),
      fraction: num(f[2], line),
      rho: num(f[3], line),
      rhoKind1: num(f[4], line),
      rhoKind0: num(f[5], line),
      trials: num(f[6], line),
    };
  });
}
