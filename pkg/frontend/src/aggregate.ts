/** Correct-classification curves from raw run records. */

import { RunRow } from "./csv.js";

export interface CurvePoint {
  fraction: number;
  rho: number;
  trials: number;
}

export interface Curves {
  scenario: string;
  epsValues: number[];
  byEps: Map<number, CurvePoint[]>;
}

export class EmptyScenarioError extends Error {}

/**
 * Mean correct-classification rate per (eps, fraction). Computed as an
 * integer correct-count divided by the trial count, the same float64
 * division the harness performs, so values match its summary bit for bit.
 */
export function aggregate(rows: RunRow[], scenario: string): Curves {
  const filtered = rows.filter((r) => r.scenario === scenario);
  if (filtered.length === 0) {
    throw new EmptyScenarioError(`no rows for scenario ${JSON.stringify(scenario)}`);
  }
  const correct = new Map<string, number>();
  const total = new Map<string, number>();
  for (const r of filtered) {
    const key = `${r.eps}|${r.fraction}`;
    total.set(key, (total.get(key) ?? 0) + 1);
    if (r.decision === r.truth) {
      correct.set(key, (correct.get(key) ?? 0) + 1);
    }
  }
  const byEps = new Map<number, CurvePoint[]>();
  for (const key of total.keys()) {
    const [epsStr, fracStr] = key.split("|");
    const eps = Number(epsStr);
    const point: CurvePoint = {
      fraction: Number(fracStr),
      rho: (correct.get(key) ?? 0) / total.get(key)!,
      trials: total.get(key)!,
    };
    if (!byEps.has(eps)) {
      byEps.set(eps, []);
    }
    byEps.get(eps)!.push(point);
  }
  const epsValues = [...byEps.keys()].sort((a, b) => a - b);
  for (const eps of epsValues) {
    byEps.get(eps)!.sort((a, b) => a.fraction - b.fraction);
  }
  return { scenario, epsValues, byEps };
}
