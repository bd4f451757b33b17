/** Shared chart geometry for the SVG and PNG renderers. */

import { Curves } from "./aggregate.js";

export const WIDTH = 640;
export const HEIGHT = 420;
export const MARGIN = { left: 64, right: 170, top: 28, bottom: 52 };

export const PALETTE = ["#1f6fb2", "#d1495b", "#3e8e5a", "#8d5fb3", "#c77b21"];

export interface Scale {
  (x: number): number;
}

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const k = (r1 - r0) / (d1 - d0);
  return (x: number) => r0 + (x - d0) * k;
}

/** x axis label: swept agent fraction; the alternative-outlier scenario sweeps
 * tau/t, the others l over the full budget. */
export function xAxisLabel(scenario: string): string {
  return scenario === "fig3" ? "τ/t" : "l/ℓ";
}

export const Y_AXIS_LABEL = "ρ";

export function yDomainMin(curves: Curves): number {
  let lo = 1;
  for (const eps of curves.epsValues) {
    for (const p of curves.byEps.get(eps)!) {
      lo = Math.min(lo, p.rho);
    }
  }
  return Math.max(0, Math.floor((lo - 0.05) * 10) / 10);
}

export function ticks(from: number, to: number, step: number): number[] {
  const out: number[] = [];
  // scale to integers to dodge float accumulation in tick positions
  const k = Math.round(1 / step);
  for (let i = Math.ceil(from * k); i <= Math.round(to * k); i += 1) {
    out.push(i / k);
  }
  return out;
}

export function formatEps(eps: number): string {
  return `ε=${eps.toFixed(2)}`;
}
