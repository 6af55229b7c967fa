/** Fixed color semantics: blue = existing, gray = proposed, orange to red
 * for target values.  Panels share these so the legend reads the same
 * everywhere.
 */

export const EXISTING_BLUE = "#3572b0";
export const PROPOSED_GRAY = "#9e9e9e";
export const FRONT_EXISTING_RED = "#c0392b";
export const FRONT_PROPOSED_GRAY = "#c4c4c4";
export const VERIFIED_RED = "#c0392b";
export const HIGHLIGHT_STROKE = "#111111";
export const MISSING_GRAY = "#d0d0d0";

const ORANGE: [number, number, number] = [0xff, 0xa1, 0x3b];
const RED: [number, number, number] = [0xc6, 0x17, 0x0b];

function hex2(v: number): string {
  return Math.round(v).toString(16).padStart(2, "0");
}

/** Orange-to-red ramp over [lo, hi]; out-of-range values clamp. */
export function targetColor(value: number | null, lo: number, hi: number): string {
  if (value === null || Number.isNaN(value)) return MISSING_GRAY;
  const span = hi - lo || 1;
  const t = Math.min(1, Math.max(0, (value - lo) / span));
  const c = ORANGE.map((o, i) => o + t * ((RED[i] as number) - o));
  return `#${hex2(c[0] as number)}${hex2(c[1] as number)}${hex2(c[2] as number)}`;
}
