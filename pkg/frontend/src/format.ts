/** Display formatting only — no computation on corpus data happens here. */

export function fmtInt(value: number): string {
  return value.toLocaleString("en-US");
}

export function fmtPercent(value: number): string {
  return `${value.toFixed(2)}%`;
}

export function fmtProba(value: number): string {
  return value.toFixed(4);
}

export function fmtRate(perMinute: number): string {
  return `${perMinute.toFixed(0)}/min`;
}

export function fmtDuration(seconds: number): string {
  if (seconds < 60) return `${seconds.toFixed(1)}s`;
  const minutes = Math.floor(seconds / 60);
  const rest = Math.round(seconds % 60);
  return `${minutes}m${String(rest).padStart(2, "0")}s`;
}

export function fmtRange(lo: number, hi: number): string {
  return `${lo}–${hi}`;
}
