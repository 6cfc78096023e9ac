import { describe, expect, it } from "vitest";

import { fmtDuration, fmtInt, fmtPercent, fmtProba, fmtRange, fmtRate } from "../src/format.js";

describe("formatting", () => {
  it("formats integers with separators", () => {
    expect(fmtInt(0)).toBe("0");
    expect(fmtInt(562524)).toBe("562,524");
  });

  it("formats percentages with two decimals", () => {
    expect(fmtPercent(68.94)).toBe("68.94%");
    expect(fmtPercent(100)).toBe("100.00%");
  });

  it("formats probabilities with four decimals", () => {
    expect(fmtProba(0.9958)).toBe("0.9958");
    expect(fmtProba(1)).toBe("1.0000");
  });

  it("formats rates and durations", () => {
    expect(fmtRate(12.4)).toBe("12/min");
    expect(fmtDuration(9.96)).toBe("10.0s");
    expect(fmtDuration(75)).toBe("1m15s");
    expect(fmtDuration(3605)).toBe("60m05s");
  });

  it("formats ranges with an en dash", () => {
    expect(fmtRange(0, 49)).toBe("0–49");
  });
});
