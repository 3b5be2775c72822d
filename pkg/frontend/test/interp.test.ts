import { describe, expect, it } from "vitest";

import { predictPosition, type IconPrediction } from "../src/interp.js";

const base: IconPrediction = {
  serverPosition: 0,
  phase: "AWAIT_JUDGMENT",
  direction: "NEUTRAL",
  serverClockMs: 1000,
  iconSpeed: 2.0,
  driftSpeed: 1.0,
  animationMs: 840,
};

describe("predictPosition", () => {
  it("integrates a held direction at the configured speed", () => {
    const p = { ...base, direction: "RIGHT" as const };
    expect(predictPosition(p, 1250)).toBeCloseTo(0.5);
    expect(predictPosition(p, 1500)).toBeCloseTo(1.0);
  });

  it("clamps at the walls", () => {
    const p = { ...base, direction: "LEFT" as const };
    expect(predictPosition(p, 3000)).toBe(-1);
  });

  it("drifts back to center when neutral", () => {
    const p = { ...base, serverPosition: 0.6 };
    expect(predictPosition(p, 1300)).toBeCloseTo(0.3);
    expect(predictPosition(p, 2000)).toBe(0);
  });

  it("recenters linearly while animating", () => {
    const p = { ...base, phase: "ANIMATING" as const, serverPosition: 1.0 };
    expect(predictPosition(p, 1000)).toBeCloseTo(1.0);
    expect(predictPosition(p, 1420)).toBeCloseTo(0.5);
    expect(predictPosition(p, 1840)).toBe(0);
    expect(predictPosition(p, 5000)).toBe(0);
  });

  it("holds still in terminal phases", () => {
    const p = { ...base, phase: "TRIAL_DONE" as const, serverPosition: 0.2 };
    expect(predictPosition(p, 9999)).toBe(0.2);
  });

  it("never predicts backwards in time", () => {
    const p = { ...base, direction: "RIGHT" as const };
    expect(predictPosition(p, 500)).toBe(0);
  });
});
