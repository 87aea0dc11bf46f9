import { describe, expect, it } from "vitest";

import { SSQ_SYMPTOMS, SsqForm } from "../src/ssq.js";

describe("questionnaire form", () => {
  it("has the sixteen standard symptoms", () => {
    expect(SSQ_SYMPTOMS).toHaveLength(16);
    expect(SSQ_SYMPTOMS[7]).toBe("Nausea");
  });

  it("blocks submission while any item is unanswered", () => {
    const form = new SsqForm();
    for (let i = 0; i < 15; i++) form.set(i, 1);
    expect(form.isComplete()).toBe(false);
    expect(form.unanswered()).toEqual([15]);
    expect(() => form.toPayload("post")).toThrow(/unanswered items 16/);
  });

  it("produces the wire payload once complete", () => {
    const form = new SsqForm();
    for (let i = 0; i < 16; i++) form.set(i, (i % 4) as 0 | 1 | 2 | 3);
    expect(form.isComplete()).toBe(true);
    const payload = form.toPayload("pre");
    expect(payload.phase).toBe("pre");
    expect(payload.items).toHaveLength(16);
    expect(payload.items[5]).toBe(1);
  });

  it("rejects out-of-range ratings and indexes", () => {
    const form = new SsqForm();
    expect(() => form.set(0, 4 as never)).toThrow(/0\.\.3/);
    expect(() => form.set(16, 1)).toThrow(/out of range/);
  });

  it("resets to untouched", () => {
    const form = new SsqForm();
    form.set(0, 2);
    form.reset();
    expect(form.get(0)).toBeNull();
    expect(form.unanswered()).toHaveLength(16);
  });
});
