/**
 * Simulator Sickness Questionnaire form model: 16 symptoms rated 0-3.
 * Scoring happens server-side; the form only collects and validates.
 */

export const SSQ_SYMPTOMS = [
  "General discomfort",
  "Fatigue",
  "Headache",
  "Eye strain",
  "Difficulty focusing",
  "Increased salivation",
  "Sweating",
  "Nausea",
  "Difficulty concentrating",
  "Fullness of head",
  "Blurred vision",
  "Dizziness (eyes open)",
  "Dizziness (eyes closed)",
  "Vertigo",
  "Stomach awareness",
  "Burping",
] as const;

export const RATING_LABELS = ["None", "Slight", "Moderate", "Severe"] as const;

export type Rating = 0 | 1 | 2 | 3;
export type Phase = "pre" | "post";

export class SsqForm {
  private ratings: (Rating | null)[] = new Array(SSQ_SYMPTOMS.length).fill(null);

  set(itemIndex: number, rating: Rating): void {
    if (itemIndex < 0 || itemIndex >= SSQ_SYMPTOMS.length) {
      throw new Error(`item index out of range: ${itemIndex}`);
    }
    if (![0, 1, 2, 3].includes(rating)) {
      throw new Error(`rating must be 0..3, got ${rating}`);
    }
    this.ratings[itemIndex] = rating;
  }

  get(itemIndex: number): Rating | null {
    return this.ratings[itemIndex];
  }

  /** Indices of items still unanswered; submission stays blocked until empty. */
  unanswered(): number[] {
    return this.ratings.flatMap((r, i) => (r === null ? [i] : []));
  }

  isComplete(): boolean {
    return this.unanswered().length === 0;
  }

  /** Wire payload; throws while any item is unanswered. */
  toPayload(phase: Phase): { phase: Phase; items: number[] } {
    const missing = this.unanswered();
    if (missing.length > 0) {
      throw new Error(
        `questionnaire incomplete: unanswered items ${missing.map((i) => i + 1).join(", ")}`,
      );
    }
    return { phase, items: this.ratings.map((r) => r as number) };
  }

  reset(): void {
    this.ratings.fill(null);
  }
}
