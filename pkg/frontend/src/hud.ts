/**
 * Attitude HUD: a horizon line that slides vertically with pitch and tilts
 * with roll, against three fixed short reference marks. When pitch and roll
 * are both zero the horizon coincides with the marks exactly; that is the
 * calibration condition the pilot levels their head against.
 */

export interface HudConfig {
  width: number;
  height: number;
  /** Vertical pixels the horizon moves per degree of pitch. */
  pixelsPerDegree: number;
  /** Length of each reference mark and of the horizon gap pattern. */
  markLength: number;
  /** Horizontal distance from center to the outer marks. */
  markSpacing: number;
  /** Half-length of the horizon line. */
  horizonHalfLength: number;
}

export const DEFAULT_HUD: HudConfig = {
  width: 800,
  height: 600,
  pixelsPerDegree: 6,
  markLength: 40,
  markSpacing: 140,
  horizonHalfLength: 220,
};

export interface Segment {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export interface HudModel {
  /** Vertical offset of the horizon center in pixels; +pitch moves it up. */
  lineOffset: number;
  /** Screen rotation of the horizon in degrees, equal to roll. */
  lineTilt: number;
  horizon: Segment;
  /** Three fixed reference marks (left, center, right) on the zero row. */
  referenceMarks: [Segment, Segment, Segment];
}

function mark(cx: number, cy: number, length: number): Segment {
  return { x0: cx - length / 2, y0: cy, x1: cx + length / 2, y1: cy };
}

export function hudModel(pitchDeg: number, rollDeg: number, cfg: HudConfig = DEFAULT_HUD): HudModel {
  const cx = cfg.width / 2;
  const cy = cfg.height / 2;
  const offset = pitchDeg * cfg.pixelsPerDegree;
  const lineY = cy - offset;
  const tiltRad = (rollDeg * Math.PI) / 180;
  const dx = Math.cos(tiltRad) * cfg.horizonHalfLength;
  const dy = Math.sin(tiltRad) * cfg.horizonHalfLength;
  return {
    lineOffset: offset,
    lineTilt: rollDeg,
    horizon: { x0: cx - dx, y0: lineY + dy, x1: cx + dx, y1: lineY - dy },
    referenceMarks: [
      mark(cx - cfg.markSpacing, cy, cfg.markLength),
      mark(cx, cy, cfg.markLength),
      mark(cx + cfg.markSpacing, cy, cfg.markLength),
    ],
  };
}

/** True when the horizon lies pixel-exactly on the reference-mark row. */
export function horizonOnMarks(model: HudModel): boolean {
  const rowY = model.referenceMarks[0].y0;
  return model.horizon.y0 === rowY && model.horizon.y1 === rowY && model.lineTilt === 0;
}

type Ctx2D = CanvasRenderingContext2D;

export function drawHud(ctx: Ctx2D, model: HudModel): void {
  ctx.save();
  ctx.lineWidth = 3;
  ctx.strokeStyle = "#e8f7e8";
  for (const seg of model.referenceMarks) {
    ctx.beginPath();
    ctx.moveTo(seg.x0, seg.y0);
    ctx.lineTo(seg.x1, seg.y1);
    ctx.stroke();
  }
  ctx.strokeStyle = "#6cf26c";
  ctx.beginPath();
  ctx.moveTo(model.horizon.x0, model.horizon.y0);
  ctx.lineTo(model.horizon.x1, model.horizon.y1);
  ctx.stroke();
  ctx.restore();
}
