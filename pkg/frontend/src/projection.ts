/**
 * First-person perspective projection from the vehicle pose. Yaw is always
 * zero in this simulation, so the camera rig only pitches and rolls.
 */

export interface Camera {
  x: number;
  y: number;
  z: number;
  pitchDeg: number;
  rollDeg: number;
}

export interface Viewport {
  width: number;
  height: number;
  /** Focal length in pixels; ~0.9*width gives a natural field of view. */
  focal: number;
}

export interface Projected {
  x: number;
  y: number;
  /** Camera-space forward distance; non-positive means behind the camera. */
  depth: number;
}

export function project(
  px: number,
  py: number,
  pz: number,
  cam: Camera,
  view: Viewport,
): Projected | null {
  // World -> camera translation.
  let dx = px - cam.x;
  let dy = py - cam.y;
  let dz = pz - cam.z;

  // Pitch: the vehicle noses down by +pitch, so the view rotates about the
  // x-axis; then roll rotates the image about the view axis.
  const pitch = (cam.pitchDeg * Math.PI) / 180;
  const cp = Math.cos(pitch);
  const sp = Math.sin(pitch);
  const y1 = dy * cp + dz * sp;
  const z1 = -dy * sp + dz * cp;
  dy = y1;
  dz = z1;

  const roll = (cam.rollDeg * Math.PI) / 180;
  const cr = Math.cos(roll);
  const sr = Math.sin(roll);
  const x2 = dx * cr - dy * sr;
  const y2 = dx * sr + dy * cr;
  dx = x2;
  dy = y2;

  if (dz <= 0.05) return null;
  return {
    x: view.width / 2 + (dx / dz) * view.focal,
    y: view.height / 2 - (dy / dz) * view.focal,
    depth: dz,
  };
}
