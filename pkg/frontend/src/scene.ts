/**
 * First-person scene painting on a 2D canvas: sky, textured-ish ground
 * grid, waypoint frames, and the pink destination volume. Geometry comes
 * from the course file; the pose comes from state messages. Cosmetics are
 * local, coordinates are contractual.
 */

import { Box, Course, Waypoint, frameBoxes } from "./course.js";
import { Camera, Projected, Viewport, project } from "./projection.js";

type Ctx2D = CanvasRenderingContext2D;

const GROUND_COLOR = "#5c5247";
const GROUND_LINE = "#6d6257";
const SKY_TOP = "#2c3e66";
const SKY_BOTTOM = "#87a5cf";
const FRAME_COLOR = "#d8d2c4";
const NEXT_FRAME_COLOR = "#ffd75e";
const DESTINATION_COLOR = "#ff5ec8";

function polygon(ctx: Ctx2D, points: Projected[], fill: string, alpha = 1.0): void {
  if (points.length < 3) return;
  ctx.save();
  ctx.globalAlpha = alpha;
  ctx.fillStyle = fill;
  ctx.beginPath();
  ctx.moveTo(points[0].x, points[0].y);
  for (const p of points.slice(1)) ctx.lineTo(p.x, p.y);
  ctx.closePath();
  ctx.fill();
  ctx.restore();
}

function projectAll(
  corners: [number, number, number][],
  cam: Camera,
  view: Viewport,
): Projected[] | null {
  const out: Projected[] = [];
  for (const [x, y, z] of corners) {
    const p = project(x, y, z, cam, view);
    if (p === null) return null;
    out.push(p);
  }
  return out;
}

/** The face of an axis-aligned box nearest the camera, as screen points. */
function boxFace(box: Box, cam: Camera, view: Viewport): Projected[] | null {
  const z = cam.z < box.minZ ? box.minZ : box.maxZ;
  return projectAll(
    [
      [box.minX, box.minY, z],
      [box.maxX, box.minY, z],
      [box.maxX, box.maxY, z],
      [box.minX, box.maxY, z],
    ],
    cam,
    view,
  );
}

function drawSky(ctx: Ctx2D, view: Viewport): void {
  const grad = ctx.createLinearGradient(0, 0, 0, view.height);
  grad.addColorStop(0, SKY_TOP);
  grad.addColorStop(1, SKY_BOTTOM);
  ctx.fillStyle = grad;
  ctx.fillRect(0, 0, view.width, view.height);
}

function drawGround(ctx: Ctx2D, cam: Camera, view: Viewport): void {
  // Ground plane strip ahead of the camera.
  const near = Math.max(cam.z + 0.5, 0.5);
  const far = cam.z + 260;
  const half = 80;
  const quad = projectAll(
    [
      [cam.x - half, 0, near],
      [cam.x + half, 0, near],
      [cam.x + half, 0, far],
      [cam.x - half, 0, far],
    ],
    cam,
    view,
  );
  if (quad) polygon(ctx, quad, GROUND_COLOR);
  // Stone-grid lines give speed cues.
  ctx.strokeStyle = GROUND_LINE;
  ctx.lineWidth = 1;
  const z0 = Math.floor(cam.z / 5) * 5;
  for (let i = 1; i <= 50; i++) {
    const z = z0 + i * 5;
    const a = project(cam.x - half, 0, z, cam, view);
    const b = project(cam.x + half, 0, z, cam, view);
    if (a && b) {
      ctx.beginPath();
      ctx.moveTo(a.x, a.y);
      ctx.lineTo(b.x, b.y);
      ctx.stroke();
    }
  }
  for (let k = -8; k <= 8; k++) {
    const x = Math.round(cam.x / 10) * 10 + k * 10;
    const a = project(x, 0, near, cam, view);
    const b = project(x, 0, far, cam, view);
    if (a && b) {
      ctx.beginPath();
      ctx.moveTo(a.x, a.y);
      ctx.lineTo(b.x, b.y);
      ctx.stroke();
    }
  }
}

function drawWaypoint(ctx: Ctx2D, w: Waypoint, cam: Camera, view: Viewport, highlight: boolean): void {
  for (const bar of frameBoxes(w)) {
    const face = boxFace(bar, cam, view);
    if (face) polygon(ctx, face, highlight ? NEXT_FRAME_COLOR : FRAME_COLOR, 0.95);
  }
}

export interface SceneOptions {
  nextWaypointIndex?: number;
}

export function renderScene(
  ctx: Ctx2D,
  view: Viewport,
  cam: Camera,
  course: Course | null,
  opts: SceneOptions = {},
): void {
  drawSky(ctx, view);
  drawGround(ctx, cam, view);
  if (!course) return;
  // Far to near so closer frames paint over farther ones.
  const ahead = course.waypoints
    .filter((w) => w.planeZ > cam.z - 1)
    .sort((a, b) => b.planeZ - a.planeZ);
  for (const w of ahead) {
    drawWaypoint(ctx, w, cam, view, w.index === opts.nextWaypointIndex);
  }
  const dest = boxFace(course.destination, cam, view);
  if (dest) polygon(ctx, dest, DESTINATION_COLOR, 0.55);
}
