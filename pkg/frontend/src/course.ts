/**
 * Course files: the documented plain-text format the service also speaks.
 * Geometry constants mirror the simulation so the rendered world is the
 * world being flown.
 */

export const INNER_WIDTH_M = 2.0;
export const INNER_HEIGHT_M = 2.0;
export const DEPTH_M = 0.1;
export const FRAME_THICKNESS_M = 0.25;
export const DESTINATION_SIZE_M = 4.0;
export const DESTINATION_OFFSET_M = 5.0;

export const COURSE_HEADER = "# quadlag course v1";

export interface Waypoint {
  index: number;
  centerX: number;
  centerY: number;
  planeZ: number;
}

export interface Box {
  minX: number;
  maxX: number;
  minY: number;
  maxY: number;
  minZ: number;
  maxZ: number;
}

export interface Course {
  waypoints: Waypoint[];
  destination: Box;
  seed: number;
  altitude: number;
}

function centered(cx: number, cy: number, cz: number, sx: number, sy: number, sz: number): Box {
  return {
    minX: cx - sx / 2,
    maxX: cx + sx / 2,
    minY: cy - sy / 2,
    maxY: cy + sy / 2,
    minZ: cz - sz / 2,
    maxZ: cz + sz / 2,
  };
}

export function parseCourse(text: string): Course {
  const lines = text
    .split("\n")
    .map((line) => line.trim())
    .filter((line) => line.length > 0);
  if (lines.length === 0 || lines[0] !== COURSE_HEADER) {
    throw new Error(`not a course file (expected leading ${JSON.stringify(COURSE_HEADER)})`);
  }
  let seed = 0;
  let altitude = 6.0;
  let declared: number | null = null;
  const waypoints: Waypoint[] = [];
  for (const line of lines.slice(1)) {
    if (line.startsWith("waypoint ")) {
      const parts = line.split(/\s+/);
      if (parts.length !== 4) throw new Error(`bad waypoint line: ${line}`);
      waypoints.push({
        index: parseInt(parts[1], 10),
        centerX: parseFloat(parts[2]),
        centerY: altitude,
        planeZ: parseFloat(parts[3]),
      });
    } else {
      const eq = line.indexOf("=");
      if (eq < 0) throw new Error(`unrecognized course line: ${line}`);
      const key = line.slice(0, eq).trim();
      const value = line.slice(eq + 1).trim();
      if (key === "seed") seed = parseInt(value, 10);
      else if (key === "altitude_m") altitude = parseFloat(value);
      else if (key === "n_waypoints") declared = parseInt(value, 10);
    }
  }
  if (waypoints.length === 0) throw new Error("course file contains no waypoints");
  if (declared !== null && declared !== waypoints.length) {
    throw new Error(`course file declares ${declared} waypoints but contains ${waypoints.length}`);
  }
  for (const w of waypoints) w.centerY = altitude;
  const last = waypoints[waypoints.length - 1];
  const destination = centered(
    last.centerX,
    altitude,
    last.planeZ + DESTINATION_OFFSET_M,
    DESTINATION_SIZE_M,
    DESTINATION_SIZE_M,
    DESTINATION_SIZE_M,
  );
  return { waypoints, destination, seed, altitude };
}

/**
 * The four frame bars around an opening: top, bottom, left, right. Side
 * bars own the corners; identical tiling to the collision model.
 */
export function frameBoxes(w: Waypoint): Box[] {
  const t = FRAME_THICKNESS_M;
  const halfW = INNER_WIDTH_M / 2;
  const halfH = INNER_HEIGHT_M / 2;
  const z0 = w.planeZ - DEPTH_M / 2;
  const z1 = w.planeZ + DEPTH_M / 2;
  return [
    { minX: w.centerX - halfW, maxX: w.centerX + halfW, minY: w.centerY + halfH, maxY: w.centerY + halfH + t, minZ: z0, maxZ: z1 },
    { minX: w.centerX - halfW, maxX: w.centerX + halfW, minY: w.centerY - halfH - t, maxY: w.centerY - halfH, minZ: z0, maxZ: z1 },
    { minX: w.centerX - halfW - t, maxX: w.centerX - halfW, minY: w.centerY - halfH - t, maxY: w.centerY + halfH + t, minZ: z0, maxZ: z1 },
    { minX: w.centerX + halfW, maxX: w.centerX + halfW + t, minY: w.centerY - halfH - t, maxY: w.centerY + halfH + t, minZ: z0, maxZ: z1 },
  ];
}
