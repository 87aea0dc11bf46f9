/**
 * Head-orientation stand-ins. The default is degree-calibrated pointer
 * dragging (no special hardware): vertical drag maps to pitch, horizontal
 * to roll, with the full-scale drag distance equal to the tilt limit.
 * Device orientation passes the real device pitch/roll through where the
 * browser provides it; a gamepad's left stick works too. Unavailable
 * sources fall back to pointer drag.
 */

export interface HeadPose {
  pitchDeg: number;
  rollDeg: number;
  yawDeg: number;
}

export type PoseListener = (pose: HeadPose) => void;

export interface InputSource {
  readonly kind: string;
  start(listener: PoseListener): void;
  stop(): void;
  /** Latest pose, for the on-screen degree readout. */
  current(): HeadPose;
}

const ZERO: HeadPose = { pitchDeg: 0, rollDeg: 0, yawDeg: 0 };

export class PointerDragSource implements InputSource {
  readonly kind = "pointer-drag";
  private pose: HeadPose = { ...ZERO };
  private listener: PoseListener | null = null;
  private dragging = false;
  private originX = 0;
  private originY = 0;
  private startPitch = 0;
  private startRoll = 0;

  /**
   * fullScalePx of drag equals fullScaleDeg of tilt command; dragging past
   * it keeps commanding more (the mapping clamps server-side).
   */
  constructor(
    private element: HTMLElement,
    private fullScalePx = 150,
    private fullScaleDeg = 10,
  ) {}

  private onDown = (ev: PointerEvent) => {
    this.dragging = true;
    this.originX = ev.clientX;
    this.originY = ev.clientY;
    this.startPitch = this.pose.pitchDeg;
    this.startRoll = this.pose.rollDeg;
    this.element.setPointerCapture(ev.pointerId);
  };

  private onMove = (ev: PointerEvent) => {
    if (!this.dragging) return;
    const scale = this.fullScaleDeg / this.fullScalePx;
    // Drag up = pitch forward (positive), drag right = roll right.
    this.pose = {
      pitchDeg: this.startPitch + (this.originY - ev.clientY) * scale,
      rollDeg: this.startRoll + (ev.clientX - this.originX) * scale,
      yawDeg: 0,
    };
    this.listener?.(this.pose);
  };

  private onUp = () => {
    this.dragging = false;
  };

  start(listener: PoseListener): void {
    this.listener = listener;
    this.element.addEventListener("pointerdown", this.onDown);
    this.element.addEventListener("pointermove", this.onMove);
    this.element.addEventListener("pointerup", this.onUp);
  }

  stop(): void {
    this.element.removeEventListener("pointerdown", this.onDown);
    this.element.removeEventListener("pointermove", this.onMove);
    this.element.removeEventListener("pointerup", this.onUp);
    this.listener = null;
  }

  current(): HeadPose {
    return this.pose;
  }

  /** Recenters the neutral pose (double-click handler). */
  recenter(): void {
    this.pose = { ...ZERO };
    this.listener?.(this.pose);
  }
}

export class DeviceOrientationSource implements InputSource {
  readonly kind = "device-orientation";
  private pose: HeadPose = { ...ZERO };
  private listener: PoseListener | null = null;

  static available(): boolean {
    return typeof window !== "undefined" && "DeviceOrientationEvent" in window;
  }

  private onOrientation = (ev: DeviceOrientationEvent) => {
    if (ev.beta === null || ev.gamma === null) return;
    this.pose = { pitchDeg: ev.beta, rollDeg: ev.gamma, yawDeg: ev.alpha ?? 0 };
    this.listener?.(this.pose);
  };

  start(listener: PoseListener): void {
    this.listener = listener;
    window.addEventListener("deviceorientation", this.onOrientation);
  }

  stop(): void {
    window.removeEventListener("deviceorientation", this.onOrientation);
    this.listener = null;
  }

  current(): HeadPose {
    return this.pose;
  }
}

export class GamepadSource implements InputSource {
  readonly kind = "gamepad";
  private pose: HeadPose = { ...ZERO };
  private listener: PoseListener | null = null;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(private fullScaleDeg = 10) {}

  static available(): boolean {
    return typeof navigator !== "undefined" && "getGamepads" in navigator;
  }

  private poll = () => {
    const pads = navigator.getGamepads?.() ?? [];
    const pad = pads.find((p) => p !== null);
    if (!pad) return;
    this.pose = {
      pitchDeg: -(pad.axes[1] ?? 0) * this.fullScaleDeg,
      rollDeg: (pad.axes[0] ?? 0) * this.fullScaleDeg,
      yawDeg: 0,
    };
    this.listener?.(this.pose);
  };

  start(listener: PoseListener): void {
    this.listener = listener;
    this.timer = setInterval(this.poll, 1000 / 60);
  }

  stop(): void {
    if (this.timer !== null) clearInterval(this.timer);
    this.timer = null;
    this.listener = null;
  }

  current(): HeadPose {
    return this.pose;
  }
}

export type SourceKind = "pointer-drag" | "device-orientation" | "gamepad";

export function pickSource(preferred: SourceKind, dragElement: HTMLElement): InputSource {
  if (preferred === "device-orientation" && DeviceOrientationSource.available()) {
    return new DeviceOrientationSource();
  }
  if (preferred === "gamepad" && GamepadSource.available()) {
    return new GamepadSource();
  }
  return new PointerDragSource(dragElement);
}
