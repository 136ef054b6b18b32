// Calibration wizard: a target dot traverses the screen-edge rectangle
// exactly once per run (clockwise from the top-left corner) while the
// sensor streams pose samples to the server; completing the traversal
// sends calibration_done and the server answers with the computed
// angular ranges. Aborting mid-run changes nothing server-side.

import { ConsoleSession } from "./session.js";

export type WizardPhase = "idle" | "running" | "done" | "refused" | "aborted";

export interface TargetPosition {
  x: number;
  y: number;
}

export class CalibrationWizard {
  phase: WizardPhase = "idle";
  progress = 0; // 0..1, fraction of the perimeter covered
  durationMs: number;
  viewport: { width: number; height: number };

  private session: ConsoleSession;
  private startedAtMs: number | null = null;

  constructor(
    session: ConsoleSession,
    options: { durationMs?: number; viewport?: { width: number; height: number } } = {},
  ) {
    this.session = session;
    this.durationMs = options.durationMs ?? 20_000;
    this.viewport = options.viewport ?? { width: 1280, height: 720 };
  }

  /** Refuses to start without a connected sensor. */
  start(nowMs: number): boolean {
    if (!this.session.sensorConnected()) {
      this.phase = "refused";
      return false;
    }
    this.phase = "running";
    this.progress = 0;
    this.startedAtMs = nowMs;
    this.session.sendCalibrationStart();
    return true;
  }

  /** Advance the animation; sends calibration_done at full traversal. */
  tick(nowMs: number): void {
    if (this.phase !== "running" || this.startedAtMs === null) {
      return;
    }
    this.progress = Math.min(1, (nowMs - this.startedAtMs) / this.durationMs);
    if (this.progress >= 1) {
      this.phase = "done";
      this.session.sendCalibrationDone();
    }
  }

  /** Stop mid-run without completing; no profile change results. */
  abort(): void {
    if (this.phase === "running") {
      this.phase = "aborted";
      this.startedAtMs = null;
    }
  }

  /** Target position along the rectangle perimeter at the current progress. */
  targetPosition(): TargetPosition {
    const { width: w, height: h } = this.viewport;
    const perimeter = 2 * (w + h);
    let d = this.progress * perimeter;
    if (d <= w) {
      return { x: d, y: 0 }; // top edge, left to right
    }
    d -= w;
    if (d <= h) {
      return { x: w, y: d }; // right edge, down
    }
    d -= h;
    if (d <= w) {
      return { x: w - d, y: h }; // bottom edge, right to left
    }
    d -= w;
    return { x: 0, y: h - d }; // left edge, up
  }
}
