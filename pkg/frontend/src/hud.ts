/** HUD overlay: frame time, voxel count, per-frame direction histogram. */

import type { FramePlan } from "./renderer.js";
import type { Scene } from "./vxln.js";

const AXIS_LABELS = ["+X", "-X", "+Y", "-Y", "+Z", "-Z"];

export function directionLabel(mode: Scene["orderMode"], candIdx: number): string {
  if (mode === "axis") return AXIS_LABELS[candIdx];
  if (mode === "random") return `dir${candIdx}`;
  return "base";
}

export interface HudStats {
  frameMs: number;
  voxelCount: number;
  /** selected-direction label -> number of voxels bound to it this frame */
  histogram: Record<string, number>;
}

export function hudStats(scene: Scene, plan: FramePlan, frameMs: number): HudStats {
  const histogram: Record<string, number> = {};
  for (const candIdx of plan.bindings) {
    const label =
      candIdx === null ? "base" : directionLabel(scene.orderMode, candIdx);
    histogram[label] = (histogram[label] ?? 0) + 1;
  }
  return { frameMs, voxelCount: scene.voxels.length, histogram };
}

export function formatHud(stats: HudStats): string {
  const hist = Object.entries(stats.histogram)
    .sort(([a], [b]) => (a < b ? -1 : 1))
    .map(([label, n]) => `${label}:${n}`)
    .join("  ");
  return (
    `frame ${stats.frameMs.toFixed(1)} ms | ` +
    `${stats.voxelCount} voxels | ${hist || "empty"}`
  );
}
