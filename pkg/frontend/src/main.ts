/** Browser entry point: wires scene loading, orbit controls, the render
 * loop, and the HUD. Scene swaps are atomic from the loop's perspective
 * (a single reference replaced after the file fully parses). */

import {
  clampState,
  defaultState,
  eyeFromOrbit,
  lookAt,
  perspective,
  type ViewerState,
} from "./camera.js";
import { formatHud, hudStats } from "./hud.js";
import type { Vec3 } from "./ordering.js";
import { GlRenderer, planFrame } from "./renderer.js";
import { parseScene, type Scene } from "./vxln.js";

interface Loaded {
  scene: Scene;
  renderer: GlRenderer;
  state: ViewerState;
}

function sceneFraming(scene: Scene): { center: Vec3; extent: number } {
  if (scene.voxels.length === 0) {
    return { center: [0, 0, 0], extent: 1 };
  }
  const lo = [Infinity, Infinity, Infinity];
  const hi = [-Infinity, -Infinity, -Infinity];
  for (const v of scene.voxels) {
    for (let a = 0; a < 3; a++) {
      lo[a] = Math.min(lo[a], scene.bMin[a] + v.coord[a] * scene.voxelSize);
      hi[a] = Math.max(hi[a], scene.bMin[a] + (v.coord[a] + 1) * scene.voxelSize);
    }
  }
  return {
    center: [(lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2, (lo[2] + hi[2]) / 2],
    extent: Math.max(hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]),
  };
}

function start(): void {
  const canvas = document.getElementById("view") as HTMLCanvasElement;
  const hudEl = document.getElementById("hud")!;
  const statusEl = document.getElementById("status")!;
  const gl = canvas.getContext("webgl");
  if (!gl) {
    statusEl.textContent = "WebGL is not available in this browser.";
    return;
  }

  let loaded: Loaded | null = null;

  async function loadBytes(buf: ArrayBuffer, label: string): Promise<void> {
    try {
      const scene = parseScene(buf);
      const { center, extent } = sceneFraming(scene);
      const state = defaultState(center, extent);
      state.opacity = Number(opacityEl.value);
      loaded = { scene, renderer: new GlRenderer(gl!, scene), state };
      statusEl.textContent =
        `${label}: ${scene.voxels.length} voxels, ${scene.orderMode} orders` +
        (scene.orderMode === "random" ? ` (k=${scene.kDirs})` : "");
    } catch (err) {
      statusEl.textContent = `failed to load ${label}: ${err}`;
    }
  }

  const opacityEl = document.getElementById("opacity") as HTMLInputElement;
  const toggleEl = document.getElementById("mode") as HTMLSelectElement;
  const boxesEl = document.getElementById("boxes") as HTMLInputElement;
  const fileEl = document.getElementById("file") as HTMLInputElement;

  fileEl.addEventListener("change", async () => {
    const f = fileEl.files?.[0];
    if (f) await loadBytes(await f.arrayBuffer(), f.name);
  });

  fetch("fixtures/axis_scene.vxln")
    .then(async (r) => {
      if (r.ok) await loadBytes(await r.arrayBuffer(), "axis_scene.vxln");
      else statusEl.textContent = "pick a .vxln file to begin";
    })
    .catch(() => (statusEl.textContent = "pick a .vxln file to begin"));

  let dragging = false;
  let lastX = 0;
  let lastY = 0;
  canvas.addEventListener("mousedown", (e) => {
    dragging = true;
    lastX = e.clientX;
    lastY = e.clientY;
  });
  window.addEventListener("mouseup", () => (dragging = false));
  window.addEventListener("mousemove", (e) => {
    if (!dragging || !loaded) return;
    loaded.state.azimuth += (e.clientX - lastX) * 0.008;
    loaded.state.elevation += (e.clientY - lastY) * 0.008;
    clampState(loaded.state);
    lastX = e.clientX;
    lastY = e.clientY;
  });
  canvas.addEventListener("wheel", (e) => {
    if (!loaded) return;
    e.preventDefault();
    loaded.state.radius *= Math.exp(e.deltaY * 0.001);
    clampState(loaded.state);
  });

  function frame(): void {
    requestAnimationFrame(frame);
    const g = gl!;
    canvas.width = canvas.clientWidth;
    canvas.height = canvas.clientHeight;
    g.viewport(0, 0, canvas.width, canvas.height);
    g.clearColor(0, 0, 0, 1);
    g.clear(g.COLOR_BUFFER_BIT);
    if (!loaded) return;

    const { scene, renderer, state } = loaded;
    state.opacity = Number(opacityEl.value);
    state.orderToggle = toggleEl.value === "dataset" ? "dataset" : "stored";
    state.showVoxelBoxes = boxesEl.checked;

    const t0 = performance.now();
    const eye = eyeFromOrbit(state);
    const plan = planFrame(scene, eye, state.orderToggle);
    renderer.draw(
      plan,
      lookAt(eye, state.target),
      perspective(Math.PI / 4, canvas.width / Math.max(canvas.height, 1),
        0.1 * state.radius, 10 * state.radius),
      state.opacity,
      state.showVoxelBoxes,
    );
    hudEl.textContent = formatHud(
      hudStats(scene, plan, performance.now() - t0),
    );
  }
  frame();
}

start();
