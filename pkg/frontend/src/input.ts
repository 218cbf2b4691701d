// Pointer to table-plane mapping. Position is clamped to the table so the
// last in-bounds point repeats when the pointer leaves (the server clamps
// again anyway). Grab is a held button or the space key.

import type { SceneObj } from './protocol.js';
import { toWorld, type Camera } from './render.js';

export interface InputState {
  x: number;
  z: number;
  grab: boolean;
}

export function clampToTable(scene: SceneObj, x: number, z: number): [number, number] {
  const [cx, cz] = scene.table_center;
  const [ex, ez] = scene.table_extent;
  return [
    Math.min(Math.max(x, cx - ex), cx + ex),
    Math.min(Math.max(z, cz - ez), cz + ez),
  ];
}

export function attachInput(
  canvas: HTMLElement,
  win: Window,
  geom: () => { cam: Camera; scene: SceneObj },
): InputState {
  const { scene } = geom();
  const state: InputState = { x: scene.table_center[0], z: scene.table_center[1], grab: false };

  canvas.addEventListener('pointermove', (ev) => {
    const { cam, scene } = geom();
    const rect = canvas.getBoundingClientRect();
    const me = ev as MouseEvent;
    const [x, z] = toWorld(cam, me.clientX - rect.left, me.clientY - rect.top);
    [state.x, state.z] = clampToTable(scene, x, z);
  });
  canvas.addEventListener('pointerdown', (ev) => {
    if ((ev as MouseEvent).button === 0) state.grab = true;
  });
  win.addEventListener('pointerup', () => {
    state.grab = false;
  });
  win.addEventListener('keydown', (ev) => {
    if ((ev as KeyboardEvent).code === 'Space') state.grab = true;
  });
  win.addEventListener('keyup', (ev) => {
    if ((ev as KeyboardEvent).code === 'Space') state.grab = false;
  });

  return state;
}

export const POINTER_HZ = 30;

// fixed-cadence outbound loop; the callback decides whether to send
export function startPointerLoop(tick: () => void, hz = POINTER_HZ): () => void {
  const id = setInterval(tick, 1000 / hz);
  return () => clearInterval(id);
}
