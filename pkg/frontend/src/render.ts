// Top-down scene rendering plus the DOM hud. The canvas context is a
// structural type so tests can pass a recorder; jsdom has no 2d context.

import type { SceneObj } from './protocol.js';
import type { ViewModel } from './view.js';

export interface Camera {
  pxPerM: number;
  cx: number;
  cz: number;
  w: number;
  h: number;
}

// 1.6 m of table width fills the canvas
export function cameraFor(w: number, h: number, cx: number, cz: number): Camera {
  return { pxPerM: w / 1.6, cx, cz, w, h };
}

export function toPx(cam: Camera, x: number, z: number): [number, number] {
  return [cam.w / 2 + (x - cam.cx) * cam.pxPerM, cam.h / 2 - (z - cam.cz) * cam.pxPerM];
}

export function toWorld(cam: Camera, px: number, py: number): [number, number] {
  return [cam.cx + (px - cam.w / 2) / cam.pxPerM, cam.cz - (py - cam.h / 2) / cam.pxPerM];
}

export interface Ctx2d {
  fillStyle: string;
  strokeStyle: string;
  lineWidth: number;
  font: string;
  textAlign: string;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  fill(): void;
  stroke(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  fillText(text: string, x: number, y: number): void;
}

export const DEFAULT_SCENE: SceneObj = {
  table_height: 0.75,
  table_center: [0.0, 2.0],
  table_extent: [0.6, 0.4],
  ball_radius: 0.04,
  ball_home: [-0.3, 0.79, 2.0],
  target_center: [0.25, 2.0],
  grab_radius: 0.12,
};

export function renderScene(ctx: Ctx2d, cam: Camera, scene: SceneObj, view: ViewModel): void {
  ctx.clearRect(0, 0, cam.w, cam.h);
  ctx.fillStyle = '#10141c';
  ctx.fillRect(0, 0, cam.w, cam.h);

  const [ex, ez] = scene.table_extent;
  const [tx, ty] = toPx(cam, scene.table_center[0] - ex, scene.table_center[1] + ez);
  ctx.fillStyle = '#3a2f23';
  ctx.fillRect(tx, ty, 2 * ex * cam.pxPerM, 2 * ez * cam.pxPerM);
  ctx.strokeStyle = '#6b5537';
  ctx.lineWidth = 2;
  ctx.strokeRect(tx, ty, 2 * ex * cam.pxPerM, 2 * ez * cam.pxPerM);

  const st = view.state;
  if (!st) return;

  const [gx, gy] = toPx(cam, st.target[0], st.target[1]);
  ctx.beginPath();
  ctx.arc(gx, gy, st.radius * cam.pxPerM, 0, 2 * Math.PI);
  ctx.fillStyle = view.banner?.kind === 'success' ? '#2f8f46' : '#1f5c30';
  ctx.fill();
  ctx.strokeStyle = '#7ad98f';
  ctx.lineWidth = 2;
  ctx.stroke();

  const arm = ['shoulder_right', 'elbow_right', 'hand_right']
    .map((j) => st.avatar[j])
    .filter((p): p is [number, number, number] => p !== undefined);
  if (arm.length === 3) {
    ctx.beginPath();
    const [sx, sy] = toPx(cam, arm[0][0], arm[0][2]);
    ctx.moveTo(sx, sy);
    for (const p of arm.slice(1)) {
      const [jx, jy] = toPx(cam, p[0], p[2]);
      ctx.lineTo(jx, jy);
    }
    ctx.strokeStyle = '#9fb4d8';
    ctx.lineWidth = 6;
    ctx.stroke();
  }

  const [bx, by] = toPx(cam, st.ball[0], st.ball[2]);
  ctx.beginPath();
  ctx.arc(bx, by, scene.ball_radius * cam.pxPerM, 0, 2 * Math.PI);
  ctx.fillStyle = st.phase === 'holding' ? '#ffb347' : '#e08a2e';
  ctx.fill();

  ctx.fillStyle = '#f0f0f0';
  ctx.font = '28px monospace';
  ctx.textAlign = 'right';
  ctx.fillText(String(st.score), cam.w - 16, 36);
}

export interface Hud {
  canvas: HTMLElement;
  score: HTMLElement;
  banner: HTMLElement;
  events: HTMLElement;
  status: HTMLElement;
  errorBox: HTMLElement;
  sessionList: HTMLElement;
  loadedBox: HTMLElement;
  menu: HTMLElement;
}

const CUE_TEXT = { success: 'Success', try_again: 'Try Again' } as const;

export function updateHud(hud: Hud, view: ViewModel): void {
  hud.status.textContent = view.conn;
  hud.score.textContent = String(view.state?.score ?? 0);
  hud.canvas.dataset.radius = view.state ? String(view.state.radius) : '';

  if (view.banner) {
    hud.banner.textContent = CUE_TEXT[view.banner.kind];
    hud.banner.className = `banner ${view.banner.kind}`;
    hud.banner.hidden = false;
  } else {
    hud.banner.hidden = true;
    hud.banner.textContent = '';
  }

  hud.events.textContent = view.recentEvents.join(' ');
  hud.errorBox.textContent = view.lastError ?? '';
  hud.menu.hidden = view.playing;

  const rows = view.sessions
    .map(
      (s) =>
        `<li data-id="${s.session_id}">` +
        `<span class="sid">${s.session_id}</span>` +
        ` drops=${s.n_drops}` +
        ` <button data-action="load" data-id="${s.session_id}">load</button>` +
        ` <button data-action="delete" data-id="${s.session_id}">delete</button>` +
        `</li>`,
    )
    .join('');
  if (hud.sessionList.innerHTML !== rows) hud.sessionList.innerHTML = rows;

  hud.loadedBox.textContent = view.loaded
    ? `loaded ${view.loaded.session_id} drops=${view.loaded.metrics.n_drops}`
    : '';
}
