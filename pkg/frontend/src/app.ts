// Wires socket, view model, rendering, input, and the session menu
// together. Everything shown is a function of server messages; the app
// layer only routes them.

import { playCue } from './audio.js';
import { attachInput, startPointerLoop, type InputState } from './input.js';
import { Conn, type SocketFactory } from './net.js';
import type { SceneObj, ServerMsg } from './protocol.js';
import {
  cameraFor,
  renderScene,
  updateHud,
  DEFAULT_SCENE,
  type Camera,
  type Ctx2d,
  type Hud,
} from './render.js';
import { applyConnection, applyServer, initialView, type ViewModel } from './view.js';

export interface App {
  conn: Conn;
  view(): ViewModel;
  input: InputState;
  render(): void;
  dispose(): void;
}

function grab(doc: Document, id: string): HTMLElement {
  const el = doc.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

export function createApp(doc: Document, win: Window, url: string, factory: SocketFactory): App {
  const canvas = grab(doc, 'game-canvas') as HTMLCanvasElement;
  const hud: Hud = {
    canvas,
    score: grab(doc, 'score'),
    banner: grab(doc, 'banner'),
    events: grab(doc, 'event-log'),
    status: grab(doc, 'status'),
    errorBox: grab(doc, 'error-box'),
    sessionList: grab(doc, 'session-list'),
    loadedBox: grab(doc, 'loaded-box'),
    menu: grab(doc, 'menu'),
  };

  let ctx: Ctx2d | null = null;
  // jsdom has no 2d context and logs loudly when asked for one
  if (!/jsdom/i.test(win.navigator?.userAgent ?? '')) {
    try {
      ctx = canvas.getContext('2d') as Ctx2d | null;
    } catch {
      ctx = null;
    }
  }

  let view = initialView();
  let scene: SceneObj = DEFAULT_SCENE;
  let cam: Camera = cameraFor(canvas.width, canvas.height, ...scene.table_center);

  function render(): void {
    if (ctx) renderScene(ctx, cam, scene, view);
    updateHud(hud, view);
  }

  const conn = new Conn(url, factory, {
    onMsg(msg: ServerMsg) {
      view = applyServer(view, msg);
      if (msg.type === 'event' && (msg.event === 'success' || msg.event === 'try_again')) {
        playCue(msg.event);
      }
      if (msg.type === 'cmd_result' && msg.ok) {
        if (msg.cmd === 'start' && msg.payload?.scene) {
          scene = msg.payload.scene as SceneObj;
          cam = cameraFor(canvas.width, canvas.height, ...scene.table_center);
        }
        // keep the menu in sync with the store after writes
        if (msg.cmd === 'stop' || msg.cmd === 'delete') conn.send({ type: 'session_cmd', cmd: 'list' });
      }
      render();
    },
    onStatus(status) {
      view = applyConnection(view, status);
      if (status === 'connected') conn.send({ type: 'session_cmd', cmd: 'list' });
      render();
    },
  });

  const input = attachInput(canvas, win, () => ({ cam, scene }));
  const stopLoop = startPointerLoop(() => {
    if (view.playing && conn.isOpen()) {
      conn.send({ type: 'pointer_input', x: input.x, z: input.z, grab: input.grab });
    }
  });

  grab(doc, 'btn-start').addEventListener('click', () => {
    conn.send({ type: 'session_cmd', cmd: 'start' });
  });
  grab(doc, 'btn-stop').addEventListener('click', () => {
    conn.send({ type: 'session_cmd', cmd: 'stop' });
  });
  grab(doc, 'btn-refresh').addEventListener('click', () => {
    conn.send({ type: 'session_cmd', cmd: 'list' });
  });
  grab(doc, 'btn-connect').addEventListener('click', () => {
    conn.connect();
  });
  hud.sessionList.addEventListener('click', (ev) => {
    const el = ev.target as HTMLElement;
    const action = el.dataset?.action;
    const id = el.dataset?.id;
    if (!id) return;
    if (action === 'load') conn.send({ type: 'session_cmd', cmd: 'load', id });
    if (action === 'delete') conn.send({ type: 'session_cmd', cmd: 'delete', id });
  });

  render();
  return {
    conn,
    view: () => view,
    input,
    render,
    dispose() {
      stopLoop();
      conn.close();
    },
  };
}
