// Pure view model: everything on screen derives from server messages plus
// the local input echo. No game outcome is ever computed client-side.

import type { CueKind, ServerMsg, SessionRow, StateMsg } from './protocol.js';

export type Connection = 'idle' | 'connecting' | 'connected' | 'lost';

export interface Banner {
  kind: CueKind;
  framesLeft: number;
}

export interface LoadedSession {
  session_id: string;
  created_at_us: number;
  metrics: { n_drops: number; hit_rate: number | null };
}

export interface ViewModel {
  conn: Connection;
  playing: boolean;
  state: StateMsg | null;
  banner: Banner | null;
  recentEvents: string[];
  sessions: SessionRow[];
  loaded: LoadedSession | null;
  lastError: string | null;
}

// banner lifetime matches the engine's feedback window at 30 fps
export const BANNER_FRAMES = 30;
const EVENT_LOG_MAX = 10;

export function initialView(): ViewModel {
  return {
    conn: 'idle',
    playing: false,
    state: null,
    banner: null,
    recentEvents: [],
    sessions: [],
    loaded: null,
    lastError: null,
  };
}

export function applyConnection(view: ViewModel, conn: Connection): ViewModel {
  if (conn === 'connected') return { ...view, conn, lastError: null };
  // a dropped socket ends the session server-side too
  if (conn === 'lost' || conn === 'idle') return { ...view, conn, playing: false, state: null };
  return { ...view, conn };
}

function tickBanner(banner: Banner | null): Banner | null {
  if (banner === null) return null;
  const left = banner.framesLeft - 1;
  return left > 0 ? { kind: banner.kind, framesLeft: left } : null;
}

export function applyServer(view: ViewModel, msg: ServerMsg): ViewModel {
  switch (msg.type) {
    case 'state':
      return { ...view, state: msg, banner: tickBanner(view.banner) };
    case 'event': {
      const recentEvents = [...view.recentEvents, msg.event].slice(-EVENT_LOG_MAX);
      if (msg.event === 'success' || msg.event === 'try_again') {
        return { ...view, recentEvents, banner: { kind: msg.event, framesLeft: BANNER_FRAMES } };
      }
      return { ...view, recentEvents };
    }
    case 'cmd_result': {
      if (!msg.ok) return { ...view, lastError: msg.error ?? `${msg.cmd} failed` };
      switch (msg.cmd) {
        case 'start':
          return { ...view, playing: true, recentEvents: [], banner: null, lastError: null };
        case 'stop':
          return { ...view, playing: false, state: null, banner: null };
        case 'list':
          return { ...view, sessions: msg.payload?.sessions ?? [] };
        case 'delete':
          return {
            ...view,
            sessions: view.sessions.filter((s) => s.session_id !== msg.payload?.session_id),
          };
        case 'load':
          return { ...view, loaded: msg.payload ?? null };
        default:
          return view;
      }
    }
    case 'error':
      return { ...view, lastError: `${msg.code}: ${msg.message}` };
  }
}
