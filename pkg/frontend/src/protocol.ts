// Wire types for the session server. Field names match the server's JSON
// exactly; parse failures return null so a bad frame never kills the client.

export type Phase = 'awaiting_grab' | 'holding' | 'feedback';
export type CueKind = 'success' | 'try_again';

export interface StateMsg {
  type: 'state';
  phase: Phase;
  feedback: CueKind | null;
  ball: [number, number, number];
  target: [number, number];
  radius: number;
  score: number;
  frames_seen: number;
  avatar: Record<string, [number, number, number]>;
  avatar_reached: boolean;
}

export interface EventMsg {
  type: 'event';
  event: string;
  ts_us: number;
  new_radius?: number;
}

export interface SessionRow {
  session_id: string;
  created_at_us: number;
  n_drops: number;
  hit_rate: number | null;
}

export interface SceneObj {
  table_height: number;
  table_center: [number, number];
  table_extent: [number, number];
  ball_radius: number;
  ball_home: [number, number, number];
  target_center: [number, number];
  grab_radius: number;
}

export interface CmdResultMsg {
  type: 'cmd_result';
  cmd: string;
  ok: boolean;
  payload?: any;
  error?: string;
}

export interface ErrorMsg {
  type: 'error';
  code: string;
  message: string;
}

export type ServerMsg = StateMsg | EventMsg | CmdResultMsg | ErrorMsg;

export interface PointerInputMsg {
  type: 'pointer_input';
  x: number;
  z: number;
  grab: boolean;
}

export interface SessionCmdMsg {
  type: 'session_cmd';
  cmd: 'start' | 'stop' | 'load' | 'delete' | 'list';
  id?: string;
  overrides?: object;
}

export type ClientMsg = PointerInputMsg | SessionCmdMsg;

function isVec(v: unknown, n: number): boolean {
  return Array.isArray(v) && v.length === n && v.every((c) => typeof c === 'number');
}

export function parseServerMsg(text: string): ServerMsg | null {
  let obj: any;
  try {
    obj = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof obj !== 'object' || obj === null) return null;
  switch (obj.type) {
    case 'state':
      if (
        typeof obj.phase !== 'string' ||
        !isVec(obj.ball, 3) ||
        !isVec(obj.target, 2) ||
        typeof obj.radius !== 'number' ||
        typeof obj.score !== 'number'
      )
        return null;
      return obj as StateMsg;
    case 'event':
      if (typeof obj.event !== 'string' || typeof obj.ts_us !== 'number') return null;
      return obj as EventMsg;
    case 'cmd_result':
      if (typeof obj.cmd !== 'string' || typeof obj.ok !== 'boolean') return null;
      return obj as CmdResultMsg;
    case 'error':
      if (typeof obj.code !== 'string' || typeof obj.message !== 'string') return null;
      return obj as ErrorMsg;
    default:
      return null;
  }
}

export function encodeClientMsg(msg: ClientMsg): string {
  return JSON.stringify(msg);
}
