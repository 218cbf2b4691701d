// Socket wrapper with an injectable transport so tests can fake the server.

import { encodeClientMsg, parseServerMsg, type ClientMsg, type ServerMsg } from './protocol.js';

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onOpen(cb: () => void): void;
  onText(cb: (text: string) => void): void;
  onClose(cb: () => void): void;
}

export type SocketFactory = (url: string) => SocketLike;

export function wrapWebSocket(ws: WebSocket): SocketLike {
  return {
    send: (data) => ws.send(data),
    close: () => ws.close(),
    onOpen: (cb) => (ws.onopen = cb),
    onText: (cb) => (ws.onmessage = (ev) => cb(String(ev.data))),
    onClose: (cb) => {
      ws.onclose = cb;
      ws.onerror = cb as () => void;
    },
  };
}

export interface ConnHandlers {
  onMsg(msg: ServerMsg): void;
  onStatus(status: 'connecting' | 'connected' | 'lost'): void;
}

export class Conn {
  private socket: SocketLike | null = null;
  private open = false;

  constructor(
    private url: string,
    private factory: SocketFactory,
    private handlers: ConnHandlers,
  ) {}

  connect(): void {
    if (this.socket) this.socket.close();
    this.open = false;
    this.handlers.onStatus('connecting');
    const s = this.factory(this.url);
    this.socket = s;
    s.onOpen(() => {
      this.open = true;
      this.handlers.onStatus('connected');
    });
    s.onText((text) => {
      const msg = parseServerMsg(text);
      if (msg) this.handlers.onMsg(msg);
    });
    s.onClose(() => {
      if (this.socket !== s) return;
      this.open = false;
      this.socket = null;
      this.handlers.onStatus('lost');
    });
  }

  isOpen(): boolean {
    return this.open;
  }

  // false when there is no open socket; callers just drop the message
  send(msg: ClientMsg): boolean {
    if (!this.socket || !this.open) return false;
    this.socket.send(encodeClientMsg(msg));
    return true;
  }

  close(): void {
    this.socket?.close();
    this.socket = null;
    this.open = false;
  }
}
