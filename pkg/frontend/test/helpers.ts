import { readFileSync } from 'node:fs';
import path from 'node:path';
import { fileURLToPath } from 'node:url';
import type { StateMsg } from '../src/protocol.js';
import type { SocketLike } from '../src/net.js';

const here = path.dirname(fileURLToPath(import.meta.url));

// mount the real page markup (minus the script tag) into jsdom
export function mountDom(): void {
  const html = readFileSync(path.join(here, '../static/index.html'), 'utf8');
  const body = html.match(/<body>([\s\S]*)<\/body>/)![1];
  document.body.innerHTML = body.replace(/<script[\s\S]*?<\/script>/, '');
}

export function stateMsg(partial: Partial<StateMsg> = {}): StateMsg {
  return {
    type: 'state',
    phase: 'awaiting_grab',
    feedback: null,
    ball: [-0.3, 0.79, 2.0],
    target: [0.25, 2.0],
    radius: 0.15,
    score: 0,
    frames_seen: 0,
    avatar: {},
    avatar_reached: false,
    ...partial,
  };
}

export class FakeSocket implements SocketLike {
  sent: string[] = [];
  private openCb: () => void = () => {};
  private textCb: (t: string) => void = () => {};
  private closeCb: () => void = () => {};

  send(data: string): void {
    this.sent.push(data);
  }
  close(): void {
    this.closeCb();
  }
  onOpen(cb: () => void): void {
    this.openCb = cb;
  }
  onText(cb: (text: string) => void): void {
    this.textCb = cb;
  }
  onClose(cb: () => void): void {
    this.closeCb = cb;
  }

  serverOpen(): void {
    this.openCb();
  }
  serverSend(obj: unknown): void {
    this.textCb(JSON.stringify(obj));
  }
  sentObjs(): any[] {
    return this.sent.map((s) => JSON.parse(s));
  }
}
