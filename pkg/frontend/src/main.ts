import { createApp } from './app.js';
import { wrapWebSocket } from './net.js';

const proto = location.protocol === 'https:' ? 'wss' : 'ws';
const app = createApp(
  document,
  window,
  `${proto}://${location.host}/ws`,
  (url) => wrapWebSocket(new WebSocket(url)),
);
app.conn.connect();
