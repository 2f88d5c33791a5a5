// Reconnecting WebSocket wrapper. The server replays its snapshot and
// layout to every new connection, so a reconnect self-heals the UI with no
// extra bookkeeping here.

import { parseServerMessage, type ServerMessage } from "./protocol.js";

export interface SocketHandlers {
  onMessage: (msg: ServerMessage) => void;
  onStatus?: (connected: boolean) => void;
}

export class LightSocket {
  private ws: WebSocket | null = null;
  private closed = false;

  constructor(
    private url: string,
    private handlers: SocketHandlers,
    private retryMs = 1000,
  ) {}

  connect(): void {
    const ws = new WebSocket(this.url);
    this.ws = ws;
    ws.onopen = () => this.handlers.onStatus?.(true);
    ws.onmessage = (e) => {
      try {
        this.handlers.onMessage(parseServerMessage(String(e.data)));
      } catch (err) {
        console.warn("dropping unreadable message:", err);
      }
    };
    ws.onerror = () => ws.close();
    ws.onclose = () => {
      this.handlers.onStatus?.(false);
      if (!this.closed) {
        setTimeout(() => this.connect(), this.retryMs);
      }
    };
  }

  send(data: string): void {
    if (this.ws !== null && this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(data);
    }
  }

  close(): void {
    this.closed = true;
    this.ws?.close();
  }
}
