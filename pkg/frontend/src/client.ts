// WebSocket client for the hub channel: event fanout, command round-trips,
// and resubscription from the last seen seq after a reconnect.

import type { CommandMessage, HubEvent, ServerMessage, Snapshot } from "./protocol.js";

export interface HubSocketHandlers {
  onSnapshot: (snapshot: Snapshot) => void;
  onEvent: (event: HubEvent) => void;
  onAck: (message: Extract<ServerMessage, { type: "ack" }>) => void;
  onError: (message: Extract<ServerMessage, { type: "error" }>) => void;
  onDisconnect?: () => void;
  lastSeq: () => number;
}

export class HubSocket {
  private ws: WebSocket | null = null;
  private reconnectDelayMs = 1000;

  constructor(private url: string, private handlers: HubSocketHandlers) {}

  connect(): void {
    const ws = new WebSocket(this.url);
    this.ws = ws;
    ws.addEventListener("message", (evt) => {
      let doc: ServerMessage;
      try {
        doc = JSON.parse(evt.data as string) as ServerMessage;
      } catch {
        console.error("[hub] unparseable message", evt.data);
        return;
      }
      this.dispatch(doc);
    });
    ws.addEventListener("open", () => {
      const since = this.handlers.lastSeq() + 1;
      if (since > 0) {
        ws.send(JSON.stringify({ type: "subscribe", since_seq: since }));
      }
    });
    ws.addEventListener("close", () => {
      this.handlers.onDisconnect?.();
      setTimeout(() => this.connect(), this.reconnectDelayMs);
    });
  }

  private dispatch(doc: ServerMessage): void {
    switch (doc.type) {
      case "hello":
        this.handlers.onSnapshot(doc.snapshot);
        break;
      case "event":
        this.handlers.onEvent(doc.event);
        break;
      case "ack":
        this.handlers.onAck(doc);
        break;
      case "error":
        this.handlers.onError(doc);
        break;
    }
  }

  send(command: CommandMessage): void {
    if (this.ws === null || this.ws.readyState !== WebSocket.OPEN) {
      console.error("[hub] not connected; dropping", command.command);
      return;
    }
    this.ws.send(JSON.stringify(command));
  }
}
