// Shared test helpers: a controllable fake socket and canonical log
// record lines shaped exactly like the server's (sorted keys, compact
// separators).

import { ConsoleSession, SocketLike } from "../src/session.js";

export class FakeSocket implements SocketLike {
  sent: string[] = [];
  closed = false;
  onopen: any = null;
  onmessage: any = null;
  onclose: any = null;
  onerror: any = null;

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
    this.onclose?.();
  }

  open(): void {
    this.onopen?.();
  }

  receive(raw: string): void {
    this.onmessage?.({ data: raw });
  }

  dropConnection(): void {
    this.onclose?.();
  }
}

export function canonical(obj: Record<string, unknown>): string {
  const sorted = (value: unknown): unknown => {
    if (Array.isArray(value)) {
      return value.map(sorted);
    }
    if (typeof value === "object" && value !== null) {
      const out: Record<string, unknown> = {};
      for (const key of Object.keys(value).sort()) {
        out[key] = sorted((value as Record<string, unknown>)[key]);
      }
      return out;
    }
    return value;
  };
  return JSON.stringify(sorted(obj));
}

let autoPosition = 0;

export function resetPositions(): void {
  autoPosition = 0;
}

export function recordLine(
  type: string,
  payload: Record<string, unknown>,
  options: { i?: number; t?: number; sender?: string; seq?: number } = {},
): string {
  const i = options.i ?? autoPosition++;
  return canonical({
    i,
    t: options.t ?? i,
    type,
    sender: options.sender ?? "server",
    seq: options.seq ?? 0,
    payload,
  });
}

export function helloAck(descriptor: Record<string, unknown>): string {
  return JSON.stringify({
    type: "hello",
    t: 0,
    seq: 1,
    payload: { role: "server", descriptor },
  });
}

export function connectedSession(
  descriptor: Record<string, unknown> = { session_id: "t", blinded: false, parts: 1 },
): { session: ConsoleSession; socket: FakeSocket } {
  const socket = new FakeSocket();
  const session = new ConsoleSession("ws://test", () => socket, {
    setTimeoutFn: (fn) => fn(),
    reconnectDelayMs: 0,
  });
  session.connect();
  socket.open();
  socket.receive(helloAck(descriptor));
  return { session, socket };
}
