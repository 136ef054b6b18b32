// Wire protocol shared with the control server.
//
// The console SENDS messages: {"type", "t", "seq", "payload"} as JSON,
// one per WebSocket text frame, with a strictly increasing seq.
//
// It RECEIVES two frame shapes:
//  - log records: objects carrying an "i" (their position in the
//    server's session log). These are stored VERBATIM: the export
//    feature reproduces the server's log file from them byte for byte.
//  - direct server messages (hello acknowledgment, error replies),
//    which have no "i".

export type Role = "client" | "sensor" | "console";

export interface Message {
  type: string;
  t: number;
  seq: number;
  payload: Record<string, unknown>;
}

export interface LogRecord {
  i: number;
  t: number;
  type: string;
  sender: string;
  seq: number;
  payload: Record<string, unknown>;
  sender_t?: number;
}

export function encodeMessage(msg: Message): string {
  return JSON.stringify({
    type: msg.type,
    t: msg.t,
    seq: msg.seq,
    payload: msg.payload,
  });
}

export type Frame =
  | { kind: "record"; record: LogRecord; raw: string }
  | { kind: "message"; message: Message; raw: string };

export function decodeFrame(raw: string): Frame {
  const data = JSON.parse(raw);
  if (typeof data !== "object" || data === null) {
    throw new Error("frame is not an object");
  }
  if (data.i !== undefined && data.i !== null) {
    return { kind: "record", record: data as LogRecord, raw };
  }
  return { kind: "message", message: data as Message, raw };
}

export interface SessionDescriptor {
  session_id?: string;
  blinded?: boolean;
  parts?: number;
  part_duration?: number;
  time_scale?: number;
  mode?: string; // absent in blinded sessions
}
