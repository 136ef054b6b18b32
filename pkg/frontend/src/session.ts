// Console session state: one socket, one experimenter, one running session.
//
// Every displayed fact derives from a received frame; the only local
// state the console originates is the annotation-button alternation
// (pressing a disabled button must not send anything) and the
// calibration wizard animation. Received log records are kept verbatim
// so the export can reproduce the server's log file byte for byte.

import {
  decodeFrame,
  encodeMessage,
  LogRecord,
  Message,
  SessionDescriptor,
} from "./protocol.js";

// structural adapter over both the browser WebSocket and the `ws` client
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: any;
  onmessage: any;
  onclose: any;
  onerror: any;
}

export type SocketFactory = (url: string) => SocketLike;

export type ConnectionState = "idle" | "connecting" | "connected" | "reconnecting" | "failed";

export interface AnnotationEntry {
  t: number;
  mark: string;
}

export interface SessionOptions {
  reconnectDelayMs?: number;
  maxReconnects?: number;
  setTimeoutFn?: (fn: () => void, ms: number) => unknown;
}

export class ConsoleSession {
  url: string;
  connection: ConnectionState = "idle";
  descriptor: SessionDescriptor | null = null;
  lastError: string | null = null;

  // verbatim record store keyed by log position
  private rawByPosition = new Map<number, string>();
  records: LogRecord[] = [];
  sentMessages: Message[] = [];

  // live view state, all derived from records
  attentionState: string | null = null;
  attentionSince: number | null = null;
  currentPart: number | null = null;
  partStartedAt: number | null = null;
  partDuration: number | null = null;
  interventionActive = false;
  sessionEnded = false;
  revealed = false;
  partOrder: string[] | null = null;
  calibrationProfile: Record<string, unknown> | null = null;
  rolesSeen = new Set<string>();
  lastSeenT = 0;

  // strict alternation: start enabled only when the last mark was refocus
  annotationOpen = false;
  annotations: AnnotationEntry[] = [];

  onChange: (() => void) | null = null;

  private socket: SocketLike | null = null;
  private factory: SocketFactory;
  private seq = 0;
  private expectTotal: number | null = null;
  private reconnects = 0;
  private closedByUs = false;
  private options: Required<Pick<SessionOptions, "reconnectDelayMs" | "maxReconnects">>;
  private setTimeoutFn: (fn: () => void, ms: number) => unknown;

  constructor(url: string, factory: SocketFactory, options: SessionOptions = {}) {
    this.url = url;
    this.factory = factory;
    this.options = {
      reconnectDelayMs: options.reconnectDelayMs ?? 1000,
      maxReconnects: options.maxReconnects ?? 20,
    };
    this.setTimeoutFn = options.setTimeoutFn ?? ((fn, ms) => setTimeout(fn, ms));
  }

  connect(): void {
    this.closedByUs = false;
    this.connection = this.connection === "idle" ? "connecting" : "reconnecting";
    this.notify();
    let socket: SocketLike;
    try {
      socket = this.factory(this.url);
    } catch (err) {
      this.connection = "failed";
      this.lastError = String(err);
      this.notify();
      return;
    }
    this.socket = socket;
    socket.onopen = () => {
      this.connection = "connected";
      this.reconnects = 0;
      this.sendMessage("hello", { role: "console" }); // re-hello on every (re)open
      this.notify();
    };
    socket.onmessage = (ev: { data: unknown }) => this.handleFrame(String(ev.data));
    socket.onerror = () => {
      this.lastError = "socket error";
    };
    socket.onclose = () => {
      if (this.closedByUs || this.sessionEnded) {
        return;
      }
      this.connection = "reconnecting";
      this.notify();
      if (this.reconnects < this.options.maxReconnects) {
        this.reconnects += 1;
        this.setTimeoutFn(() => this.connect(), this.options.reconnectDelayMs);
      } else {
        this.connection = "failed";
        this.notify();
      }
    };
  }

  close(): void {
    this.closedByUs = true;
    this.socket?.close();
  }

  private notify(): void {
    this.onChange?.();
  }

  private sendMessage(type: string, payload: Record<string, unknown>): void {
    if (this.socket === null) {
      return;
    }
    this.seq += 1;
    const message: Message = { type, t: this.lastSeenT, seq: this.seq, payload };
    this.socket.send(encodeMessage(message));
    this.sentMessages.push(message);
  }

  // -- user actions ---------------------------------------------------

  startEnabled(): boolean {
    return this.connection === "connected" && !this.sessionEnded && !this.annotationOpen;
  }

  refocusEnabled(): boolean {
    return this.connection === "connected" && !this.sessionEnded && this.annotationOpen;
  }

  annotate(mark: "distraction_start" | "refocus"): boolean {
    const enabled = mark === "distraction_start" ? this.startEnabled() : this.refocusEnabled();
    if (!enabled) {
      return false; // disabled-button press sends nothing
    }
    this.annotationOpen = mark === "distraction_start";
    this.sendMessage("annotation", { mark });
    this.notify();
    return true;
  }

  sendCalibrationStart(): void {
    this.sendMessage("calibration_start", {});
  }

  sendCalibrationDone(): void {
    this.sendMessage("calibration_done", {});
  }

  // -- frame handling ----------------------------------------------------

  handleFrame(raw: string): void {
    const frame = decodeFrame(raw);
    if (frame.kind === "message") {
      const message = frame.message;
      if (message.type === "hello") {
        this.descriptor = (message.payload.descriptor ?? null) as SessionDescriptor | null;
      } else if (message.type === "error") {
        this.lastError = String(message.payload.reason ?? "unknown error");
      }
      this.notify();
      return;
    }
    const record = frame.record;
    if (!this.rawByPosition.has(record.i)) {
      this.rawByPosition.set(record.i, raw);
      this.records.push(record);
    }
    this.lastSeenT = Math.max(this.lastSeenT, record.t);
    this.applyRecord(record);
    if (this.expectTotal !== null && this.rawByPosition.size >= this.expectTotal) {
      this.revealed = true;
    }
    this.notify();
  }

  private applyRecord(record: LogRecord): void {
    switch (record.type) {
      case "hello":
        this.rolesSeen.add(String(record.payload.role));
        break;
      case "attention_state":
        this.attentionState = String(record.payload.state);
        this.attentionSince = record.t;
        break;
      case "annotation":
        this.annotations.push({ t: record.t, mark: String(record.payload.mark) });
        break;
      case "part_started":
        this.currentPart = Number(record.payload.part);
        this.partStartedAt = record.t;
        this.partDuration = Number(record.payload.duration);
        break;
      case "activate":
        this.interventionActive = true;
        break;
      case "deactivate":
        this.interventionActive = false;
        break;
      case "calibration_done":
        if (record.payload.profile) {
          this.calibrationProfile = record.payload.profile as Record<string, unknown>;
        }
        break;
      case "session_end":
        this.sessionEnded = true;
        this.interventionActive = false;
        break;
      case "condition_reveal":
        this.partOrder = (record.payload.order ?? []) as string[];
        // withheld records are replayed after the reveal; the log is
        // complete once positions 0..i(reveal) are all present
        this.expectTotal = record.i + 1;
        break;
      case "error":
        this.lastError = String(record.payload.reason ?? "error");
        break;
    }
  }

  // -- export -------------------------------------------------------------

  exportReady(): boolean {
    return this.expectTotal !== null && this.rawByPosition.size >= this.expectTotal;
  }

  /** The server's event log, rebuilt verbatim from received records. */
  exportLog(): string {
    const positions = Array.from(this.rawByPosition.keys()).sort((a, b) => a - b);
    return positions.map((i) => this.rawByPosition.get(i)).join("\n") + "\n";
  }

  sensorConnected(): boolean {
    return this.rolesSeen.has("sensor");
  }

  /** Seconds into the current part, by the latest server timestamp seen. */
  partElapsed(): number | null {
    if (this.partStartedAt === null) {
      return null;
    }
    return Math.max(0, this.lastSeenT - this.partStartedAt);
  }
}
