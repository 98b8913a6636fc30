// Connection wrapper: hello handshake, envelope dispatch, gap-triggered
// resync, and reconnect with a visible banner. Works with the browser
// WebSocket and (in tests) the `ws` package's compatible constructor.

import { eventEnvelope, hello, resync, type InputEvent, type Role, type ServerEnvelope } from "./protocol.js";
import { Replica, SeqGapError } from "./state.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  addEventListener(type: string, listener: (ev: any) => void): void;
}

export type SocketFactory = (url: string) => SocketLike;

export interface ConnectionHooks {
  onState?: () => void;
  onEffects?: (effects: import("./protocol.js").Effect[]) => void;
  onBanner?: (text: string | null) => void;
  onError?: (code: string, message: string) => void;
}

export class Connection {
  replica = new Replica();
  /** Events sent / acks received; equal once the server drained this link. */
  sent = 0;
  acked = 0;
  private socket: SocketLike | null = null;
  private closed = false;

  constructor(
    private url: string,
    private role: Role,
    private hooks: ConnectionHooks = {},
    private factory: SocketFactory = (u) => new WebSocket(u) as unknown as SocketLike,
  ) {}

  open(): void {
    this.closed = false;
    this.connect();
  }

  private connect(): void {
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.addEventListener("open", () => {
      socket.send(hello(this.role));
      this.hooks.onBanner?.(null);
    });
    socket.addEventListener("message", (ev: MessageEvent) => {
      this.handle(JSON.parse(typeof ev.data === "string" ? ev.data : String(ev.data)));
    });
    socket.addEventListener("close", () => {
      if (this.closed) return;
      this.hooks.onBanner?.("connection lost — reconnecting…");
      setTimeout(() => this.connect(), 800);
    });
    socket.addEventListener("error", () => {
      /* close handler reconnects */
    });
  }

  private handle(env: ServerEnvelope): void {
    if (env.kind === "full_state") {
      this.replica.applyFullState(env);
      this.hooks.onState?.();
      return;
    }
    if (env.kind === "delta") {
      try {
        this.replica.applyDelta(env);
      } catch (err) {
        if (err instanceof SeqGapError) {
          this.socket?.send(resync());
          return;
        }
        throw err;
      }
      if (env.effects.length) this.hooks.onEffects?.(env.effects);
      this.hooks.onState?.();
      return;
    }
    if (env.kind === "ack") {
      this.acked += 1;
      return;
    }
    if (env.kind === "error") {
      this.hooks.onError?.(env.code, env.message);
    }
  }

  sendEvent(event: InputEvent): void {
    this.socket?.send(eventEnvelope(event));
    this.sent += 1;
  }

  sendRaw(text: string): void {
    this.socket?.send(text);
  }

  close(): void {
    this.closed = true;
    this.socket?.close();
  }
}
