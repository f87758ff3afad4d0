// One live connection: socket handling, the state reducer loop, and the
// guarded action submitter.

import {
  ActRequest,
  ClientMessage,
  ServerMessage,
  WireAction,
} from "./protocol.js";
import { submittable } from "./picker.js";
import { TableState, applyServer, initialState } from "./state.js";

export interface JoinParams {
  userId: string;
  seatNum: number;
  create: boolean;
  rounds: number;      // when creating
  roomId: number;      // when joining
}

export type Transport = {
  send(text: string): void;
  close(): void;
};

export class Session {
  state: TableState = initialState();
  private transport: Transport | null = null;
  private params: JoinParams | null = null;

  constructor(private onChange: (state: TableState) => void) {}

  connect(url: string, params: JoinParams): void {
    this.params = params;
    const sock = new WebSocket(url);
    sock.onopen = () => {
      this.transport = {
        send: (text) => sock.send(text),
        close: () => sock.close(),
      };
      this.sendHello();
    };
    sock.onmessage = (ev) => this.receive(JSON.parse(ev.data as string));
    sock.onclose = () => {
      this.state = { ...this.state, banner: "disconnected", request: null };
      this.emit();
    };
    sock.onerror = () => {
      this.state = { ...this.state, error: "connection failed" };
      this.emit();
    };
    this.state = { ...this.state, banner: "connecting..." };
    this.emit();
  }

  /** Test hook: run the session over an in-memory transport. */
  attach(transport: Transport, params: JoinParams): void {
    this.transport = transport;
    this.params = params;
    this.sendHello();
  }

  receive(msg: ServerMessage): void {
    this.state = applyServer(this.state, msg);
    this.emit();
  }

  private sendHello(): void {
    const p = this.params!;
    const hello: ClientMessage = p.create
      ? { type: "CREATE_ROOM",
          data: { userId: p.userId, round: p.rounds, seatNum: p.seatNum } }
      : { type: "JOIN_ROOM",
          data: { userId: p.userId, roomId: p.roomId, seatNum: p.seatNum } };
    this.send(hello);
  }

  /** Submit the action at `index` of the open request's actionList. The
   * index is range-checked and the wire form echoed verbatim, so nothing
   * outside the served list can ever be sent. */
  submit(index: number): boolean {
    const request = this.state.request;
    if (!submittable(request, index) || this.transport === null) return false;
    const req = request as ActRequest;
    const act = req.actionList[index] as WireAction;
    const roomId = this.state.roomId as number;
    const player = this.state.myPos as number;
    let msg: ClientMessage;
    if (req.stage === "play") {
      msg = { type: "PLAY", data: { roomId, player, act } };
    } else if (req.stage === "tribute") {
      msg = { type: "TRIBUTE", data: { roomId, player, act } };
    } else {
      msg = { type: "PAYTRIBUTE",
              data: { roomId, player, tributePos: req.tributePos,
                      tribute: req.tribute, act } };
    }
    this.send(msg);
    // lock input until the next act request or notification arrives
    this.state = { ...this.state, request: null, banner: "waiting for the table..." };
    this.emit();
    return true;
  }

  private send(msg: ClientMessage): void {
    this.transport?.send(JSON.stringify(msg));
  }

  private emit(): void {
    this.onChange(this.state);
  }
}
