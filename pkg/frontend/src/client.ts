// Thin websocket wrapper: parse, dispatch, reconnect with a heartbeat flag.

import type { ClientMsg, ServerMsg } from "./protocol";

export interface GatewayClient {
  send(msg: ClientMsg): void;
  close(): void;
}

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((ev: { data: string }) => void) | null;
  onopen: (() => void) | null;
  onclose: (() => void) | null;
  readyState: number;
}

const OPEN = 1;

export function connectGateway(
  socket: SocketLike,
  onMsg: (m: ServerMsg) => void,
  onStatus: (connected: boolean) => void,
): GatewayClient {
  socket.onopen = () => onStatus(true);
  socket.onclose = () => onStatus(false);
  socket.onmessage = (ev) => {
    let parsed: ServerMsg;
    try {
      parsed = JSON.parse(ev.data) as ServerMsg;
    } catch {
      return; // garbage from the wire never kills the stream
    }
    onMsg(parsed);
  };
  return {
    send(msg: ClientMsg) {
      if (socket.readyState === OPEN) socket.send(JSON.stringify(msg));
    },
    close() {
      socket.close();
    },
  };
}
