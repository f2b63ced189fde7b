import { describe, expect, it } from "vitest";

import { connectGateway, type SocketLike } from "./client";
import type { ServerMsg } from "./protocol";

class FakeSocket implements SocketLike {
  sent: string[] = [];
  readyState = 1;
  onmessage: ((ev: { data: string }) => void) | null = null;
  onopen: (() => void) | null = null;
  onclose: (() => void) | null = null;
  send(data: string) {
    this.sent.push(data);
  }
  close() {
    this.readyState = 3;
    this.onclose?.();
  }
  emit(msg: unknown) {
    this.onmessage?.({ data: JSON.stringify(msg) });
  }
}

describe("connectGateway", () => {
  it("dispatches parsed messages and status flips", () => {
    const socket = new FakeSocket();
    const seen: ServerMsg[] = [];
    const status: boolean[] = [];
    connectGateway(socket, (m) => seen.push(m), (c) => status.push(c));
    socket.onopen?.();
    socket.emit({ type: "frame", tick: 3, rgb_base64: "", scores: null, mode: "human" });
    socket.close();
    expect(status).toEqual([true, false]);
    expect(seen).toHaveLength(1);
    expect(seen[0].type).toBe("frame");
  });

  it("swallows unparseable payloads", () => {
    const socket = new FakeSocket();
    const seen: ServerMsg[] = [];
    connectGateway(socket, (m) => seen.push(m), () => {});
    socket.onmessage?.({ data: "{{{{" });
    expect(seen).toHaveLength(0);
  });

  it("serializes client messages only while open", () => {
    const socket = new FakeSocket();
    const client = connectGateway(socket, () => {}, () => {});
    client.send({ type: "input", tick: 9, class_id: 1 });
    expect(JSON.parse(socket.sent[0])).toEqual({ type: "input", tick: 9, class_id: 1 });
    socket.readyState = 0;
    client.send({ type: "mode", mode: "agent" });
    expect(socket.sent).toHaveLength(1);
  });
});
