import { describe, expect, it } from "vitest";

import { ProtocolClient, RequestPump } from "../src/client.js";
import { ProgressEvent } from "../src/frame.js";
import { FakeTransport, emptyFrame } from "./helpers.js";

describe("ProtocolClient", () => {
  it("matches responses to requests in order", async () => {
    const transport = new FakeTransport();
    transport.respond = (request) => [{ ok: true, id: request.id, echo: request.op }];
    const client = new ProtocolClient(transport);
    const [a, b] = await Promise.all([
      client.request({ op: "get_frame", id: 1 }),
      client.request({ op: "list_views", id: 2 }),
    ]);
    expect(a).toMatchObject({ ok: true, id: 1, echo: "get_frame" });
    expect(b).toMatchObject({ ok: true, id: 2, echo: "list_views" });
  });

  it("routes events out of band", async () => {
    const transport = new FakeTransport();
    transport.respond = (request) => [
      { event: "optimize_progress", generation: 0, best_score: 0.5 },
      { event: "optimize_progress", generation: 1, best_score: 0.7 },
      { ok: true, id: request.id },
    ];
    const events: ProgressEvent[] = [];
    const client = new ProtocolClient(transport, (event) => events.push(event));
    const response = await client.request({ op: "optimize", id: 9 });
    expect(response.ok).toBe(true);
    expect(events.map((e) => e.generation)).toEqual([0, 1]);
  });
});

describe("RequestPump", () => {
  it("keeps at most one request in flight", async () => {
    const transport = new FakeTransport();
    transport.manual = true;
    const pump = new RequestPump(new ProtocolClient(transport));
    pump.submit({ op: "get_frame" });
    pump.submit({ op: "list_views" });
    expect(transport.requests.length).toBe(1); // second one queued
    transport.flushOne();
    await Promise.resolve();
    await Promise.resolve();
    transport.flushOne();
    await pump.idle();
    expect(transport.requests.map((r) => r.op)).toEqual(["get_frame", "list_views"]);
  });

  it("coalesces intermediate drags but keeps both endpoints of the motion", async () => {
    const transport = new FakeTransport();
    transport.manual = true;
    const pump = new RequestPump(new ProtocolClient(transport));
    pump.submit({ op: "drag", button: "left", from: [0, 0], to: [0.1, 0] }, true);
    // in flight now; the next three moves coalesce into one queued request
    pump.submit({ op: "drag", button: "left", from: [0.1, 0], to: [0.2, 0] }, true);
    pump.submit({ op: "drag", button: "left", from: [0.2, 0], to: [0.3, 0] }, true);
    pump.submit({ op: "drag", button: "left", from: [0.3, 0], to: [0.4, 0] }, true);
    while (transport.heldCount() > 0) {
      transport.flushOne();
      await Promise.resolve();
      await Promise.resolve();
    }
    await pump.idle();
    expect(transport.requests.length).toBe(2);
    expect(transport.requests[0]).toMatchObject({ from: [0, 0], to: [0.1, 0] });
    // merged request spans the dropped intermediates: no motion lost
    expect(transport.requests[1]).toMatchObject({ from: [0.1, 0], to: [0.4, 0] });
  });

  it("never drops non-coalescable requests", async () => {
    const transport = new FakeTransport();
    transport.manual = true;
    const pump = new RequestPump(new ProtocolClient(transport));
    pump.submit({ op: "drag", button: "left", from: [0, 0], to: [0.1, 0] }, true);
    pump.submit({ op: "drag", button: "left", from: [0.1, 0], to: [0.2, 0] }, true);
    pump.submit({ op: "save_view" });
    pump.submit({ op: "drag", button: "left", from: [0.2, 0], to: [0.3, 0] }, true);
    while (transport.heldCount() > 0) {
      transport.flushOne();
      await Promise.resolve();
      await Promise.resolve();
    }
    await pump.idle();
    expect(transport.requests.map((r) => r.op)).toEqual([
      "drag",
      "drag",
      "save_view",
      "drag",
    ]);
  });

  it("delivers frames to the view callback", async () => {
    const transport = new FakeTransport();
    transport.respond = () => [{ ok: true, frame: emptyFrame() }];
    let frames = 0;
    const pump = new RequestPump(new ProtocolClient(transport), {
      onFrame: () => {
        frames += 1;
      },
    });
    pump.submit({ op: "get_frame" });
    await pump.idle();
    expect(frames).toBe(1);
  });

  it("reports engine errors", async () => {
    const transport = new FakeTransport();
    transport.respond = () => [
      { ok: false, error: { code: "no_dataset", message: "no dataset loaded" } },
    ];
    const errors: string[] = [];
    const pump = new RequestPump(new ProtocolClient(transport), {
      onError: (response) => {
        if (!response.ok) {
          errors.push(response.error.code);
        }
      },
    });
    pump.submit({ op: "get_frame" });
    await pump.idle();
    expect(errors).toEqual(["no_dataset"]);
  });
});
