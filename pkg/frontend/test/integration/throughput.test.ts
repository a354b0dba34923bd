/** Frame round-trip rate at desk scale (5,000 points) over the protocol. */

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ProtocolClient } from "../../src/client.js";
import { TcpTransport } from "../../src/transport_node.js";
import { Engine, generateCsv, startEngine } from "./engine.js";

let engine: Engine;
let client: ProtocolClient;

beforeAll(async () => {
  engine = await startEngine();
  client = new ProtocolClient(await TcpTransport.connect(engine.port));
}, 30000);

afterAll(() => {
  client?.close();
  engine?.stop();
});

describe("frame throughput", () => {
  it("sustains at least 30 drag+frame round trips per second at 5000 points", async () => {
    const csv = generateCsv({ fixture: "three-clusters", seed: 1, dims: 10, nPer: 1667 });
    const load = await client.request({ op: "load_data", path: csv, class_column: "class" });
    expect(load.ok).toBe(true);
    expect((load as { n_points?: number }).n_points).toBeGreaterThanOrEqual(5000);

    const frames = 90;
    const started = performance.now();
    for (let i = 0; i < frames; i++) {
      const response = await client.request({
        op: "drag",
        button: "left",
        from: [0, 0],
        to: [((i % 40) + 1) * 0.01, 0.05],
      });
      expect(response.ok).toBe(true);
    }
    const seconds = (performance.now() - started) / 1000;
    const fps = frames / seconds;
    // eslint-disable-next-line no-console
    console.log(`throughput: ${fps.toFixed(1)} frames/s over ${seconds.toFixed(2)}s`);
    expect(fps).toBeGreaterThanOrEqual(30);
  }, 60000);
});
