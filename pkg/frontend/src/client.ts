/** Protocol client: request/response correlation and the drag-coalescing pump. */

import {
  ProgressEvent,
  Request,
  Response,
  ServerMessage,
  UiFrame,
  isEvent,
} from "./frame.js";
import { Transport } from "./transport.js";

/**
 * Matches responses to requests in FIFO order (the engine answers each
 * connection's requests in arrival order) and routes out-of-band events.
 */
export class ProtocolClient {
  private readonly pending: Array<(response: Response) => void> = [];

  constructor(
    private readonly transport: Transport,
    private readonly onEvent: (event: ProgressEvent) => void = () => {},
  ) {
    transport.onLine((line) => {
      const message = JSON.parse(line) as ServerMessage;
      if (isEvent(message)) {
        this.onEvent(message);
        return;
      }
      const resolve = this.pending.shift();
      if (resolve === undefined) {
        throw new Error("response without a pending request");
      }
      resolve(message);
    });
  }

  request(req: Request): Promise<Response> {
    return new Promise((resolve) => {
      this.pending.push(resolve);
      this.transport.send(JSON.stringify(req));
    });
  }

  close(): void {
    this.transport.close();
  }
}

export interface PumpOptions {
  onFrame?: (frame: UiFrame, response: Response) => void;
  onError?: (response: Response) => void;
}

interface QueueEntry {
  request: Request;
  coalescable: boolean;
}

/**
 * Keeps at most one mutating request in flight.
 *
 * While a request is outstanding, newly submitted coalescable requests
 * (intermediate drag moves) merge into the queued one — the earlier `from`
 * endpoint is kept and the `to` endpoint replaced, so motion is never lost
 * even though intermediate events are dropped. Non-coalescable requests
 * (gesture endpoints, everything else) queue up and are never dropped.
 */
export class RequestPump {
  private queue: QueueEntry[] = [];
  private inFlight = false;
  private idleResolvers: Array<() => void> = [];
  /** Requests actually sent to the engine, in order (for the replay harness). */
  readonly sent: Request[] = [];

  constructor(
    private readonly client: ProtocolClient,
    private readonly options: PumpOptions = {},
  ) {}

  submit(request: Request, coalescable = false): void {
    const last = this.queue[this.queue.length - 1];
    if (coalescable && last !== undefined && last.coalescable && last.request.op === request.op) {
      this.queue[this.queue.length - 1] = {
        coalescable: true,
        request: { ...request, from: last.request.from },
      };
    } else {
      this.queue.push({ request, coalescable });
    }
    void this.drain();
  }

  /** Resolves once the queue is empty and nothing is in flight. */
  idle(): Promise<void> {
    if (!this.inFlight && this.queue.length === 0) {
      return Promise.resolve();
    }
    return new Promise((resolve) => this.idleResolvers.push(resolve));
  }

  private async drain(): Promise<void> {
    if (this.inFlight) {
      return;
    }
    const entry = this.queue.shift();
    if (entry === undefined) {
      const resolvers = this.idleResolvers;
      this.idleResolvers = [];
      for (const resolve of resolvers) {
        resolve();
      }
      return;
    }
    this.inFlight = true;
    this.sent.push(entry.request);
    const response = await this.client.request(entry.request);
    this.inFlight = false;
    if (response.ok) {
      if (response.frame !== undefined && this.options.onFrame) {
        this.options.onFrame(response.frame, response);
      }
    } else if (this.options.onError) {
      this.options.onError(response);
    }
    void this.drain();
  }
}
