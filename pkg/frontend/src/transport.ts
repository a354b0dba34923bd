/** Line-delimited transport abstraction over the engine socket. */

export interface Transport {
  /** Send one request line (without trailing newline). */
  send(line: string): void;
  /** Register the handler invoked once per complete received line. */
  onLine(handler: (line: string) => void): void;
  close(): void;
}

/** Splits a byte/text stream into newline-delimited messages. */
export class LineSplitter {
  private buffer = "";

  constructor(private readonly emit: (line: string) => void) {}

  push(chunk: string): void {
    this.buffer += chunk;
    let index = this.buffer.indexOf("\n");
    while (index >= 0) {
      const line = this.buffer.slice(0, index).trim();
      this.buffer = this.buffer.slice(index + 1);
      if (line.length > 0) {
        this.emit(line);
      }
      index = this.buffer.indexOf("\n");
    }
  }
}

/** Browser transport: NDJSON over a WebSocket bridge to the engine port. */
export class WebSocketTransport implements Transport {
  private handler: (line: string) => void = () => {};
  private readonly splitter = new LineSplitter((line) => this.handler(line));

  constructor(private readonly socket: WebSocket) {
    socket.onmessage = (message) => this.splitter.push(String(message.data));
  }

  send(line: string): void {
    this.socket.send(line + "\n");
  }

  onLine(handler: (line: string) => void): void {
    this.handler = handler;
  }

  close(): void {
    this.socket.close();
  }
}
