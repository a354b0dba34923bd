/** Node TCP transport: used by the test/replay harnesses and headless hosts. */

import * as net from "node:net";

import { LineSplitter, Transport } from "./transport.js";

export class TcpTransport implements Transport {
  private handler: (line: string) => void = () => {};
  private readonly splitter = new LineSplitter((line) => this.handler(line));

  private constructor(private readonly socket: net.Socket) {
    socket.setEncoding("utf-8");
    socket.on("data", (chunk: string) => this.splitter.push(chunk));
  }

  static connect(port: number, host = "127.0.0.1"): Promise<TcpTransport> {
    return new Promise((resolve, reject) => {
      const socket = net.createConnection({ port, host });
      socket.once("connect", () => resolve(new TcpTransport(socket)));
      socket.once("error", reject);
    });
  }

  send(line: string): void {
    this.socket.write(line + "\n");
  }

  onLine(handler: (line: string) => void): void {
    this.handler = handler;
  }

  close(): void {
    this.socket.end();
    this.socket.destroy();
  }
}
