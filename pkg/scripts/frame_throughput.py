#!/usr/bin/env python3
"""Measure frame round-trip throughput over the wire protocol.

Spawns the service in-process, loads a synthetic dataset of the requested
size, and times drag -> frame round trips over a real socket.
"""

import argparse
import json
import socket
import threading
import time

from hyperball.dataset import write_csv
from hyperball.fixtures import gen_three_clusters
from hyperball.server import Server


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--points", type=int, default=5000)
    parser.add_argument("--dims", type=int, default=10)
    parser.add_argument("--frames", type=int, default=120)
    args = parser.parse_args()

    import tempfile

    path = tempfile.mktemp(suffix=".csv")
    write_csv(gen_three_clusters(args.points // 3 + 1, args.dims, seed=0), path)

    server = Server(port=0)
    threading.Thread(target=server.serve_forever, daemon=True).start()
    sock = socket.create_connection(("127.0.0.1", server.server_address[1]))
    stream = sock.makefile("rw", encoding="utf-8")

    def call(**request):
        stream.write(json.dumps(request) + "\n")
        stream.flush()
        while True:
            response = json.loads(stream.readline())
            if "event" not in response:
                return response

    r = call(op="load_data", path=path, class_column="class")
    n = r["n_points"]
    t0 = time.perf_counter()
    for i in range(args.frames):
        angle = 0.02 * (i + 1)
        call(op="drag", button="left", **{"from": [0.0, 0.0], "to": [angle % 0.8, 0.1]})
    elapsed = time.perf_counter() - t0
    fps = args.frames / elapsed
    print(f"{n} points, {args.frames} drag+frame round trips in {elapsed:.2f}s: {fps:.1f} fps")
    sock.close()
    server.shutdown()
    server.server_close()


if __name__ == "__main__":
    main()
