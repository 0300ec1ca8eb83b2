"""One-way update over TCP: the server verifies it holds the same old file
(digest in the hello frame), receives one delta, applies it atomically."""

import tempfile
import threading
from pathlib import Path

import indelsync as ix
from indelsync.sim import RpesParams
from indelsync.sync import UpdateServer, sync_push

workdir = Path(tempfile.mkdtemp(prefix="indelsync-demo-"))
server = UpdateServer(("127.0.0.1", 0), workdir / "store")
threading.Thread(target=server.serve_forever, daemon=True).start()
addr = server.server_address[:2]
print(f"server on {addr[0]}:{addr[1]}, store {server.store_path}")

current = ix.gen_pre_ess(50_000, 256, 1).to_bytes()
server.store_path.write_bytes(current)

old_f, new_f = workdir / "old.bin", workdir / "new.bin"
for version in range(1, 6):
    x = ix.Sequence.from_bytes(current)
    _, y = ix.gen_ltrrid(x, RpesParams(len(x), 256, 0.01, 0.01, 100 + version))
    new = y.to_bytes()
    old_f.write_bytes(current)
    new_f.write_bytes(new)
    report = sync_push(addr, old_f, new_f)
    synced = server.store_path.read_bytes() == new
    print(f"v{version}: pushed {report.total_bits // 8} delta bytes for "
          f"{len(new)} file bytes, server in sync: {synced}")
    current = new

server.shutdown()
server.server_close()
print("done; every version moved as a small delta, never the whole file")
