"""Framed one-way TCP update protocol around the codec.

Frames are length-prefixed: u32 big-endian payload length, u8 kind, payload.
One connection carries one update: Hello (version, n, X digest) -> Ack,
Delta (container bytes) -> Ack.  Any Error frame aborts the connection and
leaves the stored file untouched; writes are temp-file + rename.
"""

from __future__ import annotations

import os
import socket
import socketserver
import struct
import tempfile
import threading
from pathlib import Path

from . import codec
from .core import Sequence
from .errors import IndelSyncError, SyncProtocolError

PROTOCOL_VERSION = 1
STORE_ENV = "INDEL_SYNC_STORE"
STORE_FILENAME = "data.bin"

FRAME_HELLO = 1
FRAME_DELTA = 2
FRAME_ACK = 3
FRAME_ERROR = 4

ERR_VERSION = 1
ERR_DIGEST = 2
ERR_DECODE = 3

_ERR_NAMES = {ERR_VERSION: "VERSION", ERR_DIGEST: "DIGEST", ERR_DECODE: "DECODE"}


def _recv_exact(sock: socket.socket, count: int) -> bytes:
    buf = b""
    while len(buf) < count:
        chunk = sock.recv(count - len(buf))
        if not chunk:
            raise SyncProtocolError("EOF", "connection closed mid-frame")
        buf += chunk
    return buf


def send_frame(sock: socket.socket, kind: int, payload: bytes = b"") -> None:
    sock.sendall(struct.pack(">IB", len(payload), kind) + payload)


def recv_frame(sock: socket.socket) -> tuple[int, bytes]:
    header = _recv_exact(sock, 5)
    length, kind = struct.unpack(">IB", header)
    return kind, _recv_exact(sock, length)


def _hello_payload(n: int, digest: int) -> bytes:
    return struct.pack(">BQQ", PROTOCOL_VERSION, n, digest)


def _parse_hello(payload: bytes) -> tuple[int, int, int]:
    if len(payload) != 17:
        raise SyncProtocolError("FRAME", "malformed hello")
    return struct.unpack(">BQQ", payload)


def _error_payload(code: int, message: str) -> bytes:
    return bytes([code]) + message.encode()


class _UpdateHandler(socketserver.BaseRequestHandler):
    def handle(self):
        server: UpdateServer = self.server  # type: ignore[assignment]
        sock = self.request
        try:
            kind, payload = recv_frame(sock)
            if kind != FRAME_HELLO:
                send_frame(sock, FRAME_ERROR, _error_payload(ERR_VERSION, "expected hello"))
                return
            version, n, digest = _parse_hello(payload)
            if version != PROTOCOL_VERSION:
                send_frame(
                    sock, FRAME_ERROR, _error_payload(ERR_VERSION, f"version {version}")
                )
                return
            with server.store_lock:
                stored = server.store_path.read_bytes() if server.store_path.exists() else b""
            if len(stored) != n or codec.fnv1a64(stored) != digest:
                send_frame(
                    sock, FRAME_ERROR, _error_payload(ERR_DIGEST, "stored file differs")
                )
                return
            send_frame(sock, FRAME_ACK)
            kind, payload = recv_frame(sock)
            if kind != FRAME_DELTA:
                send_frame(sock, FRAME_ERROR, _error_payload(ERR_DECODE, "expected delta"))
                return
            try:
                transmission = codec.Transmission.from_bytes(payload)
                y = codec.decode(Sequence.from_bytes(stored), transmission)
            except IndelSyncError as exc:
                send_frame(sock, FRAME_ERROR, _error_payload(ERR_DECODE, str(exc)))
                return
            with server.store_lock:
                fd, tmp = tempfile.mkstemp(dir=server.store_path.parent)
                with os.fdopen(fd, "wb") as fh:
                    fh.write(y.to_bytes())
                os.replace(tmp, server.store_path)
            send_frame(sock, FRAME_ACK)
        except SyncProtocolError:
            pass  # peer vanished; nothing was committed


class UpdateServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address: tuple[str, int], store_dir: str | Path):
        super().__init__(address, _UpdateHandler)
        store = Path(store_dir)
        store.mkdir(parents=True, exist_ok=True)
        self.store_path = store / STORE_FILENAME
        self.store_lock = threading.Lock()


def sync_serve(address: tuple[str, int], store_dir: str | Path) -> UpdateServer:
    """Start a server thread; caller owns shutdown()."""
    server = UpdateServer(address, store_dir)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server


def sync_push(
    address: tuple[str, int], old_path: str | Path, new_path: str | Path
) -> codec.RateReport:
    """One-shot update: verify the server holds `old`, send the delta for `new`."""
    old = Path(old_path).read_bytes()
    new = Path(new_path).read_bytes()
    x = Sequence.from_bytes(old)
    y = Sequence.from_bytes(new)
    transmission = codec.encode(x, y)
    with socket.create_connection(address) as sock:
        send_frame(sock, FRAME_HELLO, _hello_payload(len(old), codec.fnv1a64(old)))
        kind, payload = recv_frame(sock)
        if kind == FRAME_ERROR:
            code = payload[0] if payload else 0
            raise SyncProtocolError(_ERR_NAMES.get(code, "UNKNOWN"), payload[1:].decode())
        if kind != FRAME_ACK:
            raise SyncProtocolError("FRAME", f"unexpected frame kind {kind}")
        send_frame(sock, FRAME_DELTA, transmission.to_bytes())
        kind, payload = recv_frame(sock)
        if kind == FRAME_ERROR:
            code = payload[0] if payload else 0
            raise SyncProtocolError(_ERR_NAMES.get(code, "UNKNOWN"), payload[1:].decode())
        if kind != FRAME_ACK:
            raise SyncProtocolError("FRAME", f"unexpected frame kind {kind}")
    return codec.measure_rate(transmission)


def default_store_dir() -> Path:
    return Path(os.environ.get(STORE_ENV, "indel-sync-store"))
