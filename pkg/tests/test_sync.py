import socket
import struct
import threading

import pytest

from indelsync import Sequence, gen_ltrrid, gen_pre_ess
from indelsync.errors import SyncProtocolError
from indelsync.sim import RpesParams
from indelsync import sync
from indelsync.sync import (
    FRAME_ACK,
    FRAME_DELTA,
    FRAME_ERROR,
    FRAME_HELLO,
    UpdateServer,
    recv_frame,
    send_frame,
    sync_push,
)


@pytest.fixture
def server(tmp_path):
    srv = UpdateServer(("127.0.0.1", 0), tmp_path / "store")
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield srv
    srv.shutdown()
    srv.server_close()


def _addr(srv):
    return srv.server_address[:2]


def _seed_store(srv, data: bytes):
    srv.store_path.write_bytes(data)


def _evolve(data: bytes, seed: int) -> bytes:
    x = Sequence.from_bytes(data)
    _, y = gen_ltrrid(x, RpesParams(len(x), 256, 0.01, 0.01, seed))
    return y.to_bytes()


class TestPush:
    def test_single_push(self, server, tmp_path):
        old = gen_pre_ess(4000, 256, 1).to_bytes()
        new = _evolve(old, 2)
        _seed_store(server, old)
        (tmp_path / "old").write_bytes(old)
        (tmp_path / "new").write_bytes(new)
        report = sync_push(_addr(server), tmp_path / "old", tmp_path / "new")
        assert server.store_path.read_bytes() == new
        assert report.total_bits > 0

    def test_digest_mismatch_aborts_before_delta(self, server, tmp_path):
        stored = gen_pre_ess(1000, 256, 3).to_bytes()
        _seed_store(server, stored)
        other = gen_pre_ess(1000, 256, 4).to_bytes()
        (tmp_path / "old").write_bytes(other)
        (tmp_path / "new").write_bytes(_evolve(other, 5))
        with pytest.raises(SyncProtocolError) as err:
            sync_push(_addr(server), tmp_path / "old", tmp_path / "new")
        assert err.value.code == "DIGEST"
        assert server.store_path.read_bytes() == stored  # no state change

    def test_chained_pushes(self, server, tmp_path):
        current = gen_pre_ess(3000, 256, 7).to_bytes()
        _seed_store(server, current)
        for step in range(30):
            new = _evolve(current, 100 + step)
            (tmp_path / "old").write_bytes(current)
            (tmp_path / "new").write_bytes(new)
            sync_push(_addr(server), tmp_path / "old", tmp_path / "new")
            current = new
        assert server.store_path.read_bytes() == current

    def test_version_rejected(self, server):
        with socket.create_connection(_addr(server)) as sock:
            send_frame(sock, FRAME_HELLO, struct.pack(">BQQ", 9, 0, 0))
            kind, payload = recv_frame(sock)
        assert kind == FRAME_ERROR and payload[0] == sync.ERR_VERSION

    def test_garbage_delta_rejected(self, server, tmp_path):
        stored = b"hello world" * 20
        _seed_store(server, stored)
        from indelsync.codec import fnv1a64

        with socket.create_connection(_addr(server)) as sock:
            send_frame(
                sock,
                FRAME_HELLO,
                struct.pack(">BQQ", sync.PROTOCOL_VERSION, len(stored), fnv1a64(stored)),
            )
            kind, _ = recv_frame(sock)
            assert kind == FRAME_ACK
            send_frame(sock, FRAME_DELTA, b"garbage-bytes")
            kind, payload = recv_frame(sock)
        assert kind == FRAME_ERROR and payload[0] == sync.ERR_DECODE
        assert server.store_path.read_bytes() == stored
