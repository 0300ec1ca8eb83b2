import numpy as np
import pytest

from indelsync.core import DELETE, EditPattern, INSERT, NOOP


def make_pattern(spec: str) -> EditPattern:
    """Compact op-stream notation: "n d i4 n" -> noop, delete, insert 4, noop."""
    ops, contents = [], []
    for token in spec.split():
        if token == "n":
            ops.append(NOOP)
        elif token == "d":
            ops.append(DELETE)
        elif token.startswith("i"):
            ops.append(INSERT)
            contents.append(int(token[1:]))
        else:
            raise ValueError(f"bad op token {token!r}")
    return EditPattern(np.array(ops, dtype=np.uint8), contents)


@pytest.fixture
def pat():
    return make_pattern
