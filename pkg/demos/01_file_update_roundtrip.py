"""Encode a delta between two versions of a byte file and apply it.

The decoder only ever sees the old bytes and the container; the digest check
turns any mismatch into a loud error instead of silently wrong output.
"""

import indelsync as ix
from indelsync.sim import RpesParams

# pretend "old" is a 200 kB binary file and "new" is a lightly edited copy
n = 200_000
old = ix.gen_pre_ess(n, 256, seed=1)
_, new = ix.gen_ltrrid(old, RpesParams(n, 256, eps=0.01, delta=0.01, seed=2))

t = ix.encode(old, new)
blob = t.to_bytes()
report = ix.measure_rate(t)

print(f"old {n} bytes, new {len(new)} bytes")
print(f"delta container: {len(blob)} bytes "
      f"({report.bits_per_source_symbol:.4f} bits per old byte)")
print(f"  header  : {report.terms['header_bits']} bits")
print(f"  ops     : {report.terms['op_bits']} bits for {t.n + t.k_ins} ops")
print(f"  contents: {report.terms['content_bits']} bits for {t.k_ins} symbols")

restored = ix.decode(old, ix.Transmission.from_bytes(blob))
print("round trip exact:", restored == new)

# the same delta against the wrong old file fails loudly
wrong = ix.gen_pre_ess(n, 256, seed=99)
try:
    ix.decode(wrong, t)
except ix.errors.IndelSyncError as exc:
    print("wrong base file ->", type(exc).__name__)
