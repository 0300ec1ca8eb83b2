"""Measure delta rates over a seeded corpus and sandwich them between the
theory lines: the converse (no code can do better on average) and the
guaranteed rate of the minimal-script-plus-entropy-coding scheme."""

import numpy as np

import indelsync as ix
from indelsync.sim import RpesParams

a, n, seeds = 256, 200_000, 8
print(f"random one-pass corpus: n = {n}, alphabet {a}, {seeds} seeds per rate")
print(f"{'eps=del':>8} {'lower':>8} {'measured':>9} {'upper':>8}")
for rate in (0.002, 0.005, 0.01, 0.02, 0.05):
    lower = ix.rpes_lower_bound(rate, rate, a, tau=0.1).value
    upper = ix.achievable_upper(rate, rate, a, model="apes").value
    measured = []
    for s in range(seeds):
        x = ix.gen_pre_ess(n, a, 1000 + s)
        _, y = ix.gen_ltrrid(x, RpesParams(n, a, rate, rate, 2000 + s))
        measured.append(ix.measure_rate(ix.encode(x, y)).bits_per_source_symbol)
    print(f"{rate:8.3f} {lower:8.4f} {np.mean(measured):9.4f} {upper:8.4f}")

print()
print("the measured column tracks H(del) + H(eps) + eps*log2(a) plus the")
print("container overhead, and must never undercut the converse")
