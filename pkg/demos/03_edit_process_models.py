"""The two edit models: the one-pass random process and bounded arbitrary
edits, with their count laws checked against theory."""

import numpy as np

import indelsync as ix
from indelsync.sim import ApesParams, RpesParams

# one-pass random process: K_D ~ Binomial(n, del/(1-eps)),
# K_I ~ NegBinomial(n+1, eps)
n, eps, delta = 50_000, 0.02, 0.01
kd, ki = [], []
for s in range(60):
    x = ix.gen_pre_ess(n, 4, s)
    pattern, y = ix.gen_ltrrid(x, RpesParams(n, 4, eps, delta, 100 + s))
    kd.append(pattern.k_del)
    ki.append(pattern.k_ins)
print("one-pass process over 60 seeds:")
print(f"  mean K_D = {np.mean(kd):8.1f}   theory {n * delta / (1 - eps):8.1f}")
print(f"  mean K_I = {np.mean(ki):8.1f}   theory {(n + 1) * eps / (1 - eps):8.1f}")

# arbitrary edits: every sampled worst-case pattern gives a distinct output
n, a = 6, 3
x = ix.make_construction("alternating", n, a)
outputs = set()
for s in range(400):
    edits, y = ix.gen_apes(x, ApesParams(n, a, 1, 1, "worst_case_lb", s))
    outputs.add(tuple(int(v) for v in y.symbols))
count = (n - 1 + 1) * (n - 1 + 1) * (a - 2)
print(f"\nworst-case source 010101, one deletion + one insertion:")
print(f"  distinct outputs sampled: {len(outputs)} (construction count {count})")
print(f"  full post-edit set size : {len(ix.enumerate_post_edit_set(x, 1, 1))}")
