"""Post-edit-set counting: how many distinct outputs a bounded edit budget
can reach, against the closed forms that drive the adversarial rate bound."""

import math

import indelsync as ix

# insertions only: the exact-budget class matches the closed form for any source
n, a = 5, 3
for en in (1, 2):
    formula = sum(math.comb(n + en, j) * (a - 1) ** j for j in range(en + 1))
    for source in ("00000", "01010", "01201"):
        x = ix.seq(source, a)
        family = ix.enumerate_post_edit_set(x, en, 0)
        exact = sum(1 for t in family if len(t) == n + en)
        print(f"{source} +{en} ins: exact-length outputs {exact:4d}  formula {formula:4d}")

# deletions only: the all-distinct source realizes the C(n-dn, dn) floor
print()
for n, dn in ((8, 2), (10, 3)):
    x = ix.make_construction("all_distinct", n, 4)
    family = ix.enumerate_post_edit_set(x, 0, dn)
    print(f"all-distinct n={n}, {dn} deletions: |set| = {len(family)} "
          f">= C({n - dn},{dn}) = {math.comb(n - dn, dn)}")

# both kinds on the alternating source
print()
n, a = 6, 3
x = ix.make_construction("alternating", n, a)
family = ix.enumerate_post_edit_set(x, 1, 1)
floor = math.comb(n - 1, 1) * math.comb(n, 1) * (a - 2)
print(f"alternating n={n}, a={a}, 1 ins + 1 del: |set| = {len(family)} >= {floor}")
print(f"log2 of the floor per symbol: {math.log2(floor) / n:.3f} bits "
      f"(the adversarial converse at these budgets)")
