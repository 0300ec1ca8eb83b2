"""Typicalized edit patterns and run alignment.

Typicalization strips every run that suffered more than one edit (counted
over the run plus one neighbour on each side) down to no edits, parking the
eliminated edits in a complement stream that recombines losslessly.  The
aligner then explains a typicalized output run by run; where a length-difference
of one admits two local explanations it explores both.
"""

import numpy as np

import indelsync as ix
from indelsync.core import EditPattern, DELETE, INSERT, NOOP

x = ix.seq("0001111223233")
print("source runs:", ix.run_decompose(x).runs)

# one insert in run 1, three edits in run 2, deletions in runs 3 and 6
ops = [NOOP, INSERT, NOOP, NOOP, NOOP, NOOP, INSERT, DELETE, INSERT,
       NOOP, DELETE, NOOP, NOOP, NOOP, DELETE, NOOP]
pattern = EditPattern(np.array(ops, dtype=np.uint8), [0, 4, 1])
print("edits per run         :", ix.run_edit_counts(x, pattern))
print("edits per extended run:", ix.extended_run_edit_counts(x, pattern))

tp = ix.typicalize(x, pattern)
print("eliminated edits      :", tp.eliminated, "(the over-edited second run)")
y_hat = ix.typicalized_posess(x, tp)
print("typicalized output    :", "".join(str(s) for s in y_hat.symbols))
print("recombine == original :", ix.recombine(tp) == pattern)

# ambiguity: two typical explanations for the same output
x2, y2 = ix.seq("0101"), ix.seq("0011")
tree = ix.align(x2, y2)
print(f"\nalign {''.join(map(str, x2.symbols))} -> "
      f"{''.join(map(str, y2.symbols))}:")
print("  alignments (source segment lengths per output run):", tree.leaves())
print("  ambiguous branch points:", tree.gamma_nodes())
for witness in tree.witnesses():
    edits = ["noop" if o.kind == NOOP else ("del" if o.kind == DELETE else f"ins{o.content}")
             for o in witness.iter_ops()]
    print("  witness pattern:", " ".join(edits))
