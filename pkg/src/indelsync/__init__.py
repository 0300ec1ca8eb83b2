"""One-way file updates under insertions and deletions.

The encoder holds the old and new files, ships a compressed edit script;
the decoder holds only the old file and reconstructs the new one exactly.
Alongside the codec live the edit-process simulators, the typicalization
and alignment machinery, and closed-form rate bounds used to judge the
measured rates.
"""

from .core import (
    Alphabet,
    ArbitraryEdit,
    DELETE,
    EditOp,
    EditPattern,
    INSERT,
    NOOP,
    RunDecomposition,
    Sequence,
    apply_edit_pattern,
    canonicalize_arbitrary,
    replay_arbitrary,
    run_decompose,
    seq,
)
from .dp import DpResult, edit_distance_banded, edit_distance_full
from .entropy import (
    BitStream,
    OpStats,
    decode_contents,
    decode_ops,
    empirical_op_entropy,
    encode_contents,
    encode_ops,
)
from .codec import (
    RateReport,
    Transmission,
    decode,
    digest_sequence,
    encode,
    fnv1a64,
    measure_rate,
    minimal_edit_script,
)
from .sim import (
    ApesParams,
    RpesParams,
    gen_apes,
    gen_ltrrid,
    gen_pre_ess,
    make_construction,
    read_pair,
    write_pair,
)
from .bounds import (
    RateBound,
    achievable_upper,
    apes_lower_bound,
    apes_lower_bound_expanded,
    binary_entropy,
    c_constant,
    deletion_only_count_rate,
    insertion_only_count_rate,
    rpes_lower_bound,
)
from .lab import (
    AlignmentTree,
    TypicalizedPattern,
    align,
    alignments_oracle,
    compute_global_alignment,
    enumerate_post_edit_set,
    estimate_natures_secret,
    extended_run_edit_counts,
    is_typical,
    recombine,
    run_edit_counts,
    typicalize,
    typicalized_posess,
)
from . import errors

__version__ = "0.1.0"
