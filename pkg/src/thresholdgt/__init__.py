"""Non-adaptive threshold group testing with exactly-at-threshold positivity.

Identifies up to d defective items among n by pooled tests that fire only
when a pool contains at least u defectives.  Candidate pools come from a
completely separating matrix, outcomes are mapped pairwise (code row,
complement row) back to classical boolean group testing, and a disjunct
code matrix makes each pool decodable with a validated cover decoder.
"""

from .bitmat import (
    BitMatrix,
    BitVector,
    FormatError,
    complement,
    mask_columns,
    read_matrix,
    read_vector,
    union_columns,
    write_matrix,
    write_vector,
)
from .disjunct import (
    ConstructionError,
    DisjunctParams,
    cover_decode,
    gen_random_disjunct,
    gen_rs_concatenated,
    is_disjunct,
    rs_parameters,
)
from .scheme import (
    MODE_DETERMINISTIC,
    MODE_RANDOMIZED,
    DefectiveSet,
    MeasurementScheme,
    OutcomeVector,
    build_scheme,
    classical_encode,
    convert_outcomes,
    decode,
    load_scheme,
    save_scheme,
    simulate_instance,
    stack_matrix,
    threshold_encode,
)
from .separating import (
    SeparatingParams,
    gen_random,
    is_completely_separating,
    is_pruned_separating,
    rows_needed_deterministic,
    rows_needed_randomized,
)

__version__ = "0.1.0"

__all__ = [
    "BitMatrix",
    "BitVector",
    "FormatError",
    "complement",
    "mask_columns",
    "union_columns",
    "read_matrix",
    "write_matrix",
    "read_vector",
    "write_vector",
    "SeparatingParams",
    "rows_needed_deterministic",
    "rows_needed_randomized",
    "gen_random",
    "is_completely_separating",
    "is_pruned_separating",
    "ConstructionError",
    "DisjunctParams",
    "rs_parameters",
    "gen_rs_concatenated",
    "gen_random_disjunct",
    "is_disjunct",
    "cover_decode",
    "MODE_DETERMINISTIC",
    "MODE_RANDOMIZED",
    "MeasurementScheme",
    "DefectiveSet",
    "OutcomeVector",
    "build_scheme",
    "stack_matrix",
    "threshold_encode",
    "classical_encode",
    "convert_outcomes",
    "simulate_instance",
    "decode",
    "save_scheme",
    "load_scheme",
    "__version__",
]
