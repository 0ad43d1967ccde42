"""Streaming erasure codes that ride out a burst and stray random losses in
every sliding window, with exact finite-field verification throughout.

Layers, bottom up: `algebra` (fields, polynomials, matrices), `codes`
(constructions and code objects), `channel` (loss patterns, admissibility,
erasure decoding, family verification), `streaming` (diagonal embedding,
delay-constrained decoding, loss sources, simulation), `analysis` (rate,
field-size, sparsity, and distance reports plus exhaustive searches), and
`cli` (the `erasurelab` command).
"""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403  re-export the exception taxonomy
from .algebra import (
    Field,
    Matrix,
    Poly,
    field_make,
    mat_rank,
    poly_divides,
    poly_mul,
    smallest_prime_power_at_least,
    systematic_form,
    x_pow_n_minus_1,
    zrun,
)
from .codes import (
    CyclicCode,
    LinearCode,
    construction_one,
    construction_one_binary,
    cyclic_from_h,
    generator_matrix,
    mds_code,
    min_distance,
)
from .channel import (
    ChannelParams,
    ErasurePattern,
    VerificationReport,
    can_recover,
    check_wraparound,
    decode_erasures,
    enumerate_admissible_windows,
    enumerate_b1b2_patterns,
    enumerate_burst_plus_random,
    is_b1b2_code,
    is_window_admissible,
)
from .streaming import (
    DecodeTrace,
    GilbertElliottSource,
    PacketStream,
    PeriodicSource,
    StreamingParams,
    de_decode,
    de_encode,
    ge_source,
    is_stream_admissible,
    periodic_pattern,
    simulate,
    verify_streaming_code,
)
from .analysis import (
    CyclicReport,
    RateReport,
    SparsityReport,
    cyclic_burst_capability,
    cyclic_report,
    exhaustive_burst_random_search,
    exhaustive_code_search,
    mds_subblock_check,
    random_field_lower_bound,
    rate_report,
    resolve_workers,
    sparse_field_lower_bound,
    sparsify_construction_one,
    sparsity_minimum,
)
