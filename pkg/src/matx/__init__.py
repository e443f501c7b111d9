"""Explicit-basis matroids, base partitions, exchange graphs and toric fibers.

Set ``MATX_KERNELS=numpy`` to bypass the numba kernels.
"""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .matroid import (  # noqa: F401
    ExchangeWitness, Matroid, MatroidMorphism, MorphismCheck, blow_up, digest, elements,
    fmt_set, graphic, linear_gf, minor, rank, restrict, symmetric_exchange_partners,
    symmetric_exchange_violation, to_mask, truncate, uniform, validate_bases, verify_morphism,
)
from .partition import (  # noqa: F401
    BasePartition, UnionViolation, complementary_bases, is_complementary, is_k_matroid,
    iter_partitions, partition_into_bases, union_certificate, violating_set,
)
from .graphs import (  # noqa: F401
    ExchangeGraph, GraphSummary, analyze, basis_graph, complementary_basis_graph, k_base_graph,
)
from .fibers import (  # noqa: F401
    W1, W2, W3, BaseMultiset, BaseSequence, FiberReport, Move, apply_move,
    check_white_degree, enumerate_fiber, generation_path, image_state, lift_path, multiset,
    neighbors, replay, saturation_check, sequence, union_vector,
)
from .conjectures import (  # noqa: F401
    BlowupLabeling, audit_noncomplementary_bound, check_complementary_connected,
    check_kr_plus_1, corollary_scan, detect_blowup_containment, noncomplementary_bound,
)
from .catalog import canonical, canonical_form, catalog_generate  # noqa: F401
from .io import canonical_json, emit, make_report, parse_file, parse_matroid, validate_report  # noqa: F401
