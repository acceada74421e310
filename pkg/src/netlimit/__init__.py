"""netlimit: limits of real-valued functions along directed sets.

Directions (left/right/two-sided approach, +-infinity, sequences, partition
refinement) are sampled along cofinal chains; limits are read off the
sup/inf tail envelopes, and epsilon-delta certificates witness them.

>>> from netlimit import LeftAt, estimate_limit
>>> verdict, trace = estimate_limit(lambda x: (x**2 - 1) / (x - 1), LeftAt(1))
>>> round(verdict.value, 6)
2.0
"""

from netlimit.directions import (
    LeftAt,
    Naturals,
    PartitionsOf,
    RightAt,
    ToInfinity,
    ToMinusInfinity,
    TwoSidedAt,
    make_direction,
    parse_dirspec,
    riemann_stieltjes_net,
)
from netlimit.envelope import (
    Certificate,
    Converges,
    DivergesToMinusInfinity,
    DivergesToPlusInfinity,
    EnvelopeTrace,
    EstimateConfig,
    Inconclusive,
    Oscillates,
    envelopes,
    epsilon_delta_certificate,
    estimate_limit,
    limit_of_product,
    limit_of_quotient,
    limit_of_sum,
    mb_limit,
    sandwich_limit,
)
from netlimit.expr import compile_expr, evaluate, parse
from netlimit.nets import Direction, Net, cofinal_chain, join, ultimately_less

__all__ = [
    "Certificate", "Converges", "Direction", "DivergesToMinusInfinity", "DivergesToPlusInfinity",
    "EnvelopeTrace", "EstimateConfig", "Inconclusive", "LeftAt", "Naturals", "Net", "Oscillates",
    "PartitionsOf", "RightAt", "ToInfinity", "ToMinusInfinity", "TwoSidedAt", "cofinal_chain",
    "compile_expr", "envelopes", "epsilon_delta_certificate", "estimate_limit", "evaluate", "join",
    "limit_of_product", "limit_of_quotient", "limit_of_sum", "make_direction", "mb_limit", "parse",
    "parse_dirspec", "riemann_stieltjes_net", "sandwich_limit", "ultimately_less",
]
