"""Checks for the generalized triangle inequality of the second type.

    |x_1 + ... + x_n|^p <= |x_1|^p / mu_1 + ... + |x_n|^p / mu_n

``characterize`` decides in closed form which coefficient tuples make this
(or its reverse) hold in every normed space; ``oracle`` hunts for explicit
counterexamples in l^q spaces; ``envelope`` computes the envelope surface
behind the p > 1 conditions.
"""

from .characterize import (
    Exponent,
    Verdict,
    count_negatives,
    decide,
    decide_F,
    decide_G,
    decide_H,
)
from .envelope import (
    envelope_csv,
    envelope_point,
    envelope_residual,
    h_p,
    in_Dp,
    sample_envelope,
    simplex_grid,
)
from .oracle import (
    Falsification,
    SearchConfig,
    Witness,
    crosscheck,
    euler_lagrange_residual,
    falsify,
    falsify_F,
    falsify_G,
    gap_F,
    gap_G,
    random_verify,
)
from .spaces import NormTuple, SpaceDescriptor, feasible_t_range, norm, realize_tuple

__version__ = "0.1.0"
