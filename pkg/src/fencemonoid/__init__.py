"""Fence-preserving partial injections of {1..n}.

Library + CLI for the inverse semigroup of partial injections that
preserve the zigzag (fence) order in both directions: exhaustive
enumeration at desk scale, Green's relations with the block-count
J-class fingerprint, constructive factorization into high-rank
generators, and least-generating-set / rank computations, all
cross-checked against brute-force oracles.
"""

from .pinj import (
    PartialInjection,
    canonical_key,
    compose,
    identity_on,
    inverse,
    make,
    parse,
)
from .fence import Membership, fence_less, in_if, in_pfi, membership

__version__ = "0.1.0"

__all__ = [
    "PartialInjection",
    "Membership",
    "canonical_key",
    "compose",
    "fence_less",
    "identity_on",
    "in_if",
    "in_pfi",
    "inverse",
    "make",
    "membership",
    "parse",
    "__version__",
]
