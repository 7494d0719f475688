"""Twisted Verlinde ranks, crossed S-matrices and twisted fusion rings.

Thin Python layer over the C++ library. Structured results come back as
plain dicts and lists; S-matrices as complex numpy arrays.
"""

import json

from . import _twverlinde as _core
from ._twverlinde import (
    AmbiguousPhase,
    GroupTooLarge,
    InvalidArgument,
    NonIntegral,
    NotUnitary,
    TwverlindeError,
)

__all__ = [
    "weights",
    "smatrix",
    "fusion",
    "twisted_fusion",
    "rank",
    "verify_factorization",
    "verify_propagation",
    "TwverlindeError",
    "InvalidArgument",
    "GroupTooLarge",
    "AmbiguousPhase",
    "NonIntegral",
    "NotUnitary",
]


def _spec_text(spec):
    return spec if isinstance(spec, str) else json.dumps(spec)


def weights(type, level):
    """Dominant level-`level` weights of a finite or twisted affine type ("A2", "A3~2", ...)."""
    return json.loads(_core.weights(type, level))


def smatrix(kind, type, level, order=2, via="direct", workers=1):
    """S-matrix as a dict with rows, cols and a complex `matrix`.

    kind is "untwisted", "twisted" or "crossed"; for "crossed", `type` is the
    finite type and `order` the order of the diagram automorphism.
    """
    return _core.smatrix(kind, type, level, order, via, workers)


def fusion(type, level):
    return json.loads(_core.fusion(type, level))


def twisted_fusion(type, order, level):
    return json.loads(_core.twisted_fusion(type, order, level))


def rank(spec, tol=1e-6):
    """Rank of twisted conformal blocks; `spec` is a dict or JSON text (see docs/coverspec.schema.json)."""
    return _core.rank(_spec_text(spec), tol)


def verify_factorization(spec, edge_class):
    return _core.verify_factorization(_spec_text(spec), edge_class)


def verify_propagation(spec):
    return _core.verify_propagation(_spec_text(spec))
