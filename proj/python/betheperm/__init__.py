"""Exact permanents, lifting averages, free-energy limit values, and
fundamental-cone checks for binary matrices."""

from betheperm._core import (
    __version__,
    awgnc_pseudo_weight,
    bethe_perm_vector,
    bethe_perm_vector_degree,
    bethe_permanent,
    cofactor_inequality,
    degree_bethe_permanent,
    expand_exponents,
    in_fundamental_cone,
    min_pseudo_weight,
    parse_dense,
    perm_vector,
    permanent,
    q,
    q2_closed,
    serialize_dense,
    t3,
    t3_closed,
    that3,
    that3_closed,
)

__all__ = [
    "__version__",
    "awgnc_pseudo_weight",
    "bethe_perm_vector",
    "bethe_perm_vector_degree",
    "bethe_permanent",
    "cofactor_inequality",
    "degree_bethe_permanent",
    "expand_exponents",
    "in_fundamental_cone",
    "min_pseudo_weight",
    "parse_dense",
    "perm_vector",
    "permanent",
    "q",
    "q2_closed",
    "serialize_dense",
    "t3",
    "t3_closed",
    "that3",
    "that3_closed",
]
