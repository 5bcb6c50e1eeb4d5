"""Exact series for hypergeometric tau functions and solvable two-matrix models."""

from .combinatorics import (
    DomainError,
    IntegerLatticeFunction,
    Partition,
    PoleError,
    StrictPartition,
    content_product,
    enumerate_partitions,
    enumerate_strict_partitions,
)
from .exactalg import ComplexRational, SingularityError, determinant, pfaffian
from .symfunc import PowerSumSeries, Specialization, projective_schur, schur

__version__ = "0.1.0"

__all__ = [
    "ComplexRational",
    "DomainError",
    "IntegerLatticeFunction",
    "Partition",
    "PoleError",
    "PowerSumSeries",
    "SingularityError",
    "Specialization",
    "StrictPartition",
    "content_product",
    "determinant",
    "enumerate_partitions",
    "enumerate_strict_partitions",
    "pfaffian",
    "projective_schur",
    "schur",
]
