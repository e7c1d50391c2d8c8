"""Exact k-regular partition numbers and verified inequalities between them."""

from .arith import (
    INF,
    PartitionTable,
    brute_force_count,
    build_table_recurrence,
    build_table_series,
    g_k,
    sigma,
)
from .bo import DeltaSign, ExceptionReport, Pair, VerificationParams, delta, enumerate_exceptions
from .cache import get_table, load_table, save_table
from .logconc import enumerate_failures, logconc_defect

__all__ = [
    "INF",
    "DeltaSign",
    "ExceptionReport",
    "Pair",
    "PartitionTable",
    "VerificationParams",
    "brute_force_count",
    "build_table_recurrence",
    "build_table_series",
    "delta",
    "enumerate_exceptions",
    "enumerate_failures",
    "g_k",
    "get_table",
    "load_table",
    "logconc_defect",
    "save_table",
    "sigma",
]
