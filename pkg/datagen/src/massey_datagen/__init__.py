"""Massey pairing record generation for imaginary quadratic fields.

The pipeline takes negative fundamental discriminants whose class group
has 3-rank exactly 2, drives a computer-algebra backend through a
three-step pairing computation, and emits one CSV row per field in the
format consumed by the classification tool.  A native binary-quadratic-
form implementation provides the 3-rank screen without any backend.
"""

from .forms import class_group_invariants, three_rank, screen_range
from .backend import Backend, BackendError, BackendUnavailable
from .gp import GpBackend
from .pipeline import (BasisChoice, FieldJob, MASSEY_CSV_HEADER,
                       generate_record, JobLog, read_discriminants,
                       run_batch, write_records_csv)

__all__ = [
    "class_group_invariants", "three_rank", "screen_range",
    "Backend", "BackendError", "BackendUnavailable", "GpBackend",
    "BasisChoice", "FieldJob", "MASSEY_CSV_HEADER", "generate_record",
    "JobLog", "read_discriminants", "run_batch", "write_records_csv",
]
