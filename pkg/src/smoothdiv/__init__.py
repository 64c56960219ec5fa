"""Certified numerical checks of explicit bounds in the Dirichlet divisor problem and its logarithmic variant."""

from .ball import BallReal, PrecisionPolicy, Status, certify, check_inequality
from .cli import CLAIMS, run_claim
from .report import RangeSpec, Report, SamplingMode, VerificationRecord, emit

__all__ = [
    "BallReal",
    "CLAIMS",
    "PrecisionPolicy",
    "RangeSpec",
    "Report",
    "SamplingMode",
    "Status",
    "VerificationRecord",
    "certify",
    "check_inequality",
    "emit",
    "run_claim",
]
__version__ = "0.1.0"
