"""Exact symbolic engine for braided SU_q(2) at complex q."""

from .scalar import Context, Scalar, current, numeric_eval, using

__version__ = "0.1.0"

__all__ = ["Context", "Scalar", "current", "numeric_eval", "using"]
