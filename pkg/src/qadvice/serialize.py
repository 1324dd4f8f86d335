"""Canonical JSON helpers shared by reports and the command line."""

from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np

ARTIFACT_VERSION = "0.1.0"


def rational(q) -> dict:
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator, "decimal": format_decimal(float(q))}


def format_decimal(x: float) -> str:
    """12 significant digits, as used in CSV output."""
    if math.isnan(x) or math.isinf(x):
        return str(x)
    return f"{x:.12g}"


def to_plain(obj):
    """Convert numpy scalars/arrays, fractions and tuples to JSON-ready values."""
    if isinstance(obj, Fraction):
        return rational(obj)
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        # normalize -0.0 and round away last-bit noise for stable output
        return 0.0 if x == 0 else float(f"{x:.15g}")
    if hasattr(obj, "to_json"):
        return to_plain(obj.to_json())
    return obj


def dumps(obj) -> str:
    return json.dumps(to_plain(obj), sort_keys=True, separators=(",", ":"), allow_nan=False)
