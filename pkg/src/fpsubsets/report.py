"""Canonical JSON reports, stable digests and run manifests.

Canonical form: sorted keys, tuples/sets as (sorted) lists, complex
numbers as [re, im] pairs, exact rationals as "num/den" strings, and
integers above 2^53 as decimal strings so the digest is platform-stable.
Digests cover the result payload only; timings live in the manifest
outside the digest.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from fractions import Fraction

import numpy as np

from . import __version__

_BIG = 2**53


def canonicalize(obj):
    """Reduce an arbitrary report object to canonical JSON-ready form."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        v = int(obj)
        return str(v) if abs(v) >= _BIG else v
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return canonicalize(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): canonicalize(v) for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))}
    if isinstance(obj, (set, frozenset)):
        return [canonicalize(v) for v in sorted(obj)]
    if isinstance(obj, np.ndarray):
        return [canonicalize(v) for v in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [canonicalize(v) for v in obj]
    raise TypeError(f"cannot canonicalize {type(obj)!r}")


def canonical_json(obj) -> str:
    return json.dumps(canonicalize(obj), sort_keys=True, separators=(",", ":"))


def digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def manifest(config: dict, result, timings: dict) -> dict:
    """Assemble the run manifest; the digest depends on the result only."""
    return {
        "config": canonicalize(config),
        "version": __version__,
        "timings": canonicalize(timings),
        "result": canonicalize(result),
        "digest": digest(result),
    }
