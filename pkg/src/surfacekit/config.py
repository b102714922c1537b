"""Named numerical tolerances.

All thresholds used by the library live here so they can be overridden as a
profile (see :func:`use_profile`) rather than edited in place.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    det: float = 1e-12            # |det - 1| after normalization
    equality: float = 1e-10       # Isometry equality, relative to entry size
    loxodromic: float = 1e-10     # minimum log|eigenvalue| for a loxodromic
    endpoint: float = 1e-9        # distinct boundary points, relative
    intersect: float = 1e-12      # |Re| threshold declaring two axes intersecting
    relation: float = 1e-10       # gamma1 gamma2 gamma3 = id in quasi_distance
    roundtrip: float = 1e-9       # half-length and shear round trips
    foot: float = 1e-8            # A_+ = A_sigma A_- consistency
    futal_branch: float = 1e-6    # distinguishes sigma from sigma + i pi
    real_trace: float = 1e-8      # relative imaginary part of a Fuchsian trace
    mass: float = 1e-9            # equal total mass
    dedup: float = 1e-9           # quantization of boundary endpoints


_ACTIVE = [Tolerances()]

PROFILES = {
    "default": Tolerances(),
    "loose": Tolerances(equality=1e-8, relation=1e-8, roundtrip=1e-7, foot=1e-6),
    "strict": Tolerances(equality=1e-12, relation=1e-12, roundtrip=1e-11, foot=1e-10),
}


def tol() -> Tolerances:
    return _ACTIVE[-1]


@contextlib.contextmanager
def use_profile(profile: str | Tolerances = "default", **overrides):
    base = PROFILES[profile] if isinstance(profile, str) else profile
    _ACTIVE.append(replace(base, **overrides))
    try:
        yield _ACTIVE[-1]
    finally:
        _ACTIVE.pop()
