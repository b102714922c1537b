import cmath

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from surfacekit.psl2c import Isometry

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def random_isometry(rng: np.random.Generator, scale: float = 1.0) -> Isometry:
    m = np.eye(2) + scale * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    return Isometry.from_array(m / np.sqrt(np.linalg.det(m)))


@st.composite
def isometries(draw, scale: float = 1.0):
    vals = [draw(st.floats(-scale, scale, allow_subnormal=False)) for _ in range(8)]
    m = np.eye(2) + np.array(vals[:4]).reshape(2, 2) + 1j * np.array(vals[4:]).reshape(2, 2)
    det = np.linalg.det(m)
    if abs(det) < 1e-3:
        m = m + 2 * np.eye(2)
        det = np.linalg.det(m)
    return Isometry.from_array(m / cmath.sqrt(det))


half_lengths = st.builds(
    complex, st.floats(1.0, 10.0), st.floats(-0.5, 0.5)
)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)
