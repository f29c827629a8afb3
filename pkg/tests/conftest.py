import math

import numpy as np
import pytest

from qincompat import MeasurementTuple

PAULI = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]


@pytest.fixture
def pauli():
    return MeasurementTuple.from_vectors(PAULI)


@pytest.fixture
def pauli_scaled(pauli):
    return pauli.scaled(1.0 / math.sqrt(3.0))


@pytest.fixture
def ortho(pauli):
    return pauli.scaled(1.0 / math.sqrt(2.0))


def random_rotation(rng):
    """Haar-ish rotation from the QR decomposition of a Gaussian matrix."""
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q *= np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
