import numpy as np
import pytest

SZ = np.diag([1.0, -1.0]).astype(complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
I2 = np.eye(2, dtype=complex)
PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
BELL = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def bell_pair():
    return np.kron(SZ, I2), np.kron(I2, SZ), BELL
