from pathlib import Path

import numpy as np
import pytest

from project.libs.algebra import StructureTensor
from project.libs.quaternion import AlgebraLabel, structure_tensor_of
from project.reporting.documents import TensorDocument

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"
FIXTURE_FILES = sorted(p.name for p in FIXTURES_DIR.glob("*.json"))


def load_fixture(name: str) -> StructureTensor:
    return TensorDocument.load(str(FIXTURES_DIR / name)).to_tensor()


def brute_force_product(T: StructureTensor, a, b) -> np.ndarray:
    """Independent product by explicit loops over the structure constants."""
    n = T.dim
    out = np.zeros(n)
    for i in range(n):
        for j in range(n):
            if a[i] == 0.0 or b[j] == 0.0:
                continue
            for k in range(n):
                out[k] += a[i] * b[j] * T.constants[i, j, k]
    return out


@pytest.fixture
def quaternions() -> StructureTensor:
    return structure_tensor_of(AlgebraLabel.H)


@pytest.fixture
def complexes() -> StructureTensor:
    return structure_tensor_of(AlgebraLabel.C)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)
