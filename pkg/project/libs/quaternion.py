from __future__ import annotations

"""
Reference arithmetic for the quaternions and their subalgebras R and C.

Quaternions are stored as four plain floats over the basis {1, i, j, k} with
i^2 = j^2 = k^2 = -1, ij = -ji = k, jk = -kj = i, ki = -ik = j.
"""

from dataclasses import dataclass
from enum import Enum
import math
from typing import Tuple, Union

import numpy as np

from project.libs.algebra import StructureTensor


class NotInvertible(Exception):
    """Raised when inverting the zero quaternion."""
    pass


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self) -> None:
        for name in ("w", "x", "y", "z"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"Quaternion coordinate {name} must be finite, got {value}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_vector(cls, coords) -> "Quaternion":
        values = [float(v) for v in np.asarray(coords, dtype=float).reshape(-1)]
        if len(values) > 4:
            raise ValueError(f"A quaternion has at most 4 coordinates, got {len(values)}")
        return cls(*values)

    def to_vector(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other: Union["Quaternion", float, int]) -> "Quaternion":
        if isinstance(other, Quaternion):
            return qmul(self, other)
        s = float(other)
        return Quaternion(s * self.w, s * self.x, s * self.y, s * self.z)

    def __rmul__(self, other: Union[float, int]) -> "Quaternion":
        s = float(other)
        return Quaternion(s * self.w, s * self.x, s * self.y, s * self.z)


ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)
BASIS: Tuple[Quaternion, ...] = (ONE, I, J, K)
BASIS_NAMES: Tuple[str, ...] = ("1", "i", "j", "k")


def qmul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product, the bilinear extension of the i, j, k table."""
    return Quaternion(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )


def conjugate(a: Quaternion) -> Quaternion:
    return Quaternion(a.w, -a.x, -a.y, -a.z)


def norm_sq(a: Quaternion) -> float:
    """Sum of squared coordinates; equals the scalar part of a * conjugate(a)."""
    return a.w * a.w + a.x * a.x + a.y * a.y + a.z * a.z


def inverse(a: Quaternion) -> Quaternion:
    """
    conjugate(a) / norm_sq(a).

    Raises:
        NotInvertible: if a is the zero quaternion.
    """
    scale = max(abs(a.w), abs(a.x), abs(a.y), abs(a.z))
    if scale == 0.0:
        raise NotInvertible("The zero quaternion has no inverse")
    # rescale first so norm_sq cannot underflow for tiny nonzero a
    b = a * (1.0 / scale)
    return conjugate(b) * (1.0 / (norm_sq(b) * scale))


class AlgebraLabel(str, Enum):
    """The three real associative division algebras."""
    R = "R"
    C = "C"
    H = "H"

    @property
    def dim(self) -> int:
        return {"R": 1, "C": 2, "H": 4}[self.value]

    @property
    def basis_names(self) -> Tuple[str, ...]:
        return BASIS_NAMES[: self.dim]


def structure_tensor_of(label: AlgebraLabel) -> StructureTensor:
    """
    Integer structure constants of R, C or H in the basis {1, i, j, k} truncated to the label's
    dimension, unity at slot 0.
    """
    label = AlgebraLabel(label)
    n = label.dim
    constants = np.zeros((n, n, n))
    for a in range(n):
        for b in range(n):
            product = qmul(BASIS[a], BASIS[b]).to_vector()
            constants[a, b, :] = product[:n]
    return StructureTensor(
        constants=constants,
        basis_names=label.basis_names,
        unity_index=0,
        provenance={"generator": label.value.lower()},
    )


def canonical_multiply(label: AlgebraLabel, a, b) -> np.ndarray:
    """Product of two coordinate vectors in R, C or H, computed by embedding into H."""
    label = AlgebraLabel(label)
    n = label.dim
    va = np.asarray(a, dtype=float).reshape(-1)
    vb = np.asarray(b, dtype=float).reshape(-1)
    if va.shape[0] != n or vb.shape[0] != n:
        raise ValueError(f"{label.value} elements have {n} coordinates, got {va.shape[0]} and {vb.shape[0]}")
    product = qmul(Quaternion.from_vector(va), Quaternion.from_vector(vb)).to_vector()
    return product[:n]
