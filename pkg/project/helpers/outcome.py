from __future__ import annotations

"""
Result values of the classifier: successes, failure witnesses and the intermediate
projection / V-space records.
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from project.libs.algebra import AlgebraElement, StructureTensor, multiply
from project.libs.quaternion import AlgebraLabel


@dataclass(frozen=True, eq=False)
class ZeroDivisor:
    """Unit-norm a, b with a*b numerically zero; residual = |a*b|."""
    a: AlgebraElement
    b: AlgebraElement
    residual: float

    kind = "ZeroDivisor"


@dataclass(frozen=True)
class NonAssociative:
    triple: Tuple[int, int, int]
    residual: float

    kind = "NonAssociative"


@dataclass(frozen=True)
class NoUnityWitness:
    residual: float

    kind = "NoUnity"


@dataclass(frozen=True, eq=False)
class NotAlgebraicStep:
    """A step of the construction that cannot hold in a division algebra, with diagnostics."""
    detail: str
    residual: float
    pair: Optional[Tuple[AlgebraElement, AlgebraElement]] = None

    kind = "NotAlgebraicStep"


Witness = Union[ZeroDivisor, NonAssociative, NoUnityWitness, NotAlgebraicStep]
WITNESS_TYPES = (ZeroDivisor, NonAssociative, NoUnityWitness, NotAlgebraicStep)


@dataclass(frozen=True, eq=False)
class Success:
    """
    Attributes:
        label: R, C or H.
        iso: Matrix sending input coordinates to coordinates over the canonical basis 1, i, j, k.
        residual: Largest homomorphism defect over basis pairs.
        frame: The computed 1, i, j, k (as many as the label has) in input coordinates.
    """
    label: AlgebraLabel
    iso: np.ndarray
    residual: float
    frame: Tuple[AlgebraElement, ...] = ()


@dataclass(frozen=True)
class Failure:
    witness: Witness


ClassificationOutcome = Union[Success, Failure]


@dataclass(frozen=True)
class RealElement:
    """Returned by project_to_V for x = value * unity."""
    value: float


@dataclass(frozen=True, eq=False)
class Projection:
    """v = x + alpha/2 * unity, an element squaring to a negative scalar."""
    v: AlgebraElement
    alpha: float


@dataclass(frozen=True, eq=False)
class VSpace:
    """
    The square-nonpositive part of an algebra.

    Attributes:
        ambient: The tensor the basis vectors live in.
        basis: Spanning elements of V in ambient coordinates.
        gram: gram[a][b] = -1/2 * scalar(basis[a] o basis[b]).
        unity: The ambient unity used for scalar tests.
    """
    ambient: StructureTensor
    basis: Tuple[AlgebraElement, ...]
    gram: np.ndarray
    unity: Optional[AlgebraElement] = None

    @property
    def dim(self) -> int:
        return len(self.basis)


def zero_divisor(T: StructureTensor, a, b) -> ZeroDivisor:
    """Scale a and b to unit Euclidean norm and record |a*b|."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ValueError("Zero-divisor factors must be nonzero")
    a = a / norm_a
    b = b / norm_b
    return ZeroDivisor(a=a, b=b, residual=float(np.linalg.norm(multiply(T, a, b))))
