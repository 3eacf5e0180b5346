from __future__ import annotations

"""
Finite-dimensional real algebras given by structure constants.

A StructureTensor c defines e_i * e_j = sum_k c[i][j][k] e_k. Elements are coordinate vectors
(numpy arrays of length dim) over that basis. Every operation here is a pure function of the
tensor and its arguments.
"""

from dataclasses import dataclass, field
import logging
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from project.libs.linalg import (
    DEFAULT_TOLERANCE,
    NoSolution,
    RealPolynomial,
    Tolerance,
    as_matrix,
    dependency,
    max_abs,
    numerical_rank,
    solve_linear,
)
from project.reporting.config import get_classifier_config

logger = logging.getLogger("project.libs.algebra")

AlgebraElement = np.ndarray


class AlgebraError(Exception):
    """Base class for malformed tensors and misuse of algebra operations."""
    pass


class DimensionMismatch(AlgebraError):
    pass


class SingularBasis(AlgebraError):
    pass


class NoUnityError(AlgebraError):
    """Raised by operations that need a unity when the tensor has none."""
    pass


@dataclass(frozen=True)
class NoUnity:
    """Returned when the stacked unity system has no solution; residual is its least-squares defect."""
    residual: float


@dataclass(frozen=True)
class NotScalar:
    """Returned when an element is not a real multiple of the unity."""
    residual: float


@dataclass(frozen=True, eq=False)
class StructureTensor:
    """
    Structure constants of a real algebra.

    Attributes:
        constants: (n, n, n) array, read-only after construction.
        basis_names: One label per basis vector; defaults to e0..e{n-1}.
        unity_index: Basis slot holding the unity, if known. The identity slices are checked
            against tolerance and then stored exactly.
        provenance: Free-form metadata (generator, seed, basis change).
    """
    constants: np.ndarray
    basis_names: Tuple[str, ...] = ()
    unity_index: Optional[int] = None
    provenance: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        c = np.array(self.constants, dtype=float)
        if c.ndim != 3 or c.shape[0] == 0 or len(set(c.shape)) != 1:
            raise AlgebraError(f"Structure constants must have shape (n, n, n) with n >= 1, got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise AlgebraError("Structure constants must be finite")
        n = c.shape[0]
        max_dim = get_classifier_config().MAX_DIM
        if n > max_dim:
            raise AlgebraError(f"Dimension {n} exceeds the configured cap of {max_dim}")

        names = tuple(str(name) for name in self.basis_names) if self.basis_names else tuple(f"e{i}" for i in range(n))
        if len(names) != n:
            raise AlgebraError(f"Expected {n} basis names, got {len(names)}")

        if self.unity_index is not None:
            u = int(self.unity_index)
            if not 0 <= u < n:
                raise AlgebraError(f"unity_index {u} is outside 0..{n - 1}")
            identity = np.eye(n)
            defect = max(max_abs(c[u] - identity), max_abs(c[:, u, :] - identity))
            if defect > DEFAULT_TOLERANCE.bound(1.0 + max_abs(c)):
                raise AlgebraError(f"Basis vector {u} is not a two-sided unity (defect {defect:.3g})")
            c[u] = identity
            c[:, u, :] = identity
            object.__setattr__(self, "unity_index", u)

        c.setflags(write=False)
        object.__setattr__(self, "constants", c)
        object.__setattr__(self, "basis_names", names)
        object.__setattr__(self, "provenance", dict(self.provenance or {}))

    @property
    def dim(self) -> int:
        return self.constants.shape[0]

    @property
    def max_constant(self) -> float:
        return max_abs(self.constants)


@dataclass(frozen=True)
class AxiomReport:
    has_unity: bool
    associative: bool
    worst_assoc_residual: float
    witness_triple: Optional[Tuple[int, int, int]]
    unity: Optional[AlgebraElement] = None
    unity_residual: float = 0.0
    threshold: float = 0.0


def element(T: StructureTensor, coords) -> AlgebraElement:
    """Validate coordinates against T."""
    x = np.asarray(coords, dtype=float).reshape(-1)
    if x.shape[0] != T.dim:
        raise DimensionMismatch(f"Element has {x.shape[0]} coordinates, algebra has dimension {T.dim}")
    return x


def basis_vector(T: StructureTensor, index: int) -> AlgebraElement:
    e = np.zeros(T.dim)
    e[index] = 1.0
    return e


def multiply(T: StructureTensor, a, b) -> AlgebraElement:
    """(a*b)_k = sum_ij a_i b_j c[i][j][k]."""
    return np.einsum("i,j,ijk->k", element(T, a), element(T, b), T.constants)


def left_mul_matrix(T: StructureTensor, a) -> np.ndarray:
    """Matrix of x -> a*x."""
    return np.einsum("i,ijk->kj", element(T, a), T.constants)


def right_mul_matrix(T: StructureTensor, a) -> np.ndarray:
    """Matrix of x -> x*a."""
    return np.einsum("j,ijk->ki", element(T, a), T.constants)


def anticommutator(T: StructureTensor, x, y) -> AlgebraElement:
    return multiply(T, x, y) + multiply(T, y, x)


def find_unity(T: StructureTensor, tol: Optional[Tolerance] = None) -> Union[AlgebraElement, NoUnity]:
    """
    Solve u*e_i = e_i and e_i*u = e_i for every basis vector simultaneously.

    The two identity conditions are stacked into one (2n^2 x n) linear system.
    """
    tol = tol or DEFAULT_TOLERANCE
    c = T.constants
    n = T.dim
    # rows indexed (i, k): sum_a u_a c[a][i][k] and sum_b u_b c[i][b][k]
    left = c.transpose(1, 2, 0).reshape(n * n, n)
    right = c.transpose(0, 2, 1).reshape(n * n, n)
    target = np.eye(n).reshape(-1)
    solution = solve_linear(np.vstack([left, right]), np.concatenate([target, target]), tol)
    if isinstance(solution, NoSolution):
        logger.debug("No unity: stacked system residual %.3g", solution.residual)
        return NoUnity(residual=solution.residual)
    return solution


def unity_of(T: StructureTensor, tol: Optional[Tolerance] = None) -> Union[AlgebraElement, NoUnity]:
    """The marked unity axis when present, otherwise the solution of find_unity."""
    if T.unity_index is not None:
        return basis_vector(T, T.unity_index)
    return find_unity(T, tol)


def _require_unity(T: StructureTensor, unity, tol: Tolerance) -> AlgebraElement:
    if unity is not None:
        return element(T, unity)
    u = unity_of(T, tol)
    if isinstance(u, NoUnity):
        raise NoUnityError(f"Algebra has no unity (residual {u.residual:.3g})")
    return u


def check_axioms(T: StructureTensor, tol: Optional[Tolerance] = None) -> AxiomReport:
    """
    Exhaustive associativity scan over all basis triples plus unity detection.

    The reported triple maximises |(e_i e_j) e_k - e_i (e_j e_k)|; ties go to the
    lexicographically first triple. Associativity is judged against
    tol.bound((1 + max|c|)^2).
    """
    tol = tol or DEFAULT_TOLERANCE
    c = T.constants
    n = T.dim
    worst = -1.0
    worst_triple = (0, 0, 0)
    for i in range(n):
        # left[j, k] = (e_i e_j) e_k, right[j, k] = e_i (e_j e_k)
        left = np.einsum("jm,mkl->jkl", c[i], c)
        right = np.einsum("jkm,ml->jkl", c, c[i])
        block = np.linalg.norm(left - right, axis=2)
        flat = int(np.argmax(block))
        value = float(block.flat[flat])
        if value > worst:
            j, k = np.unravel_index(flat, block.shape)
            worst = value
            worst_triple = (i, int(j), int(k))

    threshold = tol.bound((1.0 + T.max_constant) ** 2)
    associative = worst <= threshold
    unity = unity_of(T, tol)
    has_unity = not isinstance(unity, NoUnity)
    report = AxiomReport(
        has_unity=has_unity,
        associative=associative,
        worst_assoc_residual=worst,
        witness_triple=None if associative else worst_triple,
        unity=unity if has_unity else None,
        unity_residual=0.0 if has_unity else unity.residual,
        threshold=threshold,
    )
    logger.debug(
        "Axioms for dim %d: unity=%s associative=%s worst=%.3g at %s",
        n, has_unity, associative, worst, worst_triple,
    )
    return report


def polynomial_at(T: StructureTensor, p: RealPolynomial, x, tol: Optional[Tolerance] = None,
                  unity: Optional[AlgebraElement] = None) -> AlgebraElement:
    """Horner evaluation of p at x, constants read as multiples of the unity."""
    tol = tol or DEFAULT_TOLERANCE
    u = _require_unity(T, unity, tol)
    x = element(T, x)
    acc = p.leading * u
    for coeff in reversed(p.coeffs[:-1]):
        acc = multiply(T, x, acc) + coeff * u
    return acc


def minimal_polynomial(T: StructureTensor, x, tol: Optional[Tolerance] = None,
                       unity: Optional[AlgebraElement] = None) -> RealPolynomial:
    """
    Monic polynomial of least degree annihilating x.

    Powers 1, x, x^2, ... are appended as columns until the first linear dependency
    appears under the linalg rank tolerance; its coefficients are read off the reduced
    echelon form.

    Raises:
        NoUnityError: if T has no unity.
    """
    tol = tol or DEFAULT_TOLERANCE
    u = _require_unity(T, unity, tol)
    x = element(T, x)
    powers = [u, x]
    for degree in range(1, T.dim + 1):
        relation = dependency(np.column_stack(powers), tol)
        if relation is not None:
            # supported on the first free column and the pivots before it
            free = int(np.flatnonzero(relation)[-1])
            poly = RealPolynomial(tuple(relation[: free + 1]))
            logger.debug("Minimal polynomial of degree %d: %s", poly.degree, poly)
            return poly
        powers.append(multiply(T, x, powers[-1]))
    # dim + 1 vectors in dimension dim always carry a dependency
    relation = dependency(np.column_stack(powers), tol)
    return RealPolynomial(tuple(relation))


def scalar_part_test(T: StructureTensor, x, tol: Optional[Tolerance] = None,
                     unity: Optional[AlgebraElement] = None,
                     scale: Optional[float] = None) -> Union[float, NotScalar]:
    """
    Return lambda when x = lambda * unity within tolerance, else NotScalar.

    lambda is the unity coordinate of x in the unity-adapted basis {u} plus the remaining
    basis vectors except the one where u is largest. The threshold is tol.bound(scale),
    scale defaulting to |x|.
    """
    tol = tol or DEFAULT_TOLERANCE
    u = _require_unity(T, unity, tol)
    x = element(T, x)
    s = int(np.argmax(np.abs(u)))
    lam = float(x[s] / u[s])
    residual = float(np.linalg.norm(x - lam * u))
    limit = tol.bound(float(np.linalg.norm(x)) if scale is None else scale)
    if residual <= limit:
        return lam
    return NotScalar(residual=residual)


def _is_permutation(P: np.ndarray) -> bool:
    return bool(
        np.all((P == 0.0) | (P == 1.0))
        and np.all(P.sum(axis=0) == 1.0)
        and np.all(P.sum(axis=1) == 1.0)
    )


def change_basis(T: StructureTensor, P, tol: Optional[Tolerance] = None) -> StructureTensor:
    """
    Express T in the basis f_i = sum_j P[j][i] e_j.

    The unity is transported along; it stays marked when it lands on a basis vector.
    The accumulated basis change is kept in provenance["basis_change"].

    Raises:
        DimensionMismatch: if P is not dim x dim.
        SingularBasis: if P fails the rank check.
    """
    tol = tol or DEFAULT_TOLERANCE
    P = as_matrix(P)
    n = T.dim
    if P.shape != (n, n):
        raise DimensionMismatch(f"Basis change must be {n}x{n}, got {P.shape[0]}x{P.shape[1]}")
    if numerical_rank(P, tol) < n:
        raise SingularBasis("Basis change matrix is singular")

    permutation = _is_permutation(P)
    Q = P.T.copy() if permutation else np.linalg.inv(P)
    constants = np.einsum("ia,jb,ijk,mk->abm", P, P, T.constants, Q)

    unity_index = None
    if T.unity_index is not None:
        q = Q[:, T.unity_index]
        t = int(np.argmax(np.abs(q)))
        if max_abs(q - np.eye(n)[t]) <= tol.bound(1.0):
            unity_index = t

    if permutation:
        names = tuple(T.basis_names[int(np.argmax(P[:, a]))] for a in range(n))
    else:
        names = tuple(f"f{a}" for a in range(n))

    provenance = dict(T.provenance)
    previous = provenance.get("basis_change")
    total = P if previous is None else np.asarray(previous, dtype=float) @ P
    provenance["basis_change"] = total.tolist()
    return StructureTensor(constants=constants, basis_names=names, unity_index=unity_index, provenance=provenance)


def transport(P, x) -> AlgebraElement:
    """Coordinates of x in the basis produced by change_basis(T, P)."""
    P = as_matrix(P)
    return np.linalg.solve(P, np.asarray(x, dtype=float).reshape(-1))


def normalize_unity(T: StructureTensor, tol: Optional[Tolerance] = None) -> Union[Tuple[StructureTensor, np.ndarray], NoUnity]:
    """
    Unity-adapted copy of T with the unity exactly at slot 0.

    The new basis is the unity followed by the old basis vectors, skipping the one on which the
    unity has its largest coordinate. Returns the new tensor and the basis change P.
    """
    tol = tol or DEFAULT_TOLERANCE
    n = T.dim
    if T.unity_index == 0:
        return T, np.eye(n)
    u = unity_of(T, tol)
    if isinstance(u, NoUnity):
        return u
    s = int(np.argmax(np.abs(u)))
    columns = [u] + [basis_vector(T, t) for t in range(n) if t != s]
    P = np.column_stack(columns)
    if T.unity_index is None and np.array_equal(u, basis_vector(T, 0)):
        return StructureTensor(T.constants, T.basis_names, 0, T.provenance), P
    normalized = change_basis(T, P, tol)
    if normalized.unity_index != 0:
        normalized = StructureTensor(normalized.constants, normalized.basis_names, 0, normalized.provenance)
    logger.debug("Moved unity to slot 0 (largest unity coordinate was slot %d)", s)
    return normalized, P
