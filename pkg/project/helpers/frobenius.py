from __future__ import annotations

"""
Constructive classification of real associative division algebras.

The classifier splits the algebra as R + V where V holds the elements squaring to a
non-positive real, turns -1/2 u o v into an inner product on V, and assembles an explicit
frame 1, i, j, k. Every branch that cannot occur in a division algebra ends in a witness
that can be checked with a single multiplication.
"""

from dataclasses import replace
import logging
import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from project.helpers.outcome import (
    ClassificationOutcome,
    Failure,
    NoUnityWitness,
    NonAssociative,
    NotAlgebraicStep,
    Projection,
    RealElement,
    Success,
    VSpace,
    Witness,
    ZeroDivisor,
    zero_divisor,
)
from project.libs.algebra import (
    NoUnity,
    NoUnityError,
    NotScalar,
    StructureTensor,
    anticommutator,
    basis_vector,
    check_axioms,
    element,
    left_mul_matrix,
    minimal_polynomial,
    multiply,
    polynomial_at,
    scalar_part_test,
    unity_of,
)
from project.libs.linalg import (
    DEFAULT_TOLERANCE,
    ConvergenceFailure,
    NoComplement,
    NotPositiveDefinite,
    RealPolynomial,
    Tolerance,
    check_positive_definite,
    factor_linear_quadratic,
    numerical_rank,
    orthonormal_complement_unit,
    real_eigenpairs,
)
from project.libs.quaternion import AlgebraLabel, canonical_multiply

logger = logging.getLogger("project.helpers.frobenius")


class FrobeniusError(Exception):
    """Base class for classifier precondition errors."""
    pass


class EvenDimension(FrobeniusError):
    pass


class NotASuccess(FrobeniusError):
    pass


def _unity(T: StructureTensor, unity, tol: Tolerance) -> np.ndarray:
    if unity is not None:
        return element(T, unity)
    u = unity_of(T, tol)
    if isinstance(u, NoUnity):
        raise NoUnityError(f"Algebra has no unity (residual {u.residual:.3g})")
    return u


def _product_scale(T: StructureTensor, x: np.ndarray, y: np.ndarray) -> float:
    """Magnitude of a product x*y, used to scale scalar tests on it."""
    return (1.0 + T.max_constant) * (1.0 + float(np.linalg.norm(x))) * (1.0 + float(np.linalg.norm(y)))


def _split_square(T: StructureTensor, v: np.ndarray, tol: Tolerance, u: np.ndarray, alpha: float = 0.0
                  ) -> Union[Projection, ZeroDivisor, NotAlgebraicStep]:
    """
    Sort an element with scalar square into V, or turn it into a zero divisor.

    v^2 = -g^2 keeps v in V. v^2 = g^2 > 0 gives (v - g)(v + g) = 0, and v^2 = 0 gives v v = 0.
    The decision is taken on v / |v| so it does not depend on the size of v.
    """
    w = v / float(np.linalg.norm(v))
    square = multiply(T, w, w)
    scale = _product_scale(T, w, w)
    s = scalar_part_test(T, square, tol, unity=u, scale=scale)
    if isinstance(s, NotScalar):
        return NotAlgebraicStep(detail="square of a quadratic element is not a real multiple of the unity",
                                residual=s.residual, pair=(w, w))
    threshold = tol.bound(scale)
    # compare |w^2| itself, not its coordinate on the unity
    magnitude = s * float(np.linalg.norm(u))
    if magnitude < -threshold:
        return Projection(v=v, alpha=alpha)
    if magnitude > threshold:
        gamma = math.sqrt(s)
        return zero_divisor(T, w - gamma * u, w + gamma * u)
    return zero_divisor(T, w, w)


def project_to_V(T: StructureTensor, x, tol: Optional[Tolerance] = None, unity=None
                 ) -> Union[Projection, RealElement, Witness]:
    """
    Move a non-scalar x into V along the unity axis.

    With minimal polynomial X^2 + alpha X + beta the projection is x + alpha/2. A minimal
    polynomial of higher degree splits as g*h and g(x) h(x) = 0 is returned as a zero divisor.

    Raises:
        NoUnityError: if T has no unity.
    """
    tol = tol or DEFAULT_TOLERANCE
    u = _unity(T, unity, tol)
    x = element(T, x)

    lam = scalar_part_test(T, x, tol, unity=u)
    if not isinstance(lam, NotScalar):
        return RealElement(value=lam)

    m = minimal_polynomial(T, x, tol, unity=u)
    if m.degree == 1:
        return RealElement(value=-m.coeffs[0])
    if m.degree == 2:
        alpha = m.coeffs[1]
        return _split_square(T, x + 0.5 * alpha * u, tol, u, alpha=alpha)

    try:
        factors = _linear_quadratic_split(m, tol)
    except ConvergenceFailure as e:
        return NotAlgebraicStep(detail=f"minimal polynomial of degree {m.degree} did not split: {e}", residual=math.inf)
    g, h = factors
    gx = polynomial_at(T, g, x, tol, unity=u)
    hx = polynomial_at(T, h, x, tol, unity=u)
    if np.linalg.norm(gx) == 0.0 or np.linalg.norm(hx) == 0.0:
        return NotAlgebraicStep(detail=f"factor of the degree-{m.degree} minimal polynomial vanishes at x",
                                residual=0.0)
    logger.debug("Minimal polynomial of degree %d split as (%s)(%s)", m.degree, g, h)
    return zero_divisor(T, gx, hx)


def _linear_quadratic_split(m: RealPolynomial, tol: Tolerance) -> Tuple[RealPolynomial, RealPolynomial]:
    """First factor of m against the product of the others."""
    factors = factor_linear_quadratic(m, tol)
    if len(factors) < 2:
        raise ConvergenceFailure(f"degree-{m.degree} polynomial came back as a single factor")
    rest = factors[1]
    for f in factors[2:]:
        rest = rest * f
    return factors[0], rest


def build_V(T: StructureTensor, tol: Optional[Tolerance] = None, unity=None) -> Union[VSpace, Witness]:
    """
    Project every basis vector into V, pick a basis of the span and compute the Gram matrix
    of -1/2 u o v.

    A Gram matrix that fails to be positive definite yields a vector v in V with v^2 >= 0,
    which is split into a zero divisor.
    """
    tol = tol or DEFAULT_TOLERANCE
    u = _unity(T, unity, tol)
    n = T.dim

    images: List[np.ndarray] = []
    for idx in range(n):
        result = project_to_V(T, basis_vector(T, idx), tol, unity=u)
        if isinstance(result, RealElement):
            continue
        if not isinstance(result, Projection):
            logger.debug("Projection of basis vector %d produced %s", idx, result.kind)
            return result
        images.append(result.v)

    chosen: List[np.ndarray] = []
    for v in images:
        if numerical_rank(np.column_stack([u, *chosen, v]), tol) == len(chosen) + 2:
            chosen.append(v)
    if len(chosen) != n - 1:
        logger.warning("V has dimension %d in an algebra of dimension %d", len(chosen), n)
        return NotAlgebraicStep(detail=f"V has dimension {len(chosen)}, expected {n - 1}",
                                residual=float(n - 1 - len(chosen)))

    d = len(chosen)
    gram = np.zeros((d, d))
    for a in range(d):
        for b in range(a, d):
            va, vb = chosen[a], chosen[b]
            s = scalar_part_test(T, anticommutator(T, va, vb), tol, unity=u, scale=2.0 * _product_scale(T, va, vb))
            if isinstance(s, NotScalar):
                return NotAlgebraicStep(
                    detail=f"anticommutator of V basis vectors {a} and {b} is not a real multiple of the unity",
                    residual=s.residual,
                    pair=(va, vb),
                )
            gram[a, b] = gram[b, a] = -0.5 * s

    if d:
        try:
            check_positive_definite(gram, tol)
        except NotPositiveDefinite:
            return _indefinite_gram_witness(T, chosen, gram, tol, u)

    logger.debug("V has dimension %d", d)
    return VSpace(ambient=T, basis=tuple(chosen), gram=gram, unity=u)


def _indefinite_gram_witness(T: StructureTensor, basis: Sequence[np.ndarray], gram: np.ndarray,
                             tol: Tolerance, u: np.ndarray) -> Witness:
    pairs = real_eigenpairs(gram, tol)
    if pairs:
        lam, w = min(pairs, key=lambda pair: pair[0])
        v = np.column_stack(basis) @ w
        if np.linalg.norm(v) > 0.0:
            result = _split_square(T, v, tol, u)
            if not isinstance(result, Projection):
                return result
    return NotAlgebraicStep(detail="Gram matrix of V is not positive definite",
                            residual=float(min(np.linalg.eigvalsh(0.5 * (gram + gram.T)))))


def _relations_residual(T: StructureTensor, u, i, j, k) -> float:
    """Largest defect among i^2 = j^2 = k^2 = -1, ij = -ji = k, jk = -kj = i, ki = -ik = j."""
    def mul(a, b):
        return multiply(T, a, b)

    checks = [
        mul(i, i) + u, mul(j, j) + u, mul(k, k) + u,
        mul(i, j) - k, mul(j, i) + k,
        mul(j, k) - i, mul(k, j) + i,
        mul(k, i) - j, mul(i, k) + j,
    ]
    return max(float(np.linalg.norm(c)) for c in checks)


def _v_coordinates(V: VSpace, x: np.ndarray) -> np.ndarray:
    return np.linalg.lstsq(np.column_stack(V.basis), x, rcond=None)[0]


def eigen_zero_divisor(T: StructureTensor, candidates: Sequence[np.ndarray], tol: Optional[Tolerance] = None,
                       unity=None) -> Optional[ZeroDivisor]:
    """
    First zero divisor (d - lambda, w) from a real eigenpair (lambda, w) of x -> d x.

    Scalar candidates are skipped; returns None when every candidate is scalar or has no
    real eigenpair.
    """
    tol = tol or DEFAULT_TOLERANCE
    u = _unity(T, unity, tol)
    for d in candidates:
        d = element(T, d)
        if not isinstance(scalar_part_test(T, d, tol, unity=u), NotScalar):
            continue
        for lam, w in real_eigenpairs(left_mul_matrix(T, d), tol):
            a = d - lam * u
            if np.linalg.norm(a) <= tol.bound(float(np.linalg.norm(d))):
                continue
            logger.debug("Eigenvalue %.6g of left multiplication gives a zero divisor", lam)
            return zero_divisor(T, a, w)
    return None


def quaternion_overflow_witness(T: StructureTensor, V: VSpace, i, j, k, tol: Optional[Tolerance] = None) -> Witness:
    """
    With i, j, k in a V of dimension > 3, a unit e orthogonal to all three anticommutes with
    each, hence commutes with k = ij and e o k = 0 forces e k = 0.
    """
    tol = tol or DEFAULT_TOLERANCE
    coords = [_v_coordinates(V, element(T, x)) for x in (i, j, k)]
    e_coords = orthonormal_complement_unit(coords, V.gram, V.dim, tol)
    if isinstance(e_coords, NoComplement):
        return NotAlgebraicStep(detail="i, j, k already span V", residual=0.0)
    e = np.column_stack(V.basis) @ e_coords
    return zero_divisor(T, e, element(T, k))


def _two_dimensional_witness(T: StructureTensor, u, i, j, k, tol: Tolerance) -> Witness:
    # k = ij should leave span{1, i, j}; if it does not, its quadratic relation splits
    span = np.column_stack([u, i, j])
    coeffs, *_ = np.linalg.lstsq(span, k, rcond=None)
    span_residual = float(np.linalg.norm(span @ coeffs - k))
    result = project_to_V(T, k, tol, unity=u)
    if isinstance(result, ZeroDivisor):
        return result
    found = eigen_zero_divisor(T, (i, j, k), tol, unity=u)
    if found is not None:
        return found
    return NotAlgebraicStep(
        detail=f"V has dimension 2; k = ij has coordinates {np.round(coeffs, 12).tolist()} on 1, i, j",
        residual=span_residual,
    )


def _success(T: StructureTensor, label: AlgebraLabel, frame, tol: Tolerance) -> ClassificationOutcome:
    iso = np.linalg.inv(np.column_stack(frame))
    outcome = Success(label=label, iso=iso, residual=0.0, frame=tuple(frame))
    residual = verify_isomorphism(T, outcome, tol)
    limit = tol.bound((1.0 + float(np.max(np.abs(iso)))) ** 2 * (1.0 + T.max_constant) * T.dim)
    if not residual <= limit:
        logger.warning("Isomorphism onto %s has residual %.3g above %.3g", label.value, residual, limit)
        return Failure(NotAlgebraicStep(detail=f"isomorphism onto {label.value} fails the homomorphism check",
                                        residual=residual))
    logger.info("Classified %d-dimensional algebra as %s (residual %.3g)", T.dim, label.value, residual)
    return replace(outcome, residual=residual)


def classify(T: StructureTensor, tol: Optional[Tolerance] = None) -> ClassificationOutcome:
    """
    Classify T as R, C or H, or return a failure witness.

    Args:
        T: Structure constants of the algebra.
        tol: Tolerances for every numerical decision.

    Returns:
        Success with label, isomorphism matrix and homomorphism residual, or Failure.
    """
    tol = tol or DEFAULT_TOLERANCE
    report = check_axioms(T, tol)
    if not report.has_unity:
        return Failure(NoUnityWitness(residual=report.unity_residual))
    if not report.associative:
        return Failure(NonAssociative(triple=report.witness_triple, residual=report.worst_assoc_residual))
    u = report.unity

    V = build_V(T, tol, unity=u)
    if not isinstance(V, VSpace):
        return Failure(V)

    d = V.dim
    if d == 0:
        return _success(T, AlgebraLabel.R, (u,), tol)
    i_coords = np.zeros(d)
    i_coords[0] = 1.0 / math.sqrt(V.gram[0, 0])
    i = V.basis[0] * i_coords[0]
    if d == 1:
        return _success(T, AlgebraLabel.C, (u, i), tol)

    j_coords = orthonormal_complement_unit([i_coords], V.gram, d, tol)
    j = np.column_stack(V.basis) @ j_coords
    k = multiply(T, i, j)
    logger.debug("Frame chosen: i=%s j=%s k=%s", i, j, k)

    if d > 3:
        return Failure(quaternion_overflow_witness(T, V, i, j, k, tol))

    residual = _relations_residual(T, u, i, j, k)
    scale = (1.0 + T.max_constant) * (1.0 + float(np.linalg.norm(i) + np.linalg.norm(j) + np.linalg.norm(k))) ** 2
    independent = numerical_rank(np.column_stack([u, i, j, k]), tol) == 4
    if d == 3 and residual <= tol.bound(scale) and independent:
        return _success(T, AlgebraLabel.H, (u, i, j, k), tol)
    if d == 2:
        return Failure(_two_dimensional_witness(T, u, i, j, k, tol))

    found = eigen_zero_divisor(T, (i, j, k), tol, unity=u)
    if found is not None:
        return Failure(found)
    return Failure(NotAlgebraicStep(detail="quaternion relations fail for the constructed frame", residual=residual))


def odd_dimension_shortcut(T: StructureTensor, tol: Optional[Tolerance] = None) -> ClassificationOutcome:
    """
    Odd-dimensional algebras: every left multiplication has a real eigenvalue, so any
    non-scalar element yields a zero divisor and only R survives.

    Raises:
        EvenDimension: if T.dim is even.
    """
    tol = tol or DEFAULT_TOLERANCE
    if T.dim % 2 == 0:
        raise EvenDimension(f"The odd-dimension shortcut needs odd dimension, got {T.dim}")
    u = unity_of(T, tol)
    if isinstance(u, NoUnity):
        return Failure(NoUnityWitness(residual=u.residual))

    candidates = [basis_vector(T, idx) for idx in range(T.dim) if idx != T.unity_index]
    found = eigen_zero_divisor(T, candidates, tol, unity=u)
    if found is not None:
        return Failure(found)
    if T.dim == 1:
        return _success(T, AlgebraLabel.R, (u,), tol)
    return Failure(NotAlgebraicStep(detail="no left multiplication produced a real eigenvector", residual=math.inf))


def verify_isomorphism(T: StructureTensor, outcome: ClassificationOutcome, tol: Optional[Tolerance] = None) -> float:
    """
    Largest |iso(e_a e_b) - iso(e_a) iso(e_b)| over basis pairs, products on the right taken
    in the canonical R, C or H arithmetic. A rank-deficient iso gives infinity.

    Raises:
        NotASuccess: if outcome is a Failure.
    """
    tol = tol or DEFAULT_TOLERANCE
    if not isinstance(outcome, Success):
        raise NotASuccess("Only a successful classification carries an isomorphism")
    label = outcome.label
    iso = np.asarray(outcome.iso, dtype=float)
    n = T.dim
    if iso.shape != (label.dim, n) or numerical_rank(iso, tol) < n:
        return math.inf

    worst = 0.0
    for a in range(n):
        for b in range(n):
            lhs = iso @ T.constants[a, b]
            rhs = canonical_multiply(label, iso[:, a], iso[:, b])
            worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst
