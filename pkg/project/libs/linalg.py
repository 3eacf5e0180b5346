from __future__ import annotations

"""
Dense real linear algebra for small dimensions.

- kernel_basis / solve_linear / numerical_rank: row-echelon elimination with partial
  pivoting and one rank threshold shared by every caller.
- characteristic_polynomial / real_roots / factor_linear_quadratic: real polynomial tools.
- real_eigenpairs: real eigenvalues from the characteristic polynomial, eigenvectors from kernels.
- orthonormal_complement_unit: Gram-Schmidt against a subspace in an arbitrary inner product.

Matrices and vectors are plain float64 numpy arrays; as_matrix / as_vector validate and
freeze them.
"""

from dataclasses import dataclass
import logging
import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.polynomial.polynomial as npoly

from project.reporting.config import get_classifier_config

logger = logging.getLogger("project.libs.linalg")

Matrix = np.ndarray
Vector = np.ndarray


class LinalgError(Exception):
    """Base class for linear-algebra failures."""
    pass


class ConvergenceFailure(LinalgError):
    """Raised when polynomial splitting exhausts its iteration budget."""
    pass


class NotPositiveDefinite(LinalgError):
    """Raised when a Gram matrix is not symmetric positive definite."""
    pass


@dataclass(frozen=True)
class Tolerance:
    """
    Thresholds for treating residuals as zero.

    Attributes:
        eps: Absolute threshold.
        rel: Relative threshold, multiplied by the magnitude of the operands.
    """
    eps: float = 1e-9
    rel: float = 1e-9

    def __post_init__(self) -> None:
        if not (0.0 < self.eps < 1.0):
            raise ValueError(f"Tolerance.eps must lie in (0, 1), got {self.eps}")
        if not (0.0 < self.rel < 1.0):
            raise ValueError(f"Tolerance.rel must lie in (0, 1), got {self.rel}")

    def bound(self, scale: float = 0.0) -> float:
        """Residual threshold for operands of the given magnitude: eps + rel * scale."""
        return self.eps + self.rel * scale


def default_tolerance() -> Tolerance:
    cfg = get_classifier_config()
    return Tolerance(eps=cfg.DEFAULT_EPS, rel=cfg.DEFAULT_REL)


DEFAULT_TOLERANCE = default_tolerance()


@dataclass(frozen=True)
class NoSolution:
    """Returned by solve_linear when the least-squares residual is above threshold."""
    residual: float


@dataclass(frozen=True)
class NoComplement:
    """Returned by orthonormal_complement_unit when U already spans the space."""
    rank: int


def as_matrix(data) -> Matrix:
    """
    Copy data into a read-only float64 matrix.

    Raises:
        ValueError: if the input is not a non-empty 2-D array of finite numbers.
    """
    arr = np.array(data, dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"Expected a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("Matrix entries must be finite")
    arr.setflags(write=False)
    return arr


def as_vector(data) -> Vector:
    """
    Copy data into a read-only float64 vector.

    Raises:
        ValueError: if the input is not a non-empty 1-D array of finite numbers.
    """
    arr = np.array(data, dtype=float)
    if arr.ndim != 1 or arr.shape[0] == 0:
        raise ValueError(f"Expected a non-empty 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("Vector entries must be finite")
    arr.setflags(write=False)
    return arr


def max_abs(arr: np.ndarray) -> float:
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def _trim(coeffs: np.ndarray) -> np.ndarray:
    """Drop exact trailing zeros, keeping at least one coefficient."""
    c = np.asarray(coeffs, dtype=float)
    end = len(c)
    while end > 1 and c[end - 1] == 0.0:
        end -= 1
    return c[:end]


@dataclass(frozen=True)
class RealPolynomial:
    """
    Real polynomial with coefficients in ascending degree.

    The zero polynomial is rejected at construction; trailing zero coefficients are dropped.
    """
    coeffs: Tuple[float, ...]

    def __post_init__(self) -> None:
        values = _trim(np.array(self.coeffs, dtype=float).reshape(-1))
        if values.size == 0 or not np.any(values):
            raise ValueError("The zero polynomial is not a valid RealPolynomial")
        if not np.all(np.isfinite(values)):
            raise ValueError("Polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", tuple(float(v) for v in values))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> float:
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1.0

    def monic(self) -> "RealPolynomial":
        return RealPolynomial(tuple(c / self.leading for c in self.coeffs))

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=float)

    def derivative(self) -> "RealPolynomial":
        if self.degree == 0:
            raise ValueError("Derivative of a constant is the zero polynomial")
        return RealPolynomial(tuple(npoly.polyder(self.as_array())))

    def __call__(self, x):
        return npoly.polyval(x, self.as_array())

    def __mul__(self, other: "RealPolynomial") -> "RealPolynomial":
        return RealPolynomial(tuple(npoly.polymul(self.as_array(), other.as_array())))

    def __str__(self) -> str:
        terms: List[str] = []
        for power in range(self.degree, -1, -1):
            c = self.coeffs[power]
            if c == 0.0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if power == 0:
                body = f"{mag:g}"
            else:
                factor = "" if mag == 1.0 else f"{mag:g}"
                body = factor + ("X" if power == 1 else f"X^{power}")
            terms.append(f"{sign} {body}")
        text = " ".join(terms)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


# --------------- Elimination -----------------

def _row_echelon(A: np.ndarray, threshold: float, ncols: Optional[int] = None) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row-echelon form with partial pivoting over the first ncols columns.

    A candidate pivot whose magnitude is at most threshold counts as zero. Ties between
    candidate pivots go to the first (topmost) row.
    """
    R = np.array(A, dtype=float)
    rows, cols = R.shape
    ncols = cols if ncols is None else ncols
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(R[r:, c])))
        if abs(R[p, c]) <= threshold:
            R[r:, c] = 0.0
            continue
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] = R[r] / R[r, c]
        factors = R[:, c].copy()
        factors[r] = 0.0
        R -= np.outer(factors, R[r])
        R[:, c] = 0.0
        R[r, c] = 1.0
        pivots.append(c)
        r += 1
    return R, pivots


def _null_vectors(R: np.ndarray, pivots: List[int], cols: int) -> List[np.ndarray]:
    """One kernel vector per free column of a reduced echelon form, free entry set to 1."""
    pivot_set = set(pivots)
    vectors: List[np.ndarray] = []
    for free in range(cols):
        if free in pivot_set:
            continue
        v = np.zeros(cols)
        v[free] = 1.0
        for row, p in enumerate(pivots):
            v[p] = -R[row, free]
        vectors.append(v)
    return vectors


def _kernel(M: np.ndarray, threshold: float) -> List[Vector]:
    R, pivots = _row_echelon(M, threshold)
    vectors = _null_vectors(R, pivots, M.shape[1])
    if not vectors:
        return []
    q, _ = np.linalg.qr(np.column_stack(vectors))
    return [q[:, idx].copy() for idx in range(q.shape[1])]


def numerical_rank(M, tol: Optional[Tolerance] = None) -> int:
    """Number of pivots above tol.bound(max|M|) in row-echelon elimination."""
    tol = tol or DEFAULT_TOLERANCE
    A = as_matrix(M)
    _, pivots = _row_echelon(A, tol.bound(max_abs(A)))
    return len(pivots)


def dependency(M, tol: Optional[Tolerance] = None) -> Optional[Vector]:
    """
    First linear dependency among the columns of M, or None if they are independent.

    The returned vector has a 1 in the first free column and zeros in later free columns,
    so M @ v expresses that column through the preceding pivot columns.
    """
    tol = tol or DEFAULT_TOLERANCE
    A = as_matrix(M)
    R, pivots = _row_echelon(A, tol.bound(max_abs(A)))
    vectors = _null_vectors(R, pivots, A.shape[1])
    return vectors[0] if vectors else None


def kernel_basis(M, tol: Optional[Tolerance] = None) -> List[Vector]:
    """
    Orthonormal basis of the numerical kernel of M.

    Args:
        M: Matrix (rows x cols).
        tol: Rank tolerance; pivots at most tol.bound(max|M|) count as zero.

    Returns:
        cols - rank unit vectors, mutually orthogonal; empty when the kernel is trivial.
    """
    tol = tol or DEFAULT_TOLERANCE
    A = as_matrix(M)
    return _kernel(A, tol.bound(max_abs(A)))


def solve_linear(M, b, tol: Optional[Tolerance] = None) -> Union[Vector, NoSolution]:
    """
    Solve M x = b.

    Elimination on the augmented matrix gives a particular solution; if its residual is
    above tol.bound(|b|) the least-squares solution is tried as well. NoSolution is returned
    only when the least-squares residual exceeds the threshold too.
    """
    tol = tol or DEFAULT_TOLERANCE
    A = as_matrix(M)
    rhs = as_vector(b)
    if rhs.shape[0] != A.shape[0]:
        raise ValueError(f"Right-hand side has length {rhs.shape[0]}, matrix has {A.shape[0]} rows")
    limit = tol.bound(float(np.linalg.norm(rhs)))

    R, pivots = _row_echelon(np.column_stack([A, rhs]), tol.bound(max_abs(A)), ncols=A.shape[1])
    x = np.zeros(A.shape[1])
    for row, p in enumerate(pivots):
        x[p] = R[row, -1]
    residual = float(np.linalg.norm(A @ x - rhs))
    if residual <= limit:
        return x

    x_ls = np.linalg.lstsq(A, rhs, rcond=None)[0]
    residual_ls = float(np.linalg.norm(A @ x_ls - rhs))
    if residual_ls <= limit:
        return x_ls
    return NoSolution(residual=residual_ls)


# --------------- Polynomials -----------------

def characteristic_polynomial(M) -> RealPolynomial:
    """
    det(X I - M) by the Faddeev-LeVerrier recurrence; monic of degree rows.
    """
    A = as_matrix(M)
    n = A.shape[0]
    if A.shape[1] != n:
        raise ValueError(f"Characteristic polynomial needs a square matrix, got {A.shape}")
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    identity = np.eye(n)
    Mk = np.zeros((n, n))
    for k in range(1, n + 1):
        Mk = A @ Mk + coeffs[n - k + 1] * identity
        coeffs[n - k] = -np.trace(A @ Mk) / k
    return RealPolynomial(tuple(coeffs))


def _bisect(c: np.ndarray, a: float, b: float, fa: float, width: float) -> float:
    for _ in range(400):
        if b - a <= width:
            break
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = float(npoly.polyval(m, c))
        if fm == 0.0:
            return m
        if (fm > 0.0) == (fa > 0.0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def _isolate_roots(coeffs: np.ndarray, tol: Tolerance, width: float) -> List[float]:
    """
    Distinct real roots, ascending.

    Real roots of the derivative (found recursively) cut [-B, B] into monotone pieces.
    A cut point where |p| is within threshold is a root itself (this catches roots of even
    multiplicity); every other piece with a sign change is bisected.
    """
    c = _trim(coeffs)
    degree = len(c) - 1
    if degree < 1:
        return []
    if degree == 1:
        return [-c[0] / c[1]]

    bound = 1.0 + max_abs(c[:-1]) / abs(c[-1])
    critical = [x for x in _isolate_roots(npoly.polyder(c), tol, width) if -bound < x < bound]
    points = [-bound, *critical, bound]
    values = npoly.polyval(np.array(points), c)
    threshold = tol.bound(max_abs(c))

    inner = range(1, len(points) - 1)
    is_root = [idx in inner and abs(values[idx]) <= threshold for idx in range(len(points))]
    roots = [points[idx] for idx in range(len(points)) if is_root[idx]]
    for idx in range(len(points) - 1):
        if is_root[idx] or is_root[idx + 1]:
            continue
        fa, fb = float(values[idx]), float(values[idx + 1])
        if (fa > 0.0) != (fb > 0.0):
            roots.append(_bisect(c, points[idx], points[idx + 1], fa, width))
    return sorted(roots)


def real_roots(p: RealPolynomial, tol: Optional[Tolerance] = None) -> List[float]:
    """
    Distinct real roots of p in ascending order.

    Bracketing uses the Cauchy bound B = 1 + max|a_i| / |a_lead|; bisection stops at the
    configured width. Odd-degree input always yields at least one root.
    """
    tol = tol or DEFAULT_TOLERANCE
    if p.degree < 1:
        raise ValueError("real_roots needs a polynomial of degree >= 1")
    width = get_classifier_config().ROOT_BISECTION_WIDTH
    return _isolate_roots(p.as_array(), tol, width)


def _bairstow(a: np.ndarray, r: float, s: float, budget: int) -> Tuple[Optional[Tuple[float, float]], int]:
    """
    Bairstow iteration for a factor X^2 - r X - s of a (ascending, degree >= 3).

    Returns ((r, s), iterations) on convergence, (None, iterations) otherwise.
    """
    n = len(a) - 1
    scale = 1.0 + max_abs(a)
    step_eps = 16.0 * np.finfo(float).eps
    b = np.zeros(n + 1)
    cc = np.zeros(n + 1)
    for it in range(1, budget + 1):
        b[n] = a[n]
        b[n - 1] = a[n - 1] + r * b[n]
        for i in range(n - 2, -1, -1):
            b[i] = a[i] + r * b[i + 1] + s * b[i + 2]
        cc[n] = b[n]
        cc[n - 1] = b[n - 1] + r * cc[n]
        for i in range(n - 2, 0, -1):
            cc[i] = b[i] + r * cc[i + 1] + s * cc[i + 2]

        if abs(b[0]) + abs(b[1]) <= step_eps * scale:
            return (r, s), it
        det = cc[2] * cc[2] - cc[1] * cc[3]
        if det == 0.0 or not math.isfinite(det):
            return None, it
        dr = (b[0] * cc[3] - b[1] * cc[2]) / det
        ds = (b[1] * cc[1] - b[0] * cc[2]) / det
        r += dr
        s += ds
        if not (math.isfinite(r) and math.isfinite(s)):
            return None, it
        if abs(dr) + abs(ds) <= step_eps * (1.0 + abs(r) + abs(s)):
            return (r, s), it
    return None, budget


def _peel_quadratic(a: np.ndarray, budget: int) -> Tuple[np.ndarray, int]:
    """
    Monic quadratic factor of the monic polynomial a, which has no real roots.

    Starting pairs sit on the circle of radius |a_0|^(1/n) at fixed angles; the iteration
    budget is shared across starts.
    """
    n = len(a) - 1
    radius = abs(a[0]) ** (1.0 / n) if a[0] != 0.0 else 1.0
    used = 0
    for angle in (math.pi / 3, 2 * math.pi / 3, math.pi / 4, 3 * math.pi / 4,
                  math.pi / 6, 5 * math.pi / 6, math.pi / 2, math.pi / 8):
        r0 = 2.0 * radius * math.cos(angle)
        s0 = -radius * radius
        found, iterations = _bairstow(a, r0, s0, budget - used)
        used += iterations
        if found is not None:
            r, s = found
            return np.array([-s, -r, 1.0]), used
        if used >= budget:
            break
    raise ConvergenceFailure(f"Could not split a degree-{n} factor within {budget} iterations")


def _split_real_quadratic(quad: np.ndarray) -> List[np.ndarray]:
    """Split X^2 + bX + c into linear factors when its discriminant is non-negative."""
    c0, c1 = quad[0], quad[1]
    disc = c1 * c1 - 4.0 * c0
    if disc < 0.0:
        return [quad]
    root = math.sqrt(disc)
    # numerically stable pair
    big = -0.5 * (c1 + math.copysign(root, c1))
    if big == 0.0:
        return [np.array([0.0, 1.0]), np.array([0.0, 1.0])]
    return [np.array([-big, 1.0]), np.array([-c0 / big, 1.0])]


def factor_linear_quadratic(p: RealPolynomial, tol: Optional[Tolerance] = None) -> List[RealPolynomial]:
    """
    Split p into monic linear factors and monic quadratics with negative discriminant.

    Real roots are deflated one at a time by synthetic division; once no real root remains,
    quadratic factors are peeled by Bairstow iteration.

    Returns:
        Factors whose product, times p.leading, reproduces p.

    Raises:
        ConvergenceFailure: if the iteration budget runs out.
    """
    tol = tol or DEFAULT_TOLERANCE
    if p.degree < 1:
        raise ValueError("factor_linear_quadratic needs a polynomial of degree >= 1")
    cfg = get_classifier_config()
    budget = cfg.FACTOR_ITERATION_BUDGET
    width = cfg.ROOT_BISECTION_WIDTH

    remaining = p.as_array() / p.leading
    factors: List[np.ndarray] = []
    used = 0
    while len(remaining) - 1 >= 1:
        degree = len(remaining) - 1
        if degree == 1:
            factors.append(remaining)
            break
        roots = _isolate_roots(remaining, tol, width)
        if roots:
            linear = np.array([-roots[0], 1.0])
            quotient, _ = npoly.polydiv(remaining, linear)
            factors.append(linear)
            remaining = _trim(quotient)
            continue
        if degree == 2:
            factors.extend(_split_real_quadratic(remaining))
            break
        quad, iterations = _peel_quadratic(remaining, budget - used)
        used += iterations
        quotient, _ = npoly.polydiv(remaining, quad)
        factors.extend(_split_real_quadratic(quad))
        remaining = _trim(quotient)

    logger.debug("Factored degree-%d polynomial into %d factors", p.degree, len(factors))
    return [RealPolynomial(tuple(f)) for f in factors]


# --------------- Eigenpairs -----------------

def _refine_eigenpair(A: np.ndarray, lam: float, threshold: float, steps: int = 12) -> Optional[Tuple[float, Vector]]:
    """Inverse iteration at a fixed shift, eigenvalue re-read as the Rayleigh quotient."""
    n = A.shape[0]
    identity = np.eye(n)
    shifted = A - lam * identity
    v = np.ones(n) / math.sqrt(n)
    for _ in range(steps):
        try:
            x = np.linalg.solve(shifted, v)
        except np.linalg.LinAlgError:
            x = np.linalg.solve(shifted + threshold * identity, v)
        norm = float(np.linalg.norm(x))
        if not math.isfinite(norm) or norm == 0.0:
            return None
        v = x / norm
        estimate = float(v @ A @ v)
        if float(np.linalg.norm(A @ v - estimate * v)) <= threshold:
            return estimate, v
    return None


def real_eigenpairs(M, tol: Optional[Tolerance] = None) -> List[Tuple[float, Vector]]:
    """
    Real eigenpairs of a square matrix.

    Eigenvalues are the real roots of the characteristic polynomial; for each one the
    eigenvectors are kernel_basis(M - lambda I) at rank threshold tol.bound(max|M|). Every
    vector of the eigenspace basis is returned as its own pair.
    """
    tol = tol or DEFAULT_TOLERANCE
    A = as_matrix(M)
    n = A.shape[0]
    if A.shape[1] != n:
        raise ValueError(f"Eigenpairs need a square matrix, got {A.shape}")
    threshold = tol.bound(max_abs(A))
    pairs: List[Tuple[float, Vector]] = []
    for lam in real_roots(characteristic_polynomial(A), tol):
        vectors = _kernel(A - lam * np.eye(n), threshold)
        if not vectors:
            refined = _refine_eigenpair(A, lam, threshold)
            if refined is None:
                logger.warning("No eigenvector found for eigenvalue %.6g at threshold %.3g", lam, threshold)
                continue
            logger.debug("Eigenvector for %.6g recovered by inverse iteration", lam)
            lam, v = refined
            vectors = [v]
        pairs.extend((float(lam), v) for v in vectors)
    return pairs


# --------------- Inner-product spaces -----------------

def check_positive_definite(gram, tol: Optional[Tolerance] = None) -> Matrix:
    """
    Validate a Gram matrix and return it as a Matrix.

    Raises:
        NotPositiveDefinite: if it is not symmetric within tolerance or Cholesky fails.
    """
    tol = tol or DEFAULT_TOLERANCE
    G = as_matrix(gram)
    if G.shape[0] != G.shape[1]:
        raise NotPositiveDefinite(f"Gram matrix must be square, got {G.shape}")
    if max_abs(G - G.T) > tol.bound(max_abs(G)):
        raise NotPositiveDefinite("Gram matrix is not symmetric")
    try:
        np.linalg.cholesky(0.5 * (G + G.T))
    except np.linalg.LinAlgError as e:
        raise NotPositiveDefinite("Gram matrix is not positive definite") from e
    return G


def orthonormal_complement_unit(
    U: Sequence[Vector],
    gram,
    dim: int,
    tol: Optional[Tolerance] = None,
) -> Union[Vector, NoComplement]:
    """
    Unit vector orthogonal to every vector of U in the inner product <x|y> = x^T G y.

    U is orthonormalised by Gram-Schmidt (two passes); the ambient coordinate vectors are
    then projected off it and the longest residual is normalised. Ties go to the lowest
    coordinate index.

    Returns:
        The unit vector, or NoComplement when U spans the whole space.
    """
    tol = tol or DEFAULT_TOLERANCE
    G = check_positive_definite(gram, tol)
    if G.shape[0] != dim:
        raise ValueError(f"Gram matrix is {G.shape[0]}x{G.shape[0]}, expected dimension {dim}")

    def inner(x: np.ndarray, y: np.ndarray) -> float:
        return float(x @ G @ y)

    frame: List[np.ndarray] = []

    def project_out(x: np.ndarray) -> np.ndarray:
        w = np.array(x, dtype=float)
        for _ in range(2):
            for f in frame:
                w = w - inner(f, w) * f
        return w

    for u in U:
        vec = np.array(u, dtype=float).reshape(-1)
        if vec.shape[0] != dim:
            raise ValueError(f"Vector of length {vec.shape[0]} in a {dim}-dimensional space")
        w = project_out(vec)
        norm = math.sqrt(max(inner(w, w), 0.0))
        if norm > tol.bound(math.sqrt(max(inner(vec, vec), 0.0))):
            frame.append(w / norm)

    if len(frame) >= dim:
        return NoComplement(rank=len(frame))

    best: Optional[np.ndarray] = None
    best_norm = 0.0
    for idx in range(dim):
        axis = np.zeros(dim)
        axis[idx] = 1.0
        w = project_out(axis)
        norm = math.sqrt(max(inner(w, w), 0.0))
        if norm > best_norm:
            best, best_norm = w, norm

    if best is None or best_norm <= tol.eps:
        return NoComplement(rank=len(frame))
    return best / best_norm
