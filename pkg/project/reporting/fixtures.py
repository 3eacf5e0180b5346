from __future__ import annotations

"""
Deterministic fixture tensors for the generate command.

Random draws come from SplitMix64 so a (kind, seed) pair produces the same file on every
platform. Twisted kinds apply a random basis change with bounded condition number and keep it
in provenance["basis_change"].
"""

import logging
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from project.libs.algebra import StructureTensor, change_basis
from project.libs.quaternion import AlgebraLabel, qmul, BASIS as QUATERNION_BASIS, structure_tensor_of
from project.reporting.config import get_classifier_config
from project.reporting.documents import TensorDocument

logger = logging.getLogger("project.reporting.fixtures")

MASK64 = (1 << 64) - 1

# e_a e_b = e_c, cyclically in (a, b, c), for each line of the Fano plane on 1..7
OCTONION_TRIPLES: Tuple[Tuple[int, int, int], ...] = (
    (1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 7), (5, 6, 1), (6, 7, 2), (7, 1, 3),
)


class FixtureError(Exception):
    pass


def validate_seed(seed) -> int:
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed <= MASK64:
        raise ValueError(f"Seed must be an integer in [0, 2^64), got {seed!r}")
    return seed


class SplitMix64:
    """
    64-bit SplitMix generator.

    state += 0x9E3779B97F4A7C15; z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    output z ^ (z >> 31), all arithmetic modulo 2^64.
    """

    def __init__(self, seed: int):
        self.state = validate_seed(seed)

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def uniform(self, low: float, high: float) -> float:
        return low + (high - low) * self.next_float()


def random_basis_change(n: int, rng: SplitMix64) -> np.ndarray:
    """
    Rejection-sample an n x n matrix with entries uniform in [-1, 1), filled row by row,
    until its 2-norm condition number is within the configured bound.
    """
    cfg = get_classifier_config()
    for attempt in range(1, cfg.TWIST_MAX_ATTEMPTS + 1):
        P = np.array([[rng.uniform(-1.0, 1.0) for _ in range(n)] for _ in range(n)])
        cond = np.linalg.cond(P)
        if np.isfinite(cond) and cond <= cfg.TWIST_MAX_CONDITION:
            logger.debug("Basis change accepted after %d attempts (condition %.3g)", attempt, cond)
            return P
    raise FixtureError(f"No basis change with condition <= {cfg.TWIST_MAX_CONDITION:g} in {cfg.TWIST_MAX_ATTEMPTS} attempts")


def _tensor(constants: np.ndarray, names, unity_index: Optional[int], provenance: Dict) -> StructureTensor:
    return StructureTensor(constants=constants, basis_names=tuple(names), unity_index=unity_index, provenance=provenance)


def _canonical(label: AlgebraLabel) -> Callable[[int, Optional[int]], StructureTensor]:
    def build(seed: int, dim: Optional[int]) -> StructureTensor:
        T = structure_tensor_of(label)
        return _tensor(T.constants, T.basis_names, 0, {"generator": label.value.lower(), "seed": seed})
    return build


def _twisted(label: AlgebraLabel) -> Callable[[int, Optional[int]], StructureTensor]:
    def build(seed: int, dim: Optional[int]) -> StructureTensor:
        base = _tensor(structure_tensor_of(label).constants, label.basis_names, 0, {})
        P = random_basis_change(label.dim, SplitMix64(seed))
        twisted = change_basis(base, P)
        provenance = {"generator": f"twist-{label.value.lower()}", "seed": seed, "basis_change": P.tolist()}
        return _tensor(twisted.constants, twisted.basis_names, twisted.unity_index, provenance)
    return build


def _m2r(seed: int, dim: Optional[int]) -> StructureTensor:
    # E_ab at index 2a + b; E_ab E_cd = delta_bc E_ad
    c = np.zeros((4, 4, 4))
    for a in range(2):
        for b in range(2):
            for d in range(2):
                c[2 * a + b, 2 * b + d, 2 * a + d] = 1.0
    return _tensor(c, ("E11", "E12", "E21", "E22"), None, {"generator": "m2r", "seed": seed})


def _dual(seed: int, dim: Optional[int]) -> StructureTensor:
    c = np.zeros((2, 2, 2))
    c[0, 0, 0] = 1.0
    c[0, 1, 1] = 1.0
    c[1, 0, 1] = 1.0
    return _tensor(c, ("1", "eps"), 0, {"generator": "dual", "seed": seed})


def _componentwise(seed: int, dim: Optional[int]) -> StructureTensor:
    n = 3 if dim is None else dim
    if n < 1:
        raise FixtureError(f"rn-componentwise needs dim >= 1, got {n}")
    c = np.zeros((n, n, n))
    for i in range(n):
        c[i, i, i] = 1.0
    return _tensor(c, tuple(f"e{i + 1}" for i in range(n)), 0 if n == 1 else None,
                   {"generator": "rn-componentwise", "seed": seed})


def _r_plus_c(seed: int, dim: Optional[int]) -> StructureTensor:
    # basis (1, 0), (0, 1), (0, i)
    c = np.zeros((3, 3, 3))
    c[0, 0, 0] = 1.0
    c[1, 1, 1] = 1.0
    c[1, 2, 2] = 1.0
    c[2, 1, 2] = 1.0
    c[2, 2, 1] = -1.0
    return _tensor(c, ("(1,0)", "(0,1)", "(0,i)"), None, {"generator": "r-plus-c", "seed": seed})


def _r_plus_h(seed: int, dim: Optional[int]) -> StructureTensor:
    # basis (1, 0), (0, 1), (0, i), (0, j), (0, k)
    c = np.zeros((5, 5, 5))
    c[0, 0, 0] = 1.0
    for a in range(4):
        for b in range(4):
            c[1 + a, 1 + b, 1:] = qmul(QUATERNION_BASIS[a], QUATERNION_BASIS[b]).to_vector()
    return _tensor(c, ("(1,0)", "(0,1)", "(0,i)", "(0,j)", "(0,k)"), None, {"generator": "r-plus-h", "seed": seed})


def _octonion(seed: int, dim: Optional[int]) -> StructureTensor:
    c = np.zeros((8, 8, 8))
    for i in range(8):
        c[0, i, i] = 1.0
        c[i, 0, i] = 1.0
    for i in range(1, 8):
        c[i, i, 0] = -1.0
    for a, b, d in OCTONION_TRIPLES:
        for x, y, z in ((a, b, d), (b, d, a), (d, a, b)):
            c[x, y, z] = 1.0
            c[y, x, z] = -1.0
    provenance = {
        "generator": "octonion",
        "seed": seed,
        "table": "e0 = 1, e_i^2 = -1; e_a e_b = e_c = -e_b e_a cyclically for each listed triple",
        "triples": [list(t) for t in OCTONION_TRIPLES],
    }
    return _tensor(c, tuple(f"e{i}" for i in range(8)), 0, provenance)


def _zero(seed: int, dim: Optional[int]) -> StructureTensor:
    return _tensor(np.zeros((2, 2, 2)), ("e0", "e1"), None, {"generator": "zero", "seed": seed})


KINDS: Dict[str, Callable[[int, Optional[int]], StructureTensor]] = {
    "r": _canonical(AlgebraLabel.R),
    "c": _canonical(AlgebraLabel.C),
    "h": _canonical(AlgebraLabel.H),
    "twist-r": _twisted(AlgebraLabel.R),
    "twist-c": _twisted(AlgebraLabel.C),
    "twist-h": _twisted(AlgebraLabel.H),
    "m2r": _m2r,
    "dual": _dual,
    "rn-componentwise": _componentwise,
    "r-plus-c": _r_plus_c,
    "r-plus-h": _r_plus_h,
    "octonion": _octonion,
    "zero": _zero,
}


def generate_tensor(kind: str, seed: int = 0, dim: Optional[int] = None) -> StructureTensor:
    """
    Build the fixture tensor of the given kind.

    Raises:
        FixtureError: for an unknown kind, or dim given to a kind other than rn-componentwise.
        ValueError: for a seed outside [0, 2^64).
    """
    if kind not in KINDS:
        raise FixtureError(f"Unknown fixture kind {kind!r}")
    if dim is not None and kind != "rn-componentwise":
        raise FixtureError(f"--dim only applies to rn-componentwise, not {kind}")
    validate_seed(seed)
    return KINDS[kind](seed, dim)


def generate(kind: str, seed: int = 0, dim: Optional[int] = None) -> TensorDocument:
    return TensorDocument.from_tensor(generate_tensor(kind, seed, dim))
