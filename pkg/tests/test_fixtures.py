from dataclasses import replace

import numpy as np
import pytest

from conftest import FIXTURES_DIR
from project.libs.algebra import StructureTensor, check_axioms
from project.reporting import fixtures
from project.reporting.config import get_classifier_config
from project.reporting.documents import TensorDocument
from project.reporting.fixtures import (
    KINDS,
    MASK64,
    FixtureError,
    SplitMix64,
    generate,
    generate_tensor,
    random_basis_change,
    validate_seed,
)

SHIPPED = [
    ("r.json", "r"),
    ("c.json", "c"),
    ("h_standard.json", "h"),
    ("dual.json", "dual"),
    ("m2r.json", "m2r"),
    ("r3_componentwise.json", "rn-componentwise"),
    ("r_plus_c.json", "r-plus-c"),
    ("octonion.json", "octonion"),
    ("zero_algebra.json", "zero"),
]


def test_splitmix_reference_outputs():
    rng = SplitMix64(0)
    assert rng.next_u64() == 0xE220A8397B1DCDAF
    assert rng.next_u64() == 0x6E789E6AA1B965F4


def test_splitmix_floats_are_in_unit_interval():
    rng = SplitMix64(12345)
    values = [rng.next_float() for _ in range(1000)]
    assert all(0.0 <= v < 1.0 for v in values)
    assert all(-1.0 <= rng.uniform(-1.0, 1.0) < 1.0 for _ in range(1000))


def test_splitmix_is_deterministic():
    a, b = SplitMix64(2 ** 63 + 7), SplitMix64(2 ** 63 + 7)
    assert [a.next_u64() for _ in range(10)] == [b.next_u64() for _ in range(10)]


@pytest.mark.parametrize("seed", [-1, 2 ** 64, 1.5, True, "3"])
def test_invalid_seeds(seed):
    with pytest.raises(ValueError):
        validate_seed(seed)


def test_largest_seed_is_accepted():
    assert validate_seed(MASK64) == MASK64
    SplitMix64(MASK64).next_u64()


def test_random_basis_change_is_well_conditioned():
    limit = get_classifier_config().TWIST_MAX_CONDITION
    for n in (1, 2, 4):
        for seed in range(20):
            P = random_basis_change(n, SplitMix64(seed))
            assert P.shape == (n, n)
            assert np.linalg.cond(P) <= limit
            assert np.all(np.abs(P) <= 1.0)


def test_random_basis_change_gives_up(monkeypatch):
    strict = replace(get_classifier_config(), TWIST_MAX_CONDITION=0.5, TWIST_MAX_ATTEMPTS=5)
    monkeypatch.setattr(fixtures, "get_classifier_config", lambda: strict)
    with pytest.raises(FixtureError):
        random_basis_change(3, SplitMix64(0))


@pytest.mark.parametrize("kind", sorted(KINDS))
def test_every_kind_builds(kind):
    T = generate_tensor(kind, seed=1)
    assert isinstance(T, StructureTensor)
    assert T.provenance["generator"] == kind
    assert T.provenance["seed"] == 1
    assert TensorDocument.loads(generate(kind, seed=1).dumps()).to_tensor().dim == T.dim


@pytest.mark.parametrize("kind", ["twist-r", "twist-c", "twist-h"])
def test_twisted_kinds_are_deterministic(kind):
    assert generate(kind, seed=42).dumps() == generate(kind, seed=42).dumps()
    assert generate(kind, seed=42).dumps() != generate(kind, seed=43).dumps()
    T = generate_tensor(kind, seed=42)
    P = random_basis_change(T.dim, SplitMix64(42))
    np.testing.assert_array_equal(np.array(T.provenance["basis_change"]), P)
    assert check_axioms(T).associative


@pytest.mark.parametrize("name, kind", SHIPPED)
def test_shipped_fixtures_match_generator(name, kind):
    shipped = TensorDocument.load(str(FIXTURES_DIR / name))
    assert generate(kind).to_dict() == shipped.to_dict()


def test_componentwise_dimension():
    assert generate_tensor("rn-componentwise", dim=5).dim == 5
    one = generate_tensor("rn-componentwise", dim=1)
    assert one.unity_index == 0
    with pytest.raises(FixtureError):
        generate_tensor("rn-componentwise", dim=0)


def test_dim_only_for_componentwise():
    with pytest.raises(FixtureError):
        generate_tensor("h", dim=4)


def test_unknown_kind():
    with pytest.raises(FixtureError):
        generate_tensor("sedenion")


def test_octonion_table_is_documented():
    T = generate_tensor("octonion")
    assert T.provenance["triples"] == [list(t) for t in fixtures.OCTONION_TRIPLES]
    for a, b, c in fixtures.OCTONION_TRIPLES:
        assert T.constants[a, b, c] == 1.0
        assert T.constants[b, a, c] == -1.0
