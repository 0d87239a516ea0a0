import json

import numpy as np
import pytest

from grasstensor import fixtures
from grasstensor.errors import DimensionError, GenericityError, ParseError, ProfileError
from grasstensor.exact_linalg import RationalMatrix, hstack, random_invertible
from grasstensor.geometry import (
    DimensionInvariants,
    ProjectionSetup,
    canonical_matrix,
    canonical_setup,
    canonicalize,
    check_genericity,
    generate_generic_setup,
    nongeneric_example,
)
from grasstensor.sweep import valid_dims

from reference import TABLE, WORKED_TRANSPOSES


@pytest.mark.parametrize("row", TABLE, ids=lambda r: f"k{r[0]}")
def test_invariants_match_table(row):
    k, h, a, i, js, dims, _ = row
    inv = DimensionInvariants.from_dims(k, h, a)
    assert inv.i == i and inv.j_rs == js and inv.n == dims


def test_invariants_identity_over_grid():
    for k, h, a in valid_dims(9, generic_only=False):
        inv = DimensionInvariants.from_dims(k, h, a)
        assert inv.i + sum(inv.j_rs) == k + 1
        assert inv.j(1, 2) == k - h[2] and inv.j(3, 2) == k - h[0]


@pytest.mark.parametrize(
    "k, h, a, exc",
    [(7, (6, 4, 4), (3, 3, 3), ProfileError), (5, (2, 4, 4), (3, 1, 2), ProfileError), (4, (4, 2, 2), (2, 2, 1), DimensionError)],
)
def test_invalid_dimensions(k, h, a, exc):
    with pytest.raises(exc):
        DimensionInvariants.from_dims(k, h, a)


def test_canonical_matrix_shape_and_pattern():
    inv = DimensionInvariants.from_dims(7, (6, 4, 4), (3, 3, 2))
    phi = canonical_matrix(inv).array
    assert phi.shape == (8, 17)
    assert all(sum(1 for v in col if v != 0) == 1 for col in phi.T)
    # every ambient row is hit by exactly the blocks that share its band
    counts = [sum(1 for v in row if v != 0) for row in phi]
    assert counts == [3, 2, 2, 2, 2, 2, 2, 2]


def test_worked_setup_is_generic_with_expected_intersections():
    setup = ProjectionSetup.from_transposes(4, WORKED_TRANSPOSES, (2, 2, 1))
    verdict = check_genericity(setup)
    assert verdict
    assert verdict.intersection_dims == {"L1∩L2": 2, "L1∩L3": 2, "L2∩L3": 1, "L1∩L2∩L3": 0}


def _assert_canonical(setup):
    ct = canonicalize(setup)
    got = hstack([(h @ p @ ct.K).T for h, p in zip(ct.H, setup.projections)])
    assert got == canonical_matrix(ct.invariants)
    return ct


@pytest.mark.parametrize("dims", [(4, (3, 2, 2), (2, 2, 1)), (5, (2, 4, 4), (2, 2, 2)), (6, (5, 4, 3), (3, 2, 2))])
def test_canonicalize_random_generic_setups(dims, rng):
    setup, attempts = generate_generic_setup(*dims, rng)
    assert attempts >= 1
    _assert_canonical(setup)


def test_canonicalize_fixed_point():
    setup = canonical_setup(DimensionInvariants.from_dims(7, (6, 4, 4), (3, 3, 2)))
    _assert_canonical(setup)


def test_nongeneric_family_refused():
    setup = nongeneric_example()
    verdict = check_genericity(setup)
    assert not verdict and verdict.violation is not None
    with pytest.raises(GenericityError):
        canonicalize(setup)
    with pytest.raises(GenericityError):
        canonical_matrix(DimensionInvariants.from_dims(4, (2, 2, 2), (2, 2, 1)))


def test_view_change_keeps_genericity(rng):
    setup = fixtures.load("setup_k4_h322_a221")
    hs = tuple(random_invertible(hj + 1, rng) for hj in setup.h)
    k = random_invertible(setup.k + 1, rng)
    assert check_genericity(setup.transformed(hs, k))


def test_setup_json_round_trip_and_digest():
    setup = fixtures.load("setup_k4_h322_a221")
    again = ProjectionSetup.from_json(json.loads(json.dumps(setup.to_json())))
    assert again.digest() == setup.digest()
    assert again.stacked() == setup.stacked()


@pytest.mark.parametrize(
    "obj, exc",
    [
        ({"views": []}, ParseError),
        ({"k": 4, "views": [{"P": [[1]]}] * 2, "profile": [2, 2, 1]}, ParseError),
        ({"k": 4, "views": [{"P": "x"}] * 3, "profile": [2, 2, 1]}, ParseError),
        ({"k": 4, "views": [{"P": [[1, 2], [3]]}] * 3, "profile": [2, 2, 1]}, DimensionError),
        ({"k": 4, "views": [{"P": np.eye(3, 5, dtype=int).tolist()}] * 3, "profile": [2, 2, 2]}, ProfileError),
    ],
)
def test_setup_json_errors(obj, exc):
    with pytest.raises(exc):
        ProjectionSetup.from_json(obj)


def test_rank_deficient_camera_is_not_generic():
    p = RationalMatrix([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [1, 1, 0, 0, 0]])
    q = RationalMatrix(np.eye(3, 5, k=1, dtype=int).tolist())
    r = RationalMatrix(np.eye(3, 5, k=2, dtype=int).tolist())
    setup = ProjectionSetup(4, (p, q, r), fixtures.load("nongeneric_free").profile)
    assert not check_genericity(setup)
