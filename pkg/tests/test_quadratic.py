import numpy as np
import pytest

from volterra import (
    BoundViolation,
    NotSkew,
    apply,
    l1_distance,
    load_matrix,
    make_point,
    pair_condition_value,
    quadratic_operator,
    save_matrix,
    symmetry_defect_witness,
    validate_matrix,
    vertex,
)
from helpers import (
    linear_operator_from_cells,
    rand_defective_cells,
    rand_point,
    rand_skew_operator,
    rand_skew_triples,
)


def test_validate_accepts_exact_skew_pair():
    m = validate_matrix([(1, 2, 0.5), (2, 1, -0.5)])
    assert m.coefficient(1, 2) == 0.5
    assert m.coefficient(2, 1) == -0.5
    assert m.dimension == 2


def test_validate_infers_missing_orientation():
    m = validate_matrix([(2, 1, -0.5)])
    assert m.coefficient(1, 2) == 0.5


def test_validate_rejects_symmetric_pair():
    with pytest.raises(NotSkew) as info:
        validate_matrix([(1, 2, 0.5), (2, 1, 0.5)])
    assert info.value.pair == (1, 2)


def test_validate_rejects_bound_violation():
    with pytest.raises(BoundViolation) as info:
        validate_matrix([(1, 2, 1.5), (2, 1, -1.5)])
    assert info.value.pair == (1, 2)


def test_validate_rejects_nonzero_diagonal():
    with pytest.raises(NotSkew) as info:
        validate_matrix([(3, 3, 0.2)])
    assert info.value.pair == (3, 3)


def test_validate_accepts_dense_array():
    dense = np.array([[0.0, 0.7], [-0.7, 0.0]])
    m = validate_matrix(dense)
    assert m.coefficient(1, 2) == 0.7


def test_validate_rejects_conflicting_duplicates():
    with pytest.raises(ValueError):
        validate_matrix([(1, 2, 0.5), (1, 2, 0.4)])


def test_quadratic_apply_frozen_values():
    op = quadratic_operator(validate_matrix([(1, 2, 1.0)]))
    y = apply(op, make_point([(1, 0.5), (2, 0.5)]))
    assert y.mass(1) == pytest.approx(0.75, abs=1e-15)
    assert y.mass(2) == pytest.approx(0.25, abs=1e-15)


def test_quadratic_vertices_fixed_exactly():
    rng = np.random.default_rng(0)
    _, op = rand_skew_operator(rng, 6)
    for n in range(1, 9):
        assert l1_distance(apply(op, vertex(n)), vertex(n)) == 0.0


def test_generating_map_bounded_by_one():
    rng = np.random.default_rng(1)
    matrix, op = rand_skew_operator(rng, 8)
    for _ in range(200):
        x = rand_point(rng, range(1, 9))
        for k in range(1, 9):
            assert abs(op.f(k, x)) <= 1.0 + 1e-12


def test_weighted_balance_vanishes():
    rng = np.random.default_rng(2)
    for _ in range(10):
        _, op = rand_skew_operator(rng, 7)
        for _ in range(100):
            x = rand_point(rng, range(1, 8))
            total = sum(m * op.f(k, x) for k, m in x.items())
            assert abs(total) <= 1e-12


def test_pair_condition_vanishes_for_skew():
    rng = np.random.default_rng(3)
    _, op = rand_skew_operator(rng, 6)
    for _ in range(100):
        x = rand_point(rng, range(1, 7))
        y = rand_point(rng, range(1, 7))
        assert abs(pair_condition_value(op, x, y)) <= 1e-12


def test_defect_witness_none_for_skew():
    rng = np.random.default_rng(4)
    # Raw cells have no implied mirror, so spell out both orientations.
    cells = []
    for k, i, v in rand_skew_triples(rng, 5):
        cells.append([k, i, v])
        cells.append([i, k, -v])
    assert symmetry_defect_witness(cells) is None


def test_defect_witness_diagonal():
    point, value = symmetry_defect_witness([(1, 1, 0.3)])
    assert point == vertex(1)
    assert value == pytest.approx(0.3)


def test_defect_witness_symmetric_pair():
    point, value = symmetry_defect_witness([(1, 2, 0.5), (2, 1, 0.5)])
    assert point.as_dict() == {1: 0.5, 2: 0.5}
    assert value == pytest.approx(0.25)


def test_defect_witness_matches_actual_balance_sum():
    rng = np.random.default_rng(5)
    for _ in range(50):
        cells = rand_defective_cells(rng, int(rng.integers(2, 7)))
        witness = symmetry_defect_witness(cells)
        assert witness is not None
        point, value = witness
        op = linear_operator_from_cells(cells)
        actual = sum(m * op.f(k, point) for k, m in point.items())
        assert actual == pytest.approx(value, abs=1e-14)
        assert abs(actual) > 1e-9


def test_matrix_json_roundtrip(tmp_path):
    rng = np.random.default_rng(6)
    matrix = validate_matrix(rand_skew_triples(rng, 5))
    path = tmp_path / "matrix.json"
    save_matrix(matrix, path)
    loaded = load_matrix(path)
    assert loaded.entries == matrix.entries
    assert loaded.dimension == matrix.dimension
