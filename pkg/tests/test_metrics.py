import math

import numpy as np
import pytest

from qincompat import (
    BoundReport,
    DeltaReport,
    InputError,
    Measurement,
    MeasurementTuple,
    QubitState,
    delta_grid_max,
    delta_state_dependent,
    delta_worst_case,
    delta_worst_case_pairwise,
    dominance_check,
    fibonacci_sphere_points,
    ntuple_lower_bound_heuristic,
    pairwise_lower_bound,
    pairwise_sum_lower_bound,
    triple_compatible,
    triple_lower_bound,
)
from qincompat.bloch import random_ball_vectors, random_triple


def test_state_dependent_zero_for_identical(pauli):
    s = QubitState([0.1, 0.2, 0.3])
    assert delta_state_dependent(pauli, pauli, s) == 0.0


def test_state_dependent_saturating_state(pauli, pauli_scaled):
    r = QubitState(np.ones(3) / math.sqrt(3))
    val = delta_state_dependent(pauli, pauli_scaled, r)
    assert val == pytest.approx(2 * math.sqrt(3) - 2, abs=1e-12)


def test_state_dependent_axis_state(pauli, pauli_scaled):
    val = delta_state_dependent(pauli, pauli_scaled, QubitState([1, 0, 0]))
    assert val == pytest.approx(2 * (1 - 1 / math.sqrt(3)), abs=1e-12)


def test_delta_worst_case_pauli(pauli, pauli_scaled):
    rep = delta_worst_case(pauli, pauli_scaled)
    assert rep.delta == pytest.approx(2 * math.sqrt(3) - 2, abs=1e-9)
    assert np.linalg.norm(rep.witness_r) == pytest.approx(1.0, abs=1e-12)
    assert sum(rep.per_measurement_d) == pytest.approx(rep.delta, abs=1e-12)


def test_delta_worst_case_identical(pauli):
    rep = delta_worst_case(pauli, pauli)
    assert rep.delta == 0.0
    assert np.linalg.norm(rep.witness_r) == pytest.approx(1.0)


def test_delta_closed_form_matches_grid():
    rng = np.random.default_rng(21)
    grid = fibonacci_sphere_points(200000)
    for _ in range(20):
        M = random_triple(rng)
        N = random_triple(rng)
        closed = delta_worst_case(M, N).delta
        assert abs(closed - delta_grid_max(M, N, grid)) <= 1e-3


def test_delta_pairwise_identical():
    M = MeasurementTuple.from_vectors([[1, 0, 0], [0, 1, 0]])
    assert delta_worst_case_pairwise(M, M).delta == 0.0


def test_delta_pairwise_scaled():
    M = MeasurementTuple.from_vectors([[1, 0, 0], [0, 1, 0]])
    N = M.scaled(1 / math.sqrt(2))
    rep = delta_worst_case_pairwise(M, N)
    assert rep.delta == pytest.approx(2 * math.sqrt(2) - 2, abs=1e-12)


def test_delta_pairwise_matches_grid():
    rng = np.random.default_rng(22)
    grid = fibonacci_sphere_points(200000)
    for _ in range(10):
        M = MeasurementTuple.from_vectors(random_ball_vectors(rng, 2))
        N = MeasurementTuple.from_vectors(random_ball_vectors(rng, 2))
        closed = delta_worst_case_pairwise(M, N).delta
        assert abs(closed - delta_grid_max(M, N, grid)) <= 1e-3


def test_witness_attainment():
    rng = np.random.default_rng(23)
    for _ in range(200):
        M = random_triple(rng)
        N = random_triple(rng)
        rep = delta_worst_case(M, N)
        attained = delta_state_dependent(M, N, QubitState(rep.witness_r))
        assert attained == pytest.approx(rep.delta, abs=1e-12)


def test_triple_bound_values(pauli, pauli_scaled, ortho):
    assert triple_lower_bound(pauli).degree == pytest.approx(2 * math.sqrt(3) - 2, abs=1e-9)
    assert triple_lower_bound(ortho).degree == pytest.approx(math.sqrt(6) - 2, abs=1e-9)
    bd = triple_lower_bound(pauli_scaled)
    assert bd.degree == 0.0
    assert abs(bd.raw_margin) <= 1e-9


def test_pairwise_sum_values(pauli, ortho):
    assert pairwise_sum_lower_bound(pauli).degree == pytest.approx(
        3 * math.sqrt(2) - 3, abs=1e-9)
    assert pairwise_sum_lower_bound(ortho).degree == 0.0


def test_pairwise_sum_two_zero_vectors():
    t = MeasurementTuple.from_vectors([[0, 0, 0], [0, 0, 0], [0.4, 0.2, 0.1]])
    assert pairwise_sum_lower_bound(t).degree == 0.0


def test_pairwise_bound_values():
    assert pairwise_lower_bound(Measurement([1, 0, 0]), Measurement([0, 1, 0])).degree == \
        pytest.approx(2 * math.sqrt(2) - 2, abs=1e-9)
    s = 1 / math.sqrt(2)
    assert pairwise_lower_bound(Measurement([s, 0, 0]), Measurement([0, s, 0])).degree == \
        pytest.approx(0.0, abs=1e-12)
    m = Measurement([0, 0, 1])
    assert pairwise_lower_bound(m, m).degree == 0.0


def test_ntuple_heuristic_zero():
    t = MeasurementTuple.from_vectors([[0, 0, 0]] * 4)
    assert ntuple_lower_bound_heuristic(t).degree == 0.0


def test_ntuple_heuristic_repeated_axis():
    t = MeasurementTuple.from_vectors([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 0, 0]])
    # 16-pattern enumeration: 8 patterns give sqrt(6), 8 give sqrt(2).
    expected = (8 * (math.sqrt(6) + math.sqrt(2)) - 16) / 4
    assert ntuple_lower_bound_heuristic(t).raw_margin == pytest.approx(expected, abs=1e-12)


def test_ntuple_heuristic_scaling_homogeneity():
    rng = np.random.default_rng(24)
    vecs = random_ball_vectors(rng, 4)
    base = ntuple_lower_bound_heuristic(MeasurementTuple.from_vectors(vecs))
    s_base = 4 * base.raw_margin + 16
    for t in (0.3, 0.7):
        scaled = ntuple_lower_bound_heuristic(MeasurementTuple.from_vectors(t * vecs))
        assert scaled.raw_margin == pytest.approx((t * s_base - 16) / 4, abs=1e-12)


def test_ntuple_heuristic_arity_guard(pauli):
    with pytest.raises(InputError):
        ntuple_lower_bound_heuristic(pauli)


def test_dominance_examples(pauli, ortho):
    l1, l2, holds = dominance_check(pauli)
    assert (l1, l2) == pytest.approx((2 * math.sqrt(3) - 2, 3 * math.sqrt(2) - 3), abs=1e-9)
    assert holds
    l1, l2, holds = dominance_check(ortho)
    assert (l1, l2) == pytest.approx((math.sqrt(6) - 2, 0.0), abs=1e-9)
    assert holds


def test_dominance_chain_random_sweep():
    """The distance-splitting chain behind the dominance claim is always valid."""
    from qincompat.compat import criterion_sum
    from qincompat.bloch import derived_p_vectors

    rng = np.random.default_rng(25)
    for _ in range(500):
        t = random_triple(rng)
        total, _ = criterion_sum(t)
        p = np.array(derived_p_vectors(t))
        split = max(
            np.linalg.norm(p[0] - p[1]) + np.linalg.norm(p[2] - p[3]),
            np.linalg.norm(p[0] - p[2]) + np.linalg.norm(p[1] - p[3]),
            np.linalg.norm(p[0] - p[3]) + np.linalg.norm(p[1] - p[2]),
        )
        pair_max = max(
            float(np.linalg.norm(a + b)) + float(np.linalg.norm(a - b))
            for a, b in ((t.items[i].bloch, t.items[j].bloch)
                         for i in range(3) for j in range(i + 1, 3))
        )
        assert total >= split - 1e-9
        assert split >= 2 * pair_max - 1e-9


def test_dominance_counterexample():
    """l1 >= l2 does not hold universally: three coplanar unit vectors at 120
    degrees give l1 = 1 exactly (median at the origin) but l2 = 3(sqrt(3)-1)/2."""
    h = math.sqrt(3) / 2
    t = MeasurementTuple.from_vectors([[1, 0, 0], [-0.5, h, 0], [-0.5, -h, 0]])
    l1, l2, holds = dominance_check(t)
    assert l1 == pytest.approx(1.0, abs=1e-9)
    assert l2 == pytest.approx(1.5 * (math.sqrt(3) - 1), abs=1e-9)
    assert not holds


def test_zero_degree_iff_compatible():
    rng = np.random.default_rng(26)
    for _ in range(300):
        t = random_triple(rng)
        bd = triple_lower_bound(t)
        if abs(bd.raw_margin) <= 5e-7:
            continue
        assert (bd.degree == 0.0) == triple_compatible(t).compatible


def test_fibonacci_lattice_is_unit_and_spread():
    grid = fibonacci_sphere_points(5000)
    assert np.abs(np.linalg.norm(grid, axis=1) - 1).max() <= 1e-12
    assert np.abs(grid.mean(axis=0)).max() <= 1e-2


def test_report_round_trips(pauli, pauli_scaled):
    bd = triple_lower_bound(pauli)
    assert BoundReport.from_dict(bd.to_dict()) == bd
    rep = delta_worst_case(pauli, pauli_scaled)
    again = DeltaReport.from_dict(rep.to_dict())
    assert again.delta == rep.delta
    assert np.array_equal(again.witness_r, rep.witness_r)
    assert all(np.array_equal(a, b) for a, b in zip(again.g_vectors, rep.g_vectors))
