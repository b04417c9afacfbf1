import math

import numpy as np
import pytest

from mipsbench.core import EstimatorInputError
from mipsbench.slope import SLOPE_CONSTANT, CandidateEstimate, cnf, slope_select


def _candidates(pairs):
    return [CandidateEstimate(label=i, estimate=v, cnf=w) for i, (v, w) in enumerate(pairs)]


def _brute_force(pairs):
    order = sorted(range(len(pairs)), key=lambda i: -pairs[i][1])
    best = 0
    for m in range(1, len(order)):
        vm, wm = pairs[order[m]]
        if all(abs(vm - pairs[order[j]][0]) <= wm + SLOPE_CONSTANT * pairs[order[j]][1] for j in range(m)):
            best = m
    return order[best]


def test_cnf_examples():
    terms = np.random.default_rng(0).standard_normal(50)

    assert cnf(np.full(10, 3.0)) == 0.0
    assert abs(cnf(np.array([0.0, 0.0, 2.0, 2.0])) - 1.8374) < 1e-4
    assert abs(cnf(2 * terms) - 2 * cnf(terms)) < 1e-12


def test_cnf_rejects_bad_input():
    with pytest.raises(EstimatorInputError):
        cnf(np.array([1.0]))
    with pytest.raises(ValueError):
        cnf(np.array([1.0, 2.0]), delta=1.0)


def test_cnf_halves_when_sample_quadruples():
    rng = np.random.default_rng(1)
    base = rng.standard_normal(400)
    small = base / base.std(ddof=1)
    large = np.tile(small, 4)
    large = (large - large.mean()) / large.std(ddof=1)
    ratio = cnf(large) / cnf(small)
    print("cnf ratio:", ratio)

    assert abs(ratio - 0.5) <= 0.025


def test_slope_constant():
    assert abs(SLOPE_CONSTANT - 1.4494897) < 1e-7


def test_slope_select_examples():
    assert slope_select(_candidates([(1.0, 0.3)])) == 0
    assert slope_select(_candidates([(2.0, 0.5), (2.0, 0.3), (2.0, 0.1)])) == 2
    assert slope_select(_candidates([(0.0, 1.0), (0.1, 0.5), (5.0, 0.1)])) == 1


def test_slope_select_maps_unsorted_input_back():
    pairs = [(5.0, 0.1), (0.0, 1.0), (0.1, 0.5)]

    assert slope_select(_candidates(pairs)) == 2


def test_slope_select_rejects_empty_list():
    with pytest.raises(EstimatorInputError):
        slope_select([])


def test_candidate_rejects_bad_cnf():
    with pytest.raises(EstimatorInputError):
        CandidateEstimate(label="x", estimate=0.0, cnf=-1.0)
    with pytest.raises(EstimatorInputError):
        CandidateEstimate(label="x", estimate=0.0, cnf=math.inf)


def test_slope_select_matches_brute_force():
    rng = np.random.default_rng(2)
    for _ in range(500):
        size = int(rng.integers(1, 7))
        pairs = [(float(v), float(w)) for v, w in zip(rng.normal(size=size), rng.uniform(0.01, 2.0, size=size))]

        assert slope_select(_candidates(pairs)) == _brute_force(pairs)


def test_dominated_candidate_does_not_change_selection():
    rng = np.random.default_rng(3)
    for _ in range(100):
        pairs = [(float(v), float(w)) for v, w in zip(rng.normal(size=4), np.sort(rng.uniform(0.1, 1.0, 4))[::-1])]
        chosen = pairs[slope_select(_candidates(pairs))]
        # same estimate as the widest candidate, wider still, placed first
        augmented = [(pairs[0][0], pairs[0][1] + 1.0)] + pairs

        assert augmented[slope_select(_candidates(augmented))] == chosen
