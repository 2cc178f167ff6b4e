import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xentangle.geometry import (
    ExtremePoints,
    Region,
    SPoint,
    Subregion,
    chebyshev,
    classify,
    entanglement_rectangle,
    extreme_sum,
    l_max,
    l_measure,
    l_measure_closest_point,
    l_measure_of,
    max_extreme_sum,
    separable_square,
    simplex_grid_max_extreme_sum,
    to_point,
)
from xentangle.linalg import numerical_rank
from xentangle.states import XState, make_bell_mixture, make_werner, random_x_state

# (populations, x, y, expected rank); y0 = 0 cases, then their x0 = 0 mirrors
RANK_TABLE = [
    ((0.3, 0.0, 0.3, 0.4), 0.2, 0.0, 3),
    ((0.3, 0.0, 0.3, 0.4), math.sqrt(0.12), 0.0, 2),
    ((0.3, 0.3, 0.0, 0.4), math.sqrt(0.12), 0.0, 2),
    ((0.6, 0.0, 0.0, 0.4), 0.3, 0.0, 2),
    ((0.6, 0.0, 0.0, 0.4), math.sqrt(0.24), 0.0, 1),
    ((0.0, 0.3, 0.3, 0.4), 0.0, 0.2, 3),
    ((0.0, 0.4, 0.3, 0.3), 0.0, math.sqrt(0.12), 2),
    ((0.3, 0.4, 0.3, 0.0), 0.0, math.sqrt(0.12), 2),
    ((0.0, 0.6, 0.4, 0.0), 0.0, 0.3, 2),
    ((0.0, 0.6, 0.4, 0.0), 0.0, math.sqrt(0.24), 1),
]


def test_to_point_examples():
    p, e = to_point(make_werner(1, 1.0))
    assert p == pytest.approx((0.5, 0.0)) and e == pytest.approx((0.5, 0.0))
    p, e = to_point(XState(0.25, 0.25, 0.25, 0.25))
    assert p == (0.0, 0.0) and e == pytest.approx((0.25, 0.25))
    p, e = to_point(make_bell_mixture([0.5, 0, 0.25, 0.25]))
    assert p == pytest.approx((0.25, 0.0)) and e == pytest.approx((0.25, 0.25))


def test_classify_examples():
    rc = classify(SPoint(0.1, 0.2), ExtremePoints(0.25, 0.25))
    assert (rc.region, rc.subregion, rc.entangled) == (Region.M0, Subregion.SEPARABLE_SQUARE, False)
    rc = classify(SPoint(0.5, 0.0), ExtremePoints(0.5, 0.0), populations=(0.5, 0, 0, 0.5))
    assert rc.label() == "M1/leg_Mx" and rc.predicted_rank == 1
    rc = classify(SPoint(0.1, 0.3), ExtremePoints(0.1, 0.3))
    assert rc.label() == "M2/vertex_q0" and rc.predicted_rank == 2


def test_classify_edges_and_interior():
    e = ExtremePoints(0.4, 0.1)
    assert classify(SPoint(0.4, 0.05), e).subregion is Subregion.RIGHT_EDGE
    assert classify(SPoint(0.3, 0.1), e).subregion is Subregion.TOP_EDGE
    assert classify(SPoint(0.3, 0.05), e).subregion is Subregion.INTERIOR
    assert classify(SPoint(0.3, 0.05), e).predicted_rank == 4
    assert classify(SPoint(0.4, 0.05), e).predicted_rank == 3


def test_m0_ranks():
    e = ExtremePoints(0.2, 0.2)
    assert classify(SPoint(0.2, 0.2), e).predicted_rank == 2
    assert classify(SPoint(0.2, 0.1), e).predicted_rank == 3
    assert classify(SPoint(0.1, 0.1), e).predicted_rank == 4


def test_corner_without_coherences_is_separable():
    rc = classify(SPoint(0, 0), ExtremePoints(0, 0), populations=(0.5, 0.5, 0, 0))
    assert rc.region is Region.M0 and not rc.entangled
    assert rc.predicted_rank == 2


def test_rank_needs_populations_on_a_leg():
    assert classify(SPoint(0.3, 0), ExtremePoints(0.4, 0)).predicted_rank is None


def test_inconsistent_point_is_rejected():
    with pytest.raises(ValueError):
        classify(SPoint(0.3, 0.0), ExtremePoints(0.2, 0.1))


@pytest.mark.parametrize("pops,x,y,rank", RANK_TABLE)
def test_rank_table(pops, x, y, rank):
    s = XState(*pops, x=x, y=y)
    assert numerical_rank(s.matrix()) == rank
    p, e = to_point(s)
    assert classify(p, e, populations=pops).predicted_rank == rank


def test_predicted_rank_on_random_points(rng):
    seen = set()
    for _ in range(1000):
        s = random_x_state(rng)
        # push a fraction of samples onto edges and vertices
        u = rng.random()
        x = s.x0 if u < 0.3 else s.x
        y = s.y0 if 0.2 < u < 0.5 else s.y
        s = XState(*s.populations, x=x, theta=s.theta, y=y, phi=s.phi)
        p, e = to_point(s)
        rc = classify(p, e, populations=s.populations)
        seen.add(rc.label())
        assert rc.predicted_rank == numerical_rank(s.matrix())
    assert {"M1/right_edge", "M2/top_edge", "M1/interior", "M2/vertex_q0"} <= seen


def test_l_measure_examples():
    assert l_measure_of(make_werner(1, 1.0)) == pytest.approx(1.0)
    assert l_measure_of(make_werner(3, 1 / 3)) == pytest.approx(0.0, abs=1e-15)
    assert l_measure(SPoint(0, 0), ExtremePoints(0.4, 0.1)) == 0.0


def test_closest_point_examples():
    e = ExtremePoints(0.4, 0.1)
    assert l_measure_closest_point(SPoint(0.3, 0.05), e) == pytest.approx((0.1, 0.05))
    e = ExtremePoints(0.1, 0.35)
    assert l_measure_closest_point(SPoint(0.05, 0.3), e) == pytest.approx((0.05, 0.1))
    assert l_measure_closest_point(SPoint(0.05, 0.05), e) == (0.05, 0.05)


def test_l_max_examples():
    assert l_max(ExtremePoints(0.5, 0.0)) == 1.0
    assert l_max(ExtremePoints(0.2, 0.2)) == 0.0
    for q in np.linspace(-1 / 3, 1, 9):
        assert l_max(ExtremePoints((1 + q) / 4, (1 - q) / 4)) == pytest.approx(abs(q))


def test_square_and_rectangle():
    e = ExtremePoints(0.4, 0.1)
    assert separable_square(e)[2] == (0.1, 0.1)
    assert entanglement_rectangle(e) == [(0.1, 0), (0.4, 0), (0.4, 0.1), (0.1, 0.1)]
    assert entanglement_rectangle(ExtremePoints(0.2, 0.2)) is None


def test_extreme_sum_maximum():
    assert max_extreme_sum() == 0.5
    best, arg = simplex_grid_max_extreme_sum(1e-2)
    assert best == pytest.approx(0.5, abs=1e-12)
    assert sum(arg) == pytest.approx(1.0)
    for a in np.linspace(0, 0.5, 11):
        assert extreme_sum(a, 0.5 - a, 0.5 - a, a) == pytest.approx(0.5)


def test_extreme_sum_grid_against_brute_force():
    # every lattice point at step 1/20, no decomposition
    n = 20
    best = 0.0
    for i in range(n + 1):
        for j in range(n + 1 - i):
            for k in range(n + 1 - i - j):
                best = max(best, extreme_sum(i / n, j / n, k / n, (n - i - j - k) / n))
    assert simplex_grid_max_extreme_sum(1 / n)[0] == pytest.approx(best, abs=1e-15)


pops = st.lists(st.floats(0.0, 1.0), min_size=4, max_size=4).filter(lambda v: sum(v) > 1e-3)


@settings(max_examples=300)
@given(pops, st.floats(0, 1), st.floats(0, 1))
def test_region_is_exhaustive_and_exclusive(raw, u, v):
    p = np.array(raw) / sum(raw)
    s = XState(*p, x=u * math.sqrt(p[0] * p[3]), y=v * math.sqrt(p[1] * p[2]), tol=1e-9)
    pt, e = to_point(s)
    rc = classify(pt, e)
    in_m0 = abs(e.x0 - e.y0) <= 1e-10
    assert [in_m0, not in_m0 and e.y0 < e.x0, not in_m0 and e.x0 < e.y0].count(True) == 1
    assert rc.region is (Region.M0 if in_m0 else Region.M1 if e.y0 < e.x0 else Region.M2)
    L = l_measure(pt, e)
    assert 0.0 <= L <= 1.0 + 1e-12
    assert pt.x + pt.y <= 0.5 + 1e-12
    if L > 0:
        q = l_measure_closest_point(pt, e)
        assert L == pytest.approx(2 * chebyshev(pt, q), abs=1e-15)
        assert max(q) <= min(e) + 1e-15


def test_l_monotone_in_x():
    e = ExtremePoints(0.4, 0.15)
    xs = np.linspace(0, 0.4, 50)
    L = [l_measure(SPoint(x, 0.1), e) for x in xs]
    assert np.all(np.diff(L) >= 0)


def test_l_sup_on_far_edge(rng):
    for _ in range(100):
        s = random_x_state(rng)
        e = ExtremePoints(s.x0, s.y0)
        grid = np.linspace(0, 1, 21)
        vals = [(l_measure(SPoint(a * e.x0, b * e.y0), e), a, b) for a in grid for b in grid]
        top = max(v[0] for v in vals)
        assert top == pytest.approx(l_max(e), abs=1e-15)
        if e.x0 > e.y0:
            assert all(a == 1.0 for v, a, b in vals if v == top and top > 0)
        elif e.y0 > e.x0:
            assert all(b == 1.0 for v, a, b in vals if v == top and top > 0)
