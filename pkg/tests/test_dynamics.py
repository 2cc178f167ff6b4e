import logging
import math

import numpy as np
import pytest

from xentangle.dynamics import (
    CavityParams,
    DynamicsTrace,
    TimeGrid,
    check_envelope_bound,
    extract_min_envelope,
    golden_section_min,
    rho_2at,
    rho_2at_bruteforce,
    rho_2at_bruteforce_many,
    rho_2at_closed_form,
    subsystem_entropy,
    sweep,
)
from xentangle.geometry import l_measure_of
from xentangle.states import compute_delta, make_bell, validate_density, x_state_from_density


def phi_t_state(gamma, n, t, bell):
    """Four-body amplitudes written out by hand for a single excitation exchange.

    Each atom-field pair evolves as
    |+, n> -> c1 |+, n> - i s1 |-, n+1> and |-, n> -> c0 |-, n> - i s0 |+, n-1>.
    Returns the atoms' reduced matrix.
    """
    c1, s1 = math.cos(gamma * t * math.sqrt(n + 1)), math.sin(gamma * t * math.sqrt(n + 1))
    c0, s0 = math.cos(gamma * t * math.sqrt(n)), math.sin(gamma * t * math.sqrt(n))
    # single pair: atom level a (0 = +, 1 = -), field offset f in {-1, 0, +1} -> index f+1
    pair = {0: {(0, 1): c1, (1, 2): -1j * s1}, 1: {(1, 1): c0, (0, 0): -1j * s0}}
    coef = {1: {(0, 0): 1, (1, 1): 1}, 2: {(0, 0): 1, (1, 1): -1},
            3: {(0, 1): 1, (1, 0): 1}, 4: {(0, 1): 1, (1, 0): -1}}[bell]
    psi = np.zeros((2, 3, 2, 3), dtype=complex)
    for (a, b), w in coef.items():
        for (aa, fa), ua in pair[a].items():
            for (bb, fb), ub in pair[b].items():
                psi[aa, fa, bb, fb] += w / math.sqrt(2) * ua * ub
    rho = np.einsum("afbg,cfdg->abcd", psi, psi.conj())
    return rho.reshape(4, 4)


def test_params_validation():
    with pytest.raises(ValueError):
        CavityParams(gamma=0.0)
    with pytest.raises(ValueError):
        CavityParams(n=-1)
    with pytest.raises(ValueError):
        CavityParams(n=1.5)
    with pytest.raises(ValueError):
        CavityParams(initial_bell=5)
    with pytest.raises(ValueError):
        TimeGrid(1.0, 0.0, 0.1)
    with pytest.raises(ValueError):
        TimeGrid(0.0, 1.0, 2.0)


def test_time_grid():
    t = TimeGrid(0.0, 20.0, 1e-3).times()
    assert t.size == 20001 and t[-1] == pytest.approx(20.0)


def test_initial_state_is_bell3():
    s = rho_2at(CavityParams(1.0, 10, 3), 0.0)
    assert np.allclose(s.matrix(), make_bell(3).m, atol=1e-15)
    assert l_measure_of(s) == pytest.approx(1.0)


def test_closed_form_at_t_0_3():
    p = CavityParams(1.0, 10, 3)
    ref = phi_t_state(1.0, 10, 0.3, 3)
    assert np.max(np.abs(rho_2at_closed_form(p, 0.3).matrix() - ref)) <= 1e-12
    assert np.max(np.abs(rho_2at_bruteforce(p, 0.3) - ref)) <= 1e-12


@pytest.mark.parametrize("bell", [1, 2, 3, 4])
def test_bruteforce_matches_hand_expansion(bell, rng):
    for _ in range(20):
        g, n, t = rng.uniform(0.1, 3), int(rng.integers(0, 15)), rng.uniform(0, 20)
        ref = phi_t_state(g, n, t, bell)
        got = rho_2at_bruteforce(CavityParams(g, n, bell), t)
        assert np.max(np.abs(got - ref)) <= 1e-10


def test_closed_form_against_bruteforce(rng):
    for _ in range(100):
        g, n, t = rng.uniform(0.05, 5), int(rng.integers(0, 30)), rng.uniform(0, 50)
        p = CavityParams(g, n, 3)
        diff = rho_2at_closed_form(p, t).matrix() - rho_2at_bruteforce(p, t)
        assert np.max(np.abs(diff)) <= 1e-10


def test_closed_form_only_for_bell3():
    with pytest.raises(ValueError):
        rho_2at_closed_form(CavityParams(1.0, 10, 1), 0.1)
    with pytest.raises(ValueError):
        rho_2at(CavityParams(), -1.0)


def test_no_photons():
    p = CavityParams(1.0, 0, 3)
    for t in np.linspace(0, 5, 23):
        s = rho_2at(p, t)
        c2 = math.cos(t) ** 2
        assert s.y == pytest.approx(c2 / 2, abs=1e-15)
        assert s.y0 == pytest.approx(c2 / 2, abs=1e-15)
        assert s.r11 == 0.0
        assert s.r44 == pytest.approx(math.sin(t) ** 2, abs=1e-15)
        validate_density(s, 1e-12)


@pytest.mark.parametrize("bell", [1, 2, 3, 4])
def test_evolved_states_are_valid_x_states(bell):
    p = CavityParams(1.3, 4, bell)
    for t in np.linspace(0, 10, 37):
        s = rho_2at(p, t)
        assert sum(s.populations) == pytest.approx(1.0, abs=1e-12)
        validate_density(s, 1e-12)
        x_state_from_density(s.matrix())
        assert compute_delta(s).delta == pytest.approx(0.0, abs=1e-14)


def test_bell1_stays_on_the_x_leg():
    p = CavityParams(1.0, 10, 1)
    for t in np.linspace(0, 5, 11):
        s = rho_2at(p, t)
        assert s.y == pytest.approx(0, abs=1e-14)
        assert s.r22 == pytest.approx(s.r33, abs=1e-14)


def test_sweep_basic():
    tr = sweep(CavityParams(1.0, 10, 3), TimeGrid(0.0, 20.0, 1e-2))
    assert len(tr) == 2001
    assert tr.L[0] == pytest.approx(1.0)
    assert np.max(np.abs(tr.entropy_sub - tr.entropy_sub2)) <= 1e-12
    assert np.any(tr.L == 0) and np.all(tr.L >= 0)
    assert np.array_equal(np.sign(tr.L), np.sign(np.maximum(0, tr.y - tr.x0)))
    assert set(tr.region) <= {"M2/leg_My", "M2/separable_square", "M1/separable_square",
                              "M0/separable_square"}
    assert tr.entropy_sub[0] == pytest.approx(1.0)


@pytest.mark.parametrize("bell", [1, 2, 4])
def test_sweep_equal_entropies_other_bells(bell):
    tr = sweep(CavityParams(0.7, 3, bell), TimeGrid(0.0, 10.0, 1e-2))
    assert np.max(np.abs(tr.entropy_sub - tr.entropy_sub2)) <= 1e-12
    assert tr.L[0] == pytest.approx(1.0)


def test_subsystem_entropy_formula():
    # for the Bell-3 start S(t) = h(1/2 - 1/2 sin(dw t) sin(sw t))
    p = CavityParams(1.0, 10, 3)
    t = np.linspace(0, 20, 401)
    dw = math.sqrt(11) - math.sqrt(10)
    sw = math.sqrt(11) + math.sqrt(10)
    z = 0.5 - 0.5 * np.sin(dw * t) * np.sin(sw * t)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = np.nan_to_num(-z * np.log2(z) - (1 - z) * np.log2(1 - z))
    assert np.allclose(subsystem_entropy(p, t), h, atol=1e-12)


def test_golden_section():
    t, v = golden_section_min(lambda x: (x - 0.3) ** 2, 0.0, 1.0, 1e-10)
    assert t == pytest.approx(0.3, abs=1e-9) and v <= 1e-18


def synthetic(t, s, L):
    z = np.zeros_like(t)
    return DynamicsTrace(t=t, L=L, eof=L.copy(), entropy_sub=s, x0=z, y0=z, x=z, y=z)


def test_envelope_of_constant_entropy(caplog):
    t = np.linspace(0, 1, 11)
    with caplog.at_level(logging.WARNING):
        env = extract_min_envelope(synthetic(t, np.ones_like(t), np.zeros_like(t)))
    assert env.degenerate and np.all(env.values == 1.0)
    assert "degenerate" in caplog.text


def test_envelope_interpolates_minima():
    t = np.linspace(0, 4 * math.pi, 4001)
    s = 0.6 + 0.4 * np.cos(t) ** 2
    env = extract_min_envelope(synthetic(t, s, np.zeros_like(t)))
    assert env.minima_t == pytest.approx([math.pi / 2, 3 * math.pi / 2, 5 * math.pi / 2, 7 * math.pi / 2], abs=1e-3)
    assert np.allclose(env.values, 0.6, atol=1e-6)


def test_envelope_end_extension_is_capped():
    t = np.linspace(0, 10, 1001)
    # minima at 2.5 and 7.5 with values 0.5 and 0.9; line slope 0.08
    s = np.where(t < 5, 0.5 + 0.1 * (t - 2.5) ** 2, 0.9 + 0.1 * (t - 7.5) ** 2)
    env = extract_min_envelope(synthetic(t, np.minimum(s, 1.5), np.zeros_like(t)))
    assert env.values[0] == pytest.approx(0.3, abs=1e-9)
    assert env.values[-1] == pytest.approx(1.0)


def test_envelope_too_short():
    t = np.array([0.0, 1.0])
    with pytest.raises(ValueError):
        extract_min_envelope(synthetic(t, np.ones(2), np.zeros(2)))


def test_checker_catches_violation():
    t = np.linspace(0, 10, 1001)
    s = np.abs(np.cos(t))
    chk = check_envelope_bound(synthetic(t, s, np.ones_like(t)))
    assert not chk.holds
    assert chk.worst_violation == pytest.approx(1.0, abs=1e-3)


def test_refined_minima_are_local_minima():
    p = CavityParams(1.0, 10, 3)
    tr = sweep(p, TimeGrid(0.0, 6.0, 1e-2))
    for tm, sm in zip(tr.envelope.minima_t, tr.envelope.minima_s):
        around = subsystem_entropy(p, [tm - 1e-4, tm + 1e-4])
        assert sm <= around.min() + 1e-15


def test_bruteforce_many_shape():
    out = rho_2at_bruteforce_many(CavityParams(1.0, 2, 1), [0.0, 0.5, 1.0])
    assert out.shape == (3, 4, 4)
