import dataclasses
import math

import numpy as np
import pytest

from rdcertify.integrator import SimState
from rdcertify.kinetics import BlowupExample, Combustion
from rdcertify.lyapunov import (FunctionalParams, bound_constants,
                                build_params, check_conditions, dissipation_I,
                                h_value, log_theta_at, lyapunov_L,
                                positive_parts, quadratic_Ti, reaction_J,
                                theta_at)
from rdcertify.mesh import Grid

ZEROS = np.zeros(3)


def params_128(p=2, mu=1.0):
    """Weights 1, 2, 8, ... (theta0=1, theta1=2, theta^2=2) with zero bounds."""
    return build_params(1.0, 1.0, mu, 0.0, p, ZEROS, ZEROS,
                        theta=math.sqrt(2.0), theta0=1.0, theta1=2.0)


def recurrence_logs(params):
    """Independent reconstruction of the weight logs by iterating
    log t_{i+2} = 2 log theta + 2 log t_{i+1} - log t_i."""
    logs = [params.log_theta0, params.log_theta1]
    for _ in range(params.p - 1):
        logs.append(2.0 * params.log_theta + 2.0 * logs[-1] - logs[-2])
    return np.array(logs[:params.p + 1])


# ---------------------------------------------------------------------------
# Construction and the weight sequence
# ---------------------------------------------------------------------------

def test_bound_constants():
    u0 = np.array([0.0, 5.0, -1.0])
    v0 = np.array([1.0, 0.5, 0.0])
    assert bound_constants(2.0, u0, v0) == (5.0, 2.0)
    assert bound_constants(0.0, u0, v0) == (5.0, 1.0)
    assert bound_constants(10.0, np.ones(3), np.ones(3)) == (10.0, 10.0)


def test_default_theta():
    p = build_params(1.0, 1.0, 1.0, 0.0, 4, ZEROS, ZEROS)
    assert p.theta == pytest.approx(math.sqrt(1.1))
    # for a=1, b=4 the lower bound is 25/16 = 1.5625
    p2 = build_params(1.0, 4.0, 1.0, 0.0, 4, ZEROS, ZEROS)
    assert p2.theta ** 2 == pytest.approx(1.1 * 1.5625)


def test_supplied_theta_below_bound_rejected():
    with pytest.raises(ValueError, match=r"\(a\+b\)\^2/\(4ab\)"):
        build_params(1.0, 4.0, 1.0, 0.0, 4, ZEROS, ZEROS, theta=1.2)
    with pytest.raises(ValueError, match="must be > 1"):
        build_params(1.0, 1.0, 1.0, 0.0, 4, ZEROS, ZEROS, theta=0.9)


def test_weight_ratio_must_stay_below_mu():
    with pytest.raises(ValueError, match="theta0/theta1"):
        build_params(1.0, 1.0, 1.0, 0.0, 4, ZEROS, ZEROS,
                     theta0=1.0, theta1=1.0)


def test_parameter_validation():
    with pytest.raises(ValueError):
        build_params(1.0, 1.0, 1.0, 0.0, 1, ZEROS, ZEROS)
    with pytest.raises(ValueError):
        build_params(0.0, 1.0, 1.0, 0.0, 4, ZEROS, ZEROS)
    with pytest.raises(ValueError):
        build_params(1.0, 1.0, -0.5, 0.0, 4, ZEROS, ZEROS)
    with pytest.raises(ValueError):
        build_params(1.0, 1.0, 1.0, -1.0, 4, ZEROS, ZEROS)


def test_theta_sequence_1_2_8_64_1024():
    params = params_128(p=4)
    values = [theta_at(params, i).value for i in range(5)]
    assert values == pytest.approx([1.0, 2.0, 8.0, 64.0, 1024.0], rel=1e-12)
    # anchors are the supplied first two weights
    assert theta_at(params, 0).value == pytest.approx(1.0)
    assert theta_at(params, 1).value == pytest.approx(2.0)
    # second-order ratio is theta^2 = 2 all along
    for i in range(3):
        ratio = values[i] * values[i + 2] / values[i + 1] ** 2
        assert ratio == pytest.approx(2.0, rel=1e-12)
    # and the closed form matches the recurrence iteration
    assert np.allclose(params.log_theta_seq(), recurrence_logs(params),
                       atol=1e-12)


def test_theta_at_log_and_linear_agree():
    params = params_128(p=4)
    for i in range(5):
        tv = theta_at(params, i)
        assert tv.value == pytest.approx(math.exp(tv.log), rel=1e-14)
    with pytest.raises(IndexError):
        theta_at(params, 5)
    with pytest.raises(IndexError):
        log_theta_at(params, -1)


def test_theta_at_overflow_reports_inf():
    # large p with theta0 = 1, theta1 = 4, theta^2 = 4: theta_i = 4^(i^2/2)-ish
    params = build_params(1.0, 1.0, 8.0, 0.0, 40, ZEROS, ZEROS,
                          theta=2.0, theta0=1.0, theta1=4.0)
    tv = theta_at(params, 40)
    assert math.isinf(tv.value)
    assert math.isfinite(tv.log)


def test_check_conditions_for_random_valid_params():
    rng = np.random.default_rng(3)
    for _ in range(25):
        a = float(rng.uniform(0.1, 10.0))
        b = float(rng.uniform(0.1, 10.0))
        mu = float(rng.uniform(0.05, 4.0))
        p = int(rng.integers(2, 13))
        params = build_params(a, b, mu, 0.0, p, ZEROS, ZEROS)
        report = check_conditions(params, a, b)
        assert report.passed, report.failures()
        assert report.recurrence_residual <= 1e-9
        assert np.allclose(params.log_theta_seq(), recurrence_logs(params),
                           atol=1e-9)


def test_weight_ratios_decrease_so_first_check_suffices():
    params = build_params(1.0, 2.0, 0.7, 0.0, 6, ZEROS, ZEROS)
    logs = params.log_theta_seq()
    ratios = logs[:-1] - logs[1:]          # log(theta_i / theta_{i+1})
    assert np.all(np.diff(ratios) < 0.0)
    assert ratios[0] < math.log(params.mu)


def test_tampered_weights_fail_ratio_check():
    params = build_params(1.0, 1.0, 0.5, 0.0, 4, ZEROS, ZEROS)
    bad = dataclasses.replace(params, log_theta0=math.log(0.6))
    report = check_conditions(bad, 1.0, 1.0)
    assert not report.mu_condition_ok
    assert not report.passed
    assert "theta_i/theta_{i+1} < mu" in report.failures()


# ---------------------------------------------------------------------------
# Positive parts and H
# ---------------------------------------------------------------------------

def test_positive_parts():
    params = dataclasses.replace(params_128(), u_bar0=1.0, v_bar0=2.0)
    assert positive_parts(params, 0.5, 1.0) == (0.0, 0.0, 0, 0)
    U, V, sU, sV = positive_parts(params, 1.5, 2.25)
    assert (U, V, sU, sV) == (0.5, 0.25, 1, 1)
    # the kink: sgn(0) = 0
    assert positive_parts(params, 1.0, 5.0)[2] == 0


def test_h_value_examples():
    params = params_128(p=2)
    assert h_value(params, 0.0, 0.0) == 0.0
    # binom * theta * U^i V^(2-i): 1*1*1 + 2*2*1 + 1*8*1 = 13
    assert h_value(params, 1.0, 1.0) == pytest.approx(13.0)
    # only the pure-V monomial survives: theta_0 * 3^2 = 9
    assert h_value(params, 0.0, 3.0) == pytest.approx(9.0)


def test_h_value_nonnegative():
    rng = np.random.default_rng(4)
    params = build_params(1.0, 3.0, 0.8, 2.0, 4,
                          np.full(3, 1.0), np.full(3, 0.5))
    for _ in range(200):
        u, v = rng.uniform(0.0, 10.0, size=2)
        assert h_value(params, float(u), float(v)) >= 0.0


def test_h_value_flags_non_finite():
    params = params_128()
    assert math.isinf(h_value(params, math.inf, 0.0))
    assert math.isinf(h_value(params, math.nan, 0.0))


def test_lyapunov_L_zero_iff_below_bounds():
    grid = Grid(21, 1.0)
    params = build_params(1.0, 1.0, 0.5, 0.0, 4,
                          np.full(21, 2.0), np.full(21, 1.0))
    u = np.full(21, 2.0)
    v = np.full(21, 1.0)
    assert lyapunov_L(params, SimState(0.0, u, v, 1e-3), grid) == 0.0
    # one node barely above a bound makes L strictly positive
    v2 = v.copy()
    v2[13] += 1e-8
    assert lyapunov_L(params, SimState(0.0, u, v2, 1e-3), grid) > 0.0


def test_lyapunov_L_homogeneous_value():
    grid = Grid(11, 1.0)
    params = params_128(p=2)
    state = SimState(0.0, np.ones(11), np.ones(11), 1e-3)
    assert lyapunov_L(params, state, grid) == pytest.approx(13.0)


def test_lyapunov_L_quadrature_refinement():
    # trapezoid order: refining the grid changes L at O(h^2)
    params = build_params(1.0, 1.0, 0.5, 0.0, 4, ZEROS, ZEROS)

    def L_at(n):
        grid = Grid(n, 1.0)
        x = grid.nodes()
        u = 0.5 + np.exp(x) * x
        v = 0.3 + x ** 3
        return lyapunov_L(params, SimState(0.0, u, v, 1e-3), grid)

    d1 = abs(L_at(51) - L_at(101))
    d2 = abs(L_at(101) - L_at(201))
    assert d2 < d1 / 2.5


# ---------------------------------------------------------------------------
# Gradient quadratics, dissipation, reaction
# ---------------------------------------------------------------------------

def test_quadratic_Ti_sign_cases():
    params = params_128(p=2)
    assert quadratic_Ti(params, 0, 1.0, 1.0, 0, 0, 3.0, -2.0) == 0.0
    # single square term with sgnV = 0: a * (theta_2/theta_1) * xi^2
    val = quadratic_Ti(params, 0, 1.0, 1.0, 1, 0, 3.0, -2.0)
    assert val == pytest.approx(1.0 * 4.0 * 9.0)
    assert quadratic_Ti(params, 0, 1.0, 1.0, 0, 1, 3.0, -2.0) >= 0.0


def test_quadratic_Ti_normalized_example():
    # raw arithmetic gives 1*8 - 2*2 + 1*1 = 5; the function reports the
    # theta_1-normalized value 5/2, same sign
    params = params_128(p=2)
    val = quadratic_Ti(params, 0, 1.0, 1.0, 1, 1, 1.0, -1.0)
    assert val == pytest.approx(2.5)
    assert val * 2.0 == pytest.approx(5.0)
    # discriminant (a+b)^2 t1^2 - 4ab t0 t2 = 16 - 32 < 0
    assert (2.0 ** 2) * 4.0 - 4.0 * 1.0 * 8.0 < 0.0


def test_quadratic_Ti_positive_semidefinite_sampled():
    rng = np.random.default_rng(5)
    params = build_params(1.0, 3.0, 0.7, 0.0, 6, ZEROS, ZEROS)
    xi = rng.uniform(-10.0, 10.0, size=2000)
    eta = rng.uniform(-10.0, 10.0, size=2000)
    for i in range(5):
        for sU, sV in ((0, 0), (1, 0), (0, 1), (1, 1)):
            vals = quadratic_Ti(params, i, 1.0, 3.0, sU, sV, xi, eta)
            assert np.all(np.asarray(vals) >= 0.0)
    with pytest.raises(IndexError):
        quadratic_Ti(params, 5, 1.0, 3.0, 1, 1, 1.0, 1.0)


def brute_force_I(params, state, grid, a, b):
    """Plain-loop rebuild of the dissipation sum, weights from the
    recurrence iteration rather than the closed form."""
    logs = recurrence_logs(params)
    th = np.exp(logs - logs.max())
    h = grid.spacing
    n = grid.n_nodes
    u, v = state.u, state.v
    du = np.empty(n)
    dv = np.empty(n)
    for j in range(n):
        if j == 0:
            du[j] = (u[1] - u[0]) / h
            dv[j] = (v[1] - v[0]) / h
        elif j == n - 1:
            du[j] = (u[-1] - u[-2]) / h
            dv[j] = (v[-1] - v[-2]) / h
        else:
            du[j] = (u[j + 1] - u[j - 1]) / (2 * h)
            dv[j] = (v[j + 1] - v[j - 1]) / (2 * h)
    p = params.p
    total = 0.0
    for j in range(n):
        U = max(u[j] - params.u_bar0, 0.0)
        V = max(v[j] - params.v_bar0, 0.0)
        sU = 1.0 if U > 0 else 0.0
        sV = 1.0 if V > 0 else 0.0
        acc = 0.0
        for i in range(p - 1):
            Ti = (a * th[i + 2] * sU * du[j] ** 2
                  + (a + b) * th[i + 1] * sU * sV * du[j] * dv[j]
                  + b * th[i] * sV * dv[j] ** 2)
            acc += math.comb(p - 2, i) * Ti * U ** i * V ** (p - 2 - i)
        w = h / 2 if j in (0, n - 1) else h
        total += w * acc
    return -p * (p - 1) * total


def test_dissipation_trivial_cases():
    grid = Grid(21, 1.0)
    params = build_params(1.0, 2.0, 0.5, 0.0, 4,
                          np.full(21, 5.0), np.full(21, 5.0))
    rng = np.random.default_rng(6)
    below = SimState(0.0, rng.uniform(0, 4, 21), rng.uniform(0, 4, 21), 1e-3)
    assert dissipation_I(params, below, grid, 1.0, 2.0) == 0.0
    homogeneous = SimState(0.0, np.full(21, 9.0), np.full(21, 9.0), 1e-3)
    assert dissipation_I(params, homogeneous, grid, 1.0, 2.0) == 0.0


def test_dissipation_nonpositive_and_matches_brute_force():
    rng = np.random.default_rng(7)
    grid = Grid(17, 1.3)
    for _ in range(20):
        a = float(rng.uniform(0.2, 5.0))
        b = float(rng.uniform(0.2, 5.0))
        params = build_params(a, b, 0.5, 0.0, 4, ZEROS, ZEROS)
        params = dataclasses.replace(params, u_bar0=1.0, v_bar0=1.0)
        u = rng.uniform(0.0, 3.0, grid.n_nodes)
        v = rng.uniform(0.0, 3.0, grid.n_nodes)
        state = SimState(0.0, u, v, 1e-3)
        val = dissipation_I(params, state, grid, a, b)
        assert val <= 0.0
        ref = brute_force_I(params, state, grid, a, b)
        assert val == pytest.approx(ref, rel=1e-10, abs=1e-12)


def test_reaction_J_trivial_zero():
    grid = Grid(11, 1.0)
    params = build_params(1.0, 1.0, 0.5, 0.0, 4,
                          np.full(11, 3.0), np.full(11, 3.0))
    state = SimState(0.0, np.ones(11), np.ones(11), 1e-3)
    assert reaction_J(params, state, grid, BlowupExample()) == 0.0


def test_reaction_J_positive_for_blowup_node():
    # one node above both bounds where f > 0 and g > 0
    grid = Grid(11, 1.0)
    params = build_params(1.0, 1.0, 0.5, 0.5, 4, ZEROS, ZEROS)
    assert (params.u_bar0, params.v_bar0) == (0.5, 0.5)
    u = np.zeros(11)
    v = np.zeros(11)
    u[5] = 0.75                      # U = 0.25, f = 0.1875 * v^2 > 0
    v[5] = params.v_bar0 + 1.0       # V = 1.0
    state = SimState(0.0, u, v, 1e-3)
    assert reaction_J(params, state, grid, BlowupExample()) > 0.0


def test_reaction_J_combustion_boundary_term():
    # U = 0 everywhere, V > 0: only theta_0 * g * V^(p-1) survives
    grid = Grid(11, 1.0)
    p = 4
    params = build_params(1.0, 2.0, 0.5, 0.0, p,
                          np.full(11, 1.0), np.full(11, 1.0))
    state = SimState(0.0, np.full(11, 1.0), np.full(11, 2.0), 1e-3)
    model = Combustion(1)
    val = reaction_J(params, state, grid, model)
    logs = recurrence_logs(params)
    g = 1.0 * math.exp(2.0)
    expected = p * math.exp(logs[0] - logs.max()) * g * 1.0 ** (p - 1)
    assert val == pytest.approx(expected, rel=1e-12)
    assert val > 0.0
    # with the reactant absent, g = 0 and the term vanishes exactly
    state0 = SimState(0.0, np.zeros(11), np.full(11, 2.0), 1e-3)
    assert reaction_J(params, state0, grid, model) == 0.0


def test_scale_consistency():
    # multiplying every weight by a common factor leaves the signs of I
    # and J and the zero set of L unchanged (I, J are exactly unchanged:
    # the shared normalization divides the factor out; L scales by it)
    grid = Grid(15, 1.0)
    rng = np.random.default_rng(8)
    params = build_params(1.0, 2.0, 0.5, 0.0, 4, ZEROS, ZEROS)
    params = dataclasses.replace(params, u_bar0=0.5, v_bar0=0.5)
    c = 37.0
    scaled = dataclasses.replace(
        params,
        log_theta0=params.log_theta0 + math.log(c),
        log_theta1=params.log_theta1 + math.log(c))
    u = rng.uniform(0.0, 2.0, 15)
    v = rng.uniform(0.0, 2.0, 15)
    state = SimState(0.0, u, v, 1e-3)
    model = BlowupExample()
    assert dissipation_I(scaled, state, grid, 1.0, 2.0) == pytest.approx(
        dissipation_I(params, state, grid, 1.0, 2.0), rel=1e-12)
    assert reaction_J(scaled, state, grid, model) == pytest.approx(
        reaction_J(params, state, grid, model), rel=1e-12)
    L1 = lyapunov_L(params, state, grid)
    L2 = lyapunov_L(scaled, state, grid)
    assert L2 == pytest.approx(c * L1, rel=1e-12)
    below = SimState(0.0, np.full(15, 0.2), np.full(15, 0.2), 1e-3)
    assert lyapunov_L(params, below, grid) == 0.0
    assert lyapunov_L(scaled, below, grid) == 0.0
