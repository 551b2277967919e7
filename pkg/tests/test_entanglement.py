import numpy as np
import pytest

from msta import oracle, states
from msta.entanglement import (
    ChshSetting,
    chsh_maximize,
    chsh_value,
    concurrence_2q,
    correlator,
    entanglement_entropy,
    measure_update,
    partial_trace,
)
from msta.states import ProductState, bell, local_rotor, product_state, projector_sphere, sphere_state


def sphere00_11():
    c = ProductState.computational
    return projector_sphere(c("00"), c("11"))


def test_partial_trace_of_sphere_state():
    theta = 1.1
    rho = sphere_state(sphere00_11(), theta, 0.4)
    reduced = partial_trace(rho, [0])
    assert np.allclose(reduced.bloch_vector(), [0, 0, np.cos(theta)], atol=1e-12)


def test_partial_trace_product_state():
    rho = product_state(ProductState.computational("01"))
    assert np.allclose(partial_trace(rho, [1]).bloch_vector(), [0, 0, -1], atol=1e-15)


def test_partial_trace_matches_oracle(rng):
    psi = oracle.random_statevector(3, rng)
    rho = states.pure_state_from_amplitudes(psi)
    for keep in ([0], [1], [2], [0, 1], [0, 2], [1, 2]):
        got = partial_trace(rho, keep).matrix()
        want = oracle.partial_trace_matrix(oracle.statevector_density(psi), keep, 3)
        assert np.abs(got - want).max() < 1e-12
    with pytest.raises(ValueError):
        partial_trace(rho, [0, 1, 2])


def test_entropy_endpoints_and_value():
    sph = sphere00_11()
    assert entanglement_entropy(sphere_state(sph, 0.0, 0.0)) == 0.0
    assert abs(entanglement_entropy(sphere_state(sph, np.pi / 2, 0.3)) - 1.0) < 1e-12
    want = -(0.75 * np.log2(0.75) + 0.25 * np.log2(0.25))
    assert abs(entanglement_entropy(sphere_state(sph, np.pi / 3, 0.0)) - want) < 1e-12


def test_entropy_matches_oracle(rng):
    sph = sphere00_11()
    for _ in range(40):
        theta, phi = rng.uniform(0, np.pi), rng.uniform(-np.pi, np.pi)
        rho = sphere_state(sph, theta, phi)
        want = oracle.oracle_entropy(partial_trace(rho, [0]).matrix())
        assert abs(entanglement_entropy(rho) - want) < 1e-9


def test_entropy_same_for_both_cuts(rng):
    psi = oracle.random_statevector(2, rng)
    rho = states.pure_state_from_amplitudes(psi)
    assert abs(entanglement_entropy(rho, 0) - entanglement_entropy(rho, 1)) < 1e-12


def test_entropy_rejects_mixed():
    mixed = states.DensityOperator(0.5 * bell("phi+").mv + 0.5 * bell("psi-").mv)
    with pytest.raises(ValueError):
        entanglement_entropy(mixed)


def test_concurrence():
    assert concurrence_2q(product_state(ProductState.computational("10"))) == 0.0
    for which in ("phi+", "phi-", "psi+", "psi-"):
        assert abs(concurrence_2q(bell(which)) - 1.0) < 1e-12
    rho = sphere_state(sphere00_11(), np.pi / 3, 0.0)
    assert abs(concurrence_2q(rho) - np.sqrt(3) / 2) < 1e-12


def test_measure_update_single_qubit_probability():
    rho = states.bloch_state([0, 0, 1])
    theta = 0.9
    axis = [np.sin(theta), 0.0, np.cos(theta)]
    p_plus, _ = measure_update(rho, 0, axis, +1)
    p_minus, _ = measure_update(rho, 0, axis, -1)
    assert abs(p_plus - (1 + np.cos(theta)) / 2) < 1e-12
    assert abs(p_plus + p_minus - 1.0) < 1e-12


def test_measure_update_singlet_anticorrelation(rng):
    singlet = bell("psi-")
    s = rng.standard_normal(3)
    s /= np.linalg.norm(s)
    prob, post = measure_update(singlet, 0, s, +1)
    assert abs(prob - 0.5) < 1e-12
    assert np.abs(partial_trace(post, [1]).bloch_vector() + s).max() < 1e-10
    assert post.is_pure(1e-10)


def test_measure_update_impossible_outcome():
    rho = product_state(ProductState.computational("00"))
    with pytest.raises(ValueError):
        measure_update(rho, 0, [0, 0, 1], -1)


def test_chsh_single_correlator():
    assert abs(correlator(bell("psi-"), [0, 0, 1], [0, 0, 1]) + 1.0) < 1e-12


def test_chsh_optimal_setting_on_singlet():
    # q, r orthogonal; s, t opposite the diagonals
    q = np.array([1.0, 0, 0])
    r = np.array([0, 0, 1.0])
    s = -(r + q) / np.sqrt(2)
    t = -(r - q) / np.sqrt(2)
    setting = ChshSetting(tuple(q), tuple(r), tuple(s), tuple(t))
    assert abs(chsh_value(bell("psi-"), setting) - 2 * np.sqrt(2)) < 1e-12


def test_chsh_product_state_bound(rng):
    rho = product_state(ProductState.computational("00"))
    worst = 0.0
    for _ in range(2000):
        vs = rng.standard_normal((4, 3))
        vs /= np.linalg.norm(vs, axis=1)[:, None]
        setting = ChshSetting(*(tuple(v) for v in vs))
        worst = max(worst, chsh_value(rho, setting))
    assert worst <= 2.0 + 1e-9


def test_chsh_maximize_bell_states():
    for which in ("phi+", "phi-", "psi+", "psi-"):
        val, setting = chsh_maximize(bell(which), restarts=16)
        assert abs(val - 2 * np.sqrt(2)) < 1e-6
        # the reported setting reproduces the reported value
        assert abs(chsh_value(bell(which), setting) - val) < 1e-12


def test_chsh_maximize_decreases_with_entanglement_angle():
    sph = sphere00_11()
    values = []
    for theta in (np.pi / 2, 1.2, 0.8, 0.4, 0.1):
        val, _ = chsh_maximize(sphere_state(sph, theta, 0.0), restarts=16)
        values.append(val)
    assert all(a > b - 1e-9 for a, b in zip(values, values[1:]))
    assert values[-1] > 2.0  # even weak entanglement violates the inequality


def test_chsh_invariant_under_joint_rotation(rng):
    rho = bell("phi-")
    vs = rng.standard_normal((4, 3))
    vs /= np.linalg.norm(vs, axis=1)[:, None]
    setting = ChshSetting(*(tuple(v) for v in vs))
    base = chsh_value(rho, setting)

    axis = rng.standard_normal(3)
    axis /= np.linalg.norm(axis)
    angle = 1.1
    ra = local_rotor(2, 0, axis, angle)
    rb = local_rotor(2, 1, axis, angle)
    rotated_state = states.apply_rotor(ra.compose(rb), rho)

    def rot(v):
        c, s = np.cos(angle), np.sin(angle)
        v = np.asarray(v)
        return tuple(v * c + np.cross(axis, v) * s + axis * np.dot(axis, v) * (1 - c))

    rotated_setting = ChshSetting(rot(setting.q), rot(setting.r), rot(setting.s), rot(setting.t))
    assert abs(chsh_value(rotated_state, rotated_setting) - base) < 1e-10


def test_tsirelson_bound_sampled(rng):
    for _ in range(10):
        psi = oracle.random_statevector(2, rng)
        rho = states.pure_state_from_amplitudes(psi)
        val, _ = chsh_maximize(rho, restarts=8)
        assert val <= 2 * np.sqrt(2) + 1e-6
