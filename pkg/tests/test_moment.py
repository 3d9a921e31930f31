from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from implode import git, lp
from implode import moment as mm

RNG = np.random.default_rng(20261015)


def _cvec(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


# --- examples --------------------------------------------------------------------


def test_antipodal_pairs_have_zero_moment():
    a = git.p1p4_action()
    p = _cvec(RNG, 2)
    q = np.array([-p[1].conj(), p[0].conj()])
    mu = mm.moment_coefficients(a, [p, p, q, q])
    assert np.linalg.norm(mu) < 1e-12


def test_four_equal_points():
    a = git.p1p4_action()
    p = _cvec(RNG, 2)
    one = mm.moment_coefficients(mm.product_p1(1), [p])
    mu = mm.moment_coefficients(a, [p] * 4)
    assert np.allclose(mu, 4 * one, atol=1e-12)
    assert np.linalg.norm(mu) == pytest.approx(4.0, abs=1e-12)


def test_p1_image_is_unit_sphere():
    a = mm.product_p1(1)
    assert np.linalg.norm(mm.moment_coefficients(a, [[1, 0]])) == pytest.approx(1.0, abs=1e-14)
    for _ in range(20):
        assert np.linalg.norm(mm.moment_coefficients(a, [_cvec(RNG, 2)])) == pytest.approx(1.0, abs=1e-12)


def test_poles_are_antipodal():
    a = mm.product_p1(1)
    north = mm.moment_coefficients(a, [[1, 0]])
    south = mm.moment_coefficients(a, [[0, 1]])
    assert np.allclose(north, -south, atol=1e-14)


def test_moment_value_is_skew_hermitian_traceless():
    a = mm.defining_action(3)
    m = mm.fubini_study_moment(a, [_cvec(RNG, 3)])
    assert np.allclose(m, -m.conj().T, atol=1e-12)
    assert abs(np.trace(m)) < 1e-12


def test_zero_vector_rejected():
    with pytest.raises(ValueError):
        mm.moment_coefficients(mm.product_p1(1), [[0, 0]])
    with pytest.raises(ValueError):
        mm.torus_moment(mm.TorusDiagonal([1, -1]), [0, 0])


@pytest.mark.parametrize("x, expected", [([1, 1], 0.0), ([1, 0], 1.0), ([2, 1], 0.6)])
def test_torus_moment_examples(x, expected):
    act = mm.TorusDiagonal([1, -1])
    assert mm.torus_moment(act, x)[0] == pytest.approx(expected, abs=1e-15)


def test_end_moment_examples():
    for m in (np.eye(3), np.zeros((2, 2))):
        left, right = mm.end_moment(m)
        assert np.allclose(left, 0) and np.allclose(right, 0)
    left, _ = mm.end_moment(np.diag([1.0, 0.0]))
    assert np.allclose(left, np.diag([0.5j, -0.5j]))


def test_end_moment_rectangular():
    m = _cvec(RNG, 12).reshape(3, 4)
    left, right = mm.end_moment(m)
    assert left.shape == (3, 3) and right.shape == (4, 4)
    for v in (left, right):
        assert np.allclose(v, -v.conj().T, atol=1e-12)
        assert abs(np.trace(v)) < 1e-12


def test_matrix_generators_validation():
    basis = mm.su_basis(2)
    with pytest.raises(ValueError):
        mm.matrix_generators(np.stack([basis[0], basis[0], basis[1]]), basis)
    with pytest.raises(ValueError):
        mm.matrix_generators(np.stack([1j * np.eye(2)] * 3), basis)
    with pytest.raises(ValueError):
        bad = basis.copy()
        bad[0] = np.array([[0, 1], [1, 0]])
        mm.matrix_generators(bad, basis)


# --- properties ------------------------------------------------------------------


@pytest.mark.parametrize("action", [mm.defining_action(3), git.p1p4_action(), mm.sl2_sym_product([[0, 1], [2]], [5, 1])])
def test_equivariance(action):
    n = action.n
    for _ in range(100):
        x = tuple(_cvec(RNG, f.dim) for f in action.factors)
        k = mm.random_su(n, RNG)
        g = mm.from_unitary(action, k)
        lhs = mm.fubini_study_moment(action, mm.apply(g, x))
        rhs = k @ mm.fubini_study_moment(action, x) @ k.conj().T
        assert np.linalg.norm(lhs - rhs) < 1e-9


@settings(max_examples=50, deadline=None)
@given(
    st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False, allow_infinity=False),
    st.integers(0, 2**31),
)
def test_scale_invariance(c, seed):
    rng = np.random.default_rng(seed)
    a = mm.defining_action(4)
    x = _cvec(rng, 4)
    assert np.allclose(mm.moment_coefficients(a, [c * x]), mm.moment_coefficients(a, [x]), atol=1e-12)


def test_torus_moment_in_hull_of_present_weights():
    # Gaussian-integer coordinates keep the moment exactly rational
    act = mm.TorusDiagonal([(2, -1, -1), (-1, 2, -1), (-1, -1, 2), (1, 0, -1)])
    for _ in range(50):
        x = RNG.integers(-3, 4, 4) + 1j * RNG.integers(-3, 4, 4)
        if not x.any():
            continue
        p = [Fraction(int(round(abs(c) ** 2))) for c in x]
        present = [(w, q) for w, q in zip(act.weights, p) if q]
        mu = [sum(q * w[i] for w, q in present) / sum(p) for i in range(3)]
        assert np.allclose(mm.torus_moment(act, x), [float(v) for v in mu], atol=1e-12)
        rows = [[w[i] for w, _ in present] for i in range(3)] + [[1] * len(present)]
        assert lp.feasible(rows, mu + [1]).feasible


@pytest.mark.parametrize("n", [2, 3, 4])
def test_diagonal_part_matches_torus_moment(n):
    action = mm.defining_action(n)
    weights = mm.torus_weights_mu(action, 0)
    torus = mm.TorusDiagonal([tuple(w) for w in weights])
    for _ in range(20):
        x = _cvec(RNG, n)
        diag = mm.torus_projection(mm.fubini_study_moment(action, [x]))
        assert np.allclose(diag, mm.torus_moment(torus, x), atol=1e-10)


def test_sym_power_matches_tensor_reference():
    for k in range(0, 5):
        for _ in range(5):
            g = RNG.standard_normal((2, 2)) + 1j * RNG.standard_normal((2, 2))
            g /= np.sqrt(np.linalg.det(g))
            assert np.allclose(mm.sym_power_matrix(g, k), oracles.sym_rep_reference(g, k), atol=1e-10)


def test_sym_power_is_a_homomorphism():
    for k in (1, 2, 3):
        g, h = mm.random_su(2, RNG), mm.random_su(2, RNG)
        assert np.allclose(mm.sym_power_matrix(g @ h, k), mm.sym_power_matrix(g, k) @ mm.sym_power_matrix(h, k))


def test_unitary_log_inverts_exponential():
    for n in (2, 3, 4):
        k = mm.random_su(n, RNG)
        a = mm.unitary_log(k)
        assert np.allclose(a, -a.conj().T, atol=1e-12)
        assert np.allclose(scipy.linalg.expm(a), k, atol=1e-10)


# --- flow --------------------------------------------------------------------------


def test_flow_balanced_config_does_not_move():
    a = git.p1p4_action()
    x = [git.p1_vector(z) for z in (0, 0, "inf", "inf")]
    res = mm.norm_square_flow(a, x)
    assert res.final_norm < 1e-12
    assert res.iterations == 0


def test_flow_distinct_points_converge():
    a = git.p1p4_action()
    x = [git.p1_vector(z) for z in (0, 1, "inf", 1j)]
    res = mm.norm_square_flow(a, x, tol=1e-7)
    assert res.final_norm < 1e-6
    assert res.converged


def test_flow_three_coincident_stays_away_from_zero():
    a = git.p1p4_action()
    x = [git.p1_vector(z) for z in (0.5, 0.5, 0.5, 2j)]
    res = mm.norm_square_flow(a, x, max_iter=2000)
    # the orbit closure misses the zero fibre; the infimum is 2
    assert not res.converged
    assert res.final_norm > 2 - 1e-3


@pytest.mark.parametrize("seed", range(5))
def test_flow_trace_non_increasing_and_group_element_tracks_point(seed):
    rng = np.random.default_rng(seed)
    a = mm.sl2_sym_product([[0, 1], [2]], [3, 1])
    x = mm.normalize(tuple(_cvec(rng, f.dim) for f in a.factors))
    res = mm.norm_square_flow(a, x, max_iter=500)
    assert all(b <= t + 1e-15 for t, b in zip(res.trace, res.trace[1:]))
    moved = mm.normalize(mm.apply(res.group_element, x))
    for u, v in zip(moved, res.final_point):
        assert abs(abs(np.vdot(u, v)) - 1) < 1e-8


def test_flow_on_defining_action_drives_norm_down():
    a = mm.defining_action(3)
    res = mm.norm_square_flow(a, [_cvec(RNG, 3)], max_iter=200)
    assert res.trace[-1] <= res.trace[0]
    assert all(b <= t + 1e-15 for t, b in zip(res.trace, res.trace[1:]))
