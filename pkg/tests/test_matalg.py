import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from logmaj.generate import GenProfile, gen_operator, haar_unitary
from logmaj.matalg import (
    BlockOperator,
    IllConditionedCut,
    NotHermitian,
    NotPositive,
    ShapeMismatch,
    abs_and_polar,
    abs_op,
    algebra,
    best_approx,
    distribution,
    frac_power,
    func_psd,
    herm_eigen,
    jacobi_eigh,
    mu_op,
    proj_join,
    rank_tau,
    spectral_proj,
)
from logmaj.stepfn import (
    apply_increasing,
    evaluate,
    log_plus,
    max_pointwise_gap,
    pointwise_leq,
    power,
    scale,
)

D312 = BlockOperator.single(np.diag([3.0, 1.0, 2.0]))
NIL = BlockOperator.single(np.array([[0.0, 2.0], [0.0, 0.0]]))


def rand_op(seed, kind="general", dims=(3, 2), weights=(1.0, 0.5), value_range=(0.25, 4.0)):
    return gen_operator(seed, GenProfile(kind, dims, weights, value_range))


def rand_herm(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return a + a.conj().T


# ---------------------------------------------------------------------------
# BlockOperator and algebra


def test_block_operator_validation():
    with pytest.raises(ValueError):
        BlockOperator([(0.0, np.eye(2))])
    with pytest.raises(ValueError):
        BlockOperator([(1.0, np.ones((2, 3)))])
    with pytest.raises(ValueError):
        BlockOperator([])
    with pytest.raises(ShapeMismatch):
        D312 + BlockOperator.single(np.eye(2))
    with pytest.raises(ShapeMismatch):
        D312 @ BlockOperator.single(np.eye(3), weight=2.0)


def test_algebra_examples():
    x, y = rand_op(1), rand_op(2)
    assert algebra(algebra(x, kind="adjoint"), kind="adjoint") == x
    assert algebra(x, algebra(x, kind="identity_like"), "mul") == x
    assert algebra(x, y, "add") == x + y
    assert algebra(x, 2.0, "scale") == x * 2.0
    assert x.tau_one == 3 * 1.0 + 2 * 0.5


@pytest.mark.parametrize("seed", range(20))
def test_trace_is_tracial(seed):
    x, y = rand_op(seed), rand_op(seed + 100)
    assert abs((x @ y).trace() - (y @ x).trace()) <= 1e-10 * (1 + abs((x @ y).trace()))


def test_json_roundtrip():
    x = rand_op(3)
    assert BlockOperator.from_dict(x.to_dict()) == x
    with pytest.raises(ValueError):
        BlockOperator.from_dict({"blocks": [{"weight": 1, "re": [[1, 2]], "im": [[0]]}]})
    with pytest.raises(ValueError):
        BlockOperator.from_dict({})


# ---------------------------------------------------------------------------
# eigen


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_herm_eigen_examples(method):
    np.testing.assert_allclose(herm_eigen(np.diag([3.0, 1, 2]), method).eigenvalues, [3, 2, 1])
    np.testing.assert_allclose(herm_eigen(np.array([[0.0, 1], [1, 0]]), method).eigenvalues,
                               [1, -1], atol=1e-15)
    with pytest.raises(NotHermitian):
        herm_eigen(np.array([[0.0, 1], [0, 0]]), method)


def _residual(a, sd):
    u, w = sd.unitary, sd.eigenvalues
    rec = np.linalg.norm((u * w) @ u.conj().T - a) / max(np.linalg.norm(a), 1e-300)
    orth = np.linalg.norm(u.conj().T @ u - np.eye(len(w)))
    return rec, orth


def test_herm_eigen_residual_lapack_10k():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(10_000):
        a = rand_herm(rng, int(rng.integers(1, 13)))
        sd = herm_eigen(a)
        assert np.all(np.diff(sd.eigenvalues) <= 0)
        worst = max(worst, *_residual(a, sd))
    assert worst <= 1e-10


def test_herm_eigen_residual_jacobi():
    rng = np.random.default_rng(12)
    for _ in range(1000):
        n = int(rng.integers(1, 13))
        a = rand_herm(rng, n)
        sd = herm_eigen(a, "jacobi")
        rec, orth = _residual(a, sd)
        assert rec <= 1e-10 and orth <= 1e-10
        np.testing.assert_allclose(sd.eigenvalues, np.linalg.eigvalsh(a)[::-1],
                                   atol=1e-10 * np.linalg.norm(a))


def test_jacobi_sweep_count_and_degenerate_spectrum():
    rng = np.random.default_rng(5)
    u = haar_unitary(rng, 6)
    a = (u * np.array([2, 2, 2, -1, -1, 0.0])) @ u.conj().T
    w, v, sweeps = jacobi_eigh(a)
    assert sweeps <= 64
    np.testing.assert_allclose(np.sort(w), [-1, -1, 0, 2, 2, 2], atol=1e-12)


# ---------------------------------------------------------------------------
# functional calculus and polar decomposition


def test_frac_power_examples():
    a = BlockOperator.single(np.diag([4.0, 9.0]))
    np.testing.assert_allclose(frac_power(a, 0.5).mats[0], np.diag([2.0, 3.0]), atol=1e-14)
    np.testing.assert_allclose(frac_power(a, 1).mats[0], a.mats[0], atol=1e-14)
    with pytest.raises(ValueError):
        frac_power(a, 0)
    with pytest.raises(NotPositive):
        frac_power(BlockOperator.single(np.diag([1.0, -1.0])), 0.5)


@pytest.mark.parametrize("seed", range(30))
def test_frac_power_roundtrip(seed):
    a = rand_op(seed, "psd", value_range=(0.3, 3.0))
    back = frac_power(frac_power(a, 1 / 3), 3)
    assert (back - a).fro_norm() <= 1e-8 * a.fro_norm()
    half = frac_power(a, 0.5)
    assert (half @ half - a).fro_norm() <= 1e-10 * a.fro_norm()


def test_polar_examples():
    u, ax = abs_and_polar(NIL)
    np.testing.assert_allclose(ax.mats[0], np.diag([0.0, 2.0]), atol=1e-15)
    np.testing.assert_allclose(u.mats[0], [[0, 1], [0, 0]], atol=1e-15)
    np.testing.assert_allclose((u @ ax).mats[0], NIL.mats[0], atol=1e-15)
    p = rand_op(4, "psd")
    u, ap = abs_and_polar(p)
    assert (ap - p).fro_norm() <= 1e-10 * p.fro_norm()
    assert (u - p.identity_like()).fro_norm() <= 1e-9


@pytest.mark.parametrize("seed", range(30))
@pytest.mark.parametrize("kind", ["general", "singular"])
def test_polar_reconstruction_and_partial_isometry(seed, kind):
    x = rand_op(seed, kind)
    u, ax = abs_and_polar(x)
    assert (u @ ax - x).fro_norm() <= 1e-9 * max(1.0, x.fro_norm())
    # u*u is the support projection of |x|
    s = u.H @ u
    assert (s @ s - s).fro_norm() <= 1e-10
    assert (s @ ax - ax).fro_norm() <= 1e-9 * max(1.0, ax.fro_norm())


# ---------------------------------------------------------------------------
# projections


def test_spectral_proj_examples():
    a = BlockOperator.single(np.diag([3.0, 1.0, 0.5]))
    np.testing.assert_allclose(spectral_proj(a, 1.5).mats[0], np.diag([1.0, 0, 0]), atol=1e-15)
    np.testing.assert_allclose(spectral_proj(a, 0.1).mats[0], np.eye(3), atol=1e-15)
    with pytest.raises(IllConditionedCut):
        spectral_proj(a, 1.0)


@pytest.mark.parametrize("seed", range(20))
def test_spectral_proj_is_projection(seed):
    a = rand_op(seed, "psd", value_range=(0.5, 2.0))
    s = float(np.median(np.concatenate([np.linalg.eigvalsh(m) for m in a.mats])))
    s += 1e-3  # move off the median eigenvalue
    p = spectral_proj(a, s)
    assert (p @ p - p).fro_norm() <= 1e-10
    assert (p.H - p).fro_norm() <= 1e-10


def test_proj_join_examples():
    p = BlockOperator.single(np.diag([1.0, 0, 0]))
    q = BlockOperator.single(np.diag([0.0, 1, 0]))
    assert (proj_join(p, p) - p).fro_norm() <= 1e-12
    r = proj_join(p, q)
    assert rank_tau(r) == 2
    np.testing.assert_allclose(r.mats[0], np.diag([1.0, 1, 0]), atol=1e-12)


@pytest.mark.parametrize("seed", range(20))
def test_proj_join_dominates(seed):
    p, q = rand_op(seed, "projection"), rand_op(seed + 50, "projection")
    r = proj_join(p, q)
    for e in (r @ p - p, r @ q - q, r @ r - r):
        assert e.fro_norm() <= 1e-10
    assert rank_tau(r) <= rank_tau(p) + rank_tau(q) + 1e-12


# ---------------------------------------------------------------------------
# mu, distribution, best approximation


def test_mu_examples():
    assert mu_op(D312).pieces == [(1.0, 3.0), (1.0, 2.0), (1.0, 1.0)]
    x = BlockOperator([(0.5, np.array([[2.0]])), (2.0, np.array([[1.0]]))])
    assert mu_op(x).pieces == [(0.5, 2.0), (2.0, 1.0)]
    m = mu_op(NIL)
    assert m.pieces == [(1.0, 2.0)] and m.tail == 0.0


def test_distribution_examples():
    assert distribution(D312, 1.5) == 2
    assert distribution(D312, 3.0) == 0 and distribution(D312, 10.0) == 0


@pytest.mark.parametrize("seed", range(40))
def test_mu_matches_distribution_oracle(seed):
    x = rand_op(seed, "general", dims=(4, 3, 2), weights=(1.0, 0.3, 2.0))
    sv = oracles.singular_values_eig(x)
    widths = np.concatenate([np.full(len(s), c) for c, s in zip(x.weights, sv)])
    values = np.concatenate(sv)
    mu = mu_op(x)
    rng = np.random.default_rng(seed)
    for t in rng.uniform(0, x.tau_one * 1.1, 20):
        if np.min(np.abs(mu.breakpoints - t)) > 1e-9:
            assert evaluate(mu, t) == pytest.approx(
                oracles.mu_from_distribution(widths, values, t), abs=1e-10)
    for s in values:
        assert distribution(x, s * (1 + 1e-9)) == pytest.approx(
            oracles.distribution(widths, values, s * (1 + 1e-9)))


def test_best_approx_examples():
    assert best_approx(D312, 0) == pytest.approx(3.0)
    assert best_approx(D312, 2) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        best_approx(D312, 3)
    with pytest.raises(ValueError):
        best_approx(rand_op(0), 0)


@pytest.mark.parametrize("seed", range(20))
def test_best_approx_sweep(seed):
    x = gen_operator(seed, GenProfile("general", (5,), (1.0,)))
    mu = mu_op(x)
    for k in range(5):
        assert best_approx(x, k) == pytest.approx(evaluate(mu, k), rel=1e-9)


# ---------------------------------------------------------------------------
# invariants


@given(st.integers(0, 2**32 - 1))
def test_mu_invariances(seed):
    x = rand_op(seed)
    mu = mu_op(x)
    for other in (mu_op(x.H), mu_op(abs_op(x))):
        assert max(abs(a - b) for a, b in zip(other.values, mu.values)) <= 1e-10 * mu.values[0]
        assert len(other) == len(mu)


@given(st.integers(0, 2**32 - 1))
def test_mu_contraction_bound(seed):
    x = rand_op(seed)
    u = rand_op(seed + 1, "contraction", value_range=(0.1, 1.0))
    v = rand_op(seed + 2, "contraction", value_range=(0.1, 1.0))
    nu, nv = mu_op(u).values[0], mu_op(v).values[0]
    assert pointwise_leq(mu_op(u @ x @ v), apply_increasing(mu_op(x), scale(nu * nv)))


@given(st.integers(0, 2**32 - 1), st.sampled_from([0.5, 2.0, 3.0]))
def test_mu_of_power(seed, alpha):
    x = rand_op(seed)
    lhs = apply_increasing(mu_op(x), power(alpha))
    rhs = mu_op(frac_power(abs_op(x), alpha))
    assert max_pointwise_gap(lhs, rhs) <= 1e-8


def test_func_psd_log_plus():
    a = BlockOperator.single(np.diag([math.e, 0.5]))
    np.testing.assert_allclose(func_psd(a, log_plus()).mats[0], np.diag([1.0, 0.0]), atol=1e-14)
