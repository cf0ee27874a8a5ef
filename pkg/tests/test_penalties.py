import math

import numpy as np
import pytest

from almreg.operators import DiagonalOperator, IdentityOperator
from almreg.penalties import (
    LqPenalty,
    QuadraticPenalty,
    Subgradient,
    SubproblemSpec,
    TVPenalty,
    bregman,
    build_penalty,
    prox_power,
    prox_scalar_power,
    symmetric_bregman,
)
from almreg.utils.exceptions import ConfigError, DomainError, InvalidSubgradientError


def _spec(b, tau, tol=1e-10, max_inner_iters=5000, K=None):
    b = np.asarray(b, dtype=np.float64)
    K = IdentityOperator(b.size) if K is None else K
    return SubproblemSpec(K=K, b=b, tau=tau, tol=tol, max_inner_iters=max_inner_iters)


class TestProx:
    def test_soft_threshold(self):
        np.testing.assert_allclose(prox_power([3.0, -0.5, -2.0], 1.0, 1.0), [2.0, 0.0, -1.0])

    def test_quadratic_shrink(self):
        assert prox_scalar_power(3.0, 1.0, 2.0) == pytest.approx(1.0)

    @pytest.mark.parametrize('q', [1.2, 1.5, 1.8])
    def test_power_root_satisfies_optimality(self, q):
        z = np.array([-4.0, -0.3, 0.0, 0.7, 2.5])
        lam = 0.8
        x = prox_power(z, lam, q)
        assert np.all(np.abs(x) <= np.abs(z))
        np.testing.assert_array_equal(np.sign(x), np.sign(z))
        magnitude = np.abs(x)
        np.testing.assert_allclose(magnitude + lam * q * magnitude ** (q - 1.0), np.abs(z), atol=1e-10)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            prox_power([1.0], 0.0, 1.5)
        with pytest.raises(DomainError):
            prox_power([1.0], 1.0, 2.5)


class TestLq:
    def test_q_range(self):
        with pytest.raises(ConfigError):
            LqPenalty(0.5)
        assert math.isinf(LqPenalty(1.0).r)
        assert LqPenalty(1.5).r == pytest.approx(3.0)

    def test_l1_conjugate_is_ball_indicator(self):
        pen = LqPenalty(1.0)
        assert pen.conjugate([1.0, -0.3]) == 0.0
        assert math.isinf(pen.conjugate([1.1, 0.0]))

    def test_q2_conjugate(self):
        assert LqPenalty(2.0).conjugate([2.0, -4.0]) == pytest.approx(5.0)

    def test_fenchel_young_equality_at_subgradient(self):
        pen = LqPenalty(1.5)
        u = np.array([0.5, -2.0, 0.0, 1.0])
        xi = pen.subgradient(u)
        assert pen.fenchel_gap(u, xi) == pytest.approx(0.0, abs=1e-12)
        assert pen.fenchel_gap(u, xi + 0.1) > 0.0

    def test_l1_subproblem_is_soft_threshold(self):
        b = np.array([2.0, -0.2, 0.9, -3.0])
        u, diag = LqPenalty(1.0).solve_subproblem(_spec(b, tau=2.0))
        np.testing.assert_allclose(u, prox_power(b, 0.5, 1.0), atol=1e-10)
        assert diag.solver == 'fista'
        assert not diag.inexact

    def test_lq_subproblem_matches_prox_on_identity(self):
        b = np.array([1.5, -0.4, 0.0])
        u, _ = LqPenalty(1.5).solve_subproblem(_spec(b, tau=1.0, tol=1e-12))
        np.testing.assert_allclose(u, prox_power(b, 1.0, 1.5), atol=1e-8)


class TestQuadratic:
    def test_identity_subproblem(self):
        b = np.array([1.0, -2.0, 4.0])
        u, diag = QuadraticPenalty().solve_subproblem(_spec(b, tau=3.0))
        np.testing.assert_allclose(u, 0.75 * b, atol=1e-8)
        assert diag.solver == 'cg'

    def test_weighted_conjugate(self):
        pen = QuadraticPenalty(DiagonalOperator([2.0, 1.0]))
        assert pen.has_conjugate
        assert pen([1.0, 1.0]) == pytest.approx(2.5)
        assert pen.conjugate([2.0, 1.0]) == pytest.approx(1.0)
        np.testing.assert_allclose(pen.subgradient([1.0, 1.0]), [4.0, 1.0])

    def test_singular_weight_has_no_conjugate(self):
        pen = QuadraticPenalty(DiagonalOperator([1.0, 0.0]))
        assert not pen.has_conjugate
        assert pen.conjugate([1.0, 1.0]) is None


class TestTV:
    def test_values(self):
        assert TVPenalty(4)([0.0, 0.0, 1.0, 1.0]) == pytest.approx(1.0)
        image = np.array([[0.0, 1.0], [1.0, 1.0]]).ravel()
        assert TVPenalty((2, 2))(image) == pytest.approx(2.0)
        assert TVPenalty((2, 2), flavor='isotropic')(image) == pytest.approx(math.sqrt(2.0))

    def test_no_conjugate(self):
        pen = TVPenalty(3)
        assert not pen.has_conjugate
        assert pen.fenchel_gap([0.0, 1.0, 2.0], [0.0, 0.0, 0.0]) is None

    @pytest.mark.parametrize('tau, expected', [(0.5, [0.5, 0.5]), (10.0, [0.1, 0.9])])
    def test_bvls_two_point_solution(self, tau, expected):
        u, diag = TVPenalty(2).solve_subproblem(_spec([0.0, 1.0], tau=tau))
        assert diag.solver == 'bvls'
        np.testing.assert_allclose(u, expected, atol=1e-8)

    def test_pdhg_agrees_with_bvls(self):
        b = np.array([0.0, 0.2, 1.1, 0.9, 1.0, -0.5])
        exact, _ = TVPenalty(6, solver='bvls').solve_subproblem(_spec(b, tau=2.0))
        approx, diag = TVPenalty(6, solver='pdhg').solve_subproblem(_spec(b, tau=2.0, tol=1e-9, max_inner_iters=50000))
        assert diag.solver == 'pdhg'
        np.testing.assert_allclose(approx, exact, atol=1e-5)

    @pytest.mark.parametrize('grid, tau', [(64, 50.0), (64, 400.0), ((6, 6), 20.0)])
    def test_bvls_solution_is_kkt_exact(self, grid, tau):
        pen = TVPenalty(grid)
        rng = np.random.default_rng(3)
        size = pen.grid.size
        b = np.repeat([0.0, 1.0, -0.5, 0.7], size // 4) + 0.05 * rng.standard_normal(size)
        u, diag = pen.solve_subproblem(_spec(b, tau=tau, tol=1e-10))
        assert diag.solver == 'bvls'
        assert not diag.inexact
        assert diag.measure <= 1e-10

        jumps = np.abs(pen.D.apply(u))
        assert not np.any((jumps > 1e-12) & (jumps < 1e-6))

        def objective(v):
            return 0.5 * tau * float(np.sum((v - b) ** 2)) + pen(v)

        for _ in range(20):
            assert objective(u) <= objective(u + 1e-4 * rng.standard_normal(size)) + 1e-12

    def test_bad_options(self):
        with pytest.raises(ConfigError):
            TVPenalty(4, flavor='huber')
        with pytest.raises(ConfigError):
            TVPenalty(4, solver='admm')
        with pytest.raises(ConfigError):
            TVPenalty(2, solver='bvls').solve_subproblem(_spec([0.0, 1.0], tau=1.0, K=DiagonalOperator([1.0, 2.0])))


class TestBregman:
    def test_nonnegative_for_true_subgradients(self):
        rng = np.random.default_rng(0)
        pen = LqPenalty(1.5)
        for _ in range(20):
            u, v = rng.standard_normal(5), rng.standard_normal(5)
            xi, eta = pen.subgradient(u), pen.subgradient(v)
            assert bregman(pen, v, u, Subgradient(xi)) >= 0.0
            assert symmetric_bregman(pen, v, u, xi, eta) >= 0.0

    def test_quadratic_bregman_is_half_squared_distance(self):
        pen = QuadraticPenalty()
        u, v = np.array([1.0, 2.0]), np.array([0.0, 4.0])
        assert bregman(pen, v, u, u) == pytest.approx(2.5)
        assert symmetric_bregman(pen, v, u, u, v) == pytest.approx(5.0)

    def test_rejects_non_subgradient(self):
        with pytest.raises(InvalidSubgradientError):
            bregman(LqPenalty(1.0), [-1.0], [1.0], [-1.0])


def test_build_penalty():
    assert isinstance(build_penalty('quadratic'), QuadraticPenalty)
    assert build_penalty({'name': 'lq', 'q': 1.25}).q == 1.25
    tv = build_penalty({'name': 'tv', 'grid': [4, 4], 'flavor': 'isotropic'})
    assert tv.dim == 16
    with pytest.raises(ConfigError, match="not in penalty dict"):
        build_penalty({'name': 'elastic_net'})
    with pytest.raises(ConfigError):
        build_penalty({'name': 'tv'})
