import pytest

from almreg.problems import gen_problem_lq, gen_problem_quadratic, gen_problem_sparse, gen_problem_tv


@pytest.fixture
def scalar_instance():
    """K = 1, p_dagger = 1, so u_dagger = g = 1."""
    return gen_problem_quadratic(1, 1, seed=0, K_kind='identity', p_dagger=[1.0])


@pytest.fixture
def l1_identity_instance():
    """K = I on R^10 with three unit-certified spikes of magnitude in [1.5, 2.5]."""
    return gen_problem_sparse(10, 10, 3, seed=0, K_kind='identity')


@pytest.fixture
def l1_gaussian_instance():
    return gen_problem_sparse(20, 50, 3, seed=0)


@pytest.fixture
def lq_instance():
    return gen_problem_lq(8, 8, 1.5, seed=0)


@pytest.fixture
def tv_instance():
    return gen_problem_tv(16, kind='staircase_1d', seed=0, jumps=3)


@pytest.fixture
def tv_blocks_instance():
    """Uncertified anisotropic 4x4 blocks under K = I, solved by the exact dual route."""
    return gen_problem_tv((4, 4), kind='blocks_2d', seed=0)
