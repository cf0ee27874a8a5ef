from .base import NoisyData, ProblemInstance
from .builder import build_problem
from .file import load_problem_file
from .lq import gen_problem_lq
from .noise import add_noise, noise_direction
from .quadratic import gaussian_operator, gen_problem_quadratic
from .registry import PROBLEM_DICT
from .sparse import gen_problem_sparse
from .tv import gen_problem_tv
