from typing import Callable, Dict

from .base import ProblemInstance
from .file import load_problem_file
from .lq import gen_problem_lq
from .quadratic import gen_problem_quadratic
from .sparse import gen_problem_sparse
from .tv import gen_problem_tv

PROBLEM_DICT: Dict[str, Callable[..., ProblemInstance]] = {
    'quadratic': gen_problem_quadratic,
    'sparse': gen_problem_sparse,
    'lq': gen_problem_lq,
    'tv': gen_problem_tv,
    'file': load_problem_file,
}
