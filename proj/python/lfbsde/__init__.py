"""Linear FBSDE well-posedness analysis, transforms and Monte Carlo solver."""

import json

from ._core import (
    CoeffMatrix,
    Error,
    LinearFBSDE,
    LQProblem,
    __version__,
    h_poly,
    l_poly,
    real_roots,
)
from . import _core

__all__ = [
    "CoeffMatrix",
    "Error",
    "LinearFBSDE",
    "LQProblem",
    "check_lemma38",
    "check_monotonicity",
    "check_thm39",
    "equiv_B",
    "equiv_C",
    "h_poly",
    "integrate_dominating",
    "l_poly",
    "parse_config",
    "real_roots",
    "solve_lq",
    "transform",
    "verify_instance",
]


def check_monotonicity(f):
    return json.loads(_core._check_monotonicity(f))


def check_lemma38(f):
    return json.loads(_core._check_lemma38(f))


def check_thm39(f):
    return json.loads(_core._check_thm39(f))


def equiv_B(c, p):
    return json.loads(_core._equiv_B(c, p))


def equiv_C(c, q):
    return json.loads(_core._equiv_C(c, q))


def transform(f, m, n, c=1.0):
    return json.loads(_core._transform(f, m, n, c))


def integrate_dominating(f, dt=1e-3):
    return json.loads(_core._integrate(f, dt))


def verify_instance(f, dt=1e-3, paths=10000, seed=7):
    return json.loads(_core._verify(f, dt, paths, seed))


def solve_lq(lq, printed=False, dt=1e-3, paths=10000, seed=7):
    return json.loads(_core._solve_lq(lq, printed, dt, paths, seed))


def parse_config(text):
    return json.loads(_core._parse_config(text))
