"""Matrix-free conjugate gradient minimization.

Memoryless-BFGS CGM with Beale/Powell restarts and the hybrid
cubic-regularized variant, plus the test-problem generators. The heavy
lifting lives in the `_cgmin` extension module.
"""

from _cgmin import (  # noqa: F401
    Problem,
    gen_glasso,
    gen_huber,
    lambda_curve,
    line_search,
    load_instance,
    make_problem,
    problem_names,
    run_bench,
    solve,
)

__all__ = [
    "Problem",
    "gen_glasso",
    "gen_huber",
    "lambda_curve",
    "line_search",
    "load_instance",
    "make_problem",
    "problem_names",
    "run_bench",
    "solve",
]
