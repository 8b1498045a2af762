"""Verification batteries: simulation against analytic ground truth.

Each battery returns a JSON-ready report dict with one row per check and an
overall 'passed' flag.  Rows compare a Monte Carlo estimate against an
independent target (closed-form probability, closed-form bound, or exact
identity) at three standard errors; estimator event-cap truncation must stay
below one replica in a thousand for a row to pass.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .bounds import (
    compute_stein_bounds,
    first_diff_bound,
    first_diff_bound_nonuniform,
    second_diff_bound,
    second_diff_bound_nonuniform,
)
from .coupling import (
    estimate_delta2_h,
    estimate_delta_h,
    estimate_p_survival,
    p_survival_analytic,
    reference_test_functions,
    stein_residual,
)
from .groundspace import Configuration, derive_stream, unit_interval
from .simulate import sample_conditional_poisson

__all__ = [
    "verify_p_survival",
    "verify_stein",
    "verify_delta_bounds",
    "MAX_CAPPED_FRACTION",
]

MAX_CAPPED_FRACTION = 1e-3

_P_SURVIVAL_LAMS = (0.5, 1.0, 2.0, 5.0, 10.0)
_P_SURVIVAL_KS = (1, 2, 5)


def verify_p_survival(
    lams=_P_SURVIVAL_LAMS,
    ks=_P_SURVIVAL_KS,
    m: int = 0,
    replicas: int = 100_000,
    seed: int = 0,
) -> dict:
    """Excursion survival probabilities against the closed form.

    The survival probability does not depend on the floor m (the count stays
    above k >= m for the whole excursion), so any m <= min(ks) is valid.
    """
    rows = []
    for i, lam in enumerate(lams):
        for j, k in enumerate(ks):
            analytic = p_survival_analytic(lam, k)
            est = estimate_p_survival(
                lam, k, m=m, replicas=replicas, seed=seed + 101 * i + j
            )
            gap = abs(est.estimate - analytic)
            ok = gap <= 3.0 * est.se
            rows.append(
                {
                    "scenario": f"lambda={lam:g},k={k}",
                    "lambda": lam,
                    "k": k,
                    "analytic": analytic,
                    "estimate": est.estimate,
                    "se": est.se,
                    "bound": analytic,
                    "pass": ok,
                }
            )
    return {
        "battery": "p-survival",
        "m": m,
        "replicas": replicas,
        "seed": seed,
        "rows": rows,
        "passed": all(r["pass"] for r in rows),
    }


def _fixed_size_configuration(size: int, space, stream) -> Configuration:
    return Configuration(tuple(range(size)), space.sample(stream, size))


def verify_stein(
    lam: float = 3.0,
    m: int = 1,
    sizes=(1, 2, 4),
    replicas: int = 20_000,
    seed: int = 0,
) -> dict:
    """Generator identity residuals at fixed configuration sizes.

    Uses the count test function so the target is exactly zero and the
    residual is a pure Monte Carlo null check.
    """
    space = unit_interval(lam)
    f = reference_test_functions(space)[3]
    rows = []
    for i, size in enumerate(sizes):
        if size < m:
            raise ValueError("sizes must sit at or above the floor m")
        xi = _fixed_size_configuration(size, space, derive_stream(seed, 900_000 + i))
        est = stein_residual(f, xi, m, space, replicas, seed + 1000 * (i + 1))
        ok = (
            abs(est.estimate) <= 3.0 * est.se
            and est.capped_fraction < MAX_CAPPED_FRACTION
        )
        rows.append(
            {
                "scenario": f"size={size}",
                "size": size,
                "f": f.label,
                "estimate": est.estimate,
                "se": est.se,
                "bound": 0.0,
                "capped": est.capped,
                "pass": ok,
            }
        )
    return {
        "battery": "stein",
        "lambda": lam,
        "m": m,
        "replicas": replicas,
        "seed": seed,
        "rows": rows,
        "passed": all(r["pass"] for r in rows),
    }


def _delta_bounds_scenario(args) -> list[dict]:
    """One uniform-bound scenario: random xi, alpha, beta, f; both orders."""
    lam, m, replicas, seed, scenario = args
    space = unit_interval(lam)
    family = reference_test_functions(space)
    setup = derive_stream(seed, 500_000 + scenario)
    xi = sample_conditional_poisson(space, m, setup)
    alpha = space.sample_one(setup)
    beta = space.sample_one(setup)
    f = family[setup.integer(len(family))]
    bound1 = first_diff_bound(lam, m)
    bound2 = second_diff_bound(lam, m)
    est1 = estimate_delta_h(
        f, xi, alpha, m, space, replicas, seed + 7919 * scenario + 1
    )
    est2 = estimate_delta2_h(
        f, xi, alpha, beta, m, space, replicas, seed + 7919 * scenario + 2
    )
    rows = []
    for order, est, bound in ((1, est1, bound1), (2, est2, bound2)):
        ok = (
            abs(est.estimate) <= bound + 3.0 * est.se
            and est.capped_fraction < MAX_CAPPED_FRACTION
        )
        rows.append(
            {
                "kind": "uniform",
                "scenario": f"uniform-{scenario}-order{order}",
                "size": xi.size,
                "f": f.label,
                "order": order,
                "estimate": est.estimate,
                "se": est.se,
                "bound": bound,
                "capped": est.capped,
                "pass": ok,
            }
        )
    return rows


def _delta_bounds_nonuniform(args) -> list[dict]:
    """Size-pinned scenario against the non-uniform bounds."""
    lam, m, replicas, seed, size = args
    space = unit_interval(lam)
    family = reference_test_functions(space)
    setup = derive_stream(seed, 700_000 + size)
    xi = _fixed_size_configuration(size, space, setup)
    alpha = space.sample_one(setup)
    beta = space.sample_one(setup)
    f = family[setup.integer(len(family))]
    bound1 = first_diff_bound_nonuniform(lam, m, size)
    bound2 = second_diff_bound_nonuniform(lam, m, size)
    est1 = estimate_delta_h(f, xi, alpha, m, space, replicas, seed + 104729 * size + 1)
    est2 = estimate_delta2_h(
        f, xi, alpha, beta, m, space, replicas, seed + 104729 * size + 2
    )
    rows = []
    for order, est, bound in ((1, est1, bound1), (2, est2, bound2)):
        ok = (
            abs(est.estimate) <= bound + 3.0 * est.se
            and est.capped_fraction < MAX_CAPPED_FRACTION
        )
        rows.append(
            {
                "kind": "nonuniform",
                "scenario": f"nonuniform-size{size}-order{order}",
                "size": size,
                "f": f.label,
                "order": order,
                "estimate": est.estimate,
                "se": est.se,
                "bound": bound,
                "capped": est.capped,
                "pass": ok,
            }
        )
    return rows


def verify_delta_bounds(
    lam: float,
    m: int,
    n_scenarios: int = 20,
    replicas: int = 1500,
    seed: int = 0,
    nonuniform_offsets=(0, 3, 10),
    workers: int = 1,
) -> dict:
    """Estimated differences of h against the closed-form bounds.

    Uniform rows draw random scenarios; non-uniform rows pin the size of xi
    at m + offset.  Scenarios are independent work units with derived
    streams, so results do not depend on the worker count.
    """
    if m < 1:
        raise ValueError("delta-bounds battery requires m >= 1")
    uniform_args = [(lam, m, replicas, seed, s) for s in range(n_scenarios)]
    nonuni_args = [(lam, m, replicas, seed, m + off) for off in nonuniform_offsets]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            uniform_rows = list(pool.map(_delta_bounds_scenario, uniform_args))
            nonuni_rows = list(pool.map(_delta_bounds_nonuniform, nonuni_args))
    else:
        uniform_rows = [_delta_bounds_scenario(a) for a in uniform_args]
        nonuni_rows = [_delta_bounds_nonuniform(a) for a in nonuni_args]
    rows = [r for block in (*uniform_rows, *nonuni_rows) for r in block]
    bounds = compute_stein_bounds(lam, m)
    return {
        "battery": "delta-bounds",
        "lambda": lam,
        "m": m,
        "replicas": replicas,
        "seed": seed,
        "n_scenarios": n_scenarios,
        "first_diff_bound": bounds.first_diff,
        "second_diff_bound": bounds.second_diff,
        "rows": rows,
        "passed": all(r["pass"] for r in rows),
    }
