"""Poisson tails and closed-form Stein-factor bounds.

The first/second difference bounds for the solution of the Stein equation of
a Poisson point process conditioned on at least m points come in uniform
flavours (k1/k2 factors, with a sharper variant when Lambda > m + 2) and
non-uniform flavours depending on the current configuration size (l1/l2
factors).  Every bound is the minimum over the applicable closed-form
candidate expressions; the candidate dictionaries are exposed so callers and
tests can inspect which expression wins where.

Tail conventions: poisson_tail(lam, k) is P(Po(lam) >= k) with value 1 for
all k <= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "poisson_pmf",
    "poisson_tail",
    "poisson_tail_ratio",
    "k1",
    "k2",
    "l1",
    "l2",
    "first_diff_candidates",
    "first_diff_bound",
    "second_diff_candidates",
    "second_diff_bound",
    "first_diff_nonuniform_candidates",
    "first_diff_bound_nonuniform",
    "second_diff_nonuniform_candidates",
    "second_diff_bound_nonuniform",
    "SteinBounds",
    "compute_stein_bounds",
]

# Lambda threshold separating the two k2 expressions.
_K2_SWITCH = 1.76


def _check_lam(lam: float) -> float:
    lam = float(lam)
    if not (lam > 0.0 and math.isfinite(lam)):
        raise ValueError("lam must be positive and finite")
    return lam


def _check_m(m: int) -> int:
    if m != int(m) or m < 0:
        raise ValueError("m must be a nonnegative integer")
    return int(m)


def poisson_pmf(lam: float, j: int) -> float:
    """P(Po(lam) = j), computed in log space."""
    lam = _check_lam(lam)
    if j != int(j):
        raise ValueError("j must be an integer")
    j = int(j)
    if j < 0:
        return 0.0
    return math.exp(-lam + j * math.log(lam) - math.lgamma(j + 1))


def poisson_tail(lam: float, k: int) -> float:
    """P(Po(lam) >= k).  k <= 0 gives 1; relative error around 1e-14.

    Terms are anchored at the needed end of the distribution in log space and
    accumulated with compensated summation: the upper tail is summed directly
    when k exceeds the mode, otherwise the head is summed and complemented.
    """
    lam = _check_lam(lam)
    if k != int(k):
        raise ValueError("k must be an integer")
    k = int(k)
    if k <= 0:
        return 1.0
    if k == 1:
        # 1 - e^{-lam} without cancellation for small lam.
        return -math.expm1(-lam)
    mode = math.ceil(lam)
    if k > mode:
        # Direct tail sum; terms decrease geometrically since k > lam.
        t = math.exp(-lam + k * math.log(lam) - math.lgamma(k + 1))
        first = t
        terms = []
        j = k
        while t > 0.0 and t > first * 1e-20:
            terms.append(t)
            j += 1
            t *= lam / j
            if j > k + 100000:
                raise RuntimeError("tail series failed to converge")
        return math.fsum(terms)
    head = math.fsum(
        math.exp(-lam + j * math.log(lam) - math.lgamma(j + 1)) for j in range(k)
    )
    return 1.0 - head


def poisson_tail_ratio(lam: float, k: int) -> float:
    """F(k-1)/F(k) for F the upper tail; equals 1 + pmf(k-1)/F(k)."""
    lam = _check_lam(lam)
    k = int(k)
    if k <= 0:
        return 1.0
    return 1.0 + poisson_pmf(lam, k - 1) / poisson_tail(lam, k)


def _log_plus(lam: float) -> float:
    return max(0.0, math.log(lam))


def k1(lam: float, m: int) -> float:
    """Uniform first Stein factor min(1/m, (0.95 + log+ lam)/lam).

    At m = 0 the 1/m arm is read as 1, matching the unconditional bound.
    """
    lam = _check_lam(lam)
    m = _check_m(m)
    lead = 1.0 if m == 0 else 1.0 / m
    return min(lead, (0.95 + _log_plus(lam)) / lam)


def k2(lam: float, m: int) -> float:
    """Uniform second Stein factor: 2 log(lam)/lam above lam = 1.76, else 1/(m+1)."""
    lam = _check_lam(lam)
    m = _check_m(m)
    if lam >= _K2_SWITCH:
        return 2.0 * math.log(lam) / lam
    return 1.0 / (m + 1)


def l1(lam: float, size: int) -> float:
    """Non-uniform factor (1 - e^{-w})/w with w = size ^ lam; limit 1 at w = 0."""
    lam = _check_lam(lam)
    if size < 0:
        raise ValueError("size must be nonnegative")
    w = min(float(size), lam)
    if w == 0.0:
        return 1.0
    return -math.expm1(-w) / w


def l2(lam: float, size: int) -> float:
    """Non-uniform factor min(1/(size ^ lam), 1.09/(size + 1) + 1/lam)."""
    lam = _check_lam(lam)
    if size < 0:
        raise ValueError("size must be nonnegative")
    w = min(float(size), lam)
    first = math.inf if w == 0.0 else 1.0 / w
    return min(first, 1.09 / (size + 1) + 1.0 / lam)


def first_diff_candidates(lam: float, m: int) -> dict[str, float]:
    """Applicable closed forms for the uniform first-difference bound."""
    lam = _check_lam(lam)
    m = _check_m(m)
    if m == 0:
        return {"unconditional": k1(lam, 0)}
    factor = k1(lam, m)
    cands = {"base": 1.0 / lam + (m + 1) * factor}
    if lam > m + 2:
        cands["supercritical"] = 1.0 / (lam * (lam - m)) + lam / (lam - m) * factor
    return cands


def first_diff_bound(lam: float, m: int) -> float:
    """Uniform bound on |h(xi + delta_a) - h(xi)| over xi, a, and 1-Lipschitz f."""
    return min(first_diff_candidates(lam, m).values())


def second_diff_candidates(lam: float, m: int) -> dict[str, float]:
    """Applicable closed forms for the uniform second-difference bound.

    At m = 0 the crossed integral term vanishes, leaving twice the first
    difference and the unconditional k2 factor as the two candidates.
    """
    lam = _check_lam(lam)
    m = _check_m(m)
    if m == 0:
        return {"pair": 2.0 * k1(lam, 0), "unconditional": k2(lam, 0)}
    factor1 = k1(lam, m)
    factor2 = k2(lam, m)
    a = (m + 3) * (2 * m + 2)
    cands = {
        "pair": 2.0 / lam + 2.0 * (m + 1) * factor1,
        "crossed": (4 * m + 3) * (m + 3) / (a * lam + 2.0 * lam**2)
        + 4 * m * (m + 1) * (m + 3) / (a + 2.0 * lam) * factor1
        + factor2,
    }
    if lam > m + 2:
        cands["pair-supercritical"] = (
            2.0 / (lam * (lam - m)) + 2.0 * lam / (lam - m) * factor1
        )
        cands["crossed-supercritical"] = (
            (3.0 * lam + m) / (lam * (lam - m) * (lam + m))
            + 4.0 * lam * m / ((lam - m) * (lam + m)) * factor1
            + factor2
        )
    return cands


def second_diff_bound(lam: float, m: int) -> float:
    """Uniform bound on the second difference of the Stein solution."""
    return min(second_diff_candidates(lam, m).values())


def _check_nonuniform_args(lam: float, m: int, size: int) -> tuple[float, int, int]:
    lam = _check_lam(lam)
    m = _check_m(m)
    if m < 1:
        raise ValueError("non-uniform bounds require m >= 1")
    if size != int(size) or size < m:
        raise ValueError("configuration size must be an integer >= m")
    return lam, m, int(size)


def first_diff_nonuniform_candidates(lam: float, m: int, size: int) -> dict[str, float]:
    """Size-dependent closed forms for the first difference at |xi| = size."""
    lam, m, size = _check_nonuniform_args(lam, m, size)
    loc1 = l1(lam, size)
    cands = {"base": (m + 1) / (size + 1) * (1.0 / lam + m * loc1) + loc1}
    if lam > m + 2:
        cands["supercritical"] = (
            (m + 1) / (size + 1) * (1.0 / (lam * (lam - m)) + m / (lam - m) * loc1)
            + loc1
        )
    return cands


def first_diff_bound_nonuniform(lam: float, m: int, size: int) -> float:
    return min(first_diff_nonuniform_candidates(lam, m, size).values())


def second_diff_nonuniform_candidates(lam: float, m: int, size: int) -> dict[str, float]:
    """Size-dependent closed forms for the second difference at |xi| = size.

    The bracketed crossed-term expression is implemented exactly as printed,
    including the lambda placement that differs from the uniform variant.
    """
    lam, m, size = _check_nonuniform_args(lam, m, size)
    loc1 = l1(lam, size)
    loc2 = l2(lam, size)
    a = (m + 3) * (2 * m + 2)
    front = (m + 2) * (m + 1) / ((size + 2) * (size + 1))
    cands = {
        "pair": (2 * m + 2) / (size + 1) * (1.0 / lam + m * loc1) + 2.0 * loc1,
        "crossed": front
        * (
            (4 * m + 3) * (m + 3) / (a + 2.0 * lam)
            + 4 * m * (m + 1) * (m + 3) / (a * lam + 2.0 * lam**2) * loc1
        )
        + loc2,
    }
    if lam > m + 2:
        cands["pair-supercritical"] = (
            (2 * m + 2) / (size + 1) * (1.0 / (lam * (lam - m)) + m / (lam - m) * loc1)
            + 2.0 * loc1
        )
        cands["crossed-supercritical"] = (
            front
            * (
                (3.0 * lam + m) / (lam * (lam - m) * (lam + m))
                + 4.0 * lam * m / ((lam - m) * (lam + m)) * loc1
            )
            + loc2
        )
    return cands


def second_diff_bound_nonuniform(lam: float, m: int, size: int) -> float:
    return min(second_diff_nonuniform_candidates(lam, m, size).values())


@dataclass(frozen=True)
class SteinBounds:
    """Bundle of all applicable Stein-factor bounds at (lam, m[, size])."""

    lam: float
    m: int
    size: int | None
    k1: float
    k2: float
    first_diff: float
    second_diff: float
    first_diff_winner: str
    second_diff_winner: str
    supercritical: bool
    l1: float | None = None
    l2: float | None = None
    first_diff_nonuniform: float | None = None
    second_diff_nonuniform: float | None = None
    first_diff_nonuniform_winner: str | None = None
    second_diff_nonuniform_winner: str | None = None


def _argmin(cands: dict[str, float]) -> tuple[str, float]:
    name = min(cands, key=cands.get)
    return name, cands[name]


def compute_stein_bounds(lam: float, m: int, size: int | None = None) -> SteinBounds:
    """All closed-form bounds at (lam, m), plus non-uniform ones when size given.

    Non-uniform bounds require m >= 1 and size >= m; passing size with m = 0
    raises, matching the scope of the size-dependent results.
    """
    lam = _check_lam(lam)
    m = _check_m(m)
    w1, v1 = _argmin(first_diff_candidates(lam, m))
    w2, v2 = _argmin(second_diff_candidates(lam, m))
    out = dict(
        lam=lam,
        m=m,
        size=size,
        k1=k1(lam, m),
        k2=k2(lam, m),
        first_diff=v1,
        second_diff=v2,
        first_diff_winner=w1,
        second_diff_winner=w2,
        supercritical=lam > m + 2,
    )
    if size is not None:
        wn1, vn1 = _argmin(first_diff_nonuniform_candidates(lam, m, size))
        wn2, vn2 = _argmin(second_diff_nonuniform_candidates(lam, m, size))
        out.update(
            l1=l1(lam, size),
            l2=l2(lam, size),
            first_diff_nonuniform=vn1,
            second_diff_nonuniform=vn2,
            first_diff_nonuniform_winner=wn1,
            second_diff_nonuniform_winner=wn2,
        )
    return SteinBounds(**out)
