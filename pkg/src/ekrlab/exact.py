"""Exact combinatorial kernels shared across the package.

Falling factorials and generalized binomials (exact for int/Fraction
arguments), colexicographic ranking of k-subsets, and binomial/Poisson tail
probabilities that stay numerically honest from M = 10 up to astronomically
large M.
"""

from __future__ import annotations

import math
from fractions import Fraction

# Above this many Bernoulli summands the binomial is computed through its
# Poisson limit (the error is O(mean^2 / M), far below double precision here).
POISSON_SWITCH = 10**15

# Default ceiling for exact (big-rational) binomial tail summation.
EXACT_TAIL_CUTOFF = 1000


def falling(a, t: int):
    """(a)_t = a (a-1) ... (a-t+1); exact for int/Fraction a, t >= 0."""
    if t < 0:
        raise ValueError("falling factorial needs t >= 0")
    out = 1 if isinstance(a, (int, Fraction)) else 1.0
    for i in range(t):
        out *= a - i
    return out


def gen_binom(a, t: int):
    """Generalized binomial C(a, t) = (a)_t / t! for real or rational a.

    May be negative for non-integer a with t > a + 1; callers that care about
    the sign get it back unclamped.
    """
    f = falling(a, t)
    fact = math.factorial(t)
    if isinstance(f, int):
        return f // fact if f % fact == 0 else Fraction(f, fact)
    if isinstance(f, Fraction):
        return f / fact
    return f / fact


def colex_rank(members) -> int:
    """Rank of a k-subset in colexicographic order (0-based vertices)."""
    rank = 0
    for i, v in enumerate(sorted(members)):
        rank += math.comb(v, i + 1)
    return rank


def colex_unrank(rank: int, k: int) -> tuple[int, ...]:
    """Inverse of colex_rank: the k-subset at the given colex rank."""
    if rank < 0 or k < 0:
        raise ValueError("rank and k must be nonnegative")
    out = []
    r = rank
    for i in range(k, 0, -1):
        v = i - 1  # C(i-1, i) = 0 <= r always
        while math.comb(v + 1, i) <= r:
            v += 1
        r -= math.comb(v, i)
        out.append(v)
    if r != 0:
        raise ValueError("rank exceeds C(max_element+1, k)")
    return tuple(reversed(out))


def bits_of(mask: int):
    """Iterate set bit positions of a Python-int bitset, ascending."""
    while mask:
        b = mask & -mask
        yield b.bit_length() - 1
        mask ^= b


def mask_from(members) -> int:
    out = 0
    for v in members:
        out |= 1 << v
    return out


# ---------------------------------------------------------------------------
# Binomial upper tails Pr(X >= t), X ~ Bin(M, p)
# ---------------------------------------------------------------------------

def binom_tail_ge_exact(M: int, p, t: int) -> Fraction:
    """Exact Pr(X >= t) as a reduced Fraction; intended for small M."""
    p = Fraction(p)
    if t <= 0:
        return Fraction(1)
    if t > M:
        return Fraction(0)
    if p == 0:
        return Fraction(0)
    if p == 1:
        return Fraction(1)
    qp = 1 - p
    # Sum whichever side has fewer terms.
    if t <= M * p:
        acc = Fraction(0)
        for j in range(t):
            acc += math.comb(M, j) * p**j * qp ** (M - j)
        return 1 - acc
    acc = Fraction(0)
    for j in range(t, M + 1):
        acc += math.comb(M, j) * p**j * qp ** (M - j)
    return acc


def _tail_sum_from(log_start_pmf: float, ratio_fn, first_index: int, last_index, step: int) -> float:
    """Sum pmf terms starting at a boundary term, following a <1 ratio."""
    total = 1.0
    term = 1.0
    j = first_index
    while last_index is None or (step > 0 and j < last_index) or (step < 0 and j > last_index):
        r = ratio_fn(j)
        if r <= 0.0:
            break
        term *= r
        total += term
        j += step
        if term < 1e-18 * total:
            break
    return math.exp(log_start_pmf) * total


def poisson_tail_ge(mean: float, t: int) -> float:
    """Pr(X >= t) for X ~ Poisson(mean)."""
    if t <= 0:
        return 1.0
    if mean <= 0.0:
        return 0.0
    log_pmf = -mean + t * math.log(mean) - math.lgamma(t + 1)
    if t > mean:
        # terms decay going up
        return min(1.0, _tail_sum_from(log_pmf, lambda j: mean / (j + 1), t, None, 1))
    # Pr(X <= t-1), summed downward from its largest term at t-1
    log_pmf_low = -mean + (t - 1) * math.log(mean) - math.lgamma(t)
    low = _tail_sum_from(log_pmf_low, lambda j: j / mean, t - 1, 0, -1)
    return max(0.0, 1.0 - low)


def binom_tail_ge_float(M: int, p: float, t: int, mean: float | None = None) -> float:
    """Pr(X >= t) for X ~ Bin(M, p) in stable floating point.

    Sums the smaller tail side starting from its dominant boundary term, so
    the geometric decay truncates quickly.  Falls back to the Poisson limit
    when M is too large for lgamma.
    """
    if t <= 0:
        return 1.0
    if t > M:
        return 0.0
    if M > POISSON_SWITCH:
        # p itself may underflow double precision here; trust the mean
        if mean is None:
            mean = float(M * Fraction(p))
        return poisson_tail_ge(mean, t)
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0
    if mean is None:
        mean = M * p
    lg = math.lgamma
    logp = math.log(p)
    log1mp = math.log1p(-p)

    def log_pmf(j):
        return lg(M + 1) - lg(j + 1) - lg(M - j + 1) + j * logp + (M - j) * log1mp

    odds = p / (1.0 - p)
    if t > mean:
        return min(1.0, _tail_sum_from(log_pmf(t), lambda j: (M - j) / (j + 1) * odds, t, M, 1))
    low = _tail_sum_from(log_pmf(t - 1), lambda j: j / ((M - j + 1) * odds), t - 1, 0, -1)
    return max(0.0, 1.0 - low)


def binom_tail_ge(M: int, p, t: int, exact: bool | None = None,
                  exact_cutoff: int = EXACT_TAIL_CUTOFF, mean: float | None = None):
    """Pr(X >= t) for X ~ Bin(M, p); exact Fraction below the cutoff.

    exact=None picks exact mode automatically for rational p with
    M <= exact_cutoff.  exact=True insists (and raises above the cutoff).
    """
    if exact is None:
        exact = isinstance(p, (int, Fraction)) and M <= exact_cutoff
    if exact:
        if M > exact_cutoff:
            raise ValueError(f"exact tail requested for M={M} > cutoff {exact_cutoff}")
        return binom_tail_ge_exact(M, p, t)
    return binom_tail_ge_float(M, float(p), t, mean=mean)
