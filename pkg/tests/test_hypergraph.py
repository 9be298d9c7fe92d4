import math
from collections import Counter
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ekrlab import analytics as an
from ekrlab import hypergraph as hg
from ekrlab.errors import DomainError, ParseError, ResourceLimitError


def H_from(n, k, edges, dedup=True):
    return hg.Hypergraph.from_edges(n, k, edges, dedup=dedup)


# ---------------------------------------------------------------------------
# KSet / Hypergraph basics
# ---------------------------------------------------------------------------

def test_kset_validation():
    ks = hg.KSet.from_members(6, (0, 3, 5))
    assert ks.members == (0, 3, 5)
    assert ks.colex_rank == math.comb(0, 1) + math.comb(3, 2) + math.comb(5, 3)
    with pytest.raises(DomainError):
        hg.KSet(6, 2, 0b111)          # popcount mismatch
    with pytest.raises(DomainError):
        hg.KSet(4, 2, 0b10001)        # member >= n
    with pytest.raises(DomainError):
        hg.KSet(300, 3, 0b111)        # bitset width cap


def test_hypergraph_dedup_flag():
    with pytest.raises(DomainError):
        H_from(6, 2, [(0, 1), (0, 1)], dedup=True)
    H = H_from(6, 2, [(0, 1), (0, 1)], dedup=False)
    assert H.has_duplicates()
    assert not H.dedupped().has_duplicates()
    assert H.dedupped().m == 1


# ---------------------------------------------------------------------------
# degree stats
# ---------------------------------------------------------------------------

def test_degree_stats_star():
    n, k = 5, 2
    star = [e for e in combinations(range(n), k) if 0 in e]
    st_ = hg.degree_stats(H_from(n, k, star))
    assert st_.deg[0] == 4 == st_.Delta == math.comb(n - 1, k - 1)


def test_degree_stats_triangle_and_pairs():
    st_ = hg.degree_stats(H_from(6, 2, [(0, 1), (0, 2), (1, 2)]))
    assert st_.deg[:3] == (2, 2, 2)
    assert all(len(w) == 0 for w in st_.W.values())   # all pair degrees 1
    H = H_from(6, 3, [(0, 1, 2), (0, 1, 3)])
    st2 = hg.degree_stats(H)
    assert st2.pair_deg[(0, 1)] == 2
    assert st2.W[0] == frozenset({1}) and st2.W[1] == frozenset({0})


@given(st.integers(0, 60), st.integers(2, 8))
def test_degree_stats_invariants(seed, n):
    k = 2 if n < 6 else 3
    H = hg.sample_bernoulli(n, k, 0.3, seed, cap=10**6)
    st_ = hg.degree_stats(H)
    assert sum(st_.deg) == k * H.m
    for (x, y), c in st_.pair_deg.items():
        assert c <= min(st_.deg[x], st_.deg[y])
        assert (y in st_.W[x]) == (x in st_.W[y])


def test_degree_stats_invariant_under_shuffle():
    H = hg.sample_bernoulli(10, 3, 0.2, 7)
    rng = np.random.default_rng(0)
    perm = rng.permutation(H.m)
    H2 = hg.Hypergraph(H.n, H.k, tuple(H.edges[i] for i in perm), dedup=True)
    a, b = hg.degree_stats(H), hg.degree_stats(H2)
    assert a.deg == b.deg and a.Delta == b.Delta and a.pair_deg == b.pair_deg


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

def test_bernoulli_endpoints():
    assert hg.sample_bernoulli(8, 2, 0.0, 3).m == 0
    H = hg.sample_bernoulli(8, 2, 1.0, 3)
    assert H.m == math.comb(8, 2)
    # colex order
    ranks = [e.colex_rank for e in H.edges]
    assert ranks == sorted(ranks)


def test_bernoulli_cap():
    with pytest.raises(ResourceLimitError):
        hg.sample_bernoulli(60, 10, 0.01, 0, cap=10**6)


def test_bernoulli_mean_count():
    n, k, p, T = 10, 3, 0.2, 2000
    N = math.comb(n, k)
    total = sum(hg.sample_bernoulli(n, k, p, np.random.SeedSequence(1, spawn_key=(t,))).m
                for t in range(T))
    mean = total / T
    sigma = math.sqrt(N * p * (1 - p) / T)
    assert abs(mean - p * N) <= 3 * sigma


def test_determinism_same_seed_bit_identical():
    for sampler in (lambda s: hg.sample_bernoulli(12, 3, 0.1, s),
                    lambda s: hg.sample_independent(12, 3, 20, s),
                    lambda s: hg.sample_conditioned(12, 3, 0.1, s)[0]):
        a, b = sampler(99), sampler(99)
        assert a.edge_bits == b.edge_bits


def test_independent_m0_empty():
    H = hg.sample_independent(9, 3, 0, 1)
    assert H.m == 0 and not H.dedup


def test_independent_marginal_uniformity():
    # each of the C(5,2)=10 sets with frequency 1/10 +- 3 sigma
    n, k, T = 5, 2, 100_000
    H = hg.sample_independent(n, k, T, 4)
    counts = Counter(e.bits for e in H.edges)
    sigma = math.sqrt(T * 0.1 * 0.9)
    for bits in (hg.KSet.from_members(n, c).bits for c in combinations(range(n), k)):
        assert abs(counts[bits] - T / 10) <= 3 * sigma


def test_independent_degree_mean():
    n, k, m = 100, 5, 10_000
    H = hg.sample_independent(n, k, m, 11)
    st_ = hg.degree_stats(H)
    want = m * k / n
    sigma = math.sqrt(m * (k / n) * (1 - k / n))
    for x in range(0, n, 7):
        assert abs(st_.deg[x] - want) <= 4 * sigma


def test_independent_pairwise_intersection_frequency():
    # q(6,3) = 19/20; consecutive draw pairs are independent uniform pairs
    n, k, m = 6, 3, 100_000
    H = hg.sample_independent(n, k, m, 5)
    bits = H.edge_bits
    hits = sum(1 for i in range(0, m - 1, 2) if bits[i] & bits[i + 1])
    trials = m // 2
    q = float(an.intersection_probability(n, k))
    sigma = math.sqrt(trials * q * (1 - q))
    assert abs(hits - trials * q) <= 3 * sigma


def test_conditioned_matches_bernoulli_law():
    # total-variation distance over edge-set distributions, n=6, k=2; p is
    # small enough that the pure sampling-noise floor sits below the 0.02 bar
    n, k, p, T = 6, 2, 0.04, 100_000
    N = math.comb(n, k)
    rng = hg.generator(10)
    draws = rng.random((T, N)) < p
    weights = 1 << np.arange(N, dtype=np.uint64)
    cb = Counter((draws * weights).sum(axis=1).tolist())
    cc = Counter()
    for t in range(T):
        cc[_rank_mask(hg.sample_conditioned(n, k, p, np.random.SeedSequence(11, spawn_key=(t,)))[0])] += 1
    keys = set(cb) | set(cc)
    tv = 0.5 * sum(abs(cb[key] - cc[key]) / T for key in keys)
    assert tv < 0.02


def _rank_mask(H):
    mask = 0
    for e in H.edges:
        mask |= 1 << e.colex_rank
    return mask


def test_conditioned_edge_count_chi_square():
    from scipy.stats import chisquare
    n, k, p, T = 8, 2, 0.5, 100_000
    N = math.comb(n, k)
    counts = Counter(hg.sample_conditioned(n, k, p, np.random.SeedSequence(12, spawn_key=(t,)))[0].m
                     for t in range(T))
    pmf = [float(math.comb(N, j)) * p**j * (1 - p) ** (N - j) for j in range(N + 1)]
    # pool tails so expected counts stay >= ~5
    lo = next(j for j in range(N + 1) if pmf[j] * T >= 5)
    hi = next(j for j in range(N, -1, -1) if pmf[j] * T >= 5)
    obs = [sum(c for j, c in counts.items() if j <= lo)]
    exp = [sum(pmf[: lo + 1]) * T]
    for j in range(lo + 1, hi):
        obs.append(counts.get(j, 0))
        exp.append(pmf[j] * T)
    obs.append(sum(c for j, c in counts.items() if j >= hi))
    exp.append(sum(pmf[hi:]) * T)
    stat, pval = chisquare(obs, exp)
    assert pval > 0.01


def test_conditioned_window_report():
    Hc, win = hg.sample_conditioned(10, 2, 0.0, 3)
    assert Hc.m == 0 and win   # degenerate collapse convention
    _, win2 = hg.sample_conditioned(10, 2, 0.3, 3)
    assert isinstance(win2, bool)


# ---------------------------------------------------------------------------
# event R
# ---------------------------------------------------------------------------

def test_event_r_empty_all_true():
    # the stipulated degenerate case: empty H with alpha = 0
    params = an.ModelParams.from_phi(12, 2, 0)
    H = H_from(12, 2, [])
    ev = hg.check_event_r(H, params, alpha=0, beta=0)
    assert ev.all_hold


def test_event_r_wx_violation_constructed():
    # vertex 0 shares >= 2 edges with enough partners to beat the 6 log n floor
    n, k = 40, 3
    params = an.ModelParams.from_phi(n, k, 0.5)
    w_floor = 6 * math.log(n)
    partners = int(w_floor) + 1
    edges = []
    for y in range(1, partners + 1):
        edges.append(tuple(sorted((0, y, partners + 1))))
        edges.append(tuple(sorted((0, y, partners + 2))))
    H = H_from(n, k, set(edges))
    ev = hg.check_event_r(H, params)
    assert not ev.wx_bounded
    assert len(hg.degree_stats(H).W[0]) >= ev.w_bound


def test_event_r_probability_trend():
    # finite-n trend for the high-probability event R at (n=60, k=3, phi=2,
    # small regime).  Threshold 0.80 is a pilot-calibrated artifact constant
    # (pilot: 0.856 +- 0.006 over 3000 trials), not a reference number.
    n, k, phi, T = 60, 3, 2.0, 1000
    params = an.ModelParams.from_phi(n, k, phi)
    from ekrlab.analytics import compute_alpha_beta
    ab = compute_alpha_beta(params)
    hold = 0
    for t in range(T):
        H, _ = hg.sample_conditioned(n, k, float(params.p),
                                     np.random.SeedSequence(404, spawn_key=(t,)),
                                     psi=params.psi)
        ev = hg.check_event_r(H, params, alpha=ab.alpha, beta=ab.beta)
        hold += ev.all_hold
    assert hold / T >= 0.80


def test_event_r_pair_degree_cap():
    n, k = 14, 3
    params = an.ModelParams.from_phi(n, k, 1.0)
    edges = [(0, 1, z) for z in range(2, 11)]   # d(0,1) = 9 > 8
    ev = hg.check_event_r(H_from(n, k, edges), params)
    assert not ev.pair_deg_le_8


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------

def test_file_round_trip_exact(tmp_path):
    H = hg.sample_bernoulli(9, 3, 0.3, 21)
    path = tmp_path / "h.txt"
    hg.write_hypergraph(H, path)
    text = path.read_text()
    H2 = hg.read_hypergraph(path)
    assert H2.edge_bits == H.edge_bits and (H2.n, H2.k) == (H.n, H.k)
    hg.write_hypergraph(H2, path)
    assert path.read_text() == text   # bit-exact round trip


@pytest.mark.parametrize("bad", [
    "",                       # empty
    "3 2\n1 2\n",             # short header
    "x 2 1\n1 2\n",           # non-integer header
    "6 2 2\n1 2\n",           # wrong edge count
    "6 2 1\n1 2 3\n",         # wrong k
    "6 2 1\n0 2\n",           # out of range (1-based)
    "6 2 1\n2 2\n",           # not strictly increasing
    "6 2 1\n2 1\n",           # not sorted
    "6 2 1\n1 7\n",           # vertex > n
])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        hg.parse_hypergraph(bad)


def test_parse_multiset_allowed():
    H = hg.parse_hypergraph("6 2 2\n1 2\n1 2\n")
    assert H.m == 2 and H.has_duplicates() and not H.dedup
    H2 = hg.parse_hypergraph("6 2 2\n1 2\n1 3\n")
    assert H2.dedup
