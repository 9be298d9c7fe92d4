"""k-sets, k-uniform hypergraphs, the two sampling models, and degree stats.

Vertices are 0-based internally (0..n-1) and stored as Python-int bitsets;
the text file format and all JSON surfaces are 1-based.

Sampling determinism contract: every sampler is a pure function of
(parameters, seed).  Seeds feed a counter-based Philox generator through
numpy's SeedSequence, and each trial of the Monte Carlo engine gets its own
substream derived from (master seed, trial index), so parallel execution
reproduces serial output bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import exact
from .errors import DomainError, ParseError, ResourceLimitError

MAX_N = 256                 # bitset width ceiling
DEFAULT_ENUM_CAP = 10**7    # refuse to enumerate C(n,k) beyond this


@dataclass(frozen=True)
class KSet:
    """A k-subset of [n] as a fixed-width bitset."""

    n: int
    k: int
    bits: int

    def __post_init__(self):
        # n > 2k is enforced at the model level, not on raw k-sets
        if not 0 < self.k <= self.n <= MAX_N:
            raise DomainError(f"need 0 < k <= n <= {MAX_N}; got n={self.n}, k={self.k}")
        if self.bits.bit_count() != self.k:
            raise DomainError("bitset popcount != k")
        if self.bits >> self.n:
            raise DomainError("bitset has members >= n")

    @classmethod
    def from_members(cls, n: int, members) -> "KSet":
        return cls(n, len(set(members)), exact.mask_from(members))

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(exact.bits_of(self.bits))

    @property
    def colex_rank(self) -> int:
        return exact.colex_rank(self.members)

    def intersects(self, other: "KSet") -> bool:
        return bool(self.bits & other.bits)


@dataclass(frozen=True)
class Hypergraph:
    """Ordered multiset of k-sets on [n]; dedup records enforced distinctness."""

    n: int
    k: int
    edges: tuple[KSet, ...]
    dedup: bool = False

    def __post_init__(self):
        for e in self.edges:
            if e.n != self.n or e.k != self.k:
                raise DomainError("edge (n, k) mismatch")
        if self.dedup and len(set(e.bits for e in self.edges)) != len(self.edges):
            raise DomainError("dedup flag set but duplicate edges present")

    @classmethod
    def from_edge_bits(cls, n: int, k: int, bits_list, dedup: bool = False) -> "Hypergraph":
        return cls(n, k, tuple(KSet(n, k, b) for b in bits_list), dedup)

    @classmethod
    def from_edges(cls, n: int, k: int, member_lists, dedup: bool = False) -> "Hypergraph":
        return cls(n, k, tuple(KSet.from_members(n, m) for m in member_lists), dedup)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def edge_bits(self) -> tuple[int, ...]:
        return tuple(e.bits for e in self.edges)

    def has_duplicates(self) -> bool:
        return len(set(self.edge_bits)) != self.m

    def dedupped(self) -> "Hypergraph":
        seen = set()
        keep = []
        for e in self.edges:
            if e.bits not in seen:
                seen.add(e.bits)
                keep.append(e)
        return Hypergraph(self.n, self.k, tuple(keep), dedup=True)


# ---------------------------------------------------------------------------
# Degree and pair-degree statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DegreeStats:
    deg: tuple[int, ...]                       # d(x) for x in [n]
    Delta: int                                 # max degree
    pair_deg: dict                             # (x, y) x<y -> d(x, y), only nonzero
    W: dict                                    # x -> frozenset {y : d(x,y) >= 2}


def degree_stats(H: Hypergraph) -> DegreeStats:
    deg = [0] * H.n
    pair = {}
    for e in H.edges:
        mem = e.members
        for v in mem:
            deg[v] += 1
        for x, y in combinations(mem, 2):
            pair[(x, y)] = pair.get((x, y), 0) + 1
    W = {x: set() for x in range(H.n)}
    for (x, y), c in pair.items():
        if c >= 2:
            W[x].add(y)
            W[y].add(x)
    return DegreeStats(tuple(deg), max(deg) if deg else 0,
                       pair, {x: frozenset(s) for x, s in W.items()})


@dataclass(frozen=True)
class EventRReport:
    """Per-conjunct booleans of the event R, plus the numbers behind them."""

    m_in_window: bool        # m in (mbar - psi sqrt(mbar), mbar + psi sqrt(mbar))
    delta_le_beta: bool
    delta_ge_alpha: bool
    pair_deg_le_8: bool      # d(x,y) <= 8 for all x, y
    wx_bounded: bool         # |W_x| < max{phi^2 k^2/n, 6 log n} for all x
    m: int
    Delta: int
    alpha: int
    beta: int
    w_bound: float

    @property
    def all_hold(self) -> bool:
        return (self.m_in_window and self.delta_le_beta and self.delta_ge_alpha
                and self.pair_deg_le_8 and self.wx_bounded)


def m_window(m: int, mbar: float, psi: float) -> bool:
    if mbar == 0:
        return m == 0  # degenerate model: the open window collapses
    half = psi * math.sqrt(mbar)
    return mbar - half < m < mbar + half


def check_event_r(H: Hypergraph, params, stats: DegreeStats | None = None,
                  alpha: int | None = None, beta: int | None = None) -> EventRReport:
    """Evaluate each conjunct of the high-probability event R on one sample."""
    from . import analytics

    if stats is None:
        stats = degree_stats(H)
    if alpha is None or beta is None:
        ab = analytics.compute_alpha_beta(params)
        alpha = ab.alpha if alpha is None else alpha
        beta = ab.beta if beta is None else beta
    d = analytics.derive(params)
    mbar = float(d.mbar)
    return EventRReport(
        m_in_window=m_window(H.m, mbar, params.psi),
        delta_le_beta=stats.Delta <= beta,
        delta_ge_alpha=stats.Delta >= alpha,
        pair_deg_le_8=all(c <= 8 for c in stats.pair_deg.values()),
        wx_bounded=all(len(s) < d.w for s in stats.W.values()),
        m=H.m, Delta=stats.Delta, alpha=alpha, beta=beta, w_bound=d.w,
    )


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------

def generator(seed) -> np.random.Generator:
    """Philox generator from an int seed, SeedSequence, or pass-through."""
    if isinstance(seed, np.random.Generator):
        return seed
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(seed))


def _check_enum_cap(n: int, k: int, cap: int, hint: str) -> int:
    N = math.comb(n, k)
    if N > cap:
        raise ResourceLimitError(
            f"C({n},{k}) = {N} exceeds the enumeration cap {cap}; {hint}")
    return N


def sample_bernoulli(n: int, k: int, p: float, seed, cap: int = DEFAULT_ENUM_CAP) -> Hypergraph:
    """Each k-set independently present with probability p; colex edge order."""
    if not 0 <= p <= 1:
        raise DomainError("p must lie in [0, 1]")
    N = _check_enum_cap(n, k, cap, "use sample_independent for graphs this large")
    rng = generator(seed)
    if p == 0:
        ranks = []
    elif p == 1:
        ranks = range(N)
    else:
        ranks = np.flatnonzero(rng.random(N) < p).tolist()
    bits = [exact.mask_from(exact.colex_unrank(r, k)) for r in ranks]
    return Hypergraph.from_edge_bits(n, k, bits, dedup=True)


def _uniform_kset_bits(rng: np.random.Generator, n: int, k: int, pool: list[int]) -> int:
    # partial Fisher-Yates: first k entries of a uniformly shuffled [n]
    bits = 0
    for j in range(k):
        t = j + int(rng.integers(0, n - j))
        pool[j], pool[t] = pool[t], pool[j]
        bits |= 1 << pool[j]
    return bits


def sample_independent(n: int, k: int, m: int, seed) -> Hypergraph:
    """m edges i.i.d. uniform from C([n],k); duplicates possible; draw order."""
    if m < 0:
        raise DomainError("m must be nonnegative")
    rng = generator(seed)
    pool = list(range(n))
    bits = [_uniform_kset_bits(rng, n, k, pool) for _ in range(m)]
    return Hypergraph.from_edge_bits(n, k, bits, dedup=False)


def _distinct_ranks(rng: np.random.Generator, N: int, m: int) -> list[int]:
    # Floyd's uniform m-subset of {0..N-1} with exactly m draws
    chosen = set()
    for j in range(N - m, N):
        t = int(rng.integers(0, j + 1))
        chosen.add(t if t not in chosen else j)
    return sorted(chosen)


def sample_conditioned(n: int, k: int, p: float, seed, cap: int = DEFAULT_ENUM_CAP,
                       psi: float | None = None) -> tuple[Hypergraph, bool]:
    """m ~ Bin(C(n,k), p), then m distinct uniform edges (colex order).

    Same law as sample_bernoulli; also reports whether m landed inside the
    window (mbar - psi sqrt(mbar), mbar + psi sqrt(mbar)).
    """
    if not 0 <= p <= 1:
        raise DomainError("p must lie in [0, 1]")
    N = _check_enum_cap(n, k, cap, "use sample_independent for graphs this large")
    rng = generator(seed)
    m = int(rng.binomial(N, p))
    ranks = _distinct_ranks(rng, N, m)
    bits = [exact.mask_from(exact.colex_unrank(r, k)) for r in ranks]
    H = Hypergraph.from_edge_bits(n, k, bits, dedup=True)
    psi = math.log(n) if psi is None else psi
    return H, m_window(m, p * N, psi)


# ---------------------------------------------------------------------------
# File format: header "n k m", then one edge per line, sorted 1-based vertices
# ---------------------------------------------------------------------------

def dump_hypergraph(H: Hypergraph) -> str:
    lines = [f"{H.n} {H.k} {H.m}"]
    for e in H.edges:
        lines.append(" ".join(str(v + 1) for v in e.members))
    return "\n".join(lines) + "\n"


def parse_hypergraph(text: str) -> Hypergraph:
    lines = [ln for ln in text.splitlines()]
    if not lines:
        raise ParseError("empty hypergraph file")
    head = lines[0].split()
    if len(head) != 3:
        raise ParseError(f"header must be 'n k m', got {lines[0]!r}")
    try:
        n, k, m = (int(x) for x in head)
    except ValueError as exc:
        raise ParseError(f"non-integer header field: {lines[0]!r}") from exc
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != m:
        raise ParseError(f"header says m={m} but file has {len(body)} edge lines")
    edges = []
    for idx, ln in enumerate(body, start=2):
        try:
            verts = [int(x) for x in ln.split()]
        except ValueError as exc:
            raise ParseError(f"line {idx}: non-integer vertex") from exc
        if len(verts) != k:
            raise ParseError(f"line {idx}: expected {k} vertices, got {len(verts)}")
        if any(not 1 <= v <= n for v in verts):
            raise ParseError(f"line {idx}: vertex out of range 1..{n}")
        if any(a >= b for a, b in zip(verts, verts[1:])):
            raise ParseError(f"line {idx}: vertices must be strictly increasing")
        edges.append([v - 1 for v in verts])
    try:
        H = Hypergraph.from_edges(n, k, edges, dedup=False)
    except DomainError as exc:
        raise ParseError(str(exc)) from exc
    # the format carries no flag; claim distinctness exactly when it holds
    return H if H.has_duplicates() else Hypergraph(H.n, H.k, H.edges, dedup=True)


def write_hypergraph(H: Hypergraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_hypergraph(H))


def read_hypergraph(path) -> Hypergraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_hypergraph(fh.read())
