"""Exact decision of the strong EKR property.

A family is strong-EKR when every maximum intersecting subfamily (clique in
the intersection graph of the edges) is a full star.  The decision reduces
to two exact searches:

  1. omega = maximum clique in the graph on edge indices with adjacency
     "edges intersect" (branch and bound, greedy-coloring upper bounds,
     seeded by the largest star, so the lower bound starts at Delta);
  2. if omega == Delta, a second branch and bound looking for one
     omega-clique whose common intersection (bitwise AND) is empty.

Why that is equivalent to "every largest clique is a star": stars are
cliques, so omega >= Delta.  A maximum clique C with a common vertex x has
|C| <= d(x) <= Delta <= omega = |C|, forcing d(x) = |C| and C = H_x, the
full star of x.  Hence every maximum clique is either a full star or has
empty common intersection, and EKR fails exactly when omega > Delta (such a
maximum clique cannot have a common vertex) or some omega-clique has empty
intersection.  Cliques of size <= 2 always share a vertex, so omega <= 2
(including the empty hypergraph) verdicts "holds".

EKR is undefined for multisets: hypergraphs with repeated edges are
rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import DomainError, ResourceLimitError
from .hypergraph import Hypergraph, degree_stats

DEFAULT_EDGE_CAP = 2000
DEFAULT_NODE_BUDGET = 20_000_000


@dataclass(frozen=True)
class EkrVerdict:
    holds: bool
    omega: int
    Delta: int
    witness: Optional[tuple[int, ...]]       # edge indices of a failing clique
    trivial_center: Optional[int] = None     # common vertex when holds (if any)

    def witness_edges(self, H: Hypergraph):
        if self.witness is None:
            return None
        return [H.edges[i] for i in self.witness]


def is_trivial_clique(clique_bits) -> tuple[bool, Optional[int]]:
    """(trivial?, center): AND across members, lowest set bit as center.

    The empty clique is trivial with no center: (True, None).
    """
    bits = list(clique_bits)
    if not bits:
        return True, None
    common = bits[0]
    for b in bits[1:]:
        common &= b
        if not common:
            return False, None
    return True, (common & -common).bit_length() - 1


def intersection_adjacency(edge_bits) -> list[int]:
    """adj[i] = bitmask of edge indices j != i with edges i, j intersecting."""
    m = len(edge_bits)
    adj = [0] * m
    for i in range(m):
        bi = edge_bits[i]
        mask_i = 0
        for j in range(i + 1, m):
            if bi & edge_bits[j]:
                mask_i |= 1 << j
                adj[j] |= 1 << i
        adj[i] |= mask_i
    return adj


class _Budget:
    __slots__ = ("left",)

    def __init__(self, nodes: int):
        self.left = nodes

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise ResourceLimitError("branch-and-bound node budget exceeded")


def _color_order(adj, P: int):
    """Greedy coloring of the candidate set P in index order.

    Returns (vertices, colors), vertices grouped class by class, so colors is
    nondecreasing and colors[-1] is the clique-size upper bound for P.
    """
    order = []
    colors = []
    color = 0
    rest = P
    while rest:
        color += 1
        avail = rest
        while avail:
            b = avail & -avail
            v = b.bit_length() - 1
            order.append(v)
            colors.append(color)
            avail &= ~adj[v] & ~b
            rest &= ~b
    return order, colors


def _pair_color_order(cadj, P: int):
    """Matching-based coloring for the dense regime (n < 3k), where every
    independent set of the intersection graph has at most two members.

    Classes are the pairs of a greedy maximal matching on the disjointness
    graph, improved by length-3 augmentation sweeps, plus singletons; the
    class count |P| - matching size is a much tighter clique bound here than
    first-fit coloring.
    """
    mate = {}
    rest = P
    free = []
    # seed: fewest remaining partners first, so hard-to-pair vertices go early
    verts = []
    r = P
    while r:
        b = r & -r
        verts.append(((cadj[b.bit_length() - 1] & P).bit_count(), b.bit_length() - 1))
        r ^= b
    verts.sort()
    taken = 0
    for _, v in verts:
        if (taken >> v) & 1:
            continue
        avail = cadj[v] & P & ~taken & ~(1 << v)
        if avail:
            w = (avail & -avail).bit_length() - 1
            mate[v] = w
            mate[w] = v
            taken |= (1 << v) | (1 << w)
        else:
            free.append(v)
            taken |= 1 << v
    free = set(free)
    changed = True
    while changed and len(free) > 1:
        changed = False
        for u in sorted(free):
            if u not in free:
                continue
            amask = cadj[u] & P
            done = False
            while amask and not done:
                ab = amask & -amask
                a = ab.bit_length() - 1
                amask ^= ab
                if a in mate:
                    bp = mate[a]
                    wmask = cadj[bp] & P & ~(1 << u)
                    while wmask:
                        wb = wmask & -wmask
                        w = wb.bit_length() - 1
                        wmask ^= wb
                        if w in free:
                            mate[u] = a
                            mate[a] = u
                            mate[bp] = w
                            mate[w] = bp
                            free.discard(u)
                            free.discard(w)
                            done = True
                            changed = True
                            break
                elif a in free:
                    mate[u] = a
                    mate[a] = u
                    free.discard(u)
                    free.discard(a)
                    done = True
                    changed = True
    order = []
    colors = []
    color = 0
    for v, w in sorted({(min(v, w), max(v, w)) for v, w in mate.items()}):
        color += 1
        order.append(v)
        order.append(w)
        colors.append(color)
        colors.append(color)
    for v in sorted(free):
        color += 1
        order.append(v)
        colors.append(color)
    return order, colors


def _make_coloring(adj, m: int, dense_pairs: bool):
    """Pick the coloring bound: matching-based when independent sets of the
    intersection graph cannot exceed two edges (n < 3k), first-fit otherwise."""
    if not dense_pairs:
        return lambda P: _color_order(adj, P)
    full = (1 << m) - 1
    cadj = [full & ~adj[i] & ~(1 << i) for i in range(m)]
    return lambda P: _pair_color_order(cadj, P)


def _greedy_star_clique(H: Hypergraph):
    stats = degree_stats(H)
    Delta = stats.Delta
    if Delta == 0:
        return stats, []
    x = stats.deg.index(Delta)
    star = [i for i, e in enumerate(H.edges) if (e.bits >> x) & 1]
    return stats, star


def max_intersecting_family(H: Hypergraph, edge_cap: int = DEFAULT_EDGE_CAP,
                            node_budget: int = DEFAULT_NODE_BUDGET):
    """(omega, witness clique as edge indices), exact.

    Branch and bound over edge indices ordered by descending intersection
    degree (ties by index, i.e. input/colex order), greedy-coloring bounds,
    lower bound seeded with the largest star.
    """
    if H.m > edge_cap:
        raise ResourceLimitError(f"|H| = {H.m} exceeds the edge cap {edge_cap}")
    if H.m == 0:
        return 0, []
    bits = H.edge_bits
    adj = intersection_adjacency(bits)
    # relabel by descending degree for better coloring bounds
    perm = sorted(range(H.m), key=lambda i: (-adj[i].bit_count(), i))
    inv = [0] * H.m
    for new, old in enumerate(perm):
        inv[old] = new
    radj = [0] * H.m
    for new, old in enumerate(perm):
        mask = 0
        a = adj[old]
        while a:
            b = a & -a
            mask |= 1 << inv[b.bit_length() - 1]
            a ^= b
        radj[new] = mask

    _, star = _greedy_star_clique(H)
    best = [len(star), [inv[i] for i in star]]
    budget = _Budget(node_budget)
    coloring = _make_coloring(radj, H.m, H.n < 3 * H.k)

    def expand(R: list, P: int):
        budget.tick()
        order, colors = coloring(P)
        for idx in range(len(order) - 1, -1, -1):
            if len(R) + colors[idx] <= best[0]:
                return
            v = order[idx]
            R.append(v)
            newP = P & radj[v]
            if newP:
                expand(R, newP)
            elif len(R) > best[0]:
                best[0] = len(R)
                best[1] = R.copy()
            R.pop()
            P &= ~(1 << v)

    expand([], (1 << H.m) - 1)
    omega, clique = best
    return omega, sorted(perm[v] for v in clique)


def find_nontrivial_clique(H: Hypergraph, target: int,
                           node_budget: int = DEFAULT_NODE_BUDGET,
                           initial_best: int | None = None,
                           maximize: bool = False):
    """Search for a clique of size target (or, with maximize, the largest
    clique of size > initial_best) whose common intersection is empty.

    Prunes a branch when the partial clique plus its candidate set cannot
    reach the goal size (popcount and coloring bounds) and when every
    completion keeps some vertex common (AND over partial clique and all
    remaining candidates nonempty).  Deterministic: candidates explored in
    index order.
    """
    bits = H.edge_bits
    if maximize:
        floor = initial_best if initial_best is not None else 2
    else:
        floor = initial_best if initial_best is not None else target - 1
    if H.m == 0 or target > H.m:
        return (floor, None) if maximize else None
    adj = intersection_adjacency(bits)
    budget = _Budget(node_budget)
    best = [floor, None]
    coloring = _make_coloring(adj, H.m, H.n < 3 * H.k)

    def and_with_seed(mask: int, seed: int) -> int:
        c = seed
        while mask and c:
            b = mask & -mask
            c &= bits[b.bit_length() - 1]
            mask ^= b
        return c

    def expand(R: list, common: int, P: int):
        budget.tick()
        if common == 0 and len(R) > best[0]:
            best[0] = len(R)
            best[1] = R.copy()
            if not maximize and best[0] >= target:
                return True
        if and_with_seed(P, common):
            # every extension of R from P keeps a common vertex
            return False
        order, colors = coloring(P)
        for idx in range(len(order) - 1, -1, -1):
            if len(R) + colors[idx] <= best[0]:
                return False
            v = order[idx]
            R.append(v)
            if expand(R, common & bits[v], P & adj[v]):
                return True
            R.pop()
            P &= ~(1 << v)
        return False

    expand([], -1, (1 << H.m) - 1)
    if maximize:
        return best[0], (tuple(best[1]) if best[1] else None)
    if best[1] is not None and len(best[1]) >= target:
        return tuple(best[1])
    return None


def max_nontrivial_clique(H: Hypergraph, node_budget: int = DEFAULT_NODE_BUDGET,
                          initial_best: int | None = None):
    """(size, witness) of the largest clique with empty common intersection.

    Size is reported as the initial floor (default 2: cliques that small
    always share a vertex) when nothing larger exists.
    """
    return find_nontrivial_clique(H, target=3, node_budget=node_budget,
                                  initial_best=initial_best, maximize=True)


def verify_ekr(H: Hypergraph, edge_cap: int = DEFAULT_EDGE_CAP,
               node_budget: int = DEFAULT_NODE_BUDGET) -> EkrVerdict:
    """Exact strong-EKR verdict; see the module docstring for the argument."""
    if H.has_duplicates():
        raise DomainError("EKR is undefined for multisets: duplicate edges present")
    stats = degree_stats(H)
    Delta = stats.Delta
    omega, clique = max_intersecting_family(H, edge_cap, node_budget)
    if omega > Delta:
        # cannot have a common vertex: |C| <= d(x) <= Delta < omega
        return EkrVerdict(False, omega, Delta, tuple(clique))
    if omega <= 2:
        trivial, center = is_trivial_clique(H.edges[i].bits for i in clique)
        return EkrVerdict(True, omega, Delta, None, center if trivial else None)
    witness = find_nontrivial_clique(H, target=omega, node_budget=node_budget)
    if witness is not None:
        return EkrVerdict(False, omega, Delta, witness)
    trivial, center = is_trivial_clique(H.edges[i].bits for i in clique)
    return EkrVerdict(True, omega, Delta, None, center if trivial else None)


def brute_force_ekr(H: Hypergraph, max_edges: int = 20) -> EkrVerdict:
    """Test oracle: walk every clique of the subfamily lattice.

    Identical contract to verify_ekr; guarded to |H| <= max_edges.
    """
    if H.m > max_edges:
        raise ResourceLimitError(f"brute force limited to |H| <= {max_edges}")
    if H.has_duplicates():
        raise DomainError("EKR is undefined for multisets: duplicate edges present")
    stats = degree_stats(H)
    Delta = stats.Delta
    bits = H.edge_bits
    m = H.m
    adj = intersection_adjacency(bits)
    best = [0, []]            # omega, first max clique found
    best_nontrivial = [0, None]

    def walk(R: list, common: int, cand: int):
        size = len(R)
        if size > best[0]:
            best[0] = size
            best[1] = R.copy()
        if common == 0 and size > best_nontrivial[0]:
            best_nontrivial[0] = size
            best_nontrivial[1] = R.copy()
        while cand:
            b = cand & -cand
            v = b.bit_length() - 1
            cand ^= b
            R.append(v)
            walk(R, common & bits[v], cand & adj[v])
            R.pop()

    walk([], -1, (1 << m) - 1)
    omega = best[0]
    if best_nontrivial[0] == omega and omega >= 3:
        return EkrVerdict(False, omega, Delta, tuple(best_nontrivial[1]))
    trivial, center = is_trivial_clique(bits[i] for i in best[1])
    return EkrVerdict(True, omega, Delta, None, center if trivial else None)


def validate_witness(H: Hypergraph, verdict: EkrVerdict) -> bool:
    """Re-validate a failure witness by direct bitset ANDs."""
    if verdict.holds:
        return verdict.witness is None
    w = verdict.witness
    if w is None or len(w) != verdict.omega:
        return False
    bts = [H.edges[i].bits for i in w]
    for i in range(len(bts)):
        for j in range(i + 1, len(bts)):
            if not bts[i] & bts[j]:
                return False
    trivial, _ = is_trivial_clique(bts)
    return not trivial or verdict.omega > verdict.Delta


def verdict_to_json(H: Hypergraph, verdict: EkrVerdict) -> dict:
    """Verdict JSON: {holds, omega, delta, witness} with 1-based vertices."""
    witness = None
    if verdict.witness is not None:
        witness = [[v + 1 for v in H.edges[i].members] for i in verdict.witness]
    return {"holds": verdict.holds, "omega": verdict.omega,
            "delta": verdict.Delta, "witness": witness}
