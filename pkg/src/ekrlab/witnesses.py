"""Structured obstructions to EKR: Hilton-Milner families, generic cliques,
sequential degree profiles, and the A/B/C event taxonomy for nontrivial
cliques.

Multisets are allowed everywhere in this module; degrees count multiplicity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .analytics import RegimeParams
from .errors import DomainError
from .hypergraph import Hypergraph
from .verifier import _Budget, _color_order, intersection_adjacency, is_trivial_clique, \
    DEFAULT_NODE_BUDGET


# ---------------------------------------------------------------------------
# Hilton-Milner families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HMWitness:
    """{B0} plus >= d petals through a common vertex x outside B0, all
    meeting B0; the extremal nontrivial clique shape."""

    center: int
    b0_index: int
    petal_indices: tuple[int, ...]

    @property
    def size(self) -> int:
        return 1 + len(self.petal_indices)


def find_hilton_milner(H: Hypergraph, d: int) -> Optional[HMWitness]:
    """First (x ascending, B0 by edge index) witness with >= d petals, or None."""
    if d <= 0:
        raise DomainError("d must be a positive integer")
    bits = H.edge_bits
    for x in range(H.n):
        x_bit = 1 << x
        star = [i for i, b in enumerate(bits) if b & x_bit]
        if len(star) < d:
            continue
        for b0 in range(H.m):
            if bits[b0] & x_bit:
                continue
            petals = [i for i in star if bits[i] & bits[b0]]
            if len(petals) >= d:
                return HMWitness(x, b0, tuple(petals))
    return None


def brute_force_hilton_milner(H: Hypergraph, d: int) -> bool:
    """Oracle: literal scan over all (x, B0) pairs counting petals."""
    if d <= 0:
        raise DomainError("d must be a positive integer")
    for x in range(H.n):
        for b0, e0 in enumerate(H.edges):
            if x in e0.members:
                continue
            count = sum(1 for i, e in enumerate(H.edges)
                        if i != b0 and x in e.members and e.intersects(e0))
            if count >= d:
                return True
    return False


def hm_count_bound(params, d: int) -> float:
    """Dominant union-bound term phi^(d+1) k^(2d-1) n^(-(d-2)) for the
    probability that a Hilton-Milner family of size d+1 appears."""
    if d <= 0:
        raise DomainError("d must be a positive integer")
    phi = float(params.phi)
    return phi ** (d + 1) * float(params.k) ** (2 * d - 1) * float(params.n) ** (-(d - 2))


# ---------------------------------------------------------------------------
# Generic cliques
# ---------------------------------------------------------------------------

def _clique_degrees(H: Hypergraph, indices) -> dict[int, int]:
    deg: dict[int, int] = {}
    for i in indices:
        for v in H.edges[i].members:
            deg[v] = deg.get(v, 0) + 1
    return deg


def _require_clique(H: Hypergraph, indices) -> None:
    idx = list(indices)
    bits = H.edge_bits
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if not bits[idx[a]] & bits[idx[b]]:
                raise DomainError(
                    f"not a clique: edges {idx[a]} and {idx[b]} are disjoint")


def is_generic_clique(H: Hypergraph, indices, zeta_cap: float) -> bool:
    """Max vertex degree <= 3 and at most zeta_cap vertices of degree
    exactly 3, degrees counted with multiplicity; input must be a clique."""
    _require_clique(H, indices)
    deg = _clique_degrees(H, indices)
    if not deg:
        return True
    if max(deg.values()) > 3:
        return False
    return sum(1 for c in deg.values() if c == 3) <= zeta_cap


def find_generic_clique(H: Hypergraph, size_t: int, zeta_cap: float,
                        node_budget: int = DEFAULT_NODE_BUDGET) -> Optional[tuple[int, ...]]:
    """First generic clique of the given size in deterministic (index) order.

    Branch and bound over edge indices: a branch dies as soon as some vertex
    degree would exceed 3 or the degree-3 count would exceed zeta_cap, or
    when the candidate count / coloring bound cannot reach size_t.
    """
    if size_t < 0:
        raise DomainError("size_t must be nonnegative")
    if size_t == 0:
        return ()
    if size_t > H.m:
        return None
    bits = H.edge_bits
    adj = intersection_adjacency(bits)
    budget = _Budget(node_budget)
    deg: dict[int, int] = {}
    out: list[tuple[int, ...]] = []

    def feasible(i: int) -> bool:
        bumps = 0
        for v in H.edges[i].members:
            c = deg.get(v, 0)
            if c >= 3:
                return False
            if c == 2:
                bumps += 1
        deg3 = sum(1 for c in deg.values() if c == 3)
        return deg3 + bumps <= zeta_cap

    def expand(R: list, P: int) -> bool:
        budget.tick()
        if len(R) == size_t:
            out.append(tuple(R))
            return True
        if len(R) + P.bit_count() < size_t:
            return False
        _, colors = _color_order(adj, P)
        if not colors or len(R) + colors[-1] < size_t:
            return False
        while P:
            b = P & -P
            v = b.bit_length() - 1
            P ^= b
            if len(R) + 1 + P.bit_count() < size_t:
                return False
            if feasible(v):
                for u in H.edges[v].members:
                    deg[u] = deg.get(u, 0) + 1
                R.append(v)
                if expand(R, P & adj[v]):
                    return True
                R.pop()
                for u in H.edges[v].members:
                    deg[u] -= 1
        return False

    expand([], (1 << H.m) - 1)
    return out[0] if out else None


def brute_force_generic_clique(H: Hypergraph, size_t: int, zeta_cap: float) -> bool:
    """Oracle: test every size_t subfamily directly."""
    from itertools import combinations
    bits = H.edge_bits
    for idx in combinations(range(H.m), size_t):
        if all(bits[a] & bits[b] for a, b in combinations(idx, 2)):
            if is_generic_clique(H, idx, zeta_cap):
                return True
    return False


# ---------------------------------------------------------------------------
# Sequential degree profile of an ordered clique
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CliqueProfile:
    """Edge-by-edge revelation stats: W_i (degree exactly 2), Z_i (>= 3),
    U_i = union; s_i = |A_i cap W_{i-1}|, r_i = |A_i cap Z_{i-1}|.

    Identities: s = |Z| and r = sum over Z of (d_v - 3); if every degree is
    <= lambda_cap then Psi = sum over Z of [C(d_v,2) - 1] <= X(r, s).
    """

    w_sizes: tuple[int, ...]
    z_sizes: tuple[int, ...]
    u_sizes: tuple[int, ...]
    s_vec: tuple[int, ...]
    r_vec: tuple[int, ...]
    s: int
    r: int
    psi: int
    x_rs: float
    max_deg: int
    num_deg3: int      # vertices with final degree exactly 3


def x_rs(r: int, s: int, lambda_cap: float) -> float:
    """X(r, s) = (lambda_cap + 2) r / 2 + 2 s."""
    return (lambda_cap + 2.0) * r / 2.0 + 2.0 * s


def clique_profile(H: Hypergraph, ordered_indices, lambda_cap: float) -> CliqueProfile:
    deg: dict[int, int] = {}
    W: set[int] = set()
    Z: set[int] = set()
    w_sizes, z_sizes, u_sizes, s_vec, r_vec = [], [], [], [], []
    for i in ordered_indices:
        mem = H.edges[i].members
        s_vec.append(sum(1 for v in mem if v in W))
        r_vec.append(sum(1 for v in mem if v in Z))
        for v in mem:
            c = deg.get(v, 0) + 1
            deg[v] = c
            if c == 2:
                W.add(v)
            elif c == 3:
                W.discard(v)
                Z.add(v)
        w_sizes.append(len(W))
        z_sizes.append(len(Z))
        u_sizes.append(len(W) + len(Z))
    s = sum(s_vec)
    r = sum(r_vec)
    psi = sum(math.comb(deg[v], 2) - 1 for v in Z)
    return CliqueProfile(
        tuple(w_sizes), tuple(z_sizes), tuple(u_sizes), tuple(s_vec), tuple(r_vec),
        s, r, psi, x_rs(r, s, lambda_cap),
        max(deg.values()) if deg else 0,
        sum(1 for c in deg.values() if c == 3),
    )


# ---------------------------------------------------------------------------
# A/B/C event taxonomy for nontrivial cliques
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CliqueClassification:
    kind: Optional[str]                 # "A", "B", "C", or None
    vertices: tuple[int, ...]           # certifying vertex/vertices


def classify_nontrivial_clique(H: Hypergraph, clique_indices, regime: RegimeParams,
                               eps: float) -> CliqueClassification:
    """Which of the three unlikely-event shapes the clique realizes.

    Checked in fixed priority order (the shapes overlap; the derivation only
    needs "at least one", so determinism requires an order):

      A: some x with clique-degree >= tau, |C| >= d(x) (degree in H), and
         |C| >= alpha or |C| - d_C(x) >= 2/eps;
      B: two vertices of clique-degree at least lambda;
      C: |C| >= gamma, at most one vertex of clique-degree greater than
         lambda (strict, as opposed to B's non-strict), max degree < tau.
    """
    idx = list(clique_indices)
    _require_clique(H, idx)
    trivial, _ = is_trivial_clique(H.edges[i].bits for i in idx)
    if trivial:
        raise DomainError("taxonomy applies to nontrivial cliques only")
    cdeg = _clique_degrees(H, idx)
    size = len(idx)
    hdeg = [0] * H.n
    for e in H.edges:
        for v in e.members:
            hdeg[v] += 1
    # (A)
    for x in sorted(cdeg):
        if (cdeg[x] >= regime.tau and size >= hdeg[x]
                and (size >= regime.alpha or size - cdeg[x] >= 2.0 / eps)):
            return CliqueClassification("A", (x,))
    # (B)
    heavy = sorted(v for v, c in cdeg.items() if c >= regime.lam)
    if len(heavy) >= 2:
        return CliqueClassification("B", tuple(heavy[:2]))
    # (C)
    over_lambda = [v for v, c in cdeg.items() if c > regime.lam]
    if (size >= regime.gamma and len(over_lambda) <= 1
            and max(cdeg.values()) < regime.tau):
        return CliqueClassification("C", tuple(sorted(over_lambda)))
    return CliqueClassification(None, ())


# ---------------------------------------------------------------------------
# Witness JSON
# ---------------------------------------------------------------------------

def witness_to_json(H: Hypergraph, kind: str, indices) -> dict:
    """Clique JSON in the verifier's format plus a "kind" tag."""
    return {
        "kind": kind,
        "witness": [[v + 1 for v in H.edges[i].members] for i in indices],
    }
