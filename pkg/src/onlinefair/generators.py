"""Instance generators whose exact outcomes encode graph and set problems.

Each generator builds an allocation instance from a combinatorial object (a
bipartite graph or an integer multiset) so that an exact-outcome query on the
instance answers a question about the object: counting perfect matchings,
bounding the minimum maximal matching, or deciding subset-sum with a
cardinality constraint.  The module also ships independent brute-force
oracles for those questions, so generated instances can be validated against
ground truth that shares no code with the allocation engine.

All generators return instances that pass ``validate_instance``, use 0-based
internal indices, and arrive in identity order (item k is the k-th arrival)
unless the arrival model is a distribution.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    Distribution,
    FixedOrder,
    InputError,
    Instance,
    validate_instance,
)

ZERO = Fraction(0)
ONE = Fraction(1)


class SideMismatch(InputError):
    pass


class NotThreeRegular(InputError):
    pass


class NotSubdivisionShaped(InputError):
    pass


class BadR(InputError):
    pass


class EmptyGraph(InputError):
    pass


@dataclass(frozen=True)
class BipartiteGraph:
    """A bipartite graph on ``left`` + ``right`` vertices, 0-based.

    Edges are (left index, right index) pairs.  The external JSON format is
    {"left": L, "right": R, "edges": [[i, j], ...]} with 1-based indices.
    """

    left: int
    right: int
    edges: frozenset

    def left_degrees(self) -> list[int]:
        degrees = [0] * self.left
        for a, _b in self.edges:
            degrees[a] += 1
        return degrees

    def right_degrees(self) -> list[int]:
        degrees = [0] * self.right
        for _a, b in self.edges:
            degrees[b] += 1
        return degrees

    def left_neighbors(self, a: int) -> tuple[int, ...]:
        return tuple(sorted(b for x, b in self.edges if x == a))

    def is_regular(self, k: int) -> bool:
        return (all(d == k for d in self.left_degrees())
                and all(d == k for d in self.right_degrees()))

    def is_subdivision_shaped(self) -> bool:
        """Left degrees exactly 2, right degrees at most 3, at least as many
        left as right vertices, and no two left vertices with identical
        neighborhoods."""
        if self.left < self.right:
            return False
        if any(d != 2 for d in self.left_degrees()):
            return False
        if any(d > 3 for d in self.right_degrees()):
            return False
        seen = set()
        for a in range(self.left):
            pair = self.left_neighbors(a)
            if pair in seen:
                return False
            seen.add(pair)
        return True


def make_graph(left: int, right: int, edges) -> BipartiteGraph:
    if left < 0 or right < 0:
        raise InputError("vertex counts must be non-negative")
    seen = set()
    for edge in edges:
        a, b = edge
        if not (0 <= a < left and 0 <= b < right):
            raise InputError(f"edge {edge!r} out of range")
        if (a, b) in seen:
            raise InputError(f"duplicate edge {edge!r}")
        seen.add((a, b))
    return BipartiteGraph(left, right, frozenset(seen))


def graph_to_json_dict(g: BipartiteGraph) -> dict:
    return {
        "left": g.left,
        "right": g.right,
        "edges": [[a + 1, b + 1] for a, b in sorted(g.edges)],
    }


def graph_from_json_dict(data: dict) -> BipartiteGraph:
    try:
        left = int(data["left"])
        right = int(data["right"])
        raw = data["edges"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad graph JSON: {exc}") from exc
    edges = []
    for pair in raw:
        a, b = pair
        edges.append((int(a) - 1, int(b) - 1))
    return make_graph(left, right, edges)


# --- named graphs -------------------------------------------------------------


def complete_bipartite(left: int, right: int) -> BipartiteGraph:
    return make_graph(left, right,
                      [(a, b) for a in range(left) for b in range(right)])


def even_cycle(length: int) -> BipartiteGraph:
    """The cycle on ``length`` vertices (length even) as a bipartite graph:
    left vertex i is adjacent to right vertices i and i+1 (mod length/2)."""
    if length < 4 or length % 2:
        raise InputError("cycle length must be an even number >= 4")
    half = length // 2
    edges = [(i, i) for i in range(half)] + [(i, (i + 1) % half) for i in range(half)]
    return make_graph(half, half, edges)


def complete_minus_perfect_matching(n: int) -> BipartiteGraph:
    """K_{n,n} without the edges (i, i); 3-regular when n = 4."""
    return make_graph(n, n, [(a, b) for a in range(n) for b in range(n) if a != b])


def complete_minus_even_cycle(n: int) -> BipartiteGraph:
    """K_{n,n} without a spanning cycle's edges (i, i) and (i, i+1);
    3-regular when n = 5."""
    return make_graph(n, n, [(a, b) for a in range(n) for b in range(n)
                             if b not in (a, (a + 1) % n)])


# --- brute-force oracles -------------------------------------------------------


def count_perfect_matchings(g: BipartiteGraph) -> int:
    """Exact perfect-matching count via the permanent of the biadjacency
    matrix, computed by inclusion-exclusion over column subsets."""
    if g.left != g.right:
        raise SideMismatch(
            f"perfect matchings need equal sides, got {g.left} and {g.right}")
    n = g.left
    row_masks = [0] * n
    for a, b in g.edges:
        row_masks[a] |= 1 << b
    total = 0
    for subset in range(1 << n):
        prod = 1
        for mask in row_masks:
            prod *= (mask & subset).bit_count()
            if not prod:
                break
        total += prod if (n - subset.bit_count()) % 2 == 0 else -prod
    return total


def min_maximal_matching_size(g: BipartiteGraph) -> int:
    """Minimum cardinality over all maximal matchings, by exhaustive search.

    A matching is maximal when every edge of the graph touches a matched
    vertex.  Desk-scale only: the search walks every matching once.
    """
    edges = sorted(g.edges)
    if not edges:
        raise EmptyGraph("the graph has no edges")
    best = len(edges) + 1

    def walk(idx: int, size: int, used_left: int, used_right: int):
        nonlocal best
        if size >= best:
            return
        if idx == len(edges):
            for a, b in edges:
                if not (used_left >> a) & 1 and not (used_right >> b) & 1:
                    return
            best = size
            return
        a, b = edges[idx]
        if not (used_left >> a) & 1 and not (used_right >> b) & 1:
            walk(idx + 1, size + 1, used_left | (1 << a), used_right | (1 << b))
        walk(idx + 1, size, used_left, used_right)

    walk(0, 0, 0, 0)
    return best


@dataclass(frozen=True)
class SubsetInstance:
    """An integer multiset with a target sum ``b`` and cardinality ``c``."""

    values: tuple[int, ...]
    b: int
    c: int


def make_subset_instance(values, b: int, c: int) -> SubsetInstance:
    vals = tuple(int(v) for v in values)
    if not 1 <= c <= len(vals):
        raise InputError(f"cardinality {c} outside 1..{len(vals)}")
    return SubsetInstance(vals, int(b), int(c))


def subset_sum_bc(s: SubsetInstance) -> bool:
    """Does some cardinality-c subset of the values sum to b?  Decided by a
    reachable (cardinality, sum) table."""
    reachable = {(0, 0)}
    for v in s.values:
        reachable |= {(k + 1, t + v) for k, t in reachable}
    return (s.c, s.b) in reachable


# --- allocation-instance gadgets ----------------------------------------------


def reduction1_instance(g: BipartiteGraph, edge_restricted: bool = True) -> Instance:
    """Two agents with all-ones utilities whose stochastic outcome counts the
    graph's perfect matchings.

    Left vertices are read as items, right vertices as moments; with
    ``edge_restricted`` the arrival probability of item k at moment j is 1/M
    on edges and 0 elsewhere, so the non-void arrival sequences are exactly
    the perfect matchings and each agent's expected utility is
    (1/M^M)(M/2) times the matching count.  The unrestricted variant puts
    1/M everywhere instead.
    """
    if g.left != g.right:
        raise SideMismatch(
            f"need equal sides, got {g.left} items and {g.right} moments")
    m = g.left
    share = Fraction(1, m)
    matrix = [[ZERO] * m for _ in range(m)]
    for k in range(m):
        for j in range(m):
            if not edge_restricted or (k, j) in g.edges:
                matrix[k][j] = share
    utilities = tuple(tuple(ONE for _ in range(m)) for _ in range(2))
    instance = Instance(2, m, utilities,
                        Distribution(tuple(tuple(row) for row in matrix)))
    return validate_instance(instance)


def _three_regular_sides(g: BipartiteGraph) -> int:
    if g.left != g.right or not g.is_regular(3):
        raise NotThreeRegular("the graph must be 3-regular with equal sides")
    return g.left


def _matching_gadget_rows(g: BipartiteGraph, extra_items: int):
    """Shared layout for the perfect-matching gadgets.

    Items 0..N-1 mirror the right vertices; items N+2i and N+2i+1 form the
    pair owned by left vertex i.  Agent 3i+j is the j-th edge of left vertex
    i (neighbors sorted ascending) and likes its right-vertex item plus the
    vertex's pair; one more agent (the collector, index 3N) is appended by
    the callers.  ``extra_items`` columns are left all-zero for the callers
    to fill.
    """
    n_vertices = _three_regular_sides(g)
    agents = 3 * n_vertices + 1
    items = 3 * n_vertices + extra_items
    rows = [[ZERO] * items for _ in range(agents)]
    for i in range(n_vertices):
        neighbors = g.left_neighbors(i)
        for j, vertex in enumerate(neighbors):
            agent = 3 * i + j
            rows[agent][vertex] = ONE
            rows[agent][n_vertices + 2 * i] = ONE
            rows[agent][n_vertices + 2 * i + 1] = ONE
    return n_vertices, rows


def reduction2_instance(g: BipartiteGraph) -> Instance:
    """The fixed-order gadget whose exact outcome counts perfect matchings.

    3N+1 agents and 3N+2 items for a 3-regular graph with N vertices per
    side.  After the right-vertex items and the pair items, a solo item
    (liked only by the collector agent) and a common item (liked by all
    agents) arrive.  Under Balanced Like the collector's expected utility is
    1 plus the common item's probability, which is proportional to the
    perfect-matching count.
    """
    n_vertices, rows = _matching_gadget_rows(g, extra_items=2)
    collector = 3 * n_vertices
    solo = 3 * n_vertices
    common = 3 * n_vertices + 1
    rows[collector][solo] = ONE
    for agent in range(len(rows)):
        rows[agent][common] = ONE
    items = 3 * n_vertices + 2
    instance = Instance(len(rows), items, tuple(tuple(r) for r in rows),
                        FixedOrder(tuple(range(items))))
    return validate_instance(instance)


def reduction2_manip_instance(g: BipartiteGraph) -> Instance:
    """The manipulation variant: a decoy item, liked only by the collector,
    arrives between the solo item and the common item.

    Bidding sincerely the collector wins the solo and decoy items outright
    and ends with utility exactly 2; bidding zero on the decoy restores the
    plain gadget, where the utility is 1 plus a matching-count term.  The
    collector's exact gain from that deviation therefore encodes the count.
    """
    n_vertices, rows = _matching_gadget_rows(g, extra_items=3)
    collector = 3 * n_vertices
    solo = 3 * n_vertices
    decoy = 3 * n_vertices + 1
    common = 3 * n_vertices + 2
    rows[collector][solo] = ONE
    rows[collector][decoy] = ONE
    for agent in range(len(rows)):
        rows[agent][common] = ONE
    items = 3 * n_vertices + 3
    instance = Instance(len(rows), items, tuple(tuple(r) for r in rows),
                        FixedOrder(tuple(range(items))))
    return validate_instance(instance)


def reduction3_instance(g: BipartiteGraph, r: int) -> Instance:
    """The fixed-order gadget linking a prize item's reachability to the
    graph's minimum maximal matching size.

    The graph must be subdivision shaped (left degrees exactly 2, right
    degrees at most 3, left side at least as large, no duplicated left
    neighborhoods).  The instance has 3N+M-r+1 agents and items:

    * two vertex agents per left vertex, each liking the vertex's opener
      item, one bridge item per incident right vertex, the vertex's closer
      item, and every token item;
    * N-r filler agents liking all opener items;
    * M claimant agents liking only the final prize item;
    * one challenger liking the last token item and the prize item.

    Items arrive openers first, then bridges, closers, tokens, and the prize
    last.  The challenger can win the prize exactly when the graph has a
    maximal matching of size at most r, and each claimant's expected utility
    reaches 1/M exactly when the challenger cannot.
    """
    if not g.is_subdivision_shaped():
        raise NotSubdivisionShaped(
            "need left degrees exactly 2, right degrees <= 3, left side at "
            "least as large as right, and distinct left neighborhoods")
    n_left, m_right = g.left, g.right
    if not 1 <= r <= n_left:
        raise BadR(f"r must be within 1..{n_left}")
    tokens = n_left - r
    agents = 3 * n_left + m_right - r + 1
    items = agents

    opener = list(range(n_left))
    bridge = [n_left + j for j in range(m_right)]
    closer = [n_left + m_right + i for i in range(n_left)]
    token = [2 * n_left + m_right + t for t in range(tokens)]
    prize = items - 1

    rows = [[ZERO] * items for _ in range(agents)]
    for i in range(n_left):
        neighbors = g.left_neighbors(i)
        for j in range(2):
            agent = 2 * i + j
            rows[agent][opener[i]] = ONE
            rows[agent][bridge[neighbors[j]]] = ONE
            rows[agent][closer[i]] = ONE
            for t in token:
                rows[agent][t] = ONE
    fillers_at = 2 * n_left
    for f in range(tokens):
        for i in range(n_left):
            rows[fillers_at + f][opener[i]] = ONE
    claimants_at = 2 * n_left + tokens
    for j in range(m_right):
        rows[claimants_at + j][prize] = ONE
    challenger = agents - 1
    if tokens:
        rows[challenger][token[-1]] = ONE
    rows[challenger][prize] = ONE

    instance = Instance(agents, items, tuple(tuple(r_) for r_ in rows),
                        FixedOrder(tuple(range(items))))
    return validate_instance(instance)


def reduction3_roles(g: BipartiteGraph, r: int) -> dict:
    """Index map for the gadget's named agents and items (0-based)."""
    n_left, m_right = g.left, g.right
    tokens = n_left - r
    agents = 3 * n_left + m_right - r + 1
    return {
        "vertex_agents": tuple(range(2 * n_left)),
        "filler_agents": tuple(range(2 * n_left, 2 * n_left + tokens)),
        "claimant_agents": tuple(range(2 * n_left + tokens,
                                       2 * n_left + tokens + m_right)),
        "challenger": agents - 1,
        "opener_items": tuple(range(n_left)),
        "bridge_items": tuple(range(n_left, n_left + m_right)),
        "closer_items": tuple(range(n_left + m_right, 2 * n_left + m_right)),
        "token_items": tuple(range(2 * n_left + m_right,
                                   2 * n_left + m_right + tokens)),
        "prize_item": agents - 1,
    }


def reduction_subset_instance(s: SubsetInstance) -> tuple[Instance, Fraction]:
    """Two agents valuing item k at the k-th integer, uniform arrivals, and
    the threshold that a qualifying subset's existence pushes the expected
    utility past.

    Returns (instance, threshold) with threshold = (1/M^c)(b/2) for M values.
    """
    m = len(s.values)
    share = Fraction(1, m)
    utilities = tuple(tuple(Fraction(v) for v in s.values) for _ in range(2))
    matrix = tuple(tuple(share for _ in range(m)) for _ in range(m))
    instance = Instance(2, m, utilities, Distribution(matrix))
    threshold = Fraction(s.b, 2 * m ** s.c)
    return validate_instance(instance), threshold


def random_instance(n: int, m: int, seed: int, *, arrival: str = "order",
                    values: str = "binary") -> Instance:
    """A reproducible random instance, for smoke tests and CLI demos.

    ``values``: "binary" for 0/1 utilities (at least one positive bid per
    agent), "rational" for small random fractions.  ``arrival``: "order" for
    a shuffled fixed ordering, "distribution" for a random column-stochastic
    arrival matrix with denominator 12 entries.
    """
    import random as _random

    if n < 1 or m < 1:
        raise InputError("need at least one agent and one item")
    rng = _random.Random(seed)
    rows = []
    for _ in range(n):
        if values == "binary":
            row = [Fraction(rng.randint(0, 1)) for _ in range(m)]
            if not any(row):
                row[rng.randrange(m)] = ONE
        elif values == "rational":
            row = [Fraction(rng.randint(0, 6), rng.randint(1, 6)) for _ in range(m)]
        else:
            raise InputError(f"unknown values kind {values!r}")
        rows.append(tuple(row))
    if arrival == "order":
        order = list(range(m))
        rng.shuffle(order)
        model = FixedOrder(tuple(order))
    elif arrival == "distribution":
        columns = []
        for _ in range(m):
            weights = [rng.randint(0, 3) for _ in range(m)]
            total = sum(weights) or 1
            scale = rng.choice([Fraction(1), Fraction(3, 4), Fraction(1, 2)])
            columns.append([Fraction(w, total) * scale for w in weights])
        matrix = tuple(tuple(columns[j][k] for j in range(m)) for k in range(m))
        model = Distribution(matrix)
    else:
        raise InputError(f"unknown arrival kind {arrival!r}")
    return validate_instance(Instance(n, m, tuple(rows), model))


def brute_force_perfect_matchings(g: BipartiteGraph) -> int:
    """Permutation-enumeration matching count, kept as an independent check
    on the inclusion-exclusion permanent."""
    if g.left != g.right:
        raise SideMismatch(
            f"perfect matchings need equal sides, got {g.left} and {g.right}")
    count = 0
    for perm in itertools.permutations(range(g.right)):
        if all((a, b) in g.edges for a, b in enumerate(perm)):
            count += 1
    return count
