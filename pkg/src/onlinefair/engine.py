"""Exact, possible, and necessary outcome queries.

Three information settings are supported:

* the arrival ordering is fixed and known (``FixedOrder``),
* arrivals are drawn from a known moment-by-moment distribution
  (``Distribution``),
* a prefix of arrivals and its allocation are known and nothing is known
  about future items (``QueryContext.known_prefix``).

The general tool is exhaustive traversal of the allocation tree with states
merged by identical bundles (probabilities added).  Two fast paths avoid
enumeration entirely: a closed form for Like under a fixed ordering, and an
O(m) two-state dynamic program for Balanced Like with two agents.  Both are
kept exactly interchangeable with enumeration and the test suite holds them
to exact rational equality.

Distribution semantics: a run that draws an already-arrived item, or the
no-arrival residual of a column, is void and contributes an empty allocation
(zero utility for everyone).  Only full-length repeat-free arrival sequences
count.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .core import (
    DEFAULT_ENUMERATION_BUDGET,
    AllocationState,
    BidProfile,
    BudgetExceeded,
    Distribution,
    DimensionMismatch,
    FixedOrder,
    InputError,
    Instance,
    NegativeValue,
    OutcomeReport,
    check_allocation_state,
)
from .mechanisms import Mechanism, feasible_for_counts

ZERO = Fraction(0)
ONE = Fraction(1)


class UnsupportedQuery(InputError):
    """The operation does not apply to this context (wrong arrival model,
    missing prefix, wrong mechanism)."""


class WrongArity(InputError):
    pass


class InconsistentPrefix(InputError):
    pass


class NoPositiveBranch(InputError):
    """The agent's probability is identically zero, so no positive lower
    bound exists."""


@dataclass(frozen=True)
class QueryContext:
    """Everything a query needs: instance, mechanism, bids, optional prefix.

    ``bids`` defaults to sincere (the utility matrix).  ``known_prefix`` is a
    pair (arrived item indices in arrival order, allocation state reached);
    it switches exact/possible/necessary queries to the online setting where
    nothing is known about future items.
    """

    instance: Instance
    mechanism: Mechanism
    bids: Optional[BidProfile] = None
    known_prefix: Optional[tuple[tuple[int, ...], AllocationState]] = None
    budget: int = DEFAULT_ENUMERATION_BUDGET


def _bid_rows(ctx: QueryContext) -> tuple[tuple[Fraction, ...], ...]:
    if ctx.bids is None:
        return ctx.instance.utilities
    rows = ctx.bids.bids
    if len(rows) != ctx.instance.n or any(len(r) != ctx.instance.m for r in rows):
        raise DimensionMismatch("bid profile does not match the instance")
    for row in rows:
        for entry in row:
            if entry < 0:
                raise NegativeValue(f"negative bid {entry}")
    return rows


def _positive_bidders(bid_rows, n: int, m: int):
    return tuple(tuple(i for i in range(n) if bid_rows[i][k] > 0)
                 for k in range(m))


def _checked_prefix(ctx: QueryContext):
    """Validate the known prefix and return (arrived tuple, state)."""
    arrived_raw, state = ctx.known_prefix
    arrived = tuple(arrived_raw)
    n, m = ctx.instance.n, ctx.instance.m
    check_allocation_state(state, n, m)
    if len(set(arrived)) != len(arrived):
        raise InconsistentPrefix("an item arrived twice in the prefix")
    for item in arrived:
        if not 0 <= item < m:
            raise InconsistentPrefix(f"arrived item {item} out of range")
    if not state.allocated_items() <= set(arrived):
        raise InconsistentPrefix("state allocates an item that never arrived")
    arrival = ctx.instance.arrival
    if isinstance(arrival, FixedOrder) and arrived != arrival.order[:len(arrived)]:
        raise InconsistentPrefix("arrived items are not a prefix of the fixed order")
    return arrived, state


def _start_point(ctx: QueryContext):
    """Initial owner vector and counts, honouring any known prefix."""
    n, m = ctx.instance.n, ctx.instance.m
    owners = [-1] * m
    if ctx.known_prefix is None:
        return tuple(owners), (0,) * n, ()
    arrived, state = _checked_prefix(ctx)
    for agent, bundle in enumerate(state.bundles):
        for item in bundle:
            owners[item] = agent
    return tuple(owners), state.counts, arrived


def _step_frontier(frontier, counts_of, item, positive, mechanism, budget):
    """Advance a bundle-merged frontier by one fixed arriving item."""
    new_frontier: dict = {}
    new_counts: dict = {}
    for owners, prob in frontier.items():
        counts = counts_of[owners]
        feas = feasible_for_counts(mechanism, counts, positive)
        if not feas:
            acc = new_frontier.get(owners)
            new_frontier[owners] = prob if acc is None else acc + prob
            new_counts[owners] = counts
            continue
        share = prob / len(feas)
        for agent in feas:
            succ = owners[:item] + (agent,) + owners[item + 1:]
            acc = new_frontier.get(succ)
            if acc is None:
                new_frontier[succ] = share
                new_counts[succ] = (counts[:agent] + (counts[agent] + 1,)
                                    + counts[agent + 1:])
            else:
                new_frontier[succ] = acc + share
    if len(new_frontier) > budget:
        raise BudgetExceeded(
            f"enumeration frontier reached {len(new_frontier)} states "
            f"(budget {budget})")
    return new_frontier, new_counts


def _report(instance: Instance, states: Iterable[tuple[tuple[int, ...], Fraction]],
            method: str) -> OutcomeReport:
    n, m = instance.n, instance.m
    alloc = [[ZERO] * m for _ in range(n)]
    for owners, prob in states:
        for item, owner in enumerate(owners):
            if owner >= 0:
                alloc[owner][item] += prob
    utility = tuple(
        sum((alloc[i][k] * instance.utilities[i][k] for k in range(m)), ZERO)
        for i in range(n))
    return OutcomeReport(utility, tuple(tuple(row) for row in alloc), method)


# --- fixed ordering ----------------------------------------------------------


def _remaining_order(ctx: QueryContext, arrived) -> tuple[int, ...]:
    arrival = ctx.instance.arrival
    if not isinstance(arrival, FixedOrder):
        raise UnsupportedQuery("this query needs a fixed arrival ordering")
    return arrival.order[len(arrived):]


def enumerate_fixed_order(ctx: QueryContext) -> OutcomeReport:
    """Exact outcome under a fixed ordering by exhaustive tree traversal.

    States are merged on identical bundles-per-agent, so the frontier holds
    one entry per distinct partial allocation.  Raises BudgetExceeded if the
    frontier outgrows ``ctx.budget``.
    """
    owners, counts, arrived = _start_point(ctx)
    items = _remaining_order(ctx, arrived)
    bids = _bid_rows(ctx)
    positive = _positive_bidders(bids, ctx.instance.n, ctx.instance.m)
    frontier = {owners: ONE}
    counts_of = {owners: counts}
    for item in items:
        frontier, counts_of = _step_frontier(
            frontier, counts_of, item, positive[item], ctx.mechanism, ctx.budget)
    return _report(ctx.instance, frontier.items(), "enumeration")


def allocation_states_after(ctx: QueryContext, rounds: int) -> list[AllocationState]:
    """The merged frontier after the next ``rounds`` fixed-order arrivals.

    Useful for inspecting intermediate allocations (for example, counting the
    distinct positive-probability allocations with a given shape).  States
    come back sorted by owner vector, probabilities summing to 1.
    """
    owners, counts, arrived = _start_point(ctx)
    items = _remaining_order(ctx, arrived)
    if not 0 <= rounds <= len(items):
        raise InputError(f"rounds must be within 0..{len(items)}")
    bids = _bid_rows(ctx)
    positive = _positive_bidders(bids, ctx.instance.n, ctx.instance.m)
    frontier = {owners: ONE}
    counts_of = {owners: counts}
    for item in items[:rounds]:
        frontier, counts_of = _step_frontier(
            frontier, counts_of, item, positive[item], ctx.mechanism, ctx.budget)
    states = []
    for owner_vec in sorted(frontier):
        bundles = [set() for _ in range(ctx.instance.n)]
        for item, owner in enumerate(owner_vec):
            if owner >= 0:
                bundles[owner].add(item)
        states.append(AllocationState(tuple(frozenset(b) for b in bundles),
                                      frontier[owner_vec]))
    return states


def like_closed_form(ctx: QueryContext) -> OutcomeReport:
    """O(n*m) exact outcome for Like under a fixed ordering.

    Like ignores past allocations, so each arriving item lands on each of its
    positive bidders with probability 1 over the number of positive bidders,
    independently of everything else.
    """
    if ctx.mechanism is not Mechanism.LIKE:
        raise UnsupportedQuery("closed form applies to the Like mechanism only")
    owners, _counts, arrived = _start_point(ctx)
    items = _remaining_order(ctx, arrived)
    bids = _bid_rows(ctx)
    n, m = ctx.instance.n, ctx.instance.m
    alloc = [[ZERO] * m for _ in range(n)]
    for item, owner in enumerate(owners):
        if owner >= 0:
            alloc[owner][item] = ONE
    for item in items:
        likers = [i for i in range(n) if bids[i][item] > 0]
        if not likers:
            continue
        share = Fraction(1, len(likers))
        for i in likers:
            alloc[i][item] = share
    utility = tuple(
        sum((alloc[i][k] * ctx.instance.utilities[i][k] for k in range(m)), ZERO)
        for i in range(n))
    return OutcomeReport(utility, tuple(tuple(row) for row in alloc), "closed-form")


def two_agent_dp(ctx: QueryContext) -> OutcomeReport:
    """O(m) exact outcome for Balanced Like with exactly two agents.

    Item values never matter to feasibility, only bundle sizes do, so with
    two agents the reachable configurations after every round collapse to at
    most two count pairs of the form (p, q) and (p-1, q+1).  The loop
    propagates these pairs with their exact probabilities and reads off each
    item's allocation probability as it is placed.
    """
    if ctx.instance.n != 2:
        raise WrongArity("the two-agent dynamic program needs exactly 2 agents")
    if ctx.mechanism is not Mechanism.BALANCED_LIKE:
        raise UnsupportedQuery("the two-agent dynamic program is for Balanced Like")
    owners, counts, arrived = _start_point(ctx)
    items = _remaining_order(ctx, arrived)
    bids = _bid_rows(ctx)
    m = ctx.instance.m
    alloc = [[ZERO] * m for _ in range(2)]
    for item, owner in enumerate(owners):
        if owner >= 0:
            alloc[owner][item] = ONE
    states: dict[tuple[int, int], Fraction] = {(counts[0], counts[1]): ONE}
    for item in items:
        likers = tuple(i for i in range(2) if bids[i][item] > 0)
        if not likers:
            continue
        successors: dict[tuple[int, int], Fraction] = {}
        for (p, q), prob in states.items():
            if len(likers) == 1:
                feas = likers
            elif p < q:
                feas = (0,)
            elif q < p:
                feas = (1,)
            else:
                feas = (0, 1)
            share = prob / len(feas)
            for agent in feas:
                alloc[agent][item] += share
                succ = (p + 1, q) if agent == 0 else (p, q + 1)
                successors[succ] = successors.get(succ, ZERO) + share
        states = successors
        assert len(states) <= 2, "two-agent frontier grew past 2 states"
        if len(states) == 2:
            (lo, hi) = sorted(states)
            assert lo[0] + 1 == hi[0] and lo[1] - 1 == hi[1], \
                "two-agent states are not adjacent count pairs"
    utility = tuple(
        sum((alloc[i][k] * ctx.instance.utilities[i][k] for k in range(m)), ZERO)
        for i in range(2))
    return OutcomeReport(utility, tuple(tuple(row) for row in alloc), "dp")


# --- stochastic arrivals ------------------------------------------------------


def _distribution_columns(dist: Distribution, m: int):
    """Per-moment positive-support lists [(item, probability), ...]."""
    return [
        [(k, dist.matrix[k][j]) for k in range(m) if dist.matrix[k][j] > 0]
        for j in range(m)
    ]


def _run_distribution(ctx: QueryContext, moments: int):
    """Frontier over (arrived set, owner vector) pairs after ``moments`` draws.

    Returns (frontier dict, counts dict, aborted mass).  Aborted mass gathers
    every voided continuation: a no-arrival draw or a repeated item.
    """
    if ctx.known_prefix is not None:
        raise UnsupportedQuery(
            "distribution enumeration starts from scratch; use the online "
            "queries for known-prefix settings")
    arrival = ctx.instance.arrival
    if not isinstance(arrival, Distribution):
        raise UnsupportedQuery("this query needs a distribution arrival model")
    n, m = ctx.instance.n, ctx.instance.m
    bids = _bid_rows(ctx)
    positive = _positive_bidders(bids, n, m)
    cols = _distribution_columns(arrival, m)
    residuals = [ONE - sum((d for _, d in cols[j]), ZERO) for j in range(m)]

    start = (frozenset(), (-1,) * m)
    frontier: dict = {start: ONE}
    counts_of: dict = {start: (0,) * n}
    aborted = ZERO
    for j in range(moments):
        new_frontier: dict = {}
        new_counts: dict = {}
        for (used, owners), prob in frontier.items():
            counts = counts_of[(used, owners)]
            if residuals[j] > 0:
                aborted += prob * residuals[j]
            for item, delta in cols[j]:
                weight = prob * delta
                if item in used:
                    aborted += weight
                    continue
                used2 = used | {item}
                feas = feasible_for_counts(ctx.mechanism, counts, positive[item])
                if not feas:
                    key = (used2, owners)
                    acc = new_frontier.get(key)
                    new_frontier[key] = weight if acc is None else acc + weight
                    new_counts[key] = counts
                    continue
                share = weight / len(feas)
                for agent in feas:
                    succ = owners[:item] + (agent,) + owners[item + 1:]
                    key = (used2, succ)
                    acc = new_frontier.get(key)
                    if acc is None:
                        new_frontier[key] = share
                        new_counts[key] = (counts[:agent] + (counts[agent] + 1,)
                                           + counts[agent + 1:])
                    else:
                        new_frontier[key] = acc + share
        if len(new_frontier) > ctx.budget:
            raise BudgetExceeded(
                f"distribution support reached {len(new_frontier)} states "
                f"(budget {ctx.budget})")
        frontier, counts_of = new_frontier, new_counts
    return frontier, counts_of, aborted


def expected_utility_distribution(ctx: QueryContext) -> OutcomeReport:
    """Exact outcome when arrivals are drawn from the distribution.

    Only complete repeat-free sequences contribute; all other mass is void
    and adds zero utility.  Enumeration merges states on (arrived items,
    bundles), which collapses the order of past arrivals.
    """
    frontier, _counts, aborted = _run_distribution(ctx, ctx.instance.m)
    survived = sum(frontier.values(), ZERO)
    assert survived + aborted == 1, "probability mass leaked during enumeration"
    return _report(ctx.instance,
                   ((owners, prob) for (_used, owners), prob in frontier.items()),
                   "enumeration")


def distribution_states_after(ctx: QueryContext, moments: int):
    """Merged states after the first ``moments`` draws, plus aborted mass.

    Returns (list of (arrived frozenset, AllocationState), aborted mass).
    Surviving probabilities plus the aborted mass always sum to exactly 1.
    """
    if not 0 <= moments <= ctx.instance.m:
        raise InputError(f"moments must be within 0..{ctx.instance.m}")
    frontier, _counts, aborted = _run_distribution(ctx, moments)
    out = []
    for used, owners in sorted(frontier, key=lambda key: (sorted(key[0]), key[1])):
        bundles = [set() for _ in range(ctx.instance.n)]
        for item, owner in enumerate(owners):
            if owner >= 0:
                bundles[owner].add(item)
        out.append((used, AllocationState(tuple(frozenset(b) for b in bundles),
                                          frontier[(used, owners)])))
    return out, aborted


# --- the online (known prefix) setting ---------------------------------------


def next_item_probability(ctx: QueryContext) -> tuple[Fraction, ...]:
    """Each agent's probability of receiving whatever arrives next.

    Requires a known prefix.  With j items arrived, the moment j+1 column of
    the arrival model is combined with per-item feasibility in the known
    state; items that already arrived carry no mass (a repeat voids the run).
    Runs in O(m*n).
    """
    if ctx.known_prefix is None:
        raise UnsupportedQuery("next_item_probability needs a known prefix")
    arrived, state = _checked_prefix(ctx)
    n, m = ctx.instance.n, ctx.instance.m
    j = len(arrived)
    bids = _bid_rows(ctx)
    arrival = ctx.instance.arrival
    if j >= m:
        column: list[tuple[int, Fraction]] = []
    elif isinstance(arrival, FixedOrder):
        column = [(arrival.order[j], ONE)]
    else:
        column = [(k, arrival.matrix[k][j]) for k in range(m)
                  if arrival.matrix[k][j] > 0]
    used = set(arrived)
    result = [ZERO] * n
    for item, delta in column:
        if item in used:
            continue
        positive = tuple(i for i in range(n) if bids[i][item] > 0)
        feas = feasible_for_counts(ctx.mechanism, state.counts, positive)
        if not feas:
            continue
        share = delta / len(feas)
        for agent in feas:
            result[agent] += share
    return tuple(result)


def online_utilities(ctx: QueryContext) -> tuple[Fraction, ...]:
    """Per-agent utility at the next moment: value already held plus the
    probability of winning the next arrival.  O(m*n)."""
    _arrived, state = _checked_prefix(ctx)
    nxt = next_item_probability(ctx)
    return tuple(
        state.utility_of(i, ctx.instance.utilities) + nxt[i]
        for i in range(ctx.instance.n))


# --- dispatching queries ------------------------------------------------------


def outcome_report(ctx: QueryContext) -> OutcomeReport:
    """Full exact outcome by the cheapest applicable path.

    Precedence: Like closed form, then the two-agent dynamic program, then
    exhaustive enumeration.  All paths agree exactly.  Known-prefix contexts
    are served by the online queries instead.
    """
    if ctx.known_prefix is not None:
        raise UnsupportedQuery(
            "known-prefix contexts use online_utilities / next_item_probability")
    if isinstance(ctx.instance.arrival, FixedOrder):
        if ctx.mechanism is Mechanism.LIKE:
            return like_closed_form(ctx)
        if ctx.instance.n == 2:
            return two_agent_dp(ctx)
        return enumerate_fixed_order(ctx)
    return expected_utility_distribution(ctx)


def exact_utility(ctx: QueryContext, agent: int) -> Fraction:
    """The agent's exact expected utility in the context's setting."""
    if ctx.known_prefix is not None:
        return online_utilities(ctx)[agent]
    return outcome_report(ctx).expected_utility[agent]


def necessary_utility(ctx: QueryContext, agent: int, threshold: Fraction) -> bool:
    """Is the agent's expected utility at least ``threshold``?"""
    return exact_utility(ctx, agent) >= threshold


def _can_schedule(support, m: int, start: int, used) -> bool:
    """Can moments start..m-1 each draw a distinct not-yet-arrived item?

    Augmenting-path matching between moments and items over the positive
    support; this decides whether any non-void completion exists.
    """
    matched: dict[int, int] = {}

    def assign(moment: int, visited: set[int]) -> bool:
        for item in support[moment]:
            if item in used or item in visited:
                continue
            visited.add(item)
            if item not in matched or assign(matched[item], visited):
                matched[item] = moment
                return True
        return False

    for moment in range(start, m):
        if not assign(moment, set()):
            return False
    return True


def possible_utility(ctx: QueryContext, agent: int) -> bool:
    """Is the agent's utility positive with positive probability?

    Like admits a shortcut: the agent is feasible for every item it bids on,
    so possibility only needs one positively-bid, positively-valued item and
    one realizable arrival sequence.  Balanced Like is decided by depth-first
    search that stops at the first positive-probability witness branch.
    """
    if ctx.known_prefix is not None:
        return online_utilities(ctx)[agent] > 0
    instance = ctx.instance
    bids = _bid_rows(ctx)
    n, m = instance.n, instance.m
    util_row = instance.utilities[agent]
    targets = [k for k in range(m) if bids[agent][k] > 0 and util_row[k] > 0]
    if not targets:
        return False
    positive = _positive_bidders(bids, n, m)
    arrival = instance.arrival

    if isinstance(arrival, FixedOrder):
        if ctx.mechanism is Mechanism.LIKE:
            return True
        return _dfs_possible_fixed(ctx, agent, positive, util_row)

    cols = _distribution_columns(arrival, m)
    support = [[k for k, _ in cols[j]] for j in range(m)]
    if ctx.mechanism is Mechanism.LIKE:
        return _can_schedule(support, m, 0, frozenset())
    return _dfs_possible_distribution(ctx, agent, positive, util_row, support)


def _dfs_possible_fixed(ctx, agent, positive, util_row) -> bool:
    order = ctx.instance.arrival.order
    budget = ctx.budget
    visited = 0

    def rec(idx: int, counts) -> bool:
        nonlocal visited
        visited += 1
        if visited > budget:
            raise BudgetExceeded(f"possibility search visited {visited} nodes")
        if idx == len(order):
            return False
        item = order[idx]
        feas = feasible_for_counts(ctx.mechanism, counts, positive[item])
        if not feas:
            return rec(idx + 1, counts)
        for i in sorted(feas, key=lambda a: a != agent):
            if i == agent and util_row[item] > 0:
                return True
            succ = counts[:i] + (counts[i] + 1,) + counts[i + 1:]
            if rec(idx + 1, succ):
                return True
        return False

    return rec(0, (0,) * ctx.instance.n)


def _dfs_possible_distribution(ctx, agent, positive, util_row, support) -> bool:
    m = ctx.instance.m
    cols = _distribution_columns(ctx.instance.arrival, m)
    budget = ctx.budget
    visited = 0

    def rec(j: int, used: frozenset, counts) -> bool:
        nonlocal visited
        visited += 1
        if visited > budget:
            raise BudgetExceeded(f"possibility search visited {visited} nodes")
        if j == m:
            return False
        if not _can_schedule(support, m, j, used):
            return False
        for item, _delta in cols[j]:
            if item in used:
                continue
            used2 = used | {item}
            feas = feasible_for_counts(ctx.mechanism, counts, positive[item])
            if not feas:
                if rec(j + 1, used2, counts):
                    return True
                continue
            for i in sorted(feas, key=lambda a: a != agent):
                if i == agent and util_row[item] > 0:
                    if _can_schedule(support, m, j + 1, used2):
                        return True
                    continue
                succ = counts[:i] + (counts[i] + 1,) + counts[i + 1:]
                if rec(j + 1, used2, succ):
                    return True
        return False

    return rec(0, frozenset(), (0,) * ctx.instance.n)


def possible_item(ctx: QueryContext, agent: int, item: int) -> bool:
    """Does the agent receive ``item`` with positive probability?

    Reduces to a possible-utility query on a copy of the instance where the
    agent values only that item, while everyone (including the agent) keeps
    the original bids, so the mechanism's behaviour is untouched.
    """
    instance = ctx.instance
    bids = BidProfile(_bid_rows(ctx))
    if bids.bids[agent][item] <= 0:
        return False
    unit_row = tuple(ONE if k == item else ZERO for k in range(instance.m))
    rows = list(instance.utilities)
    rows[agent] = unit_row
    surrogate = Instance(instance.n, instance.m, tuple(rows), instance.arrival)
    return possible_utility(
        QueryContext(surrogate, ctx.mechanism, bids, ctx.known_prefix, ctx.budget),
        agent)


def epsilon_bound(ctx: QueryContext, agent: int) -> Fraction:
    """A positive threshold under which "possible" and "necessary at least
    epsilon" coincide for next-item probabilities.

    Every positive branch probability is a product of at most m arrival
    entries and at most m uniform shares of 1/f with f <= n, so the product
    of each moment's smallest positive arrival entry times (1/n)^m bounds
    every positive branch from below.  A conservative bound, never zero.
    """
    instance = ctx.instance
    bids = _bid_rows(ctx)
    if all(bids[agent][k] <= 0 for k in range(instance.m)):
        raise NoPositiveBranch(f"agent {agent} bids positively on nothing")
    product = ONE
    arrival = instance.arrival
    if isinstance(arrival, Distribution):
        any_mass = False
        for j in range(instance.m):
            entries = [arrival.matrix[k][j] for k in range(instance.m)
                       if arrival.matrix[k][j] > 0]
            if entries:
                any_mass = True
                product *= min(entries)
        if not any_mass:
            raise NoPositiveBranch("no item ever arrives under this distribution")
    return product * Fraction(1, instance.n) ** instance.m


def monte_carlo_estimate(ctx: QueryContext, samples: int, seed: int) -> list[float]:
    """Plain Monte Carlo estimate of each agent's expected utility.

    Samples the arrival sequence (a repeat or no-arrival draw voids the run)
    and then the mechanism's uniform choices.  With a known prefix it
    estimates the same moment-(j+1) utility that ``exact_utility`` computes
    online: held value plus next-arrival win frequency.  Reproducible for a
    fixed seed.
    """
    if samples < 1:
        raise InputError("samples must be positive")
    instance = ctx.instance
    n, m = instance.n, instance.m
    bids = _bid_rows(ctx)
    positive = _positive_bidders(bids, n, m)
    util = [[float(u) for u in row] for row in instance.utilities]
    rng = random.Random(seed)
    mechanism = ctx.mechanism

    if ctx.known_prefix is not None:
        arrived, state = _checked_prefix(ctx)
        held = [float(state.utility_of(i, instance.utilities)) for i in range(n)]
        j = len(arrived)
        used = set(arrived)
        if j >= m:
            column: list[tuple[int, float]] = []
        elif isinstance(instance.arrival, FixedOrder):
            column = [(instance.arrival.order[j], 1.0)]
        else:
            column = [(k, float(instance.arrival.matrix[k][j])) for k in range(m)
                      if instance.arrival.matrix[k][j] > 0]
        wins = [0] * n
        for _ in range(samples):
            draw = rng.random()
            acc = 0.0
            landed = -1
            for item, p in column:
                acc += p
                if draw < acc:
                    landed = item
                    break
            if landed < 0 or landed in used:
                continue
            feas = feasible_for_counts(mechanism, state.counts, positive[landed])
            if not feas:
                continue
            wins[feas[rng.randrange(len(feas))]] += 1
        return [held[i] + wins[i] / samples for i in range(n)]

    if isinstance(instance.arrival, FixedOrder):
        fixed_seq = instance.arrival.order
        columns = None
    else:
        fixed_seq = None
        columns = [[(k, float(instance.arrival.matrix[k][j])) for k in range(m)
                    if instance.arrival.matrix[k][j] > 0] for j in range(m)]

    totals = [0.0] * n
    for _ in range(samples):
        if fixed_seq is not None:
            sequence = fixed_seq
        else:
            sequence = []
            used = set()
            void = False
            for j in range(m):
                draw = rng.random()
                acc = 0.0
                landed = -1
                for item, p in columns[j]:
                    acc += p
                    if draw < acc:
                        landed = item
                        break
                if landed < 0 or landed in used:
                    void = True
                    break
                used.add(landed)
                sequence.append(landed)
            if void:
                continue
        counts = [0] * n
        gains = [0.0] * n
        for item in sequence:
            feas = feasible_for_counts(mechanism, counts, positive[item])
            if not feas:
                continue
            winner = feas[rng.randrange(len(feas))] if len(feas) > 1 else feas[0]
            counts[winner] += 1
            gains[winner] += util[winner][item]
        for i in range(n):
            totals[i] += gains[i]
    return [t / samples for t in totals]
