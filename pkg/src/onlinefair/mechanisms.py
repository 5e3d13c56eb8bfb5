"""Single-item step semantics for the Like and Balanced Like mechanisms.

Like gives an arriving item to one of its positive bidders, chosen uniformly
at random.  Balanced Like restricts the draw to the positive bidders who
currently hold the fewest items.  Both are positivity-threshold rules: only
whether a bid is positive matters, never its magnitude.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction

from .core import AllocationState, BidProfile, InputError


class ItemAlreadyAllocated(InputError):
    pass


class Mechanism(Enum):
    LIKE = "like"
    BALANCED_LIKE = "balanced-like"

    @classmethod
    def from_string(cls, name: str) -> "Mechanism":
        normalized = name.strip().lower().replace("_", "-")
        for mech in cls:
            if mech.value == normalized:
                return mech
        raise InputError(f"unknown mechanism {name!r}")


def feasible_for_counts(mechanism: Mechanism, counts, positive_bidders):
    """Feasible agents given only bundle sizes and the item's positive bidders.

    This is the hot path shared by the engine; ``feasible_agents`` wraps it
    with state checks.  Returns a tuple sorted by agent index.
    """
    if not positive_bidders:
        return ()
    if mechanism is Mechanism.LIKE:
        return tuple(positive_bidders)
    fewest = min(counts[i] for i in positive_bidders)
    return tuple(i for i in positive_bidders if counts[i] == fewest)


def feasible_agents(mechanism: Mechanism, state: AllocationState, item: int,
                    bids: BidProfile) -> frozenset[int]:
    """The set of agents eligible to receive ``item`` in ``state``.

    Like: every positive bidder.  Balanced Like: the positive bidders whose
    current bundle is smallest among positive bidders.
    """
    for bundle in state.bundles:
        if item in bundle:
            raise ItemAlreadyAllocated(f"item {item} is already allocated")
    positive = tuple(i for i in range(len(state.bundles))
                     if bids.bids[i][item] > 0)
    return frozenset(feasible_for_counts(mechanism, state.counts, positive))


def allocation_step(mechanism: Mechanism, state: AllocationState, item: int,
                    bids: BidProfile) -> list[tuple[AllocationState, Fraction]]:
    """All successor states for one arriving item, with transition probabilities.

    Each feasible agent receives the item with probability 1/f where f is the
    feasible count.  An item nobody bids positively for is skipped: the state
    is returned unchanged with transition probability 1.
    """
    feasible = sorted(feasible_agents(mechanism, state, item, bids))
    if not feasible:
        return [(state, Fraction(1))]
    share = Fraction(1, len(feasible))
    return [(state.give(agent, item, share), share) for agent in feasible]
