"""Strategic bidding analysis: what does misreporting buy an agent?

All evaluation uses the agent's true utilities from the instance; bids only
steer the mechanism.  Since feasibility depends on bid positivity alone, the
search space of meaningfully distinct deviations is the 2^m set of 0/1 rows,
which keeps exhaustive best-response search exact at desk scale.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import BidProfile, BudgetExceeded, InputError, Instance, parse_rational
from .engine import QueryContext, exact_utility
from .mechanisms import Mechanism

ZERO = Fraction(0)

DEFAULT_SEARCH_MAX_ITEMS = 12


@dataclass(frozen=True)
class ManipulationQuery:
    """One agent deviates; everyone else bids sincerely.

    ``sincere`` defaults to the agent's true utility row.  ``threshold`` is
    the gain bar for necessary-manipulation queries.
    """

    instance: Instance
    mechanism: Mechanism
    agent: int
    deviation: tuple[Fraction, ...]
    sincere: Optional[tuple[Fraction, ...]] = None
    threshold: Fraction = ZERO


def _checked_row(row: Sequence, m: int) -> tuple[Fraction, ...]:
    values = tuple(parse_rational(x) for x in row)
    if len(values) != m:
        raise InputError(f"bid row has {len(values)} entries for {m} items")
    for v in values:
        if v < 0:
            raise InputError(f"negative bid {v}")
    return values


def _utility_under_row(instance: Instance, mechanism: Mechanism, agent: int,
                       row: tuple[Fraction, ...]) -> Fraction:
    bids = BidProfile.sincere(instance).with_row(agent, row)
    return exact_utility(QueryContext(instance, mechanism, bids), agent)


def utilities_under_deviation(q: ManipulationQuery) -> tuple[Fraction, Fraction]:
    """(true expected utility bidding sincerely, same under the deviation)."""
    m = q.instance.m
    sincere_row = (q.instance.utilities[q.agent] if q.sincere is None
                   else _checked_row(q.sincere, m))
    deviation_row = _checked_row(q.deviation, m)
    sincere_value = _utility_under_row(q.instance, q.mechanism, q.agent, sincere_row)
    deviated_value = _utility_under_row(q.instance, q.mechanism, q.agent,
                                        deviation_row)
    return sincere_value, deviated_value


def exact_manipulation_gain(q: ManipulationQuery) -> Fraction:
    """The agent's exact change in true expected utility from deviating."""
    sincere_value, deviated_value = utilities_under_deviation(q)
    return deviated_value - sincere_value


def necessary_manipulation(q: ManipulationQuery, strict: bool = False) -> bool:
    """Is the deviation's gain at least the query threshold?

    ``strict`` asks for a strictly positive margin instead, which with
    threshold 0 is the "can the agent possibly profit" question.
    """
    gain = exact_manipulation_gain(q)
    return gain > q.threshold if strict else gain >= q.threshold


def best_response_search(instance: Instance, mechanism: Mechanism, agent: int,
                         max_items: int = DEFAULT_SEARCH_MAX_ITEMS,
                         ) -> tuple[tuple[Fraction, ...], Fraction]:
    """Exhaustively search 0/1 bid rows for the agent's best response.

    Returns (row, gain over sincere).  Ties break toward the sincere row,
    then toward the lexicographically smallest 0/1 row, so results are
    deterministic.  Refuses instances with more than ``max_items`` items.
    """
    m = instance.m
    if m > max_items:
        raise BudgetExceeded(
            f"best-response search over 2^{m} rows exceeds the {max_items}-item cap")
    sincere_row = instance.utilities[agent]
    best_row = sincere_row
    best_value = _utility_under_row(instance, mechanism, agent, sincere_row)
    sincere_value = best_value
    for bits in itertools.product((ZERO, Fraction(1)), repeat=m):
        value = _utility_under_row(instance, mechanism, agent, bits)
        if value > best_value:
            best_row, best_value = bits, value
    return best_row, best_value - sincere_value


def is_strategyproof_on_instance(instance: Instance, mechanism: Mechanism,
                                 max_items: int = DEFAULT_SEARCH_MAX_ITEMS) -> bool:
    """True when no agent's best response beats sincere bidding."""
    for agent in range(instance.n):
        _, gain = best_response_search(instance, mechanism, agent, max_items)
        if gain > 0:
            return False
    return True
