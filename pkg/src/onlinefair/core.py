"""Domain types and exact arithmetic for online fair division problems.

Every number that enters an outcome computation (utility, bid, arrival
probability, threshold) is a ``fractions.Fraction``.  Floats are rejected at
all parsing boundaries, so results are bit-exact end to end.  All types here
are immutable after validation and safe to share across workers.

Agent and item indices are 0-based throughout the library; the JSON formats
(and the CLI) use 1-based indices.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

Rational = Fraction

#: Default cap on the merged enumeration frontier (number of states).
DEFAULT_ENUMERATION_BUDGET = 10**6


class InputError(ValueError):
    """Malformed instance data or query parameters.  CLI exit code 2."""


class DimensionMismatch(InputError):
    pass


class NegativeValue(InputError):
    pass


class InvalidDistribution(InputError):
    pass


class InvalidOrder(InputError):
    pass


class BudgetExceeded(RuntimeError):
    """An enumeration outgrew its configured state cap.  CLI exit code 3.

    This signals that the query is beyond desk scale, not that the input is
    invalid; results are never silently truncated.
    """


_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def parse_rational(value: int | str | Fraction) -> Fraction:
    """Parse an exact rational from an int, a Fraction, or a ``p/q`` string.

    Bare integer strings are accepted ("3" == "3/1").  Floats and float-like
    strings are rejected: a float literal has already lost the exactness this
    library is built around.
    """
    if isinstance(value, bool):
        raise InputError(f"expected a rational, got boolean {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        match = _RATIONAL_RE.match(value.strip())
        if match is None:
            raise InputError(f"not an exact rational literal: {value!r}")
        numerator = int(match.group(1))
        denominator = int(match.group(2)) if match.group(2) else 1
        if denominator == 0:
            raise InputError(f"zero denominator: {value!r}")
        return Fraction(numerator, denominator)
    raise InputError(f"cannot interpret {value!r} as a rational")


def format_rational(value: Fraction) -> str:
    """Render a rational as ``p/q``, or bare ``p`` when the denominator is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _rational_matrix(rows, *, what: str) -> tuple[tuple[Fraction, ...], ...]:
    out = []
    for row in rows:
        out.append(tuple(parse_rational(entry) for entry in row))
    if not out:
        raise DimensionMismatch(f"{what} matrix is empty")
    width = len(out[0])
    for row in out:
        if len(row) != width:
            raise DimensionMismatch(f"{what} matrix rows have unequal lengths")
    return tuple(out)


@dataclass(frozen=True)
class FixedOrder:
    """Deterministic arrival: ``order[j]`` is the item arriving at moment j."""

    order: tuple[int, ...]


@dataclass(frozen=True)
class Distribution:
    """Stochastic arrival: ``matrix[k][j]`` is the probability that item k
    arrives at moment j.

    Column sums may be strictly below 1; the residual mass is the probability
    that no item arrives at that moment, which voids the whole run (the run
    contributes an empty allocation).  A column summing to exactly 1 recovers
    the usual "one item per moment" reading.
    """

    matrix: tuple[tuple[Fraction, ...], ...]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.matrix)

    def column_mass(self, j: int) -> Fraction:
        return sum((row[j] for row in self.matrix), Fraction(0))


ArrivalModel = Union[FixedOrder, Distribution]


@dataclass(frozen=True)
class Instance:
    """An allocation problem: agents, items, utilities, and the arrival model.

    ``utilities[i][k]`` is agent i's cardinal utility for item k (agent-major
    layout).  Agent i *likes* item k when the utility is positive.
    """

    n: int
    m: int
    utilities: tuple[tuple[Fraction, ...], ...]
    arrival: ArrivalModel

    def likes(self, agent: int, item: int) -> bool:
        return self.utilities[agent][item] > 0


@dataclass(frozen=True)
class BidProfile:
    """Declared bids, one row per agent.  Feasibility looks only at bid
    positivity; utilities are still evaluated against the instance's true
    utility matrix, which is what makes misreporting analysable."""

    bids: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def sincere(cls, instance: Instance) -> "BidProfile":
        return cls(instance.utilities)

    def with_row(self, agent: int, row: Sequence) -> "BidProfile":
        new_row = tuple(parse_rational(x) for x in row)
        rows = list(self.bids)
        rows[agent] = new_row
        return BidProfile(tuple(rows))

    def positive(self, agent: int, item: int) -> bool:
        return self.bids[agent][item] > 0


@dataclass(frozen=True)
class AllocationState:
    """A partial allocation: one bundle per agent, plus the probability with
    which the mechanism reaches this state."""

    bundles: tuple[frozenset[int], ...]
    probability: Fraction
    counts: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(len(b) for b in self.bundles))

    @classmethod
    def initial(cls, n: int) -> "AllocationState":
        return cls(tuple(frozenset() for _ in range(n)), Fraction(1))

    def give(self, agent: int, item: int, transition: Fraction) -> "AllocationState":
        bundles = list(self.bundles)
        bundles[agent] = bundles[agent] | {item}
        return AllocationState(tuple(bundles), self.probability * transition)

    def utility_of(self, agent: int, utilities) -> Fraction:
        return sum((utilities[agent][k] for k in self.bundles[agent]), Fraction(0))

    def allocated_items(self) -> frozenset[int]:
        out: set[int] = set()
        for bundle in self.bundles:
            out |= bundle
        return frozenset(out)


def check_allocation_state(state: AllocationState, n: int, m: int) -> None:
    """Raise InputError unless the state's structural invariants hold."""
    if len(state.bundles) != n:
        raise DimensionMismatch(
            f"state has {len(state.bundles)} bundles for {n} agents")
    seen: set[int] = set()
    for bundle in state.bundles:
        for item in bundle:
            if not 0 <= item < m:
                raise InputError(f"item index {item} out of range")
            if item in seen:
                raise InputError(f"item {item} appears in two bundles")
            seen.add(item)
    if not 0 < state.probability <= 1:
        raise InputError(f"state probability {state.probability} outside (0, 1]")


@dataclass(frozen=True)
class OutcomeReport:
    """Exact expected outcome: per-agent expected utility and the full
    agent-by-item allocation probability matrix.

    ``method`` names the computation path taken (closed-form | dp |
    enumeration | monte-carlo | online).
    """

    expected_utility: tuple[Fraction, ...]
    allocation_probability: tuple[tuple[Fraction, ...], ...]
    method: str

    def to_json_dict(self) -> dict:
        return {
            "method": self.method,
            "expected_utility": [format_rational(u) for u in self.expected_utility],
            "allocation_probability": [
                [format_rational(p) for p in row]
                for row in self.allocation_probability
            ],
        }


def validate_instance(instance: Instance) -> Instance:
    """Check every instance invariant and return a normalized copy.

    Utility entries may arrive as ints, strings, or Fractions; the returned
    instance holds normalized Fractions only.  Raises DimensionMismatch,
    NegativeValue, InvalidDistribution, or InvalidOrder.
    """
    if instance.n < 1:
        raise DimensionMismatch(f"need at least one agent, got {instance.n}")
    if instance.m < 1:
        raise DimensionMismatch(f"need at least one item, got {instance.m}")

    utilities = _rational_matrix(instance.utilities, what="utility")
    if len(utilities) != instance.n or len(utilities[0]) != instance.m:
        raise DimensionMismatch(
            f"utility matrix is {len(utilities)}x{len(utilities[0])}, "
            f"expected {instance.n}x{instance.m}")
    for row in utilities:
        for entry in row:
            if entry < 0:
                raise NegativeValue(f"negative utility {entry}")

    arrival = instance.arrival
    if isinstance(arrival, FixedOrder):
        order = tuple(arrival.order)
        if sorted(order) != list(range(instance.m)):
            raise InvalidOrder(
                f"order {order} is not a permutation of 0..{instance.m - 1}")
        arrival = FixedOrder(order)
    elif isinstance(arrival, Distribution):
        matrix = _rational_matrix(arrival.matrix, what="arrival")
        if len(matrix) != instance.m or len(matrix[0]) != instance.m:
            raise DimensionMismatch(
                f"arrival matrix is {len(matrix)}x{len(matrix[0])}, "
                f"expected {instance.m}x{instance.m}")
        for row in matrix:
            for entry in row:
                if entry < 0:
                    raise NegativeValue(f"negative arrival probability {entry}")
                if entry > 1:
                    raise InvalidDistribution(f"arrival probability {entry} > 1")
        for j in range(instance.m):
            mass = sum((row[j] for row in matrix), Fraction(0))
            if mass > 1:
                raise InvalidDistribution(
                    f"column {j + 1} of the arrival matrix sums to {mass} > 1")
        arrival = Distribution(matrix)
    else:
        raise InputError(f"unknown arrival model {arrival!r}")

    return Instance(instance.n, instance.m, utilities, arrival)


def make_instance(n: int, m: int, utilities, arrival: ArrivalModel) -> Instance:
    """Build and validate an instance from loosely-typed utility rows."""
    rows = tuple(tuple(row) for row in utilities)
    return validate_instance(Instance(n, m, rows, arrival))


# --- JSON instance format ---------------------------------------------------
#
# {"agents": n, "items": m,
#  "utilities": [["1", "2/3", 0], ...],            # n rows of m rationals
#  "arrival": {"type": "order", "order": [1, 2]}   # 1-based item indices
#           | {"type": "distribution", "matrix": [["1/2", ...], ...]}}
#
# matrix[k][j] is the probability that item k+1 arrives at moment j+1.


def instance_to_json_dict(instance: Instance) -> dict:
    if isinstance(instance.arrival, FixedOrder):
        arrival = {"type": "order",
                   "order": [k + 1 for k in instance.arrival.order]}
    else:
        arrival = {"type": "distribution",
                   "matrix": [[format_rational(p) for p in row]
                              for row in instance.arrival.matrix]}
    return {
        "agents": instance.n,
        "items": instance.m,
        "utilities": [[format_rational(u) for u in row]
                      for row in instance.utilities],
        "arrival": arrival,
    }


def instance_from_json_dict(data: dict) -> Instance:
    """Parse and validate the JSON instance format."""
    try:
        n = data["agents"]
        m = data["items"]
        utilities = data["utilities"]
        arrival_data = data["arrival"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"missing instance field: {exc}") from exc
    if not isinstance(n, int) or not isinstance(m, int):
        raise InputError("agents and items must be integers")

    kind = arrival_data.get("type")
    if kind == "order":
        order = arrival_data.get("order")
        if not isinstance(order, list):
            raise InvalidOrder("arrival order must be a list")
        for k in order:
            if not isinstance(k, int) or isinstance(k, bool) or not 1 <= k <= m:
                raise InvalidOrder(f"order entry {k!r} out of range 1..{m}")
        arrival: ArrivalModel = FixedOrder(tuple(k - 1 for k in order))
    elif kind == "distribution":
        matrix = arrival_data.get("matrix")
        if not isinstance(matrix, list):
            raise InvalidDistribution("arrival matrix must be a list of rows")
        arrival = Distribution(tuple(
            tuple(parse_rational(p) for p in row) for row in matrix))
    else:
        raise InputError(f"unknown arrival type {kind!r}")

    rows = tuple(tuple(parse_rational(u) for u in row) for row in utilities)
    return validate_instance(Instance(n, m, rows, arrival))
