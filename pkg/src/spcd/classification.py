"""Behavior classes of a flow with respect to a measure flavor.

The class is a function of the rate-series verdict alone:

==================  =========================================================
Stable              rate sum is exactly 0: the flow preserves every measure
Expansible          finite positive sum: measures strictly increase in time
Pressing            finite negative sum: measures strictly decrease in time
TotallyExpansible   sum is +inf: every finite-measure set becomes infinite
TotallyPressing     sum is -inf: every finite-measure set becomes null
Indeterminate       the rate series oscillates; no classification
==================  =========================================================

Under the standard flavor the three finite classes additionally require the
rate series to converge absolutely.  When it does not, the sum over the
strictly negative rates decides between the two total classes: a finite
negative part gives TotallyExpansible, a divergent one TotallyPressing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .flows import FlowModel, rate_sequence
from .measures import _check_flavor
from .sequences import (
    DEFAULT_DEPTH,
    ConvergesTo,
    DivergesMinus,
    DivergesPlus,
    SeriesVerdict,
    classify_sum,
    negative_part_sum,
)


@dataclass(frozen=True)
class Stable:
    """The flow preserves every finite measure."""


@dataclass(frozen=True)
class Expansible:
    """Finite-measure sets strictly grow in measure over time."""


@dataclass(frozen=True)
class Pressing:
    """Finite-measure sets strictly shrink in measure over time."""


@dataclass(frozen=True)
class TotallyExpansible:
    """Every finite-positive-measure set has infinite measure for all t > 0."""


@dataclass(frozen=True)
class TotallyPressing:
    """Every finite-positive-measure set has measure zero for all t > 0."""


@dataclass(frozen=True)
class Indeterminate:
    """No class applies; carries the offending rate-series verdict."""

    verdict: SeriesVerdict


FlowClass = Union[
    Stable, Expansible, Pressing, TotallyExpansible, TotallyPressing, Indeterminate
]


def classify_flow(
    model: FlowModel, flavor: str = "ordinary", depth: int = DEFAULT_DEPTH
) -> FlowClass:
    """Decide the behavior class of ``model`` under a measure flavor.

    Exactly one class is returned; it depends only on the rate-series tag,
    the sign of its value, its absolute-convergence flag, and (standard
    flavor only) the negative-part tag.
    """
    _check_flavor(flavor)
    rates = rate_sequence(model)
    verdict = classify_sum(rates, depth)
    if flavor == "standard" and not (
        isinstance(verdict, ConvergesTo) and verdict.absolutely
    ):
        negative = negative_part_sum(rates, depth)
        if isinstance(negative, DivergesMinus):
            return TotallyPressing()
        return TotallyExpansible()
    if isinstance(verdict, ConvergesTo):
        if verdict.value == 0.0:
            return Stable()
        return Expansible() if verdict.value > 0.0 else Pressing()
    if isinstance(verdict, DivergesPlus):
        return TotallyExpansible()
    if isinstance(verdict, DivergesMinus):
        return TotallyPressing()
    return Indeterminate(verdict)
