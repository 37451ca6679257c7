"""Rectangle measures, flow scale factors, and extended-real pushforward.

A measurable rectangle on the infinite product space is described by the
sequence of its per-cell volumes; its measure is the ordinary (infinite)
product of those volumes.  Rectangles whose volume product fails to exist or
is infinite are rejected: they carry no measure.

A flow with per-cell log-Jacobian rates d_k multiplies the measure of every
finite-measure set by ``exp(t * sum(d_k))``.  ``liouville_factor`` evaluates
that scale as an extended real by classifying the rate series: a convergent
sum gives a finite factor, divergence to -inf collapses every set to measure
zero, divergence to +inf blows every set up to infinite measure, and an
oscillating sum leaves the factor undefined.

Two measure flavors are supported.  The ordinary flavor uses the rate-series
sum directly.  The standard flavor additionally requires absolute
convergence for a finite factor; when the rate series is not absolutely
convergent, the sum over the strictly negative rates decides: a finite
negative part means every set blows up, a divergent one means every set
collapses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .flows import FlowModel, evolve, rate_sequence, state_dimension
from .sequences import (
    DEFAULT_DEPTH,
    AlphaBlocking,
    ConvergesTo,
    DivergesMinus,
    DivergesPlus,
    ExtendedMeasure,
    NegativeFactor,
    SequenceSpec,
    classify_sum,
    has_negative_terms,
    negative_part_sum,
    ordinary_product,
)

__all__ = [
    "ExtendedMeasure",
    "InvalidRectangle",
    "RectangleSpec",
    "rectangle_measure",
    "liouville_factor",
    "pushforward",
    "truncated_jacobian_check",
]

FLAVORS = ("ordinary", "standard")


class InvalidRectangle(ValueError):
    """The cell volumes do not define a measurable rectangle: some volume is
    negative, or the volume product does not exist or is infinite."""


@dataclass(frozen=True)
class RectangleSpec:
    """An infinite rectangle: per-cell volumes under a cell blocking.

    ``cell_volumes.term(k)`` is the (finite-dimensional) volume of cell k,
    whose coordinate width is ``blocking.size(k)``.  With ``log_volumes``
    the sequence spec holds the logarithms of the volumes instead, which expresses
    strictly positive volume sequences such as exp(2^-k) in closed form.
    """

    blocking: AlphaBlocking
    cell_volumes: SequenceSpec
    log_volumes: bool = False


def rectangle_measure(rect: RectangleSpec, depth: int = DEFAULT_DEPTH) -> ExtendedMeasure:
    """Measure of a rectangle: the ordinary product of its cell volumes.

    Returns zero or a finite positive value.

    Raises:
        InvalidRectangle: negative volumes, or the product oscillates or is
            infinite (such rectangles are not measurable).
    """
    if not rect.log_volumes and has_negative_terms(rect.cell_volumes):
        raise InvalidRectangle("cell volumes must be nonnegative")
    try:
        product = ordinary_product(
            rect.cell_volumes, log_domain=rect.log_volumes, depth=depth)
    except NegativeFactor as exc:
        raise InvalidRectangle(str(exc)) from exc
    if product.is_undefined:
        raise InvalidRectangle("volume product oscillates: not a measurable rectangle")
    if product.is_infinite:
        raise InvalidRectangle("volume product is infinite: not a measurable rectangle")
    return product


def pushforward(measure: ExtendedMeasure, factor: ExtendedMeasure) -> ExtendedMeasure:
    """Measure of the image set: the set measure times the scale factor.

    A zero measure stays zero under any factor (including an infinite or
    undefined one); otherwise an undefined operand makes the result
    undefined, an infinite one makes it infinite, and two finite operands
    multiply.
    """
    if measure.is_zero or factor.is_zero:
        return ExtendedMeasure.zero()
    if measure.is_undefined or factor.is_undefined:
        return ExtendedMeasure.undefined()
    if measure.is_infinite or factor.is_infinite:
        return ExtendedMeasure.infinite()
    product = measure.value * factor.value  # type: ignore[operator]
    if product == 0.0:  # float underflow of two tiny finite values
        return ExtendedMeasure.zero()
    if math.isinf(product):
        return ExtendedMeasure.infinite()
    return ExtendedMeasure.finite(product)


def _check_flavor(flavor: str) -> None:
    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be one of {FLAVORS}, got {flavor!r}")


def liouville_factor(
    model: FlowModel,
    t: float,
    flavor: str = "ordinary",
    depth: int = DEFAULT_DEPTH,
) -> ExtendedMeasure:
    """Scale factor the flow applies to every finite-measure set after time t.

    Always 1 at t = 0.  For t > 0 the factor is decided by the rate-series
    verdict; under the standard flavor a finite factor additionally requires
    absolute convergence, and otherwise the negative-part rule applies (see
    module docstring).
    """
    _check_flavor(flavor)
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if t == 0.0:
        return ExtendedMeasure.finite(1.0)
    rates = rate_sequence(model)
    verdict = classify_sum(rates, depth)
    if flavor == "standard" and not (
        isinstance(verdict, ConvergesTo) and verdict.absolutely
    ):
        negative = negative_part_sum(rates, depth)
        if isinstance(negative, DivergesMinus):
            return ExtendedMeasure.zero()
        return ExtendedMeasure.infinite()
    if isinstance(verdict, ConvergesTo):
        return ExtendedMeasure.from_exponent(t * verdict.value)
    if isinstance(verdict, DivergesPlus):
        return ExtendedMeasure.infinite()
    if isinstance(verdict, DivergesMinus):
        return ExtendedMeasure.zero()
    return ExtendedMeasure.undefined()


def truncated_jacobian_check(
    model: FlowModel, t: float, cells: int
) -> tuple[float, float]:
    """Finite-truncation consistency check of the volume scale factor.

    Returns ``(predicted, computed)``: the predicted log-determinant
    ``t * sum(d_k, k < cells)`` from the rate sequence, and the
    log-determinant of the actual Jacobian of the time-t map on the
    truncated state space, assembled column by column from evolved basis
    vectors.  The two agree up to float rounding; their difference is the
    check's result.
    """
    if cells < 1:
        raise ValueError("cells must be >= 1")
    rates = rate_sequence(model)
    predicted = t * math.fsum(rates.term(k) for k in range(cells))
    dim = state_dimension(model, cells)
    jacobian = np.empty((dim, dim))
    for i in range(dim):
        basis = np.zeros(dim)
        basis[i] = 1.0
        jacobian[:, i] = evolve(model, basis, t)
    _, logdet = np.linalg.slogdet(jacobian)
    return predicted, float(logdet)
