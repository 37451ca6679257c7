"""Closed-form linear flows on truncated coordinate spaces.

Four model families, each a linear autonomous system whose solution is known
in closed form cell by cell:

* ``FoersterLasota(gamma)``: coordinate k scales by ``exp(t*(gamma - k))``.
* ``BlackScholes(r, sigma)``: coordinate k scales by
  ``exp(t*(r - r*k - sigma^2/2 * k*(k-1)))``.
* ``Malthusian(rates)``: coordinate k scales by ``exp(t * rates[k])`` for an
  arbitrary closed-form rate sequence.
* ``Maclaurin(coefficients)``: the diagonal polynomial family generalizing
  the first two; coordinate k scales by ``exp(t * P(k))`` where P is the
  falling-factorial polynomial of the coefficient list.
* ``Fourier(coefficients, length)``: acts on spectral coefficient pairs.
  Cell 0 is the single mean slot (stored as half the mean value, matching
  the usual series normalization; consumers see the raw slot).  Cell k >= 1
  is the pair (a_k, b_k), scaled by ``exp(growth_k*t)`` and rotated by
  ``rotation_k*t``.

States are plain 1-D float arrays.  Truncation is exact: every family acts
cell-wise, so evolving a truncated state agrees with the corresponding
coordinates of the untruncated flow.  For Fourier models the layout is
``[mean_slot, a_1, b_1, a_2, b_2, ...]`` and must have odd size.

``rate_sequence`` extracts the per-cell log-Jacobian rates as a closed-form
sequence spec: cell k of the flow multiplies volumes by ``exp(d_k * t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .sequences import (
    AffineLinear,
    Constant,
    Polynomial,
    QuadraticPoly,
    SequenceSpec,
    Zero,
    _require_finite,
)


class LayoutMismatch(ValueError):
    """State vector shape is incompatible with the model's cell layout."""


@dataclass(frozen=True)
class FoersterLasota:
    """Growth parameter ``gamma``; coordinate k evolves as exp(t*(gamma - k))."""

    gamma: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "gamma", _require_finite(self.gamma, "gamma"))


@dataclass(frozen=True)
class BlackScholes:
    """Drift ``r`` >= 0 and volatility ``sigma`` >= 0."""

    r: float
    sigma: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", _require_finite(self.r, "r"))
        object.__setattr__(self, "sigma", _require_finite(self.sigma, "sigma"))
        if self.r < 0.0 or self.sigma < 0.0:
            raise ValueError("r and sigma must be nonnegative")


@dataclass(frozen=True)
class Malthusian:
    """Independent per-coordinate exponential growth rates."""

    rates: SequenceSpec

    def __post_init__(self) -> None:
        if not isinstance(self.rates, SequenceSpec):
            raise TypeError("rates must be a SequenceSpec")


@dataclass(frozen=True)
class Maclaurin:
    """Diagonal polynomial flow from a finite coefficient list.

    Coefficient n weights the falling factorial k*(k-1)*...*(k-n+1), which
    vanishes for n > k, so low coordinates feel only the low-order terms.
    """

    coefficients: tuple[float, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(_require_finite(c, "coefficients[]") for c in self.coefficients)
        if not coeffs:
            raise ValueError("coefficient list must be nonempty")
        object.__setattr__(self, "coefficients", coeffs)


@dataclass(frozen=True)
class Fourier:
    """Spectral flow on coefficient pairs over an interval of given length."""

    coefficients: tuple[float, ...]
    length: float

    def __post_init__(self) -> None:
        coeffs = tuple(_require_finite(c, "coefficients[]") for c in self.coefficients)
        if not coeffs:
            raise ValueError("coefficient list must be nonempty")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "length", _require_finite(self.length, "length"))
        if self.length <= 0.0:
            raise ValueError("length must be positive")


FlowModel = Union[FoersterLasota, BlackScholes, Malthusian, Maclaurin, Fourier]


def maclaurin_rate(coefficients: Sequence[float], k: int) -> float:
    """Falling-factorial polynomial of a coefficient list at integer k >= 0.

    Term n contributes ``coefficients[n] * k! / (k - n)!``; for n > k the
    falling factorial is zero, so the term drops out.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    acc = 0.0
    for n, a in enumerate(coefficients):
        acc = acc + a * math.perm(k, n)
    return acc


def fourier_mode_rates(
    coefficients: Sequence[float], length: float, k: int
) -> tuple[float, float]:
    """Dilation and rotation rates of spectral cell k >= 1.

    With x = k*pi/length, the even coefficients contribute the dilation rate
    ``sum_j (-1)^j A[2j] x^(2j)`` and the odd ones the rotation rate
    ``sum_j (-1)^j A[2j+1] x^(2j+1)``.
    """
    x = k * math.pi / length
    growth = 0.0
    rotation = 0.0
    for n, a in enumerate(coefficients):
        j, odd = divmod(n, 2)
        sign = -1.0 if j % 2 else 1.0
        if odd:
            rotation = rotation + sign * a * x**n
        else:
            growth = growth + sign * a * x**n
    return growth, rotation


def _polynomial_tail(coeffs: Sequence[float]) -> SequenceSpec:
    """Most specific tail class for ascending polynomial coefficients."""
    cs = list(coeffs)
    while cs and cs[-1] == 0.0:
        cs.pop()
    if not cs:
        return SequenceSpec((), Zero())
    if len(cs) == 1:
        return SequenceSpec((), Constant(cs[0]))
    if len(cs) == 2:
        return SequenceSpec((), AffineLinear(cs[1], cs[0]))
    if len(cs) == 3:
        return SequenceSpec((), QuadraticPoly(cs[2], cs[1], cs[0]))
    return SequenceSpec((), Polynomial(tuple(cs)))


def rate_sequence(model: FlowModel) -> SequenceSpec:
    """Per-cell log-Jacobian rates d_k of a flow: cell k of the flow
    multiplies k-cell volume by ``exp(d_k * t)``.

    Diagonal families have d_k equal to the scalar exponent of coordinate k;
    the Fourier family has d_0 equal to the zeroth coefficient and d_k twice
    the dilation rate of cell k (its 2x2 cell has determinant
    ``exp(2*growth_k*t)``).
    """
    if isinstance(model, FoersterLasota):
        return SequenceSpec((), AffineLinear(-1.0, model.gamma))
    if isinstance(model, BlackScholes):
        half_var = 0.5 * model.sigma**2
        return SequenceSpec((), QuadraticPoly(-half_var, half_var - model.r, model.r))
    if isinstance(model, Malthusian):
        return model.rates
    if isinstance(model, Maclaurin):
        degree = len(model.coefficients) - 1
        total = [0.0] * (degree + 1)
        ff = [1]  # integer coefficients of the falling factorial, ascending
        for n, a in enumerate(model.coefficients):
            for j, c in enumerate(ff):
                total[j] += a * c
            new = [0] * (len(ff) + 1)  # ff * (k - n)
            for j, c in enumerate(ff):
                new[j + 1] += c
                new[j] -= n * c
            ff = new
        return _polynomial_tail(total)
    if isinstance(model, Fourier):
        x_unit = math.pi / model.length
        degree = len(model.coefficients) - 1
        coeffs = [0.0] * (degree + 1)
        for n, a in enumerate(model.coefficients):
            if n % 2 == 0:
                j = n // 2
                sign = -1.0 if j % 2 else 1.0
                coeffs[n] = 2.0 * sign * a * x_unit**n
        tail_spec = _polynomial_tail(coeffs)
        return SequenceSpec((model.coefficients[0],), tail_spec.tail)
    raise TypeError(f"unknown flow model: {type(model).__name__}")


def _as_state(state: Sequence[float] | np.ndarray) -> np.ndarray:
    x = np.asarray(state, dtype=np.float64)
    if x.ndim != 1 or x.size < 1:
        raise LayoutMismatch("state must be a nonempty 1-D vector")
    return x


def _diagonal_exponents(model: FlowModel, count: int) -> np.ndarray:
    """Scalar exponent rate of each coordinate for the diagonal families."""
    if isinstance(model, FoersterLasota):
        return np.array([model.gamma - k for k in range(count)])
    if isinstance(model, BlackScholes):
        coeffs = (model.r, -model.r, -0.5 * model.sigma**2)
        return np.array([maclaurin_rate(coeffs, k) for k in range(count)])
    if isinstance(model, Malthusian):
        return np.array([model.rates.term(k) for k in range(count)])
    if isinstance(model, Maclaurin):
        return np.array([maclaurin_rate(model.coefficients, k) for k in range(count)])
    raise TypeError(f"not a diagonal model: {type(model).__name__}")


def cell_count(model: FlowModel, dimension: int) -> int:
    """Number of cells of a state of the given dimension."""
    if isinstance(model, Fourier):
        if dimension % 2 == 0:
            raise LayoutMismatch(
                f"spectral state must have odd size [mean, a_1, b_1, ...]; got {dimension}")
        return (dimension + 1) // 2
    return dimension


def state_dimension(model: FlowModel, cells: int) -> int:
    """Dimension of a state holding the first ``cells`` cells."""
    if cells < 1:
        raise ValueError("cells must be >= 1")
    return 2 * cells - 1 if isinstance(model, Fourier) else cells


def evolve(model: FlowModel, state: Sequence[float] | np.ndarray, t: float) -> np.ndarray:
    """Closed-form state at time ``t`` starting from ``state`` at time 0.

    Diagonal families scale coordinate k by ``exp(t * rate_k)``.  The
    Fourier family scales the mean slot by ``exp(A_0 * t)`` and maps each
    pair (a_k, b_k) through the dilation-rotation cell

        exp(growth_k * t) * [[cos(w t),  sin(w t)],
                             [-sin(w t), cos(w t)]],   w = rotation_k.

    Raises:
        LayoutMismatch: state shape incompatible with the model layout.
    """
    x = _as_state(state)
    t = float(t)
    if not isinstance(model, Fourier):
        return x * np.exp(t * _diagonal_exponents(model, x.size))
    cells = cell_count(model, x.size)
    out = np.empty_like(x)
    out[0] = math.exp(model.coefficients[0] * t) * x[0]
    for k in range(1, cells):
        growth, rotation = fourier_mode_rates(model.coefficients, model.length, k)
        scale = math.exp(growth * t)
        c, s = math.cos(rotation * t), math.sin(rotation * t)
        a, b = x[2 * k - 1], x[2 * k]
        out[2 * k - 1] = scale * (c * a + s * b)
        out[2 * k] = scale * (-s * a + c * b)
    return out


def evolve_forced(
    coefficients: Sequence[float],
    state: Sequence[float] | np.ndarray,
    forcing: Callable[[int, float], float],
    t: float,
    steps: int = 256,
) -> np.ndarray:
    """Diagonal polynomial flow driven by a per-coordinate forcing term.

    Coordinate k at time t is

        exp(t*P(k)) * x_k  +  integral_0^t exp((t-tau)*P(k)) f(k, tau) dtau

    with P the falling-factorial polynomial of ``coefficients`` and
    ``f = forcing``.  The integral is approximated by composite Simpson
    quadrature with ``steps`` panels (step size t/steps).

    Args:
        coefficients: Polynomial coefficient list of the homogeneous part.
        state: Initial coordinates.
        forcing: Continuous map (k, tau) -> forcing of coordinate k.
        t: Target time, >= 0.
        steps: Number of Simpson panels, >= 1.
    """
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    x = _as_state(state)
    rates = np.array([maclaurin_rate(coefficients, k) for k in range(x.size)])
    out = x * np.exp(t * rates)
    if t == 0.0:
        return out
    h = t / steps
    nodes = np.linspace(0.0, t, 2 * steps + 1)
    weights = np.full(2 * steps + 1, 2.0)
    weights[1::2] = 4.0
    weights[0] = weights[-1] = 1.0
    weights *= h / 6.0
    for k in range(x.size):
        decay = np.exp((t - nodes) * rates[k])
        samples = np.array([forcing(k, float(tau)) for tau in nodes])
        out[k] += float(np.dot(weights, decay * samples))
    return out
