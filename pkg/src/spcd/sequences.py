"""Closed-form real sequences: term evaluation, series classification, infinite products.

A sequence is described by a finite ``head`` of explicit values followed by a
symbolic tail drawn from a fixed set of closed-form classes (constant,
geometric, power law, polynomial, alternating power law).  Restricting tails
to this closed set is what makes every question asked here *decidable*:
convergence of the series, sign of a divergent sum, existence of the infinite
product, and the sum over the strictly negative terms are all settled exactly
from the tail class, never by inspecting a numeric prefix and guessing.

Reported values of convergent series are partial sums to a configurable depth
plus a class-specific remainder correction; the ``remainder_bound`` carried by
the verdict is an analytic bound on the truncation remainder of the reported
value (float rounding is not included; it is orders of magnitude smaller at
the default depth).

Infinite products are taken over nonnegative factors and live in the extended
range [0, +inf].  Factor sequences may be given directly, or in log domain
(the sequence spec holds the logarithms of the factors), which is how factors
such as ``exp(2^-k)`` or the 2, 1/2, 2, 1/2, ... pattern are expressed in
closed form.  Blocked products group consecutive factors into blocks of
prescribed sizes and can converge when the unblocked product does not.

All functions are pure; all value types are immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

#: Default number of explicit terms used when a convergent value is reported.
DEFAULT_DEPTH = 100_000

#: Longest stretch of indices the engine will enumerate when locating sign
#: changes of a general polynomial tail.
_ENUMERATION_CAP = 1_000_000


class NegativeFactor(ValueError):
    """An infinite product was requested over factors whose limit has no
    meaning in [0, +inf]: the sign of the partial products oscillates
    forever, or their limit would be strictly negative."""


class UnsupportedBlocking(ValueError):
    """A blocked product needs a symbolic rescue (the unblocked log-series
    oscillates) that is only available for constant block sizes."""


def _require_finite(value: float, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError(f"{name} must be a real number")
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite")
    return value


# ---------------------------------------------------------------------------
# Tail classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Zero:
    """Every tail term is exactly 0."""

    def value_at(self, k: int, start: int) -> float:
        return 0.0


@dataclass(frozen=True)
class Constant:
    """Every tail term equals ``c``."""

    c: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", _require_finite(self.c, "c"))

    def value_at(self, k: int, start: int) -> float:
        return self.c


@dataclass(frozen=True)
class Geometric:
    """Tail term at index k is ``a * q**(k - start)``."""

    a: float
    q: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", _require_finite(self.a, "a"))
        object.__setattr__(self, "q", _require_finite(self.q, "q"))

    def value_at(self, k: int, start: int) -> float:
        return self.a * self.q ** (k - start)


@dataclass(frozen=True)
class PowerLaw:
    """Tail term at index k is ``c / (k + 1)**p``."""

    c: float
    p: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", _require_finite(self.c, "c"))
        object.__setattr__(self, "p", _require_finite(self.p, "p"))

    def value_at(self, k: int, start: int) -> float:
        return self.c / (k + 1) ** self.p


@dataclass(frozen=True)
class AffineLinear:
    """Tail term at index k is ``s*k + b``."""

    s: float
    b: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "s", _require_finite(self.s, "s"))
        object.__setattr__(self, "b", _require_finite(self.b, "b"))

    def value_at(self, k: int, start: int) -> float:
        return self.s * k + self.b


@dataclass(frozen=True)
class QuadraticPoly:
    """Tail term at index k is ``c2*k**2 + c1*k + c0``."""

    c2: float
    c1: float
    c0: float

    def __post_init__(self) -> None:
        for name in ("c2", "c1", "c0"):
            object.__setattr__(self, name, _require_finite(getattr(self, name), name))

    def value_at(self, k: int, start: int) -> float:
        return (self.c2 * k + self.c1) * k + self.c0


@dataclass(frozen=True)
class AlternatingPowerLaw:
    """Tail term at index k is ``c * (-1)**k / (k + 1)**p``.

    The sign is tied to the absolute index k, not to the offset from the
    head, so prepending head values never flips the tail's sign pattern.
    """

    c: float
    p: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", _require_finite(self.c, "c"))
        object.__setattr__(self, "p", _require_finite(self.p, "p"))

    def value_at(self, k: int, start: int) -> float:
        sign = -1.0 if k % 2 else 1.0
        return self.c * sign / (k + 1) ** self.p


@dataclass(frozen=True)
class Polynomial:
    """Tail term at index k is ``sum(coeffs[j] * k**j)`` (ascending powers).

    Covers rate sequences of degree above two, which arise from coefficient
    lists with three or more nonzero entries.
    """

    coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(_require_finite(c, "coeffs[]") for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)

    def value_at(self, k: int, start: int) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * k + c
        return acc


TailClass = Union[
    Zero,
    Constant,
    Geometric,
    PowerLaw,
    AffineLinear,
    QuadraticPoly,
    AlternatingPowerLaw,
    Polynomial,
]

_TAIL_TYPES = (
    Zero,
    Constant,
    Geometric,
    PowerLaw,
    AffineLinear,
    QuadraticPoly,
    AlternatingPowerLaw,
    Polynomial,
)


@dataclass(frozen=True)
class SequenceSpec:
    """A real sequence: explicit ``head`` values, then a symbolic tail.

    ``head[k]`` is the term at index k for k < len(head); for k >= len(head)
    the tail formula applies (evaluated at the absolute index k).
    """

    head: tuple[float, ...] = ()
    tail: TailClass = Zero()

    def __post_init__(self) -> None:
        head = tuple(_require_finite(x, "head[]") for x in self.head)
        object.__setattr__(self, "head", head)
        if not isinstance(self.tail, _TAIL_TYPES):
            raise TypeError(f"unknown tail class: {type(self.tail).__name__}")

    @property
    def start(self) -> int:
        """First index governed by the tail formula."""
        return len(self.head)

    def term(self, k: int) -> float:
        """Value of the sequence at index ``k`` (k >= 0)."""
        if k < 0:
            raise ValueError("index must be nonnegative")
        if k < len(self.head):
            return self.head[k]
        return self.tail.value_at(k, len(self.head))


def term(spec: SequenceSpec, k: int) -> float:
    """Value of ``spec`` at index ``k``; closed-form, any index."""
    return spec.term(k)


def _normalized_tail(tail: TailClass) -> TailClass:
    """Collapse degenerate parameters to the most specific tail class."""
    if isinstance(tail, Constant) and tail.c == 0.0:
        return Zero()
    if isinstance(tail, Geometric):
        if tail.a == 0.0:
            return Zero()
        if tail.q == 1.0:
            return Constant(tail.a)
    if isinstance(tail, PowerLaw):
        if tail.c == 0.0:
            return Zero()
        if tail.p == 0.0:
            return Constant(tail.c)
    if isinstance(tail, AlternatingPowerLaw) and tail.c == 0.0:
        return Zero()
    if isinstance(tail, AffineLinear) and tail.s == 0.0:
        return _normalized_tail(Constant(tail.b))
    if isinstance(tail, QuadraticPoly) and tail.c2 == 0.0:
        return _normalized_tail(AffineLinear(tail.c1, tail.c0))
    if isinstance(tail, Polynomial):
        coeffs = list(tail.coeffs)
        while coeffs and coeffs[-1] == 0.0:
            coeffs.pop()
        if not coeffs:
            return Zero()
        if len(coeffs) == 1:
            return _normalized_tail(Constant(coeffs[0]))
        if len(coeffs) == 2:
            return _normalized_tail(AffineLinear(coeffs[1], coeffs[0]))
        if len(coeffs) == 3:
            return QuadraticPoly(coeffs[2], coeffs[1], coeffs[0])
        return Polynomial(tuple(coeffs))
    return tail


# ---------------------------------------------------------------------------
# Series verdicts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvergesTo:
    """The series converges; ``value`` carries an analytic truncation bound."""

    value: float
    absolutely: bool
    remainder_bound: float = 0.0


@dataclass(frozen=True)
class DivergesPlus:
    """Partial sums grow beyond every bound."""


@dataclass(frozen=True)
class DivergesMinus:
    """Partial sums fall below every bound."""


@dataclass(frozen=True)
class Oscillates:
    """Partial sums have no limit in the extended reals."""


SeriesVerdict = Union[ConvergesTo, DivergesPlus, DivergesMinus, Oscillates]


def _sign_infinity(x: float) -> SeriesVerdict:
    return DivergesPlus() if x > 0 else DivergesMinus()


def _powerlaw_tail_value(c: float, p: float, start: int, depth: int) -> tuple[float, float]:
    """Sum of c/(k+1)^p for k >= start, p > 1: partial sum plus the midpoint
    of the integral remainder bracket; returns (value, bound)."""
    top = max(depth, start + 1)
    j = np.arange(start + 1, top + 2, dtype=np.float64)  # j = k + 1
    partial = float(np.sum(j ** (-p)))
    upper = (top + 1) ** (1.0 - p) / (p - 1.0)
    lower = (top + 2) ** (1.0 - p) / (p - 1.0)
    value = c * (partial + 0.5 * (upper + lower))
    bound = abs(c) * 0.5 * (upper - lower)
    return value, bound


def _alternating_tail_value(c: float, p: float, start: int, depth: int) -> tuple[float, float]:
    """Sum of c(-1)^k/(k+1)^p for k >= start, p > 0: midpoint of two
    consecutive partial sums; the limit lies between them."""
    top = max(depth, start + 1)
    k = np.arange(start, top + 2, dtype=np.float64)
    terms = c * np.where(np.arange(start, top + 2) % 2, -1.0, 1.0) / (k + 1.0) ** p
    s_top = float(np.sum(terms[:-1]))
    value = s_top + 0.5 * float(terms[-1])
    bound = 0.5 * abs(float(terms[-1]))
    return value, bound


def classify_sum(spec: SequenceSpec, depth: int = DEFAULT_DEPTH) -> SeriesVerdict:
    """Classify and evaluate the series sum of ``spec``.

    The tag (convergent, +inf, -inf, oscillating) and the absolute-convergence
    flag are decided symbolically from the tail class.  Convergent values are
    the finite head sum plus the tail value computed with a certified
    remainder bound (exact closed form for geometric tails).

    Args:
        spec: The sequence to sum.
        depth: Number of explicit tail terms used for non-closed-form values.

    Returns:
        A ``SeriesVerdict``.
    """
    head_sum = math.fsum(spec.head)
    start = spec.start
    tail = _normalized_tail(spec.tail)

    if isinstance(tail, Zero):
        return ConvergesTo(head_sum, True, 0.0)
    if isinstance(tail, Constant):
        return _sign_infinity(tail.c)
    if isinstance(tail, Geometric):
        if tail.q == 0.0:
            return ConvergesTo(head_sum + tail.a, True, 0.0)
        if abs(tail.q) < 1.0:
            return ConvergesTo(head_sum + tail.a / (1.0 - tail.q), True, 0.0)
        if tail.q > 1.0:
            return _sign_infinity(tail.a)
        return Oscillates()  # q <= -1 with a != 0
    if isinstance(tail, PowerLaw):
        if tail.p > 1.0:
            value, bound = _powerlaw_tail_value(tail.c, tail.p, start, depth)
            return ConvergesTo(head_sum + value, True, bound)
        return _sign_infinity(tail.c)  # 0 < p <= 1 and p < 0 both diverge
    if isinstance(tail, AffineLinear):
        return _sign_infinity(tail.s)
    if isinstance(tail, QuadraticPoly):
        return _sign_infinity(tail.c2)
    if isinstance(tail, Polynomial):
        return _sign_infinity(tail.coeffs[-1])
    if isinstance(tail, AlternatingPowerLaw):
        if tail.p > 0.0:
            value, bound = _alternating_tail_value(tail.c, tail.p, start, depth)
            return ConvergesTo(head_sum + value, tail.p > 1.0, bound)
        return Oscillates()
    raise TypeError(f"unknown tail class: {type(tail).__name__}")


# ---------------------------------------------------------------------------
# Negative-part sums
# ---------------------------------------------------------------------------


def _affine_negative_range(s: float, b: float, start: int) -> tuple[int, int] | None:
    """Integer index range [lo, hi] of strictly negative terms of s*k + b
    for k >= start, when s > 0 (finitely many).  None when empty."""
    hi = math.ceil(-b / s) + 2
    while hi >= start and s * hi + b >= 0.0:
        hi -= 1
    if hi < start:
        return None
    return start, hi


def _sum_affine_range(s: float, b: float, lo: int, hi: int) -> float:
    n = hi - lo + 1
    k_sum = (lo + hi) * n // 2
    return s * k_sum + b * n


def _quadratic_negative_range(
    tail: QuadraticPoly, start: int, mid: float, half: float
) -> tuple[int, int] | None:
    """Contiguous run [lo, hi] of strictly negative integer indices >= start
    of an upward parabola with real roots mid -+ half, or None.  Probes a
    bounded number of candidates near the roots; the term values decide."""
    r1, r2 = mid - half, mid + half
    base = max(start, math.floor(r1) - 1)
    lo = None
    for k in [base, base + 1, base + 2, base + 3, start, start + 1]:
        if k >= start and tail.value_at(k, start) < 0.0:
            lo = k if lo is None else min(lo, k)
    if lo is None:
        return None
    hi = math.floor(r2) + 1
    while hi >= lo and tail.value_at(hi, start) >= 0.0:
        hi -= 1
    return (lo, hi) if hi >= lo else None


def _sum_quadratic_range(c2: float, c1: float, c0: float, lo: int, hi: int) -> float:
    def sq(n: int) -> int:  # sum of k^2 for k = 0..n
        return n * (n + 1) * (2 * n + 1) // 6

    def s1(n: int) -> int:  # sum of k for k = 0..n
        return n * (n + 1) // 2

    n = hi - lo + 1
    k2_sum = sq(hi) - sq(lo - 1)
    k_sum = s1(hi) - s1(lo - 1)
    return c2 * k2_sum + c1 * k_sum + c0 * n


def negative_part_sum(spec: SequenceSpec, depth: int = DEFAULT_DEPTH) -> SeriesVerdict:
    """Classify the sum restricted to the strictly negative terms of ``spec``.

    The index set of negative terms is derived symbolically from the tail
    class (sign patterns of each class are closed form).  The result is
    either a finite value, reported with the same bound conventions as
    ``classify_sum``, or -inf.  Sums of nonpositive terms cannot oscillate
    or diverge to +inf.
    """
    head_neg = math.fsum(x for x in spec.head if x < 0.0)
    start = spec.start
    tail = _normalized_tail(spec.tail)

    def finite(tail_value: float = 0.0, bound: float = 0.0) -> ConvergesTo:
        return ConvergesTo(head_neg + tail_value, True, bound)

    if isinstance(tail, Zero):
        return finite()
    if isinstance(tail, Constant):
        return DivergesMinus() if tail.c < 0.0 else finite()
    if isinstance(tail, Geometric):
        a, q = tail.a, tail.q
        if q == 0.0:
            return finite(a if a < 0.0 else 0.0)
        if q > 0.0:
            if a > 0.0:
                return finite()
            return finite(a / (1.0 - q)) if q < 1.0 else DivergesMinus()
        # q < 0: signs alternate within the tail
        if abs(q) >= 1.0:
            return DivergesMinus()
        # negative terms a*q^j (j = k - start) at odd j when a > 0, even j when a < 0
        first = a * q if a > 0.0 else a
        return finite(first / (1.0 - q * q))
    if isinstance(tail, PowerLaw):
        if tail.c > 0.0:
            return finite()
        if tail.p > 1.0:
            value, bound = _powerlaw_tail_value(tail.c, tail.p, start, depth)
            return finite(value, bound)
        return DivergesMinus()
    if isinstance(tail, AffineLinear):
        if tail.s < 0.0:
            return DivergesMinus()
        rng = _affine_negative_range(tail.s, tail.b, start)
        if rng is None:
            return finite()
        return finite(_sum_affine_range(tail.s, tail.b, *rng))
    if isinstance(tail, QuadraticPoly):
        if tail.c2 < 0.0:
            return DivergesMinus()
        disc = tail.c1 * tail.c1 - 4.0 * tail.c2 * tail.c0
        if disc <= 0.0:
            return finite()
        half = math.sqrt(disc) / (2.0 * tail.c2)
        mid = -tail.c1 / (2.0 * tail.c2)
        rng = _quadratic_negative_range(tail, start, mid, half)
        if rng is None:
            return finite()
        # terms between the roots are all < 0; zero-valued endpoints add nothing
        return finite(_sum_quadratic_range(tail.c2, tail.c1, tail.c0, *rng))
    if isinstance(tail, Polynomial):
        lead = tail.coeffs[-1]
        if lead < 0.0:
            return DivergesMinus()
        # real roots are below the Cauchy bound; beyond it every term is positive
        bound_k = 1 + math.ceil(max(abs(c / lead) for c in tail.coeffs))
        if bound_k - start > _ENUMERATION_CAP:
            raise ValueError("polynomial sign analysis exceeds the enumeration cap")
        total = math.fsum(
            v for k in range(start, max(start, bound_k) + 1)
            if (v := tail.value_at(k, start)) < 0.0
        )
        return finite(total)
    if isinstance(tail, AlternatingPowerLaw):
        c, p = tail.c, tail.p
        if p > 1.0:
            # negative terms sit on one parity class; bracket the remainder
            # with integrals of the (step-2) envelope
            parity = 1 if c > 0.0 else 0
            first = start if start % 2 == parity else start + 1
            top = max(depth, first)
            if (top - first) % 2:
                top += 1
            k = np.arange(first, top + 1, 2, dtype=np.float64)
            partial = -abs(c) * float(np.sum((k + 1.0) ** (-p)))
            k_next = top + 2
            integral = (k_next + 1.0) ** (1.0 - p) / (p - 1.0)
            first_term = (k_next + 1.0) ** (-p)
            value = partial - abs(c) * (0.5 * integral + 0.5 * first_term)
            bound = abs(c) * 0.5 * first_term + abs(c) * 1e-16 * abs(partial)
            return finite(value, bound)
        return DivergesMinus()
    raise TypeError(f"unknown tail class: {type(tail).__name__}")


# ---------------------------------------------------------------------------
# Extended measures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtendedMeasure:
    """A nonnegative extended real: 0, a finite positive value, +inf, or
    undefined (the limit defining it oscillates)."""

    tag: str
    value: float | None = None

    _TAGS = ("zero", "finite", "infinite", "undefined")

    def __post_init__(self) -> None:
        if self.tag not in self._TAGS:
            raise ValueError(f"unknown measure tag: {self.tag!r}")
        if self.tag == "finite":
            if self.value is None or not (0.0 < self.value < math.inf):
                raise ValueError("finite measure needs a strictly positive finite value")
        elif self.value is not None:
            raise ValueError(f"{self.tag} measure carries no value")

    @classmethod
    def zero(cls) -> "ExtendedMeasure":
        return cls("zero")

    @classmethod
    def finite(cls, value: float) -> "ExtendedMeasure":
        return cls("finite", float(value))

    @classmethod
    def infinite(cls) -> "ExtendedMeasure":
        return cls("infinite")

    @classmethod
    def undefined(cls) -> "ExtendedMeasure":
        return cls("undefined")

    @classmethod
    def from_exponent(cls, exponent: float) -> "ExtendedMeasure":
        """e**exponent as a measure; collapses float overflow to +inf and
        underflow to 0."""
        try:
            value = math.exp(exponent)
        except OverflowError:
            return cls.infinite()
        if value == 0.0:
            return cls.zero()
        if math.isinf(value):
            return cls.infinite()
        return cls.finite(value)

    @property
    def is_zero(self) -> bool:
        return self.tag == "zero"

    @property
    def is_finite(self) -> bool:
        return self.tag == "finite"

    @property
    def is_infinite(self) -> bool:
        return self.tag == "infinite"

    @property
    def is_undefined(self) -> bool:
        return self.tag == "undefined"

    def as_float(self) -> float:
        """0.0, the finite value, inf, or nan for undefined."""
        if self.tag == "zero":
            return 0.0
        if self.tag == "finite":
            return float(self.value)  # type: ignore[arg-type]
        if self.tag == "infinite":
            return math.inf
        return math.nan


# ---------------------------------------------------------------------------
# Ordinary products
# ---------------------------------------------------------------------------


_MAG_ZERO = "zero"
_MAG_ONE = "one"
_MAG_INFINITE = "infinite"


def _polynomial_scan(tail: Polynomial, start: int) -> tuple[bool, object]:
    """(has_zero_factor, negative_count) for a polynomial tail with positive
    leading coefficient; enumerates up to the Cauchy root bound."""
    lead = tail.coeffs[-1]
    bound_k = 1 + math.ceil(max(abs(c / lead) for c in tail.coeffs))
    if bound_k - start > _ENUMERATION_CAP:
        raise ValueError("polynomial sign analysis exceeds the enumeration cap")
    has_zero = False
    negatives = 0
    for k in range(start, max(start, bound_k) + 1):
        v = tail.value_at(k, start)
        if v == 0.0:
            has_zero = True
        elif v < 0.0:
            negatives += 1
    return has_zero, negatives


def _tail_factor_profile(tail: TailClass, start: int) -> tuple[bool, object, str]:
    """Symbolic profile of a tail used as product factors.

    Returns (has_zero_factor, negative_count, magnitude) where
    negative_count is an int or +inf, and magnitude says whether the
    partial products of |terms| tend to 0, stay eventually at 1, or grow
    beyond every bound.
    """
    inf = math.inf
    if isinstance(tail, Zero):
        return True, 0, _MAG_ZERO
    if isinstance(tail, Constant):
        c = tail.c
        negs = inf if c < 0.0 else 0
        if abs(c) < 1.0:
            return False, negs, _MAG_ZERO
        if abs(c) > 1.0:
            return False, negs, _MAG_INFINITE
        return False, negs, _MAG_ONE
    if isinstance(tail, Geometric):
        a, q = tail.a, tail.q
        if q == 0.0:
            return True, (1 if a < 0.0 else 0), _MAG_ZERO
        negs: object
        if q > 0.0:
            negs = inf if a < 0.0 else 0
        else:
            negs = inf  # signs alternate forever
        if abs(q) < 1.0:
            return False, negs, _MAG_ZERO
        if abs(q) > 1.0:
            return False, negs, _MAG_INFINITE
        # |q| == 1 (q == -1 after normalization)
        if abs(a) < 1.0:
            return False, negs, _MAG_ZERO
        if abs(a) > 1.0:
            return False, negs, _MAG_INFINITE
        return False, negs, _MAG_ONE
    if isinstance(tail, PowerLaw):
        negs = inf if tail.c < 0.0 else 0
        return False, negs, (_MAG_ZERO if tail.p > 0.0 else _MAG_INFINITE)
    if isinstance(tail, AffineLinear):
        s, b = tail.s, tail.b
        if s < 0.0:
            return False, inf, _MAG_INFINITE
        rng = _affine_negative_range(s, b, start)
        negatives = 0 if rng is None else rng[1] - rng[0] + 1
        root = -b / s
        k0 = round(root)
        has_zero = any(
            k >= start and tail.value_at(k, start) == 0.0
            for k in range(max(start, k0 - 2), k0 + 3)
        )
        return has_zero, negatives, _MAG_INFINITE
    if isinstance(tail, QuadraticPoly):
        if tail.c2 < 0.0:
            return False, inf, _MAG_INFINITE
        disc = tail.c1 * tail.c1 - 4.0 * tail.c2 * tail.c0
        if disc < 0.0:
            return False, 0, _MAG_INFINITE
        half = math.sqrt(disc) / (2.0 * tail.c2)
        mid = -tail.c1 / (2.0 * tail.c2)
        has_zero = any(
            tail.value_at(k, start) == 0.0
            for r in (mid - half, mid + half)
            for k in range(max(start, round(r) - 2), round(r) + 3)
        )
        rng = _quadratic_negative_range(tail, start, mid, half)
        negatives = 0 if rng is None else rng[1] - rng[0] + 1
        return has_zero, negatives, _MAG_INFINITE
    if isinstance(tail, Polynomial):
        if tail.coeffs[-1] < 0.0:
            return False, inf, _MAG_INFINITE
        has_zero, negatives = _polynomial_scan(tail, start)
        return has_zero, negatives, _MAG_INFINITE
    if isinstance(tail, AlternatingPowerLaw):
        # c != 0 after normalization: signs alternate forever
        if tail.p > 0.0:
            mag = _MAG_ZERO
        elif tail.p < 0.0:
            mag = _MAG_INFINITE
        else:
            mag = _MAG_ZERO if abs(tail.c) < 1.0 else (
                _MAG_ONE if abs(tail.c) == 1.0 else _MAG_INFINITE)
        return False, math.inf, mag
    raise TypeError(f"unknown tail class: {type(tail).__name__}")


def has_negative_terms(spec: SequenceSpec) -> bool:
    """True when some term of ``spec`` is strictly negative (symbolic)."""
    if any(x < 0.0 for x in spec.head):
        return True
    tail = _normalized_tail(spec.tail)
    if isinstance(tail, Zero):
        return False
    _, negatives, _ = _tail_factor_profile(tail, spec.start)
    return negatives != 0


def _direct_product(factors: SequenceSpec) -> ExtendedMeasure:
    """Ordinary product of a directly given factor sequence."""
    if any(x == 0.0 for x in factors.head):
        return ExtendedMeasure.zero()
    tail = _normalized_tail(factors.tail)
    has_zero, tail_negs, magnitude = _tail_factor_profile(tail, factors.start)
    if has_zero:
        return ExtendedMeasure.zero()
    if magnitude == _MAG_ZERO:
        # |partial products| -> 0, so the signed limit is 0 whatever the signs
        return ExtendedMeasure.zero()
    negatives = sum(1 for x in factors.head if x < 0.0) + tail_negs
    if math.isinf(negatives):
        raise NegativeFactor(
            "infinitely many negative factors: the sign of the partial products oscillates")
    if int(negatives) % 2:
        raise NegativeFactor("odd number of negative factors: the limit would be negative")
    if magnitude == _MAG_INFINITE:
        return ExtendedMeasure.infinite()
    # magnitude ONE with finitely many negatives only survives for an
    # all-ones tail; the limit is the (positive) head product
    return ExtendedMeasure.finite(abs(math.prod(factors.head)) if factors.head else 1.0)


def _product_from_log_verdict(verdict: SeriesVerdict) -> ExtendedMeasure:
    if isinstance(verdict, ConvergesTo):
        return ExtendedMeasure.from_exponent(verdict.value)
    if isinstance(verdict, DivergesPlus):
        return ExtendedMeasure.infinite()
    if isinstance(verdict, DivergesMinus):
        return ExtendedMeasure.zero()
    return ExtendedMeasure.undefined()


def ordinary_product(
    factors: SequenceSpec, *, log_domain: bool = False, depth: int = DEFAULT_DEPTH
) -> ExtendedMeasure:
    """Limit of the partial products of ``factors`` in [0, +inf].

    With ``log_domain=True`` the sequence spec holds the logarithms of the factors
    (all factors strictly positive by construction) and the product is the
    exponential of ``classify_sum``.  Direct factor sequences must be
    nonnegative: a single zero factor forces 0; negative factors raise
    ``NegativeFactor`` unless there are finitely many of them, their count
    is even, and no zero occurs (then the limit is positive and unchanged).

    Returns:
        The product as an ``ExtendedMeasure``; ``undefined`` when the
        partial products oscillate.
    """
    if log_domain:
        return _product_from_log_verdict(classify_sum(factors, depth))
    return _direct_product(factors)


# ---------------------------------------------------------------------------
# Blocked products
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlphaBlocking:
    """Block sizes for a blocked product: block k groups the next
    ``sizes.term(k)`` consecutive factor indices.

    Blocks partition the indices 0, 1, 2, ... contiguously, so block k
    covers ``[start(k), start(k) + n_k)`` with ``start(k) = n_0 + ... +
    n_{k-1}``.  Sizes must be positive integers; the symbolic validation
    accepts constant and affine tails (with integer, nondecreasing values),
    which covers blockings such as (1, 1, ...), (2, 2, ...) and (1, 2, 2, ...).
    """

    sizes: SequenceSpec

    def __post_init__(self) -> None:
        for i, x in enumerate(self.sizes.head):
            if x != int(x) or x < 1:
                raise ValueError(f"block size at index {i} must be a positive integer")
        tail = _normalized_tail(self.sizes.tail)
        if isinstance(tail, Constant):
            if tail.c != int(tail.c) or tail.c < 1:
                raise ValueError("constant block-size tail must be a positive integer")
        elif isinstance(tail, AffineLinear):
            if tail.s != int(tail.s) or tail.b != int(tail.b):
                raise ValueError("affine block-size tail must have integer parameters")
            if tail.s < 0 or tail.value_at(self.sizes.start, self.sizes.start) < 1:
                raise ValueError("affine block-size tail must be >= 1 and nondecreasing")
        else:
            raise ValueError(
                f"unsupported block-size tail: {type(self.sizes.tail).__name__}")

    @classmethod
    def constant(cls, n: int) -> "AlphaBlocking":
        return cls(SequenceSpec((), Constant(float(n))))

    @classmethod
    def identity(cls) -> "AlphaBlocking":
        return cls.constant(1)

    def size(self, k: int) -> int:
        return int(self.sizes.term(k))

    def block_start(self, k: int) -> int:
        """First factor index of block ``k``."""
        head = self.sizes.head
        prefix = int(sum(head[: min(k, len(head))]))
        if k <= len(head):
            extra = 0
        else:
            tail = _normalized_tail(self.sizes.tail)
            lo, hi = len(head), k - 1
            if isinstance(tail, Constant):
                extra = int(tail.c) * (hi - lo + 1)
            else:
                extra = int(_sum_affine_range(tail.s, tail.b, lo, hi))  # type: ignore[union-attr]
        return prefix + extra

    @property
    def is_identity(self) -> bool:
        tail = _normalized_tail(self.sizes.tail)
        return (
            all(x == 1.0 for x in self.sizes.head)
            and isinstance(tail, Constant)
            and tail.c == 1.0
        )


def _blocked_rescue(
    alpha: AlphaBlocking, factors: SequenceSpec
) -> ExtendedMeasure:
    """Blocked product of log-domain factors whose unblocked log-series
    oscillates.  Only constant block sizes admit a closed-form answer."""
    sizes_tail = _normalized_tail(alpha.sizes.tail)
    if not isinstance(sizes_tail, Constant):
        raise UnsupportedBlocking(
            "oscillating factor series: only constant block sizes are decidable")
    n = int(sizes_tail.c)
    tail = _normalized_tail(factors.tail)

    # first block that lies entirely in the regular region of both specs
    k0 = len(alpha.sizes.head)
    while alpha.block_start(k0) < factors.start:
        k0 += 1
    start0 = alpha.block_start(k0)
    prefix = math.fsum(factors.term(i) for i in range(start0))

    if isinstance(tail, AlternatingPowerLaw):  # p <= 0 here
        if n % 2:
            return ExtendedMeasure.undefined()
        if tail.p == 0.0:
            # every even-size block of +-c sums to exactly 0
            return ExtendedMeasure.from_exponent(prefix)
        # p < 0: block sums share one sign and grow without bound
        block0 = math.fsum(factors.term(i) for i in range(start0, start0 + n))
        return ExtendedMeasure.infinite() if block0 > 0.0 else ExtendedMeasure.zero()
    if isinstance(tail, Geometric):  # a != 0, q <= -1 here
        a, q = tail.a, tail.q
        if n % 2:
            return ExtendedMeasure.undefined()
        if q == -1.0:
            # 1 + q + ... + q^(n-1) = 0 for even n
            return ExtendedMeasure.from_exponent(prefix)
        # q < -1, n even: block sums a * q^(start-h) * G with fixed sign,
        # G = (q^n - 1)/(q - 1) < 0, growing in magnitude by |q|^n per block
        parity = (start0 - factors.start) % 2
        sign = (1.0 if a > 0.0 else -1.0) * (1.0 if parity == 0 else -1.0) * -1.0
        return ExtendedMeasure.infinite() if sign > 0.0 else ExtendedMeasure.zero()
    raise UnsupportedBlocking(
        f"no blocked closed form for oscillating tail {type(factors.tail).__name__}")


def ordinary_alpha_product(
    alpha: AlphaBlocking,
    factors: SequenceSpec,
    *,
    log_domain: bool = False,
    depth: int = DEFAULT_DEPTH,
) -> ExtendedMeasure:
    """Blocked product: the ordinary product of the per-block products.

    The blocked partial products are the unblocked partial products sampled
    at block boundaries, so whenever the unblocked product exists the blocked
    one equals it.  The interesting case is an oscillating log-domain factor
    series, where even-sized blocks can cancel the oscillation and the
    blocked product exists although the unblocked one does not.

    Raises:
        NegativeFactor: as ``ordinary_product`` (factors must be nonnegative
            before blocking is considered).
        UnsupportedBlocking: oscillating factor series with non-constant
            block sizes.
    """
    if alpha.is_identity:
        return ordinary_product(factors, log_domain=log_domain, depth=depth)
    if not log_domain:
        # direct factor sequences never oscillate in log magnitude, so the
        # blocked limit coincides with the unblocked one
        return _direct_product(factors)
    verdict = classify_sum(factors, depth)
    if not isinstance(verdict, Oscillates):
        return _product_from_log_verdict(verdict)
    return _blocked_rescue(alpha, factors)
