"""Extended real scalars with the arithmetic conventions the library relies on.

The whole point of this type is to pin down the non-obvious cases once:

* ``+inf`` dominates addition, in particular ``+inf + (-inf) = +inf``,
  so ``a - b >= 0`` whenever ``a >= b`` but not conversely;
* ``-inf`` absorbs any sum that contains no ``+inf``;
* ``0 * (+inf) = 0 * (-inf) = 0``;
* a positive factor preserves the sign of an infinity, a negative finite
  factor flips it, and ``(+inf) * a`` is only defined for ``a >= 0``.

Finite payloads may be ``int``, ``Fraction`` or ``float``.  Arithmetic
preserves exactness whenever both operands are exact, which is how the
library's rational mode works: feed Fractions in, get Fractions out.
NaN is rejected everywhere.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import UndefinedProduct

_POS = float("inf")
_NEG = float("-inf")


class XR:
    """An immutable extended real: a finite number, ``+inf`` or ``-inf``."""

    __slots__ = ("v",)

    def __init__(self, value):
        if isinstance(value, XR):
            object.__setattr__(self, "v", value.v)
            return
        if isinstance(value, str):
            value = _parse_payload(value)
        elif isinstance(value, bool):
            value = int(value)
        elif isinstance(value, float):
            if math.isnan(value):
                raise ValueError("NaN is not an extended real")
        elif not isinstance(value, (int, Fraction)):
            raise TypeError(f"cannot build an extended real from {type(value).__name__}")
        object.__setattr__(self, "v", value)

    def __setattr__(self, name, value):
        raise AttributeError("XR is immutable")

    # -- classification -------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.v != _POS and self.v != _NEG

    @property
    def is_pos_inf(self) -> bool:
        return self.v == _POS

    @property
    def is_neg_inf(self) -> bool:
        return self.v == _NEG

    # -- order ----------------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.v == other.v

    def __hash__(self):
        return hash(self.v)

    def __lt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.v < other.v

    def __le__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.v <= other.v

    def __gt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.v > other.v

    def __ge__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.v >= other.v

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        return add(self, xr(other))

    __radd__ = __add__

    def __neg__(self):
        return neg(self)

    def __sub__(self, other):
        return add(self, neg(xr(other)))

    # -- text -----------------------------------------------------------

    def to_text(self) -> str:
        """Serialize: ``inf`` / ``-inf``, or a decimal literal.

        Fractions whose denominator is not of the form 2^a*5^b have no
        finite decimal expansion and are written as ``p/q`` instead; the
        parser accepts both, so round trips are exact.
        """
        if self.is_pos_inf:
            return "inf"
        if self.is_neg_inf:
            return "-inf"
        if isinstance(self.v, Fraction):
            return _fraction_text(self.v)
        return repr(self.v)

    @classmethod
    def parse(cls, text: str) -> "XR":
        return cls(text)

    def as_float(self) -> float:
        return float(self.v)

    def __repr__(self):
        return f"XR({self.to_text()})"


def _parse_payload(text: str):
    stripped = text.strip()
    if stripped in ("inf", "+inf", "Infinity", "+Infinity"):
        return _POS
    if stripped in ("-inf", "-Infinity"):
        return _NEG
    return Fraction(stripped)


def _fraction_text(f: Fraction) -> str:
    den = f.denominator
    if den == 1:
        return str(f.numerator)
    twos = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    fives = 0
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{f.numerator}/{f.denominator}"
    digits = max(twos, fives)
    scaled = f.numerator * 10**digits // f.denominator
    sign = "-" if scaled < 0 else ""
    body = str(abs(scaled)).rjust(digits + 1, "0")
    return f"{sign}{body[:-digits]}.{body[-digits:]}" if digits else f"{sign}{body}"


def _coerce(value):
    if isinstance(value, XR):
        return value
    if isinstance(value, (int, float, Fraction)):
        return XR(value)
    return NotImplemented


def xr(value) -> XR:
    """Coerce a number, string or XR to XR."""
    return value if isinstance(value, XR) else XR(value)


POS_INF = XR(_POS)
NEG_INF = XR(_NEG)
ZERO = XR(0)
ONE = XR(1)


def add(a: XR, b: XR) -> XR:
    """Convention sum: any ``+inf`` operand wins, then any ``-inf``."""
    a, b = xr(a), xr(b)
    if a.is_pos_inf or b.is_pos_inf:
        return POS_INF
    if a.is_neg_inf or b.is_neg_inf:
        return NEG_INF
    return XR(a.v + b.v)


def neg(a: XR) -> XR:
    """Sign flip; total, with neg(neg(a)) = a."""
    a = xr(a)
    if a.is_pos_inf:
        return NEG_INF
    if a.is_neg_inf:
        return POS_INF
    return XR(-a.v)


def scale(lam, a: XR) -> XR:
    """Convention product ``lam * a``.

    ``lam`` must be finite, or ``+inf`` with ``a >= 0``.  Zero times any
    infinity is zero; a positive factor keeps the sign of an infinity; a
    negative finite factor flips it.  ``(+inf) * a`` is ``0`` for ``a = 0``
    and ``+inf`` for ``a > 0``; everything else raises UndefinedProduct.
    """
    lam, a = xr(lam), xr(a)
    if lam.is_neg_inf:
        raise UndefinedProduct("-inf is not an admissible factor")
    if lam.is_pos_inf:
        if a < ZERO:
            raise UndefinedProduct("(+inf) * a is undefined for a < 0")
        if a == ZERO:
            return ZERO
        return POS_INF
    if lam.v == 0:
        return ZERO
    if a.is_pos_inf:
        return POS_INF if lam.v > 0 else NEG_INF
    if a.is_neg_inf:
        return NEG_INF if lam.v > 0 else POS_INF
    return XR(lam.v * a.v)


def le_within(a: XR, b: XR, tol) -> bool:
    """True iff a <= b + tol (order-based, safe at infinities)."""
    return not (xr(a) > add(xr(b), xr(tol)))


def close_within(a: XR, b: XR, tol) -> bool:
    """True iff a and b agree within tol, treating equal infinities as equal."""
    a, b = xr(a), xr(b)
    if a == b:
        return True
    if not (a.is_finite and b.is_finite):
        return False
    return abs(a.v - b.v) <= xr(tol).v


def xr_sum(values) -> XR:
    """Convention sum of an iterable (empty sum is 0)."""
    total = ZERO
    for value in values:
        total = add(total, value)
    return total
