"""Sign-aware log-scaled arithmetic.

Whittaker M grows like exp(+z/2) and W decays like exp(-z/2); with
z = m*omega*r^2 reaching several hundred in the radius sweeps, individual
factors overflow double precision even though the assembled Green entries are
O(1).  Every special-function value is therefore carried as a
(log-magnitude, sign) pair and only exponentiated once per matrix entry.
"""
from __future__ import annotations

import math
from typing import Iterable, NamedTuple


class SignedLog(NamedTuple):
    """A real number x represented as (log|x|, sign(x))."""

    log: float
    sign: float

    @classmethod
    def from_value(cls, x: float) -> "SignedLog":
        if x == 0.0:
            return cls(-math.inf, 0.0)
        return cls(math.log(abs(x)), math.copysign(1.0, x))

    @property
    def value(self) -> float:
        """Back to linear scale (may overflow to inf for log > ~709)."""
        if self.sign == 0.0:
            return 0.0
        return self.sign * math.exp(self.log)

    def __mul__(self, other):
        if isinstance(other, SignedLog):
            if self.sign == 0.0 or other.sign == 0.0:
                return SignedLog(-math.inf, 0.0)
            return SignedLog(self.log + other.log, self.sign * other.sign)
        return self * SignedLog.from_value(float(other))

    __rmul__ = __mul__

    def __neg__(self) -> "SignedLog":
        return SignedLog(self.log, -self.sign)

    def __truediv__(self, other: "SignedLog") -> "SignedLog":
        if self.sign == 0.0:
            return SignedLog(-math.inf, 0.0)
        if other.sign == 0.0:
            raise ZeroDivisionError("division by log-scaled zero")
        return SignedLog(self.log - other.log, self.sign * other.sign)


SL_ZERO = SignedLog(-math.inf, 0.0)
SL_ONE = SignedLog(0.0, 1.0)


def signed_log_sum(terms: Iterable[SignedLog]) -> SignedLog:
    """Sum of signed log-scaled terms, evaluated with the common peak
    magnitude factored out to avoid overflow."""
    terms = [t for t in terms if t.sign != 0.0]
    if not terms:
        return SL_ZERO
    peak = max(t.log for t in terms)
    if peak == -math.inf:
        return SL_ZERO
    acc = 0.0
    for t in terms:
        acc += t.sign * math.exp(t.log - peak)
    if acc == 0.0:
        return SL_ZERO
    return SignedLog(peak + math.log(abs(acc)), math.copysign(1.0, acc))


# ----------------------------------------------------------------------------
# Double-double (~31 significant digits) helpers, used when a plain float64
# series summation reports too much cancellation.  Classic error-free
# transformations (Dekker splitting, Knuth two-sum).
# ----------------------------------------------------------------------------

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a: float, b: float):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _two_prod(a: float, b: float):
    p = a * b
    t = _SPLITTER * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLITTER * b
    bh = t - (t - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def dd_add(xh: float, xl: float, yh: float, yl: float):
    s, e = _two_sum(xh, yh)
    e += xl + yl
    return _two_sum(s, e)


def dd_mul_d(xh: float, xl: float, y: float):
    p, e = _two_prod(xh, y)
    e += xl * y
    return _two_sum(p, e)


def dd_div_d(xh: float, xl: float, y: float):
    q1 = xh / y
    p, e = _two_prod(q1, y)
    q2 = (((xh - p) - e) + xl) / y
    return _two_sum(q1, q2)
