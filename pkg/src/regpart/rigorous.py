"""Certified real enclosures with outward-rounded fixed-point endpoints.

A :class:`RigorousReal` at precision ``prec`` stores integers ``lo <= hi``
and represents the closed interval ``[lo / 2**prec, hi / 2**prec]``. Every
operation rounds its endpoints outward, so the enclosure always contains the
exact value. Transcendentals (``ln``, ``exp2``) are evaluated by Taylor-type
series with explicit tail bounds and ``GUARD`` extra bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Callable

from .errors import PrecisionExhaustedError

START_BITS = 128
MAX_BITS = 2048
GUARD = 24


def _floor_shift(x: int, s: int) -> int:
    return x >> s


def _ceil_shift(x: int, s: int) -> int:
    return -((-x) >> s)


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@lru_cache(maxsize=None)
def _ln2_scaled(w: int) -> tuple[int, int]:
    """Enclosure of ``ln 2 * 2**w`` as ``(lo, hi)``; ln 2 = 2 atanh(1/3)."""
    lo, hi = _atanh_scaled(1, 3, w)
    return 2 * lo, 2 * hi


def _atanh_scaled(num: int, den: int, w: int) -> tuple[int, int]:
    """Enclosure of ``atanh(num/den) * 2**w`` for ``0 <= num/den <= 1/3``."""
    if num == 0:
        return 0, 0
    one = 1 << w
    # lower chain: all truncations downward, remainder dropped
    t = _floor_div(num << w, den)
    t2 = _floor_shift(t * t, w)
    term, lo, j = t, 0, 0
    while term:
        lo += term // (2 * j + 1)
        term = _floor_shift(term * t2, w)
        j += 1
    # upper chain: all roundings upward, geometric tail added (1/(1-t^2) <= 9/8)
    t = _ceil_div(num << w, den)
    t2 = _ceil_shift(t * t, w)
    term, hi, j = t, 0, 0
    while term > 1:
        hi += _ceil_div(term, 2 * j + 1)
        term = _ceil_shift(term * t2, w)
        j += 1
    hi += _ceil_div(9 * term, 8)
    assert t2 < one
    return lo, hi


def _ln_scaled(m: int, p: int, w: int) -> tuple[int, int]:
    """Enclosure of ``ln(m / 2**p) * 2**w`` for an integer ``m > 0``."""
    bl = m.bit_length() - 1
    e = bl - p
    base = 1 << bl
    # m / 2**bl lies in [1, 2); ln of it is 2 atanh((m - base) / (m + base))
    lo, hi = _atanh_scaled(m - base, m + base, w)
    lo, hi = 2 * lo, 2 * hi
    l2lo, l2hi = _ln2_scaled(w)
    if e >= 0:
        return lo + e * l2lo, hi + e * l2hi
    return lo + e * l2hi, hi + e * l2lo


def _exp2_scaled(m: int, p: int, w: int, upward: bool) -> int:
    """One-sided bound of ``2**(m / 2**p) * 2**w``."""
    f = m >> p
    r = m - (f << p)  # 0 <= r < 2**p
    l2lo, l2hi = _ln2_scaled(w)
    one = 1 << w
    if upward:
        z = _ceil_shift(r * l2hi, p)
        term, s, j = one, 0, 0
        while term > 1:
            s += term
            j += 1
            term = _ceil_div(_ceil_shift(term * z, w), j)
        # z < 0.7 so later terms shrink by at least half: tail <= 2 * term
        s += 2 * term
    else:
        z = _floor_shift(r * l2lo, p)
        term, s, j = one, 0, 0
        while term:
            s += term
            j += 1
            term = _floor_shift(term * z, w) // j
    if f >= 0:
        return s << f
    return _ceil_shift(s, -f) if upward else _floor_shift(s, -f)


@dataclass(frozen=True)
class RigorousReal:
    lo: int
    hi: int
    prec: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError("empty enclosure")

    @classmethod
    def exact(cls, q: int | Fraction, prec: int = START_BITS) -> RigorousReal:
        q = Fraction(q)
        num, den = q.numerator << prec, q.denominator
        return cls(_floor_div(num, den), _ceil_div(num, den), prec)

    @property
    def lower(self) -> Fraction:
        return Fraction(self.lo, 1 << self.prec)

    @property
    def upper(self) -> Fraction:
        return Fraction(self.hi, 1 << self.prec)

    @property
    def width(self) -> Fraction:
        return Fraction(self.hi - self.lo, 1 << self.prec)

    def contains(self, q) -> bool:
        return self.lower <= Fraction(q) <= self.upper

    def sign(self) -> int | None:
        """+1 / -1 when certified, ``None`` when the enclosure straddles 0.

        A degenerate enclosure ``[0, 0]`` certifies the value 0.
        """
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def _coerce(self, other) -> RigorousReal:
        if isinstance(other, RigorousReal):
            if other.prec != self.prec:
                raise ValueError("precision mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return RigorousReal.exact(other, self.prec)
        return NotImplemented

    def __add__(self, other) -> RigorousReal:
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RigorousReal(self.lo + o.lo, self.hi + o.hi, self.prec)

    __radd__ = __add__

    def __neg__(self) -> RigorousReal:
        return RigorousReal(-self.hi, -self.lo, self.prec)

    def __sub__(self, other) -> RigorousReal:
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RigorousReal(self.lo - o.hi, self.hi - o.lo, self.prec)

    def __rsub__(self, other) -> RigorousReal:
        return (-self) + other

    def __mul__(self, other) -> RigorousReal:
        if isinstance(other, int) and not isinstance(other, bool):
            a, b = self.lo * other, self.hi * other
            return RigorousReal(min(a, b), max(a, b), self.prec)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        prods = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RigorousReal(
            _floor_shift(min(prods), self.prec), _ceil_shift(max(prods), self.prec), self.prec)

    __rmul__ = __mul__

    def sqrt(self) -> RigorousReal:
        if self.lo < 0:
            raise ValueError("sqrt of an enclosure reaching below 0")
        p = self.prec
        lo = isqrt(self.lo << p)
        r = isqrt(self.hi << p)
        hi = r if r * r == self.hi << p else r + 1
        return RigorousReal(lo, hi, p)

    def ln(self) -> RigorousReal:
        if self.lo <= 0:
            raise ValueError("ln of an enclosure reaching 0 or below")
        p = self.prec
        w = p + GUARD
        lo, _ = _ln_scaled(self.lo, p, w)
        _, hi = _ln_scaled(self.hi, p, w)
        return RigorousReal(_floor_shift(lo, GUARD), _ceil_shift(hi, GUARD), p)

    def exp2(self) -> RigorousReal:
        """``2**x`` over the enclosure."""
        p = self.prec
        w = p + GUARD
        lo = _exp2_scaled(self.lo, p, w, upward=False)
        hi = _exp2_scaled(self.hi, p, w, upward=True)
        return RigorousReal(_floor_shift(lo, GUARD), _ceil_shift(hi, GUARD), p)

    def __repr__(self) -> str:
        return f"RigorousReal([{float(self.lower)!r}, {float(self.upper)!r}], prec={self.prec})"


def certified_sign(
    build: Callable[[int], RigorousReal],
    start_bits: int = START_BITS,
    max_bits: int = MAX_BITS,
) -> tuple[int, int]:
    """Evaluate ``build(prec)`` at doubling precision until its sign is certain.

    Returns ``(sign, bits_used)``. Raises :class:`PrecisionExhaustedError` if
    the enclosure still contains 0 at ``max_bits``.
    """
    bits = start_bits
    while True:
        s = build(bits).sign()
        if s is not None:
            return s, bits
        if bits >= max_bits:
            raise PrecisionExhaustedError(f"sign undecided at {bits} bits")
        bits = min(2 * bits, max_bits)
