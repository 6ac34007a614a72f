"""Exact truncated q-expansions with fractional leading exponents.

A series is stored as  q^(offset24/24) * (c_0 + c_1 q + ... + c_prec q^prec)
with exact rational coefficients.  The denominator of the leading exponent
always divides 24, which is enough for eta quotients and the graded traces
built on top of them.  Coefficients beyond index ``prec`` are *unknown*, not
zero; any operation that would need them raises :class:`PrecisionError`
instead of silently padding.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd

from .errors import OffsetError, PrecisionError

__all__ = ["QSeries"]


# ---------------------------------------------------------------------------
# integer convolution kernel
# ---------------------------------------------------------------------------

def _int_convolve(a: list[int], b: list[int], out_len: int) -> list[int]:
    """First ``out_len`` coefficients of the product of two integer polys.

    Uses Kronecker substitution: pack each polynomial into one big integer
    with fixed-width digit slots, multiply once, and read the digits back.
    CPython's big-int multiply is subquadratic, which makes 10^4-term series
    products effectively instant; a schoolbook loop in Python would not be.
    """
    max_a = max(abs(x) for x in a)
    max_b = max(abs(x) for x in b)
    if max_a == 0 or max_b == 0:
        return [0] * out_len
    # every product coefficient is a sum of at most min(len) terms
    bound = max_a * max_b * min(len(a), len(b))
    slot_bits = ((bound.bit_length() + 2) + 7) // 8 * 8
    nbytes = slot_bits // 8

    def pack(coeffs: list[int]) -> int:
        pos = bytearray(nbytes * len(coeffs))
        neg = bytearray(nbytes * len(coeffs))
        for i, c in enumerate(coeffs):
            if c > 0:
                pos[i * nbytes:(i + 1) * nbytes] = c.to_bytes(nbytes, "little")
            elif c < 0:
                neg[i * nbytes:(i + 1) * nbytes] = (-c).to_bytes(nbytes, "little")
        return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")

    prod = pack(a) * pack(b)
    total = len(a) + len(b) - 1
    half = 1 << (slot_bits - 1)
    # shift every digit into [0, 2^slot_bits) so that to_bytes is well defined
    bias = int.from_bytes(half.to_bytes(nbytes, "little") * total, "little")
    raw = (prod + bias).to_bytes(total * nbytes, "little")
    out = []
    for k in range(min(out_len, total)):
        out.append(int.from_bytes(raw[k * nbytes:(k + 1) * nbytes], "little") - half)
    out.extend([0] * (out_len - len(out)))
    return out


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


# ---------------------------------------------------------------------------
# the series type
# ---------------------------------------------------------------------------

class QSeries:
    """Truncated q-expansion with exact rational coefficients.

    Attributes:
        offset24: leading exponent times 24 (may be negative).
        prec: largest stored index; coefficients are exact for 0..prec.
        coeffs: sparse map index -> nonzero Fraction.
    """

    __slots__ = ("offset24", "prec", "coeffs")

    def __init__(self, offset24: int, prec: int, coeffs: dict[int, Fraction]):
        if prec < 0:
            raise PrecisionError("series with negative precision")
        off = int(offset24)
        cc = {int(i): Fraction(c) for i, c in coeffs.items() if c != 0}
        if cc and (min(cc) < 0 or max(cc) > prec):
            raise ValueError("coefficient index outside 0..prec")
        # keep coeffs[0] as the first potentially-nonzero slot
        while prec > 0 and cc and 0 not in cc:
            shift = min(cc)
            if shift > prec:
                break
            off += 24 * shift
            prec -= shift
            cc = {i - shift: c for i, c in cc.items()}
        self.offset24 = off
        self.prec = prec
        self.coeffs = cc

    # -- constructors ------------------------------------------------------

    @classmethod
    def one(cls, prec: int) -> "QSeries":
        return cls(0, prec, {0: Fraction(1)})

    @classmethod
    def zero(cls, prec: int) -> "QSeries":
        return cls(0, prec, {})

    @classmethod
    def from_int_list(cls, offset24: int, ints: list[int]) -> "QSeries":
        coeffs = {i: Fraction(c) for i, c in enumerate(ints) if c}
        return cls(offset24, len(ints) - 1, coeffs)

    # -- basic access ------------------------------------------------------

    def __getitem__(self, i: int) -> Fraction:
        """Coefficient at stored index i (exponent offset24/24 + i)."""
        if i > self.prec:
            raise PrecisionError(
                f"index {i} beyond known precision {self.prec}")
        if i < 0:
            return Fraction(0)
        return self.coeffs.get(i, Fraction(0))

    def exponent(self, i: int) -> Fraction:
        """The q-exponent carried by stored index i."""
        return Fraction(self.offset24 + 24 * i, 24)

    def int_list(self, count: int) -> list[int]:
        """First ``count`` coefficients as ints; fails on true fractions."""
        out = []
        for i in range(count):
            c = self[i]
            if c.denominator != 1:
                raise ValueError(f"coefficient at index {i} is not integral")
            out.append(c.numerator)
        return out

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return not self.coeffs

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs.values())

    def leading(self) -> tuple[Fraction, Fraction]:
        """(exponent, coefficient) of the first nonzero known term."""
        if not self.coeffs:
            raise ValueError("zero series has no leading term")
        i = min(self.coeffs)
        return self.exponent(i), self.coeffs[i]

    def truncate(self, prec: int) -> "QSeries":
        if prec > self.prec:
            raise PrecisionError(
                f"cannot extend precision {self.prec} to {prec}")
        return QSeries(self.offset24, prec,
                       {i: c for i, c in self.coeffs.items() if i <= prec})

    def shift24(self, k: int) -> "QSeries":
        """Multiply by q^(k/24)."""
        return QSeries(self.offset24 + k, self.prec, dict(self.coeffs))

    # -- arithmetic --------------------------------------------------------

    def _aligned(self, other: "QSeries") -> tuple[int, int, int]:
        d = other.offset24 - self.offset24
        if d % 24 != 0:
            raise OffsetError(
                f"offsets {self.offset24}/24 and {other.offset24}/24 differ "
                "by a fractional q-power; sum not representable")
        k = d // 24
        if k >= 0:
            return self.offset24, 0, k
        return other.offset24, -k, 0

    def __add__(self, other: "QSeries") -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        off, sa, sb = self._aligned(other)
        # a term below the other series' offset meets only known zeros
        prec = min(self.prec + sa, other.prec + sb)
        coeffs: dict[int, Fraction] = {}
        for i, c in self.coeffs.items():
            if i + sa <= prec:
                coeffs[i + sa] = coeffs.get(i + sa, Fraction(0)) + c
        for i, c in other.coeffs.items():
            if i + sb <= prec:
                coeffs[i + sb] = coeffs.get(i + sb, Fraction(0)) + c
        return QSeries(off, prec, coeffs)

    def __neg__(self) -> "QSeries":
        return QSeries(self.offset24, self.prec,
                       {i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other: "QSeries") -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, s) -> "QSeries":
        s = Fraction(s)
        if s == 0:
            return QSeries.zero(self.prec)
        return QSeries(self.offset24, self.prec,
                       {i: c * s for i, c in self.coeffs.items()})

    def __mul__(self, other: "QSeries") -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        prec = min(self.prec, other.prec)
        if self.is_zero() or other.is_zero():
            return QSeries(self.offset24 + other.offset24, prec, {})
        # clear denominators, convolve integer lists, divide back
        da = 1
        for c in self.coeffs.values():
            da = _lcm(da, c.denominator)
        db = 1
        for c in other.coeffs.values():
            db = _lcm(db, c.denominator)
        la = [0] * (min(self.prec, prec) + 1)
        for i, c in self.coeffs.items():
            if i <= prec:
                la[i] = int(c * da)
        lb = [0] * (min(other.prec, prec) + 1)
        for i, c in other.coeffs.items():
            if i <= prec:
                lb[i] = int(c * db)
        raw = _int_convolve(la, lb, prec + 1)
        d = da * db
        coeffs = {i: Fraction(c, d) for i, c in enumerate(raw) if c}
        return QSeries(self.offset24 + other.offset24, prec, coeffs)

    def pow(self, e: int) -> "QSeries":
        if e < 0:
            return QSeries.one(self.prec).div(self.pow(-e))
        result = QSeries.one(self.prec)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def div(self, other: "QSeries") -> "QSeries":
        """Exact series division; the divisor's leading term must be known
        nonzero."""
        if other.is_zero():
            raise ZeroDivisionError("division by a series with no known "
                                    "nonzero coefficient")
        if 0 not in other.coeffs:
            # normalisation guarantees this only for prec-0 corner cases
            raise ZeroDivisionError("divisor has vanishing leading block")
        prec = min(self.prec, other.prec)
        b0 = other.coeffs[0]
        num = [self[i] for i in range(prec + 1)]
        out: list[Fraction] = []
        # standard long division against the sparse divisor
        bterms = sorted((j, c) for j, c in other.coeffs.items()
                        if 0 < j <= prec)
        for n in range(prec + 1):
            acc = num[n]
            for j, c in bterms:
                if j > n:
                    break
                acc -= c * out[n - j]
            out.append(acc / b0)
        coeffs = {i: c for i, c in enumerate(out) if c}
        return QSeries(self.offset24 - other.offset24, prec, coeffs)

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return self.prec == other.prec
        return (self.offset24 == other.offset24 and self.prec == other.prec
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.offset24, self.prec,
                     tuple(sorted(self.coeffs.items()))))

    def agrees_with(self, other: "QSeries", through: int | None = None) -> bool:
        """Coefficientwise equality over the shared known range.

        ``through`` restricts the comparison to stored indices <= through
        (after aligning offsets).  Series on incompatible grids never agree.
        """
        if self.is_zero() and other.is_zero():
            return True
        try:
            _, sa, sb = self._aligned(other)
        except OffsetError:
            return False
        top = min(self.prec + sa, other.prec + sb)
        if through is not None:
            top = min(top, through)
        for i in range(top + 1):
            a = self[i - sa] if 0 <= i - sa <= self.prec else Fraction(0)
            b = other[i - sb] if 0 <= i - sb <= other.prec else Fraction(0)
            if a != b:
                return False
        return True

    def proportional_to(self, other: "QSeries",
                        through: int | None = None) -> Fraction | None:
        """Exact ratio self = r * other over the shared range, or None."""
        if other.is_zero():
            return None
        d = self.offset24 - other.offset24
        if d % 24 != 0:
            return None
        # self index j lines up with other index j + d/24
        i0 = min(other.coeffs)
        j = i0 - d // 24
        if j < 0 or j > self.prec:
            return None
        r = self[j] / other.coeffs[i0]
        if self.agrees_with(other.scale(r), through=through):
            return r
        return None

    # -- serialization -----------------------------------------------------

    def to_json(self) -> str:
        items = [[i, f"{c.numerator}/{c.denominator}"]
                 for i, c in sorted(self.coeffs.items())]
        return json.dumps({"offset24": self.offset24, "prec": self.prec,
                           "coeffs": items})

    @classmethod
    def from_json(cls, text: str) -> "QSeries":
        obj = json.loads(text)
        coeffs = {int(i): Fraction(s) for i, s in obj["coeffs"]}
        return cls(int(obj["offset24"]), int(obj["prec"]), coeffs)

    def __repr__(self) -> str:
        terms = []
        for i in sorted(self.coeffs)[:6]:
            terms.append(f"{self.coeffs[i]}*q^({self.exponent(i)})")
        body = " + ".join(terms) if terms else "0"
        if len(self.coeffs) > 6:
            body += " + ..."
        return f"QSeries({body}; prec={self.prec})"
