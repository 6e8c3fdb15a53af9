"""Exact arithmetic in Q[sqrt d] + (1/pi) Q[sqrt d], its Gaussian extension,
and truncated Laurent series over it."""

from __future__ import annotations

import re
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from math import isqrt

import mpmath

from .errors import (
    BadConstantTerm,
    DivideByZero,
    DivisorNotSupported,
    ParseError,
    PiOverflow,
    RadicandMismatch,
    TruncationExceeded,
)

RADICANDS = (2, 3)
_ZERO = Fraction(0)
_ONE = Fraction(1)


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v.strip())
    return Fraction(v)


class RingElem:
    """a + b*sqrt(d) + (c + e*sqrt(d))/pi with rational coefficients."""

    __slots__ = ("d", "a", "b", "c", "e")

    def __init__(self, a=0, b=0, c=0, e=0, d: int = 2):
        if d not in RADICANDS:
            raise ValueError(f"unsupported radicand {d}")
        self.d = d
        self.a = _frac(a)
        self.b = _frac(b)
        self.c = _frac(c)
        self.e = _frac(e)

    # constructors
    @classmethod
    def rational(cls, q, d: int = 2) -> RingElem:
        return cls(q, 0, 0, 0, d)

    @classmethod
    def sqrt(cls, d: int, coeff=1) -> RingElem:
        return cls(0, coeff, 0, 0, d)

    @classmethod
    def inv_pi(cls, coeff=1, d: int = 2) -> RingElem:
        return cls(0, 0, coeff, 0, d)

    @classmethod
    def coerce(cls, v, d: int = 2) -> RingElem:
        if isinstance(v, RingElem):
            return v
        if isinstance(v, (int, Fraction)):
            return cls(v, 0, 0, 0, d)
        if isinstance(v, str):
            return parse(v)
        return NotImplemented

    # predicates
    @property
    def is_rational(self) -> bool:
        return not (self.b or self.c or self.e)

    @property
    def is_pi_free(self) -> bool:
        return not (self.c or self.e)

    @property
    def pi_degree(self) -> int:
        return 0 if self.is_pi_free else 1

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.e)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def components(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.e)

    def _radicand_with(self, other: RingElem) -> int:
        if self.d == other.d:
            return self.d
        if other.is_rational:
            return self.d
        if self.is_rational:
            return other.d
        raise RadicandMismatch(f"cannot combine sqrt({self.d}) and sqrt({other.d}) values")

    # arithmetic
    def __add__(self, other) -> RingElem:
        other = RingElem.coerce(other, self.d)
        if other is NotImplemented:
            return other
        d = self._radicand_with(other)
        return RingElem(self.a + other.a, self.b + other.b, self.c + other.c, self.e + other.e, d)

    __radd__ = __add__

    def __neg__(self) -> RingElem:
        return RingElem(-self.a, -self.b, -self.c, -self.e, self.d)

    def __pos__(self) -> RingElem:
        return self

    def __sub__(self, other) -> RingElem:
        other = RingElem.coerce(other, self.d)
        if other is NotImplemented:
            return other
        d = self._radicand_with(other)
        return RingElem(self.a - other.a, self.b - other.b, self.c - other.c, self.e - other.e, d)

    def __rsub__(self, other) -> RingElem:
        return (-self) + other

    def __mul__(self, other) -> RingElem:
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return RingElem(self.a * q, self.b * q, self.c * q, self.e * q, self.d)
        other = RingElem.coerce(other, self.d)
        if other is NotImplemented:
            return other
        # scaling by a rational is the common case (unit weights)
        if other.is_rational:
            q = other.a
            return RingElem(self.a * q, self.b * q, self.c * q, self.e * q, self.d)
        if self.is_rational:
            q = self.a
            return RingElem(other.a * q, other.b * q, other.c * q, other.e * q, other.d)
        d = self._radicand_with(other)
        if not self.is_pi_free and not other.is_pi_free:
            raise PiOverflow("product would contain a 1/pi^2 term")
        a1, b1, c1, e1 = self.components()
        a2, b2, c2, e2 = other.components()
        a = a1 * a2 + d * b1 * b2
        b = a1 * b2 + b1 * a2
        c = a1 * c2 + d * b1 * e2 + c1 * a2 + d * e1 * b2
        e = a1 * e2 + b1 * c2 + c1 * b2 + e1 * a2
        return RingElem(a, b, c, e, d)

    __rmul__ = __mul__

    def conj_sqrt(self) -> RingElem:
        """Galois conjugate sqrt(d) -> -sqrt(d)."""
        return RingElem(self.a, -self.b, self.c, -self.e, self.d)

    def inverse(self) -> RingElem:
        if self.is_zero():
            raise DivideByZero("division by zero")
        if not self.is_pi_free:
            raise DivisorNotSupported("divisor has a 1/pi part")
        n = self.a * self.a - self.d * self.b * self.b
        return RingElem(self.a / n, -self.b / n, 0, 0, self.d)

    def __truediv__(self, other) -> RingElem:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivideByZero("division by zero")
            q = Fraction(other)
            return RingElem(self.a / q, self.b / q, self.c / q, self.e / q, self.d)
        other = RingElem.coerce(other, self.d)
        if other is NotImplemented:
            return other
        self._radicand_with(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> RingElem:
        return RingElem.coerce(other, self.d) * self.inverse()

    def __pow__(self, n: int) -> RingElem:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = RingElem(1, 0, 0, 0, self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # comparison
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, str)):
            other = RingElem.coerce(other, self.d)
        if not isinstance(other, RingElem):
            return NotImplemented
        if self.components() != other.components():
            return False
        return self.d == other.d or self.is_rational

    def __hash__(self) -> int:
        if self.is_rational:
            return hash(self.a)
        return hash((self.d,) + self.components())

    def __repr__(self) -> str:
        return f"RingElem({to_text(self)!r})"

    def __str__(self) -> str:
        return to_text(self)

    def __float__(self) -> float:
        return float(self.to_mpf(30))

    def to_mpf(self, dps: int = 30):
        # large coefficients cancel; carry enough digits to survive that
        size = max(abs(q.numerator).bit_length() for q in self.components())
        with mpmath.workdps(dps + 10 + size * 3 // 10):
            s = mpmath.sqrt(self.d)
            val = (mpmath.mpf(self.a.numerator) / self.a.denominator
                   + mpmath.mpf(self.b.numerator) / self.b.denominator * s)
            if not self.is_pi_free:
                val += (mpmath.mpf(self.c.numerator) / self.c.denominator
                        + mpmath.mpf(self.e.numerator) / self.e.denominator * s) / mpmath.pi
            return +val

    def sqrt_exact(self) -> RingElem:
        """Square root inside Q[sqrt d], if it exists."""
        if not self.is_pi_free:
            raise BadConstantTerm("square root of a 1/pi value")
        d = self.d
        if self.b == 0:
            r = _rational_sqrt(self.a)
            if r is not None:
                return RingElem(r, 0, 0, 0, d)
            r = _rational_sqrt(self.a / d)
            if r is not None:
                return RingElem(0, r, 0, 0, d)
            raise BadConstantTerm(f"sqrt({self}) is not in Q[sqrt({d})]")
        disc = _rational_sqrt(self.a * self.a - d * self.b * self.b)
        if disc is not None:
            for p2 in ((self.a + disc) / 2, (self.a - disc) / 2):
                p = _rational_sqrt(p2)
                if p:
                    q = self.b / (2 * p)
                    cand = RingElem(p, q, 0, 0, d)
                    if cand * cand == self:
                        return cand if float(cand) >= 0 else -cand
        raise BadConstantTerm(f"sqrt({self}) is not in Q[sqrt({d})]")


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, m = q.numerator, q.denominator
    rn, rm = isqrt(n), isqrt(m)
    if rn * rn == n and rm * rm == m:
        return Fraction(rn, rm)
    return None


def R(a=0, b=0, c=0, e=0, d: int = 2) -> RingElem:
    return RingElem(a, b, c, e, d)


SQRT2 = RingElem(0, 1, 0, 0, 2)
SQRT3 = RingElem(0, 1, 0, 0, 3)
INV_PI = RingElem(0, 0, 1, 0, 2)


# text rendering and parsing

def _coef_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _terms(x: RingElem) -> list[tuple[int, str]]:
    out = []
    d = x.d
    if x.a:
        out.append((1 if x.a > 0 else -1, _coef_text(abs(x.a))))
    if x.b:
        q = abs(x.b)
        out.append((1 if x.b > 0 else -1, f"sqrt({d})" if q == 1 else f"{_coef_text(q)}*sqrt({d})"))
    if x.c:
        out.append((1 if x.c > 0 else -1, f"{_coef_text(abs(x.c))}/pi"))
    if x.e:
        q = abs(x.e)
        out.append((1 if x.e > 0 else -1, f"sqrt({d})/pi" if q == 1 else f"{_coef_text(q)}*sqrt({d})/pi"))
    return out


def to_text(x: RingElem, compact: bool = False) -> str:
    """Render like ``sqrt(2) - 1``; a positive term leads when there is one."""
    terms = _terms(x)
    if not terms:
        return "0"
    if terms[0][0] < 0:
        for i, (s, _) in enumerate(terms):
            if s > 0:
                terms.insert(0, terms.pop(i))
                break
    plus, minus = ("+", "-") if compact else (" + ", " - ")
    sign, body = terms[0]
    out = [body if sign > 0 else "-" + body]
    for sign, body in terms[1:]:
        out.append((plus if sign > 0 else minus) + body)
    return "".join(out)


_TERM = re.compile(r"^(?:(\d+)(?:/(\d+))?)?(\*?sqrt\((\d+)\))?(/pi)?$")


def parse(text: str) -> RingElem:
    s = text.replace(" ", "").replace("−", "-")
    if not s:
        raise ParseError("empty value")
    pieces = re.findall(r"[+-]?[^+-]+", s)
    if "".join(pieces) != s:
        raise ParseError(f"cannot parse {text!r}")
    comps = [_ZERO] * 4
    d = None
    for piece in pieces:
        sign = -1 if piece[0] == "-" else 1
        body = piece.lstrip("+-")
        m = _TERM.match(body)
        if not m or not body or (m.group(1) is None and m.group(3) is None):
            raise ParseError(f"cannot parse term {piece!r} in {text!r}")
        coef = Fraction(int(m.group(1)), int(m.group(2) or 1)) if m.group(1) else _ONE
        if m.group(3) and m.group(1) and not m.group(3).startswith("*"):
            raise ParseError(f"missing '*' in {piece!r}")
        idx = 0
        if m.group(3):
            dd = int(m.group(4))
            if dd not in RADICANDS:
                raise ParseError(f"unsupported radicand in {piece!r}")
            if d is not None and d != dd:
                raise ParseError(f"mixed radicands in {text!r}")
            d = dd
            idx = 1
        if m.group(5):
            idx += 2
        comps[idx] += sign * coef
    a, b, c, e = comps
    return RingElem(a, b, c, e, d or 2)


def to_json(x: RingElem) -> dict:
    return {
        "radicand": x.d,
        "q": _coef_text(x.a),
        "sqrt": _coef_text(x.b),
        "inv_pi": _coef_text(x.c),
        "sqrt_inv_pi": _coef_text(x.e),
    }


def from_json(obj: dict) -> RingElem:
    try:
        return RingElem(obj.get("q", 0), obj.get("sqrt", 0), obj.get("inv_pi", 0),
                        obj.get("sqrt_inv_pi", 0), int(obj.get("radicand", 2)))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad JSON value {obj!r}") from exc


def ring_to_float(x: RingElem, digits: int = 6) -> str:
    """Decimal string with ``digits`` places, rounded from a guarded evaluation."""
    if digits < 1:
        raise ValueError("digits must be positive")
    if x.is_zero():
        return "0." + "0" * digits
    guard = 2 * digits + 20
    val = x.to_mpf(guard)
    with mpmath.workdps(guard):
        txt = mpmath.nstr(val, guard, strip_zeros=False, min_fixed=-guard, max_fixed=guard)
    q = Decimal(txt).quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN)
    if q == 0:
        q = abs(q)
    return f"{q:.{digits}f}"


class ComplexElem:
    """re + i*im with RingElem parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        # parts are RingElem, or PiPoly when determinants leave the ring
        self.re = re if isinstance(re, (RingElem, PiPoly)) else RingElem.coerce(re)
        self.im = im if isinstance(im, (RingElem, PiPoly)) else RingElem.coerce(im, self.re.d)

    @classmethod
    def coerce(cls, v) -> ComplexElem:
        if isinstance(v, ComplexElem):
            return v
        if isinstance(v, complex):
            if v.real != int(v.real) or v.imag != int(v.imag):
                raise TypeError("only Gaussian integers coerce from complex")
            return cls(int(v.real), int(v.imag))
        return cls(v, 0)

    def __add__(self, other) -> ComplexElem:
        o = ComplexElem.coerce(other)
        return ComplexElem(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> ComplexElem:
        o = ComplexElem.coerce(other)
        return ComplexElem(self.re - o.re, self.im - o.im)

    def __rsub__(self, other) -> ComplexElem:
        return ComplexElem.coerce(other) - self

    def __neg__(self) -> ComplexElem:
        return ComplexElem(-self.re, -self.im)

    def __mul__(self, other) -> ComplexElem:
        if isinstance(other, (int, Fraction, RingElem, PiPoly)):
            return ComplexElem(self.re * other, self.im * other)
        o = ComplexElem.coerce(other)
        re = self.re * o.re - self.im * o.im
        im = self.re * o.im + self.im * o.re
        return ComplexElem(re, im)

    __rmul__ = __mul__

    def conjugate(self) -> ComplexElem:
        return ComplexElem(self.re, -self.im)

    def norm(self) -> RingElem:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other) -> ComplexElem:
        if isinstance(other, (int, Fraction, RingElem)):
            return ComplexElem(self.re / other, self.im / other)
        o = ComplexElem.coerce(other)
        n = o.norm()
        return (self * o.conjugate()) / n

    def __eq__(self, other) -> bool:
        try:
            o = ComplexElem.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"ComplexElem({complex_text(self)!r})"

    def __str__(self) -> str:
        return complex_text(self)



def complex_text(z: ComplexElem, compact: bool = False) -> str:
    if z.im.is_zero():
        return to_text(z.re, compact)
    im = f"i*({to_text(z.im, compact)})"
    if z.re.is_zero():
        return im
    sep = "+" if compact else " + "
    return f"{to_text(z.re, compact)}{sep}{im}"


def det(matrix: list[list]) -> object:
    """Determinant by cofactor-free Gaussian elimination over a field."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(row) for row in matrix]
    result = None
    sign = 1
    for col in range(n):
        piv = None
        for r in range(col, n):
            if not _is_zero(m[r][col]):
                piv = r
                break
        if piv is None:
            return m[0][0] * 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        p = m[col][col]
        result = p if result is None else result * p
        for r in range(col + 1, n):
            if _is_zero(m[r][col]):
                continue
            f = m[r][col] / p
            for c in range(col + 1, n):
                m[r][c] = m[r][c] - f * m[col][c]
    return result if sign > 0 else -result


def det_expand(matrix: list[list]) -> object:
    """Determinant by Laplace expansion; avoids division (needed when entries
    carry 1/pi parts)."""
    n = len(matrix)
    if n == 0:
        return 1
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = None
    for j in range(n):
        if _is_zero(matrix[0][j]):
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * det_expand(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else matrix[0][0] * 0


def _is_zero(v) -> bool:
    if hasattr(v, "is_zero"):
        return v.is_zero()
    return v == 0


# truncated Laurent series

class Series:
    """sum_{k >= low} c_k z^k, known for k < order."""

    __slots__ = ("low", "coeffs", "order", "d")

    def __init__(self, coeffs, low: int = 0, order: int | None = None, d: int = 2):
        cs = [RingElem.coerce(c, d) for c in coeffs]
        for c in cs:
            if not c.is_rational:
                d = c.d
                break
        self.d = d
        self.low = low
        self.order = low + len(cs) if order is None else order
        n = self.order - low
        if n < 0:
            n = 0
        if len(cs) < n:
            cs = cs + [RingElem(0, d=d)] * (n - len(cs))
        self.coeffs = cs[:n]

    @classmethod
    def const(cls, c, order: int, d: int = 2) -> Series:
        return cls([c], 0, order, d)

    @classmethod
    def monomial(cls, k: int, order: int, coeff=1, d: int = 2) -> Series:
        if k >= order:
            return cls([], order, order, d)
        return cls([coeff], k, order, d)

    def __getitem__(self, k: int) -> RingElem:
        if k >= self.order:
            raise TruncationExceeded(f"coefficient z^{k} requested, series known below z^{self.order}")
        if k < self.low:
            return RingElem(0, d=self.d)
        return self.coeffs[k - self.low]

    coefficient = __getitem__

    def __len__(self) -> int:
        return len(self.coeffs)

    def items(self):
        for i, c in enumerate(self.coeffs):
            yield self.low + i, c

    def _zero(self) -> RingElem:
        return RingElem(0, d=self.d)

    def truncate(self, order: int) -> Series:
        order = min(order, self.order)
        return Series(self.coeffs[: max(order - self.low, 0)], self.low, order, self.d)

    def __add__(self, other) -> Series:
        if not isinstance(other, Series):
            other = Series.const(other, self.order, self.d)
        low = min(self.low, other.low)
        order = min(self.order, other.order)
        return Series([self[k] + other[k] for k in range(low, order)], low, order, self.d)

    __radd__ = __add__

    def __neg__(self) -> Series:
        return Series([-c for c in self.coeffs], self.low, self.order, self.d)

    def __sub__(self, other) -> Series:
        if not isinstance(other, Series):
            other = Series.const(other, self.order, self.d)
        return self + (-other)

    def __rsub__(self, other) -> Series:
        return (-self) + other

    def shift(self, k: int) -> Series:
        """Multiply by z^k."""
        return Series(self.coeffs, self.low + k, self.order + k, self.d)

    def scale(self, c) -> Series:
        return Series([x * c for x in self.coeffs], self.low, self.order, self.d)

    def __mul__(self, other) -> Series:
        if not isinstance(other, Series):
            return self.scale(other)
        low = self.low + other.low
        order = min(self.order + other.low, other.order + self.low)
        n = order - low
        out = [None] * max(n, 0)
        a, b = self.coeffs, other.coeffs
        for i in range(min(len(a), n)):
            ai = a[i]
            if ai.is_zero():
                continue
            for j in range(min(len(b), n - i)):
                bj = b[j]
                if bj.is_zero():
                    continue
                t = ai * bj
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        zero = RingElem(0, d=self.d)
        return Series([c if c is not None else zero for c in out], low, order, self.d)

    __rmul__ = __mul__

    def valuation(self) -> int:
        for k, c in self.items():
            if not c.is_zero():
                return k
        raise BadConstantTerm("series is zero to known order")

    def normalized(self) -> Series:
        v = self.valuation()
        return Series(self.coeffs[v - self.low:], v, self.order, self.d)

    def reciprocal(self) -> Series:
        s = self.normalized()
        c0 = s.coeffs[0]
        inv0 = c0.inverse()
        n = s.order - s.low
        out = [inv0]
        for k in range(1, n):
            acc = None
            for j in range(1, k + 1):
                if j < len(s.coeffs) and not s.coeffs[j].is_zero():
                    t = s.coeffs[j] * out[k - j]
                    acc = t if acc is None else acc + t
            out.append(-(acc * inv0) if acc is not None else RingElem(0, d=self.d))
        return Series(out, -s.low, n - s.low, self.d)

    def __truediv__(self, other) -> Series:
        if not isinstance(other, Series):
            return Series([x / other for x in self.coeffs], self.low, self.order, self.d)
        return self * other.reciprocal()

    def power(self, alpha: Fraction) -> Series:
        """self**alpha for a series with nonzero constant term at valuation 0.
        Uses the recurrence k c0 b_k = sum_j (alpha j - (k - j)) c_j b_{k-j}."""
        alpha = Fraction(alpha)
        s = self.normalized()
        if s.low != 0:
            raise BadConstantTerm("fractional power needs valuation 0")
        c0 = s.coeffs[0]
        if alpha.denominator == 1:
            b0 = c0 ** int(alpha)
        elif alpha.denominator == 2:
            r = c0.sqrt_exact()
            b0 = r ** int(alpha.numerator)
        else:
            raise BadConstantTerm("only integer and half-integer powers")
        inv0 = c0.inverse()
        n = s.order
        out = [b0]
        for k in range(1, n):
            acc = None
            for j in range(1, min(k, len(s.coeffs) - 1) + 1):
                cj = s.coeffs[j]
                if cj.is_zero():
                    continue
                t = cj * out[k - j] * (alpha * j - (k - j))
                acc = t if acc is None else acc + t
            out.append(acc * inv0 / k if acc is not None else RingElem(0, d=self.d))
        return Series(out, 0, n, self.d)

    def sqrt(self) -> Series:
        return self.power(Fraction(1, 2))

    def sqrt_inv(self) -> Series:
        return self.power(Fraction(-1, 2))

    def derivative(self) -> Series:
        return Series([c * k for k, c in self.items()], self.low - 1, self.order - 1, self.d)

    def integrate(self) -> Series:
        """Term-wise antiderivative with zero constant."""
        out = []
        for k, c in self.items():
            if k == -1:
                if not c.is_zero():
                    raise ValueError("cannot integrate z^-1")
                out.append(RingElem(0, d=self.d))
            else:
                out.append(c / (k + 1))
        return Series(out, self.low + 1, self.order + 1, self.d)

    def compose(self, inner: Series) -> Series:
        """self(inner) for inner with zero constant term; self a power series."""
        if self.low < 0:
            raise ValueError("outer series must be a power series")
        v = inner.valuation() if any(not c.is_zero() for c in inner.coeffs) else inner.order
        if v < 1:
            raise ValueError("inner series must have zero constant term")
        order = min(inner.order, self.order * v)
        result = Series([], 0, order, self.d)
        term = Series.const(1, order, self.d)
        for k in range(0, self.order):
            if k * v >= order:
                break
            ck = self[k]
            if not ck.is_zero():
                result = result + term.scale(ck)
            term = (term * inner).truncate(order)
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        order = min(self.order, other.order)
        low = min(self.low, other.low)
        return all(self[k] == other[k] for k in range(low, order))

    def __repr__(self) -> str:
        terms = [f"({to_text(c)})*z^{k}" for k, c in self.items() if not c.is_zero()]
        return "Series(" + " + ".join(terms) + f" + O(z^{self.order}))"


def series_sqrt_inv(base: Series, n: int) -> Series:
    """S with S^2 * base = 1 through z^(n-1)."""
    return base.truncate(n).sqrt_inv().truncate(n)


def poly(coeffs, order: int, d: int = 2, low: int = 0) -> Series:
    """An exact polynomial viewed as a series known to ``order``."""
    cs = list(coeffs)[: max(order - low, 0)]
    return Series(cs, low, order, d)


class PiPoly:
    """sum_k c_k / pi^k with pi-free RingElem coefficients.

    Determinants of kernels with 1/pi entries leave the graded ring; this is
    the exact home for those results."""

    __slots__ = ("coeffs", "d")

    def __init__(self, coeffs, d: int = 2):
        cs = [RingElem.coerce(c, d) for c in coeffs]
        for c in cs:
            if not c.is_pi_free:
                raise ValueError("PiPoly coefficients must be pi-free")
            if not c.is_rational:
                d = c.d
        while len(cs) > 1 and cs[-1].is_zero():
            cs.pop()
        self.coeffs = cs or [RingElem(0, d=d)]
        self.d = d

    @classmethod
    def coerce(cls, v) -> PiPoly:
        if isinstance(v, PiPoly):
            return v
        r = RingElem.coerce(v)
        return cls([RingElem(r.a, r.b, 0, 0, r.d), RingElem(r.c, r.e, 0, 0, r.d)], r.d)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def to_ring(self) -> RingElem:
        if self.degree > 1:
            raise PiOverflow("value has 1/pi^2 terms")
        c0 = self.coeffs[0]
        c1 = self.coeffs[1] if self.degree == 1 else RingElem(0, d=self.d)
        d = c0.d if not c0.is_rational else c1.d
        return RingElem(c0.a, c0.b, c1.a, c1.b, d)

    def simplify(self):
        return self.to_ring() if self.degree <= 1 else self

    def __add__(self, other) -> PiPoly:
        o = PiPoly.coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        z = RingElem(0, d=self.d)
        return PiPoly([(self.coeffs[k] if k < len(self.coeffs) else z)
                       + (o.coeffs[k] if k < len(o.coeffs) else z) for k in range(n)], self.d)

    __radd__ = __add__

    def __neg__(self) -> PiPoly:
        return PiPoly([-c for c in self.coeffs], self.d)

    def __sub__(self, other) -> PiPoly:
        return self + (-PiPoly.coerce(other))

    def __rsub__(self, other) -> PiPoly:
        return PiPoly.coerce(other) - self

    def __mul__(self, other) -> PiPoly:
        o = PiPoly.coerce(other)
        out = [RingElem(0, d=self.d)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return PiPoly(out, self.d)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other) -> bool:
        try:
            o = PiPoly.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return (self - o).is_zero()

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs))

    def to_mpf(self, dps: int = 30):
        # large coefficients cancel; carry enough digits to survive that
        size = max(abs(q.numerator).bit_length() for c in self.coeffs for q in c.components())
        with mpmath.workdps(dps + 10 + size * 3 // 10):
            ip = 1 / mpmath.pi
            return +sum(c.to_mpf(dps) * ip ** k for k, c in enumerate(self.coeffs))

    def __float__(self) -> float:
        return float(self.to_mpf(30))

    def __str__(self) -> str:
        if self.degree <= 1:
            return to_text(self.to_ring())
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            t = to_text(c)
            unit = "" if k == 0 else ("/pi" if k == 1 else f"/pi^{k}")
            parts.append(t if k == 0 else f"({t}){unit}")
        return " + ".join(parts) or "0"

    __repr__ = __str__


I = ComplexElem(0, 1)
