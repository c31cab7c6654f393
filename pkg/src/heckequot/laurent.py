"""Exact one-variable Laurent polynomial arithmetic.

Coefficients are Python ints or Fractions; nothing here ever goes through
floating point.  A polynomial is stored as a dict mapping exponent to a
nonzero coefficient, so ``3*v^-2 + v`` is ``{-2: 3, 1: 1}``.

The bar involution negates exponents.  A polynomial is *balanced* when it
is fixed by bar and *anti-balanced* when bar negates it.  Every polynomial
splits uniquely as balanced + anti-balanced (the split needs halves, hence
Fractions), and the anti-balanced part is divisible by the anti-balanced
generator ``t - t^-1``; `divide_by_generator` performs that division
exactly and refuses inputs where it is not exact.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]


class LaurentError(ValueError):
    pass


class LaurentPoly:
    """Immutable Laurent polynomial with exact coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Mapping[int, Scalar] | None = None):
        d = {}
        if coeffs:
            for e, a in coeffs.items():
                if a:
                    d[int(e)] = a
        object.__setattr__(self, "c", d)

    @classmethod
    def _raw(cls, d: dict[int, Scalar]) -> "LaurentPoly":
        # trusted constructor: d already has no zero entries and is owned
        p = cls.__new__(cls)
        object.__setattr__(p, "c", d)
        return p

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("LaurentPoly is immutable")

    # ---- constructors -------------------------------------------------
    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls._raw({})

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls._raw({0: 1})

    @classmethod
    def const(cls, a: Scalar) -> "LaurentPoly":
        return cls._raw({0: a} if a else {})

    @classmethod
    def monomial(cls, exp: int, coeff: Scalar = 1) -> "LaurentPoly":
        return cls._raw({exp: coeff} if coeff else {})

    @classmethod
    def gen(cls) -> "LaurentPoly":
        """The variable itself."""
        return cls._raw({1: 1})

    # ---- ring operations ----------------------------------------------
    def __add__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        d = dict(self.c)
        for e, a in other.c.items():
            s = d.get(e, 0) + a
            if s:
                d[e] = s
            elif e in d:
                del d[e]
        return LaurentPoly._raw(d)

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        d = dict(self.c)
        for e, a in other.c.items():
            s = d.get(e, 0) - a
            if s:
                d[e] = s
            elif e in d:
                del d[e]
        return LaurentPoly._raw(d)

    def __rsub__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.const(other) - self
        return NotImplemented

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({e: -a for e, a in self.c.items()})

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            d: dict[int, Scalar] = {}
            for e1, a1 in self.c.items():
                for e2, a2 in other.c.items():
                    e = e1 + e2
                    s = d.get(e, 0) + a1 * a2
                    if s:
                        d[e] = s
                    elif e in d:
                        del d[e]
            return LaurentPoly._raw(d)
        if isinstance(other, (int, Fraction)):
            if not other:
                return LaurentPoly._raw({})
            return LaurentPoly._raw({e: a * other for e, a in self.c.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise LaurentError("negative powers are not defined for polynomials")
        out = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shifted(self, k: int, scale: Scalar = 1) -> "LaurentPoly":
        """scale * v^k * self, in one pass."""
        if not scale:
            return LaurentPoly._raw({})
        return LaurentPoly._raw({e + k: a * scale for e, a in self.c.items()})

    # ---- structure ------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            if len(self.c) != len(other.c):
                return False
            for e, a in self.c.items():
                if other.c.get(e) != a:
                    return False
            return True
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset((e, Fraction(a)) for e, a in self.c.items()))

    def coeff(self, exp: int) -> Scalar:
        return self.c.get(exp, 0)

    def degree(self) -> int:
        if not self.c:
            raise LaurentError("zero polynomial has no degree")
        return max(self.c)

    def valuation(self) -> int:
        if not self.c:
            raise LaurentError("zero polynomial has no valuation")
        return min(self.c)

    def bar(self) -> "LaurentPoly":
        """Exponent negation v -> v^-1."""
        return LaurentPoly._raw({-e: a for e, a in self.c.items()})

    def is_balanced(self) -> bool:
        return all(self.c.get(-e) == a for e, a in self.c.items())

    def is_antibalanced(self) -> bool:
        return all(self.c.get(-e, 0) == -a for e, a in self.c.items())

    def max_nonneg_part(self) -> "LaurentPoly":
        """The unique balanced polynomial with the same coefficients in
        degrees >= 0: used when forcing bar-invariant corrections."""
        d: dict[int, Scalar] = {}
        for e, a in self.c.items():
            if e > 0:
                d[e] = a
                d[-e] = a
            elif e == 0:
                d[0] = a
        return LaurentPoly._raw(d)

    def evaluate(self, x: Scalar) -> Scalar:
        """Exact evaluation at a nonzero rational point."""
        x = Fraction(x)
        if x == 0:
            raise LaurentError("cannot evaluate a Laurent polynomial at 0")
        total = Fraction(0)
        for e, a in self.c.items():
            total += Fraction(a) * x**e
        return total

    # ---- text form -------------------------------------------------------
    def to_str(self, var: str = "v") -> str:
        """Render with terms sorted by ascending exponent: ``3*v^-2 + v``."""
        if not self.c:
            return "0"
        parts = []
        for e in sorted(self.c):
            a = self.c[e]
            neg = a < 0
            a = -a if neg else a
            if e == 0:
                body = str(a)
            else:
                head = "" if a == 1 else f"{a}*"
                tail = var if e == 1 else f"{var}^{e}"
                body = head + tail
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_str()})"


_TERM_RE = re.compile(
    r"^(?:(?P<coef>-?\d+(?:/\d+)?)\s*\*?\s*)?"
    r"(?:(?P<var>[A-Za-z])(?:\^(?P<exp>-?\d+))?)?$"
)


def parse(text: str, var: str | None = None) -> LaurentPoly:
    """Inverse of `LaurentPoly.to_str`.  Accepts any single-letter variable
    unless one is pinned with ``var=``."""
    s = text.strip()
    if not s:
        raise LaurentError("empty polynomial text")
    if s == "0":
        return LaurentPoly.zero()
    # protect exponent signs, then split into signed terms
    s = s.replace("^-", "^~")
    s = s.replace("-", "+-").replace("^~", "^-")
    d: dict[int, Scalar] = {}
    for chunk in s.split("+"):
        chunk = chunk.strip()
        if not chunk:
            continue
        sign = 1
        if chunk.startswith("-"):
            sign = -1
            chunk = chunk[1:].strip()
        m = _TERM_RE.match(chunk)
        if not m or (m.group("coef") is None and m.group("var") is None):
            raise LaurentError(f"cannot parse term {chunk!r} in {text!r}")
        if m.group("var") is not None and var is not None and m.group("var") != var:
            raise LaurentError(f"unexpected variable {m.group('var')!r} in {text!r}")
        coef_s = m.group("coef")
        if coef_s is None:
            a: Scalar = 1
        elif "/" in coef_s:
            a = Fraction(coef_s)
        else:
            a = int(coef_s)
        if m.group("var") is None:
            e = 0
        else:
            e = int(m.group("exp")) if m.group("exp") is not None else 1
        cur = d.get(e, 0) + sign * a
        if cur:
            d[e] = cur
        elif e in d:
            del d[e]
    return LaurentPoly._raw(d)


@dataclass(frozen=True)
class BalancedPair:
    """Balanced / anti-balanced decomposition of a Laurent polynomial."""

    balanced: LaurentPoly
    antibalanced: LaurentPoly

    def total(self) -> LaurentPoly:
        return self.balanced + self.antibalanced


def decompose(p: LaurentPoly) -> BalancedPair:
    """Split p = balanced + anti-balanced.  Uses exact halves."""
    half = Fraction(1, 2)
    bal: dict[int, Scalar] = {}
    ant: dict[int, Scalar] = {}
    # both mirror exponents need entries even when only one carries a
    # coefficient in p
    for e in set(p.c) | {-e for e in p.c}:
        a = Fraction(p.c.get(e, 0))
        m = Fraction(p.c.get(-e, 0))
        b = (a + m) * half
        t = (a - m) * half
        if b:
            bal[e] = _tighten(b)
        if t:
            ant[e] = _tighten(t)
    return BalancedPair(LaurentPoly._raw(bal), LaurentPoly._raw(ant))


def _tighten(x: Fraction) -> Scalar:
    return int(x) if x.denominator == 1 else x


def generator() -> LaurentPoly:
    """t - t^-1, the anti-balanced generator."""
    return LaurentPoly._raw({1: 1, -1: -1})


def divide_by_generator(p: LaurentPoly) -> LaurentPoly:
    """Exact division by t - t^-1.

    Defined on the anti-balanced part of the ring, where the division is
    always exact; raises LaurentError when a remainder would appear.
    """
    if not p:
        return LaurentPoly.zero()
    if not p.is_antibalanced():
        raise LaurentError("divide_by_generator needs an anti-balanced input")
    # p = sum_{n>0} a_n (t^n - t^-n) and each (t^n - t^-n) / (t - t^-1)
    # telescopes to t^(n-1) + t^(n-3) + ... + t^(1-n).
    q: dict[int, Scalar] = {}
    for n, a in p.c.items():
        if n <= 0:
            continue
        for e in range(n - 1, -n, -2):
            s = q.get(e, 0) + a
            if s:
                q[e] = s
            elif e in q:
                del q[e]
    return LaurentPoly._raw(q)


ZERO = LaurentPoly.zero()
ONE = LaurentPoly.one()
