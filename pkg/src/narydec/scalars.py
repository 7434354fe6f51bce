"""Exact scalars over the rationals and over prime fields GF(p).

Elements are stored "raw" for speed: :class:`fractions.Fraction` over Q and
plain ``int`` residues in ``[0, p)`` over GF(p).  Both representations are
canonical, so equality is structural.  :class:`Scalar` wraps a raw value
together with its field for the public, type-checked API.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import FieldMismatchError, ScalarFormatError, UnsupportedFieldError

_SCALAR_RE = re.compile(r"^\s*([+-]?)(\d+)(?:/(\d+))?\s*$")


def is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    k = 3
    while k * k <= p:
        if p % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class Field:
    """Base field: the rationals when ``p`` is None, else GF(p)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if isinstance(self.p, bool) or not isinstance(self.p, int):
                raise ValueError(f"field characteristic must be an int, got {self.p!r}")
            if not is_prime(self.p):
                raise ValueError(f"GF({self.p}) is not a prime field")

    @property
    def is_finite(self):
        return self.p is not None

    @property
    def kind(self):
        return "prime-field" if self.p is not None else "rationals"

    @property
    def order(self):
        if self.p is None:
            raise UnsupportedFieldError("the rationals are infinite")
        return self.p

    def __str__(self):
        return "Q" if self.p is None else f"GF({self.p})"

    @property
    def zero(self):
        return 0 if self.p is not None else Fraction(0)

    @property
    def one(self):
        return 1 if self.p is not None else Fraction(1)

    def coerce(self, x):
        """Map an int, Fraction, Scalar or scalar string into this field."""
        if isinstance(x, Scalar):
            if x.field != self:
                raise FieldMismatchError(f"scalar over {x.field} used in {self}")
            return x.value
        if isinstance(x, str):
            return parse_raw(x, self)
        if isinstance(x, bool):
            x = int(x)
        if self.p is None:
            if isinstance(x, (int, Fraction)):
                return Fraction(x)
            raise TypeError(f"cannot coerce {x!r} into Q")
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes in {self}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        raise TypeError(f"cannot coerce {x!r} into {self}")

    # Raw arithmetic.  `reduce` brings the result of integer/Fraction
    # arithmetic back to canonical form.
    def reduce(self, x):
        return x if self.p is None else x % self.p

    def add(self, a, b):
        return self.reduce(a + b)

    def sub(self, a, b):
        return self.reduce(a - b)

    def mul(self, a, b):
        return self.reduce(a * b)

    def neg(self, a):
        return self.reduce(-a)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"division by zero in {self}")
        if self.p is None:
            return 1 / a
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def elements(self):
        """All field elements in ascending residue order (prime fields only)."""
        if self.p is None:
            raise UnsupportedFieldError("cannot enumerate the rationals")
        return list(range(self.p))

    def format(self, a):
        if self.p is None:
            return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return str(a)

    def to_json(self):
        return "Q" if self.p is None else {"GF": self.p}


QQ = Field()


def GF(p):
    return Field(p)


def parse_raw(text, field):
    m = _SCALAR_RE.match(text)
    if m is None:
        raise ScalarFormatError(f"malformed scalar {text!r}")
    sign, num, den = m.groups()
    a = int(num)
    if sign == "-":
        a = -a
    b = int(den) if den is not None else 1
    if field.p is None:
        if b == 0:
            raise ScalarFormatError(f"zero denominator in {text!r}")
        return Fraction(a, b)
    if b % field.p == 0:
        raise ScalarFormatError(f"denominator of {text!r} vanishes in {field}")
    return a * pow(b, -1, field.p) % field.p


@dataclass(frozen=True)
class Scalar:
    field: Field
    value: object

    def __post_init__(self):
        object.__setattr__(self, "value", self.field.coerce(self.value))

    def _check(self, other):
        if not isinstance(other, Scalar):
            other = Scalar(self.field, other)
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        return scalar_op(self, self._check(other), "add")

    def __sub__(self, other):
        return scalar_op(self, self._check(other), "sub")

    def __mul__(self, other):
        return scalar_op(self, self._check(other), "mul")

    def __truediv__(self, other):
        return scalar_op(self, self._check(other), "div")

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return self.field.format(self.value)


_OPS = {"add": Field.add, "sub": Field.sub, "mul": Field.mul, "div": Field.div}


def scalar_op(a, b, op):
    """Exact ``a op b`` for op in {add, sub, mul, div}."""
    if a.field != b.field:
        raise FieldMismatchError(f"cannot combine {a.field} and {b.field}")
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return Scalar(a.field, fn(a.field, a.value, b.value))


def parse_scalar(text, field):
    return Scalar(field, parse_raw(text, field))


def format_scalar(s):
    return s.field.format(s.value)


def enumerate_field(field):
    return [Scalar(field, v) for v in field.elements()]
