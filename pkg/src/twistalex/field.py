"""Exact arithmetic in Q and in the cyclotomic fields Q(zeta_m).

An element of Q(zeta_m) is stored as its coordinate vector in the power
basis ``1, z, ..., z^(phi(m)-1)`` where ``z = exp(2*pi*i/m)``; every
operation reduces modulo the cyclotomic polynomial ``Phi_m``.

>>> F = cyclotomic_field(4)
>>> z = F.zeta()
>>> (1 + z) * (1 - z)
2
>>> z.inverse() == -z
True
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache

try:  # gmpy2 rationals are an order of magnitude faster than Fraction
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover
    from fractions import Fraction as Rational

from .errors import DescriptorMismatch, SyntaxProblem, ValidationError

__all__ = [
    "FieldKind",
    "FieldDescriptor",
    "FieldElement",
    "RATIONALS",
    "Rational",
    "DivisionByZero",
    "cyclotomic_field",
    "cyclotomic_polynomial",
    "euler_phi",
    "parse_field",
    "parse_element",
]


def euler_phi(m: int) -> int:
    result, n, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def _poly_divexact_int(num, den):
    # exact division of integer polynomials (low-to-high), den monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        out[k] = c
        if c:
            for j, b in enumerate(den):
                num[k + j] -= c * b
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of ``Phi_m``, lowest degree first.

    Uses ``Phi_m = (t^m - 1) / prod(Phi_d for d | m, d < m)``.

    >>> cyclotomic_polynomial(6)
    (1, -1, 1)
    """
    if m < 1:
        raise ValueError("cyclotomic order must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _poly_divexact_int(num, cyclotomic_polynomial(d))
    return tuple(num)


class DivisionByZero(ValidationError, ZeroDivisionError):
    """Inverting the zero element."""


class FieldKind(Enum):
    RATIONALS = "Q"
    CYCLOTOMIC = "cyclo"


@dataclass(frozen=True)
class FieldDescriptor:
    """Which coefficient field we compute in.

    Cyclotomic orders are canonical: never 1 or 2, never 2 mod 4.  Use
    :func:`cyclotomic_field` to build one from an arbitrary order.
    """

    kind: FieldKind
    order: int = 1

    def __post_init__(self):
        if self.kind is FieldKind.RATIONALS:
            if self.order != 1:
                raise ValidationError("the rational field has order 1")
        else:
            if self.order <= 2:
                raise ValidationError(
                    f"cyclotomic order {self.order} is the rational field; use RATIONALS")
            if self.order % 4 == 2:
                raise ValidationError(
                    f"cyclotomic order {self.order} is not canonical; use {self.order // 2}")

    @cached_property
    def degree(self) -> int:
        return euler_phi(self.order)

    @property
    def is_rational(self) -> bool:
        return self.kind is FieldKind.RATIONALS

    def __str__(self):
        return "Q" if self.is_rational else f"cyclo({self.order})"

    def __repr__(self):
        return f"FieldDescriptor({self})"

    # -- element constructors -------------------------------------------

    def zero(self) -> FieldElement:
        return FieldElement._raw(self, _zero_vector(self.degree))

    def one(self) -> FieldElement:
        return self(1)

    def __call__(self, value) -> FieldElement:
        """Coerce an int, rational or element of this field."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise DescriptorMismatch(f"{value.field} element used in {self}")
            return value
        c = [Rational(0)] * self.degree
        c[0] = Rational(value)
        return FieldElement._raw(self, tuple(c))

    def from_coefficients(self, coeffs) -> FieldElement:
        """Element ``sum coeffs[k] * z^k``; any length, reduced mod ``Phi_m``."""
        return FieldElement._raw(self, _reduce(self, [Rational(c) for c in coeffs]))

    def zeta(self) -> FieldElement:
        """The primitive root ``exp(2 pi i / order)`` (1 over Q)."""
        if self.is_rational:
            return self.one()
        return self.from_coefficients([0, 1])

    @property
    def full_order(self) -> int:
        """Order of the group of roots of unity contained in the field."""
        return self.order if self.order % 2 == 0 else 2 * self.order

    def root_of_unity(self, n: int, k: int = 1) -> FieldElement:
        """``exp(2 pi i k / n)``, provided it lies in this field."""
        if n < 1 or self.full_order % n:
            raise ValidationError(f"{n}-th roots of unity do not lie in {self}")
        j = (k * (self.full_order // n)) % self.full_order
        if self.order % 2 == 0:
            return self.from_coefficients(_unit_vector(j))
        # odd order: exp(2 pi i j / 2m) = (-1)^j * z^(j * (m+1)/2)
        m = self.order
        e = (j * ((m + 1) // 2)) % m
        x = self.from_coefficients(_unit_vector(e))
        return -x if j % 2 else x


def _unit_vector(k):
    v = [0] * (k + 1)
    v[k] = 1
    return v


def _zero_vector(n):
    return (Rational(0),) * n


RATIONALS = FieldDescriptor(FieldKind.RATIONALS)


def cyclotomic_field(m: int) -> FieldDescriptor:
    """``Q(zeta_m)`` in canonical form; orders 1 and 2 give ``RATIONALS``."""
    if m < 1:
        raise ValidationError("cyclotomic order must be positive")
    if m % 4 == 2:
        m //= 2
    if m == 1:
        return RATIONALS
    return FieldDescriptor(FieldKind.CYCLOTOMIC, m)


def _reduce(field: FieldDescriptor, c):
    n = field.degree
    if field.is_rational:
        return (sum(c, Rational(0)),)
    m = field.order
    if len(c) > max(m, 2 * n - 1):
        # fold powers of z using z^m = 1 first
        folded = [Rational(0)] * m
        for k, v in enumerate(c):
            folded[k % m] += v
        c = folded
    if len(c) <= n:
        return tuple(c) + _zero_vector(n - len(c))
    table = _power_table(m)
    out = list(c[:n])
    for k in range(n, len(c)):
        v = c[k]
        if v:
            for j, b in enumerate(table[k - n]):
                if b:
                    out[j] += v * b
    return tuple(out)


@lru_cache(maxsize=None)
def _power_table(m: int):
    """Rows ``z^k``, ``k = n .. max(m, 2n-1) - 1``, in the power basis."""
    phi = cyclotomic_polynomial(m)
    n = len(phi) - 1
    rows = []
    cur = [-c for c in phi[:n]]
    for _ in range(n, max(m, 2 * n - 1)):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, phi[:n])]
    return tuple(rows)


class FieldElement:
    """Immutable element of a :class:`FieldDescriptor` field."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: FieldDescriptor, coeffs):
        c = _reduce(field, [Rational(x) for x in coeffs])
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, field, coeffs):
        self = object.__new__(cls)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_hash", None)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise DescriptorMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, (int, type(Rational(0)))) or hasattr(other, "denominator"):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement._raw(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._raw(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement._raw(self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) == 1:
            return FieldElement._raw(self.field, (a[0] * b[0],))
        prod = [Rational(0)] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return FieldElement._raw(self.field, _reduce(self.field, prod))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        """Multiplicative inverse via extended Euclid against ``Phi_m``."""
        if not self:
            raise DivisionByZero("inverse of zero field element")
        if self.field.is_rational:
            return FieldElement._raw(self.field, (1 / self.coeffs[0],))
        phi = [Rational(c) for c in cyclotomic_polynomial(self.field.order)]
        s = _qpoly_inverse_mod(list(self.coeffs), phi)
        return self.field.from_coefficients(s)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> FieldElement:
        """Complex conjugation, induced by ``z -> z^-1``."""
        if self.field.is_rational:
            return self
        m = self.field.order
        c = [Rational(0)] * m
        for k, v in enumerate(self.coeffs):
            c[(-k) % m] += v
        return self.field.from_coefficients(c)

    def __bool__(self):
        return any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coeffs == other.coeffs
        try:
            return self.is_rational() and self.coeffs[0] == Rational(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.field, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self):
        if self.field.is_rational:
            return _rat_str(self.coeffs[0])
        body = ",".join(_rat_str(c) for c in self.coeffs)
        return f"cyclo({self.field.order})[{body}]"

    def __repr__(self):
        if self.field.is_rational:
            return _rat_str(self.coeffs[0])
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
                if mono and c == 1:
                    terms.append(mono)
                elif mono and c == -1:
                    terms.append("-" + mono)
                else:
                    terms.append(_rat_str(c) + ("*" + mono if mono else ""))
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def _rat_str(q) -> str:
    q = Rational(q)
    if q.denominator == 1:
        return str(int(q.numerator))
    return f"{int(q.numerator)}/{int(q.denominator)}"


# -- univariate helpers over Q (low-to-high lists) ----------------------

def _qtrim(p):
    while p and not p[-1]:
        p.pop()
    return p


def _qdivmod(a, b):
    a = _qtrim(list(a))
    b = _qtrim(list(b))
    if len(a) < len(b):
        return [], a
    inv = 1 / b[-1]
    q = [Rational(0)] * (len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        c = a[k + len(b) - 1] * inv
        q[k] = c
        if c:
            for j, y in enumerate(b):
                a[k + j] -= c * y
    return q, _qtrim(a[: len(b) - 1])


def _qmul(a, b):
    if not a or not b:
        return []
    out = [Rational(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _qsub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Rational(0)] * (n - len(a))
    b = list(b) + [Rational(0)] * (n - len(b))
    return _qtrim([x - y for x, y in zip(a, b)])


def _qpoly_inverse_mod(a, f):
    # returns s with s*a = 1 mod f, f irreducible
    r0, r1 = _qtrim(list(f)), _qtrim(list(a))
    s0, s1 = [], [Rational(1)]
    while len(r1) > 1:
        q, r = _qdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _qsub(s0, _qmul(q, s1))
    if not r1:
        raise ZeroDivisionError("element is not invertible")
    c = 1 / r1[0]
    return [x * c for x in s1]


# -- text forms ---------------------------------------------------------

_CYCLO_RE = re.compile(r"^cyclo\((\d+)\)\[(.*)\]$")
_ZETA_RE = re.compile(r"^(-?)zeta\((\d+)\)(?:\^(-?\d+))?$")
_RAT_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_field(text: str) -> FieldDescriptor:
    """``"Q"`` or ``"cyclo(m)"`` (``m`` canonicalized)."""
    s = text.strip()
    if s in ("Q", "QQ", "rationals"):
        return RATIONALS
    m = re.fullmatch(r"cyclo\((\d+)\)", s)
    if not m:
        raise SyntaxProblem(f"bad field descriptor {text!r}")
    return cyclotomic_field(int(m.group(1)))


def _parse_rational(s: str):
    if not _RAT_RE.match(s):
        raise SyntaxProblem(f"bad rational {s!r}")
    try:
        return Rational(s.lstrip("+"))
    except ZeroDivisionError:
        raise SyntaxProblem(f"zero denominator in {s!r}") from None


def parse_element(text: str, field: FieldDescriptor) -> FieldElement:
    """Parse ``p``, ``p/q``, ``cyclo(m)[c0,...]`` or ``zeta(n)^k`` into ``field``.

    A ``cyclo(m)`` literal with non-canonical ``m`` is read in the power
    basis of ``exp(2 pi i/m)`` and mapped into ``field``.
    """
    s = text.strip().replace(" ", "")
    m = _CYCLO_RE.match(s)
    if m:
        order = int(m.group(1))
        parts = [p for p in m.group(2).split(",")] if m.group(2) else []
        coeffs = [_parse_rational(p) for p in parts]
        if order < 1:
            raise SyntaxProblem(f"bad cyclotomic order in {text!r}")
        if cyclotomic_field(order) == field and order == field.order:
            if len(coeffs) != field.degree:
                raise SyntaxProblem(
                    f"{text!r}: expected {field.degree} coefficients for {field}")
            return FieldElement._raw(field, tuple(coeffs))
        z = field.root_of_unity(order)
        total, power = field.zero(), field.one()
        for c in coeffs:
            total = total + power * c
            power = power * z
        return total
    m = _ZETA_RE.match(s)
    if m:
        x = field.root_of_unity(int(m.group(2)), int(m.group(3) or 1))
        return -x if m.group(1) else x
    return field(_parse_rational(s))
