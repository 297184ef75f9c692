"""Laurent polynomials ``F[t, t^-1]`` over an exact field.

Units of the ring are the monomials ``c*t^k`` with ``c != 0``.  Every
nonzero polynomial has a canonical associate: shift so the lowest
exponent is 0, then divide by the leading coefficient.  Alexander
polynomials are only defined up to units, so :func:`normalize` is how
they get compared.
"""

from __future__ import annotations

from .errors import DescriptorMismatch, SyntaxProblem, ValidationError
from .field import RATIONALS, FieldDescriptor, FieldElement, parse_element

__all__ = [
    "LaurentPolynomial",
    "EvaluateAtZero",
    "DivisorZero",
    "ZeroInput",
    "normalize",
    "is_canonical",
    "gcd",
    "xgcd",
    "normalizing_unit",
    "divides",
    "strip_roots",
    "roots_contained",
    "parse_laurent",
]


class EvaluateAtZero(ValidationError):
    pass


class DivisorZero(ValidationError, ZeroDivisionError):
    pass


class ZeroInput(ValidationError):
    pass


def _trim(field, coeffs, low):
    """Drop zero coefficients at both ends; returns (low, tuple)."""
    lo, hi = 0, len(coeffs)
    while lo < hi and not coeffs[lo]:
        lo += 1
    while hi > lo and not coeffs[hi - 1]:
        hi -= 1
    if lo == hi:
        return 0, ()
    return low + lo, tuple(coeffs[lo:hi])


class LaurentPolynomial:
    """Immutable ``sum c_k t^k``, stored densely from the lowest exponent.

    >>> from twistalex.field import RATIONALS
    >>> t = LaurentPolynomial.t(RATIONALS)
    >>> (t - 1) * (t**2 + t + 1)
    -1 + 1*t^3
    """

    __slots__ = ("field", "low", "coeffs", "_hash")

    def __init__(self, field: FieldDescriptor, coeffs=(), low: int = 0):
        cs = [field(c) for c in coeffs]
        lo, cs = _trim(field, cs, low)
        self._set(field, lo, cs)

    def _set(self, field, low, coeffs):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _make(cls, field, coeffs, low=0):
        self = object.__new__(cls)
        lo, cs = _trim(field, coeffs, low)
        self._set(field, lo, cs)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPolynomial is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, field):
        return cls._make(field, ())

    @classmethod
    def one(cls, field):
        return cls._make(field, (field.one(),))

    @classmethod
    def constant(cls, field, c):
        return cls._make(field, (field(c),))

    @classmethod
    def monomial(cls, field, c, k: int):
        return cls._make(field, (field(c),), k)

    @classmethod
    def t(cls, field):
        return cls.monomial(field, 1, 1)

    @classmethod
    def from_terms(cls, field, terms: dict):
        """Build from an ``{exponent: coefficient}`` mapping."""
        if not terms:
            return cls.zero(field)
        lo, hi = min(terms), max(terms)
        cs = [field.zero()] * (hi - lo + 1)
        for k, c in terms.items():
            cs[k - lo] = cs[k - lo] + field(c)
        return cls._make(field, cs, lo)

    # -- inspection -----------------------------------------------------

    def terms(self) -> dict:
        return {self.low + i: c for i, c in enumerate(self.coeffs) if c}

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    def span(self) -> int:
        """Degree span ``max exponent - min exponent``; -1 for zero."""
        return len(self.coeffs) - 1

    def is_unit(self) -> bool:
        return len(self.coeffs) == 1

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.low == 0 and self.coeffs[0].is_one()

    def leading(self) -> FieldElement:
        return self.coeffs[-1]

    def coefficient(self, k: int) -> FieldElement:
        i = k - self.low
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero()

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LaurentPolynomial):
            if other.field != self.field:
                raise DescriptorMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, FieldElement) or isinstance(other, int) or hasattr(other, "denominator"):
            return LaurentPolynomial.constant(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        lo = min(self.low, other.low)
        hi = max(self.high, other.high)
        zero = self.field.zero()
        out = [zero] * (hi - lo + 1)
        for i, c in enumerate(self.coeffs):
            out[self.low - lo + i] = c
        off = other.low - lo
        for i, c in enumerate(other.coeffs):
            out[off + i] = out[off + i] + c
        return LaurentPolynomial._make(self.field, out, lo)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial._make(self.field, [-c for c in self.coeffs], self.low)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return LaurentPolynomial.zero(self.field)
        if len(b) == 1:
            c = b[0]
            return LaurentPolynomial._make(self.field, [x * c for x in a], self.low + other.low)
        if len(a) == 1:
            c = a[0]
            return LaurentPolynomial._make(self.field, [c * y for y in b], self.low + other.low)
        out = _pmul(self.field, a, b)
        return LaurentPolynomial._make(self.field, out, self.low + other.low)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_unit():
                raise ValidationError("only units have negative powers")
            return LaurentPolynomial.monomial(self.field, self.coeffs[0] ** k, self.low * k)
        result, base = LaurentPolynomial.one(self.field), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> LaurentPolynomial:
        """Multiply by ``t^k``."""
        return LaurentPolynomial._make(self.field, self.coeffs, self.low + k)

    def scale(self, c) -> LaurentPolynomial:
        c = self.field(c)
        return LaurentPolynomial._make(self.field, [x * c for x in self.coeffs], self.low)

    def divmod(self, other: LaurentPolynomial):
        """Euclidean division with respect to the degree span.

        Returns ``(q, r)`` with ``self = q*other + r`` and
        ``r.span() < other.span()``.
        """
        other = self._coerce(other)
        if not other.coeffs:
            raise DivisorZero("division by the zero polynomial")
        if not self.coeffs:
            return self, self
        q, r = _pdivmod(self.field, self.coeffs, other.coeffs)
        return (LaurentPolynomial._make(self.field, q, self.low - other.low),
                LaurentPolynomial._make(self.field, r, self.low))

    def __floordiv__(self, other):
        """Exact division; raises ``ArithmeticError`` if ``other`` does not divide."""
        q, r = self.divmod(other)
        if r.coeffs:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def evaluate(self, point) -> FieldElement:
        """Substitute ``t := point`` (a nonzero field element)."""
        x = self.field(point)
        if not x:
            raise EvaluateAtZero("cannot evaluate a Laurent polynomial at 0")
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc * x ** self.low if self.low else acc

    def canonical(self) -> LaurentPolynomial:
        return normalize(self)

    # -- comparison / display -------------------------------------------

    def __eq__(self, other):
        if isinstance(other, LaurentPolynomial):
            return (self.field == other.field and self.low == other.low
                    and self.coeffs == other.coeffs)
        try:
            other = self._coerce(other)
        except DescriptorMismatch:
            return False
        if other is NotImplemented:
            return other
        return self == other

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.field, self.low, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            k = self.low + i
            if c.is_rational():
                q = c.coeffs[0]
                neg = q < 0
                body = str(RATIONALS(-q) if neg else RATIONALS(q))
            else:
                neg, body = False, str(c)
            if k:
                body += f"*t^{k}"
            if not parts:
                parts.append(("-" + body) if neg else body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    __repr__ = __str__

    def coefficient_strings(self) -> list:
        """Coefficients from the lowest exponent upward, as field strings."""
        return [str(c) for c in self.coeffs]


def _pmul(field, a, b):
    zero = field.zero()
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
    return out


def _pdivmod(field, a, b):
    """Polynomial long division on coefficient sequences (lowest first)."""
    a = list(a)
    nb = len(b)
    if len(a) < nb:
        return [], a
    inv = b[-1].inverse()
    q = [field.zero()] * (len(a) - nb + 1)
    monic = b[-1].is_one()
    for k in range(len(q) - 1, -1, -1):
        c = a[k + nb - 1]
        if not c:
            continue
        if not monic:
            c = c * inv
        q[k] = c
        for j in range(nb - 1):
            y = b[j]
            if y:
                a[k + j] = a[k + j] - c * y
        a[k + nb - 1] = field.zero()
    return q, a[: nb - 1]


def _monic(field, p):
    inv = p[-1].inverse()
    return [c * inv for c in p]


def _strip(p):
    lo = 0
    while lo < len(p) and not p[lo]:
        lo += 1
    hi = len(p)
    while hi > lo and not p[hi - 1]:
        hi -= 1
    return list(p[lo:hi])


def normalize(p: LaurentPolynomial) -> LaurentPolynomial:
    """Canonical associate: lowest exponent 0, leading coefficient 1."""
    if not p.coeffs:
        return p
    if p.low == 0 and p.coeffs[-1].is_one():
        return p
    return LaurentPolynomial._make(p.field, _monic(p.field, p.coeffs), 0)


def is_canonical(p: LaurentPolynomial) -> bool:
    return not p.coeffs or (p.low == 0 and p.coeffs[-1].is_one())


def gcd(p: LaurentPolynomial, q: LaurentPolynomial) -> LaurentPolynomial:
    """Canonical generator of the ideal ``(p, q)``; ``gcd(0, 0) = 0``."""
    if p.field != q.field:
        raise DescriptorMismatch(f"{p.field} vs {q.field}")
    field = p.field
    a, b = list(p.coeffs), list(q.coeffs)
    if not a:
        return normalize(q)
    if not b:
        return normalize(p)
    a, b = _monic(field, a), _monic(field, b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return LaurentPolynomial.one(field)
        _, r = _pdivmod(field, a, b)
        r = _strip(r)
        a, b = b, (_monic(field, r) if r else r)
    return LaurentPolynomial._make(field, a, 0)


def normalizing_unit(p: LaurentPolynomial) -> LaurentPolynomial:
    """The unit ``u`` with ``u*p == normalize(p)`` (``p`` nonzero)."""
    if not p.coeffs:
        raise ZeroInput("the zero polynomial has no canonical associate")
    return LaurentPolynomial.monomial(p.field, p.coeffs[-1].inverse(), -p.low)


def xgcd(p: LaurentPolynomial, q: LaurentPolynomial):
    """Extended gcd: ``(g, s, u)`` with ``s*p + u*q == g == gcd(p, q)``.

    Remainders are kept monic, which keeps the Bezout coefficients from
    blowing up over the rationals.
    """
    if p.field != q.field:
        raise DescriptorMismatch(f"{p.field} vs {q.field}")
    field = p.field
    zero, one = LaurentPolynomial.zero(field), LaurentPolynomial.one(field)
    if not p.coeffs and not q.coeffs:
        return zero, zero, zero
    r0, s0, u0 = p, one, zero
    r1, s1, u1 = q, zero, one
    if not r0.coeffs:
        r0, s0, u0, r1, s1, u1 = r1, s1, u1, r0, s0, u0
    while r1.coeffs:
        c = normalizing_unit(r1)
        r1, s1, u1 = r1 * c, s1 * c, u1 * c
        quo, rem = r0.divmod(r1)
        r0, s0, u0, r1, s1, u1 = r1, s1, u1, rem, s0 - quo * s1, u0 - quo * u1
    c = normalizing_unit(r0)
    return r0 * c, s0 * c, u0 * c


def divides(p: LaurentPolynomial, q: LaurentPolynomial) -> bool:
    """True iff ``q = p*r`` for a Laurent polynomial ``r``."""
    if not p.coeffs:
        raise DivisorZero("divisibility by the zero polynomial")
    if not q.coeffs:
        return True
    return not q.divmod(p)[1].coeffs


def strip_roots(p: LaurentPolynomial, q: LaurentPolynomial) -> LaurentPolynomial:
    """Divide out of ``p`` every irreducible factor it shares with ``q``.

    The result is canonical; it is 1 exactly when every root of ``p`` is
    a root of ``q``.  No factorization is performed.
    """
    if not p.coeffs or not q.coeffs:
        raise ZeroInput("root containment needs nonzero polynomials")
    residue = normalize(p)
    while True:
        g = gcd(residue, q)
        if g.is_one():
            return residue
        residue = residue // g


def roots_contained(p: LaurentPolynomial, q: LaurentPolynomial) -> bool:
    return strip_roots(p, q).is_one()


def parse_laurent(text: str, field: FieldDescriptor = RATIONALS) -> LaurentPolynomial:
    """Parse the textual form produced by ``str(LaurentPolynomial)``.

    Also accepts implicit coefficients and exponents, e.g. ``"t^2 - 2*t + 1"``
    or ``"3*t^-1"``.
    """
    s = text
    n = len(s)
    pos = 0
    terms: dict = {}

    def skip(i):
        while i < n and s[i].isspace():
            i += 1
        return i

    def fail(msg, i):
        raise SyntaxProblem(f"{msg} in polynomial {text!r}", 1, i + 1)

    pos = skip(pos)
    if pos == n:
        fail("empty input", pos)
    first = True
    while pos < n:
        sign = 1
        if s[pos] in "+-":
            sign = -1 if s[pos] == "-" else 1
            pos = skip(pos + 1)
        elif not first:
            fail("expected '+' or '-'", pos)
        first = False
        coef = None
        start = pos
        if s.startswith("cyclo(", pos):
            end = s.find("]", pos)
            if end < 0:
                fail("unterminated cyclotomic literal", pos)
            coef = parse_element(s[pos:end + 1], field)
            pos = end + 1
        elif s.startswith("zeta(", pos):
            end = s.find(")", pos) + 1
            if end == 0:
                fail("unterminated zeta literal", pos)
            if end < n and s[end] == "^":
                end += 1
                if end < n and s[end] == "-":
                    end += 1
                while end < n and s[end].isdigit():
                    end += 1
            coef = parse_element(s[pos:end], field)
            pos = end
        elif pos < n and s[pos].isdigit():
            end = pos
            while end < n and (s[end].isdigit() or s[end] == "/"):
                end += 1
            coef = parse_element(s[pos:end], field)
            pos = end
        pos = skip(pos)
        exponent = 0
        has_t = False
        if pos < n and s[pos] == "*":
            if coef is None:
                fail("dangling '*'", pos)
            pos = skip(pos + 1)
            if pos >= n or s[pos] != "t":
                fail("expected 't' after '*'", pos)
        if pos < n and s[pos] == "t":
            has_t = True
            pos += 1
            exponent = 1
            if pos < n and s[pos] == "^":
                pos += 1
                end = pos
                if end < n and s[end] in "+-":
                    end += 1
                while end < n and s[end].isdigit():
                    end += 1
                if end == pos or not s[pos:end].lstrip("+-"):
                    fail("bad exponent", pos)
                exponent = int(s[pos:end])
                pos = end
        if coef is None and not has_t:
            fail("expected a term", start)
        c = field.one() if coef is None else coef
        if sign < 0:
            c = -c
        terms[exponent] = terms.get(exponent, field.zero()) + c
        pos = skip(pos)
    return LaurentPolynomial.from_terms(field, terms)
