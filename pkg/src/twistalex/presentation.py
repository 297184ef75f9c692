"""Free-group words, Fox calculus and finite presentations.

A letter is a pair ``(generator_index, sign)`` with ``sign`` in ``{1, -1}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import IndexOutOfRange, SyntaxProblem, ValidationError

__all__ = [
    "Word",
    "FreeRingElement",
    "Presentation",
    "UnknownGenerator",
    "DuplicateGenerator",
    "DTooSmall",
    "NTooSmall",
    "fox_derivative",
    "fox_jacobian",
    "hopf_link",
    "a_singularity_link",
    "free_group",
    "parse_presentation",
    "render_presentation",
]


class UnknownGenerator(ValidationError):
    def __init__(self, name, line=None, column=None):
        self.name = name
        self.line, self.column = line, column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"unknown generator {name!r}{where}")


class DuplicateGenerator(ValidationError):
    def __init__(self, name, line=None, column=None):
        self.name = name
        self.line, self.column = line, column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"duplicate generator {name!r}{where}")


def _reduce(letters):
    out = []
    for g, s in letters:
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((g, s))
    return tuple(out)


class Word:
    """Freely reduced word in a free group.

    >>> x0, x1 = Word.generator(0), Word.generator(1)
    >>> x0 * x1 * x1.inverse()
    Word(x0)
    """

    __slots__ = ("letters", "_hash")

    def __init__(self, letters=()):
        for g, s in letters:
            if g < 0 or s not in (1, -1):
                raise ValidationError(f"bad letter {(g, s)!r}")
        object.__setattr__(self, "letters", _reduce(letters))
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, letters):
        self = object.__new__(cls)
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "_hash", None)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @classmethod
    def identity(cls):
        return cls._raw(())

    @classmethod
    def generator(cls, i: int, power: int = 1):
        s = 1 if power > 0 else -1
        return cls._raw(((i, s),) * abs(power))

    def __mul__(self, other: Word) -> Word:
        if not isinstance(other, Word):
            return NotImplemented
        a, b = self.letters, other.letters
        k = 0
        while k < len(a) and k < len(b) and a[-1 - k][0] == b[k][0] and a[-1 - k][1] == -b[k][1]:
            k += 1
        return Word._raw(a[: len(a) - k] + b[k:])

    def inverse(self) -> Word:
        return Word._raw(tuple((g, -s) for g, s in reversed(self.letters)))

    def __pow__(self, n: int) -> Word:
        base = self if n >= 0 else self.inverse()
        out = Word.identity()
        for _ in range(abs(n)):
            out = out * base
        return out

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=-1)

    def exponent_sum(self, values) -> int:
        """Value of the abelian map sending generator ``i`` to ``values[i]``."""
        return sum(s * values[g] for g, s in self.letters)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __lt__(self, other):
        return (len(self.letters), self.letters) < (len(other.letters), other.letters)

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.letters)
            object.__setattr__(self, "_hash", h)
        return h

    def render(self, names=None) -> str:
        if not self.letters:
            return "1"
        parts = []
        for g, s in self.letters:
            name = names[g] if names is not None else f"x{g}"
            parts.append(name if s > 0 else f"{name}^-1")
        return " ".join(parts)

    def __repr__(self):
        return f"Word({self.render()})"


class FreeRingElement:
    """Element of the integral group ring of a free group."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for w, c in (terms or {}).items():
            if c:
                clean[w] = clean.get(w, 0) + c
        object.__setattr__(self, "terms", {w: c for w, c in clean.items() if c})

    def __setattr__(self, name, value):
        raise AttributeError("FreeRingElement is immutable")

    @classmethod
    def of(cls, word: Word, coefficient: int = 1):
        return cls({word: coefficient})

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return FreeRingElement(out)

    def __neg__(self):
        return FreeRingElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Word):
            other = FreeRingElement.of(other)
        if isinstance(other, int):
            return FreeRingElement({w: c * other for w, c in self.terms.items()})
        out = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u * v
                out[w] = out.get(w, 0) + a * b
        return FreeRingElement(out)

    def __rmul__(self, other):
        if isinstance(other, Word):
            return FreeRingElement.of(other) * self
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        return isinstance(other, FreeRingElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def augmentation(self) -> int:
        return sum(self.terms.values())

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms):
            c = self.terms[w]
            parts.append(f"{c}*({w.render()})")
        return " + ".join(parts)


def fox_derivative(w: Word, generator: int, ngens: int | None = None) -> FreeRingElement:
    """``d w / d x_generator`` in one left-to-right pass.

    Each letter ``x`` contributes ``+prefix`` and each ``x^-1`` contributes
    ``-prefix * x^-1``, where ``prefix`` is the word read so far.
    """
    limit = ngens
    if generator < 0 or (limit is not None and generator >= limit):
        raise IndexOutOfRange(f"generator index {generator} out of range")
    if limit is not None and w.max_generator() >= limit:
        raise IndexOutOfRange(f"word uses a generator beyond {limit - 1}")
    out = {}
    prefix = []
    for g, s in w.letters:
        if s > 0 and g == generator:
            key = Word._raw(tuple(prefix))
            out[key] = out.get(key, 0) + 1
        if prefix and prefix[-1] == (g, -s):
            prefix.pop()
        else:
            prefix.append((g, s))
        if s < 0 and g == generator:
            key = Word._raw(tuple(prefix))
            out[key] = out.get(key, 0) - 1
    return FreeRingElement(out)


def fox_jacobian(presentation: Presentation):
    """``J[j][i] = d r_j / d x_i`` (relators by row)."""
    g = presentation.num_generators
    return [[fox_derivative(r, i, g) for i in range(g)] for r in presentation.relators]


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Presentation:
    generator_names: tuple
    relators: tuple

    def __post_init__(self):
        names = tuple(self.generator_names)
        seen = set()
        for name in names:
            if not isinstance(name, str) or not _IDENT.match(name):
                raise ValidationError(f"bad generator name {name!r}")
            if name in seen:
                raise DuplicateGenerator(name)
            seen.add(name)
        rels = []
        for r in self.relators:
            r = r if isinstance(r, Word) else Word(r)
            if r.max_generator() >= len(names):
                raise ValidationError("relator uses an undeclared generator")
            rels.append(Word(r.letters))
        object.__setattr__(self, "generator_names", names)
        object.__setattr__(self, "relators", tuple(rels))

    @property
    def num_generators(self) -> int:
        return len(self.generator_names)

    @property
    def num_relators(self) -> int:
        return len(self.relators)

    def euler_characteristic(self) -> int:
        """Of the presentation 2-complex: ``1 - g + r``."""
        return 1 - self.num_generators + self.num_relators

    def index(self, name: str) -> int:
        try:
            return self.generator_names.index(name)
        except ValueError:
            raise UnknownGenerator(name) from None

    def same_relators(self, other: Presentation) -> bool:
        return self.num_generators == other.num_generators and self.relators == other.relators


class DTooSmall(ValidationError):
    pass


class NTooSmall(ValidationError):
    pass


def _commutator(a: int, b: int) -> Word:
    return Word(((a, 1), (b, 1), (a, -1), (b, -1)))


def hopf_link(d: int) -> Presentation:
    """``< x0..x_{d-1} | [x0, x_i], i = 1..d-1 >``, the Hopf link on ``d`` components."""
    if d < 2:
        raise DTooSmall("the Hopf link needs d >= 2 components")
    names = tuple(f"x{i}" for i in range(d))
    return Presentation(names, tuple(_commutator(0, i) for i in range(1, d)))


def a_singularity_link(n: int, keep_redundant: bool = False) -> Presentation:
    """Link of the ``A_{2n-1}`` singularity ``x^2 = y^(2n)``.

    Generators ``a0 .. a{2n-1}, beta`` (``beta`` has index ``2n``);
    relators ``a1 a0 beta^-1`` and ``beta a{i+2} beta^-1 a{i}^-1`` with
    indices mod ``2n``, even ``i`` first, then odd ``i``.

    The last conjugation relator follows from the others (``beta^n``
    commutes with ``a0`` and with ``beta``, hence with ``a1``), and keeping
    it makes the presentation complex have Euler characteristic 1 instead
    of 0, i.e. a spurious free summand in degree 2.  It is dropped unless
    ``keep_redundant`` is set.
    """
    if n < 1:
        raise NTooSmall("A_{2n-1} needs n >= 1")
    m = 2 * n
    beta = m
    names = tuple(f"a{i}" for i in range(m)) + ("beta",)
    rels = [Word(((1, 1), (0, 1), (beta, -1)))]
    for start in (0, 1):
        for i in range(start, m, 2):
            rels.append(Word(((beta, 1), ((i + 2) % m, 1), (beta, -1), (i, -1))))
    if not keep_redundant:
        rels.pop()
    return Presentation(names, tuple(rels))


def free_group(g: int) -> Presentation:
    if g < 1:
        raise ValidationError("free group needs at least one generator")
    return Presentation(tuple(f"x{i}" for i in range(g)), ())


_TOKEN = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^([+-]?\d+))?\Z")


def parse_presentation(text: str) -> Presentation:
    """Parse the line grammar::

        # comment
        gens: x0 x1
        rel: x0 x1 x0^-1 x1^-1

    ``name^k`` expands to ``|k|`` copies of ``name`` or its inverse.
    """
    names = None
    rels = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        key, sep, rest = stripped.partition(":")
        key = key.strip()
        col0 = line.index(stripped[0]) + 1
        if not sep or key not in ("gens", "rel"):
            raise SyntaxProblem("expected 'gens:' or 'rel:'", lineno, col0)
        offset = line.index(":") + 1
        tokens = [(m.group(), m.start() + offset + 1) for m in re.finditer(r"\S+", line[offset:])]
        if key == "gens":
            if names is not None:
                raise SyntaxProblem("second 'gens:' line", lineno, col0)
            names = []
            for tok, col in tokens:
                if not _IDENT.match(tok):
                    raise SyntaxProblem(f"bad generator name {tok!r}", lineno, col)
                if tok in names:
                    raise DuplicateGenerator(tok, lineno, col)
                names.append(tok)
            if not names:
                raise SyntaxProblem("no generators declared", lineno, col0)
        else:
            if names is None:
                raise SyntaxProblem("'rel:' before 'gens:'", lineno, col0)
            letters = []
            for tok, col in tokens:
                m = _TOKEN.match(tok)
                if not m:
                    raise SyntaxProblem(f"malformed token {tok!r}", lineno, col)
                name, power = m.group(1), int(m.group(2) or 1)
                if power == 0:
                    raise SyntaxProblem(f"zero exponent in {tok!r}", lineno, col)
                if name not in names:
                    raise UnknownGenerator(name, lineno, col)
                g = names.index(name)
                letters.extend([(g, 1 if power > 0 else -1)] * abs(power))
            rels.append(Word(letters))
    if names is None:
        raise SyntaxProblem("missing 'gens:' line", 1, 1)
    return Presentation(tuple(names), tuple(rels))


def render_presentation(p: Presentation) -> str:
    lines = ["gens: " + " ".join(p.generator_names)]
    for r in p.relators:
        lines.append("rel: " + (r.render(p.generator_names) if r else ""))
    return "\n".join(lines) + "\n"
