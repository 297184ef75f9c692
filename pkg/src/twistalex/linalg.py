"""Matrices over ``F[t, t^-1]``, Smith normal form and module structure.

``F[t, t^-1]`` is a Euclidean domain for the degree span, so the usual
elimination algorithm works: pick a pivot of minimal span, clear its row
and column by division with remainder, and enforce the divisibility chain
by folding offending rows into the pivot row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .errors import DescriptorMismatch, ValidationError
from .field import FieldDescriptor, Rational
from .laurent import LaurentPolynomial, is_canonical, normalize, normalizing_unit, parse_laurent

__all__ = [
    "RingMatrix",
    "SmithDecomposition",
    "AlexanderModule",
    "ChainConditionViolated",
    "smith_normal_form",
    "elementary_divisors",
    "cokernel_module",
    "homology_module",
    "compute_homology",
    "HomologyComputation",
    "kernel_rank",
    "rank_over_fractions",
    "determinant",
    "field_rank",
]


class ChainConditionViolated(ValidationError):
    pass


class RingMatrix:
    """Dense immutable matrix of Laurent polynomials over one field."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: FieldDescriptor, rows: int, cols: int, entries):
        entries = tuple(tuple(r) for r in entries)
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ValidationError(f"entry array does not have shape {rows}x{cols}")
        for r in entries:
            for e in r:
                if e.field != field:
                    raise DescriptorMismatch(f"{e.field} entry in a {field} matrix")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def _wrap(cls, field, entries, rows=None, cols=None):
        self = object.__new__(cls)
        entries = tuple(tuple(r) for r in entries)
        rows = len(entries) if rows is None else rows
        cols = (len(entries[0]) if entries else 0) if cols is None else cols
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("RingMatrix is immutable")

    @classmethod
    def from_rows(cls, field, rows, ncols=None):
        """Rows of Laurent polynomials, ints or field elements."""
        def conv(x):
            if isinstance(x, LaurentPolynomial):
                return x
            return LaurentPolynomial.constant(field, x)
        rows = [[conv(x) for x in r] for r in rows]
        ncols = (len(rows[0]) if rows else 0) if ncols is None else ncols
        return cls(field, len(rows), ncols, rows)

    @classmethod
    def zeros(cls, field, rows, cols):
        z = LaurentPolynomial.zero(field)
        return cls._wrap(field, [[z] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, field, n):
        z, o = LaurentPolynomial.zero(field), LaurentPolynomial.one(field)
        return cls._wrap(field, [[o if i == j else z for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_blocks(cls, field, blocks, block_rows, block_cols):
        """Assemble from a grid of equally sized blocks (each a list of rows)."""
        out = []
        for brow in blocks:
            for i in range(block_rows):
                out.append([x for b in brow for x in b[i]])
        nrows = len(blocks) * block_rows
        ncols = (len(blocks[0]) if blocks else 0) * block_cols
        return cls._wrap(field, out, nrows, ncols)

    @classmethod
    def from_nested(cls, field, nested, ncols=None):
        """Inverse of :meth:`to_nested`."""
        rows = [[parse_laurent(s, field) for s in r] for r in nested]
        return cls.from_rows(field, rows, ncols)

    def to_nested(self):
        return [[str(e) for e in r] for r in self.entries]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def column(self, j):
        return tuple(r[j] for r in self.entries)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def transpose(self) -> RingMatrix:
        return RingMatrix._wrap(self.field, [list(c) for c in zip(*self.entries)] if self.rows else
                                [], self.cols, self.rows)

    def __matmul__(self, other: RingMatrix) -> RingMatrix:
        if self.field != other.field:
            raise DescriptorMismatch(f"{self.field} vs {other.field}")
        if self.cols != other.rows:
            raise ValidationError(f"cannot multiply {self.shape} by {other.shape}")
        zero = LaurentPolynomial.zero(self.field)
        ocols = [other.column(j) for j in range(other.cols)]
        out = []
        for r in self.entries:
            row = []
            for c in ocols:
                acc = zero
                for x, y in zip(r, c):
                    if x.coeffs and y.coeffs:
                        acc = acc + x * y
                row.append(acc)
            out.append(row)
        return RingMatrix._wrap(self.field, out, self.rows, other.cols)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValidationError("shape mismatch")
        return RingMatrix._wrap(self.field, [[x + y for x, y in zip(a, b)]
                                             for a, b in zip(self.entries, other.entries)],
                                self.rows, self.cols)

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ValidationError("shape mismatch")
        return RingMatrix._wrap(self.field, [[x - y for x, y in zip(a, b)]
                                             for a, b in zip(self.entries, other.entries)],
                                self.rows, self.cols)

    def scale(self, c):
        return RingMatrix._wrap(self.field, [[x * c for x in r] for r in self.entries],
                                self.rows, self.cols)

    def submatrix(self, rows, cols) -> RingMatrix:
        rows, cols = list(rows), list(cols)
        return RingMatrix._wrap(self.field, [[self.entries[i][j] for j in cols] for i in rows],
                                len(rows), len(cols))

    def is_zero(self) -> bool:
        return all(not e.coeffs for r in self.entries for e in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def evaluate(self, point):
        """Entrywise substitution ``t := point``; a list of rows of field elements."""
        return [[e.evaluate(point) for e in r] for r in self.entries]

    def __eq__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.entries))

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.entries) + "]"

    __repr__ = __str__


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with ``D`` diagonal and a divisibility chain.

    ``V_inv`` is carried along because homology computations need to move
    between the original basis and the one ``V`` adapts to the kernel.
    Transform fields are ``None`` when they were not requested.
    """

    U: RingMatrix | None
    D: RingMatrix
    V: RingMatrix | None
    divisors: tuple
    V_inv: RingMatrix | None = None

    @property
    def rank(self) -> int:
        return sum(1 for d in self.divisors if d.coeffs)


def _height(p):
    # rough bit size of the coefficients, used only to break span ties
    h = 0
    for c in p.coeffs:
        for q in c.coeffs:
            if q:
                h += int(q.numerator).bit_length() + int(q.denominator).bit_length()
    return h


def _minimal_pivot(S, k, m, n):
    best, where = None, None
    for i in range(k, m):
        row = S[i]
        for j in range(k, n):
            e = row[j]
            c = len(e.coeffs)
            if c:
                key = (c, _height(e))
                if best is None or key < best:
                    best, where = key, (i, j)
    return where


def _row_axpy(M, dst, src, q, start=0):
    # M[dst] -= q * M[src]
    rd, rs = M[dst], M[src]
    for j in range(start, len(rd)):
        if rs[j].coeffs:
            rd[j] = rd[j] - q * rs[j]


def _col_axpy(M, dst, src, q, start=0):
    # M[:, dst] -= q * M[:, src]
    for i in range(start, len(M)):
        r = M[i]
        if r[src].coeffs:
            r[dst] = r[dst] - q * r[src]


def _primitive_factor(entries):
    # rational c making every coefficient of c*entries an integer, jointly coprime
    num, den = 0, 1
    for e in entries:
        for x in e.coeffs:
            for q in x.coeffs:
                if q:
                    num = math.gcd(num, int(q.numerator))
                    d = int(q.denominator)
                    den = den * d // math.gcd(den, d)
    if num in (0, 1) and den == 1:
        return None
    return Rational(den, num)


def _scale_row(M, i, c, start=0):
    r = M[i]
    for j in range(start, len(r)):
        if r[j].coeffs:
            r[j] = r[j].scale(c)


def _scale_col(M, j, c, start=0):
    for i in range(start, len(M)):
        if M[i][j].coeffs:
            M[i][j] = M[i][j].scale(c)


def _tidy_row(S, U, i, k):
    c = _primitive_factor(S[i][k:])
    if c is not None:
        _scale_row(S, i, c, k)
        if U is not None:
            _scale_row(U, i, c)


def _tidy_col(S, V, Vi, j, k):
    c = _primitive_factor(S[r][j] for r in range(k, len(S)))
    if c is not None:
        _scale_col(S, j, c, k)
        if V is not None:
            _scale_col(V, j, c)
            _scale_row(Vi, j, 1 / c)


def _bring_to(S, U, V, Vi, k, i, j):
    # move entry (i, j) to (k, k) by a row and a column swap
    if i != k:
        S[i], S[k] = S[k], S[i]
        if U is not None:
            U[i], U[k] = U[k], U[i]
    if j != k:
        for r in S:
            r[j], r[k] = r[k], r[j]
        if V is not None:
            for r in V:
                r[j], r[k] = r[k], r[j]
            Vi[j], Vi[k] = Vi[k], Vi[j]


def _make_monic(S, U, k):
    p = S[k][k]
    if not is_canonical(p):
        u = normalizing_unit(p)
        S[k] = S[k][:k] + [x * u for x in S[k][k:]]
        if U is not None:
            U[k] = [x * u for x in U[k]]


def smith_normal_form(A: RingMatrix, transforms: bool = True) -> SmithDecomposition:
    """Smith normal form of ``A``.

    The pivot at each step is the nonzero entry of minimal degree span in
    the remaining block; ties go to the entry with the smallest
    coefficients, then to row-major position.  Rows and columns touched by
    a nonzero remainder are rescaled to integer coefficients with no
    common factor, which keeps rational coefficient growth in check.
    With ``transforms=False`` only ``D`` and the divisors are computed.
    """
    field = A.field
    m, n = A.rows, A.cols
    S = [list(r) for r in A.entries]
    zero, one = LaurentPolynomial.zero(field), LaurentPolynomial.one(field)
    U = V = Vi = None
    if transforms:
        U = [[one if i == j else zero for j in range(m)] for i in range(m)]
        V = [[one if i == j else zero for j in range(n)] for i in range(n)]
        Vi = [[one if i == j else zero for j in range(n)] for i in range(n)]
    k = 0
    while k < min(m, n):
        where = _minimal_pivot(S, k, m, n)
        if where is None:
            break
        while True:
            _bring_to(S, U, V, Vi, k, *where)
            p = S[k][k]
            dirty = False
            for i in range(k + 1, m):
                e = S[i][k]
                if e.coeffs:
                    q, r = e.divmod(p)
                    _row_axpy(S, i, k, q, k)
                    if transforms:
                        _row_axpy(U, i, k, q)
                    if r.coeffs:
                        dirty = True
                        _tidy_row(S, U, i, k)
            for j in range(k + 1, n):
                e = S[k][j]
                if e.coeffs:
                    q, r = e.divmod(p)
                    _col_axpy(S, j, k, q, k)
                    if transforms:
                        _col_axpy(V, j, k, q)
                        # V_inv absorbs the inverse column operation as a row operation
                        _row_axpy(Vi, k, j, -q)
                    if r.coeffs:
                        dirty = True
                        _tidy_col(S, V, Vi, j, k)
            if not dirty:
                bad = None
                for i in range(k + 1, m):
                    for j in range(k + 1, n):
                        e = S[i][j]
                        if e.coeffs and e.divmod(p)[1].coeffs:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                # row_k += row_bad brings a non-multiple of the pivot into row k
                _row_axpy(S, k, bad, -one, k)
                if transforms:
                    _row_axpy(U, k, bad, -one)
            where = _minimal_pivot(S, k, m, n)
        _make_monic(S, U, k)
        k += 1
    divisors = tuple(S[i][i] for i in range(min(m, n)))
    D = RingMatrix._wrap(field, S, m, n)
    if not transforms:
        return SmithDecomposition(None, D, None, divisors)
    return SmithDecomposition(RingMatrix._wrap(field, U, m, m), D, RingMatrix._wrap(field, V, n, n),
                              divisors, RingMatrix._wrap(field, Vi, n, n))


def elementary_divisors(A: RingMatrix) -> tuple:
    return smith_normal_form(A, transforms=False).divisors


def rank_over_fractions(A: RingMatrix) -> int:
    """Rank of ``A`` over the fraction field ``F(t)``."""
    return smith_normal_form(A, transforms=False).rank


def kernel_rank(A: RingMatrix) -> int:
    """Rank of the (free) kernel of ``A`` acting on column vectors."""
    return A.cols - rank_over_fractions(A)


@dataclass(frozen=True)
class AlexanderModule:
    """``F[t,t^-1]^free_rank  (+)  sum_i F[t,t^-1]/(torsion[i])``."""

    free_rank: int
    torsion: tuple = ()
    order: LaurentPolynomial | None = dc_field(default=None, compare=False)

    def __post_init__(self):
        torsion = tuple(normalize(p) for p in self.torsion)
        for p in torsion:
            if not p.coeffs or p.is_unit():
                raise ValidationError("torsion factors must be nonzero nonunits")
        for a, b in zip(torsion, torsion[1:]):
            if b.divmod(a)[1].coeffs:
                raise ValidationError("torsion factors must form a divisibility chain")
        object.__setattr__(self, "torsion", torsion)
        order = self.order
        if order is None:
            if not torsion:
                raise ValidationError("pass the field via order=1 for a torsion-free module")
            order = torsion[0]
            for p in torsion[1:]:
                order = order * p
        object.__setattr__(self, "order", normalize(order))

    @classmethod
    def from_divisors(cls, field, nrows, divisors):
        nonzero = [d for d in divisors if d.coeffs]
        torsion = [normalize(d) for d in nonzero if not d.is_unit()]
        order = LaurentPolynomial.one(field)
        for p in torsion:
            order = order * p
        return cls(nrows - len(nonzero), tuple(torsion), order)

    @property
    def is_torsion(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion


def cokernel_module(A: RingMatrix) -> AlexanderModule:
    """Module with one generator per row of ``A`` and one relation per column."""
    return AlexanderModule.from_divisors(A.field, A.rows, elementary_divisors(A))


@dataclass(frozen=True)
class HomologyComputation:
    """Everything :func:`homology_module` learns along the way.

    ``outgoing`` is the Smith form of ``boundary_out`` (so it also presents
    the cokernel one degree down) and ``image_rank`` is the rank of
    ``boundary_in`` over ``F(t)``.
    """

    module: AlexanderModule
    outgoing: SmithDecomposition
    image_rank: int


def compute_homology(boundary_in: RingMatrix, boundary_out: RingMatrix) -> HomologyComputation:
    field = boundary_out.field
    if boundary_in.field != field:
        raise DescriptorMismatch(f"{boundary_in.field} vs {field}")
    if boundary_out.cols != boundary_in.rows:
        raise ValidationError(
            f"incompatible boundaries {boundary_out.shape} and {boundary_in.shape}")
    if not (boundary_out @ boundary_in).is_zero():
        raise ChainConditionViolated("boundary_out @ boundary_in is not zero")
    snf = smith_normal_form(boundary_out)
    r = snf.rank
    n = boundary_out.cols
    coords = snf.V_inv @ boundary_in
    if not RingMatrix._wrap(field, coords.entries[:r], r, coords.cols).is_zero():
        raise AssertionError("image of boundary_in escapes the kernel")  # pragma: no cover
    tail = RingMatrix._wrap(field, coords.entries[r:], n - r, coords.cols)
    tail_divisors = elementary_divisors(tail)
    module = AlexanderModule.from_divisors(field, n - r, tail_divisors)
    return HomologyComputation(module, snf, sum(1 for d in tail_divisors if d.coeffs))


def homology_module(boundary_in: RingMatrix, boundary_out: RingMatrix) -> AlexanderModule:
    """``ker(boundary_out) / im(boundary_in)`` for column-vector matrices.

    The kernel basis is the tail of the ``V`` matrix of the Smith form of
    ``boundary_out``; the image is rewritten in that basis through ``V^-1``.
    """
    return compute_homology(boundary_in, boundary_out).module


def determinant(A: RingMatrix) -> LaurentPolynomial:
    """Determinant by fraction-free (Bareiss) elimination."""
    if not A.is_square():
        raise ValidationError("determinant of a non-square matrix")
    field = A.field
    n = A.rows
    M = [list(r) for r in A.entries]
    one = LaurentPolynomial.one(field)
    if n == 0:
        return one
    sign = 1
    prev = one
    for k in range(n - 1):
        if not M[k][k].coeffs:
            swap = next((i for i in range(k + 1, n) if M[i][k].coeffs), None)
            if swap is None:
                return LaurentPolynomial.zero(field)
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        p = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * p - M[i][k] * M[k][j]) // prev
            M[i][k] = LaurentPolynomial.zero(field)
        prev = p
    det = M[n - 1][n - 1]
    return -det if sign < 0 else det


def field_rank(rows) -> int:
    """Rank of a matrix of field elements by Gaussian elimination."""
    M = [list(r) for r in rows]
    rank = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = M[rank][c].inverse()
        for i in range(rank + 1, len(M)):
            if M[i][c]:
                f = M[i][c] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[rank])]
        rank += 1
    return rank
