"""Twisted chain complexes of presentation 2-complexes.

A pair ``(epsilon, rho)`` on a presentation gives the specialization

    Phi(w) = t^epsilon(w) * rho(w),

a ring map from the integral free group ring to ``l x l`` matrices over
``F[t, t^-1]``.  Applying ``Phi`` to Fox derivatives gives the boundary
maps.  In row-vector form (matrices act from the right)::

    C2 = R^(r*l) --P2--> C1 = R^(g*l) --P1--> C0 = R^l

with ``P1`` the column of blocks ``Phi(x_i) - Id`` and ``P2[j][i] =
Phi(d r_j / d x_i)``; the fundamental formula of Fox calculus gives
``P2 @ P1 == 0``.  Everything downstream uses column vectors, so the stored
boundaries are the transposes ``d1 = P1^T`` and ``d2 = P2^T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import gcd as igcd

from .errors import IndexOutOfRange, ValidationError
from .field import FieldDescriptor, parse_element
from .laurent import LaurentPolynomial, divides, normalize
from .linalg import AlexanderModule, RingMatrix, compute_homology
from .presentation import FreeRingElement, Presentation, Word, fox_derivative

__all__ = [
    "InvalidSetup",
    "TwistedSetup",
    "TwistedComplex",
    "WadaQuotient",
    "make_setup",
    "specialize",
    "specialize_word",
    "build_complex",
    "alexander_modules",
    "alexander_module",
    "alexander_polynomial",
    "wada_quotient",
    "cohomological_polynomial",
    "field_matmul",
    "field_inverse",
    "field_det",
]


class InvalidSetup(ValidationError):
    """The pair does not define a representation of the presented group."""

    def __init__(self, message, relator_index=None, generator=None):
        self.relator_index = relator_index
        self.generator = generator
        super().__init__(message)


# -- small dense matrices over F ----------------------------------------

def field_identity(field, n):
    z, o = field.zero(), field.one()
    return tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))


def field_matmul(A, B):
    cols = list(zip(*B))
    out = []
    for r in A:
        row = []
        for c in cols:
            acc = None
            for x, y in zip(r, c):
                if x and y:
                    acc = x * y if acc is None else acc + x * y
            row.append(acc if acc is not None else r[0].field.zero())
        out.append(tuple(row))
    return tuple(out)


def field_inverse(A):
    """Gauss-Jordan inverse; raises ``ZeroDivisionError`` when singular."""
    n = len(A)
    field = A[0][0].field
    M = [list(r) + list(e) for r, e in zip(A, field_identity(field, n))]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        inv = M[c][c].inverse()
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return tuple(tuple(r[n:]) for r in M)


def field_det(A):
    n = len(A)
    field = A[0][0].field
    M = [list(r) for r in A]
    det = field.one()
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return field.zero()
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det = det * M[c][c]
        inv = M[c][c].inverse()
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return det


# -- setups -------------------------------------------------------------

@dataclass(frozen=True)
class TwistedSetup:
    """A presentation together with ``epsilon`` values and ``rho`` matrices.

    Construction validates that ``rho`` lands in ``GL_l(F)``, that every
    relator is killed by both maps, and that ``epsilon`` is nontrivial.
    """

    presentation: Presentation
    field: FieldDescriptor
    rank: int
    epsilon: tuple
    rho: tuple
    _inverses: tuple = dc_field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        p = self.presentation
        g = p.num_generators
        eps = tuple(int(e) for e in self.epsilon)
        if len(eps) != g:
            raise InvalidSetup(f"epsilon has {len(eps)} values for {g} generators")
        if self.rank < 1:
            raise InvalidSetup("representation rank must be positive")
        if len(self.rho) != g:
            raise InvalidSetup(f"rho has {len(self.rho)} matrices for {g} generators")
        l = self.rank
        mats = []
        for i, M in enumerate(self.rho):
            if len(M) != l or any(len(r) != l for r in M):
                raise InvalidSetup(f"rho({p.generator_names[i]}) is not {l}x{l}", generator=i)
            mats.append(tuple(tuple(self.field(x) for x in r) for r in M))
        invs = []
        for i, M in enumerate(mats):
            try:
                invs.append(field_inverse(M))
            except ZeroDivisionError:
                raise InvalidSetup(f"rho({p.generator_names[i]}) is not invertible",
                                   generator=i) from None
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "rho", tuple(mats))
        object.__setattr__(self, "_inverses", tuple(invs))
        if not any(eps):
            raise InvalidSetup("epsilon is trivial")
        ident = field_identity(self.field, l)
        for j, r in enumerate(p.relators):
            if r.exponent_sum(eps) != 0:
                raise InvalidSetup(f"relator {j} has nonzero epsilon value", relator_index=j)
            if self.rho_of(r) != ident:
                raise InvalidSetup(f"relator not represented trivially: relator {j}",
                                   relator_index=j)

    @property
    def num_generators(self):
        return self.presentation.num_generators

    @property
    def epsilon_surjective(self) -> bool:
        """Whether ``epsilon`` maps onto ``Z`` (the gcd of its values is 1)."""
        d = 0
        for e in self.epsilon:
            d = igcd(d, e)
        return d == 1

    def rho_of(self, w: Word):
        out = None
        for g, s in w.letters:
            if g >= len(self.rho):
                raise IndexOutOfRange(f"generator index {g} out of range")
            M = self.rho[g] if s > 0 else self._inverses[g]
            out = M if out is None else field_matmul(out, M)
        return out if out is not None else field_identity(self.field, self.rank)


def make_setup(presentation: Presentation, field: FieldDescriptor, epsilon, rho) -> TwistedSetup:
    """Convenience constructor.

    ``rho`` entries may be ints, rationals, field elements or strings in the
    field's textual form; a bare scalar stands for a 1x1 matrix.  ``epsilon``
    and ``rho`` may be sequences or mappings keyed by generator name.
    """
    names = presentation.generator_names
    if isinstance(epsilon, dict):
        epsilon = [epsilon[n] for n in names]
    if isinstance(rho, dict):
        rho = [rho[n] for n in names]

    def conv(x):
        if isinstance(x, str):
            return parse_element(x, field)
        return field(x)

    mats = []
    for M in rho:
        if not isinstance(M, (list, tuple)):
            M = [[M]]
        mats.append(tuple(tuple(conv(x) for x in r) for r in M))
    rank = len(mats[0]) if mats else 1
    return TwistedSetup(presentation, field, rank, tuple(epsilon), tuple(mats))


# -- specialization -----------------------------------------------------

def _poly_matrix(field, M, k):
    """``t^k * M`` as rows of Laurent polynomials."""
    return [[LaurentPolynomial.monomial(field, x, k) if x else LaurentPolynomial.zero(field)
             for x in r] for r in M]


def specialize_word(setup: TwistedSetup, w: Word) -> RingMatrix:
    """``Phi(w) = t^epsilon(w) rho(w)``."""
    for g, _ in w.letters:
        if g >= setup.num_generators:
            raise IndexOutOfRange(f"generator index {g} out of range")
    return RingMatrix._wrap(setup.field, _poly_matrix(setup.field, setup.rho_of(w),
                                                      w.exponent_sum(setup.epsilon)),
                            setup.rank, setup.rank)


def specialize(setup: TwistedSetup, element: FreeRingElement) -> RingMatrix:
    """``Phi`` extended linearly to the integral free group ring."""
    field, l = setup.field, setup.rank
    acc = [[{} for _ in range(l)] for _ in range(l)]
    for w in sorted(element.terms):
        c = element.terms[w]
        for g, _ in w.letters:
            if g >= setup.num_generators:
                raise IndexOutOfRange(f"generator index {g} out of range")
        M = setup.rho_of(w)
        k = w.exponent_sum(setup.epsilon)
        for i in range(l):
            for j in range(l):
                x = M[i][j]
                if x:
                    cell = acc[i][j]
                    cell[k] = cell.get(k, field.zero()) + x * c
    entries = [[LaurentPolynomial.from_terms(field, cell) for cell in row] for row in acc]
    return RingMatrix._wrap(field, entries, l, l)


@dataclass(frozen=True)
class TwistedComplex:
    """Column-vector boundaries ``d2: C2 -> C1`` and ``d1: C1 -> C0``."""

    d1: RingMatrix
    d2: RingMatrix

    def chain_condition_holds(self) -> bool:
        return (self.d1 @ self.d2).is_zero()


def _boundaries(setup: TwistedSetup):
    p = setup.presentation
    field, l, g = setup.field, setup.rank, p.num_generators
    ident = RingMatrix.identity(field, l)
    # row-vector blocks, transposed block by block into column convention
    d1_blocks = [[(specialize_word(setup, Word.generator(i)) - ident).transpose().entries
                  for i in range(g)]]
    d2_blocks = []
    for i in range(g):
        row = []
        for r in p.relators:
            row.append(specialize(setup, fox_derivative(r, i, g)).transpose().entries)
        d2_blocks.append(row)
    d1 = RingMatrix.from_blocks(field, d1_blocks, l, l)
    if p.num_relators:
        d2 = RingMatrix.from_blocks(field, d2_blocks, l, l)
    else:
        d2 = RingMatrix.zeros(field, g * l, 0)
    return d1, d2


def build_complex(setup: TwistedSetup) -> TwistedComplex:
    """Assemble ``d1`` (``l x g*l``) and ``d2`` (``g*l x r*l``)."""
    d1, d2 = _boundaries(setup)
    cx = TwistedComplex(d1, d2)
    if not cx.chain_condition_holds():
        raise InvalidSetup("boundary maps do not compose to zero")
    return cx


@lru_cache(maxsize=256)
def alexander_modules(setup: TwistedSetup):
    """``(H0, H1, H2)`` of the twisted complex of the presentation 2-complex."""
    cx = build_complex(setup)
    hc = compute_homology(cx.d2, cx.d1)
    l = setup.rank
    h0 = AlexanderModule.from_divisors(setup.field, l, hc.outgoing.divisors)
    h2 = AlexanderModule(cx.d2.cols - hc.image_rank, (), LaurentPolynomial.one(setup.field))
    return h0, hc.module, h2


def alexander_module(setup: TwistedSetup, degree: int) -> AlexanderModule:
    if degree not in (0, 1, 2):
        raise ValidationError("a presentation complex only has degrees 0, 1, 2")
    return alexander_modules(setup)[degree]


def alexander_polynomial(setup: TwistedSetup, degree: int) -> LaurentPolynomial:
    """Order of the torsion part of ``H_degree``, in canonical form."""
    return alexander_module(setup, degree).order


@dataclass(frozen=True)
class WadaQuotient:
    delta1: LaurentPolynomial
    delta0: LaurentPolynomial
    quotient: LaurentPolynomial | None

    @property
    def divisible(self) -> bool:
        return self.quotient is not None


def wada_quotient(setup: TwistedSetup) -> WadaQuotient:
    """``Delta_1 / Delta_0`` when the division is exact."""
    d1 = alexander_polynomial(setup, 1)
    d0 = alexander_polynomial(setup, 0)
    q = normalize(d1 // d0) if d0.coeffs and divides(d0, d1) else None
    return WadaQuotient(d1, d0, q)


def cohomological_polynomial(setup: TwistedSetup, degree: int) -> LaurentPolynomial:
    """Cohomological polynomials are the homological ones shifted up one degree."""
    if degree not in (1, 2, 3):
        raise ValidationError("cohomological degree must be 1, 2 or 3")
    return alexander_polynomial(setup, degree - 1)
