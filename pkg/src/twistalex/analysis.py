"""Checkable consequences of the structure theory for Hopf-type presentations.

Three reports live here:

* the divisibility bound for the first twisted Alexander polynomial of a
  Hopf link presentation (``corollary_bound`` / ``check_divisibility``),
* root containment of that polynomial in ``det(rho(x0) t^D - Id)``, done as
  exact gcd stripping instead of eigenvalue extraction (``check_splitting``),
* a per-degree torsion certificate (``torsion_certificate``).

Eigenvalues are never computed: eigenvalues of cyclotomic matrices need not
lie in any field this package supports, while the determinant identity
``det(rho(x0) t^D - Id) = prod(t^D - lambda_i)`` (up to sign) keeps everything
exact.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import ValidationError
from .laurent import LaurentPolynomial, divides, gcd, normalize, strip_roots
from .linalg import RingMatrix, determinant
from .presentation import hopf_link
from .twisted import TwistedSetup, alexander_modules, alexander_polynomial

__all__ = [
    "WeightMismatch",
    "NotHopf",
    "BoundFactors",
    "DivisibilityReport",
    "SplittingReport",
    "DegreeCertificate",
    "TorsionCertificate",
    "is_hopf_setup",
    "default_weights",
    "bound_factors",
    "corollary_bound",
    "check_divisibility",
    "container_polynomial",
    "check_splitting",
    "torsion_certificate",
]


class WeightMismatch(ValidationError):
    """The epsilon values disagree with the supplied component weights."""


class NotHopf(ValidationError):
    """The operation only makes sense for a ``hopf_link(d)`` presentation."""


def is_hopf_setup(setup: TwistedSetup) -> bool:
    p = setup.presentation
    return p.num_generators >= 2 and p == hopf_link(p.num_generators)


def _require_hopf(setup):
    if not is_hopf_setup(setup):
        raise NotHopf("the divisibility bound is stated for Hopf link presentations only")


def default_weights(setup: TwistedSetup) -> list:
    """Weights ``(d_l, n_l)`` read off from epsilon.

    Generators ``x1..x_{d-1}`` with equal epsilon value are grouped into one
    component whose degree is the group size.  If ``eps(x0)`` exceeds the
    resulting sum, the remainder is booked as one extra degree-1 component.
    """
    eps = setup.epsilon
    counts = Counter(eps[1:])
    weights = sorted((c, n) for n, c in counts.items())
    rest = eps[0] - sum(c * n for c, n in weights)
    if rest:
        weights.append((1, rest))
    return weights


def _check_weights(setup, weights):
    weights = [(int(d), int(n)) for d, n in weights]
    if not weights:
        raise WeightMismatch("at least one weight (d_l, n_l) is required")
    for d, _ in weights:
        if d < 1:
            raise WeightMismatch(f"component degree {d} must be positive")
    eps = setup.epsilon
    total = sum(d * n for d, n in weights)
    if eps[0] != total:
        raise WeightMismatch(f"eps(x0) = {eps[0]} but the weights sum to {total}")
    allowed = {n for _, n in weights}
    for i, e in enumerate(eps[1:], start=1):
        if e not in allowed:
            names = setup.presentation.generator_names
            raise WeightMismatch(f"eps({names[i]}) = {e} is not among the multiplicities")
    return weights


def _phi_minus_one(setup, i, power=None):
    """``det(rho(x_i) t^power - Id)``; ``power`` defaults to ``eps(x_i)``."""
    field, l = setup.field, setup.rank
    k = setup.epsilon[i] if power is None else power
    rows = []
    for a in range(l):
        row = []
        for b in range(l):
            e = LaurentPolynomial.monomial(field, setup.rho[i][a][b], k)
            if a == b:
                e = e - LaurentPolynomial.one(field)
            row.append(e)
        rows.append(row)
    return determinant(RingMatrix.from_rows(field, rows))


@dataclass(frozen=True)
class BoundFactors:
    """The bound as ``gcd_part * power_base^exponent``, before expansion."""

    gcd_part: LaurentPolynomial
    power_base: LaurentPolynomial
    exponent: int

    def expand(self) -> LaurentPolynomial:
        return normalize(self.gcd_part * self.power_base ** self.exponent)

    def __str__(self):
        head = f"({self.gcd_part})"
        if self.exponent == 0:
            return head
        return f"{head}*({self.power_base})^{self.exponent}"


def bound_factors(setup: TwistedSetup, weights=None) -> BoundFactors:
    _require_hopf(setup)
    if weights is None:
        weights = default_weights(setup)
    _check_weights(setup, weights)
    dets = [_phi_minus_one(setup, i) for i in range(setup.num_generators)]
    g = LaurentPolynomial.zero(setup.field)
    for p in dets:
        g = gcd(g, p)
    return BoundFactors(normalize(g), normalize(dets[0]), setup.num_generators - 2)


def corollary_bound(setup: TwistedSetup, weights=None) -> LaurentPolynomial:
    """``gcd_i det(Phi(x_i) - Id) * det(Phi(x0) - Id)^(d-2)``, canonical.

    Here ``Phi(x_i) = rho(x_i) t^eps(x_i)`` and ``eps(x_i)`` is the
    multiplicity of the component the meridian ``x_i`` goes around, so this
    is the bound written in terms of the weights.
    """
    return bound_factors(setup, weights).expand()


@dataclass(frozen=True)
class DivisibilityReport:
    delta1: LaurentPolynomial
    bound: LaurentPolynomial
    holds: bool
    witness_quotient: LaurentPolynomial | None
    factors: BoundFactors | None = None


def check_divisibility(setup: TwistedSetup, weights=None) -> DivisibilityReport:
    factors = bound_factors(setup, weights)
    bound = factors.expand()
    delta1 = alexander_polynomial(setup, 1)
    if delta1.coeffs and divides(delta1, bound):
        return DivisibilityReport(delta1, bound, True, normalize(bound // delta1), factors)
    return DivisibilityReport(delta1, bound, False, None, factors)


@dataclass(frozen=True)
class SplittingReport:
    delta1: LaurentPolynomial
    container: LaurentPolynomial
    contained: bool
    residue: LaurentPolynomial
    exponent: int = 0


def container_polynomial(setup: TwistedSetup, exponent: int) -> LaurentPolynomial:
    """``normalize(det(rho(x0) t^exponent - Id))``."""
    if int(exponent) < 1:
        raise ValidationError("the container exponent must be a positive integer")
    return normalize(_phi_minus_one(setup, 0, int(exponent)))


def check_splitting(setup: TwistedSetup, exponent: int | None = None) -> SplittingReport:
    """Does every root of ``Delta_1`` occur among the roots of the container?

    ``exponent`` defaults to ``eps(x0)``.  The container is never zero: its
    top coefficient is ``det(rho(x0))``.
    """
    if exponent is None:
        exponent = setup.epsilon[0]
    container = container_polynomial(setup, exponent)
    delta1 = alexander_polynomial(setup, 1)
    residue = strip_roots(delta1, container)
    return SplittingReport(delta1, container, residue.is_one(), residue, int(exponent))


@dataclass(frozen=True)
class DegreeCertificate:
    degree: int
    torsion: bool
    free_rank: int
    order: LaurentPolynomial


@dataclass(frozen=True)
class TorsionCertificate:
    degrees: tuple

    @property
    def acyclic(self) -> bool:
        """All homology is torsion, i.e. the complex is exact over ``F(t)``."""
        return all(d.torsion for d in self.degrees)

    def __getitem__(self, degree):
        return self.degrees[degree]


def torsion_certificate(setup: TwistedSetup) -> TorsionCertificate:
    mods = alexander_modules(setup)
    return TorsionCertificate(tuple(
        DegreeCertificate(i, m.free_rank == 0, m.free_rank, m.order) for i, m in enumerate(mods)))
