"""Random valid setups and small independent oracles shared by the tests."""

from __future__ import annotations

import itertools
import random

from twistalex.field import RATIONALS, cyclotomic_field
from twistalex.laurent import LaurentPolynomial, gcd, normalize
from twistalex.linalg import RingMatrix, determinant
from twistalex.presentation import a_singularity_link, free_group, hopf_link
from twistalex.twisted import field_det, field_identity, field_inverse, field_matmul, make_setup


def identity(F, l):
    return field_identity(F, l)


def diag(F, values):
    l = len(values)
    return tuple(tuple(values[a] if a == b else F.zero() for b in range(l)) for a in range(l))


def mat_pow(M, k, F):
    out = identity(F, len(M))
    for _ in range(k):
        out = field_matmul(out, M)
    return out


def random_root(rng, F, m):
    return F.root_of_unity(m, rng.randrange(m)) if m > 1 else F.one()


def monomial_matrix(rng, F, m, l):
    """A permutation matrix with root-of-unity entries; its powers commute."""
    perm = list(range(l))
    rng.shuffle(perm)
    return tuple(tuple(random_root(rng, F, m) if perm[a] == b else F.zero() for b in range(l))
                 for a in range(l))


def commuting_family(rng, F, m, l, count):
    """``count`` pairwise commuting l x l matrices with root-of-unity entries."""
    if rng.random() < 0.5:
        return [diag(F, [random_root(rng, F, m) for _ in range(l)]) for _ in range(count)], "diagonal"
    G = monomial_matrix(rng, F, m, l)
    return [mat_pow(G, rng.randrange(2 * m * l), F) for _ in range(count)], "monomial"


def field_for(m):
    return RATIONALS if m <= 2 else cyclotomic_field(m)


def random_hopf_setup(rng: random.Random, d: int, max_rank=3, max_order=12):
    """A valid setup on ``hopf_link(d)`` with ``eps(x0) > 0``.

    ``eps(x_i)`` is 1 or 2 and ``eps(x0)`` is their sum plus a small excess,
    so default weights always exist.
    """
    l = rng.randint(1, max_rank)
    m = rng.randint(1, max_order)
    F = field_for(m)
    mats, kind = commuting_family(rng, F, m, l, d)
    mult = [rng.choice([1, 1, 2]) for _ in range(d - 1)]
    eps = [sum(mult) + rng.choice([0, 0, 1, 2])] + mult
    setup = make_setup(hopf_link(d), F, eps, mats)
    return setup, {"rank": l, "order": m, "kind": kind}


def dihedral_pair(F, zeta):
    """``rho(a0), rho(a1)`` for the 2-dimensional dihedral representation."""
    A0 = ((F.zero(), F.one()), (F.one(), F.zero()))
    A1 = ((F.zero(), zeta), (zeta.inverse(), F.zero()))
    return A0, A1


def block_sum(F, A, B):
    la, lb = len(A), len(B)
    rows = []
    for a in range(la):
        rows.append(tuple(A[a]) + tuple(F.zero() for _ in range(lb)))
    for b in range(lb):
        rows.append(tuple(F.zero() for _ in range(la)) + tuple(B[b]))
    return tuple(rows)


def random_a_singularity_setup(rng: random.Random, n: int):
    """A valid setup on ``a_singularity_link(n)`` with nontrivial epsilon.

    Epsilon is ``p`` on even ``a_i``, ``q`` on odd ``a_i`` and ``p + q`` on
    ``beta`` (forced by the relators).  The representation is abelian
    (rank 1), dihedral (rank 2), or dihedral plus a character (rank 3).
    """
    kind = rng.choice(["abelian", "dihedral", "dihedral+char"])
    if kind == "abelian":
        m = rng.randint(1, 12)
    else:
        m = 2 * n * rng.randint(1, 12 // (2 * n))
    F = field_for(m)
    p = q = 0
    while p == 0 and q == 0:
        p, q = rng.randint(-2, 3), rng.randint(-2, 3)
    g = 2 * n
    if kind == "abelian":
        A0, A1 = ((random_root(rng, F, m),),), ((random_root(rng, F, m),),)
        mats = [A0 if i % 2 == 0 else A1 for i in range(g)]
        mats.append(field_matmul(A1, A0))
    else:
        zeta = F.root_of_unity(2 * n, rng.randrange(2 * n))
        A0, A1 = dihedral_pair(F, zeta)
        if kind == "dihedral+char":
            A0 = block_sum(F, A0, ((random_root(rng, F, m),),))
            A1 = block_sum(F, A1, ((random_root(rng, F, m),),))
        B = field_matmul(A1, A0)
        Bi = field_inverse(B)
        mats = [A0, A1]
        for i in range(2, g):
            # beta a_{i+2} beta^-1 = a_i, so a_{i+2} = B^-1 a_i B
            mats.append(field_matmul(field_matmul(Bi, mats[i - 2]), B))
        mats.append(B)
    eps = [p if i % 2 == 0 else q for i in range(g)] + [p + q]
    setup = make_setup(a_singularity_link(n), F, eps, mats)
    return setup, {"rank": setup.rank, "order": m, "kind": kind}


# -- oracles ------------------------------------------------------------

def phi_minus_identity(setup, i) -> RingMatrix:
    """``Phi(x_i) - Id`` as an l x l matrix over the Laurent ring."""
    F, l = setup.field, setup.rank
    rows = []
    for a in range(l):
        row = []
        for b in range(l):
            e = LaurentPolynomial.monomial(F, setup.rho[i][a][b], setup.epsilon[i])
            if a == b:
                e = e - LaurentPolynomial.one(F)
            row.append(e)
        rows.append(row)
    return RingMatrix.from_rows(F, rows)


def minor_gcd_oracle(setup) -> LaurentPolynomial:
    """gcd of all l x l minors of the stacked column of ``Phi(x_i) - Id``.

    Enumerates row subsets of the (g*l) x l stack and takes determinants
    by Bareiss elimination; no Smith form involved.
    """
    F, l = setup.field, setup.rank
    stack = []
    for i in range(setup.num_generators):
        stack.extend(phi_minus_identity(setup, i).entries)
    g = LaurentPolynomial.zero(F)
    for rows in itertools.combinations(range(len(stack)), l):
        minor = determinant(RingMatrix.from_rows(F, [stack[r] for r in rows]))
        g = gcd(g, minor)
        if g.is_one():
            break
    return normalize(g)


def determinantal_divisors(A: RingMatrix):
    """``d_k`` = gcd of all k x k minors, k = 1..min(rows, cols)."""
    out = []
    F = A.field
    for k in range(1, min(A.rows, A.cols) + 1):
        g = LaurentPolynomial.zero(F)
        for rs in itertools.combinations(range(A.rows), k):
            for cs in itertools.combinations(range(A.cols), k):
                sub = RingMatrix.from_rows(F, [[A[r, c] for c in cs] for r in rs])
                g = gcd(g, determinant(sub))
        out.append(g)
    return out


# -- random ring matrices and free-group setups -------------------------

def random_poly(rng, F, max_span=3):
    if rng.random() < 0.2:
        return LaurentPolynomial.zero(F)
    span = rng.randint(0, max_span)
    low = rng.randint(-2, 2)
    if F.is_rational:
        cs = [F(rng.randint(-3, 3)) for _ in range(span + 1)]
    else:
        cs = [F.from_coefficients([rng.randint(-2, 2) for _ in range(F.degree)])
              for _ in range(span + 1)]
    return LaurentPolynomial(F, cs, low)


def random_matrix(rng, F=None, max_dim=4):
    F = F or rng.choice([RATIONALS, RATIONALS, RATIONALS, cyclotomic_field(3), cyclotomic_field(4)])
    r, c = rng.randint(1, max_dim), rng.randint(1, max_dim)
    return RingMatrix.from_rows(F, [[random_poly(rng, F) for _ in range(c)] for _ in range(r)], c)


def random_free_setup(rng, g=3):
    """Free group setup with arbitrary (usually non-commuting) invertible rho."""
    F = rng.choice([RATIONALS, cyclotomic_field(3), cyclotomic_field(4)])
    l = rng.randint(1, 3)
    mats = []
    for _ in range(g):
        while True:
            M = tuple(tuple(F(rng.randint(-2, 2)) for _ in range(l)) for _ in range(l))
            if field_det(M):
                break
        mats.append(M)
    eps = [rng.randint(-2, 2) for _ in range(g)]
    if not any(eps):
        eps[0] = 1
    return make_setup(free_group(g), F, eps, mats)
