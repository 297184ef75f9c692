import random

import pytest
from hypothesis import given, settings, strategies as st

from twistalex.errors import IndexOutOfRange, SyntaxProblem
from twistalex.presentation import (DTooSmall, DuplicateGenerator, FreeRingElement, NTooSmall,
                                    UnknownGenerator, Word, a_singularity_link, fox_derivative,
                                    fox_jacobian, free_group, hopf_link, parse_presentation,
                                    render_presentation)


def W(*letters):
    return Word(tuple(letters))


x0, X0 = (0, 1), (0, -1)
x1, X1 = (1, 1), (1, -1)


def ring(*pairs):
    out = FreeRingElement()
    for c, w in pairs:
        out = out + FreeRingElement({w: c})
    return out


def test_word_examples():
    assert W(x0, x1) * W(X1) == W(x0)
    assert W(x0, x1, X0).inverse() == W(x0, X1, X0)
    assert W(x0, X0) == Word.identity()
    assert len(W(x0, x1, X1, X0, x1)) == 1


def test_fox_examples():
    r = W(x0, x1, X0, X1)
    assert fox_derivative(r, 0) == ring((1, Word.identity()), (-1, W(x0, x1, X0)))
    assert fox_derivative(r, 1) == ring((1, W(x0)), (-1, W(x0, x1, X0, X1)))
    cube = Word.generator(0, 3)
    assert fox_derivative(cube, 0) == ring((1, Word.identity()), (1, W(x0)), (1, W(x0, x0)))
    assert fox_derivative(W(X0), 0) == ring((-1, W(X0)))
    assert fox_derivative(W(x1), 0) == FreeRingElement()
    with pytest.raises(IndexOutOfRange):
        fox_derivative(r, 5, ngens=2)


def test_builders():
    h2 = hopf_link(2)
    assert h2.num_generators == 2 and h2.relators == (W(x0, x1, X0, X1),)
    assert hopf_link(3).num_relators == 2
    assert hopf_link(5).num_generators == 5 and hopf_link(5).num_relators == 4
    with pytest.raises(DTooSmall):
        hopf_link(1)
    with pytest.raises(NTooSmall):
        a_singularity_link(0)
    assert free_group(2).num_relators == 0


def test_a_singularity_builder():
    full = a_singularity_link(1, keep_redundant=True)
    assert full.generator_names == ("a0", "a1", "beta")
    assert full.num_relators == 3
    assert full.relators[0] == W((1, 1), (0, 1), (2, -1))
    assert full.relators[1] == W((2, 1), (0, 1), (2, -1), (0, -1))
    assert a_singularity_link(2, keep_redundant=True).num_generators == 5
    assert a_singularity_link(2, keep_redundant=True).num_relators == 5
    for n in (1, 2, 3):
        p = a_singularity_link(n)
        assert p.num_relators == 2 * n and p.euler_characteristic() == 0
        assert all(len(r) > 0 for r in p.relators)


def test_parse_examples():
    assert parse_presentation("gens: x0 x1\nrel: x0 x1 x0^-1 x1^-1") == hopf_link(2)
    with pytest.raises(UnknownGenerator) as exc:
        parse_presentation("gens: a\nrel: a b")
    assert exc.value.name == "b"
    with pytest.raises(DuplicateGenerator) as exc:
        parse_presentation("gens: a a")
    assert exc.value.name == "a"


def test_parse_syntax_errors_have_positions():
    with pytest.raises(SyntaxProblem) as exc:
        parse_presentation("gens: x y\nrel: x^^2 y")
    assert (exc.value.line, exc.value.column) == (2, 6)
    with pytest.raises(SyntaxProblem):
        parse_presentation("gens: x\nrel: x^0")
    with pytest.raises(SyntaxProblem):
        parse_presentation("rel: x")
    with pytest.raises(SyntaxProblem):
        parse_presentation("gens: x\ngens: y")


def test_parse_comments_and_powers():
    p = parse_presentation("# a comment\ngens: a b   # trailing\nrel: a^3 b^-2\n")
    assert p.relators == (W((0, 1), (0, 1), (0, 1), (1, -1), (1, -1)),)


@pytest.mark.parametrize("p", [hopf_link(4), a_singularity_link(2), a_singularity_link(3, True),
                               free_group(3)])
def test_render_round_trip(p):
    again = parse_presentation(render_presentation(p))
    assert again == p and again.generator_names == p.generator_names


def test_jacobian_shape():
    J = fox_jacobian(hopf_link(3))
    assert len(J) == 2 and all(len(row) == 3 for row in J)


# -- properties ---------------------------------------------------------

letters = st.tuples(st.integers(0, 2), st.sampled_from([1, -1]))
words = st.lists(letters, max_size=12).map(lambda ls: Word(tuple(ls)))


@settings(max_examples=100, deadline=None)
@given(words, words, st.integers(0, 2))
def test_fox_product_rule(u, v, i):
    assert fox_derivative(u * v, i) == fox_derivative(u, i) + u * fox_derivative(v, i)


@settings(max_examples=100, deadline=None)
@given(words, words, words)
def test_reduction_is_associative(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * a.inverse() == Word.identity()


@settings(max_examples=60, deadline=None)
@given(words)
def test_fundamental_identity_in_group_ring(w):
    # w - 1 = sum_i (dw/dx_i)(x_i - 1), as free group ring elements
    lhs = FreeRingElement({w: 1}) - FreeRingElement({Word.identity(): 1})
    rhs = FreeRingElement()
    for i in range(3):
        xi = FreeRingElement({Word.generator(i): 1}) - FreeRingElement({Word.identity(): 1})
        rhs = rhs + fox_derivative(w, i) * xi
    assert lhs == rhs


def test_fox_on_many_random_words():
    rng = random.Random(2)
    for _ in range(500):
        u = Word(tuple((rng.randrange(3), rng.choice([1, -1])) for _ in range(rng.randint(0, 12))))
        v = Word(tuple((rng.randrange(3), rng.choice([1, -1])) for _ in range(rng.randint(0, 12))))
        i = rng.randrange(3)
        assert fox_derivative(u * v, i) == fox_derivative(u, i) + u * fox_derivative(v, i)
