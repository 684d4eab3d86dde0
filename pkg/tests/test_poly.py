import random
from fractions import Fraction

import pytest

from gsvindex import Polynomial, PolyMatrix, jacobian, linear_substitute, minor_det
from gsvindex.poly import transform_vector_field

x = Polynomial.variable(2, 0)
y = Polynomial.variable(2, 1)


def random_poly(rng, nvars=2, max_deg=3, max_terms=4):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        mono = tuple(rng.randint(0, max_deg) for _ in range(nvars))
        terms[mono] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return Polynomial(nvars, terms)


def test_canonical_form_drops_zero_coefficients():
    p = Fraction(1, 2) * x - Fraction(1, 2) * x
    assert p.is_zero and p.terms == {}
    assert p == Polynomial.zero(2)


def test_equality_is_term_map_equality():
    assert x * y + y == y + x * y
    assert x != y
    assert Polynomial(2, {(1, 0): 1}) == x


def test_ring_axioms_randomized():
    rng = random.Random(7)
    for _ in range(120):
        a, b, c = (random_poly(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_derivative_is_a_derivation():
    rng = random.Random(11)
    for _ in range(120):
        a, b = random_poly(rng), random_poly(rng)
        for i in range(2):
            assert (a * b).diff(i) == a.diff(i) * b + a * b.diff(i)


def test_jacobian_plane_curve():
    f = x * x * y + y ** 3
    J = jacobian([f], 2)
    assert J.rows == 1 and J.cols == 2
    assert J.entry(0, 0) == 2 * x * y
    assert J.entry(0, 1) == x * x + 3 * y * y


def test_jacobian_of_coordinate_function():
    J = jacobian([y], 2)
    assert J.entry(0, 0).is_zero and J.entry(0, 1) == Polynomial.one(2)


def test_jacobian_space_curve():
    u, v, w = (Polynomial.variable(3, i) for i in range(3))
    J = jacobian([u * u + v * v + w * w, u * v], 3)
    assert J.row(0) == (2 * u, 2 * v, 2 * w)
    assert J.row(1) == (v, u, Polynomial.zero(3))


def test_minor_det_examples():
    u, v, w = (Polynomial.variable(3, i) for i in range(3))
    J = jacobian([u * u + v * v + w * w, u * v], 3)
    assert minor_det(J, [0, 1], [0, 1]) == 2 * u * u - 2 * v * v
    assert minor_det(J, [], []) == Polynomial.one(3)
    J2 = jacobian([x * x * y + y ** 3], 2)
    assert minor_det(J2, [0], [1]) == x * x + 3 * y * y


def test_minor_det_index_errors():
    J = jacobian([x], 2)
    with pytest.raises(IndexError):
        minor_det(J, [0], [2])
    with pytest.raises(IndexError):
        minor_det(J, [1], [0])


def test_minor_det_matches_cofactor_expansion():
    def cofactor(rows):
        if len(rows) == 1:
            return rows[0][0]
        n = rows[0][0].nvars
        acc = Polynomial.zero(n)
        for j, e in enumerate(rows[0]):
            sub = [r[:j] + r[j + 1 :] for r in rows[1:]]
            term = e * cofactor(sub)
            acc = acc + term if j % 2 == 0 else acc - term
        return acc

    rng = random.Random(3)
    for _ in range(25):
        entries = [random_poly(rng, max_deg=2, max_terms=3) for _ in range(9)]
        M = PolyMatrix(3, 3, entries)
        expected = cofactor([list(M.row(i)) for i in range(3)])
        assert minor_det(M, [0, 1, 2], [0, 1, 2]) == expected


def test_linear_substitute_examples():
    assert linear_substitute(x, [[1, 0], [0, 1]]) == x
    assert linear_substitute(x * x, [[0, 1], [1, 0]]) == y * y
    # p(x+y, y) for p = x + y
    assert linear_substitute(x + y, [[1, 1], [0, 1]]) == x + 2 * y


def test_linear_substitute_rejects_singular():
    with pytest.raises(ValueError):
        linear_substitute(x, [[1, 1], [1, 1]])


def random_unimodular_int(rng, n=2):
    L = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    U = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            L[i][j] = Fraction(rng.randint(-2, 2))
            U[j][i] = Fraction(rng.randint(-2, 2))
    return [
        [sum(L[i][k] * U[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]


def test_linear_substitute_roundtrip():
    from gsvindex import _linalg

    rng = random.Random(19)
    for _ in range(40):
        p = random_poly(rng)
        A = random_unimodular_int(rng)
        Ainv = _linalg.inverse(A)
        assert linear_substitute(linear_substitute(p, A), Ainv) == p


def test_transform_vector_field_examples():
    ident = [[1, 0], [0, 1]]
    swap = [[0, 1], [1, 0]]
    assert transform_vector_field([x, y], ident) == [x, y]
    # Euler field is invariant under any linear change
    rng = random.Random(23)
    for _ in range(20):
        A = random_unimodular_int(rng)
        assert transform_vector_field([x, y], A) == [x, y]
    assert transform_vector_field([y, Polynomial.zero(2)], swap) == [
        Polynomial.zero(2),
        x,
    ]


def test_transform_vector_field_roundtrip():
    from gsvindex import _linalg

    rng = random.Random(29)
    for _ in range(30):
        X = [random_poly(rng), random_poly(rng)]
        A = random_unimodular_int(rng)
        back = transform_vector_field(
            transform_vector_field(X, A), _linalg.inverse(A)
        )
        assert back == X


def test_render_parse_roundtrip():
    from gsvindex import parse_poly

    rng = random.Random(31)
    for _ in range(60):
        p = random_poly(rng)
        assert parse_poly(p.render(), ["x", "y"]) == p
