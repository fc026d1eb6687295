import itertools
import random

import pytest

from radonmono.errors import (
    AmbientMismatch,
    BlockOutOfRange,
    NotNested,
    ShapeMismatch,
    Singular,
)
from radonmono.field import FieldSpec
from radonmono.linalg import (
    Matrix,
    Subspace,
    extend_basis,
    hstack,
    image,
    intersect,
    intertwiner_space,
    kernel,
    matrix_from_flat,
    rref,
    subspace_direct_sum,
    subspace_sum,
)

Q = FieldSpec.rational()


def mat(grid, spec=Q):
    return Matrix.from_ints(spec, grid)


def test_rref_examples():
    ident = Matrix.identity(Q, 3)
    red, pivots, rank = rref(ident)
    assert red == ident and pivots == (0, 1, 2) and rank == 3

    zero = Matrix.zero(Q, 2, 3)
    red, pivots, rank = rref(zero)
    assert red == zero and pivots == () and rank == 0

    a = mat([[2, 4], [1, 2]])
    red, pivots, rank = rref(a)
    assert red == mat([[1, 2], [0, 0]]) and rank == 1


def test_rref_idempotent_on_random_matrices():
    rng = random.Random(5150)
    for _ in range(30):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        a = mat([[rng.randint(-4, 4) for _ in range(cols)] for _ in range(rows)])
        red, _, _ = rref(a)
        again, _, _ = rref(red)
        assert red == again


def test_image_examples(q_zeta6):
    minus_one = mat([[-1]])
    assert image(minus_one - Matrix.identity(Q, 1)).dim == 1

    ident = Matrix.identity(Q, 3)
    assert image(ident - ident).dim == 0

    z = q_zeta6.gen()
    diag = Matrix.diagonal(q_zeta6, [z, q_zeta6.one()])
    shifted = diag - Matrix.identity(q_zeta6, 2)
    im = image(shifted)
    assert im.dim == 1
    assert im.basis == Matrix.from_rows(q_zeta6, [[q_zeta6.one(), q_zeta6.zero()]])


def test_kernel_examples():
    assert kernel(Matrix.identity(Q, 3)).dim == 0
    assert kernel(Matrix.zero(Q, 4, 4)).dim == 4
    # single summation condition -v1 + v2 - v3 + v4 = 0
    column = mat([[-1], [1], [-1], [1]])
    assert kernel(column).dim == 3


def test_kernel_is_annihilator():
    rng = random.Random(77)
    for _ in range(20):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        a = mat([[rng.randint(-3, 3) for _ in range(cols)] for _ in range(rows)])
        k = kernel(a)
        for row in k.basis.entries:
            from radonmono.linalg import row_times_matrix

            assert all(e.is_zero() for e in row_times_matrix(row, a))
        _, _, rank = rref(a)
        assert k.dim == rows - rank


def test_intersect_examples():
    u = Subspace.from_rows(Q, 2, [[Q.one(), Q.zero()], [Q.zero(), Q.one()]])
    w = Subspace.from_rows(Q, 2, [[Q.one(), Q.one()]])
    assert intersect(u, u) == u
    assert intersect(u, Subspace.zero(Q, 2)).dim == 0
    assert intersect(u, w) == w
    with pytest.raises(AmbientMismatch):
        intersect(u, Subspace.zero(Q, 3))


def test_dimension_formula_on_random_subspaces():
    rng = random.Random(4242)
    gf = FieldSpec.prime(5)
    for _ in range(25):
        n = rng.randint(1, 5)
        du, dw = rng.randint(0, n), rng.randint(0, n)
        u = Subspace.from_rows(
            gf, n, [[gf.from_int(rng.randrange(5)) for _ in range(n)] for _ in range(du)]
        )
        w = Subspace.from_rows(
            gf, n, [[gf.from_int(rng.randrange(5)) for _ in range(n)] for _ in range(dw)]
        )
        assert u.dim + w.dim == subspace_sum(u, w).dim + intersect(u, w).dim


def test_extend_basis_examples():
    full = Subspace.full(Q, 2)
    assert extend_basis(full, full, 2) == Matrix.identity(Q, 2)

    inner = Subspace.zero(Q, 2)
    outer = Subspace.from_rows(Q, 2, [[Q.zero(), Q.one()]])
    t = extend_basis(inner, outer, 2)
    assert t == mat([[0, 1], [1, 0]])

    with pytest.raises(NotNested):
        extend_basis(outer, Subspace.from_rows(Q, 2, [[Q.one(), Q.zero()]]), 2)


def test_extend_basis_flag_structure():
    rng = random.Random(31337)
    gf = FieldSpec.prime(7)
    for _ in range(20):
        n = rng.randint(2, 6)
        rows = [[gf.from_int(rng.randrange(7)) for _ in range(n)] for _ in range(n)]
        outer = Subspace.from_rows(gf, n, rows)
        inner_rows = list(outer.basis.entries)[: rng.randint(0, outer.dim)]
        inner = Subspace.from_rows(gf, n, inner_rows)
        t = extend_basis(inner, outer, n)
        t.inverse()  # invertibility
        lead = Subspace.from_rows(gf, n, t.entries[: inner.dim])
        assert lead == inner
        middle = Subspace.from_rows(gf, n, t.entries[: outer.dim])
        assert middle == outer


def test_invert_golden():
    a = mat([[0, -1], [1, 2]])
    assert a.inverse() == mat([[2, 1], [-1, 0]])
    assert a.inverse() * a == Matrix.identity(Q, 2)
    with pytest.raises(Singular):
        mat([[1, 2], [2, 4]]).inverse()


def test_invert_times_self_on_random():
    rng = random.Random(2718)
    gf = FieldSpec.prime(11)
    for _ in range(20):
        n = rng.randint(1, 5)
        a = Matrix.from_ints(gf, [[rng.randrange(11) for _ in range(n)] for _ in range(n)])
        try:
            inv = a.inverse()
        except Singular:
            continue
        assert inv * a == Matrix.identity(gf, n)
        assert a * inv == Matrix.identity(gf, n)


def test_insert_block_golden():
    # the braid generator block inside the identity on V^4
    block = mat([[0, -1], [1, 2]])
    out = Matrix.identity(Q, 4).insert_block(block, 1, 1)
    assert out == mat([[0, -1, 0, 0], [1, 2, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert out.extract_block(1, 1, 2, 2) == block
    with pytest.raises(BlockOutOfRange):
        Matrix.identity(Q, 2).insert_block(block, 2, 2)
    with pytest.raises(BlockOutOfRange):
        Matrix.identity(Q, 2).extract_block(1, 1, 3, 1)


def test_direct_sum():
    a = mat([[1, 2]])
    b = mat([[3]])
    assert a.direct_sum(b) == mat([[1, 2, 0], [0, 0, 3]])
    lines = [Subspace.full(Q, 1) for _ in range(4)]
    assert subspace_direct_sum(lines) == Subspace.full(Q, 4)


def test_matrix_power():
    a = mat([[0, -1], [1, 2]])
    assert a ** 2 == mat([[-1, -2], [2, 3]])
    assert a ** 0 == Matrix.identity(Q, 2)
    assert a ** -1 == a.inverse()


def test_intertwiner_identity_tuple():
    ident = Matrix.identity(Q, 3)
    space = intertwiner_space([ident], [ident])
    assert space.dim == 9


def test_intertwiner_contains_known_conjugator():
    rng = random.Random(9)
    gf = FieldSpec.prime(7)
    d = 3
    while True:
        s = Matrix.from_ints(gf, [[rng.randrange(7) for _ in range(d)] for _ in range(d)])
        try:
            s_inv = s.inverse()
            break
        except Singular:
            continue
    tuple_a = [Matrix.from_ints(gf, [[rng.randrange(7) for _ in range(d)] for _ in range(d)]) for _ in range(3)]
    tuple_b = [s_inv * a * s for a in tuple_a]
    space = intertwiner_space(tuple_a, tuple_b)
    flat = [e for row in s.entries for e in row]
    assert space.contains_vector(flat)
    for row in space.basis.entries:
        t = matrix_from_flat(gf, row, d)
        for a, b in zip(tuple_a, tuple_b):
            assert t * b == a * t


def test_schur_dimension_via_enumeration(four_lines_result):
    # Independent oracle: count 2x2 matrices over GF(5) commuting with the
    # mod-5 reduction of the output tuple; the count 5^d gives the dimension.
    from radonmono.group import reduce_element_modp

    p = 5
    reduced = []
    for m in four_lines_result.gtilde:
        reduced.append([[reduce_element_modp(e, p) for e in row] for row in m.entries])

    def mul(a, b):
        return [
            [sum(a[i][k] * b[k][j] for k in range(2)) % p for j in range(2)]
            for i in range(2)
        ]

    count = 0
    for entries in itertools.product(range(p), repeat=4):
        t = [[entries[0], entries[1]], [entries[2], entries[3]]]
        if all(mul(t, m) == mul(m, t) for m in reduced):
            count += 1
    assert count == p  # dimension 1 mod 5

    space = intertwiner_space(list(four_lines_result.gtilde), list(four_lines_result.gtilde))
    assert space.dim == 1


def test_subspace_coordinates_round_trip():
    gf = FieldSpec.prime(5)
    s = Subspace.from_rows(
        gf, 3, [[gf.from_int(1), gf.from_int(2), gf.from_int(0)], [gf.from_int(0), gf.from_int(0), gf.from_int(1)]]
    )
    vec = [gf.from_int(2), gf.from_int(4), gf.from_int(3)]
    coords = s.coordinates(vec)
    assert coords == (gf.from_int(2), gf.from_int(3))
    with pytest.raises(AmbientMismatch):
        s.coordinates([gf.from_int(0), gf.from_int(1), gf.from_int(0)])


def test_shape_errors():
    with pytest.raises(ShapeMismatch):
        mat([[1, 2]]) * mat([[1, 2]])
    with pytest.raises(ShapeMismatch):
        hstack([mat([[1]]), mat([[1], [2]])])
