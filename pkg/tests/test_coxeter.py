"""Group presentations: lengths, balls, omega structure, serialization.

The length function is validated against an independent oracle: breadth
first search over the Cayley graph starting from the length-zero coset
representatives.
"""

from collections import deque

import pytest

from heckequot.coxeter import (
    CoxeterError,
    close_group,
    dump_element,
    element_from_key,
    extended_affine_b2,
    extended_affine_gl,
    extended_affine_pgl,
    finite_a,
    finite_b2,
    infinite_dihedral,
    mat_identity,
    mat_mul,
    mat_vec,
    parse_element,
)


def bfs_distances(pres, radius):
    """Graph distance from the Omega coset, by plain BFS."""
    dist = {}
    queue = deque()
    for o in pres.omega_elements():
        dist[o] = 0
        queue.append(o)
    gens = pres.generators()
    while queue:
        x = queue.popleft()
        if dist[x] == radius:
            continue
        for s in gens:
            y = x * s
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


# ---- matrix helpers -------------------------------------------------------


def test_mat_helpers_return_tuples():
    eye = mat_identity(3)
    assert isinstance(eye, tuple) and isinstance(eye[0], tuple)
    a = ((0, 1), (1, 0))
    assert mat_mul(a, a) == mat_identity(2)
    assert mat_vec(a, (3, 7)) == (7, 3)


def test_close_group_b2_weyl():
    s1 = ((0, 1), (1, 0))
    s2 = ((1, 0), (0, -1))
    elems, index = close_group([s1, s2], 2)
    assert len(elems) == 8
    assert index[mat_identity(2)] == 0


# ---- infinite dihedral ----------------------------------------------------


def test_dihedral_relations():
    d = infinite_dihedral()
    e = d.identity()
    s1, s2 = d.generators()
    assert s1 * s1 == e
    assert s2 * s2 == e
    assert s1 * s2 != s2 * s1
    w = e
    for k in range(1, 8):
        w = w * (s1 if k % 2 else s2)
        assert w.length == k


def test_dihedral_ball_sizes():
    d = infinite_dihedral()
    # 1 + 2r elements: two alternating words per positive length
    for r in (0, 1, 4, 10):
        assert len(d.ball(r)) == 1 + 2 * r


@pytest.mark.parametrize(
    "factory,radius",
    [(infinite_dihedral, 6), (extended_affine_b2, 4), (lambda: extended_affine_pgl(3), 3)],
)
def test_length_matches_cayley_bfs(factory, radius):
    pres = factory()
    dist = bfs_distances(pres, radius)
    for x, k in dist.items():
        assert x.length == k
    assert set(pres.ball(radius)) == set(dist)


def test_ball_sorted_by_length_then_key():
    b = extended_affine_b2().ball(3)
    keys = [x.key() for x in b]
    assert keys == sorted(keys)


def test_frozen_ball_sizes():
    assert len(extended_affine_b2().ball(4)) == 56
    assert len(extended_affine_pgl(3).ball(4)) == 93


# ---- group element basics -------------------------------------------------


def test_inverse_and_parity():
    b2 = extended_affine_b2()
    ball = list(b2.ball(3))
    for x in ball:
        assert x * x.inverse() == b2.identity()
        assert x.inverse().length == x.length
    for x in ball[:8]:
        for y in ball[:8]:
            assert ((x * y).length - x.length - y.length) % 2 == 0


def test_element_validation():
    b2 = extended_affine_b2()
    with pytest.raises(CoxeterError):
        b2.element((0, 0), 99)
    with pytest.raises(CoxeterError):
        b2.element((0,), 0)


def test_reduced_word_roundtrip():
    b2 = extended_affine_b2()
    for x in b2.ball(4):
        word, omega = b2.reduced_word(x)
        assert len(word) == x.length
        assert b2.word_to_element(word) * omega == x


def test_descents_bound_length():
    d = infinite_dihedral()
    s1, s2 = d.generators()
    w = s1 * s2 * s1
    assert d.left_descents(w) == [0]
    assert d.right_descents(w) == [0]
    assert d.left_descents(d.identity()) == []


# ---- omega structure ------------------------------------------------------


def test_b2_omega_is_an_involution_swapping_the_ends():
    b2 = extended_affine_b2()
    omegas = b2.omega_elements()
    assert [o.key_str() for o in omegas] == ["0,0;0", "1,0;5"]
    assert all(o.length == 0 for o in omegas)
    tau = omegas[1]
    table = [b2.omega_conj_generator(tau, i) for i in range(3)]
    assert table == [1, 0, 2]
    gens = b2.generators()
    for i, j in enumerate(table):
        assert tau * gens[i] * tau.inverse() == gens[j]
    # diagram automorphism: braid orders survive the relabeling
    for (i, j), m in b2.coxeter_m.items():
        a, b = sorted((table[i], table[j]))
        assert b2.coxeter_m[(a, b)] == m


def test_pgl3_omega_rotates_the_diagram():
    p3 = extended_affine_pgl(3)
    omegas = p3.omega_elements()
    assert len(omegas) == 3
    tables = [[p3.omega_conj_generator(o, i) for i in range(3)] for o in omegas]
    assert tables == [[0, 1, 2], [1, 2, 0], [2, 0, 1]]
    om = omegas[1]
    assert (om * om).omega_index() == 2
    assert (om * om * om).omega_index() == 0


def test_omega_index_additive():
    p3 = extended_affine_pgl(3)
    ball = list(p3.ball(2))
    for x in ball:
        for y in ball:
            assert (x * y).omega_index() == (x.omega_index() + y.omega_index()) % 3


def test_wprime_omega_factorization():
    p3 = extended_affine_pgl(3)
    for x in p3.ball(3):
        wp = x.wprime_part()
        assert wp.omega_index() == 0
        assert wp * x.omega_part() == x


def test_gl_omega_infinite_refuses_enumeration():
    g3 = extended_affine_gl(3)
    with pytest.raises(CoxeterError):
        g3.ball(2)
    with pytest.raises(CoxeterError):
        g3.omega_elements()


def test_gl_shift_has_length_zero():
    g3 = extended_affine_gl(3)
    x = g3.element((1, 0, 0), 0)
    assert x.omega_index() != 0
    assert x.length == 0 or x.wprime_part().length <= x.length


# ---- finite families ------------------------------------------------------


def test_finite_a3_is_s4():
    fa = finite_a(3)
    ball = fa.ball(20)
    assert len(ball) == 24
    assert fa.wf_order == 24
    assert fa.num_positive_roots == 6
    assert max(x.length for x in ball) == 6


def test_finite_b2_order_8():
    fb = finite_b2()
    ball = fb.ball(10)
    assert len(ball) == 8
    assert fb.num_positive_roots == 4
    assert max(x.length for x in ball) == 4


# ---- serialization --------------------------------------------------------


@pytest.mark.parametrize(
    "factory,radius",
    [
        (infinite_dihedral, 6),
        (extended_affine_b2, 3),
        (lambda: extended_affine_pgl(3), 3),
        (lambda: finite_a(2), 6),
        (finite_b2, 6),
    ],
)
def test_dump_parse_roundtrip(factory, radius):
    pres = factory()
    for x in pres.ball(radius):
        line = dump_element(x)
        assert parse_element(pres, line) == x
        assert element_from_key(pres, x.key_str()) == x


def test_dump_format():
    d = infinite_dihedral()
    s1, s2 = d.generators()
    w = s1 * s2
    assert dump_element(w) == "word=s1.s2 omega=w0 len=2 trans=(-1) fin=f0"


def test_parse_element_rejects_malformed():
    d = infinite_dihedral()
    for bad in ["", "word=s1", "word=s9.s1 omega=w0 len=1 trans=(0) fin=f0"]:
        with pytest.raises(CoxeterError):
            parse_element(d, bad)


def test_ball_dump_lines_sorted_and_parsable():
    b2 = extended_affine_b2()
    ball = b2.ball(2)
    lines = ball.dump_lines()
    assert len(lines) == len(ball)
    assert [parse_element(b2, ln) for ln in lines] == list(ball)
