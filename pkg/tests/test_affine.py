"""Affine permutations, reduced words, orders, and label bijections."""

import doctest
import itertools
import random

import pytest

import kkschur.affine as A
from kkschur.affine import (
    AffinePerm,
    NotGrassmannian,
    NotProperSubset,
    bruhat_leq,
    bruhat_leq_subword,
    cyclically_decreasing,
    cyclically_increasing,
    dual_partition,
    from_word,
    grassmannian_perm,
    hecke_star,
    identity,
    is_reduced,
    k_bounded_partitions,
    lm_bijection,
    lm_inverse,
    omega_k,
    omega_k_partition,
    sh,
    simple_reflection,
    weak_leq_left,
)
from kkschur.symfunc import conjugate


def test_doctests():
    assert doctest.testmod(A).failed == 0


# -- group structure ---------------------------------------------------------


def test_window_normalization_and_identity():
    e = identity(3)
    assert e.window == (1, 2, 3, 4)
    assert e.is_identity() and e.length() == 0
    with pytest.raises(ValueError):
        AffinePerm(2, (1, 2, 4))  # residues collide mod n
    with pytest.raises(ValueError):
        AffinePerm(2, (1, 2))  # wrong window size


def test_simple_reflection_relations():
    for k in (1, 2, 3):
        n = k + 1
        for i in range(n):
            s = simple_reflection(i, k)
            assert (s * s).is_identity()
            assert s.length() == 1
        if n == 2:
            # two generators with no relation beyond the involutions
            s0, s1 = simple_reflection(0, k), simple_reflection(1, k)
            assert s0 * s1 != s1 * s0
            continue
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                si, sj = simple_reflection(i, k), simple_reflection(j, k)
                if (i - j) % n in (1, n - 1):
                    assert si * sj * si == sj * si * sj
                else:
                    assert si * sj == sj * si


def test_multiplication_inverse_length():
    rng = random.Random(2)
    for k in (1, 2, 3):
        for _ in range(20):
            word = [rng.randrange(0, k + 1) for _ in range(rng.randrange(0, 8))]
            w = from_word(word, k)
            assert w * w.inverse() == identity(k)
            assert w.inverse().length() == w.length()
            assert w.length() <= len(word)
            assert (w.length() - len(word)) % 2 == 0


def test_from_word_applies_rightmost_first():
    # w = s1 s0 acts as first s0 then s1 on the identity
    k = 2
    w = from_word([1, 0], k)
    assert w == simple_reflection(1, k) * simple_reflection(0, k)


def test_reduced_words():
    w = from_word([2, 1, 0, 1], 2)
    word = w.some_reduced_word()
    assert len(word) == w.length()
    assert from_word(word, 2) == w
    assert is_reduced(word, 2)
    assert not is_reduced([0, 0], 2)
    assert not is_reduced([1, 0, 1, 0, 1, 0], 1) or from_word(
        [1, 0, 1, 0, 1, 0], 1
    ).length() == 6


def test_descents():
    w = from_word([0, 2, 1, 0], 2)
    for i in range(3):
        assert w.is_right_descent(i) == ((w * simple_reflection(i, 2)).length()
                                         < w.length())
        assert w.is_left_descent(i) == ((simple_reflection(i, 2) * w).length()
                                        < w.length())
    assert list(w.right_descents()) == [
        i for i in range(3) if w.is_right_descent(i)
    ]
    assert list(w.left_descents()) == [
        i for i in range(3) if w.is_left_descent(i)
    ]


def test_left_right_mul():
    w = from_word([1, 2, 0], 2)
    assert w.left_mul_s(1) == simple_reflection(1, 2) * w
    assert w.right_mul_s(1) == w * simple_reflection(1, 2)


def test_finiteness():
    assert from_word([1, 2, 1], 2).is_finite()
    assert not from_word([0], 2).is_finite()
    assert identity(2).is_finite()


# -- orders ------------------------------------------------------------------


def _ball(k, max_len):
    seen = {identity(k)}
    frontier = [identity(k)]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for i in range(k + 1):
                u = w.left_mul_s(i)
                if u.length() > w.length() and u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return sorted(seen, key=lambda w: (w.length(), w.window))


def test_bruhat_matches_subword_oracle_small():
    for k in (1, 2):
        ball = _ball(k, 4)
        for x in ball:
            for y in ball:
                assert bruhat_leq(x, y) == bruhat_leq_subword(x, y), (x, y)


def test_bruhat_poset_axioms():
    ball = _ball(2, 4)
    for x in ball:
        assert bruhat_leq(x, x)
    rng = random.Random(4)
    for _ in range(200):
        x, y, z = rng.choice(ball), rng.choice(ball), rng.choice(ball)
        if bruhat_leq(x, y) and bruhat_leq(y, z):
            assert bruhat_leq(x, z)
        if bruhat_leq(x, y) and bruhat_leq(y, x):
            assert x == y
        if bruhat_leq(x, y) and x != y:
            assert x.length() < y.length()


def test_weak_order_implies_bruhat():
    ball = _ball(2, 4)
    for x in ball:
        for y in ball:
            if weak_leq_left(x, y):
                assert bruhat_leq(x, y)
    # and the orders genuinely differ
    diffs = sum(
        1
        for x in ball
        for y in ball
        if bruhat_leq(x, y) and not weak_leq_left(x, y)
    )
    assert diffs > 0


def test_weak_order_via_suffix():
    # x <= y on the left iff y = z * x with lengths adding
    ball = _ball(2, 3)
    for x in ball:
        for y in ball:
            expected = any(
                z * x == y and z.length() + x.length() == y.length()
                for z in _ball(2, y.length())
            )
            assert weak_leq_left(x, y) == expected


# -- label bijection ---------------------------------------------------------


def test_label_bijection_anchor():
    w = lm_bijection((4, 3, 2), 4)
    assert w == from_word([4, 3, 1, 0, 4, 3, 2, 1, 0], 4)
    assert w.length() == 9
    assert is_reduced([4, 3, 1, 0, 4, 3, 2, 1, 0], 4)


def test_label_bijection_properties():
    for k in (1, 2, 3):
        for lam in k_bounded_partitions(k, 6):
            x = lm_bijection(lam, k)
            assert x.is_grassmannian()
            assert x.length() == sum(lam)
            assert lm_inverse(x) == lam


def test_label_bijection_is_onto_grassmannians():
    k = 2
    grass = [w for w in _ball(k, 5) if w.is_grassmannian()]
    labels = {lm_inverse(w) for w in grass}
    expected = set(k_bounded_partitions(k, 5))
    assert labels == expected


def test_label_bijection_rejects_large_parts():
    with pytest.raises(ValueError):
        lm_bijection((5, 1), 3)
    with pytest.raises(NotGrassmannian):
        lm_inverse(from_word([0, 1, 0], 2))


def test_bruhat_on_labels_anchor():
    # the length-4 label is below the length-5 label, witnessed by a subword
    k = 2
    x = lm_bijection((2, 2), k)
    y = lm_bijection((2, 1, 1, 1), k)
    assert y == from_word([0, 1, 2, 1, 0], k)
    assert x == from_word([0, 2, 1, 0], k)
    assert bruhat_leq(x, y)


def test_k_bounded_partition_enumeration():
    got = list(k_bounded_partitions(2, 4))
    assert got == [
        (),
        (1,),
        (1, 1),
        (2,),
        (1, 1, 1),
        (2, 1),
        (1, 1, 1, 1),
        (2, 1, 1),
        (2, 2),
    ]
    assert all(not lam or lam[0] <= 3 for lam in k_bounded_partitions(3, 5))


# -- cyclic elements and the star product ------------------------------------


def test_cyclic_elements_anchors():
    k = 4
    assert cyclically_increasing((0, 1, 3, 4), k) == from_word([3, 4, 0, 1], k)
    assert cyclically_decreasing((0, 1, 3, 4), k) == from_word([1, 0, 4, 3], k)
    u = cyclically_increasing((0, 2, 4), k)
    assert u == from_word([4, 0, 2], k) == from_word([4, 2, 0], k)
    assert u == from_word([2, 4, 0], k)
    d = cyclically_decreasing((0, 2, 4), k)
    assert d == from_word([2, 0, 4], k) == from_word([0, 2, 4], k)
    assert d == from_word([0, 4, 2], k)


def test_cyclic_elements_generic():
    for k in (2, 3):
        residues = list(range(k + 1))
        for size in range(0, k + 1):
            for Aset in itertools.combinations(residues, size):
                u = cyclically_increasing(Aset, k)
                d = cyclically_decreasing(Aset, k)
                assert u.length() == len(Aset)
                assert d.length() == len(Aset)
                assert sorted(u.some_reduced_word()) == sorted(Aset)
        with pytest.raises(NotProperSubset):
            cyclically_increasing(residues, k)


def test_hecke_star_is_max_lift():
    # v * w computed generator by generator never drops length and lands on
    # the longest element of the form (subword of v) * w
    rng = random.Random(6)
    k = 2
    ball = _ball(k, 4)
    for _ in range(60):
        v = rng.choice(ball)
        w = rng.choice(ball)
        star = hecke_star(v, w)
        assert star.length() >= w.length()
        word = v.some_reduced_word()
        best = max(
            (
                from_word(list(sub), k) * w
                for m in range(len(word) + 1)
                for sub in itertools.combinations(word, m)
                if from_word(list(sub), k).length()
                + w.length()
                == (from_word(list(sub), k) * w).length()
            ),
            key=lambda u: u.length(),
            default=w,
        )
        assert star.length() == best.length()


def test_hecke_star_identity_cases():
    k = 2
    w = from_word([1, 0], k)
    assert hecke_star(identity(k), w) == w
    assert hecke_star(w, identity(k)) == w


# -- conjugation symmetry ----------------------------------------------------


def test_omega_partition_involution():
    for k in (1, 2, 3):
        for lam in k_bounded_partitions(k, 6):
            mu = omega_k_partition(lam, k)
            assert sum(mu) == sum(lam)
            assert not mu or mu[0] <= k
            assert omega_k_partition(mu, k) == lam


def test_omega_partition_small_hook_is_transpose():
    for k in (2, 3, 4):
        for lam in k_bounded_partitions(k, 6):
            if lam and lam[0] + len(lam) > k + 1:
                continue
            assert omega_k_partition(lam, k) == conjugate(lam)


def test_omega_group_involution():
    k = 2
    for w in _ball(k, 4):
        assert omega_k(omega_k(w)) == w
        assert omega_k(w).length() == w.length()


def test_omega_intertwines_labels():
    for k in (2, 3):
        for lam in k_bounded_partitions(k, 5):
            assert lm_inverse(omega_k(lm_bijection(lam, k))) == omega_k_partition(
                lam, k
            )


def test_omega_preserves_orders():
    k = 2
    ball = _ball(k, 4)
    for x in ball:
        for y in ball:
            assert bruhat_leq(x, y) == bruhat_leq(omega_k(x), omega_k(y))
            assert weak_leq_left(x, y) == weak_leq_left(omega_k(x), omega_k(y))


# -- column-shape permutations and their shapes ------------------------------


def test_grassmannian_perm_windows():
    assert grassmannian_perm((2,), 1, 2).window == (3, 1, 2)
    assert grassmannian_perm((1,), 1, 2).window == (2, 1, 3)
    assert grassmannian_perm((1, 1), 2, 2).window == (2, 3, 1)
    assert grassmannian_perm((), 2, 3).window == (1, 2, 3, 4)


def test_dual_partition_values():
    assert dual_partition((2,), 1, 2) == ()
    assert dual_partition((1,), 1, 2) == (1,)
    assert dual_partition((), 1, 2) == (2,)
    assert dual_partition((1,), 2, 3) == (2, 1)


def test_shape_of_column_permutations():
    # the shape attached to w built from a column shape inside the
    # (k+1-i) x i box is the transposed complement
    for k in (2, 3):
        for i in range(1, k + 1):
            rect = (k + 1 - i,) * i
            from kkschur.symfunc import contains, subpartitions

            for lam in subpartitions(rect):
                w = grassmannian_perm(lam, i, k)
                assert sh(w) == conjugate(dual_partition(lam, i, k)) or not lam


def test_shape_of_identity():
    for k in (1, 2, 3):
        assert sh(identity(k)) == ()


def test_shape_examples():
    assert sh(AffinePerm(2, (3, 1, 2))) == ()
    assert sh(AffinePerm(2, (2, 1, 3))) == (1,)
    assert sh(AffinePerm(2, (2, 3, 1))) == ()
    with pytest.raises(ValueError):
        sh(from_word([0], 2))
