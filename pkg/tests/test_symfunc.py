"""Ring arithmetic, generating families, and the substitution morphisms."""

import doctest
import itertools
import json
import random

import pytest

import kkschur.symfunc as S
from kkschur.symfunc import (
    NotInSpan,
    NotTriangular,
    RingMorphism,
    SymFunc,
    apply_F,
    apply_F_inv,
    apply_Omega,
    as_partition,
    binom,
    conjugate,
    contains,
    determinant,
    determinant_leibniz,
    dual_grothendieck,
    dual_grothendieck_alt,
    expand_in_family,
    g_tilde,
    h,
    h_shifted,
    k_weight,
    partition_union,
    subpartitions,
)


def test_doctests():
    assert doctest.testmod(S).failed == 0


# -- ring arithmetic ---------------------------------------------------------


def test_ring_axioms_random():
    rng = random.Random(11)

    def rand_elem():
        f = SymFunc.zero()
        for _ in range(rng.randrange(0, 4)):
            mono = tuple(
                sorted((rng.randrange(1, 4) for _ in range(rng.randrange(0, 3))),
                       reverse=True)
            )
            f = f + SymFunc.from_monomial(mono, rng.randrange(-3, 4))
        return f

    for _ in range(60):
        a, b, c = rand_elem(), rand_elem(), rand_elem()
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) * c == a * c + b * c
        assert (a * b) * c == a * (b * c)
        assert a - a == SymFunc.zero()
        assert a * SymFunc.one() == a
        assert a * 0 == SymFunc.zero()


def test_monomial_normalization():
    assert SymFunc.from_monomial((1, 2, 1)) == SymFunc.from_monomial((2, 1, 1))
    assert SymFunc.from_monomial((2, 0, 1)) == SymFunc.from_monomial((2, 1))
    assert SymFunc.from_monomial((2, -1)).is_zero()


def test_power_and_degree():
    f = h(2) + h(1)
    assert f ** 0 == SymFunc.one()
    assert f ** 3 == f * f * f
    assert (h(2) * h(1)).degree() == 3
    assert SymFunc.one().degree() == 0
    assert SymFunc.zero().is_zero()
    assert h(3).max_subscript() == 3


def test_canonical_str_order():
    f = h(2) * h(1) * h(1) + h(2) * h(1) - h(2) * h(2)
    assert str(f) == "-h[2,2] + h[2,1,1] + h[2,1]"
    assert str(SymFunc.zero()) == "0"
    assert str(SymFunc.one()) == "1"
    assert str(h(1) * 2 - 5) == "2*h[1] - 5"


def test_json_round_trip():
    f = h(2) * h(1) - 3 * h(3) + 7
    assert SymFunc.from_json(f.to_json()) == f
    payload = json.loads(f.to_json())
    assert set(payload) == {"terms"}
    assert SymFunc.from_json_dict(f.to_json_dict()) == f


def test_coefficient_and_terms():
    f = 2 * h(2) * h(1) - h(3)
    assert f.coefficient((2, 1)) == 2
    assert f.coefficient((3,)) == -1
    assert f.coefficient((1,)) == 0
    assert dict(f.terms()) == {(2, 1): 2, (3,): -1}
    assert f.constant_term() == 0
    assert (f + 5).constant_term() == 5


# -- partition helpers -------------------------------------------------------


def test_partition_helpers():
    assert as_partition([3, 1, 1, 0, 0]) == (3, 1, 1)
    with pytest.raises(ValueError):
        as_partition((1, 2))
    assert conjugate((3, 2)) == (2, 2, 1)
    assert conjugate(conjugate((4, 2, 1))) == (4, 2, 1)
    assert contains((3, 2), (2, 2))
    assert not contains((3, 2), (2, 2, 1))
    assert partition_union((2, 1), (2, 2)) == (2, 2, 2, 1)
    assert partition_union((), (3,)) == (3,)
    subs = list(subpartitions((2, 1)))
    assert set(subs) == {(), (1,), (2,), (1, 1), (2, 1)}
    assert len(subs) == len(set(subs))


def test_binomials():
    for n in range(-4, 6):
        assert binom(n, 0) == 1
    assert binom(4, 2) == 6
    assert binom(-1, 2) == 1
    assert binom(-1, 3) == -1
    assert binom(-2, 2) == 3
    assert binom(3, 5) == 0


# -- generating families -----------------------------------------------------


def test_shifted_generators():
    assert h_shifted(2, 0) == h(2)
    assert h_shifted(2, 1) == h(2) + h(1) + 1
    assert h_shifted(2, -1) == h(2) - h(1)
    assert h_shifted(0, 7) == SymFunc.one()
    assert h_shifted(-1, 2).is_zero()


def test_weight_products():
    assert k_weight(()) == SymFunc.one()
    assert k_weight((3,)) == h(3)
    assert k_weight((2, 1)) == h(2) * (h(1) + 1)
    assert k_weight((1, -1, 1)).is_zero()


def test_dual_grothendieck_small_values():
    assert dual_grothendieck(()) == SymFunc.one()
    assert dual_grothendieck((2,)) == h(2)
    assert dual_grothendieck((1, 1)) == h(1) * h(1) + h(1) - h(2)
    assert dual_grothendieck((2, 1)) == h(2) * h(1) + h(2) - h(3)


def test_dual_grothendieck_against_alternate_construction():
    shapes = [
        lam
        for n in range(7)
        for lam in _partitions_of(n)
    ]
    for lam in shapes:
        assert dual_grothendieck(lam) == dual_grothendieck_alt(lam), lam


def test_g_tilde_is_sum_over_subshapes():
    for lam in [(2,  1), (3, 1, 1), (2, 2, 2)]:
        total = SymFunc.zero()
        for mu in subpartitions(lam):
            total = total + dual_grothendieck(mu)
        assert g_tilde(lam) == total


def test_top_degree_term_is_schur_leading():
    # the top homogeneous part of the closed family member has the shape
    # itself as its lexicographically largest subscript
    for lam in [(2, 1), (3, 2), (2, 2, 1)]:
        f = dual_grothendieck(lam)
        top = {m: c for m, c in f.terms() if sum(m) == sum(lam)}
        assert top.get(lam) == 1


# -- determinants ------------------------------------------------------------


def test_determinant_matches_leibniz():
    rng = random.Random(5)
    for size in (1, 2, 3):
        rows = [
            [h(rng.randrange(0, 3)) + rng.randrange(-1, 2) for _ in range(size)]
            for _ in range(size)
        ]
        assert determinant(rows) == determinant_leibniz(rows)


# -- substitution morphisms --------------------------------------------------


def _partitions_of(n, maxpart=None):
    if maxpart is None:
        maxpart = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, maxpart), 0, -1):
        for rest in _partitions_of(n - first, first):
            yield (first,) + rest


def all_shapes(max_size):
    for n in range(max_size + 1):
        yield from _partitions_of(n)


def test_F_sends_open_family_to_closed_family():
    for lam in all_shapes(6):
        assert apply_F(dual_grothendieck(lam)) == g_tilde(lam), lam


def test_F_inverse():
    rng = random.Random(3)
    for _ in range(25):
        f = SymFunc.zero()
        for _ in range(3):
            mono = tuple(sorted((rng.randrange(1, 4) for _ in range(2)), reverse=True))
            f = f + SymFunc.from_monomial(mono, rng.randrange(-2, 3))
        assert apply_F_inv(apply_F(f)) == f
        assert apply_F(apply_F_inv(f)) == f


def test_F_is_a_ring_morphism():
    a = h(2) * h(1) - h(3)
    b = h(1) * h(1) + 2
    assert apply_F(a * b) == apply_F(a) * apply_F(b)
    assert apply_F(a + b) == apply_F(a) + apply_F(b)


def test_Omega_is_an_involution():
    for lam in all_shapes(5):
        f = dual_grothendieck(lam)
        assert apply_Omega(apply_Omega(f)) == f, lam


def test_Omega_commutes_with_F():
    for lam in all_shapes(5):
        f = dual_grothendieck(lam)
        assert apply_Omega(apply_F(f)) == apply_F(apply_Omega(f)), lam


def test_Omega_transposes_the_closed_family():
    # on the stable family the involution acts by conjugating the shape
    for lam in all_shapes(5):
        assert apply_Omega(dual_grothendieck(lam)) == dual_grothendieck(conjugate(lam)), lam


def test_ring_morphism_generic():
    phi = RingMorphism(lambda i: h(i) + (1 if i == 1 else 0))
    a, b = h(1) * h(2), h(1) + h(3)
    assert phi(a * b) == phi(a) * phi(b)
    assert phi(a + b) == phi(a) + phi(b)
    assert phi(SymFunc.one()) == SymFunc.one()


# -- triangular expansion ----------------------------------------------------


def test_expand_in_family_round_trip():
    labels = [lam for lam in all_shapes(5)]
    family = [(lam, dual_grothendieck(lam)) for lam in labels]
    rng = random.Random(9)
    for _ in range(10):
        combo = {lam: rng.randrange(-3, 4) for lam in rng.sample(labels, 4)}
        f = SymFunc.zero()
        for lam, c in combo.items():
            f = f + dual_grothendieck(lam) * c
        got = expand_in_family(f, family)
        assert got == {lam: c for lam, c in combo.items() if c}


def test_expand_in_family_not_in_span():
    family = [((1,), h(1)), ((2,), h(2))]
    with pytest.raises(NotInSpan):
        expand_in_family(h(3), family)


def test_expand_in_family_not_triangular():
    family = [((2,), h(2) + h(1)), ((1, 1), h(2) + h(1))]
    with pytest.raises(NotTriangular):
        expand_in_family(h(2) + h(1) * 2, family)
