"""Root ideals, weighted triples, rewriting steps, and straightening."""

import doctest
import random

import pytest

import kkschur.katalan as KT
from kkschur.katalan import (
    HypothesisViolated,
    KatalanTriple,
    PreconditionViolated,
    REWRITE_NAMES,
    RootIdeal,
    absorption,
    add_root_i,
    add_root_ii,
    bounce_up_1,
    bounce_up_2,
    closed_triple,
    delta_k,
    evaluate,
    evaluate_lrkh,
    evaluate_reordered,
    evaluate_rewrite,
    evaluate_subset_oracle,
    kkschur_triple,
    random_rewrite_instance,
    render_diagram,
    residue_r,
    straighten,
    vanish,
)
from kkschur.symfunc import SymFunc, h


def test_doctests():
    assert doctest.testmod(KT).failed == 0


# -- bounce structure of root ideals -----------------------------------------


def test_bounce_graph_nine_rows():
    psi = RootIdeal(9, (3, 5, 6, 6, 7, 9, 10, 10, 10))
    assert psi.up(3) == 1
    assert psi.up(7) == 5
    assert psi.top(7) == 2 and psi.top(5) == 2 and psi.top(2) == 2
    comp = {}
    for p in range(1, 10):
        comp.setdefault(psi.top(p), set()).add(p)
    assert sorted(map(sorted, comp.values())) == [[1, 3], [2, 5, 7], [4, 6, 9], [8]]
    assert psi.has_ceiling((1, 2)) and psi.has_ceiling((3, 4))
    assert psi.has_ceiling((7, 8))
    assert not psi.has_ceiling((2, 3)) and not psi.has_ceiling((4, 5))
    assert psi.has_wall((3, 4)) and psi.has_wall((7, 8, 9))
    assert not psi.has_wall((1, 2)) and not psi.has_wall((2, 3))


def test_mirror_path():
    psi = RootIdeal(10, (3, 5, 6, 8, 9, 10, 11, 11, 11, 11))
    assert psi.mtop(10) == 3
    assert psi.up(10) == 6 and psi.up(6) == 3
    assert psi.is_mirror_edge(10) and psi.is_mirror_edge(6)
    assert not psi.is_mirror_edge(3)


# -- triples: rendering and serialization ------------------------------------


def test_five_by_five_triple():
    psi = RootIdeal(5, (2, 4, 5, 6, 6))
    assert sorted(psi.roots()) == [
        (1, 2), (1, 3), (1, 4), (1, 5), (2, 4), (2, 5), (3, 5),
    ]
    assert psi.multiset() == (0, 1, 1, 2, 3)
    t = KatalanTriple(psi, {3: 1, 4: 1, 5: 2}, (3, 2, 0, 1, 0))
    assert t.m == (0, 0, 1, 1, 2)
    assert render_diagram(t) == (
        "3 # @ @ @\n"
        "  2 . # @\n"
        "    0 . #\n"
        "      1 .\n"
        "        0\n"
    )
    assert KatalanTriple.from_json(t.to_json()) == t
    assert t.to_json() == (
        '{"ell":5,"psi_first_col":[2,4,5,6,6],'
        '"m":{"3":1,"4":1,"5":2},"gamma":[3,2,0,1,0]}'
    )


# -- closed triples and evaluation -------------------------------------------

ANCHOR_211 = h(2) * h(1) * h(1) + h(2) * h(1) - h(2) * h(2)


def test_closed_triple_of_211():
    t = closed_triple((2, 1, 1), 3, 3)
    assert t.psi.first_col == (3, 4, 4)
    assert t.m == (0, 0, 1)
    assert evaluate(t) == ANCHOR_211


def test_column_counts_of_ideal():
    assert delta_k((2, 1, 1), 3, 3).first_col == (3, 4, 4)
    assert delta_k((), 2, 4).first_col == (4, 5, 5, 5)


def test_iterated_factorization_oracle():
    assert evaluate_lrkh((2, 1, 1), 3) == ANCHOR_211
    assert evaluate_lrkh((), 3) == SymFunc.one()
    assert evaluate_lrkh((3,), 3) == h(3)


def test_closed_value_independent_of_frame_size():
    for ell in (4, 5):
        assert evaluate(closed_triple((2, 1, 1), 3, ell)) == ANCHOR_211


def test_open_triple_of_a_row_is_a_single_generator():
    assert evaluate(kkschur_triple((2,), 2, 1)) == h(2)
    assert evaluate(kkschur_triple((3,), 3, 1)) == h(3)


def _all_ideals(ell):
    out = []

    def rec(pref):
        i = len(pref)
        if i == ell:
            out.append(RootIdeal(ell, tuple(pref)))
            return
        lo = max(i + 2, pref[-1] if pref else 0)
        for c in range(lo, ell + 2):
            rec(pref + [c])

    rec([])
    return out


def _random_cases(max_ell, per_ideal, seed=7):
    rng = random.Random(seed)
    cases = []
    for ell in range(2, max_ell + 1):
        for psi in _all_ideals(ell):
            for _ in range(per_ideal):
                m = tuple(rng.randrange(0, 2) for _ in range(ell))
                gam = tuple(rng.randrange(-1, 3) for _ in range(ell))
                cases.append(KatalanTriple(psi, m, gam))
    return cases


def test_evaluate_matches_subset_oracle():
    cases = _random_cases(3, 2)
    assert len(cases) == 14
    for t in cases:
        assert evaluate(t) == evaluate_subset_oracle(t), t


def test_evaluate_reorder_invariance():
    rng = random.Random(7)
    for t in rng.sample(_random_cases(3, 2), 10):
        nfac = len(KT._factor_sequence(t))
        order = list(range(nfac))
        rng.shuffle(order)
        assert evaluate(t) == evaluate_reordered(t, order)


# -- single rewriting steps on worked instances ------------------------------


def test_add_root_below_diagonal_pair():
    t = KatalanTriple(RootIdeal(4, (3, 4, 4, 5)), (0, 0, 0, 0), (1, 0, 1, 1))
    rhs = add_root_i(t, (2, 3))
    assert rhs == [
        (1, KatalanTriple(RootIdeal(4, (3, 3, 4, 5)), (0, 0, 0, 0), (1, 0, 1, 1))),
        (-1, KatalanTriple(RootIdeal(4, (3, 3, 4, 5)), (0, 0, 0, 0), (1, 1, 0, 1))),
    ]
    assert evaluate(t) == evaluate_rewrite(rhs)


def test_add_root_with_dot_pair():
    t = KatalanTriple(RootIdeal(4, (3, 4, 4, 5)), (0, 0, 0, 0), (1, 0, 1, 1))
    rhs = add_root_ii(t, (3, 4))
    assert rhs == [
        (1, KatalanTriple(RootIdeal(4, (3, 4, 5, 5)), (0, 0, 0, 0), (1, 0, 1, 1))),
        (1, KatalanTriple(RootIdeal(4, (3, 4, 4, 5)), (0, 0, 0, 0), (1, 0, 2, 0))),
    ]
    assert evaluate(t) == evaluate_rewrite(rhs)


def test_absorption_instance():
    t = KatalanTriple(
        RootIdeal(6, (3, 5, 7, 7, 7, 7)),
        {3: 1, 4: 1, 5: 2, 6: 2},
        (3, 2, 1, 0, 0, 1),
    )
    rhs = absorption(t, 6)
    assert rhs == [
        (
            1,
            KatalanTriple(
                RootIdeal(6, (3, 5, 7, 7, 7, 7)),
                {3: 1, 4: 1, 5: 2, 6: 2},
                (3, 2, 1, 0, 0, 0),
            ),
        )
    ]
    assert evaluate(t) == evaluate_rewrite(rhs)


def test_bounce_up_instances():
    t = KatalanTriple(
        RootIdeal(9, (3, 5, 6, 8, 9, 9, 10, 10, 10)),
        {3: 1, 4: 1, 5: 2, 6: 3, 7: 3, 8: 4, 9: 5},
        (3, 2, 2, 1, 1, 2, 0, 0, 0),
    )
    [(s1, b1)] = bounce_up_1(t, 6)
    assert s1 == 1 and b1 == KatalanTriple(
        RootIdeal(9, (3, 5, 5, 8, 9, 9, 10, 10, 10)),
        {3: 1, 4: 1, 5: 2, 6: 3, 7: 3, 8: 4, 9: 5},
        (3, 2, 3, 1, 1, 1, 0, 0, 0),
    )
    [(s2, b2)] = bounce_up_2(t, 6)
    assert s2 == 1 and b2 == KatalanTriple(
        RootIdeal(9, (3, 5, 5, 8, 9, 9, 10, 10, 10)),
        {3: 1, 4: 1, 5: 3, 6: 3, 7: 3, 8: 4, 9: 5},
        (3, 2, 3, 1, 1, 1, 0, 0, 0),
    )


def test_bounce_up_with_dot_high_row():
    t = KatalanTriple(
        RootIdeal(9, (3, 5, 6, 8, 9, 10, 10, 10, 10)),
        {3: 1, 4: 1, 5: 2, 6: 3, 7: 3, 8: 4, 9: 5},
        (3, 2, 2, 1, 1, 1, 0, 1, 0),
    )
    [(s, b)] = bounce_up_2(t, 8)
    assert s == 1 and b == KatalanTriple(
        RootIdeal(9, (3, 5, 6, 7, 9, 10, 10, 10, 10)),
        {3: 1, 4: 1, 5: 2, 6: 3, 7: 4, 8: 4, 9: 5},
        (3, 2, 2, 2, 1, 1, 0, 0, 0),
    )


def test_vanishing_pair_gives_zero():
    t = KatalanTriple(RootIdeal(3, (2, 4, 4)), (0, 1, 2), (2, 0, 1))
    assert vanish(t, 2) == []
    assert evaluate(t) == SymFunc.zero()


# -- randomized preservation for every step ----------------------------------


def test_rewrite_names_catalogue():
    assert REWRITE_NAMES == (
        "add_root_i",
        "add_root_ii",
        "dot_i",
        "dot_ii",
        "alternating",
        "vanish",
        "bounce_up_1",
        "bounce_up_2",
        "absorption",
        "cleaning",
    )


@pytest.mark.parametrize("name", REWRITE_NAMES)
def test_rewrite_preserves_value(name):
    rng = random.Random(514)
    for _ in range(40):
        t, rhs = random_rewrite_instance(name, rng)
        assert evaluate(t) == evaluate_rewrite(rhs), (name, t)


def test_random_instances_are_reproducible():
    a = random_rewrite_instance("cleaning", random.Random(99))
    b = random_rewrite_instance("cleaning", random.Random(99))
    assert a == b


def test_hypothesis_violations_raise():
    t = KatalanTriple(RootIdeal(3, (3, 4, 4)), (0, 0, 0), (2, 0, 1))
    with pytest.raises(HypothesisViolated):
        vanish(t, 1)  # the two rows are not an equal-weight pair
    with pytest.raises(HypothesisViolated):
        absorption(t, 3)


# -- straightening -----------------------------------------------------------


def test_straighten_raised_branch():
    res = straighten((3, 2, 1), 5, 4, 6)
    assert res.case == "raised" and res.partition == (3, 3, 1)
    assert res.triple == closed_triple((3, 3, 1), 4, 6)
    start = closed_triple((3, 2, 1), 4, 6).gamma_shift({5: 1})
    assert evaluate(start) == evaluate(res.triple)
    assert evaluate(res.triple) == evaluate(closed_triple((3, 3, 1), 4, 3))


def test_straighten_absorbed_branch():
    res = straighten((3, 2, 1), 6, 4, 6)
    assert res.case == "absorbed" and res.partition == (3, 2, 1)
    start = closed_triple((3, 2, 1), 4, 6).gamma_shift({6: 1})
    assert evaluate(start) == evaluate(res.triple)


def test_row_residues():
    assert residue_r(1, 4) == 0
    assert residue_r(5, 4) == 1
    assert residue_r(6, 4) == 0
    assert residue_r(4, 2) == 0


def test_straighten_through_mirror_path():
    # find a small instance whose forced bounce path crosses several rows,
    # so the multi-step sweep is genuinely exercised
    found = None
    for k in (2, 3):
        for ell in range(3, 8):
            for lam in _k_bounded(k, ell - 2):
                for p in range(max(ell - k + 1, len(lam) + 2), ell + 1):
                    psi = delta_k(lam, k, ell)
                    path = [p]
                    while psi.is_mirror_edge(path[-1]):
                        path.append(psi.up(path[-1]))
                    if len(path) >= 2 and found is None:
                        found = (lam, p, k, ell)
    assert found is not None
    lam, p, k, ell = found
    res = straighten(lam, p, k, ell)
    start = closed_triple(lam, k, ell).gamma_shift({p: 1})
    assert evaluate(start) == evaluate(res.triple)


def _k_bounded(k, max_rows):
    def parts(maxpart, rows):
        if rows == 0:
            yield ()
            return
        for first in range(maxpart, 0, -1):
            for rest in parts(first, rows - 1):
                yield (first,) + rest

    for rows in range(0, max_rows + 1):
        yield from parts(k, rows)


def test_straighten_exhaustive_small():
    checked = 0
    for k in (1, 2, 3):
        for ell in range(2, 6):
            for lam in _k_bounded(k, ell - 1):
                for p in range(max(ell - k + 1, len(lam) + 2), ell + 1):
                    res = straighten(lam, p, k, ell)
                    start = closed_triple(lam, k, ell).gamma_shift({p: 1})
                    assert evaluate(start) == evaluate(res.triple), (k, ell, lam, p)
                    checked += 1
    assert checked > 50


def test_straighten_preconditions():
    for bad in (((3, 2, 1), 2, 4, 6), ((3, 2, 1), 7, 4, 6), ((3, 2, 1), 4, 4, 6)):
        with pytest.raises(PreconditionViolated):
            straighten(*bad)
