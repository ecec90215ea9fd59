"""Root ideals, Katalan triples, their exact evaluation, and rewrite rules.

Fix a grid size ``ell``.  The positive roots are the pairs ``(i, j)`` with
``1 <= i < j <= ell``; an upper order ideal of them (closed under moving up
and right) is a *root ideal*, stored compactly as, for each row, the first
column that belongs to the ideal.  A *Katalan triple* ``(psi, m, gamma)``
combines a root ideal, a multiset of columns (dots), and an integer weight
vector.  Its *evaluation* is the symmetric function

    prod_{j in m} (1 - L_j) prod_{(i,j) not in psi} (1 - R_ij) k_gamma,

where ``L_j`` lowers coordinate j, ``R_ij`` moves one unit from coordinate j
to coordinate i, both acting on the subscript vector, and ``k_gamma`` is
:func:`kkschur.symfunc.k_weight`.  The products are expanded over a finitely
supported map from weight vectors to coefficients, with dead vectors (those
that can no longer come back to nonnegative coordinates) pruned.

The module also provides the canonical triples attached to a k-bounded
partition, a faster evaluator for the closed triple via geometric series
over ``h_lambda``, bounce-graph queries (removable and addable roots, bounce
edges, tops, mirror tops, walls, ceilings), the nine local rewrite steps,
and the straightening procedure that normalizes the closed triple of
``lam + eps_p`` by a mirror-path sweep, a branch step, and a cleaning sweep.
Every rewrite step validates its hypotheses and raises
:class:`HypothesisViolated` naming the failed clause.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple

from .symfunc import Monomial, Partition, SymFunc, as_partition, k_weight

__all__ = [
    "HypothesisViolated",
    "KatalanTriple",
    "NormalizationError",
    "PreconditionViolated",
    "REWRITE_NAMES",
    "RootIdeal",
    "StraightenResult",
    "absorption",
    "add_root_i",
    "add_root_ii",
    "alternating",
    "bounce_up_1",
    "bounce_up_2",
    "cleaning",
    "closed_triple",
    "delta_k",
    "dot_i",
    "dot_ii",
    "evaluate",
    "evaluate_lrkh",
    "evaluate_reordered",
    "evaluate_rewrite",
    "evaluate_subset_oracle",
    "kkschur_triple",
    "random_rewrite_instance",
    "render_diagram",
    "residue_r",
    "straighten",
    "vanish",
]


class HypothesisViolated(ValueError):
    """A rewrite step was invoked on a triple violating a hypothesis."""


class PreconditionViolated(ValueError):
    """A procedure was invoked outside its domain of validity."""


class RootIdeal:
    """An upper order ideal of the positive roots in an ell x ell grid.

    ``first_col[i-1]`` is the smallest column of row i lying in the ideal,
    with the value ``ell + 1`` encoding an empty row.

    >>> psi = RootIdeal(3, (3, 4, 4))
    >>> sorted(psi.roots())
    [(1, 3)]
    >>> psi.contains(1, 3), psi.contains(1, 2)
    (True, False)
    """

    __slots__ = ("ell", "first_col")

    def __init__(self, ell: int, first_col: Iterable[int]):
        fc = tuple(first_col)
        if len(fc) != ell:
            raise ValueError(f"need one start column per row (ell={ell}): {fc}")
        for i, c in enumerate(fc, start=1):
            if not i + 1 <= c <= ell + 1:
                raise ValueError(
                    f"row {i} start column must lie in {i + 1}..{ell + 1}: {c}"
                )
            if i > 1 and c < fc[i - 2]:
                raise ValueError(f"start columns must weakly increase: {fc}")
        self.ell = ell
        self.first_col = fc

    @classmethod
    def empty(cls, ell: int) -> "RootIdeal":
        return cls(ell, (ell + 1,) * ell)

    @classmethod
    def full(cls, ell: int) -> "RootIdeal":
        return cls(ell, tuple(range(2, ell + 2)))

    def contains(self, i: int, j: int) -> bool:
        return 1 <= i < j <= self.ell and j >= self.first_col[i - 1]

    def roots(self) -> Iterator[tuple[int, int]]:
        for i in range(1, self.ell + 1):
            for j in range(self.first_col[i - 1], self.ell + 1):
                yield (i, j)

    def complement_roots(self) -> Iterator[tuple[int, int]]:
        for i in range(1, self.ell + 1):
            for j in range(i + 1, self.first_col[i - 1]):
                yield (i, j)

    def __len__(self) -> int:
        return sum(self.ell + 1 - c for c in self.first_col)

    def row_length(self, i: int) -> int:
        """Number of roots in row i."""
        return self.ell + 1 - self.first_col[i - 1]

    def col_length(self, j: int) -> int:
        """Number of roots in column j."""
        return sum(1 for i in range(1, j) if self.first_col[i - 1] <= j)

    def multiset(self) -> tuple[int, ...]:
        """Column multiplicities (m_1, ..., m_ell) of the roots."""
        return tuple(self.col_length(j) for j in range(1, self.ell + 1))

    # -- modification (returning new ideals) --------------------------------

    def removable_roots(self) -> list[tuple[int, int]]:
        """Roots whose removal leaves an upper order ideal."""
        out = []
        for i in range(1, self.ell + 1):
            j = self.first_col[i - 1]
            if j <= self.ell and (i == self.ell or self.first_col[i] > j):
                out.append((i, j))
        return out

    def addable_roots(self) -> list[tuple[int, int]]:
        """Non-roots whose addition leaves an upper order ideal."""
        out = []
        for i in range(1, self.ell + 1):
            j = self.first_col[i - 1] - 1
            if j > i and (i == 1 or self.first_col[i - 2] <= j):
                out.append((i, j))
        return out

    def add_root(self, root: tuple[int, int]) -> "RootIdeal":
        if root not in self.addable_roots():
            raise ValueError(f"root {root} is not addable to {self}")
        i = root[0]
        fc = list(self.first_col)
        fc[i - 1] -= 1
        return RootIdeal(self.ell, fc)

    def remove_root(self, root: tuple[int, int]) -> "RootIdeal":
        if root not in self.removable_roots():
            raise ValueError(f"root {root} is not removable from {self}")
        i = root[0]
        fc = list(self.first_col)
        fc[i - 1] += 1
        return RootIdeal(self.ell, fc)

    # -- bounce graph -------------------------------------------------------

    def up(self, p: int) -> int | None:
        """The row of the removable root in column p, if any."""
        for i, j in self.removable_roots():
            if j == p:
                return i
        return None

    def top(self, p: int) -> int:
        """Follow bounce edges p -> up(p) as far as possible."""
        cur = p
        while True:
            nxt = self.up(cur)
            if nxt is None:
                return cur
            cur = nxt

    def is_mirror_edge(self, p: int) -> bool:
        """Whether p -> up(p) exists and p-1 -> up(p)-1 is also an edge."""
        q = self.up(p)
        return q is not None and self.up(p - 1) == q - 1

    def mtop(self, p: int) -> int:
        """Follow mirror edges as far as possible."""
        cur = p
        while self.is_mirror_edge(cur):
            cur = self.up(cur)  # type: ignore[assignment]
        return cur

    def has_wall(self, rows: Iterable[int]) -> bool:
        """Whether the given rows all have the same number of roots."""
        lengths = {self.row_length(i) for i in rows}
        return len(lengths) <= 1

    def has_ceiling(self, cols: Iterable[int]) -> bool:
        """Whether the given columns all have the same number of roots."""
        lengths = {self.col_length(j) for j in cols}
        return len(lengths) <= 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RootIdeal):
            return NotImplemented
        return self.ell == other.ell and self.first_col == other.first_col

    def __hash__(self) -> int:
        return hash((self.ell, self.first_col))

    def __repr__(self) -> str:
        return f"RootIdeal(ell={self.ell}, first_col={list(self.first_col)})"


def delta_k(lam: Iterable[int], k: int, ell: int) -> RootIdeal:
    """The root ideal {(i, j) : lam_i + j - i > k} in the ell x ell grid.

    >>> delta_k((2, 1, 1), 3, 3)
    RootIdeal(ell=3, first_col=[3, 4, 4])
    """
    lam = as_partition(lam)
    if lam and lam[0] > k:
        raise ValueError(f"partition is not {k}-bounded: {lam}")
    if ell < len(lam):
        raise ValueError(f"grid size {ell} is smaller than the partition length")
    padded = lam + (0,) * (ell - len(lam))
    fc = [min(max(i + 1, k + i - padded[i - 1] + 1), ell + 1) for i in range(1, ell + 1)]
    return RootIdeal(ell, fc)


class KatalanTriple:
    """A root ideal, a column multiset, and a weight vector of shared size.

    The multiset may be given as column multiplicities (a sequence of length
    ell) or as a mapping column -> multiplicity.
    """

    __slots__ = ("psi", "m", "gamma")

    def __init__(
        self,
        psi: RootIdeal,
        m: Iterable[int] | Mapping[int, int],
        gamma: Iterable[int],
    ):
        ell = psi.ell
        if isinstance(m, Mapping):
            mult = [0] * ell
            for col, count in m.items():
                col = int(col)
                if not 1 <= col <= ell:
                    raise ValueError(f"multiset column out of range 1..{ell}: {col}")
                if count < 0:
                    raise ValueError(f"multiset counts must be nonnegative: {count}")
                mult[col - 1] += count
            mtup = tuple(mult)
        else:
            mtup = tuple(m)
            if len(mtup) != ell or any(c < 0 for c in mtup):
                raise ValueError(
                    f"need {ell} nonnegative column multiplicities: {mtup}"
                )
        gam = tuple(gamma)
        if len(gam) != ell:
            raise ValueError(f"weight vector must have length {ell}: {gam}")
        self.psi = psi
        self.m = mtup
        self.gamma = gam

    def with_gamma(self, gamma: Iterable[int]) -> "KatalanTriple":
        return KatalanTriple(self.psi, self.m, gamma)

    def gamma_shift(self, deltas: Mapping[int, int]) -> "KatalanTriple":
        """Shift the weight vector by deltas at the given (1-based) rows."""
        gam = list(self.gamma)
        for row, d in deltas.items():
            gam[row - 1] += d
        return KatalanTriple(self.psi, self.m, gam)

    def m_count(self, col: int) -> int:
        return self.m[col - 1]

    def m_changed(self, col: int, delta: int) -> tuple[int, ...]:
        mult = list(self.m)
        mult[col - 1] += delta
        if mult[col - 1] < 0:
            raise ValueError(f"column {col} not present in the multiset")
        return tuple(mult)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KatalanTriple):
            return NotImplemented
        return (
            self.psi == other.psi and self.m == other.m and self.gamma == other.gamma
        )

    def __hash__(self) -> int:
        return hash((self.psi, self.m, self.gamma))

    def __repr__(self) -> str:
        return (
            f"KatalanTriple(psi={self.psi!r}, m={list(self.m)}, "
            f"gamma={list(self.gamma)})"
        )

    def to_json_dict(self) -> dict:
        return {
            "ell": self.psi.ell,
            "psi_first_col": list(self.psi.first_col),
            "m": {
                str(j): self.m[j - 1]
                for j in range(1, self.psi.ell + 1)
                if self.m[j - 1]
            },
            "gamma": list(self.gamma),
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "KatalanTriple":
        ell = int(data["ell"])
        psi = RootIdeal(ell, data["psi_first_col"])
        return cls(psi, {int(j): int(c) for j, c in data["m"].items()}, data["gamma"])

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "KatalanTriple":
        return cls.from_json_dict(json.loads(text))


def closed_triple(lam: Iterable[int], k: int, ell: int) -> KatalanTriple:
    """The triple (delta_k(lam), dots of delta_k(lam), lam)."""
    lam = as_partition(lam)
    psi = delta_k(lam, k, ell)
    return KatalanTriple(psi, psi.multiset(), lam + (0,) * (ell - len(lam)))


def kkschur_triple(lam: Iterable[int], k: int, ell: int) -> KatalanTriple:
    """The triple (delta_k(lam), dots of delta_{k+1}(lam), lam)."""
    lam = as_partition(lam)
    psi = delta_k(lam, k, ell)
    dots = delta_k(lam, k + 1, ell).multiset()
    return KatalanTriple(psi, dots, lam + (0,) * (ell - len(lam)))


# -- evaluation -------------------------------------------------------------


def _factor_sequence(t: KatalanTriple) -> list[tuple[str, int, int]]:
    """The fixed factor order: dot factors by column ascending (with
    multiplicity), then complement-root factors lexicographically."""
    factors: list[tuple[str, int, int]] = []
    for j in range(1, t.psi.ell + 1):
        factors.extend(("L", 0, j) for _ in range(t.m[j - 1]))
    factors.extend(("R", i, j) for i, j in t.psi.complement_roots())
    return factors


def _expand(
    gamma: tuple[int, ...],
    factors: list[tuple[str, int, int]],
    prune: bool,
) -> dict[tuple[int, ...], int]:
    """Apply the (1 - op) factors to the singleton support {gamma: 1}."""
    ell = len(gamma)
    raises_after = []
    tail = [0] * ell
    for kind, i, _ in reversed(factors):
        raises_after.append(tuple(tail))
        if kind == "R":
            tail[i - 1] += 1
    raises_after.reverse()

    support = {gamma: 1}
    for f, (kind, i, j) in enumerate(factors):
        future = raises_after[f]
        new: dict[tuple[int, ...], int] = {}
        for vec, coef in support.items():
            targets = [(vec, coef)]
            if kind == "L":
                moved = list(vec)
                moved[j - 1] -= 1
                targets.append((tuple(moved), -coef))
            else:
                moved = list(vec)
                moved[i - 1] += 1
                moved[j - 1] -= 1
                targets.append((tuple(moved), -coef))
            for tvec, tcoef in targets:
                if prune and any(
                    tvec[a] + future[a] < 0 for a in range(ell)
                ):
                    continue
                val = new.get(tvec, 0) + tcoef
                if val:
                    new[tvec] = val
                else:
                    new.pop(tvec, None)
        support = new
    return support


def evaluate(t: KatalanTriple) -> SymFunc:
    """The symmetric function of a Katalan triple, expanded exactly.

    >>> from .symfunc import h
    >>> evaluate(KatalanTriple(RootIdeal.full(2), (0, 0), (1, 1))) == k_weight((1, 1))
    True
    """
    support = _expand(t.gamma, _factor_sequence(t), prune=True)
    total = SymFunc.zero()
    for vec, coef in support.items():
        w = k_weight(vec)
        if w:
            total = total + w * coef
    return total


def evaluate_subset_oracle(t: KatalanTriple) -> SymFunc:
    """Brute-force evaluation: sum over all subsets of the factor list."""
    factors = _factor_sequence(t)
    total = SymFunc.zero()
    for mask in range(1 << len(factors)):
        vec = list(t.gamma)
        sign = 1
        sel = mask
        idx = 0
        while sel:
            if sel & 1:
                kind, i, j = factors[idx]
                sign = -sign
                vec[j - 1] -= 1
                if kind == "R":
                    vec[i - 1] += 1
            sel >>= 1
            idx += 1
        w = k_weight(vec)
        if w:
            total = total + w * sign
    return total


def evaluate_reordered(t: KatalanTriple, order: list[int]) -> SymFunc:
    """Evaluation with the factor list permuted (oracle for commutativity)."""
    factors = _factor_sequence(t)
    if sorted(order) != list(range(len(factors))):
        raise ValueError("order must be a permutation of the factor indices")
    support = _expand(t.gamma, [factors[p] for p in order], prune=False)
    total = SymFunc.zero()
    for vec, coef in support.items():
        w = k_weight(vec)
        if w:
            total = total + w * coef
    return total


def evaluate_lrkh(lam: Iterable[int], k: int) -> SymFunc:
    """The closed-triple value via inverted dot factors over h_lambda:
    prod over complement roots (i, j) of (1-L_j)^{-1} (1-R_ij), applied to
    the plain product h_{lam_1} ... h_{lam_ell}.

    >>> from .symfunc import h
    >>> evaluate_lrkh((3,), 3) == h(3)
    True
    """
    lam = as_partition(lam)
    if lam and lam[0] > k:
        raise ValueError(f"partition is not {k}-bounded: {lam}")
    ell = len(lam)
    if ell == 0:
        return SymFunc.one()
    psi = delta_k(lam, k, ell)
    complement = list(psi.complement_roots())
    rfactors = [("R", i, j) for i, j in complement]
    support = _expand(lam, rfactors, prune=True)

    series_mult = [0] * ell
    for _, j in complement:
        series_mult[j - 1] += 1

    from .symfunc import binom

    total = SymFunc.zero()
    for vec, coef in support.items():
        if any(v < 0 for v in vec):
            continue
        expansions: list[tuple[tuple[int, ...], int]] = [(vec, coef)]
        for col in range(1, ell + 1):
            d = series_mult[col - 1]
            if not d:
                continue
            grown: list[tuple[tuple[int, ...], int]] = []
            for v, c in expansions:
                for mdrop in range(v[col - 1] + 1):
                    moved = list(v)
                    moved[col - 1] -= mdrop
                    grown.append((tuple(moved), c * binom(d + mdrop - 1, mdrop)))
            expansions = grown
        for v, c in expansions:
            total = total + SymFunc.from_monomial(v, c)
    return total


# -- rewrite steps ----------------------------------------------------------

Rewrite = list[tuple[int, KatalanTriple]]


def evaluate_rewrite(rhs: Rewrite) -> SymFunc:
    """Signed sum of the evaluations of a rewrite right-hand side."""
    total = SymFunc.zero()
    for sign, triple in rhs:
        total = total + evaluate(triple) * sign
    return total


def _require(cond: bool, clause: str) -> None:
    if not cond:
        raise HypothesisViolated(clause)


def add_root_i(t: KatalanTriple, root: tuple[int, int]) -> Rewrite:
    """Split along an addable root alpha=(i,j):
    K(psi; m; gamma) = K(psi+alpha; m; gamma) - K(psi+alpha; m; gamma+alpha).
    """
    _require(
        root in t.psi.addable_roots(), f"(i) root {root} must be addable"
    )
    bigger = t.psi.add_root(root)
    i, j = root
    return [
        (1, KatalanTriple(bigger, t.m, t.gamma)),
        (-1, KatalanTriple(bigger, t.m, t.gamma_shift({i: 1, j: -1}).gamma)),
    ]


def add_root_ii(t: KatalanTriple, root: tuple[int, int]) -> Rewrite:
    """Split along a removable root alpha=(i,j):
    K(psi; m; gamma) = K(psi-alpha; m; gamma) + K(psi; m; gamma+alpha).
    """
    _require(
        root in t.psi.removable_roots(), f"(ii) root {root} must be removable"
    )
    smaller = t.psi.remove_root(root)
    i, j = root
    return [
        (1, KatalanTriple(smaller, t.m, t.gamma)),
        (1, t.gamma_shift({i: 1, j: -1})),
    ]


def dot_i(t: KatalanTriple, j: int) -> Rewrite:
    """Remove a dot in column j:
    K(psi; m; gamma) = K(psi; m-j; gamma) - K(psi; m-j; gamma-eps_j).
    """
    _require(t.m_count(j) > 0, f"(i) column {j} must carry a dot")
    fewer = t.m_changed(j, -1)
    return [
        (1, KatalanTriple(t.psi, fewer, t.gamma)),
        (-1, KatalanTriple(t.psi, fewer, t.gamma_shift({j: -1}).gamma)),
    ]


def dot_ii(t: KatalanTriple, j: int) -> Rewrite:
    """Add a dot in column j:
    K(psi; m; gamma) = K(psi; m+j; gamma) + K(psi; m; gamma-eps_j).
    """
    more = t.m_changed(j, 1)
    return [
        (1, KatalanTriple(t.psi, more, t.gamma)),
        (1, t.gamma_shift({j: -1})),
    ]


def alternating(t: KatalanTriple, i: int) -> Rewrite:
    """Reflect the weight across i, i+1:
    K(gamma) = -K(s_i gamma - eps_i + eps_{i+1}), given a ceiling in columns
    i, i+1, a wall in rows i, i+1, and m(i+1) = m(i) + 1.
    """
    _require(t.psi.has_ceiling((i, i + 1)), f"(a) ceiling in columns {i},{i + 1}")
    _require(t.psi.has_wall((i, i + 1)), f"(b) wall in rows {i},{i + 1}")
    _require(
        t.m_count(i + 1) == t.m_count(i) + 1,
        f"(c) m({i + 1}) = m({i}) + 1",
    )
    gam = list(t.gamma)
    gam[i - 1], gam[i] = gam[i] - 1, gam[i - 1] + 1
    return [(-1, t.with_gamma(gam))]


def vanish(t: KatalanTriple, i: int) -> Rewrite:
    """K = 0 when, in addition to the alternating hypotheses at i,
    gamma_{i+1} = gamma_i + 1 (the reflection fixes the triple)."""
    alternating(t, i)
    _require(
        t.gamma[i] == t.gamma[i - 1] + 1,
        f"(d) gamma[{i + 1}] = gamma[{i}] + 1",
    )
    return []


def bounce_up_1(t: KatalanTriple, p: int) -> Rewrite:
    """Push the weight up a bounce edge p -> q, adding the root (q, p-1):
    K(psi; m; gamma) = K(psi+(q,p-1); m; gamma+eps_q-eps_p)."""
    q = t.psi.up(p)
    _require(q is not None, f"bounce edge from column {p} must exist")
    beta = (q, p - 1)
    _require(beta in t.psi.addable_roots(), f"(a) root {beta} must be addable")
    _require(
        t.gamma[p - 1] == t.gamma[p - 2] + 1,
        f"(b) gamma[{p}] = gamma[{p - 1}] + 1",
    )
    _require(
        t.m_count(p) == t.m_count(p - 1) + 1, f"(c) m({p}) = m({p - 1}) + 1"
    )
    _require(t.psi.has_wall((p - 1, p)), f"(d) wall in rows {p - 1},{p}")
    bigger = t.psi.add_root(beta)
    gam = t.gamma_shift({q: 1, p: -1}).gamma
    return [(1, KatalanTriple(bigger, t.m, gam))]


def bounce_up_2(t: KatalanTriple, p: int) -> Rewrite:
    """As bounce_up_1, but also add a dot in column p-1:
    K(psi; m; gamma) = K(psi+(q,p-1); m+(p-1); gamma+eps_q-eps_p)."""
    [(sign, moved)] = bounce_up_1(t, p)
    return [(sign, KatalanTriple(moved.psi, moved.m_changed(p - 1, 1), moved.gamma))]


def absorption(t: KatalanTriple, p: int) -> Rewrite:
    """Drop the raised entry: K(psi; m; gamma) = K(psi; m; gamma-eps_p),
    when p >= 2, column p has no bounce edge (top(p) = p),
    gamma_p = gamma_{p-1} + 1, m(p) = m(p-1), and rows p-1, p form a wall."""
    _require(p >= 2, "row index p must be at least 2")
    _require(t.psi.top(p) == p, f"(a) top({p}) = {p}")
    _require(
        t.gamma[p - 1] == t.gamma[p - 2] + 1,
        f"(b) gamma[{p}] = gamma[{p - 1}] + 1",
    )
    _require(t.m_count(p) == t.m_count(p - 1), f"(c) m({p}) = m({p - 1})")
    _require(t.psi.has_wall((p - 1, p)), f"(d) wall in rows {p - 1},{p}")
    return [(1, t.gamma_shift({p: -1}))]


def cleaning(t: KatalanTriple, p: int) -> Rewrite:
    """Remove the removable root (q, p-1) without changing the value:
    requires a wall in rows p-1, p, a ceiling in columns p-1, p,
    gamma_p = gamma_{p-1}, and m(p) = m(p-1) + 1.

    Correctness: dropping the root adds the factor (1 - R_{q,p-1}), so the
    difference of the two sides is the value of (psi, m, gamma + eps_q -
    eps_{p-1}), which is zero by :func:`vanish` at i = p-1 under exactly
    these hypotheses.
    """
    q = t.psi.up(p - 1)
    _require(q is not None, f"(a) column {p - 1} must have a removable root")
    beta = (q, p - 1)
    _require(t.psi.has_wall((p - 1, p)), f"(b) wall in rows {p - 1},{p}")
    _require(t.psi.has_ceiling((p - 1, p)), f"(c) ceiling in columns {p - 1},{p}")
    _require(
        t.gamma[p - 1] == t.gamma[p - 2], f"(d) gamma[{p}] = gamma[{p - 1}]"
    )
    _require(
        t.m_count(p) == t.m_count(p - 1) + 1, f"(e) m({p}) = m({p - 1}) + 1"
    )
    return [(1, KatalanTriple(t.psi.remove_root(beta), t.m, t.gamma))]


# -- straightening ----------------------------------------------------------


def residue_r(p: int, k: int) -> int:
    """The residue attached to row p: (-p + 1) mod (k + 1).

    >>> residue_r(1, 3), residue_r(5, 3)
    (0, 0)
    """
    return (-p + 1) % (k + 1)


class NormalizationError(RuntimeError):
    """The straightening run ended in an unexpected configuration."""


class StraightenResult(NamedTuple):
    triple: KatalanTriple
    case: str  # "raised" (weight moved to a new partition) or "absorbed"
    partition: Partition


def straighten(lam: Iterable[int], p: int, k: int, ell: int) -> StraightenResult:
    """Normalize the closed triple of lam with the weight raised at row p.

    Requires ell - k < p <= ell and p >= len(lam) + 2.  Runs the mirror-path
    sweep of bounce-up steps, then branches: if the bounce path of p in the
    original ideal ends strictly below that of p-1, a final bounce-up (with
    dot) followed by a cleaning sweep yields the closed triple of a new
    partition lam + eps_q ("raised"); otherwise an absorption followed by
    the cleaning sweep returns the closed triple of lam itself ("absorbed").

    The returned triple is validated to be the canonical closed triple of
    the returned partition.
    """
    lam = as_partition(lam)
    if not (ell - k < p <= ell):
        raise PreconditionViolated(f"need {ell - k} < p <= {ell}: p = {p}")
    if p < len(lam) + 2:
        raise PreconditionViolated(
            f"need p >= len(lam) + 2 = {len(lam) + 2}: p = {p}"
        )
    start = closed_triple(lam, k, ell)
    cur = start.gamma_shift({p: 1})
    psi = start.psi

    path = [p]
    while psi.is_mirror_edge(path[-1]):
        path.append(psi.up(path[-1]))
    for step_p in path[:-1]:
        [(_, cur)] = bounce_up_1(cur, step_p)
    mirror_top = path[-1]

    top_p, top_p1 = psi.top(p), psi.top(p - 1)
    if top_p == top_p1:
        raise NormalizationError(
            f"bounce tops of {p} and {p - 1} coincide at {top_p}"
        )
    if top_p < top_p1:
        case = "raised"
        [(_, cur)] = bounce_up_2(cur, mirror_top)
    else:
        case = "absorbed"
        [(_, cur)] = absorption(cur, mirror_top)

    for step_p in reversed(path[:-1]):
        [(_, cur)] = cleaning(cur, step_p)

    try:
        result_lam = as_partition(cur.gamma)
        expected = closed_triple(result_lam, k, ell)
    except ValueError:
        expected = None
    if expected is None or cur != expected:
        raise NormalizationError(
            f"straightening ended at {cur}, not a canonical closed triple"
        )
    return StraightenResult(cur, case, result_lam)


# -- rendering --------------------------------------------------------------


def render_diagram(t: KatalanTriple) -> str:
    """A deterministic text picture: the weight on the diagonal, '#' for
    roots, 'o' for dots (drawn in the topmost rows of their column when they
    fit strictly above the diagonal), '@' for both, '.' for neither.
    Columns whose dot count does not fit are annotated in a footer."""
    ell = t.psi.ell
    width = max((len(str(g)) for g in t.gamma), default=1)
    width = max(width, 1)
    overflow = {
        j: t.m[j - 1] for j in range(1, ell + 1) if t.m[j - 1] > j - 1
    }
    lines = []
    for i in range(1, ell + 1):
        cells = []
        for j in range(1, ell + 1):
            if j < i:
                cell = " "
            elif j == i:
                cell = str(t.gamma[i - 1])
            else:
                root = t.psi.contains(i, j)
                dot = j not in overflow and i <= t.m[j - 1]
                cell = "@" if root and dot else "#" if root else "o" if dot else "."
            cells.append(cell.rjust(width))
        lines.append(" ".join(cells).rstrip())
    for j in sorted(overflow):
        lines.append(f"dots[{j}] = {overflow[j]}")
    return "\n".join(lines) + "\n"


REWRITE_NAMES = (
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


def _random_triple(rng, ell: int) -> KatalanTriple:
    first_col = []
    for i in range(ell):
        lo = max(i + 2, first_col[-1] if first_col else 0)
        first_col.append(rng.randrange(lo, ell + 2))
    psi = RootIdeal(ell, first_col)
    mult = tuple(rng.randrange(0, 3) for _ in range(ell))
    gamma = tuple(rng.randrange(-1, 4) for _ in range(ell))
    return KatalanTriple(psi, mult, gamma)


def _forced(t: KatalanTriple, row: int, gamma_rel: int | None, m_rel: int | None) -> KatalanTriple:
    """Overwrite gamma[row] and m(row) so that the difference relations
    gamma_row - gamma_{row-1} = gamma_rel and m(row) - m(row-1) = m_rel
    hold (None leaves the component untouched)."""
    gamma = list(t.gamma)
    mult = list(t.m)
    if gamma_rel is not None:
        gamma[row - 1] = gamma[row - 2] + gamma_rel
    if m_rel is not None:
        mult[row - 1] = mult[row - 2] + m_rel
    return KatalanTriple(t.psi, mult, gamma)


def random_rewrite_instance(name: str, rng, sizes=(2, 3, 4)):
    """Sample a hypothesis-satisfying instance of the named rewrite step.

    The root ideal is rejection-sampled; the weight and multiset equality
    clauses are then forced directly, so every step is hit quickly.
    Returns the input triple and the rewrite it produces.
    """
    if name not in REWRITE_NAMES:
        raise ValueError(f"unknown rewrite step {name!r}")
    while True:
        t = _random_triple(rng, rng.choice(tuple(sizes)))
        ell = t.psi.ell
        candidates: list[tuple[KatalanTriple, tuple]] = []
        if name == "add_root_i":
            candidates = [(t, (root,)) for root in t.psi.addable_roots()]
        elif name == "add_root_ii":
            candidates = [(t, (root,)) for root in t.psi.removable_roots()]
        elif name == "dot_i":
            for j in range(1, ell + 1):
                if t.m_count(j):
                    candidates.append((t, (j,)))
        elif name == "dot_ii":
            candidates = [(t, (j,)) for j in range(1, ell + 1)]
        elif name in ("alternating", "vanish"):
            for i in range(1, ell):
                forced = _forced(t, i + 1, 1 if name == "vanish" else None, 1)
                candidates.append((forced, (i,)))
        elif name in ("bounce_up_1", "bounce_up_2"):
            for p in range(2, ell + 1):
                candidates.append((_forced(t, p, 1, 1), (p,)))
        elif name == "absorption":
            for p in range(2, ell + 1):
                candidates.append((_forced(t, p, 1, 0), (p,)))
        elif name == "cleaning":
            for p in range(2, ell + 1):
                candidates.append((_forced(t, p, 0, 1), (p,)))
        rng.shuffle(candidates)
        step = globals()[name]
        for forced, args in candidates:
            try:
                rhs = step(forced, *args)
            except HypothesisViolated:
                continue
            return forced, rhs


if __name__ == "__main__":
    import doctest

    doctest.testmod()
