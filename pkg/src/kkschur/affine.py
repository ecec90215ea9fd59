"""The affine symmetric group on k+1 letters, in window notation.

An element w is the bijection Z -> Z with ``w(j + n) = w(j) + n`` (where
``n = k + 1``) and ``sum_{j=1..n} (w(j) - j) = 0``; it is stored by its
window ``[w(1), ..., w(n)]``.  The simple reflection ``s_i`` (residues
``i = 0..k``) swaps the values ``i`` and ``i+1`` modulo n.  This module
provides:

* group arithmetic, lengths, descents, reduced words,
* Bruhat order (lifting recursion, with a brute-force subword oracle),
* the left weak order,
* the bijection between k-bounded partitions and affine Grassmannian
  elements (``lm_bijection`` / ``lm_inverse``),
* cyclically increasing and decreasing elements ``u_A`` and ``d_A``,
* the Hecke star product ``v * w``,
* the rank-level involution ``omega_k`` (``s_i -> s_{-i mod n}``),
* the extension by the rotation ``pi`` (``pi s_i = s_{i+1} pi``),
  antifundamental translation elements, and the ``sh`` map sending a finite
  permutation to a k-bounded partition,
* reduced words of ``x_lam`` read from standard tableaux.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator

from .symfunc import Partition, as_partition, conjugate

__all__ = [
    "AffinePerm",
    "ExtAffinePerm",
    "DoesNotFit",
    "NormalizationFailed",
    "NotGrassmannian",
    "NotProperSubset",
    "ShapeTooLarge",
    "bruhat_leq",
    "bruhat_leq_subword",
    "clear_caches",
    "cyclically_decreasing",
    "cyclically_increasing",
    "dual_partition",
    "from_word",
    "grassmannian_perm",
    "hecke_star",
    "identity",
    "is_reduced",
    "k_bounded_partitions",
    "lm_bijection",
    "lm_inverse",
    "omega_k",
    "omega_k_partition",
    "sh",
    "simple_reflection",
    "standard_tableau_word",
    "translation_antifund",
    "weak_leq_left",
]


class NotGrassmannian(ValueError):
    """Raised when an operation requires an affine Grassmannian element."""


class NotProperSubset(ValueError):
    """Raised when a residue subset must be proper but is not."""


class DoesNotFit(ValueError):
    """Raised when a partition does not fit in the required rectangle."""


class ShapeTooLarge(ValueError):
    """Raised when a shape violates a hook-length style bound."""


class NormalizationFailed(RuntimeError):
    """Raised when an element fails to normalize to the promised form."""


class AffinePerm:
    """An affine permutation in window notation.

    >>> s0 = simple_reflection(0, 3)
    >>> s0.window
    (0, 2, 3, 5)
    >>> s0 * s0 == identity(3)
    True
    >>> (s0 * simple_reflection(1, 3)).length()
    2
    """

    __slots__ = ("k", "n", "window", "_inv", "_len")

    def __init__(self, k: int, window: Iterable[int]):
        win = tuple(window)
        n = k + 1
        if k < 1:
            raise ValueError("rank parameter k must be at least 1")
        if len(win) != n:
            raise ValueError(f"window must have length {n}: {win}")
        if sum(win) != n * (n + 1) // 2:
            raise ValueError(f"window entries must sum to 1+...+{n}: {win}")
        if len({v % n for v in win}) != n:
            raise ValueError(f"window entries must be distinct mod {n}: {win}")
        self.k = k
        self.n = n
        self.window = win
        self._inv: "AffinePerm | None" = None
        self._len: int | None = None

    def __call__(self, j: int) -> int:
        q, r = divmod(j - 1, self.n)
        return self.window[r] + self.n * q

    def __mul__(self, other: "AffinePerm") -> "AffinePerm":
        if not isinstance(other, AffinePerm):
            return NotImplemented
        if other.n != self.n:
            raise ValueError("cannot multiply elements of different ranks")
        return AffinePerm(self.k, tuple(self(v) for v in other.window))

    def inverse(self) -> "AffinePerm":
        if self._inv is None:
            n = self.n
            pos = {v % n: (p, v) for p, v in enumerate(self.window, start=1)}
            win = []
            for i in range(1, n + 1):
                p, v = pos[i % n]
                win.append(p + (i - v))
            inv = AffinePerm(self.k, win)
            inv._inv = self
            self._inv = inv
        return self._inv

    def length(self) -> int:
        """Coxeter length: sum over window positions a < b of
        |floor((w(b) - w(a)) / n)|."""
        if self._len is None:
            n = self.n
            win = self.window
            total = 0
            for a in range(n):
                for b in range(a + 1, n):
                    total += abs((win[b] - win[a]) // n)
            self._len = total
        return self._len

    def is_identity(self) -> bool:
        return self.window == tuple(range(1, self.n + 1))

    def is_right_descent(self, i: int) -> bool:
        """Whether ell(w s_i) < ell(w), for a residue i in 0..k."""
        return self(i) > self(i + 1)

    def is_left_descent(self, i: int) -> bool:
        """Whether ell(s_i w) < ell(w), for a residue i in 0..k."""
        return self.inverse().is_right_descent(i)

    def right_descents(self) -> list[int]:
        return [i for i in range(self.n) if self.is_right_descent(i)]

    def left_descents(self) -> list[int]:
        return self.inverse().right_descents()

    def left_mul_s(self, i: int) -> "AffinePerm":
        """The product s_i * self (swap the values i, i+1 mod n)."""
        n = self.n
        i %= n
        j = (i + 1) % n
        win = tuple(
            v + 1 if v % n == i else v - 1 if v % n == j else v for v in self.window
        )
        return AffinePerm(self.k, win)

    def right_mul_s(self, i: int) -> "AffinePerm":
        """The product self * s_i (swap the window positions i, i+1 mod n)."""
        n = self.n
        i %= n
        w = list(self.window)
        if i == 0:
            w[0], w[n - 1] = self.window[n - 1] - n, self.window[0] + n
        else:
            w[i - 1], w[i] = w[i], w[i - 1]
        return AffinePerm(self.k, w)

    def is_grassmannian(self) -> bool:
        """Minimal in its coset of the finite symmetric group: the window
        increases, equivalently no right descent among 1..k."""
        win = self.window
        return all(win[i] < win[i + 1] for i in range(self.n - 1))

    def is_finite(self) -> bool:
        """Whether the window is a permutation of 1..n (an element of S_n)."""
        return sorted(self.window) == list(range(1, self.n + 1))

    def some_reduced_word(self) -> list[int]:
        """A reduced word, stripping the smallest left descent greedily.

        The element equals ``s_{word[0]} s_{word[1]} ... s_{word[-1]}``.
        """
        word: list[int] = []
        cur = self
        for _ in range(self.length()):
            i = min(cur.left_descents())
            word.append(i)
            cur = cur.left_mul_s(i)
        if not cur.is_identity():
            raise NormalizationFailed(f"descent stripping stuck at {cur}")
        return word

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AffinePerm):
            return NotImplemented
        return self.n == other.n and self.window == other.window

    def __hash__(self) -> int:
        return hash((self.n, self.window))

    def __repr__(self) -> str:
        return f"AffinePerm(k={self.k}, window={list(self.window)})"


def identity(k: int) -> AffinePerm:
    return AffinePerm(k, range(1, k + 2))


def simple_reflection(i: int, k: int) -> AffinePerm:
    """The generator s_i of the affine symmetric group on k+1 letters."""
    return identity(k).left_mul_s(i)


def from_word(word: Iterable[int], k: int) -> AffinePerm:
    """The product s_{i_1} s_{i_2} ... s_{i_r} for word = [i_1, ..., i_r]."""
    w = identity(k)
    for i in reversed(tuple(word)):
        w = w.left_mul_s(i)
    return w


def is_reduced(word: Iterable[int], k: int) -> bool:
    word = tuple(word)
    return from_word(word, k).length() == len(word)


# -- Bruhat and weak orders -------------------------------------------------

_BRUHAT_CACHE: dict[tuple[tuple[int, ...], tuple[int, ...]], bool] = {}


def bruhat_leq(u: AffinePerm, w: AffinePerm) -> bool:
    """Bruhat order, by the standard left-descent lifting recursion.

    >>> k = 2
    >>> bruhat_leq(from_word([1, 0], k), from_word([0, 1, 2, 1, 0], k))
    True
    """
    if u.n != w.n:
        raise ValueError("cannot compare elements of different ranks")
    if u.window == w.window:
        return True
    lu, lw = u.length(), w.length()
    if lu >= lw:
        return False
    key = (u.window, w.window)
    out = _BRUHAT_CACHE.get(key)
    if out is None:
        i = min(w.left_descents())
        sw = w.left_mul_s(i)
        su = u.left_mul_s(i)
        if su.length() < lu:
            out = bruhat_leq(su, sw)
        else:
            out = bruhat_leq(u, sw)
        _BRUHAT_CACHE[key] = out
    return out


def bruhat_leq_subword(u: AffinePerm, w: AffinePerm) -> bool:
    """Brute-force oracle: u <= w iff some subword of a fixed reduced word
    of w is a reduced word for u."""
    if u.n != w.n:
        raise ValueError("cannot compare elements of different ranks")
    word = w.some_reduced_word()
    lu = u.length()
    if lu > len(word):
        return False
    for positions in itertools.combinations(range(len(word)), lu):
        if from_word([word[p] for p in positions], w.k) == u:
            return True
    return False


def weak_leq_left(u: AffinePerm, w: AffinePerm) -> bool:
    """Left weak order: u <=_L w iff ell(w u^{-1}) = ell(w) - ell(u)."""
    if u.n != w.n:
        raise ValueError("cannot compare elements of different ranks")
    return (w * u.inverse()).length() == w.length() - u.length()


# -- the k-bounded partition bijection --------------------------------------

_LM_CACHE: dict[tuple[int, Partition], AffinePerm] = {}


def lm_bijection(lam: Iterable[int], k: int) -> AffinePerm:
    """The affine Grassmannian element x_lam of a k-bounded partition.

    Its reduced word reads the residues (column - row mod k+1) of the cells
    of lam, rows bottom to top, each row right to left.

    >>> lm_bijection((4, 3, 2), 4) == from_word([4, 3, 1, 0, 4, 3, 2, 1, 0], 4)
    True
    >>> lm_bijection((4, 3, 2), 4).length()
    9
    """
    lam = as_partition(lam)
    if lam and lam[0] > k:
        raise ValueError(f"partition is not {k}-bounded: {lam}")
    key = (k, lam)
    out = _LM_CACHE.get(key)
    if out is None:
        n = k + 1
        word: list[int] = []
        for row in range(len(lam), 0, -1):
            word.extend((c - row) % n for c in range(lam[row - 1], 0, -1))
        out = from_word(word, k)
        _LM_CACHE[key] = out
    return out


_LM_INDEX: dict[tuple[int, int], dict[AffinePerm, Partition]] = {}


def lm_inverse(x: AffinePerm) -> Partition:
    """The k-bounded partition of an affine Grassmannian element.

    Looks x up in the (length-graded) reverse index of lm_bijection, so the
    answer is correct by construction of the forward map.

    >>> lm_inverse(from_word([1, 0], 1))
    (1, 1)
    >>> lm_inverse(from_word([1, 0], 2))
    (2,)
    """
    if not x.is_grassmannian():
        raise NotGrassmannian(f"window does not increase: {x}")
    k = x.k
    size = x.length()
    key = (k, size)
    table = _LM_INDEX.get(key)
    if table is None:
        table = {
            lm_bijection(mu, k): mu for mu in _k_bounded_of_size(k, size)
        }
        _LM_INDEX[key] = table
    try:
        return table[x]
    except KeyError:
        raise NormalizationFailed(
            f"no {k}-bounded partition of size {size} maps to {x}"
        ) from None


def _k_bounded_of_size(k: int, size: int) -> Iterator[Partition]:
    """All partitions of exactly the given size with every part <= k."""

    def parts_of(total: int, cap: int) -> Iterator[Partition]:
        if total == 0:
            yield ()
            return
        for first in range(min(cap, total), 0, -1):
            for rest in parts_of(total - first, first):
                yield (first,) + rest

    yield from parts_of(size, k)


def k_bounded_partitions(k: int, max_size: int) -> Iterator[Partition]:
    """All partitions with every part <= k and total size <= max_size,
    in deterministic order (by size, then lexicographic)."""
    for size in range(max_size + 1):
        yield from sorted(_k_bounded_of_size(k, size))


# -- cyclic elements, Hecke star, omega_k -----------------------------------


def _cyclic_runs(residues: Iterable[int], k: int) -> list[list[int]]:
    n = k + 1
    found = {i % n for i in residues}
    if len(found) >= n:
        raise NotProperSubset(f"need a proper subset of the residues mod {n}")
    runs: list[list[int]] = []
    for start in sorted(found):
        if (start - 1) % n in found:
            continue
        run = [start]
        while (run[-1] + 1) % n in found:
            run.append((run[-1] + 1) % n)
        runs.append(run)
    return runs


def cyclically_increasing(residues: Iterable[int], k: int) -> AffinePerm:
    """u_A: product of s_a s_{a+1} ... s_b over the maximal cyclic runs of A.

    >>> cyclically_increasing({0, 1, 3, 4}, 4) == from_word([3, 4, 0, 1], 4)
    True
    """
    word: list[int] = []
    for run in _cyclic_runs(residues, k):
        word.extend(run)
    return from_word(word, k)


def cyclically_decreasing(residues: Iterable[int], k: int) -> AffinePerm:
    """d_A: product of s_b ... s_{a+1} s_a over the maximal cyclic runs of A.

    >>> cyclically_decreasing({0, 1, 3, 4}, 4) == from_word([1, 0, 4, 3], 4)
    True
    """
    word: list[int] = []
    for run in _cyclic_runs(residues, k):
        word.extend(reversed(run))
    return from_word(word, k)


def hecke_star(v: AffinePerm, w: AffinePerm) -> AffinePerm:
    """The star product: apply s_i * (-) = max(s_i w, w) along a reduced
    word of v, rightmost letter first."""
    if v.n != w.n:
        raise ValueError("cannot combine elements of different ranks")
    out = w
    for i in reversed(v.some_reduced_word()):
        lifted = out.left_mul_s(i)
        if lifted.length() > out.length():
            out = lifted
    return out


def omega_k(w: AffinePerm) -> AffinePerm:
    """The involutive automorphism sending s_i to s_{-i mod k+1}."""
    n = w.n
    return from_word([(-i) % n for i in w.some_reduced_word()], w.k)


def omega_k_partition(lam: Iterable[int], k: int) -> Partition:
    """The k-bounded partition with x image omega_k(x_lam)."""
    return lm_inverse(omega_k(lm_bijection(lam, k)))


# -- the extended group and translations ------------------------------------


def conjugate_by_pi_power(w: AffinePerm, t: int) -> AffinePerm:
    """pi^t w pi^{-t}: the automorphism s_i -> s_{i+t}.

    Window-level: the new element sends j to w(j - t) + t.
    """
    return AffinePerm(w.k, tuple(w(j - t) + t for j in range(1, w.n + 1)))


class ExtAffinePerm:
    """An element pi^t * w of the extended affine symmetric group.

    The rotation pi satisfies pi^{k+1} = id and pi s_i = s_{i+1} pi; the
    normal form keeps the pi-power on the left.

    >>> t1 = translation_antifund(1, 3)
    >>> (t1 * t1).pi_pow
    2
    """

    __slots__ = ("pi_pow", "body")

    def __init__(self, pi_pow: int, body: AffinePerm):
        self.pi_pow = pi_pow % body.n
        self.body = body

    def __mul__(self, other: "ExtAffinePerm | AffinePerm") -> "ExtAffinePerm":
        if isinstance(other, AffinePerm):
            other = ExtAffinePerm(0, other)
        elif not isinstance(other, ExtAffinePerm):
            return NotImplemented
        if other.body.n != self.body.n:
            raise ValueError("cannot multiply elements of different ranks")
        body = conjugate_by_pi_power(self.body, -other.pi_pow) * other.body
        return ExtAffinePerm(self.pi_pow + other.pi_pow, body)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExtAffinePerm):
            return NotImplemented
        return self.pi_pow == other.pi_pow and self.body == other.body

    def __hash__(self) -> int:
        return hash((self.pi_pow, self.body))

    def __repr__(self) -> str:
        return f"ExtAffinePerm(pi_pow={self.pi_pow}, body={self.body!r})"


def translation_antifund(i: int, k: int) -> ExtAffinePerm:
    """The translation by the negated i-th antifundamental coweight:
    pi^{-i} x_{R_i} with R_i the i x (k+1-i) rectangle read as (i^{k+1-i}).

    >>> t = translation_antifund(1, 3)
    >>> t.pi_pow, t.body == from_word([2, 3, 0], 3)
    (3, True)
    """
    if not 1 <= i <= k:
        raise ValueError(f"index must lie in 1..{k}: {i}")
    rect = (i,) * (k + 1 - i)
    return ExtAffinePerm(-i, lm_bijection(rect, k))


# -- finite Grassmannian permutations and sh --------------------------------


def grassmannian_perm(lam: Iterable[int], i: int, k: int) -> AffinePerm:
    """The finite permutation with at most one descent, at position i,
    whose shape is lam: w(j) = j + lam_{i+1-j} for j <= i, remaining values
    ascending.

    >>> grassmannian_perm((3, 2), 3, 6).window
    (1, 4, 6, 2, 3, 5, 7)
    """
    lam = as_partition(lam)
    n = k + 1
    if not 0 <= i <= n:
        raise ValueError(f"descent position must lie in 0..{n}: {i}")
    if len(lam) > i or (lam and lam[0] > n - i):
        raise DoesNotFit(f"partition {lam} exceeds the {i} x {n - i} rectangle")
    padded = lam + (0,) * (i - len(lam))
    head = [j + padded[i - j] for j in range(1, i + 1)]
    tail = sorted(set(range(1, n + 1)) - set(head))
    return AffinePerm(k, head + tail)


def dual_partition(lam: Iterable[int], i: int, k: int) -> Partition:
    """The complement lam^vee in the i x (k+1-i) rectangle, rotated:
    lam^vee_j = k+1-i-lam_{i+1-j}.

    >>> dual_partition((3, 2), 3, 6)
    (4, 2, 1)
    """
    lam = as_partition(lam)
    if len(lam) > i or (lam and lam[0] > k + 1 - i):
        raise DoesNotFit(f"partition {lam} exceeds the {i} x {k + 1 - i} rectangle")
    padded = lam + (0,) * (i - len(lam))
    return as_partition(tuple(k + 1 - i - padded[i - j] for j in range(1, i + 1)))


def sh(w: AffinePerm) -> Partition:
    """The k-bounded shape of a finite permutation: multiply by the
    antifundamental translations at its descents, normalize to pi^m x with
    x affine Grassmannian, and return the partition of x.

    >>> sh(grassmannian_perm((3, 2), 3, 6))
    (3, 2, 1, 1)
    """
    if not w.is_finite():
        raise ValueError(f"window must be a permutation of 1..{w.n}: {w}")
    k = w.k
    descents = [i for i in w.right_descents() if i != 0]
    ext = ExtAffinePerm(0, w)
    for i in descents:
        ext = ext * translation_antifund(i, k)
    if ext.pi_pow != (-sum(descents)) % w.n:
        raise NormalizationFailed(
            f"unexpected rotation power {ext.pi_pow} for descents {descents}"
        )
    if not ext.body.is_grassmannian():
        raise NormalizationFailed(f"body is not Grassmannian: {ext.body}")
    return lm_inverse(ext.body)


# -- tableau words ----------------------------------------------------------


def standard_tableau_word(
    lam: Iterable[int], tableau: Iterable[Iterable[int]], k: int
) -> list[int]:
    """Residues of the cells of a standard tableau of shape lam, read from
    the largest entry down to 1; the result is a word for x_lam whenever
    lam_1 + (number of rows) <= k+1 (cell (row a, col b) has residue
    b - a mod k+1).

    >>> standard_tableau_word((2, 1), [[1, 2], [3]], 3)
    [3, 1, 0]
    """
    lam = as_partition(lam)
    if lam and lam[0] + len(lam) > k + 1:
        raise ShapeTooLarge(
            f"need first part + length <= {k + 1}: {lam}"
        )
    rows = [list(r) for r in tableau]
    if [len(r) for r in rows] != list(lam):
        raise ValueError(f"tableau shape does not match {lam}")
    size = sum(lam)
    pos: dict[int, tuple[int, int]] = {}
    for a, row in enumerate(rows, start=1):
        for b, entry in enumerate(row, start=1):
            if entry in pos:
                raise ValueError(f"duplicate entry {entry} in tableau")
            pos[entry] = (a, b)
    if sorted(pos) != list(range(1, size + 1)):
        raise ValueError("tableau entries must be 1..size, each once")
    for a, row in enumerate(rows, start=1):
        for b in range(1, len(row)):
            if row[b - 1] > row[b]:
                raise ValueError("tableau rows must increase")
        if a > 1:
            above = rows[a - 2]
            for b, entry in enumerate(row, start=1):
                if above[b - 1] > entry:
                    raise ValueError("tableau columns must increase")
    n = k + 1
    return [(pos[m][1] - pos[m][0]) % n for m in range(size, 0, -1)]


def clear_caches() -> None:
    """Release the Bruhat and bijection memo tables."""
    _BRUHAT_CACHE.clear()
    _LM_CACHE.clear()
    _LM_INDEX.clear()


if __name__ == "__main__":
    import doctest

    doctest.testmod()
