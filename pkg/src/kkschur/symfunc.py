"""Exact arithmetic in the ring of symmetric functions over the integers.

The ring Lambda = Z[h_1, h_2, ...] is a polynomial ring in the complete
homogeneous symmetric functions h_1, h_2, ....  An element is stored as a
mapping from h-monomials to integer coefficients, where an h-monomial is the
weakly decreasing tuple of its subscripts: ``(3, 1, 1)`` stands for
``h_3 * h_1 * h_1``, and the empty tuple stands for the constant monomial 1.
By convention ``h_0 = 1`` and ``h_r = 0`` for ``r < 0``.

Beyond the ring structure this module provides:

* the shifted complete homogeneous functions
  ``h_shifted(i, m) = sum_j C(m+j-1, j) h_{i-j}``,
* the weight products ``k_weight(gamma) = prod_i h_shifted(gamma_i, i-1)``,
* dual stable Grothendieck polynomials ``dual_grothendieck(gamma)`` as exact
  determinants (fraction-free elimination, with a Leibniz-expansion oracle),
* the ring automorphism ``apply_F`` (``h_i -> h_i + ... + h_1 + 1``), its
  inverse ``apply_F_inv`` (``h_i -> h_i - h_{i-1}``), and the involution
  ``apply_Omega`` (``h_i -> dual_grothendieck((1,)*i)``),
* the cumulative sums ``g_tilde(lam) = sum_{mu subset lam} g_mu``,
* a triangular change-of-basis solver ``expand_in_family``.

All values are immutable after construction and safe to share across threads.
For speed, ``h_shifted``, ``k_weight``, ``dual_grothendieck`` and the ring
morphisms memoize their (immutable) results in module-level tables; call
:func:`clear_caches` to release that memory.
"""

from __future__ import annotations

import itertools
import json
import math
from typing import Callable, Iterable, Iterator, Mapping

__all__ = [
    "Monomial",
    "Partition",
    "SymFunc",
    "InexactDivisionError",
    "NotInSpan",
    "NotTriangular",
    "RingMorphism",
    "apply_F",
    "apply_F_inv",
    "apply_Omega",
    "as_partition",
    "binom",
    "clear_caches",
    "conjugate",
    "contains",
    "determinant",
    "determinant_leibniz",
    "dual_grothendieck",
    "dual_grothendieck_alt",
    "exact_divide",
    "expand_in_family",
    "g_tilde",
    "h",
    "h_shifted",
    "k_weight",
    "partition_union",
    "subpartitions",
]

# An h-monomial: weakly decreasing tuple of positive subscripts; () is 1.
Monomial = tuple[int, ...]

# A partition: weakly decreasing tuple of positive parts; () is the empty one.
Partition = tuple[int, ...]


class InexactDivisionError(ArithmeticError):
    """Raised when an exact polynomial division leaves a remainder."""


class NotInSpan(ValueError):
    """Raised when a function is not in the span of the given family."""

    def __init__(self, message: str, residual: "SymFunc"):
        super().__init__(message)
        self.residual = residual


class NotTriangular(ValueError):
    """Raised when a family is not triangular with respect to its labels."""


def _order_key(mono: Monomial) -> tuple[int, Monomial]:
    """Total order on monomials: by degree, then lexicographically.

    Compatible with multiplication (degree is additive, and the tie-break is
    lexicographic comparison of exponent vectors read from the largest
    subscript down), so the maximal monomial of a product is the product of
    the maximal monomials.
    """
    return (sum(mono), mono)


def _merge(a: Monomial, b: Monomial) -> Monomial:
    """Multiset union of two monomials (their product)."""
    return tuple(sorted(a + b, reverse=True))


class SymFunc:
    """An element of Z[h_1, h_2, ...], stored as {monomial: coefficient}.

    Instances are immutable: every operation returns a new object.  Supports
    ``+``, ``-``, ``*`` (by another element or an integer), ``**`` by a
    nonnegative integer, equality, and deterministic serialization.

    >>> f = h(2) + 3 * h(1) * h(1)
    >>> print(f)
    h[2] + 3*h[1,1]
    >>> print(f - f)
    0
    >>> print(h(1) * (h(1) + h(2)))
    h[2,1] + h[1,1]
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        data: dict[Monomial, int] = {}
        if terms:
            for mono, coef in terms.items():
                if coef:
                    key = tuple(sorted(mono, reverse=True))
                    if key and key[-1] <= 0:
                        raise ValueError(f"monomial parts must be positive: {mono}")
                    data[key] = data.get(key, 0) + coef
                    if not data[key]:
                        del data[key]
        self._terms = data

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero() -> "SymFunc":
        return _ZERO

    @staticmethod
    def one() -> "SymFunc":
        return _ONE

    @classmethod
    def _raw(cls, data: dict[Monomial, int]) -> "SymFunc":
        """Wrap an already-normalized dict without copying (internal)."""
        obj = cls.__new__(cls)
        obj._terms = data
        return obj

    @classmethod
    def from_monomial(cls, parts: Iterable[int], coef: int = 1) -> "SymFunc":
        """The term ``coef * h_{p_1} h_{p_2} ...``.

        Subscripts equal to 0 are dropped (h_0 = 1); any negative subscript
        makes the whole product zero (h_r = 0 for r < 0).
        """
        mono: list[int] = []
        for p in parts:
            if p < 0:
                return _ZERO
            if p > 0:
                mono.append(p)
        if not coef:
            return _ZERO
        return cls._raw({tuple(sorted(mono, reverse=True)): coef})

    # -- inspection ---------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, parts: Iterable[int]) -> int:
        """Coefficient of the monomial with the given subscripts."""
        mono: list[int] = []
        for p in parts:
            if p < 0:
                return 0
            if p > 0:
                mono.append(p)
        return self._terms.get(tuple(sorted(mono, reverse=True)), 0)

    def constant_term(self) -> int:
        return self._terms.get((), 0)

    def degree(self) -> int:
        """Maximal total degree of a monomial, or -1 for the zero element."""
        if not self._terms:
            return -1
        return max(sum(m) for m in self._terms)

    def terms(self) -> Iterator[tuple[Monomial, int]]:
        """Terms in canonical order: degree descending, then lex descending."""
        for mono in sorted(self._terms, key=_order_key, reverse=True):
            yield mono, self._terms[mono]

    def leading_monomial(self) -> Monomial:
        if not self._terms:
            raise ValueError("the zero element has no leading monomial")
        return max(self._terms, key=_order_key)

    def max_subscript(self) -> int:
        """Largest h-subscript appearing, or 0 if none do."""
        return max((m[0] for m in self._terms if m), default=0)

    def __len__(self) -> int:
        return len(self._terms)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "SymFunc | int") -> "SymFunc":
        if isinstance(other, int):
            other = _int_sf(other)
        elif not isinstance(other, SymFunc):
            return NotImplemented
        data = dict(self._terms)
        for mono, coef in other._terms.items():
            val = data.get(mono, 0) + coef
            if val:
                data[mono] = val
            else:
                del data[mono]
        return SymFunc._raw(data)

    __radd__ = __add__

    def __neg__(self) -> "SymFunc":
        return SymFunc._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "SymFunc | int") -> "SymFunc":
        if isinstance(other, int):
            other = _int_sf(other)
        elif not isinstance(other, SymFunc):
            return NotImplemented
        data = dict(self._terms)
        for mono, coef in other._terms.items():
            val = data.get(mono, 0) - coef
            if val:
                data[mono] = val
            else:
                del data[mono]
        return SymFunc._raw(data)

    def __rsub__(self, other: "SymFunc | int") -> "SymFunc":
        if isinstance(other, int):
            other = _int_sf(other)
        elif not isinstance(other, SymFunc):
            return NotImplemented
        return other.__sub__(self)

    def __mul__(self, other: "SymFunc | int") -> "SymFunc":
        if isinstance(other, int):
            if not other:
                return _ZERO
            if other == 1:
                return self
            return SymFunc._raw({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, SymFunc):
            return NotImplemented
        a, b = self._terms, other._terms
        if len(a) > len(b):
            a, b = b, a
        data: dict[Monomial, int] = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                key = _merge(ma, mb)
                val = data.get(key, 0) + ca * cb
                if val:
                    data[key] = val
                else:
                    del data[key]
        return SymFunc._raw(data)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "SymFunc":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = _ONE
        base = self
        k = n
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = _int_sf(other)
        elif not isinstance(other, SymFunc):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # -- rendering ----------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for mono, coef in self.terms():
            if mono:
                body = "h[" + ",".join(str(p) for p in mono) + "]"
                if coef == 1:
                    piece = body
                elif coef == -1:
                    piece = "-" + body
                else:
                    piece = f"{coef}*{body}"
            else:
                piece = str(coef)
            if not parts:
                parts.append(piece)
            elif piece.startswith("-"):
                parts.append("- " + piece[1:])
            else:
                parts.append("+ " + piece)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"SymFunc({self})"

    def to_json_dict(self) -> dict:
        """Deterministic JSON form: {"terms": [{"h": [...], "c": "-2"}, ...]}."""
        return {
            "terms": [
                {"h": list(mono), "c": str(coef)} for mono, coef in self.terms()
            ]
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "SymFunc":
        out: dict[Monomial, int] = {}
        for term in data["terms"]:
            mono = tuple(int(p) for p in term["h"])
            coef = int(term["c"])
            if coef:
                out[tuple(sorted(mono, reverse=True))] = (
                    out.get(tuple(sorted(mono, reverse=True)), 0) + coef
                )
        return cls({m: c for m, c in out.items() if c})

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "SymFunc":
        return cls.from_json_dict(json.loads(text))


_ZERO = SymFunc._raw({})
_ONE = SymFunc._raw({(): 1})
_INT_CACHE: dict[int, SymFunc] = {0: _ZERO, 1: _ONE}


def _int_sf(n: int) -> SymFunc:
    out = _INT_CACHE.get(n)
    if out is None:
        out = SymFunc._raw({(): n}) if n else _ZERO
        _INT_CACHE[n] = out
    return out


def h(r: int) -> SymFunc:
    """The generator h_r; the unit for r = 0 and zero for r < 0.

    >>> print(h(3)); print(h(0)); print(h(-2))
    h[3]
    1
    0
    """
    if r < 0:
        return _ZERO
    if r == 0:
        return _ONE
    return SymFunc._raw({(r,): 1})


def binom(n: int, j: int) -> int:
    """Binomial coefficient C(n, j) = n(n-1)...(n-j+1)/j! for any integer n.

    >>> [binom(-1, j) for j in range(4)]
    [1, -1, 1, -1]
    >>> binom(5, 2)
    10
    """
    if j < 0:
        return 0
    if j == 0:
        return 1
    if n >= 0:
        return math.comb(n, j)
    num = 1
    for t in range(j):
        num *= n - t
    return num // math.factorial(j)


_H_SHIFTED_CACHE: dict[tuple[int, int], SymFunc] = {}


def h_shifted(i: int, m: int) -> SymFunc:
    """The shifted generator: sum_{j=0}^{i} C(m+j-1, j) h_{i-j}.

    Zero for i < 0 and the unit for i = 0.  For m = 0 this is h_i itself,
    for m = 1 it is h_i + h_{i-1} + ... + h_1 + 1, and for m = -1 it is
    h_i - h_{i-1}.

    >>> print(h_shifted(2, 1))
    h[2] + h[1] + 1
    >>> print(h_shifted(2, -1))
    h[2] - h[1]
    >>> print(h_shifted(-3, 5))
    0
    """
    if i < 0:
        return _ZERO
    if i == 0:
        return _ONE
    key = (i, m)
    out = _H_SHIFTED_CACHE.get(key)
    if out is None:
        data: dict[Monomial, int] = {}
        for j in range(i + 1):
            coef = binom(m + j - 1, j)
            if coef:
                data[(i - j,) if i - j else ()] = coef
        out = SymFunc._raw(data)
        _H_SHIFTED_CACHE[key] = out
    return out


_K_WEIGHT_CACHE: dict[tuple[int, ...], SymFunc] = {}


def k_weight(gamma: Iterable[int]) -> SymFunc:
    """The product h_shifted(gamma_1, 0) h_shifted(gamma_2, 1) ...

    Zero exactly when some entry of gamma is negative.

    >>> print(k_weight((1, 1)))
    h[1,1] + h[1]
    >>> print(k_weight((3,)))
    h[3]
    >>> print(k_weight((0, 0, 0)))
    1
    >>> print(k_weight((1, -1, 1)))
    0
    """
    gam = tuple(gamma)
    out = _K_WEIGHT_CACHE.get(gam)
    if out is None:
        if any(g < 0 for g in gam):
            out = _ZERO
        elif not gam:
            out = _ONE
        else:
            out = k_weight(gam[:-1]) * h_shifted(gam[-1], len(gam) - 1)
        _K_WEIGHT_CACHE[gam] = out
    return out


# -- exact determinants over the ring --------------------------------------


def exact_divide(num: SymFunc, den: SymFunc) -> SymFunc:
    """Exact division in Z[h_1, h_2, ...]; raises if den does not divide num.

    >>> f = (h(2) + h(1)) * (h(1) - 3)
    >>> print(exact_divide(f, h(1) - 3))
    h[2] + h[1]
    """
    if not den:
        raise ZeroDivisionError("division by the zero element")
    if not num:
        return _ZERO
    lead = max(den._terms, key=_order_key)
    lead_coef = den._terms[lead]
    lead_ctr = _mono_counter(lead)
    rem = dict(num._terms)
    quot: dict[Monomial, int] = {}
    while rem:
        m = max(rem, key=_order_key)
        c = rem[m]
        qm = _mono_quotient(m, lead, lead_ctr)
        if qm is None or c % lead_coef:
            raise InexactDivisionError(
                f"{den} does not divide {num} (stuck at term {c}*h{list(m)})"
            )
        qc = c // lead_coef
        quot[qm] = quot.get(qm, 0) + qc
        for dm, dc in den._terms.items():
            key = _merge(qm, dm)
            val = rem.get(key, 0) - qc * dc
            if val:
                rem[key] = val
            else:
                rem.pop(key, None)
    return SymFunc._raw({m: c for m, c in quot.items() if c})


def _mono_counter(mono: Monomial) -> dict[int, int]:
    ctr: dict[int, int] = {}
    for p in mono:
        ctr[p] = ctr.get(p, 0) + 1
    return ctr


def _mono_quotient(
    m: Monomial, d: Monomial, d_ctr: dict[int, int]
) -> Monomial | None:
    """m with the multiset d removed, or None if d is not contained in m."""
    if len(d) > len(m):
        return None
    remaining = dict(d_ctr)
    out: list[int] = []
    for p in m:
        have = remaining.get(p, 0)
        if have:
            remaining[p] = have - 1
        else:
            out.append(p)
    if any(v for v in remaining.values()):
        return None
    return tuple(out)


def determinant(rows: list[list[SymFunc]]) -> SymFunc:
    """Exact determinant by fraction-free (Bareiss) elimination.

    Division-free pivoting with row swaps; every division performed is exact
    in the ring.  The empty matrix has determinant 1.
    """
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("matrix must be square")
    if n == 0:
        return _ONE
    mat = [list(row) for row in rows]
    sign = 1
    prev = _ONE
    for t in range(n - 1):
        if not mat[t][t]:
            for r in range(t + 1, n):
                if mat[r][t]:
                    mat[t], mat[r] = mat[r], mat[t]
                    sign = -sign
                    break
            else:
                return _ZERO
        pivot = mat[t][t]
        for i in range(t + 1, n):
            row_i = mat[i]
            head = row_i[t]
            for j in range(t + 1, n):
                row_i[j] = exact_divide(pivot * row_i[j] - head * mat[t][j], prev)
            row_i[t] = _ZERO
        prev = pivot
    det = mat[n - 1][n - 1]
    return -det if sign < 0 else det


def determinant_leibniz(rows: list[list[SymFunc]]) -> SymFunc:
    """Exact determinant by the signed sum over all permutations (oracle)."""
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("matrix must be square")
    total = _ZERO
    for perm in itertools.permutations(range(n)):
        prod = _ONE
        for i in range(n):
            prod = prod * rows[i][perm[i]]
            if not prod:
                break
        if prod:
            total = total + prod * _perm_sign(perm)
    return total


def _perm_sign(perm: tuple[int, ...]) -> int:
    inv = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inv += 1
    return -1 if inv & 1 else 1


_DUAL_G_CACHE: dict[tuple[int, ...], SymFunc] = {}


def dual_grothendieck(gamma: Iterable[int]) -> SymFunc:
    """The dual stable Grothendieck polynomial of an integer vector.

    Defined as the l x l determinant with (i, j) entry
    ``h_shifted(gamma_i + j - i, i - j)`` (1-based indices), expanded exactly.
    For a partition this is the dual stable Grothendieck polynomial g_lambda;
    the determinant makes sense for arbitrary integer vectors.

    >>> print(dual_grothendieck((1, 1)))
    -h[2] + h[1,1] + h[1]
    >>> print(dual_grothendieck(()))
    1
    >>> print(dual_grothendieck((3,)))
    h[3]
    """
    gam = tuple(gamma)
    out = _DUAL_G_CACHE.get(gam)
    if out is None:
        n = len(gam)
        rows = [
            [h_shifted(gam[i] + j - i, i - j) for j in range(n)] for i in range(n)
        ]
        out = determinant(rows)
        _DUAL_G_CACHE[gam] = out
    return out


def dual_grothendieck_alt(gamma: Iterable[int]) -> SymFunc:
    """Alternative determinant with (i, j) entry h_shifted(gamma_i+j-i, i-1).

    Equal to :func:`dual_grothendieck` for every integer vector (the two
    matrices are related by column operations); kept as a cross-check.
    """
    gam = tuple(gamma)
    n = len(gam)
    rows = [[h_shifted(gam[i] + j - i, i) for j in range(n)] for i in range(n)]
    return determinant(rows)


# -- ring morphisms ---------------------------------------------------------


class RingMorphism:
    """Ring endomorphism of Z[h_1, h_2, ...] given by generator images.

    Extends ``h_i -> gen_image(i)`` multiplicatively and linearly.  Images of
    monomials are memoized (keyed by the monomial), so repeated application
    over a sweep of inputs shares work.
    """

    def __init__(self, gen_image: Callable[[int], SymFunc]):
        self._gen_image = gen_image
        self._mono_cache: dict[Monomial, SymFunc] = {(): _ONE}

    def clear_cache(self) -> None:
        self._mono_cache = {(): _ONE}

    def _image(self, mono: Monomial) -> SymFunc:
        out = self._mono_cache.get(mono)
        if out is None:
            out = self._image(mono[1:]) * self._gen_image(mono[0])
            self._mono_cache[mono] = out
        return out

    def __call__(self, f: SymFunc) -> SymFunc:
        total: dict[Monomial, int] = {}
        for mono, coef in f._terms.items():
            for im, ic in self._image(mono)._terms.items():
                val = total.get(im, 0) + coef * ic
                if val:
                    total[im] = val
                else:
                    del total[im]
        return SymFunc._raw(total)


_F = RingMorphism(lambda i: h_shifted(i, 1))
_F_INV = RingMorphism(lambda i: h_shifted(i, -1))
_OMEGA = RingMorphism(lambda i: dual_grothendieck((1,) * i))


def apply_F(f: SymFunc) -> SymFunc:
    """The ring automorphism sending h_i to h_i + h_{i-1} + ... + h_1 + 1.

    >>> print(apply_F(h(2)))
    h[2] + h[1] + 1
    """
    return _F(f)


def apply_F_inv(f: SymFunc) -> SymFunc:
    """The inverse automorphism, sending h_i to h_i - h_{i-1}.

    >>> print(apply_F_inv(h(3)))
    h[3] - h[2]
    >>> apply_F_inv(apply_F(h(5) * h(2))) == h(5) * h(2)
    True
    """
    return _F_INV(f)


def apply_Omega(f: SymFunc) -> SymFunc:
    """The involutive ring morphism sending h_i to dual_grothendieck((1,)*i).

    >>> apply_Omega(apply_Omega(h(3))) == h(3)
    True
    """
    return _OMEGA(f)


def clear_caches() -> None:
    """Release all module-level memo tables."""
    _H_SHIFTED_CACHE.clear()
    _K_WEIGHT_CACHE.clear()
    _DUAL_G_CACHE.clear()
    for morph in (_F, _F_INV, _OMEGA):
        morph.clear_cache()


# -- partitions -------------------------------------------------------------


def as_partition(parts: Iterable[int]) -> Partition:
    """Normalize to a weakly decreasing tuple of positive parts.

    Trailing zeros are dropped; raises on negative parts or increases.

    >>> as_partition([3, 2, 2, 0, 0])
    (3, 2, 2)
    """
    lam = tuple(parts)
    for i, p in enumerate(lam):
        if p < 0:
            raise ValueError(f"partition parts must be nonnegative: {lam}")
        if i and p > lam[i - 1]:
            raise ValueError(f"partition parts must weakly decrease: {lam}")
    while lam and lam[-1] == 0:
        lam = lam[:-1]
    return lam


def contains(lam: Partition, mu: Partition) -> bool:
    """Whether mu fits inside lam coordinatewise (mu_i <= lam_i for all i)."""
    if len(mu) > len(lam):
        return False
    return all(mu[i] <= lam[i] for i in range(len(mu)))


def conjugate(lam: Iterable[int]) -> Partition:
    """Transpose of the Young diagram.

    >>> conjugate((4, 2, 1))
    (3, 2, 1, 1)
    """
    lam = as_partition(lam)
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p >= j) for j in range(1, lam[0] + 1))


def partition_union(lam: Iterable[int], mu: Iterable[int]) -> Partition:
    """Multiset union of parts, re-sorted into a partition.

    >>> partition_union((3, 1), (2, 2))
    (3, 2, 2, 1)
    """
    return tuple(sorted(tuple(as_partition(lam)) + tuple(as_partition(mu)), reverse=True))


def subpartitions(lam: Iterable[int]) -> Iterator[Partition]:
    """All partitions mu contained in lam, the empty partition included.

    >>> sorted(subpartitions((2, 1)))
    [(), (1,), (1, 1), (2,), (2, 1)]
    """
    lam = as_partition(lam)

    def rec(idx: int, cap: int) -> Iterator[Partition]:
        yield ()
        if idx == len(lam):
            return
        for v in range(1, min(cap, lam[idx]) + 1):
            for tail in rec(idx + 1, v):
                yield (v,) + tail

    yield from rec(0, lam[0] if lam else 0)


def g_tilde(lam: Iterable[int]) -> SymFunc:
    """Sum of dual_grothendieck(mu) over all partitions mu contained in lam.

    >>> print(g_tilde(()))
    1
    >>> print(g_tilde((1,)))
    h[1] + 1
    """
    total = _ZERO
    for mu in subpartitions(lam):
        total = total + dual_grothendieck(mu)
    return total


# -- triangular expansion ---------------------------------------------------


def expand_in_family(
    f: SymFunc, family: Iterable[tuple[Iterable[int], SymFunc]]
) -> dict[Partition, int]:
    """Expand f as an integer combination of a triangular family.

    Each family member labelled by a partition ``nu`` must contain the
    monomial ``h_nu`` with coefficient +1 or -1, and within a fixed degree
    its other same-degree monomials must sit at lexicographically larger
    subscript tuples.  All families handled here (dual Grothendiecks and
    their k-refinements) have this shape.  Labels are processed by degree
    descending and, within a degree, label ascending, so each pivot
    coefficient is final when read.

    Returns the map label -> coefficient (zero coefficients omitted).
    Raises :class:`NotInSpan` if a residual survives, :class:`NotTriangular`
    if a pivot is missing, is not a unit, or would overwrite an
    already-finalized pivot.

    >>> fam = [((2,), dual_grothendieck((2,))), ((1, 1), dual_grothendieck((1, 1))),
    ...        ((1,), dual_grothendieck((1,))), ((), SymFunc.one())]
    >>> expand_in_family(g_tilde((1, 1)), fam)
    {(1, 1): 1, (1,): 1, (): 1}
    """
    members: dict[Partition, SymFunc] = {}
    for label, func in family:
        lab = as_partition(label)
        if lab in members:
            raise NotTriangular(f"duplicate family label {lab}")
        members[lab] = func
    order = sorted(members, key=lambda lab: (-sum(lab), lab))
    remainder = f
    coeffs: dict[Partition, int] = {}
    finalized: set[Monomial] = set()
    for lab in order:
        func = members[lab]
        pivot = func.coefficient(lab)
        if pivot not in (1, -1):
            raise NotTriangular(
                f"family member {lab} has non-unit pivot coefficient {pivot}"
            )
        c = remainder.coefficient(lab) * pivot
        if c:
            for mono, _ in func._terms.items():
                if mono != lab and mono in finalized:
                    raise NotTriangular(
                        f"family member {lab} writes to finalized pivot {mono}"
                    )
            remainder = remainder - c * func
            coeffs[lab] = c
        finalized.add(lab)
    if remainder:
        raise NotInSpan(
            f"residual of {len(remainder)} terms outside the family span",
            remainder,
        )
    return coeffs


if __name__ == "__main__":
    import doctest

    doctest.testmod()
