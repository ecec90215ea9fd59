"""Localized symmetric-function fractions and the quantum-to-affine map.

The ring of symmetric functions, localized at the rectangle classes

* ``tau(i, k)``       -- the dual stable Grothendieck function of the
  rectangle with i columns and k+1-i rows,
* ``tau_plus(i, k)``  -- its image under the substitution
  h_j -> h_j + ... + h_1 + 1 (the sum over all subshapes),

together with ``tau_minus(i, k)``, the preimage under that substitution,
hosts an exact model of the quantum K-ring of the complete flag variety
on k+1 letters.  The quotient presentation of that ring has one relation
per degree, and this module checks that the distinguished fraction-valued
assignment

    z_i |-> tau_i tau^+_{i-1} / (tau^+_i tau_{i-1}),
    Q_i |-> tau_{i-1} tau_{i+1} / tau_i^2,

annihilates every relation (each elementary symmetric combination of the
z's collapses to a binomial coefficient), satisfies the bilinear Toda
recurrence, and sends the degree-one Schubert classes and Grassmannian
pullback classes to the predicted fractions.

All arithmetic is exact: :class:`LocalizedElem` keeps an integral
symmetric-function numerator and a denominator recorded as exponent
vectors over the 2k fixed generators, and equality is decided by
cross-multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .affine import dual_partition, grassmannian_perm, sh
from .symfunc import (
    Partition,
    SymFunc,
    apply_F,
    apply_F_inv,
    as_partition,
    binom,
    conjugate,
    dual_grothendieck,
    g_tilde,
)

__all__ = [
    "LocalizedElem",
    "check_grassmannian_image",
    "check_ideal_vanishing",
    "check_product_z",
    "check_schubert_s",
    "check_small_shape_collapse",
    "check_tau_recurrence",
    "check_toda",
    "check_z_column",
    "clear_caches",
    "phi_Q",
    "phi_z",
    "rectangle",
    "rectangle_star",
    "tau",
    "tau_minus",
    "tau_plus",
]


# -- the rectangle classes ----------------------------------------------------

_TAU: dict[tuple[str, int, int], SymFunc] = {}


def rectangle(i: int, k: int) -> Partition:
    """The rectangle with i columns and k+1-i rows; empty at i = 0, k+1."""
    if not 0 <= i <= k + 1:
        raise ValueError(f"need 0 <= i <= k+1: i = {i}")
    return (i,) * (k + 1 - i)


def rectangle_star(i: int, k: int) -> Partition:
    """The rectangle of ``rectangle(i, k)`` with its corner cell removed."""
    if not 1 <= i <= k:
        raise ValueError(f"need 1 <= i <= k: i = {i}")
    return as_partition((i,) * (k - i) + (i - 1,))


def tau(i: int, k: int) -> SymFunc:
    key = ("t", i, k)
    val = _TAU.get(key)
    if val is None:
        val = _TAU[key] = dual_grothendieck(rectangle(i, k))
    return val


def tau_plus(i: int, k: int) -> SymFunc:
    key = ("p", i, k)
    val = _TAU.get(key)
    if val is None:
        val = _TAU[key] = apply_F(tau(i, k))
    return val


def tau_minus(i: int, k: int) -> SymFunc:
    key = ("m", i, k)
    val = _TAU.get(key)
    if val is None:
        val = _TAU[key] = apply_F_inv(tau(i, k))
    return val


def clear_caches() -> None:
    _TAU.clear()


# -- exact fractions over the tau generators ---------------------------------


@dataclass(frozen=True)
class LocalizedElem:
    """num / (prod tau_i^den_tau[i-1] * prod tau_plus_i^den_plus[i-1]).

    Denominator exponents index the generators tau_1..tau_k and
    tau_plus_1..tau_plus_k; no cancellation is performed, and equality is
    decided exactly by cross-multiplication.
    """

    k: int
    num: SymFunc
    den_tau: tuple[int, ...]
    den_plus: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.den_tau) != self.k or len(self.den_plus) != self.k:
            raise ValueError("denominator exponent vectors must have length k")
        if any(e < 0 for e in self.den_tau + self.den_plus):
            raise ValueError("denominator exponents must be nonnegative")

    # construction ---------------------------------------------------------

    @classmethod
    def from_sym(cls, f: SymFunc, k: int) -> "LocalizedElem":
        return cls(k, f, (0,) * k, (0,) * k)

    @classmethod
    def scalar(cls, c: int, k: int) -> "LocalizedElem":
        return cls.from_sym(SymFunc.one() * c, k)

    @classmethod
    def fraction(
        cls,
        k: int,
        num: SymFunc,
        den_tau: Iterable[int] = (),
        den_plus: Iterable[int] = (),
    ) -> "LocalizedElem":
        dt = [0] * k
        for i in den_tau:
            dt[i - 1] += 1
        dp = [0] * k
        for i in den_plus:
            dp[i - 1] += 1
        return cls(k, num, tuple(dt), tuple(dp))

    def denominator_value(self) -> SymFunc:
        val = SymFunc.one()
        for i, e in enumerate(self.den_tau, start=1):
            for _ in range(e):
                val = val * tau(i, self.k)
        for i, e in enumerate(self.den_plus, start=1):
            for _ in range(e):
                val = val * tau_plus(i, self.k)
        return val

    # arithmetic -----------------------------------------------------------

    def _check_partner(self, other: "LocalizedElem") -> None:
        if self.k != other.k:
            raise ValueError(f"mixed bounds: {self.k} and {other.k}")

    def __mul__(self, other: "LocalizedElem | SymFunc | int") -> "LocalizedElem":
        if isinstance(other, int):
            return LocalizedElem(self.k, self.num * other, self.den_tau, self.den_plus)
        if isinstance(other, SymFunc):
            return LocalizedElem(self.k, self.num * other, self.den_tau, self.den_plus)
        self._check_partner(other)
        return LocalizedElem(
            self.k,
            self.num * other.num,
            tuple(a + b for a, b in zip(self.den_tau, other.den_tau)),
            tuple(a + b for a, b in zip(self.den_plus, other.den_plus)),
        )

    __rmul__ = __mul__

    def __add__(self, other: "LocalizedElem | SymFunc | int") -> "LocalizedElem":
        if isinstance(other, (int, SymFunc)):
            other = LocalizedElem.from_sym(
                SymFunc.one() * other if isinstance(other, int) else other, self.k
            )
        self._check_partner(other)
        dt = tuple(max(a, b) for a, b in zip(self.den_tau, other.den_tau))
        dp = tuple(max(a, b) for a, b in zip(self.den_plus, other.den_plus))

        def scaled(e: "LocalizedElem") -> SymFunc:
            val = e.num
            for i in range(self.k):
                for _ in range(dt[i] - e.den_tau[i]):
                    val = val * tau(i + 1, self.k)
                for _ in range(dp[i] - e.den_plus[i]):
                    val = val * tau_plus(i + 1, self.k)
            return val

        return LocalizedElem(self.k, scaled(self) + scaled(other), dt, dp)

    __radd__ = __add__

    def __neg__(self) -> "LocalizedElem":
        return LocalizedElem(self.k, -self.num, self.den_tau, self.den_plus)

    def __sub__(self, other: "LocalizedElem | SymFunc | int") -> "LocalizedElem":
        if isinstance(other, (int, SymFunc)):
            other = LocalizedElem.from_sym(
                SymFunc.one() * other if isinstance(other, int) else other, self.k
            )
        return self + (-other)

    def __rsub__(self, other: "LocalizedElem | SymFunc | int") -> "LocalizedElem":
        return (-self) + other

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, SymFunc)):
            other = LocalizedElem.from_sym(
                SymFunc.one() * other if isinstance(other, int) else other, self.k
            )
        if not isinstance(other, LocalizedElem):
            return NotImplemented
        self._check_partner(other)
        return self.num * other.denominator_value() == other.num * self.denominator_value()

    def __hash__(self) -> int:  # pragma: no cover - fractions are unnormalized
        raise TypeError("unnormalized fractions are not hashable")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __repr__(self) -> str:
        return (
            f"LocalizedElem(k={self.k}, num={self.num!r}, "
            f"den_tau={self.den_tau}, den_plus={self.den_plus})"
        )


# -- the distinguished fractions ---------------------------------------------


def phi_z(i: int, k: int) -> LocalizedElem:
    """Image of the i-th coordinate: tau_i tau+_{i-1} / (tau+_i tau_{i-1})."""
    if not 1 <= i <= k + 1:
        raise ValueError(f"need 1 <= i <= k+1: i = {i}")
    num = tau(i, k) * tau_plus(i - 1, k)
    den_tau = [i - 1] if i - 1 >= 1 else []
    den_plus = [i] if i <= k else []
    return LocalizedElem.fraction(k, num, den_tau, den_plus)


def phi_Q(i: int, k: int) -> LocalizedElem:
    """Image of the i-th deformation parameter: tau_{i-1} tau_{i+1} / tau_i^2."""
    if not 1 <= i <= k:
        raise ValueError(f"need 1 <= i <= k: i = {i}")
    num = tau(i - 1, k) * tau(i + 1, k)
    return LocalizedElem.fraction(k, num, [i, i])


# -- identity checks ----------------------------------------------------------


def check_ideal_vanishing(i: int, k: int) -> bool:
    """The degree-i relation of the quotient presentation maps to zero:
    summing, over all size-i subsets of {1..k+1}, the product of the z
    images times (1 - Q_j) for each j in the subset with j+1 outside it,
    gives the binomial coefficient C(k+1, i).  (The parameter with index
    k+1 is taken to be zero.)"""
    if not 1 <= i <= k + 1:
        raise ValueError(f"need 1 <= i <= k+1: i = {i}")
    import itertools

    one = LocalizedElem.scalar(1, k)
    total = LocalizedElem.scalar(0, k)
    for subset in itertools.combinations(range(1, k + 2), i):
        chosen = set(subset)
        term = one
        for j in subset:
            term = term * phi_z(j, k)
            if j + 1 not in chosen and j <= k:
                term = term * (one - phi_Q(j, k))
        total = total + term
    return total == LocalizedElem.scalar(binom(k + 1, i), k)


def check_toda(i: int, k: int) -> bool:
    """The bilinear recurrence tau_i^2 - tau_{i-1} tau_{i+1} = tau+_i tau-_i."""
    if not 1 <= i <= k:
        raise ValueError(f"need 1 <= i <= k: i = {i}")
    lhs = tau(i, k) * tau(i, k) - tau(i - 1, k) * tau(i + 1, k)
    return lhs == tau_plus(i, k) * tau_minus(i, k)


def check_tau_recurrence(i: int, k: int) -> bool:
    """tau_i = g of the corner-removed rectangle plus tau-_i."""
    if not 1 <= i <= k + 1:
        raise ValueError(f"need 1 <= i <= k+1: i = {i}")
    star = (
        dual_grothendieck(rectangle_star(i, k)) if i <= k else SymFunc.zero()
    )
    return tau(i, k) == star + tau_minus(i, k)


def check_product_z(k: int) -> bool:
    """The product of all k+1 coordinate images telescopes to one."""
    total = LocalizedElem.scalar(1, k)
    for i in range(1, k + 2):
        total = total * phi_z(i, k)
    return total == LocalizedElem.scalar(1, k)


def check_z_column(i: int, k: int) -> bool:
    """(1 - Q_i) z_1 ... z_i maps to tau-_i / tau_i."""
    if not 1 <= i <= k:
        raise ValueError(f"need 1 <= i <= k: i = {i}")
    one = LocalizedElem.scalar(1, k)
    term = one - phi_Q(i, k)
    for j in range(1, i + 1):
        term = term * phi_z(j, k)
    return term == LocalizedElem.fraction(k, tau_minus(i, k), [i])


def check_schubert_s(i: int, k: int) -> bool:
    """One minus the image of the simple Schubert class, g of the
    corner-removed rectangle over tau_i, equals the same column fraction."""
    if not 1 <= i <= k:
        raise ValueError(f"need 1 <= i <= k: i = {i}")
    one = LocalizedElem.scalar(1, k)
    schubert = LocalizedElem.fraction(
        k, dual_grothendieck(rectangle_star(i, k)), [i]
    )
    return one - schubert == LocalizedElem.fraction(k, tau_minus(i, k), [i])


def check_grassmannian_image(lam: Iterable[int], i: int, k: int) -> bool:
    """On permutations with at most one descent, at i, the two fraction
    formulas for the image of the Schubert class agree:
    g of the conjugated rectangle complement over tau_i equals the
    preimage (under the h-sum substitution) of the boxy sum over the
    descent-normalized shape, divided by tau at each descent.

    For nonempty shapes the denominators coincide and the normalized
    shape must equal the conjugated complement; the empty shape gives the
    identity permutation, where both fractions reduce to one."""
    lam = as_partition(lam)
    w = grassmannian_perm(lam, i, k)
    shape = sh(w)
    dual_conj = conjugate(dual_partition(lam, i, k))
    if lam and shape != dual_conj:
        return False
    lhs = LocalizedElem.fraction(k, dual_grothendieck(dual_conj), [i])
    rhs = LocalizedElem.fraction(
        k, apply_F_inv(g_tilde(shape)), list(w.right_descents())
    )
    return lhs == rhs


def check_small_shape_collapse(lam: Iterable[int], k: int) -> bool:
    """For shapes inside a k+1-hook, the closed affine class is the plain
    dual stable Grothendieck function after undoing the h-sum substitution."""
    from .kschur import family

    lam = as_partition(lam)
    if lam and lam[0] + len(lam) > k + 1:
        raise ValueError(f"{lam} does not fit: need lam_1 + len(lam) <= {k + 1}")
    return apply_F_inv(family(k).closed_kkschur(lam)) == dual_grothendieck(lam)


if __name__ == "__main__":
    import doctest

    doctest.testmod()
