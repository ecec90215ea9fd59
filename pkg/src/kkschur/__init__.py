"""Exact computer algebra for Katalan functions, K-k-Schur functions, the
affine symmetric group, and the K-theoretic Peterson map.

Subpackages:

* :mod:`kkschur.symfunc` — the ring Z[h_1, h_2, ...], dual stable
  Grothendieck determinants, the F / Omega morphisms, triangular expansion.
* :mod:`kkschur.affine` — the affine symmetric group, Bruhat and weak
  orders, the partition bijection, cyclically (de|in)creasing elements, the
  Hecke star product, translations, and the sh map.
* :mod:`kkschur.katalan` — root ideals, Katalan triples and their exact
  evaluation, rewrite lemmas, and the straightening algorithm.
* :mod:`kkschur.kschur` — K-k-Schur and closed K-k-Schur functions, Pieri
  rules, 0-Hecke operators, and the main comparison checks.
* :mod:`kkschur.peterson` — tau classes, the localized quantum-K ring map,
  and the discrete Toda / ideal-vanishing checks.
* :mod:`kkschur.cli` — the ``kkschur`` command-line interface.
"""

__version__ = "0.1.0"
