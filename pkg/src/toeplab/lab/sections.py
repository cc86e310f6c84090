"""Section builders used by the suites.

Sequences over ``n`` are built from exact data: coefficients up to index
``n`` and closed-form products, so the matrix for size ``n`` is the true
finite section of the symbol rather than of a fixed truncation.  (A fixed
truncation at degree K turns every semicommutator into one of rank <= 2K,
which hides non-compactness once n exceeds K.)
"""

from __future__ import annotations

from ..structured import Section, hankel_section, semicommutator
from ..symbols import (
    SymbolSpec,
    catalog_product,
    conjugate_coeffs,
    conjugate_spec,
    half_autocorrelation,
    half_coeffs,
    reflect_coeffs,
    symbol_coeffs,
)


def self_semicommutator(spec: SymbolSpec, n: int, order: str = "f,fbar") -> Section:
    """``T_n(|f|^2) - T_n(f) T_n(conj f)`` (``order="f,fbar"``) or the
    reversed product (``order="fbar,f"``)."""
    conj = conjugate_spec(spec)
    f = symbol_coeffs(spec, n)
    fb = symbol_coeffs(conj, n)
    sq = catalog_product(spec, conj, n)
    if order == "f,fbar":
        return semicommutator(f, fb, sq, n)
    if order == "fbar,f":
        return semicommutator(fb, f, sq, n)
    raise ValueError(f"unknown order {order!r}")


def mixed_semicommutator(f_spec: SymbolSpec, g_spec: SymbolSpec, n: int) -> Section:
    """``T_n(fg) - T_n(f) T_n(g)``."""
    return semicommutator(symbol_coeffs(f_spec, n), symbol_coeffs(g_spec, n),
                          catalog_product(f_spec, g_spec, n), n)


def hankel_gram(spec: SymbolSpec, n: int, side: int = 1) -> Section:
    """``P_n H^* H P_n`` for the Hankel operator built on ``f_{side*m}``, ``m >= 1``.

    With ``h = sum_{m>=1} f_{side m} z^m`` this equals ``T_n(|h|^2) - T_n(h) T_n(h)^*``,
    which closes the infinite inner sum exactly.  ``side=1`` gives the first
    Widom term of ``(f, conj f)``; ``side=-1`` gives the second one, un-flipped.
    """
    h = half_coeffs(symbol_coeffs(spec, n), side)
    return semicommutator(h, conjugate_coeffs(h), half_autocorrelation(spec, n, side), n)


def hankel(spec: SymbolSpec, n: int, side: int = 1) -> Section:
    """Hankel section ``f_{side(i+j+1)}``."""
    c = symbol_coeffs(spec, 2 * n)
    if side == -1:
        c = reflect_coeffs(c)
    return hankel_section(c, n)


def hermitian_parts(z: Section):
    """``Z = B + iC`` with ``B, C`` Hermitian."""
    a = z.entries
    b = (a + a.conj().T) / 2
    c = (a - a.conj().T) / 2j
    return Section(b, z.truncated), Section(c, z.truncated)
