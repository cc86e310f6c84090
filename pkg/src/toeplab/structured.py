"""Finite Toeplitz and Hankel sections, semicommutators and the Widom split.

Conventions: ``T_n(f)[i, j] = f_{i-j}`` and ``H(f)[i, j] = f_{i+j+1}`` for
``0 <= i, j < n``.  Coefficients outside ``[-K, K]`` are taken as zero; when
that loses information (a non band-limited symbol whose section needs more
coefficients than supplied) the section is flagged ``truncated``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._csv import write_rows
from .symbols import FourierCoeffs


@dataclass(frozen=True, eq=False)
class Section:
    """Dense ``n x n`` complex matrix plus a truncation flag."""

    entries: np.ndarray
    truncated: bool = False

    def __post_init__(self):
        a = np.array(self.entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError(f"section must be square with n >= 1, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("section has non-finite entries")
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)

    def to_csv(self, stream):
        n = self.n
        rows = ((i, j, float(self.entries[i, j].real), float(self.entries[i, j].imag))
                for i in range(n) for j in range(n))
        write_rows(stream, ("i", "j", "re", "im"), rows)


def _missing(c: FourierCoeffs, needed: int) -> bool:
    return not c.bandlimited and c.K < needed


def toeplitz(c: FourierCoeffs, n: int) -> Section:
    idx = np.arange(n)
    return Section(c.at(idx[:, None] - idx[None, :]), truncated=_missing(c, n - 1))


def hankel_section(c: FourierCoeffs, n: int) -> Section:
    idx = np.arange(n)
    return Section(c.at(idx[:, None] + idx[None, :] + 1), truncated=_missing(c, 2 * n - 1))


def semicommutator(f: FourierCoeffs, g: FourierCoeffs, fg: FourierCoeffs, n: int) -> Section:
    """``T_n(fg) - T_n(f) T_n(g)``; ``fg`` is supplied by the caller."""
    tfg, tf, tg = toeplitz(fg, n), toeplitz(f, n), toeplitz(g, n)
    return Section(tfg.entries - tf.entries @ tg.entries,
                   truncated=tfg.truncated or tf.truncated or tg.truncated)


def flip_matrix(n: int) -> Section:
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    return Section(np.eye(n)[::-1])


def default_inner(f: FourierCoeffs, g: FourierCoeffs) -> int:
    return 4 * max(f.K, g.K, 1)


def widom_rhs(f: FourierCoeffs, g: FourierCoeffs, n: int, inner: int | None = None):
    """The two Hankel-product terms of the finite Widom identity.

    ``p[i, j] = sum_k f_{i+k+1} g_{-(k+j+1)}`` and ``q = J M J`` with
    ``M[i, j] = sum_k f_{-(i+k+1)} g_{k+j+1}``, ``k < inner``.
    """
    if inner is None:
        inner = default_inner(f, g)
    if inner < 1:
        raise ValueError(f"inner truncation must be >= 1, got {inner}")
    # terms with k >= max K vanish identically
    used = max(1, min(inner, max(f.K, g.K)))
    i = np.arange(n)[:, None]
    k = np.arange(used)[None, :]
    f_pos = f.at(i + k + 1)          # n x used
    f_neg = f.at(-(i + k + 1))
    g_neg = g.at(-(k.T + i.T + 1))   # used x n
    g_pos = g.at(k.T + i.T + 1)
    p = f_pos @ g_neg
    q = (f_neg @ g_pos)[::-1, ::-1]
    # an inner sum cut before the coefficients run out drops a tail
    cut = inner < max(f.K, g.K) or _missing(f, n + inner) or _missing(g, n + inner)
    return Section(p, truncated=cut), Section(q, truncated=cut)


@dataclass(frozen=True, eq=False)
class WidomDecomposition:
    lhs: Section
    p_term: Section
    q_term: Section
    residual_fro: float
    exact: bool
    inner: int

    @property
    def tolerance(self) -> float:
        return 1e-10 * (1.0 + float(np.linalg.norm(self.lhs.entries)))

    def summary(self) -> str:
        lines = [
            f"n = {self.lhs.n}",
            f"inner = {self.inner}",
            f"residual_fro = {self.residual_fro:.17g}",
            f"lhs_fro = {np.linalg.norm(self.lhs.entries):.17g}",
            f"exact = {str(self.exact).lower()}",
            f"lhs_truncated = {str(self.lhs.truncated).lower()}",
            f"rhs_truncated = {str(self.p_term.truncated).lower()}",
        ]
        return "\n".join(lines) + "\n"


def widom_check(f: FourierCoeffs, g: FourierCoeffs, fg: FourierCoeffs, n: int,
                inner: int | None = None) -> WidomDecomposition:
    if inner is None:
        inner = default_inner(f, g)
    lhs = semicommutator(f, g, fg, n)
    p, q = widom_rhs(f, g, n, inner)
    residual = float(np.linalg.norm(lhs.entries - p.entries - q.entries))
    exact = (f.bandlimited and g.bandlimited and f.exact and g.exact
             and inner >= max(f.degree, g.degree))
    return WidomDecomposition(lhs, p, q, residual, exact, inner)
