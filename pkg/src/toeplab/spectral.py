"""Spectra of finite sections and singular-value cluster counting."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ._csv import write_rows

CLAMP_REL = 1e-12
HERMITIAN_TOL = 1e-10

DEFAULT_NS = (64, 128, 256, 512, 1024)
DEFAULT_EPSILONS = (0.2, 0.1, 0.05, 0.01)

VERDICTS = ("strong", "weak", "inconclusive", "none")
_STRENGTH = {"strong": 3, "weak": 2, "inconclusive": 1, "none": 0}


class NotHermitianError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SingularSpectrum:
    """Singular values, nonincreasing; values below ``1e-12 * max`` read as 0."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.n,):
            raise ValueError(f"expected {self.n} values, got shape {v.shape}")
        if np.any(v < -1e-12):
            raise ValueError("singular values must be nonnegative")
        v = np.sort(np.maximum(v, 0.0))[::-1]
        if v.size and v[0] > 0:
            v[v < CLAMP_REL * v[0]] = 0.0
        v.flags.writeable = False
        object.__setattr__(self, "values", v)


def _hermitian_defect(a):
    return float(np.linalg.norm(a - a.conj().T))


def hermitian_eigenvalues(M) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix, descending."""
    a = np.asarray(M, dtype=complex)
    defect = _hermitian_defect(a)
    if defect > HERMITIAN_TOL * (1.0 + np.linalg.norm(a)):
        raise NotHermitianError(f"matrix is not Hermitian: ||M - M*||_F = {defect:.3e}")
    return scipy.linalg.eigvalsh((a + a.conj().T) / 2)[::-1]


def singular_values(M) -> SingularSpectrum:
    a = np.asarray(M, dtype=complex)
    s = scipy.linalg.svdvals(a)
    return SingularSpectrum(a.shape[0], s)


def outlier_count(s: SingularSpectrum, eps: float) -> int:
    """Number of singular values outside ``[0, eps)``."""
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return int(np.count_nonzero(s.values >= eps))


def eps_rank(M, eps: float) -> int:
    """Smallest rank of ``R`` with ``M = R + N``, ``||N|| < eps`` (Eckart-Young)."""
    return outlier_count(singular_values(M), eps)


@dataclass(frozen=True)
class ClusterThresholds:
    """Knobs of the finite-data cluster heuristic.

    ``window`` is the fraction of the largest sizes over which a count must
    stay constant to read as strong; ``weak_factor`` the required drop of the
    outlier fraction ``N/n`` from smallest to largest size; ``spread`` the
    relative spread of ``N/n`` under which growth is called proportional.
    """

    window: float = 0.5
    weak_factor: float = 0.5
    spread: float = 0.10


def _classify_column(ns, counts, th: ClusterThresholds) -> str:
    ns = np.asarray(ns, dtype=float)
    counts = np.asarray(counts, dtype=float)
    top = max(2, math.ceil(th.window * len(ns)))
    tail = counts[-top:]
    if np.all(tail == tail[0]):
        return "strong"
    frac = counts / ns
    if frac.mean() > 0 and (frac.max() - frac.min()) / frac.mean() <= th.spread:
        return "none"
    if np.all(np.diff(counts) >= 0) and frac[-1] <= th.weak_factor * frac[0]:
        return "weak"
    return "inconclusive"


def classify_cluster(ns, epsilons, counts, thresholds: ClusterThresholds | None = None):
    """Per-epsilon verdicts and the overall verdict from an ``N(n, eps)`` table.

    ``counts[a][b]`` is the outlier count at ``ns[a]``, ``epsilons[b]``.  This is
    a heuristic: O(1) versus o(n) cannot be decided from finitely many sizes.
    The overall verdict is the weakest per-epsilon verdict.
    """
    th = thresholds or ClusterThresholds()
    ns = list(ns)
    if len(ns) < 4:
        raise ValueError(f"need at least 4 sizes to classify, got {len(ns)}")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("sizes must be strictly increasing")
    table = np.asarray(counts)
    if table.shape != (len(ns), len(epsilons)):
        raise ValueError(f"count table shape {table.shape} != ({len(ns)}, {len(epsilons)})")
    verdicts = {float(e): _classify_column(ns, table[:, b], th) for b, e in enumerate(epsilons)}
    overall = min(verdicts.values(), key=_STRENGTH.__getitem__) if verdicts else "strong"
    return verdicts, overall


@dataclass(frozen=True, eq=False)
class ClusterReport:
    ns: tuple
    epsilons: tuple
    counts: np.ndarray
    verdicts: dict
    overall: str
    spectra: dict = field(default_factory=dict)

    def count(self, n, eps) -> int:
        return int(self.counts[self.ns.index(n), self.epsilons.index(eps)])

    def column(self, eps) -> list:
        return [int(c) for c in self.counts[:, self.epsilons.index(eps)]]

    def rows(self):
        """``(n, epsilon, count)`` with n ascending, then epsilon ascending."""
        order = sorted(range(len(self.epsilons)), key=lambda b: self.epsilons[b])
        for a, n in enumerate(self.ns):
            for b in order:
                yield n, float(self.epsilons[b]), int(self.counts[a, b])

    def spectrum_rows(self):
        for n in sorted(self.spectra):
            for idx, sigma in enumerate(self.spectra[n].values):
                yield n, idx, float(sigma)

    def to_csv(self, stream):
        write_rows(stream, ("n", "epsilon", "count"), self.rows())
        stream.write(f"# verdict={self.overall}\n")


def cluster_of_sections(builder, ns, epsilons, thresholds: ClusterThresholds | None = None,
                        keep_spectra=False) -> ClusterReport:
    """Count outliers of ``builder(n)`` for each size and classify the table."""
    ns = tuple(int(n) for n in ns)
    epsilons = tuple(float(e) for e in epsilons)
    table = np.zeros((len(ns), len(epsilons)), dtype=int)
    spectra = {}
    for a, n in enumerate(ns):
        s = singular_values(builder(n))
        table[a] = [outlier_count(s, e) for e in epsilons]
        if keep_spectra:
            spectra[n] = s
    verdicts, overall = classify_cluster(ns, epsilons, table, thresholds)
    table.flags.writeable = False
    return ClusterReport(ns, epsilons, table, verdicts, overall, spectra)


def random_states(rng, n, trials):
    """``trials`` unit vectors in C^n with complex Gaussian direction (columns)."""
    v = rng.standard_normal((n, trials)) + 1j * rng.standard_normal((n, trials))
    return v / np.linalg.norm(v, axis=0)


def uchiyama_check(X, Y, Z, rng, trials=1000, tol=1e-10):
    """Test ``|<Zx,x>| <= <Xx,x>^(1/2) <Yx,x>^(1/2)`` on random unit vectors.

    Returns ``(violations, max_excess)`` where excess is the left side minus
    the right side; a violation is an excess above ``tol``.
    """
    x_m, y_m, z_m = (np.asarray(a, dtype=complex) for a in (X, Y, Z))
    v = random_states(rng, x_m.shape[0], trials)
    qx = np.einsum("ij,ij->j", v.conj(), x_m @ v).real
    qy = np.einsum("ij,ij->j", v.conj(), y_m @ v).real
    qz = np.abs(np.einsum("ij,ij->j", v.conj(), z_m @ v))
    excess = qz - np.sqrt(np.maximum(qx, 0.0)) * np.sqrt(np.maximum(qy, 0.0))
    return int(np.count_nonzero(excess > tol)), float(excess.max())
