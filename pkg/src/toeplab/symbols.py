"""Symbols on the unit circle: catalog, Fourier coefficients, mean oscillation.

Fourier convention throughout::

    c_k = (1/2pi) * integral_0^{2pi} f(e^{i theta}) e^{-i k theta} d theta

Coefficient vectors are stored two-sided, position ``j`` holding ``c_{j-K}``.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field

import numpy as np

from ._csv import write_rows

DEFAULT_M = 4096
DEFAULT_K = 128

# VMO-likeness decision, read off the oscillation profile at one scale.
VMO_DELTA = 2 * math.pi / 256
VMO_LOW = 0.05
VMO_HIGH = 0.2


class SymbolError(ValueError):
    """Unparseable label or a symbol operation outside its domain."""


class Kind(enum.Enum):
    CONSTANT = "constant"
    MONOMIAL = "monomial"
    TRIGPOLY = "trigpoly"
    SAWTOOTH = "sawtooth"
    SMOOTHEXP = "smoothexp"
    SAMPLED = "sampled"


BANDLIMITED_KINDS = frozenset({Kind.CONSTANT, Kind.MONOMIAL, Kind.TRIGPOLY})
REAL_KINDS = frozenset({Kind.SAWTOOTH, Kind.SMOOTHEXP})


def _frozen(arr):
    arr = np.array(arr, dtype=complex)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class FourierCoeffs:
    """Finitely supported coefficients ``c_{-K} .. c_K``.

    ``exact`` is true for closed-form values (false for quadrature estimates or
    products of truncated series).  ``bandlimited`` means every coefficient
    outside ``[-K, K]`` is genuinely zero, so nothing is lost by truncation.
    """

    values: np.ndarray
    exact: bool = True
    bandlimited: bool = False
    note: str = ""

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim != 1 or len(values) % 2 != 1:
            raise SymbolError(f"coefficient vector must have odd length 2K+1, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise SymbolError("coefficients must be finite")
        object.__setattr__(self, "values", values)

    @property
    def K(self) -> int:
        return (len(self.values) - 1) // 2

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.K, self.K + 1)

    def at(self, k):
        """Coefficients at integer index (array); zero outside ``[-K, K]``."""
        k = np.asarray(k)
        inside = np.abs(k) <= self.K
        pos = np.where(inside, k + self.K, 0)
        return np.where(inside, self.values[pos], 0j)

    @property
    def degree(self) -> int:
        nz = np.nonzero(self.values)[0]
        if len(nz) == 0:
            return 0
        return int(np.max(np.abs(nz - self.K)))

    def is_hermitian(self, tol=None) -> bool:
        """True when ``c_{-k} = conj(c_k)``, i.e. the symbol is real-valued."""
        if tol is None:
            tol = 1e-12 if self.exact else 1e-6
        return bool(np.max(np.abs(self.values - np.conj(self.values[::-1])), initial=0.0) <= tol)

    def to_csv(self, stream):
        rows = ((int(k), float(c.real), float(c.imag)) for k, c in zip(self.indices, self.values))
        write_rows(stream, ("k", "re", "im"), rows)


@dataclass(frozen=True, eq=False)
class SymbolSpec:
    """A catalog symbol or a raw sampled grid.

    Only the fields relevant to ``kind`` are meaningful: ``constant`` for
    Constant, ``power`` for Monomial, ``terms`` (pairs ``(k, c_k)``) for
    TrigPolynomial, ``rate`` for SmoothExp (``c_k = exp(-rate |k|)``) and
    ``samples`` for SampledGrid.
    """

    kind: Kind
    label: str
    constant: complex = 0j
    power: int = 0
    terms: tuple = ()
    rate: float = 1.0
    samples: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if self.kind is Kind.TRIGPOLY and not self.terms:
            raise SymbolError("trigonometric polynomial needs at least one term")
        if self.kind is Kind.SMOOTHEXP and not self.rate > 0:
            raise SymbolError(f"smoothexp decay rate must be positive, got {self.rate}")
        if self.kind is Kind.SAMPLED:
            samples = _frozen(self.samples)
            M = len(samples)
            if M < 8 or M & (M - 1):
                raise SymbolError(f"sampled grid needs M >= 8 points, M a power of two; got M={M}")
            if not np.all(np.isfinite(samples)):
                raise SymbolError("sampled grid contains non-finite values")
            object.__setattr__(self, "samples", samples)

    @property
    def bandlimited(self) -> bool:
        return self.kind in BANDLIMITED_KINDS

    @property
    def M(self) -> int:
        return len(self.samples)

    @classmethod
    def const(cls, c=1.0):
        return cls(Kind.CONSTANT, f"constant:{_fmt_complex(c)}", constant=complex(c))

    @classmethod
    def monomial(cls, m):
        return cls(Kind.MONOMIAL, f"monomial:{int(m)}", power=int(m))

    @classmethod
    def trigpoly(cls, terms, label=None):
        merged = {}
        for k, c in terms:
            merged[int(k)] = merged.get(int(k), 0j) + complex(c)
        terms = tuple(sorted(merged.items()))
        if label is None:
            label = "trigpoly:[" + ",".join(f"{_fmt_complex(c)}@{k}" for k, c in terms) + "]"
        return cls(Kind.TRIGPOLY, label, terms=terms)

    @classmethod
    def sawtooth(cls):
        return cls(Kind.SAWTOOTH, "sawtooth")

    @classmethod
    def smoothexp(cls, rate=1.0):
        return cls(Kind.SMOOTHEXP, f"smoothexp:{rate:g}", rate=float(rate))

    @classmethod
    def grid(cls, samples, label="sampled"):
        return cls(Kind.SAMPLED, label, samples=np.asarray(samples, dtype=complex))


def _fmt_complex(c):
    c = complex(c)
    if c.imag == 0:
        return f"{c.real:g}"
    return f"{c.real:g}{c.imag:+g}j"


def cosine():
    return SymbolSpec.trigpoly([(-1, 0.5), (1, 0.5)], label="cos")


_TERM = re.compile(r"^\s*(?P<c>[^@]+?)\s*@\s*(?P<k>[+-]?\d+)\s*$")


def parse_label(label: str) -> SymbolSpec:
    """Resolve a catalog label such as ``sawtooth``, ``monomial:1``,
    ``trigpoly:[1@-1,1@1]``, ``smoothexp:0.5``, ``cos`` or ``grid:<path>``."""
    text = label.strip().replace("−", "-")
    name, _, arg = text.partition(":")
    name = name.lower()
    try:
        if name == "constant":
            return SymbolSpec.const(complex(arg.replace(" ", "")) if arg else 1.0)
        if name == "monomial":
            return SymbolSpec.monomial(int(arg))
        if name == "cos" and not arg:
            return cosine()
        if name == "sawtooth" and not arg:
            return SymbolSpec.sawtooth()
        if name == "smoothexp":
            return SymbolSpec.smoothexp(float(arg) if arg else 1.0)
        if name == "trigpoly":
            body = arg.strip()
            if not (body.startswith("[") and body.endswith("]")):
                raise SymbolError(f"trigpoly terms must be bracketed: {label!r}")
            terms = []
            for part in filter(None, (p.strip() for p in body[1:-1].split(","))):
                m = _TERM.match(part)
                if m is None:
                    raise SymbolError(f"bad trigpoly term {part!r}, expected coef@index")
                terms.append((int(m["k"]), complex(m["c"].replace(" ", ""))))
            return SymbolSpec.trigpoly(terms)
        if name == "grid":
            return load_grid(arg)
    except SymbolError:
        raise
    except (ValueError, OSError) as exc:
        raise SymbolError(f"cannot resolve symbol {label!r}: {exc}") from exc
    raise SymbolError(f"unknown symbol label {label!r}")


def load_grid(path) -> SymbolSpec:
    """Read a sampled grid: one value per line, ``re`` or ``re,im``."""
    values = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [p for p in re.split(r"[,\s]+", line) if p]
            re_ = float(parts[0])
            im = float(parts[1]) if len(parts) > 1 else 0.0
            values.append(complex(re_, im))
    return SymbolSpec.grid(values, label=f"grid:{path}")


def evaluate(spec: SymbolSpec, theta) -> np.ndarray:
    """Evaluate a catalog symbol at angles ``theta`` (radians)."""
    theta = np.asarray(theta, dtype=float)
    kind = spec.kind
    if kind is Kind.CONSTANT:
        return np.full(theta.shape, spec.constant, dtype=complex)
    if kind is Kind.MONOMIAL:
        return np.exp(1j * spec.power * theta)
    if kind is Kind.TRIGPOLY:
        out = np.zeros(theta.shape, dtype=complex)
        for k, c in spec.terms:
            out += c * np.exp(1j * k * theta)
        return out
    if kind is Kind.SAWTOOTH:
        t = np.mod(theta, 2 * math.pi)
        # the jump at theta = 0 takes the midpoint value, as the Fourier series does
        return np.where(t == 0, 0.0, (math.pi - t) / math.pi).astype(complex)
    if kind is Kind.SMOOTHEXP:
        r = math.exp(-spec.rate)
        return ((1 - r * r) / (1 - 2 * r * np.cos(theta) + r * r)).astype(complex)
    raise SymbolError("a sampled grid has no evaluator; use its samples")


def sample_grid(spec: SymbolSpec, M: int = DEFAULT_M) -> SymbolSpec:
    """Sample a catalog symbol on ``M`` uniform points ``2 pi j / M``."""
    if spec.kind is Kind.SAMPLED:
        if spec.M != M:
            raise SymbolError(f"grid has M={spec.M}, requested M={M}")
        return spec
    theta = 2 * math.pi * np.arange(M) / M
    return SymbolSpec.grid(evaluate(spec, theta), label=f"{spec.label}@M={M}")


def catalog_coeffs(spec: SymbolSpec, K: int) -> FourierCoeffs:
    """Closed-form coefficients of a catalog symbol, truncated to ``[-K, K]``."""
    if K < 0:
        raise SymbolError(f"K must be nonnegative, got {K}")
    k = np.arange(-K, K + 1)
    kind = spec.kind
    values = np.zeros(2 * K + 1, dtype=complex)
    if kind is Kind.CONSTANT:
        values[K] = spec.constant
    elif kind is Kind.MONOMIAL:
        if abs(spec.power) <= K:
            values[K + spec.power] = 1.0
    elif kind is Kind.TRIGPOLY:
        for j, c in spec.terms:
            if abs(j) <= K:
                values[K + j] += c
    elif kind is Kind.SAWTOOTH:
        nz = k != 0
        values[nz] = 1.0 / (1j * math.pi * k[nz])
    elif kind is Kind.SMOOTHEXP:
        values[:] = np.exp(-spec.rate * np.abs(k))
    else:
        raise SymbolError("sampled grid has no closed-form coefficients; use sample_coeffs")
    return FourierCoeffs(values, exact=True, bandlimited=spec.bandlimited)


def sample_coeffs(grid: SymbolSpec, K: int) -> FourierCoeffs:
    """Quadrature (DFT) estimate of the coefficients of a sampled grid."""
    if grid.kind is not Kind.SAMPLED:
        raise SymbolError("sample_coeffs needs a sampled grid; see sample_grid")
    M = grid.M
    if K < 0 or M < 4 * K + 4:
        raise SymbolError(f"M={M} too small for K={K} (need M >= 4K+4 to limit aliasing)")
    spectrum = np.fft.fft(grid.samples) / M
    k = np.arange(-K, K + 1)
    return FourierCoeffs(spectrum[k % M], exact=False, bandlimited=False,
                         note=f"DFT quadrature on M={M} points")


def max_sampled_K(M: int) -> int:
    return (M - 4) // 4


def symbol_coeffs(spec: SymbolSpec, K: int) -> FourierCoeffs:
    """Catalog coefficients, or quadrature ones for a grid (K capped by aliasing)."""
    if spec.kind is Kind.SAMPLED:
        return sample_coeffs(spec, min(K, max_sampled_K(spec.M)))
    return catalog_coeffs(spec, K)


def conjugate_coeffs(c: FourierCoeffs) -> FourierCoeffs:
    """Coefficients of the conjugate symbol: ``(conj f)_k = conj(f_{-k})``."""
    return FourierCoeffs(np.conj(c.values[::-1]), c.exact, c.bandlimited, c.note)


def reflect_coeffs(c: FourierCoeffs) -> FourierCoeffs:
    """Coefficients of ``f(1/z)``: ``c_k -> c_{-k}``."""
    return FourierCoeffs(c.values[::-1], c.exact, c.bandlimited, c.note)


def truncate(c: FourierCoeffs, K: int) -> FourierCoeffs:
    """Restrict (or zero-pad) to ``[-K, K]``."""
    values = c.at(np.arange(-K, K + 1))
    lost = K < c.K and bool(np.any(c.values[: c.K - K]) or np.any(c.values[c.K + K + 1:]))
    bandlimited = c.bandlimited and not lost
    return FourierCoeffs(values, c.exact, bandlimited, c.note)


def product_coeffs(a: FourierCoeffs, b: FourierCoeffs) -> FourierCoeffs:
    """Coefficients of the pointwise product, by discrete convolution.

    Exact only for two exact band-limited inputs.  Otherwise this is the
    product of the truncations, and the outer coefficients (index beyond
    ``min(a.K, b.K)``) miss most of their terms.
    """
    values = np.convolve(a.values, b.values)
    exact = a.exact and b.exact and a.bandlimited and b.bandlimited
    note = ""
    if not exact:
        note = (f"product of truncations (K={a.K}, K={b.K}); "
                f"coefficients beyond |k|={min(a.K, b.K)} are biased")
    return FourierCoeffs(values, exact=exact, bandlimited=a.bandlimited and b.bandlimited, note=note)


def conjugate_spec(spec: SymbolSpec) -> SymbolSpec:
    """The catalog entry of the conjugate symbol."""
    kind = spec.kind
    if kind in REAL_KINDS:
        return spec
    if kind is Kind.CONSTANT:
        return SymbolSpec.const(spec.constant.conjugate())
    if kind is Kind.MONOMIAL:
        return SymbolSpec.monomial(-spec.power)
    if kind is Kind.TRIGPOLY:
        terms = [(-k, c.conjugate()) for k, c in spec.terms]
        if all(c.imag == 0 for _, c in spec.terms) and sorted(terms) == sorted(spec.terms):
            return spec
        return SymbolSpec.trigpoly(terms)
    return SymbolSpec.grid(np.conj(spec.samples), label=f"conj({spec.label})")


def _sawtooth_square(K):
    k = np.arange(-K, K + 1)
    values = np.empty(2 * K + 1, dtype=complex)
    nz = k != 0
    values[nz] = 2.0 / (math.pi ** 2 * k[nz] ** 2)
    values[K] = 1.0 / 3.0
    return values


def _smoothexp_product(a, b, K):
    r, s = math.exp(-a), math.exp(-b)
    k = np.abs(np.arange(-K, K + 1)).astype(float)
    rk, sk = r ** k, s ** k
    tails = (rk + sk) * r * s / (1 - r * s)
    if math.isclose(r, s, rel_tol=1e-15):
        middle = (k + 1) * rk
    else:
        middle = (s ** (k + 1) - r ** (k + 1)) / (s - r)
    return (tails + middle).astype(complex)


def catalog_product(f: SymbolSpec, g: SymbolSpec, K: int) -> FourierCoeffs:
    """Coefficients of ``f * g`` on ``[-K, K]``, exact wherever a closed form exists.

    Band-limited factors are convolved against a long enough truncation of the
    other factor, so the result is exact; sawtooth and SmoothExp squares use
    their closed forms.  Grids are multiplied pointwise and resampled.  Any
    remaining pair falls back to convolving long truncations (flagged).
    """
    if f.kind is Kind.SAMPLED or g.kind is Kind.SAMPLED:
        M = f.M if f.kind is Kind.SAMPLED else g.M
        f, g = sample_grid(f, M), sample_grid(g, M)
        if f.M != g.M:
            raise SymbolError(f"grid sizes differ: {f.M} vs {g.M}")
        grid = SymbolSpec.grid(f.samples * g.samples, label=f"({f.label})*({g.label})")
        return sample_coeffs(grid, min(K, max_sampled_K(grid.M)))
    if f.bandlimited or g.bandlimited:
        d = _spec_degree(f) if f.bandlimited else _spec_degree(g)
        full = product_coeffs(catalog_coeffs(f, K + d), catalog_coeffs(g, K + d))
        out = truncate(full, K)
        return FourierCoeffs(out.values, exact=True, bandlimited=f.bandlimited and g.bandlimited)
    if f.kind is Kind.SAWTOOTH and g.kind is Kind.SAWTOOTH:
        return FourierCoeffs(_sawtooth_square(K), exact=True)
    if f.kind is Kind.SMOOTHEXP and g.kind is Kind.SMOOTHEXP:
        return FourierCoeffs(_smoothexp_product(f.rate, g.rate, K), exact=True)
    pad = 4 * K + 64
    full = product_coeffs(catalog_coeffs(f, pad), catalog_coeffs(g, pad))
    out = truncate(full, K)
    return FourierCoeffs(out.values, exact=False,
                         note=f"convolution of truncations at K={pad}, tail error not bounded")


def _spec_degree(spec):
    if spec.kind is Kind.CONSTANT:
        return 0
    if spec.kind is Kind.MONOMIAL:
        return abs(spec.power)
    return max(abs(k) for k, _ in spec.terms)


def half_coeffs(c: FourierCoeffs, side: int = 1) -> FourierCoeffs:
    """Keep ``c_m`` for ``m >= 1`` (``side=1``) or the reflected ``c_{-m}``, ``m >= 1``
    (``side=-1``), re-indexed to positive ``m``; everything else is zero."""
    src = c if side == 1 else reflect_coeffs(c)
    values = np.where(src.indices >= 1, src.values, 0j)
    return FourierCoeffs(values, src.exact, src.bandlimited, src.note)


def half_autocorrelation(spec: SymbolSpec, K: int, side: int = 1) -> FourierCoeffs:
    """Coefficients of ``|h|^2`` for the half-symbol ``h = sum_{m>=1} f_{side*m} z^m``.

    ``r_k = sum_{m>=1} f_{side(m+k)} conj(f_{side m})`` for ``k >= 0`` and
    ``r_{-k} = conj(r_k)``.  Closed forms for sawtooth (``H_k / (pi^2 k)``, with
    ``r_0 = 1/6``) and SmoothExp (``rho^{k+2} / (1 - rho^2)``); finite sums
    for band-limited symbols and grids.
    """
    k = np.arange(0, K + 1)
    if spec.kind is Kind.SAWTOOTH:
        pos = np.empty(K + 1)
        pos[0] = 1.0 / 6.0
        harmonic = np.cumsum(1.0 / np.arange(1, K + 1)) if K else np.zeros(0)
        pos[1:] = harmonic / (math.pi ** 2 * k[1:])
        exact, note = True, ""
    elif spec.kind is Kind.SMOOTHEXP:
        rho = math.exp(-spec.rate)
        pos = rho ** (k + 2.0) / (1 - rho * rho)
        exact, note = True, ""
    else:
        if spec.kind is Kind.SAMPLED:
            c = symbol_coeffs(spec, 2 * K + 2)
        else:
            c = catalog_coeffs(spec, _spec_degree(spec))
        h = half_coeffs(c, side)
        m = np.arange(1, h.K + 1)
        pos = np.array([np.sum(h.at(m + j) * np.conj(h.at(m))) for j in k], dtype=complex)
        exact, note = c.exact, c.note
    pos = np.asarray(pos, dtype=complex)
    values = np.concatenate([np.conj(pos[:0:-1]), pos])
    return FourierCoeffs(values, exact=exact, bandlimited=spec.bandlimited, note=note)


# --- mean oscillation ------------------------------------------------------

@dataclass(frozen=True)
class OscillationProfile:
    deltas: tuple
    values: tuple

    def at(self, delta):
        """Profile value at the largest sampled scale not exceeding ``delta``."""
        idx = np.searchsorted(np.asarray(self.deltas), delta * (1 + 1e-12), side="right") - 1
        if idx < 0:
            raise SymbolError(f"profile has no scale <= {delta}")
        return self.values[idx]


def _grid_samples(grid):
    if isinstance(grid, SymbolSpec):
        if grid.kind is not Kind.SAMPLED:
            raise SymbolError("mean oscillation needs a sampled grid; see sample_grid")
        return grid.samples
    return np.asarray(grid, dtype=complex)


def _window_points(delta, M):
    h = 2 * math.pi / M
    if not (h < delta <= 2 * math.pi * (1 + 1e-12)):
        raise SymbolError(f"delta={delta} outside the resolvable range ({h}, 2*pi] for M={M}")
    return min(M, int(math.floor(delta / h * (1 + 1e-12))) + 1)


def _oscillation_scan(samples, widths):
    """Running maximum of windowed RMS deviation, read at each requested width."""
    f = samples - samples.mean()
    M = len(f)
    ext = np.concatenate([f, f])
    c1 = np.concatenate([[0], np.cumsum(ext)])
    c2 = np.concatenate([[0], np.cumsum(np.abs(ext) ** 2)])
    start = np.arange(M)
    best = 0.0
    out = {}
    targets = sorted(set(widths))
    ti = 0
    for s in range(2, targets[-1] + 1):
        mean = (c1[start + s] - c1[start]) / s
        msq = (c2[start + s] - c2[start]) / s
        var = np.maximum(msq - np.abs(mean) ** 2, 0.0)
        best = max(best, float(np.sqrt(var.max())))
        while ti < len(targets) and targets[ti] == s:
            out[s] = best
            ti += 1
    for w in targets:
        out.setdefault(w, 0.0)
    return out


def mean_oscillation(grid, delta: float) -> float:
    """Largest RMS deviation from the window mean over all windows of length
    at most ``delta``, windows anchored at grid points (wrapping around)."""
    samples = _grid_samples(grid)
    w = _window_points(delta, len(samples))
    return _oscillation_scan(samples, [w])[w]


def oscillation_profile(grid, deltas) -> OscillationProfile:
    deltas = [float(d) for d in deltas]
    if any(b < a for a, b in zip(deltas, deltas[1:])):
        raise SymbolError("deltas must be sorted ascending")
    samples = _grid_samples(grid)
    widths = [_window_points(d, len(samples)) for d in deltas]
    scan = _oscillation_scan(samples, widths)
    return OscillationProfile(tuple(deltas), tuple(scan[w] for w in widths))


def default_deltas(M: int = DEFAULT_M):
    """Dyadic scales ``2 pi / 2^j`` from the grid resolution up to the full circle."""
    j_max = int(math.log2(M)) - 1
    return [2 * math.pi / 2 ** j for j in range(j_max, -1, -1)]


def vmo_likeness(profile: OscillationProfile, delta=VMO_DELTA, low=VMO_LOW, high=VMO_HIGH) -> str:
    """``vmo-like``, ``not-vmo-like`` or ``inconclusive`` from one profile value."""
    value = profile.at(delta)
    if value < low:
        return "vmo-like"
    if value > high:
        return "not-vmo-like"
    return "inconclusive"


def symbol_class(spec: SymbolSpec) -> str:
    """Catalog class: ``continuous`` (inside VMO), ``jump`` (bounded, not VMO)
    or ``unknown`` for raw grids."""
    if spec.kind is Kind.SAWTOOTH:
        return "jump"
    if spec.kind is Kind.SAMPLED:
        return "unknown"
    return "continuous"
