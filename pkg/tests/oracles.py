"""Independent reference computations used by the tests.

Nothing here imports toeplab: coefficients come from adaptive quadrature of
the symbol formulas, and matrices from explicit loops over their entry
definitions.
"""

import math

import numpy as np
from scipy.integrate import quad


def sawtooth(theta):
    t = theta % (2 * math.pi)
    return (math.pi - t) / math.pi


def poisson(rate):
    r = math.exp(-rate)
    return lambda theta: (1 - r * r) / (1 - 2 * r * math.cos(theta) + r * r)


def fourier_coeff(func, k, limit=400):
    """``(1/2pi) int_0^{2pi} func(t) e^{-ikt} dt`` by adaptive quadrature.

    ``func`` may be complex valued; the integral is split into real and
    imaginary parts, with the oscillatory factor handled by ``quad``'s
    cosine/sine weights.
    """
    def re(t):
        return complex(func(t)).real

    def im(t):
        return complex(func(t)).imag

    two_pi = 2 * math.pi
    if k == 0:
        a = quad(re, 0, two_pi, limit=limit)[0]
        b = quad(im, 0, two_pi, limit=limit)[0]
        return complex(a, b) / two_pi
    cr = quad(re, 0, two_pi, weight="cos", wvar=k, limit=limit)[0]
    sr = quad(re, 0, two_pi, weight="sin", wvar=k, limit=limit)[0]
    ci = quad(im, 0, two_pi, weight="cos", wvar=k, limit=limit)[0]
    si = quad(im, 0, two_pi, weight="sin", wvar=k, limit=limit)[0]
    # e^{-ikt} = cos kt - i sin kt
    return complex(cr + si, ci - sr) / two_pi


def coeff_lookup(mapping):
    """Turn ``{k: c_k}`` (or a callable) into a function of k, zero elsewhere."""
    if callable(mapping):
        return mapping
    return lambda k: mapping.get(k, 0j)


def toeplitz_loop(c, n):
    c = coeff_lookup(c)
    return np.array([[c(i - j) for j in range(n)] for i in range(n)], dtype=complex)


def hankel_loop(c, n):
    c = coeff_lookup(c)
    return np.array([[c(i + j + 1) for j in range(n)] for i in range(n)], dtype=complex)


def matmul_loop(a, b):
    n, m = a.shape[0], b.shape[1]
    out = np.zeros((n, m), dtype=complex)
    for i in range(n):
        for j in range(m):
            out[i, j] = sum(a[i, k] * b[k, j] for k in range(a.shape[1]))
    return out


def convolve_dict(a, b):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0j) + x * y
    return out


def semicommutator_loop(f, g, n):
    """``T_n(fg) - T_n(f) T_n(g)`` from coefficient dicts of band-limited symbols."""
    fg = convolve_dict(f, g)
    return toeplitz_loop(fg, n) - matmul_loop(toeplitz_loop(f, n), toeplitz_loop(g, n))


def widom_terms_loop(f, g, n, inner):
    """The two Hankel-product terms by direct summation over ``k < inner``."""
    f, g = coeff_lookup(f), coeff_lookup(g)
    p = np.zeros((n, n), dtype=complex)
    m = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            p[i, j] = sum(f(i + k + 1) * g(-(k + j + 1)) for k in range(inner))
            m[i, j] = sum(f(-(i + k + 1)) * g(k + j + 1) for k in range(inner))
    return p, m[::-1, ::-1]


def rms_window_max(samples, w):
    """Largest RMS deviation over all cyclic windows of ``w`` consecutive samples."""
    x = np.asarray(samples, dtype=complex)
    M = len(x)
    best = 0.0
    for s in range(M):
        win = x[(s + np.arange(w)) % M]
        best = max(best, float(np.sqrt(np.mean(np.abs(win - win.mean()) ** 2))))
    return best
