"""Hardy-space primitives on truncated coefficient vectors.

Functions here work on plain complex numpy arrays: entry n is the Taylor
coefficient of z^n.  The monomials are an orthonormal basis, so the inner
product is the plain sesquilinear dot product of coefficient arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotExpandableError, SingularKernelError
from .moebius import LinearFractionalMap

DISK_INTERIOR_TOL = 1e-12   # kernel points must satisfy |w| < 1 - DISK_INTERIOR_TOL


def kernel_eval(w, z):
    """K_w(z) = 1 / (1 - conj(w) z).

    Vectorized over w and z; raises SingularKernelError when the denominator
    is numerically zero anywhere.
    """
    w = np.asarray(w, dtype=complex)
    z = np.asarray(z, dtype=complex)
    den = 1.0 - np.conj(w) * z
    if np.any(np.abs(den) < 1e-14):
        raise SingularKernelError("1 - conj(w) z vanishes")
    out = 1.0 / den
    return out if out.ndim else complex(out)


def kernel_series(w: complex, N: int) -> np.ndarray:
    """First N Taylor coefficients of K_w: (conj(w)^n)_{n<N}."""
    return np.conj(complex(w)) ** np.arange(N)


@dataclass(frozen=True)
class KernelCombo:
    """Finite combination sum_i weight_i * K_{point_i} with points inside the disk."""

    terms: tuple   # of (weight, point) pairs

    def __post_init__(self):
        terms = tuple((complex(wt), complex(pt)) for wt, pt in self.terms)
        for _, pt in terms:
            if abs(pt) >= 1.0 - DISK_INTERIOR_TOL:
                raise ValueError(f"kernel point {pt} not strictly inside the disk")
        object.__setattr__(self, "terms", terms)

    def __call__(self, z):
        return sum(wt * kernel_eval(pt, z) for wt, pt in self.terms)

    def series(self, N: int) -> np.ndarray:
        out = np.zeros(N, dtype=complex)
        for wt, pt in self.terms:
            out += wt * kernel_series(pt, N)
        return out


def lft_power_series(m: LinearFractionalMap, N: int) -> np.ndarray:
    """Taylor coefficients of phi = (a z + b)/(c z + d) at 0, truncated to N.

    p0 = b/d, p1 = (a - c p0)/d, and p_n = -(c/d) p_{n-1} for n >= 2, so the
    tail is geometric with ratio -c/d.  Requires the pole strictly outside the
    closed disk (|d/c| > 1, or c = 0).
    """
    a, b, c, d = m.coefficients()
    if abs(d) <= 1e-14 * m.scale:
        raise NotExpandableError("pole at the origin: d = 0")
    if abs(c) > 0 and abs(-d / c) <= 1.0:
        raise NotExpandableError(f"pole -d/c = {-d / c} inside the closed disk")
    p = np.zeros(N, dtype=complex)
    p[0] = b / d
    if N > 1:
        p[1] = (a - c * p[0]) / d
    if N > 2 and abs(c) > 0:
        p[2:] = p[1] * (-c / d) ** np.arange(1, N - 1)
    return p


def series_multiply(f: np.ndarray, g: np.ndarray, N: int) -> np.ndarray:
    """Cauchy product truncated at degree N-1."""
    out = np.convolve(np.asarray(f, dtype=complex)[:N],
                      np.asarray(g, dtype=complex)[:N])[:N]
    if len(out) < N:
        out = np.pad(out, (0, N - len(out)))
    return out


def series_eval(f: np.ndarray, z):
    """Evaluate the truncated series at z (Horner)."""
    f = np.asarray(f, dtype=complex)
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z)
    for coeff in f[::-1]:
        out = out * z + coeff
    return out if out.ndim else complex(out)


def inner_product(f: np.ndarray, g: np.ndarray) -> complex:
    """<f, g> = sum_n f_n conj(g_n); the shorter vector is zero-padded."""
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    n = min(len(f), len(g))
    return complex(np.sum(f[:n] * np.conj(g[:n])))


def norm(f: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(f, dtype=complex)))
