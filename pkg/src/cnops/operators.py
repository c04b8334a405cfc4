"""Finite truncations of composition, Toeplitz and weighted composition operators.

Matrices follow the monomial-basis convention: entry (i, j) = <T z^j, z^i>, so
column j of a composition matrix holds the Taylor coefficients of phi(z)^j.
Lower-triangular factors make these products block-exact: the N x N truncation
of T_g C_phi equals the product of the N x N truncations.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np

from . import hardy
from .conjugations import Conjugation, JMu, JWp, jw_weighted_matrix
from .errors import NotSelfMapError
from .moebius import (
    LinearFractionalMap,
    boundary_derivative_sup,
    cowen_triple,
    lft_is_self_map,
    sigma_at_zero,
)

STANDARD_TRUNCATIONS = (32, 64, 128)


def composition_matrix(m: LinearFractionalMap, N: int, *,
                       require_self_map: bool = True) -> np.ndarray:
    """Truncated matrix of C_phi: column j = coefficients of phi^j.

    Columns are prefix-stable: the leading block at truncation 2N equals the
    matrix at truncation N exactly.  With require_self_map=False only
    expandability (pole outside the closed disk) is enforced, which
    adjoint_via_cowen needs for the adjoint symbol.
    """
    if require_self_map and not lft_is_self_map(m):
        raise NotSelfMapError(f"{m} is not a validated self-map")
    phi = hardy.lft_power_series(m, N)
    M = np.zeros((N, N), dtype=complex)
    M[0, 0] = 1.0
    col = M[:, 0].copy()
    for j in range(1, N):
        col = hardy.series_multiply(col, phi, N)
        M[:, j] = col
    return M


def analytic_toeplitz_matrix(symbol: np.ndarray, N: int) -> np.ndarray:
    """Lower-triangular Toeplitz matrix of multiplication by the symbol."""
    symbol = np.asarray(symbol, dtype=complex)[:N]
    if len(symbol) < N:
        symbol = np.pad(symbol, (0, N - len(symbol)))
    M = np.zeros((N, N), dtype=complex)
    for j in range(N):
        M[j:, j] = symbol[: N - j]
    return M


def weighted_composition_matrix(psi: np.ndarray, m: LinearFractionalMap,
                                N: int) -> np.ndarray:
    """Truncation of W_{psi, phi} = T_psi C_phi."""
    return analytic_toeplitz_matrix(psi, N) @ composition_matrix(m, N)


def canonical_weight_series(m: LinearFractionalMap, beta: complex, N: int) -> np.ndarray:
    """Coefficients of beta K_{sigma(0)}: beta (-c/d)^n."""
    return complex(beta) * hardy.kernel_series(sigma_at_zero(m), N)


def adjoint_via_cowen(m: LinearFractionalMap, N: int) -> np.ndarray:
    """C_phi* through the adjoint triple: T_g(N) C_sigma(N) T_h(N)*.

    All three factors multiply block-exactly (T_g lower-triangular, T_h*
    upper-bidiagonal), so the result is the exact truncation of C_phi* and
    matches the conjugate transpose of composition_matrix up to rounding.
    Raises when sigma has its pole in the closed disk; warns when sigma fails
    the self-map test (its powers may then grow under truncation).
    """
    if not lft_is_self_map(m):
        raise NotSelfMapError(f"{m} is not a validated self-map")
    triple = cowen_triple(m)
    if not lft_is_self_map(triple.sigma):
        warnings.warn(f"adjoint symbol {triple.sigma} is not a self-map; "
                      "truncation may diverge", RuntimeWarning, stacklevel=2)
    # g = 1/(g_den0 + g_den1 z) expands geometrically with ratio conj(b)/conj(d)
    ratio = -triple.g_den1 / triple.g_den0
    g_series = (1.0 / triple.g_den0) * ratio ** np.arange(N)
    h_series = np.zeros(N, dtype=complex)
    h_series[0] = triple.h0
    if N > 1:
        h_series[1] = triple.h1
    Tg = analytic_toeplitz_matrix(g_series, N)
    Csig = composition_matrix(triple.sigma, N, require_self_map=False)
    Th = analytic_toeplitz_matrix(h_series, N)
    return Tg @ Csig @ Th.conj().T


@dataclass(frozen=True)
class AntilinearOperator:
    """Canonical form of an antilinear operator: x -> matrix @ conj(x)."""

    matrix: np.ndarray

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ np.conj(np.asarray(x, dtype=complex))

    def involution_defect(self, keep: int) -> float:
        """max norm of (M conj(M) - I) on the leading keep x keep block."""
        M = self.matrix
        E = M @ np.conj(M) - np.eye(len(M))
        return float(np.abs(E[:keep, :keep]).max())


def conjugation_operator(C: Conjugation, N: int) -> AntilinearOperator:
    """Truncated matrix form of a conjugation spec.

    JMu: M = beta diag(conj(mu)^n), an exact representation.
    JWp: M = beta conj(W) with W the truncated matrix of W_{xi_p, tau_p}
    (the action x -> beta conj(W x) rewritten as x -> M conj(x)).
    """
    if isinstance(C, JMu):
        M = C.beta * np.diag(np.conj(C.mu) ** np.arange(N)).astype(complex)
        return AntilinearOperator(M)
    return AntilinearOperator(C.beta * np.conj(jw_weighted_matrix(C, N)))


def cnormal_residual_matrix(T: np.ndarray, C: AntilinearOperator,
                            keep: int | None = None) -> float:
    """Frobenius norm of (C T* T C - T T*) on the leading keep x keep block.

    With C x = M conj(x), the composition C T* T C linearizes to
    M conj(T* T) conj(M).  Default keep is N/2; truncation corrupts trailing
    rows of the products, and for inner-type symbols or JW conjugations the
    corruption reaches further in (see stable_keep).
    """
    T = np.asarray(T, dtype=complex)
    N = len(T)
    if T.shape != C.matrix.shape:
        raise ValueError(f"dimension mismatch: T is {T.shape}, C is {C.matrix.shape}")
    keep = N // 2 if keep is None else keep
    if not 1 <= keep <= N // 2:
        raise ValueError(f"keep must be in [1, N/2] = [1, {N // 2}]")
    M = C.matrix
    lhs = M @ np.conj(T.conj().T @ T) @ np.conj(M)
    rhs = T @ T.conj().T
    return float(np.linalg.norm((lhs - rhs)[:keep, :keep]))


def stable_keep(N: int, m: LinearFractionalMap | None = None,
                C: Conjugation | None = None) -> int:
    """Block size on which truncated products of the given factors are reliable.

    Powers of an inner-type symbol move coefficient mass outward at a rate
    bounded by the boundary derivative sup; a JW conjugation does the same at
    rate (1+|p|)/(1-|p|), and when it wraps an inner symbol the reaches
    compound, so the rates multiply.  Rows beyond N/rate are corrupted by
    truncation; the residual block is capped at N/(1.25 rate), never above
    N/2 and never below 4.
    """
    rate = 1.0
    if m is not None and lft_is_self_map(m):
        theta = np.exp(2j * np.pi * np.arange(512) / 512)
        sup_phi = np.abs((m.a * theta + m.b) / (m.c * theta + m.d)).max()
        if sup_phi > 0.98:
            rate *= boundary_derivative_sup(m)
    if isinstance(C, JWp):
        rate *= (1.0 + abs(C.p)) / (1.0 - abs(C.p))
    return max(4, min(N // 2, int(N / (1.25 * rate))))


def write_matrix_csv(M: np.ndarray, path) -> None:
    """Dump a complex matrix as column-major (re, im) pairs, one entry per row."""
    M = np.asarray(M, dtype=complex)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["col", "row", "re", "im"])
        for j in range(M.shape[1]):
            for i in range(M.shape[0]):
                writer.writerow([j, i, repr(float(M[i, j].real)), repr(float(M[i, j].imag))])
