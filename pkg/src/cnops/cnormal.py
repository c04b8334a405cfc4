"""Kernel identities and coefficient predicates for conjugation-normality.

An operator T is C-normal for a conjugation C when C T* T C = T T*, or
equivalently T T* C = C T* T.  Both sides applied to a reproducing kernel K_w
and evaluated at z are rational in (w, z) for linear fractional symbols, so
each case below carries

  * a closed-form evaluator for the two sides (the kernel oracle),
  * a coefficient predicate deciding the identity exactly,
  * a matrix oracle through truncated operators (assembled in verify()).

The predicate and the two oracles are independent routes and must agree; the
verify() report records all three.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import hardy, operators
from .conjugations import Conjugation, JMu, JWp
from .errors import HypothesisViolationError, IllConditionedGridError, PoleError
from .moebius import (
    LinearFractionalMap,
    cowen_triple,
    has_boundary_fixed_point,
    lft_compose,
    lft_eval,
    lft_is_self_map,
    sigma_at_zero,
)

logger = logging.getLogger(__name__)

GRID_RADII = (0.3, 0.6, 0.9)
SINGULAR_RTOL = 1e-6          # exclusion radius around singular sets, times scale
EXCLUDED_FRACTION_LIMIT = 0.2
VERDICT_TRUE_MAX = 1e-9       # a true verdict demands kernel residual below this
VERDICT_FALSE_MIN = 1e-7      # a false verdict demands kernel residual above this
MATRIX_FLOOR = 1e-12          # non-increase of matrix residuals is tested above this


class CaseId(str, Enum):
    COMP_JMU = "comp_jmu"
    COMP_JW = "comp_jw"
    WEIGHTED_JMU = "weighted_jmu"
    WEIGHTED_JW = "weighted_jw"


# --------------------------------------------------------------------------
# closed-form side evaluators (vectorized over w, z)
# --------------------------------------------------------------------------

def _guard_comp_singular_set(m: LinearFractionalMap, w):
    """The composition-case expansions split at sigma(w) = 0, i.e. abar w = cbar."""
    if abs(m.c) == 0.0:
        return
    if np.any(np.abs(np.conj(m.a) * w - np.conj(m.c)) <= SINGULAR_RTOL * m.scale):
        raise PoleError("w lies on the excluded set conj(a) w = conj(c)")


def eval_sides_comp_jmu(m: LinearFractionalMap, mu: complex, w, z):
    """Both sides of C_phi C_phi* J_mu K_w(z) = J_mu C_phi* C_phi K_w(z).

    lhs = K_{phi(mu conj(w))}(phi(z)).
    rhs = cbar/(cbar - abar w) * 1/(1 - conj(mu) phi(0) z)
        + (dbar/(dbar - bbar w) - cbar/(cbar - abar w))
          * 1/(1 - conj(mu) phi(sigma(w)) z).
    Valid away from the singular set abar w = cbar (meaningless when c = 0,
    where the first term vanishes identically).
    """
    a, b, c, d = m.coefficients()
    w = np.asarray(w, dtype=complex)
    z = np.asarray(z, dtype=complex)
    mu = complex(mu)
    _guard_comp_singular_set(m, w)
    lhs = 1.0 / (1.0 - np.conj(lft_eval(m, mu * np.conj(w))) * lft_eval(m, z))
    phi_sigma_w = (((abs(a) ** 2 - abs(b) ** 2) * w + b * np.conj(d) - a * np.conj(c))
                   / ((np.conj(a) * c - np.conj(b) * d) * w + abs(d) ** 2 - abs(c) ** 2))
    second = 1.0 / (1.0 - np.conj(mu) * phi_sigma_w * z)
    if abs(c) == 0.0:
        coef2 = np.conj(d) / (np.conj(d) - np.conj(b) * w)
        rhs = coef2 * second
    else:
        coef1 = np.conj(c) / (np.conj(c) - np.conj(a) * w)
        coef2 = np.conj(d) / (np.conj(d) - np.conj(b) * w) - coef1
        rhs = coef1 / (1.0 - np.conj(mu) * (b / d) * z) + coef2 * second
    return lhs, rhs


def eval_sides_comp_jw(m: LinearFractionalMap, p: complex, w, z):
    """Both sides of the JW-conjugation identity for C_phi.

    lhs = conj(xi_p(conj w)) K_{phi(eta)}(phi(z)) with
    eta = (conj(p) - conj(w) lam)/(1 - conj(w p)); rhs comes from the
    C_phi* C_phi kernel expansion followed by the JW action, evaluated with
    t(z) = conj(tau_p(conj z)) = (p - conj(lam) z)/(1 - p z).
    """
    a, b, c, d = m.coefficients()
    w = np.asarray(w, dtype=complex)
    z = np.asarray(z, dtype=complex)
    p = complex(p)
    _guard_comp_singular_set(m, w)
    lam = np.conj(p) / p
    root = np.sqrt(1.0 - abs(p) ** 2)

    eta = (np.conj(p) - np.conj(w) * lam) / (1.0 - np.conj(w * p))
    lhs = (root / (1.0 - w * p)) / (1.0 - np.conj(lft_eval(m, eta)) * lft_eval(m, z))

    t = (p - np.conj(lam) * z) / (1.0 - p * z)
    phi_sigma_w = (((abs(a) ** 2 - abs(b) ** 2) * w + b * np.conj(d) - a * np.conj(c))
                   / ((np.conj(a) * c - np.conj(b) * d) * w + abs(d) ** 2 - abs(c) ** 2))
    second = 1.0 / (1.0 - phi_sigma_w * t)
    prefac = root / (1.0 - p * z)
    if abs(c) == 0.0:
        coef2 = np.conj(d) / (np.conj(d) - np.conj(b) * w)
        rhs = prefac * coef2 * second
    else:
        coef1 = np.conj(c) / (np.conj(c) - np.conj(a) * w)
        coef2 = np.conj(d) / (np.conj(d) - np.conj(b) * w) - coef1
        rhs = prefac * (coef1 / (1.0 - (b / d) * t) + coef2 * second)
    return lhs, rhs


def _weighted_jmu_denominators(m: LinearFractionalMap, mu: complex, w, z):
    a, b, c, d = m.coefficients()
    mu = complex(mu)
    D1 = ((abs(c) ** 2 - abs(a) ** 2) * np.conj(mu) * w * z
          + (np.conj(c) * d - np.conj(a) * b) * np.conj(mu) * z
          + (c * np.conj(d) - a * np.conj(b)) * w
          + abs(d) ** 2 - abs(b) ** 2)
    D2 = (-(abs(a) ** 2 - abs(b) ** 2) * np.conj(mu) * w * z
          + (np.conj(a) * c - np.conj(b) * d) * z
          + (a * np.conj(c) - b * np.conj(d)) * np.conj(mu) * w
          + abs(d) ** 2 - abs(c) ** 2)
    return D1, D2


def eval_sides_weighted_jmu(m: LinearFractionalMap, beta: complex, mu: complex, w, z):
    """Both sides for W = T_{beta K_{sigma(0)}} C_phi against J_mu.

    Each side is |beta|^2 |d|^2 over an affine-in-(w, z, wz) denominator:
    lhs: [(|c|^2-|a|^2) mubar w + (cbar d - abar b) mubar] z
         + (c dbar - a bbar) w + |d|^2 - |b|^2,
    rhs: [-(|a|^2-|b|^2) mubar w + (abar c - bbar d)] z
         + (a cbar - b dbar) mubar w + |d|^2 - |c|^2.
    Equality of the denominators as polynomials is exactly the predicate
    |b| = |c| and (cbar d - abar b) mubar = abar c - bbar d.
    """
    w = np.asarray(w, dtype=complex)
    z = np.asarray(z, dtype=complex)
    num = abs(beta) ** 2 * abs(m.d) ** 2
    D1, D2 = _weighted_jmu_denominators(m, mu, w, z)
    return num / D1, num / D2


@dataclass(frozen=True)
class QuadrupleSet:
    """Denominator coefficients of both sides in the weighted JW case."""

    A1: complex
    B1: complex
    C1: complex
    D1: complex
    A2: complex
    B2: complex
    C2: complex
    D2: complex

    def differences(self):
        return (self.A1 - self.A2, self.B1 - self.B2,
                self.C1 - self.C2, self.D1 - self.D2)

    def max_difference(self) -> float:
        return max(abs(x) for x in self.differences())


def weighted_jw_quadruples(m: LinearFractionalMap, p: complex) -> QuadrupleSet:
    """The eight denominator coefficients, with lam = conj(p)/p.

    Side 1 is J W W* k_w, side 2 is W* W (JW) k_w; both equal
    |beta|^2 |d|^2 sqrt(1-|p|^2) / ((A w + B) z + C w + D).
    """
    a, b, c, d = m.coefficients()
    p = complex(p)
    lb = p / np.conj(p)   # conj(lam) for lam = conj(p)/p
    return QuadrupleSet(
        A1=(a * np.conj(b) - c * np.conj(d)) * p + (abs(a) ** 2 - abs(c) ** 2) * lb,
        B1=(abs(b) ** 2 - abs(d) ** 2) * p + (np.conj(a) * b - d * np.conj(c)) * lb,
        C1=c * np.conj(d) - a * np.conj(b) + (abs(c) ** 2 - abs(a) ** 2) * p,
        D1=abs(d) ** 2 - abs(b) ** 2 + (d * np.conj(c) - np.conj(a) * b) * p,
        A2=(-np.conj(a) * c + np.conj(b) * d) * p + (abs(a) ** 2 - abs(b) ** 2) * lb,
        B2=np.conj(a) * c - np.conj(b) * d - p * (abs(a) ** 2 - abs(b) ** 2),
        C2=-(abs(d) ** 2 - abs(c) ** 2) * p + (b * np.conj(d) - a * np.conj(c)) * lb,
        D2=abs(d) ** 2 - abs(c) ** 2 - p * (b * np.conj(d) - a * np.conj(c)),
    )


def eval_sides_weighted_jw(m: LinearFractionalMap, beta: complex, p: complex, w, z):
    """Both sides for W against JW_p via the quadruple denominators."""
    q = weighted_jw_quadruples(m, p)
    w = np.asarray(w, dtype=complex)
    z = np.asarray(z, dtype=complex)
    num = abs(beta) ** 2 * abs(m.d) ** 2 * np.sqrt(1.0 - abs(p) ** 2)
    E1 = (q.A1 * w + q.B1) * z + q.C1 * w + q.D1
    E2 = (q.A2 * w + q.B2) * z + q.C2 * w + q.D2
    return num / E1, num / E2


# --------------------------------------------------------------------------
# kernel-grid residual oracle
# --------------------------------------------------------------------------

def ring_grid(grid_n: int) -> np.ndarray:
    """Deterministic points on concentric rings of radius <= 0.9.

    grid_n angles per ring, offset ring-to-ring by the golden angle so that
    no two rings share a ray (keeps accidental symmetry out of the grid).
    """
    if grid_n < 8:
        raise ValueError("grid_n must be at least 8")
    pts = []
    golden = 2.0 * np.pi * 0.381966011250105
    for k, r in enumerate(GRID_RADII):
        ang = 2.0 * np.pi * np.arange(grid_n) / grid_n + k * golden
        pts.append(r * np.exp(1j * ang))
    return np.concatenate(pts)


def _reduce_residual(diffs: np.ndarray, n_total: int) -> float:
    """Max of |diffs| over the surviving pairs; rejects over-excluded grids."""
    n_excluded = n_total - diffs.size
    if n_excluded > EXCLUDED_FRACTION_LIMIT * n_total:
        raise IllConditionedGridError(
            f"{n_excluded}/{n_total} grid pairs excluded "
            f"(limit {EXCLUDED_FRACTION_LIMIT:.0%})")
    return float(np.abs(diffs).max())


def kernel_residual(case: CaseId, m: LinearFractionalMap, conj: Conjugation,
                    beta: complex = 1.0, grid_n: int = 12) -> float:
    """max over the (w, z) grid of |lhs - rhs| for the case's identity.

    Grid pairs falling in the case's singular set (sigma(w) = 0 for the
    composition cases, near-vanishing side denominators for the weighted
    ones; for validated self-maps the latter never triggers) are excluded;
    more than 20% exclusions raises IllConditionedGridError.
    """
    a, b, c, d = m.coefficients()
    pts = ring_grid(grid_n)
    W, Z = np.meshgrid(pts, pts, indexing="ij")
    n_total = W.size
    scale = m.scale

    if case in (CaseId.COMP_JMU, CaseId.COMP_JW):
        if abs(c) == 0.0:
            valid = np.ones_like(W, dtype=bool)
        else:
            valid = np.abs(np.conj(a) * W - np.conj(c)) > SINGULAR_RTOL * scale
        wv, zv = W[valid], Z[valid]
        if case is CaseId.COMP_JMU:
            lhs, rhs = eval_sides_comp_jmu(m, conj.mu, wv, zv)
        else:
            lhs, rhs = eval_sides_comp_jw(m, conj.p, wv, zv)
        return _reduce_residual(lhs - rhs, n_total)

    num = abs(beta) ** 2 * abs(d) ** 2
    if case is CaseId.WEIGHTED_JMU:
        D1, D2 = _weighted_jmu_denominators(m, conj.mu, W, Z)
    else:
        q = weighted_jw_quadruples(m, conj.p)
        num *= np.sqrt(1.0 - abs(conj.p) ** 2)
        D1 = (q.A1 * W + q.B1) * Z + q.C1 * W + q.D1
        D2 = (q.A2 * W + q.B2) * Z + q.C2 * W + q.D2
    floor = 1e-12 * scale ** 2
    valid = (np.abs(D1) > floor) & (np.abs(D2) > floor)
    return _reduce_residual(num / D1[valid] - num / D2[valid], n_total)


# --------------------------------------------------------------------------
# coefficient predicates
# --------------------------------------------------------------------------

def predicate_comp_jmu(m: LinearFractionalMap) -> bool:
    """C_phi is J_mu-normal iff it is normal: b = 0 and c = 0 (projectively)."""
    s = m.scale
    return abs(m.b) <= 1e-12 * s and abs(m.c) <= 1e-12 * s


def predicate_comp_jw(m: LinearFractionalMap, p: complex) -> bool:
    """C_phi is JW_p-normal iff it is an isometry: phi(z) = alpha z, |alpha| = 1."""
    if not 0.0 < abs(complex(p)) < 1.0:
        raise ValueError("p must lie in the punctured open disk")
    s = m.scale
    return (abs(m.b) <= 1e-12 * s and abs(m.c) <= 1e-12 * s
            and abs(abs(m.a / m.d) - 1.0) <= 1e-12)


def predicate_weighted_jmu(m: LinearFractionalMap, mu: complex) -> bool:
    """|b| = |c| and (cbar d - abar b) conj(mu) = abar c - bbar d."""
    a, b, c, d = m.coefficients()
    mu = complex(mu)
    s = m.scale
    cond_mod = abs(abs(b) - abs(c)) <= 1e-10 * s
    lin = (np.conj(c) * d - np.conj(a) * b) * np.conj(mu) - (np.conj(a) * c - np.conj(b) * d)
    return cond_mod and abs(lin) <= 1e-10 * s ** 2


def _weighted_jw_condition_values(m: LinearFractionalMap, p: complex):
    a, b, c, d = m.coefficients()
    p = complex(p)
    e1 = ((abs(b) ** 2 - abs(c) ** 2) * p
          - (-np.conj(a) * c + np.conj(b) * d - a * np.conj(b) + c * np.conj(d)) * abs(p) ** 2)
    e2 = ((abs(a) ** 2 - abs(d) ** 2) * abs(p) ** 2
          - ((np.conj(a) * c - np.conj(b) * d) * np.conj(p) - (np.conj(a) * b - np.conj(c) * d) * p))
    return e1, e2


def predicate_weighted_jw(m: LinearFractionalMap, p: complex) -> bool:
    """(|b|^2-|c|^2) p = (-abar c + bbar d - a bbar + c dbar)|p|^2 and
    (|a|^2-|d|^2)|p|^2 = (abar c - bbar d) conj(p) - (abar b - cbar d) p."""
    e1, e2 = _weighted_jw_condition_values(m, p)
    tol = 1e-10 * m.scale ** 2
    return abs(e1) <= tol and abs(e2) <= tol


def is_disk_automorphism(m: LinearFractionalMap, tol: float = 1e-10) -> bool:
    """True iff sigma o phi is proportional to the identity and both phi and
    its inverse pass the self-map test."""
    comp = lft_compose(cowen_triple(m).sigma, m)
    s2 = m.scale ** 2
    off = max(abs(comp.b), abs(comp.c), abs(comp.a - comp.d))
    if off > tol * s2:
        return False
    return lft_is_self_map(m) and lft_is_self_map(m.inverse())


def predicate_unitary_wco(m: LinearFractionalMap, gamma: complex, q: complex) -> bool:
    """W with weight gamma K_q / ||K_q|| is unitary iff phi is an automorphism,
    |gamma| = 1 and phi(q) = 0."""
    gamma, q = complex(gamma), complex(q)
    if abs(q) >= 1.0:
        raise ValueError("q must lie in the open disk")
    if abs(abs(gamma) - 1.0) > 1e-12:
        return False
    if not is_disk_automorphism(m):
        return False
    return abs(lft_eval(m, q)) <= 1e-10


@dataclass(frozen=True)
class HermitianFamily:
    """Normalized data of the Hermitian weighted-composition family."""

    map: LinearFractionalMap
    beta: complex
    is_self_map: bool


def hermitian_family(a0: complex, a1: float, a2: float) -> HermitianFamily:
    """Map phi(z) = a0 + a1 z/(1 - conj(a0) z) and weight a2/(1 - conj(a0) z).

    Normalized coefficients: (a, b, c, d) = (a1 - |a0|^2, a0, -conj(a0), 1)
    and beta = a2.  a1, a2 must be real; a0 must lie in the open disk.
    """
    a0 = complex(a0)
    if abs(a0) >= 1.0:
        raise ValueError("a0 must lie in the open disk")
    for name, val in (("a1", a1), ("a2", a2)):
        if abs(complex(val).imag) > 0.0:
            raise ValueError(f"{name} must be real, got {val}")
    a1, a2 = float(np.real(a1)), float(np.real(a2))
    m = LinearFractionalMap(a1 - abs(a0) ** 2, a0, -np.conj(a0), 1.0)
    return HermitianFamily(map=m, beta=a2, is_self_map=lft_is_self_map(m))


def predicate_hermitian_wco(a0: complex, a1: float, a2: float) -> HermitianFamily:
    return hermitian_family(a0, a1, a2)


def predicate_hermitian_jmu(a0: complex, a1: float, mu: complex) -> bool:
    """(a0 - conj(a0) mu)(1 + a1 - |a0|^2) = 0 within 1e-12.

    Equivalent to predicate_weighted_jmu on the family map for every valid
    (a0, a1, mu); the second factor is 1 + a, a = a1 - |a0|^2.
    """
    a0, mu = complex(a0), complex(mu)
    if abs(complex(a1).imag) > 0.0:
        raise ValueError("a1 must be real")
    a1 = float(np.real(a1))
    return abs((a0 - np.conj(a0) * mu) * (1.0 + a1 - abs(a0) ** 2)) <= 1e-12


def predicate_hermitian_jw(a0: complex, a1: float, p: complex) -> bool:
    """[(a1-|a0|^2)^2 - 1]|p|^2 = -(a1 - |a0|^2 + 1) 2 Re(a0 p) within 1e-10."""
    a0, p = complex(a0), complex(p)
    if abs(complex(a1).imag) > 0.0:
        raise ValueError("a1 must be real")
    a1 = float(np.real(a1))
    a = a1 - abs(a0) ** 2
    lhs = (a * a - 1.0) * abs(p) ** 2
    rhs = -(a + 1.0) * 2.0 * np.real(a0 * p)
    return abs(lhs - rhs) <= 1e-10


def hermitian_jw_solved_p(a0: float, a1: float) -> float:
    """The positive real p solving the Hermitian JW condition, when one exists.

    For real a0 the condition reads (a^2 - 1) p^2 = -(a + 1) 2 a0 p with
    a = a1 - a0^2, giving p = 2 a0 / (1 - a).
    """
    a0, a1 = float(a0), float(a1)
    a = a1 - a0 ** 2
    if abs(1.0 - a) < 1e-14:
        raise ValueError("condition degenerates at a = 1")
    p = 2.0 * a0 / (1.0 - a)
    if not 0.0 < p < 1.0:
        raise ValueError(f"solved p = {p} is not in (0, 1)")
    return p


def predicate_normal_bdyfix(m: LinearFractionalMap, param: complex, which: str) -> bool:
    """Conjugation-normality predicates under the normal-family hypotheses.

    Requires a boundary fixed point and |b| = |c| (else
    HypothesisViolationError).  which = "jmu": the single condition
    (cbar d - abar b) conj(mu) = abar c - bbar d.  which = "jw": the pair
    a bbar - c dbar = bbar d - abar c and
    (|a|^2 - |d|^2)|p|^2 = 2 Re((a cbar - b dbar) p); the cross-term is
    b dbar (a |d|^2 variant in circulation is not equivalent, see
    predicate_normal_bdyfix_jw_dsq_variant).
    """
    a, b, c, d = m.coefficients()
    s = m.scale
    if abs(abs(b) - abs(c)) > 1e-10 * s:
        raise HypothesisViolationError("|b| = |c| hypothesis fails")
    if not has_boundary_fixed_point(m):
        raise HypothesisViolationError("no boundary fixed point")
    if which == "jmu":
        mu = complex(param)
        lin = (np.conj(c) * d - np.conj(a) * b) * np.conj(mu) - (np.conj(a) * c - np.conj(b) * d)
        return abs(lin) <= 1e-10 * s ** 2
    if which != "jw":
        raise ValueError("which must be 'jmu' or 'jw'")
    p = complex(param)
    logger.warning("normal-boundary-fixed JW predicate: using the derived "
                   "2 Re((a conj(c) - b conj(d)) p) cross-term; the |d|^2 "
                   "variant is inequivalent and kept only as a regression guard")
    tol = 1e-10 * s ** 2
    first = a * np.conj(b) - c * np.conj(d) - (np.conj(b) * d - np.conj(a) * c)
    second = ((abs(a) ** 2 - abs(d) ** 2) * abs(p) ** 2
              - 2.0 * np.real((a * np.conj(c) - b * np.conj(d)) * p))
    return abs(first) <= tol and abs(second) <= tol


def predicate_normal_bdyfix_jw_dsq_variant(m: LinearFractionalMap, p: complex) -> bool:
    """Misprinted variant with |d|^2 in place of the b dbar cross-term.

    Not equivalent to the derived condition; kept so the discrepancy stays
    documented by a failing-equivalence regression test.
    """
    a, b, c, d = m.coefficients()
    p = complex(p)
    tol = 1e-10 * m.scale ** 2
    first = a * np.conj(b) - c * np.conj(d) - (np.conj(b) * d - np.conj(a) * c)
    second = ((abs(a) ** 2 - abs(d) ** 2) * abs(p) ** 2
              - 2.0 * np.real((a * np.conj(c) - d * np.conj(d)) * p))
    return abs(first) <= tol and abs(second) <= tol


def case_predicate(case: CaseId, m: LinearFractionalMap, conj: Conjugation) -> bool:
    if case is CaseId.COMP_JMU:
        return predicate_comp_jmu(m)
    if case is CaseId.COMP_JW:
        return predicate_comp_jw(m, conj.p)
    if case is CaseId.WEIGHTED_JMU:
        return predicate_weighted_jmu(m, conj.mu)
    return predicate_weighted_jw(m, conj.p)


# --------------------------------------------------------------------------
# verification report
# --------------------------------------------------------------------------

@dataclass
class VerificationReport:
    case: str
    verdict: bool
    kernel_residual: float
    matrix_residuals: list          # [(N, residual)], increasing N
    params: dict
    grid: dict
    warnings: list = field(default_factory=list)
    consistent: bool = True
    timing_s: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "case": self.case,
            "verdict": self.verdict,
            "kernel_residual": self.kernel_residual,
            "matrix_residuals": [[int(n), float(r)] for n, r in self.matrix_residuals],
            "params": self.params,
            "grid": self.grid,
            "warnings": list(self.warnings),
            "consistent": self.consistent,
            "timing_s": self.timing_s,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    def csv_row(self, sample: int) -> str:
        max_n = max((r for _, r in self.matrix_residuals), default=float("nan"))
        return (f"{sample},{self.case},{str(self.verdict).lower()},"
                f"{self.kernel_residual!r},{max_n!r},{str(self.consistent).lower()}")


def _matrix_residuals_non_increasing(residuals) -> bool:
    vals = [r for _, r in residuals]
    return all(nxt <= max(prev, MATRIX_FLOOR) for prev, nxt in zip(vals, vals[1:]))


def _conj_params(conj: Conjugation) -> dict:
    if isinstance(conj, JMu):
        return {"family": "jmu", "mu": [conj.mu.real, conj.mu.imag]}
    return {"family": "jw", "p": [conj.p.real, conj.p.imag]}


def verify(case: CaseId, m: LinearFractionalMap, conj: Conjugation,
           beta: complex = 1.0, grid_n: int = 12,
           truncations=operators.STANDARD_TRUNCATIONS,
           dump_matrices_to=None) -> VerificationReport:
    """Run predicate + kernel oracle + matrix oracle and gather the report.

    consistency_flag: a true verdict demands kernel residual < 1e-9 and
    matrix residuals non-increasing in N (above a 1e-12 floor); a false
    verdict demands kernel residual > 1e-7.  The matrix residual at each N is
    the Frobenius defect of C T*T C - T T* on the truncation-stable leading
    block (operators.stable_keep).
    """
    t0 = time.perf_counter()
    if not lft_is_self_map(m):
        raise ValueError(f"{m} is not a validated self-map")
    if case in (CaseId.COMP_JMU, CaseId.WEIGHTED_JMU) and not isinstance(conj, JMu):
        raise ValueError(f"case {case.value} needs a JMu conjugation")
    if case in (CaseId.COMP_JW, CaseId.WEIGHTED_JW) and not isinstance(conj, JWp):
        raise ValueError(f"case {case.value} needs a JWp conjugation")
    if case in (CaseId.WEIGHTED_JMU, CaseId.WEIGHTED_JW) and beta == 0:
        raise ValueError("beta must be non-zero")

    verdict = case_predicate(case, m, conj)
    k_res = kernel_residual(case, m, conj, beta=beta, grid_n=grid_n)

    weighted = case in (CaseId.WEIGHTED_JMU, CaseId.WEIGHTED_JW)
    matrix_residuals = []
    truncations = sorted(int(n) for n in truncations)
    for N in truncations:
        if weighted:
            psi = operators.canonical_weight_series(m, beta, N)
            T = operators.weighted_composition_matrix(psi, m, N)
        else:
            T = operators.composition_matrix(m, N)
        C_op = operators.conjugation_operator(conj, N)
        keep = operators.stable_keep(N, m=m, C=conj)
        matrix_residuals.append((N, operators.cnormal_residual_matrix(T, C_op, keep)))
        if dump_matrices_to is not None:
            operators.write_matrix_csv(T, f"{dump_matrices_to}.T.N{N}.csv")
            operators.write_matrix_csv(C_op.matrix, f"{dump_matrices_to}.C.N{N}.csv")

    if verdict:
        consistent = (k_res < VERDICT_TRUE_MAX
                      and _matrix_residuals_non_increasing(matrix_residuals))
    else:
        consistent = k_res > VERDICT_FALSE_MIN

    params = {"map": [[x.real, x.imag] for x in m.coefficients()],
              "conjugation": _conj_params(conj)}
    if weighted:
        params["beta"] = [complex(beta).real, complex(beta).imag]
    return VerificationReport(
        case=case.value,
        verdict=bool(verdict),
        kernel_residual=float(k_res),
        matrix_residuals=matrix_residuals,
        params=params,
        grid={"rings": list(GRID_RADII), "points_per_ring": grid_n,
              "pairs": (3 * grid_n) ** 2},
        warnings=[],
        consistent=bool(consistent),
        timing_s=time.perf_counter() - t0,
    )
