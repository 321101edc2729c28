"""Radial eigensolves and closed-form gap formulas for the weighted diffusion.

On the degree-ell spherical-harmonic sector the Dirichlet form of
Lf = (1+|x|^2) Lap f - 2(beta-1) <x, df> reduces to the radial pair

  A[g] = int_0^inf (1+r^2) [g'^2 + ell(ell+n-2) g^2/r^2] r^{n-1} (1+r^2)^{-beta} dr
  B[g] = int_0^inf g^2 r^{n-1} (1+r^2)^{-beta} dr

and the spectral gap is the smallest nontrivial generalized eigenvalue over
the modes.  The discretization uses conforming piecewise-linear elements on
the compactified grid r = tan(theta) (theta uniform on [0, pi/2 - delta]),
augmented with (i) the constant extension of the last hat function over
[R, inf) and (ii) polynomial tail rays (r^k - R^k) 1[r >= R], k in {1, 2},
whenever r^k is square-integrable.  Every element integral is evaluated in
closed form, so A and B are exact Galerkin matrices of the augmented trial
space and all eigenvalues sit above the true ones (variational principle).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import linalg as sla
from scipy import sparse
from scipy.sparse.linalg import eigsh

from .measures import MeasureParams, omega_moment

__all__ = [
    "Discretization", "ModeProblem", "GapReport",
    "closed_form_gap", "assemble_mode", "lowest_eigs", "numeric_gap",
    "rayleigh_quotient_power", "rayleigh_quotient_1d", "upper_bound_min",
    "gap_sweep", "write_sweep_csv",
]


# ----------------------------------------------------------------------
# Closed forms.


def closed_form_gap(params: MeasureParams) -> tuple[float, str]:
    """Piecewise spectral gap of -L and its range tag.

    n = 1:  (beta-1/2)^2 on (1/2, 3/2],  2(beta-1) on [3/2, inf).
    n >= 2: (beta-n/2)^2 on (n/2, n/2+2], 4(beta-n/2-1) on [n/2+2, n+1],
            2(beta-1) on [n+1, inf).
    At a boundary both branches agree; the tag picks the lower-beta branch.
    """
    n, beta = params.n, params.beta
    if n == 1:
        if beta <= 1.5:
            return (beta - 0.5) ** 2, "lower"
        return 2.0 * (beta - 1.0), "upper"
    if beta <= n / 2.0 + 2.0:
        return (beta - n / 2.0) ** 2, "lower"
    if beta <= n + 1.0:
        return 4.0 * (beta - n / 2.0 - 1.0), "mid"
    return 2.0 * (beta - 1.0), "upper"


def upper_bound_min(params: MeasureParams) -> float:
    """Minimum of the admissible test-family Rayleigh limits.

    Candidates: (beta-n/2)^2 always; 2(beta-1) when linear functions are in
    L^2 (beta > n/2+1); 4(beta-n/2-1) when centered quadratics are
    (beta > n/2+2).  The minimum reproduces the closed-form gap.
    """
    n, beta = params.n, params.beta
    cands = [(beta - n / 2.0) ** 2]
    if beta > n / 2.0 + 1.0:
        cands.append(2.0 * (beta - 1.0))
    if beta > n / 2.0 + 2.0:
        cands.append(4.0 * (beta - n / 2.0 - 1.0))
    return min(cands)


def rayleigh_quotient_power(epsilon: float, params: MeasureParams) -> float:
    """Rayleigh quotient of f = (1+|x|^2)^epsilon in closed moment form.

    With M_g = int (1+|x|^2)^g dmu (a normalization ratio),
      int Gamma(f) dmu = 4 eps^2 (M_{2eps} - M_{2eps-1}),
      Var(f)           = M_{2eps} - M_eps^2.
    Only eps < (2 beta - n)/4 keeps f in L^2; eps = 0 has zero variance.
    As eps increases to the limit the value decreases to (beta - n/2)^2.
    """
    eps = float(epsilon)
    n, beta = params.n, params.beta
    if eps == 0.0:
        raise ValueError("epsilon = 0 gives a constant function (zero variance)")
    if eps >= (2.0 * beta - n) / 4.0:
        raise ValueError("epsilon too large: f is not square-integrable")
    m1 = omega_moment(-eps, params)
    m2 = omega_moment(-2.0 * eps, params)
    m2m = omega_moment(-(2.0 * eps - 1.0), params)
    num = 4.0 * eps * eps * (m2 - m2m)
    var = m2 - m1 * m1
    return num / var


def rayleigh_quotient_1d(epsilon: float, beta: float) -> float:
    """Rayleigh quotient of f = x (1+x^2)^epsilon on the line, moment form.

    f is odd, so Var(f) = int f^2 = M_{2eps+1} - M_{2eps}; with
    f' = (1+2eps) w^eps - 2eps w^{eps-1} (w = 1+x^2),
      int w f'^2 = (1+2eps)^2 M_{2eps+1} - 4eps(1+2eps) M_{2eps} + 4eps^2 M_{2eps-1}.
    Requires eps < (2 beta - 3)/4 (square-integrability of x w^eps).
    The limit as eps increases to (2 beta - 3)/4 is (beta - 1/2)^2.
    """
    eps = float(epsilon)
    if eps >= (2.0 * beta - 3.0) / 4.0:
        raise ValueError("epsilon too large: x (1+x^2)^eps is not square-integrable")
    params = MeasureParams(1, beta)
    m_p1 = omega_moment(-(2.0 * eps + 1.0), params)
    m_0 = omega_moment(-2.0 * eps, params)
    m_m1 = omega_moment(-(2.0 * eps - 1.0), params)
    c = 1.0 + 2.0 * eps
    num = c * c * m_p1 - 4.0 * eps * c * m_0 + 4.0 * eps * eps * m_m1
    var = m_p1 - m_0
    return num / var


# ----------------------------------------------------------------------
# Exact element integrals int r^c (1+r^2)^{-d} dr.

_XGL, _WGL = leggauss(12)
_SERIES_TERMS = 26


def _series_between(ab: float, bb: float, t0: float, t1: float) -> float:
    """(1/2) int_{t1}^{t0} (1-t)^{bb-1} t^{ab-1} dt by binomial series.

    gamma_j, the t^j coefficient of (1-t)^{bb-1}, follows the recurrence
    gamma_j = gamma_{j-1} (j - bb)/j; an exponent ab + j = 0 integrates to a
    logarithm.  Used on far cells where t0 = 1/(1+r0^2) is small.
    """
    s, g = 0.0, 1.0
    for j in range(_SERIES_TERMS):
        e = ab + j
        if abs(e) < 1e-13:
            s += g * math.log(t0 / t1)
        else:
            s += g * (t0 ** e - t1 ** e) / e
        g *= (j + 1 - bb) / (j + 1)
    return 0.5 * s


def _cell_moments(r0: float, r1: float, cs, d: float):
    """[int_{r0}^{r1} r^c (1+r^2)^{-d} dr for c in cs], exact to fp precision."""
    if r1 <= 2.5 * r0 + 0.5:
        rr = 0.5 * (r1 - r0) * _XGL + 0.5 * (r1 + r0)
        ww = 0.5 * (r1 - r0) * _WGL
        base = np.exp(-d * np.log1p(rr * rr))
        return [float(np.sum(ww * rr ** c * base)) for c in cs]
    t0 = 1.0 / (1.0 + r0 * r0)
    t1 = 1.0 / (1.0 + r1 * r1)
    return [_series_between(d - (c + 1) / 2.0, (c + 1) / 2.0, t0, t1) for c in cs]


def _tail_moment(R: float, c: float, d: float) -> float:
    """int_R^inf r^c (1+r^2)^{-d} dr; requires 2d - c > 1."""
    if 2.0 * d - c <= 1.0 + 1e-12:
        raise ValueError("tail moment diverges")
    t1 = 1.0 / (1.0 + R * R)
    ab, bb = d - (c + 1) / 2.0, (c + 1) / 2.0
    s, g = 0.0, 1.0
    for j in range(_SERIES_TERMS):
        s += g * t1 ** (ab + j) / (ab + j)
        g *= (j + 1 - bb) / (j + 1)
    return 0.5 * s


# ----------------------------------------------------------------------
# Discretized mode problems.


@dataclass(frozen=True)
class Discretization:
    """Compactified radial grid r = tan(theta), theta uniform on [0, pi/2-delta].

    The far end carries no essential boundary condition: the trial space is a
    subset of the form domain (natural boundary), with delta playing the role
    of a refinable truncation parameter.
    """
    m: int = 512
    delta: float = 1e-3

    def __post_init__(self):
        if self.m < 64:
            raise ValueError("need at least 64 radial nodes")
        if not (0.0 < self.delta <= 0.2):
            raise ValueError("delta must lie in (0, 0.2]")

    def radii(self) -> np.ndarray:
        theta = np.linspace(0.0, math.pi / 2.0 - self.delta, self.m)
        return np.tan(theta)


@dataclass(frozen=True)
class ModeProblem:
    """Exact Galerkin matrices of the degree-ell radial sector.

    A is the Dirichlet-form (stiffness) matrix, B the L^2 mass matrix, both
    over hat functions on `radii` (node 0 removed for ell >= 1) plus one
    column per tail ray r^k - R^k (k listed in ray_ks).  For ell = 0 the
    all-ones hat vector spans the constants and lies in the kernel of A.
    """
    ell: int
    A: np.ndarray
    B: np.ndarray
    radii: np.ndarray = field(repr=False, default=None)
    ray_ks: tuple = ()
    params: Optional[MeasureParams] = None

    def size(self) -> int:
        return self.A.shape[0]


def _admissible_rays(n: int, beta: float) -> tuple:
    return tuple(k for k in (1, 2) if 2.0 * k < 2.0 * beta - n - 1e-9)


def assemble_mode(ell: int, params: MeasureParams, disc: Discretization,
                  tail_rays: bool = True) -> ModeProblem:
    """Assemble the exact stiffness/mass pair of mode ell.

    ell >= 1 removes the node at r = 0 (radial profiles vanish there); the
    last hat extends as a constant over [R, inf); tail rays are appended for
    every square-integrable power (disable with tail_rays=False to keep the
    matrices tridiagonal, e.g. for banded time stepping).
    """
    if ell < 0:
        raise ValueError("mode degree must be nonnegative")
    n, beta = params.n, params.beta
    r = disc.radii()
    m = len(r)
    cl = float(ell * (ell + n - 2))
    keep0 = ell == 0
    ks = _admissible_rays(n, beta) if tail_rays else ()
    nn = (m if keep0 else m - 1) + len(ks)
    A = np.zeros((nn, nn))
    B = np.zeros((nn, nn))

    def idx(j):
        # grid node j -> matrix index (or None if removed)
        if keep0:
            return j
        return j - 1 if j >= 1 else None

    for j in range(m - 1):
        r0, r1 = r[j], r[j + 1]
        h = r1 - r0
        il, ir = idx(j), idx(j + 1)
        m0, m1, m2 = _cell_moments(r0, r1, (n - 1, n, n + 1), beta)
        # hat-pair mass: phi_j = (r1-r)/h, phi_{j+1} = (r-r0)/h
        LL = (r1 * r1 * m0 - 2.0 * r1 * m1 + m2) / (h * h)
        LR = (-r0 * r1 * m0 + (r0 + r1) * m1 - m2) / (h * h)
        RR = (r0 * r0 * m0 - 2.0 * r0 * m1 + m2) / (h * h)
        if cl > 0.0:
            if il is None:
                # first cell with node 0 removed: only phi_1 survives, and
                # r0 = 0 makes phi_1^2 r^{n-3} = r^{n-1}/h^2 (integrable)
                (q0,) = _cell_moments(r0, r1, (n - 1,), beta - 1.0)
                aLL = aLR = 0.0
                aRR = q0 / (h * h)
            else:
                q0, q1, q2 = _cell_moments(r0, r1, (n - 3, n - 2, n - 1), beta - 1.0)
                aLL = (r1 * r1 * q0 - 2.0 * r1 * q1 + q2) / (h * h)
                aLR = (-r0 * r1 * q0 + (r0 + r1) * q1 - q2) / (h * h)
                aRR = (r0 * r0 * q0 - 2.0 * r0 * q1 + q2) / (h * h)
        else:
            aLL = aLR = aRR = 0.0
        (kmom,) = _cell_moments(r0, r1, (n - 1,), beta - 1.0)
        kS = kmom / (h * h)  # gradient +-1/h pair
        if il is not None:
            B[il, il] += LL
            A[il, il] += kS + cl * aLL
        if il is not None and ir is not None:
            B[il, ir] += LR
            B[ir, il] += LR
            A[il, ir] += -kS + cl * aLR
            A[ir, il] += -kS + cl * aLR
        B[ir, ir] += RR
        A[ir, ir] += kS + cl * aRR

    # constant extension of the last hat over [R, inf)
    R = float(r[-1])
    last = idx(m - 1)
    B[last, last] += _tail_moment(R, n - 1, beta)
    if cl > 0.0:
        A[last, last] += cl * _tail_moment(R, n - 3, beta - 1.0)

    # tail rays psi_k = r^k - R^k on [R, inf); zero on [0, R], so the only
    # grid coupling is through the extended last hat (gradient of which
    # vanishes in the tail)
    for a, ka in enumerate(ks):
        ia = nn - len(ks) + a
        bm = _tail_moment(R, n - 1 + ka, beta) - R ** ka * _tail_moment(R, n - 1, beta)
        B[last, ia] = B[ia, last] = bm
        if cl > 0.0:
            am = cl * (_tail_moment(R, n - 3 + ka, beta - 1.0)
                       - R ** ka * _tail_moment(R, n - 3, beta - 1.0))
            A[last, ia] = A[ia, last] = am
        for b, kb in enumerate(ks[:a + 1]):
            ib = nn - len(ks) + b
            bm = (_tail_moment(R, n - 1 + ka + kb, beta)
                  - R ** kb * _tail_moment(R, n - 1 + ka, beta)
                  - R ** ka * _tail_moment(R, n - 1 + kb, beta)
                  + R ** (ka + kb) * _tail_moment(R, n - 1, beta))
            aval = ka * kb * _tail_moment(R, n - 1 + ka + kb - 2, beta - 1.0)
            if cl > 0.0:
                aval += cl * (_tail_moment(R, n - 3 + ka + kb, beta - 1.0)
                              - R ** kb * _tail_moment(R, n - 3 + ka, beta - 1.0)
                              - R ** ka * _tail_moment(R, n - 3 + kb, beta - 1.0)
                              + R ** (ka + kb) * _tail_moment(R, n - 3, beta - 1.0))
            B[ia, ib] = B[ib, ia] = bm
            A[ia, ib] = A[ib, ia] = aval

    return ModeProblem(ell=ell, A=A, B=B, radii=r, ray_ks=ks, params=params)


def lowest_eigs(problem: ModeProblem, k: int) -> list[float]:
    """k smallest generalized eigenvalues of (A, B), ascending."""
    if k > 6:
        raise ValueError("at most 6 eigenvalues per mode")
    A, B = problem.A, problem.B
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(B))):
        raise ValueError("non-finite matrix entries")
    nn = A.shape[0]
    k = min(k, nn)
    if nn <= 2048:
        vals = sla.eigh(A, B, subset_by_index=[0, k - 1], eigvals_only=True)
        return [float(v) for v in vals]
    As = sparse.csr_matrix(A)
    Bs = sparse.csr_matrix(B)
    scale = float(np.median(np.abs(As.diagonal()) / np.abs(Bs.diagonal())))
    v0 = np.ones(nn)
    vals = eigsh(As, k=k, M=Bs, sigma=-1e-6 * max(scale, 1.0), which="LM",
                 v0=v0, return_eigenvectors=False)
    return sorted(float(v) for v in vals)


@dataclass(frozen=True)
class GapReport:
    """Numeric gap vs closed form for one parameter set."""
    n: int
    beta: float
    mode_eigs: tuple          # lowest nontrivial eigenvalue per mode 0..ell_max
    numeric_gap: float
    closed_form: float
    range_tag: str
    rel_error: float          # signed: positive means numeric sits above
    minimizing_mode: int
    m: int
    delta: float

    def to_json(self) -> str:
        d = {"n": self.n, "beta": self.beta,
             "mode_eigs": list(self.mode_eigs),
             "numeric_gap": self.numeric_gap, "closed_form": self.closed_form,
             "range_tag": self.range_tag, "rel_error": self.rel_error,
             "minimizing_mode": self.minimizing_mode,
             "m": self.m, "delta": self.delta}
        return json.dumps(d, indent=2)


def numeric_gap(params: MeasureParams, disc: Discretization,
                ell_max: int = 3) -> GapReport:
    """Smallest nontrivial eigenvalue over modes 0..ell_max vs the closed form.

    Mode 0 contributes its second eigenvalue (the first is the zero mode of
    constants); every higher mode its first.  On the line only the even/odd
    sectors exist, so the effective maximal mode is 1.
    """
    if ell_max < 2:
        raise ValueError("need ell_max >= 2 (mode minimum must be attested)")
    n = params.n
    ell_eff = 1 if n == 1 else ell_max
    per_mode = []
    for ell in range(ell_eff + 1):
        prob = assemble_mode(ell, params, disc)
        want = 2 if ell == 0 else 1
        eigs = lowest_eigs(prob, want)
        per_mode.append(eigs[-1])
    gap = min(per_mode)
    mode = int(np.argmin(per_mode))
    closed, tag = closed_form_gap(params)
    rel = (gap - closed) / closed
    return GapReport(n=n, beta=params.beta, mode_eigs=tuple(per_mode),
                     numeric_gap=gap, closed_form=closed, range_tag=tag,
                     rel_error=rel, minimizing_mode=mode, m=disc.m,
                     delta=disc.delta)


# ----------------------------------------------------------------------
# Sweeps.

SWEEP_COLUMNS = ("n", "beta", "range_tag", "closed_form", "numeric_gap",
                 "rel_error", "minimizing_mode", "m", "delta")


def gap_sweep(n: int, betas, disc: Discretization, ell_max: int = 3) -> list[GapReport]:
    return [numeric_gap(MeasureParams(n, float(b)), disc, ell_max) for b in betas]


def write_sweep_csv(reports: list[GapReport], path) -> None:
    import csv
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(SWEEP_COLUMNS)
        for r in reports:
            wr.writerow([r.n, "%.17g" % r.beta, r.range_tag,
                         "%.17g" % r.closed_form, "%.17g" % r.numeric_gap,
                         "%.17g" % r.rel_error, r.minimizing_mode,
                         r.m, "%.17g" % r.delta])
