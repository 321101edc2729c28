"""Smooth test functions with analytic value/gradient/hessian.

Everything is batched: value maps (N, n) -> (N,), gradient -> (N, n),
hessian -> (N, n, n).  Compactly supported constructors report their
support radius so quadrature can truncate.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Callable, Optional

import numpy as np
from scipy.special import hyp2f1

from .measures import MeasureParams, mean_sq_norm

Array = np.ndarray


@dataclass(frozen=True)
class SmoothFunction:
    value: Callable[[Array], Array]
    gradient: Callable[[Array], Array]
    hessian: Callable[[Array], Array]
    support_radius: Optional[float] = None
    label: str = ""
    # radii |x| where some derivative is only piecewise smooth (bump-profile
    # joints); quadrature rules pin panel edges there
    radial_seams: tuple = ()
    # spherical-harmonic sector when the function lives in a single one:
    # 0 = radial, 1 = linear-in-x (plus a constant); None = generic
    angular_mode: Optional[int] = None


def _as_points(x: Array) -> Array:
    x = np.asarray(x, dtype=float)
    return x[None, :] if x.ndim == 1 else x


# ----------------------------------------------------------------------
# C^2 radial bump profile: 1 on [0, r_in], 0 from r_out on, quintic blend
# 1 - t^3 (10 - 15 t + 6 t^2) in between (closed-form derivatives).

def _bump_profile(r, r_in, r_out):
    t = np.clip((r - r_in) / (r_out - r_in), 0.0, 1.0)
    b = 1.0 - t ** 3 * (10.0 - 15.0 * t + 6.0 * t ** 2)
    db = -30.0 * t ** 2 * (1.0 - t) ** 2 / (r_out - r_in)
    d2b = (-60.0 * t * (1.0 - t) * (1.0 - 2.0 * t)) / (r_out - r_in) ** 2
    inside = (r <= r_in) | (r >= r_out)
    db = np.where(inside, 0.0, db)
    d2b = np.where(inside, 0.0, d2b)
    return b, db, d2b


def _radial_bump_fields(x, center, r_in, r_out):
    """Bump value/gradient/hessian as functions of x around `center`."""
    d = x - center
    r = np.sqrt(np.sum(d * d, axis=-1))
    b, db, d2b = _bump_profile(r, r_in, r_out)
    n = x.shape[-1]
    safe_r = np.where(r > 0, r, 1.0)
    u = d / safe_r[:, None]
    grad = db[:, None] * u
    eye = np.eye(n)
    uu = u[:, :, None] * u[:, None, :]
    hess = (d2b[:, None, None] * uu
            + (db / safe_r)[:, None, None] * (eye[None] - uu))
    zero = r <= r_in  # profile constant there, all derivatives vanish
    grad[zero] = 0.0
    hess[zero] = 0.0
    return b, grad, hess


def make_linear(v: Array) -> SmoothFunction:
    v = np.asarray(v, dtype=float)
    if not np.any(v != 0):
        raise ValueError("direction vector must be nonzero")
    n = v.size

    def value(x):
        return _as_points(x) @ v

    def gradient(x):
        x = _as_points(x)
        return np.broadcast_to(v, x.shape).copy()

    def hessian(x):
        x = _as_points(x)
        return np.zeros((x.shape[0], n, n))

    return SmoothFunction(value, gradient, hessian, None, f"linear{v.tolist()}",
                          angular_mode=1)


def make_quadratic_centered(params: MeasureParams) -> SmoothFunction:
    """|x|^2 - E|x|^2.  Mean-zero by construction; in L^2 only when beta > n/2 + 2."""
    c = mean_sq_norm(params)  # requires beta > n/2 + 1
    n = params.n
    flag = "" if params.beta > n / 2 + 2 else " (not in L2)"

    def value(x):
        x = _as_points(x)
        return np.sum(x * x, axis=-1) - c

    def gradient(x):
        return 2.0 * _as_points(x)

    def hessian(x):
        x = _as_points(x)
        return np.broadcast_to(2.0 * np.eye(n), (x.shape[0], n, n)).copy()

    return SmoothFunction(value, gradient, hessian, None,
                          f"quadratic_centered(c={c:.6g}){flag}",
                          angular_mode=0)


def make_power_family(epsilon: float) -> SmoothFunction:
    """f(x) = (1 + |x|^2)^epsilon with analytic derivatives (any dimension)."""
    eps = float(epsilon)

    def value(x):
        s = np.sum(_as_points(x) ** 2, axis=-1)
        return (1.0 + s) ** eps

    def gradient(x):
        x = _as_points(x)
        s = np.sum(x * x, axis=-1)
        return 2.0 * eps * ((1.0 + s) ** (eps - 1.0))[:, None] * x

    def hessian(x):
        x = _as_points(x)
        s = np.sum(x * x, axis=-1)
        w1 = (1.0 + s) ** (eps - 1.0)
        w2 = (1.0 + s) ** (eps - 2.0)
        eye = np.eye(x.shape[-1])
        xx = x[:, :, None] * x[:, None, :]
        return (2.0 * eps * w1)[:, None, None] * eye[None] \
            + (4.0 * eps * (eps - 1.0) * w2)[:, None, None] * xx

    return SmoothFunction(value, gradient, hessian, None, f"power(eps={eps})",
                          angular_mode=0)


def make_one_d_family(epsilon: float) -> SmoothFunction:
    """f(x) = x (1 + x^2)^epsilon on the line (odd test family)."""
    eps = float(epsilon)

    def value(x):
        x = _as_points(x)
        if x.shape[-1] != 1:
            raise ValueError("one-dimensional family requires n = 1")
        t = x[:, 0]
        return t * (1.0 + t * t) ** eps

    def gradient(x):
        x = _as_points(x)
        t = x[:, 0]
        w = 1.0 + t * t
        fp = (1.0 + 2.0 * eps) * w ** eps - 2.0 * eps * w ** (eps - 1.0)
        return fp[:, None]

    def hessian(x):
        x = _as_points(x)
        t = x[:, 0]
        w = 1.0 + t * t
        fpp = 2.0 * t * eps * ((1.0 + 2.0 * eps) * w ** (eps - 1.0)
                               - 2.0 * (eps - 1.0) * w ** (eps - 2.0))
        return fpp[:, None, None]

    return SmoothFunction(value, gradient, hessian, None, f"odd_power(eps={eps})")


def make_radial_log_cutoff(x0: Array, r_in: float, r_out: float) -> SmoothFunction:
    """(1/2) log |x|^2 times a C^2 bump that is 1 near x0, 0 outside radius r_out.

    The annulus must exclude the origin: 0 < r_in < r_out < |x0|.
    """
    x0 = np.asarray(x0, dtype=float)
    R0 = float(np.linalg.norm(x0))
    if R0 == 0.0:
        raise ValueError("cutoff center must be away from the origin")
    if not (0 < r_in < r_out < R0):
        raise ValueError("need 0 < r_in < r_out < |x0|")
    n = x0.size

    def fields(x):
        x = _as_points(x)
        s = np.sum(x * x, axis=-1)
        s = np.where(s > 0, s, 1.0)  # outside the bump anyway
        lv = 0.5 * np.log(s)
        lg = x / s[:, None]
        eye = np.eye(n)
        xx = x[:, :, None] * x[:, None, :]
        lh = eye[None] / s[:, None, None] - 2.0 * xx / (s * s)[:, None, None]
        b, bg, bh = _radial_bump_fields(x, x0, r_in, r_out)
        return lv, lg, lh, b, bg, bh

    def value(x):
        lv, _, _, b, _, _ = fields(x)
        return lv * b

    def gradient(x):
        lv, lg, _, b, bg, _ = fields(x)
        return b[:, None] * lg + lv[:, None] * bg

    def hessian(x):
        lv, lg, lh, b, bg, bh = fields(x)
        cross = lg[:, :, None] * bg[:, None, :]
        return (b[:, None, None] * lh + lv[:, None, None] * bh
                + cross + np.swapaxes(cross, 1, 2))

    return SmoothFunction(value, gradient, hessian, R0 + r_out,
                          f"radial_log_cutoff(|x0|={R0:.4g})")


def make_lower_extremal_1d(beta: float) -> SmoothFunction:
    """Primitive of (1+x^2)^((2 beta - 3)/4) on the line.

    Solves w f'' + (3/2 - beta) x f' = 0 exactly (w = 1 + x^2); the value
    is x * 2F1(1/2, -p; 3/2; -x^2) with p = (2 beta - 3)/4.
    """
    p = (2.0 * float(beta) - 3.0) / 4.0

    def value(x):
        t = _as_points(x)[:, 0]
        return t * hyp2f1(0.5, -p, 1.5, -t * t)

    def gradient(x):
        t = _as_points(x)[:, 0]
        return ((1.0 + t * t) ** p)[:, None]

    def hessian(x):
        t = _as_points(x)[:, 0]
        return (2.0 * p * t * (1.0 + t * t) ** (p - 1.0))[:, None, None]

    return SmoothFunction(value, gradient, hessian, None,
                          f"lower_extremal_1d(beta={beta})")


# ----------------------------------------------------------------------
# Random compactly supported polynomials-times-bump.

class _Poly:
    """Dense multivariate polynomial with precomputed derivative tables."""

    def __init__(self, exps: Array, coefs: Array):
        self.exps = exps          # (M, n) integer exponents
        self.coefs = coefs        # (M,)
        self.n = exps.shape[1]
        self.maxdeg = int(exps.max()) if exps.size else 0
        # derivative coefficient vectors in the same monomial basis
        index = {tuple(e): i for i, e in enumerate(exps.tolist())}
        M = len(coefs)
        self.gcoefs = np.zeros((self.n, M))
        self.hcoefs = np.zeros((self.n, self.n, M))
        for m, e in enumerate(exps.tolist()):
            for i in range(self.n):
                if e[i] == 0:
                    continue
                ei = list(e)
                ei[i] -= 1
                self.gcoefs[i, index[tuple(ei)]] += e[i] * coefs[m]
        for i in range(self.n):
            for m in range(M):
                c = self.gcoefs[i, m]
                if c == 0.0:
                    continue
                e = exps[m]
                for j in range(self.n):
                    if e[j] == 0:
                        continue
                    ej = list(e)
                    ej[j] -= 1
                    self.hcoefs[i, j, index[tuple(ej)]] += e[j] * c

    def monomials(self, x: Array) -> Array:
        # powers x_j^k for k = 0..maxdeg, then gather per monomial
        N = x.shape[0]
        pw = np.ones((N, self.n, self.maxdeg + 1))
        for k in range(1, self.maxdeg + 1):
            pw[:, :, k] = pw[:, :, k - 1] * x
        mono = np.ones((N, len(self.coefs)))
        for j in range(self.n):
            mono *= pw[:, j, self.exps[:, j]]
        return mono

    def all_fields(self, x: Array):
        mono = self.monomials(x)
        v = mono @ self.coefs
        g = np.stack([mono @ self.gcoefs[i] for i in range(self.n)], axis=-1)
        h = np.empty((x.shape[0], self.n, self.n))
        for i in range(self.n):
            for j in range(i, self.n):
                hij = mono @ self.hcoefs[i, j]
                h[:, i, j] = hij
                h[:, j, i] = hij
        return v, g, h


def make_random_test(seed: int, n: int, degree: int = 6, R: float = 3.0) -> SmoothFunction:
    """Random polynomial (total degree <= degree) times a radial C^2 bump in |x| <= R."""
    if degree > 6:
        raise ValueError("degree capped at 6")
    if R <= 0:
        raise ValueError("support radius must be positive")
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    exps = np.array([e for d in range(degree + 1)
                     for e in _exponents(n, d)], dtype=int)
    coefs = rng.normal(size=len(exps)) / (1.0 + exps.sum(axis=1)) ** 1.5
    poly = _Poly(exps, coefs)
    center = np.zeros(n)
    r_in, r_out = 0.6 * R, R

    def _inside(x):
        # outside the bump everything is multiplied by an exact 0; clamp the
        # polynomial argument to the support ball so huge radii cannot overflow
        r = np.sqrt(np.sum(x * x, axis=-1))
        fac = np.where(r > r_out, r_out / np.maximum(r, r_out), 1.0)
        return x * fac[..., None]

    def value(x):
        x = _as_points(x)
        v, _, _ = poly.all_fields(_inside(x))
        b, _, _ = _radial_bump_fields(x, center, r_in, r_out)
        return v * b

    def gradient(x):
        x = _as_points(x)
        v, g, _ = poly.all_fields(_inside(x))
        b, bg, _ = _radial_bump_fields(x, center, r_in, r_out)
        return b[:, None] * g + v[:, None] * bg

    def hessian(x):
        x = _as_points(x)
        v, g, h = poly.all_fields(_inside(x))
        b, bg, bh = _radial_bump_fields(x, center, r_in, r_out)
        cross = g[:, :, None] * bg[:, None, :]
        return (b[:, None, None] * h + v[:, None, None] * bh
                + cross + np.swapaxes(cross, 1, 2))

    return SmoothFunction(value, gradient, hessian, R,
                          f"random_test(seed={seed}, deg={degree}, R={R})",
                          radial_seams=(r_in, r_out))


def _exponents(n: int, total: int):
    """All exponent tuples of n variables summing to `total`."""
    if n == 1:
        yield (total,)
        return
    for bars in combinations_with_replacement(range(n), total):
        e = [0] * n
        for b in bars:
            e[b] += 1
        yield tuple(e)


def check_derivatives(f: SmoothFunction, points: Array, h: float = 1e-4) -> float:
    """Worst relative mismatch of analytic gradient/hessian vs central differences."""
    if not (1e-6 <= h <= 1e-3):
        raise ValueError("step size should lie in [1e-6, 1e-3]")
    x = _as_points(points)
    N, n = x.shape
    g = f.gradient(x)
    H = f.hessian(x)
    worst = 0.0
    for i in range(n):
        dx = np.zeros(n)
        dx[i] = h
        g_fd = (f.value(x + dx) - f.value(x - dx)) / (2 * h)
        scale = max(1.0, float(np.max(np.abs(g))))
        worst = max(worst, float(np.max(np.abs(g_fd - g[:, i]))) / scale)
        h_fd = (f.gradient(x + dx) - f.gradient(x - dx)) / (2 * h)
        scale = max(1.0, float(np.max(np.abs(H))))
        worst = max(worst, float(np.max(np.abs(h_fd - H[:, i, :]))) / scale)
    return worst
