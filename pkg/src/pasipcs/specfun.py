"""Special-function kernels: log-gamma, Pochhammer symbols, pFq series, Meijer G.

Meijer G values are produced along two routes:

* shapes with a single lower-left parameter equal to zero (``m_idx == 1``,
  ``b_list[0] == 0``) reduce to a Gamma-prefactored pFq residue series, which
  is also the only route accepting a negative argument;
* shapes with no upper-left parameters (``n_idx == 0``) are integrated
  numerically along a Mellin-Barnes contour lying right of every pole of
  ``prod Gamma(b_j + s)``.

Repeated lower parameters (double poles) need no special treatment on the
contour route, which is why it is the default for the ``n == 0`` shapes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy import optimize, special


class PoleError(ValueError):
    """Raised when a Gamma argument sits on a pole."""


class ConvergenceError(ArithmeticError):
    """Raised when a series or a contour sum fails to settle."""


class DomainError(ValueError):
    """Raised for arguments outside the region where a routine is defined."""


class ContourError(ArithmeticError):
    """Raised when no admissible Mellin-Barnes contour can be placed."""


_POLE_TOL = 1e-12


@dataclass(frozen=True)
class SeriesControl:
    """Truncation and contour settings shared by the series and contour kernels.

    ``contour_offset`` of ``None`` places the contour half a unit right of the
    rightmost pole. ``contour_halfwidth`` and ``contour_points`` are starting
    values; both grow until the contour sum settles at ``rel_tol``.
    """

    rel_tol: float = 1e-10
    max_terms: int = 20000
    contour_offset: float | None = None
    contour_halfwidth: float = 8.0
    contour_points: int = 161
    max_contour_points: int = 2_000_001

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")
        if self.contour_points < 3 or self.contour_points % 2 == 0:
            raise ValueError("contour_points must be odd and >= 3")
        if not self.contour_halfwidth > 0:
            raise ValueError("contour_halfwidth must be positive")


SERIES = SeriesControl()
CONTOUR = SeriesControl(rel_tol=1e-6)


def _is_nonpositive_integer(v, tol=_POLE_TOL) -> bool:
    v = complex(v)
    if abs(v.imag) > tol:
        return False
    r = round(v.real)
    return r <= 0 and abs(v.real - r) <= tol * max(1.0, abs(v.real))


def log_gamma(s):
    """Principal branch of log Gamma(s) for complex (or real) ``s``.

    Works elementwise on arrays. Raises :class:`PoleError` at the poles
    ``s = 0, -1, -2, ...``.
    """
    arr = np.asarray(s, dtype=complex)
    for v in np.atleast_1d(arr).ravel():
        if _is_nonpositive_integer(v):
            raise PoleError(f"log_gamma has a pole at s = {v.real:g}")
    out = special.loggamma(arr)
    return complex(out) if out.ndim == 0 else out


def pochhammer(a: float, n: int) -> float:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1) as an explicit product."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out = 1.0
    for k in range(n):
        out *= a + k
    return out


def _check_b(b_list):
    for b in b_list:
        if _is_nonpositive_integer(b):
            raise PoleError(f"lower hypergeometric parameter {b} is a non-positive integer")


def hypergeometric_pfq(a_list: Sequence[float], b_list: Sequence[float], x,
                       ctl: SeriesControl = SERIES):
    """Sum the generalized hypergeometric series pFq(a; b; x).

    ``x`` may be real, complex or an array of either. Terms are accumulated
    until the geometric tail bound drops below ``ctl.rel_tol`` times the
    partial sum. The series with ``len(a) == len(b) + 1`` is summed only for
    ``|x| < 1``; with more upper parameters only the terminating case is
    accepted.
    """
    a = [float(v) for v in a_list]
    b = [float(v) for v in b_list]
    _check_b(b)
    p, q = len(a), len(b)
    xs = np.asarray(x)
    cplx = np.iscomplexobj(xs)
    xv = np.atleast_1d(xs).astype(complex if cplx else float).ravel()
    terminating = any(_is_nonpositive_integer(v) for v in a)

    if not terminating:
        if p == q + 1 and np.any(np.abs(xv) >= 1):
            raise DomainError(f"{p}F{q} series requires |x| < 1")
        if p > q + 1 and np.any(xv != 0):
            raise DomainError(f"{p}F{q} series diverges for x != 0")

    total = np.ones_like(xv)
    term = np.ones_like(xv)
    done = xv == 0
    for n in range(ctl.max_terms):
        num = 1.0
        for v in a:
            num *= v + n
        den = float(n + 1)
        for v in b:
            den *= v + n
        ratio = num / den
        term = term * ratio * xv
        total = total + term
        if ratio == 0.0:
            done[:] = True
            break
        # ratio of the next term, used as the tail bound of a geometric majorant
        nxt = 1.0
        for v in a:
            nxt *= v + n + 1
        dnx = float(n + 2)
        for v in b:
            dnx *= v + n + 1
        r = np.abs(nxt / dnx * xv)
        if p == q + 1:
            r = np.maximum(r, np.abs(xv))
        tail = np.where(r < 1, np.abs(term) * r / np.where(r < 1, 1 - r, 1.0), np.inf)
        done = done | (tail <= ctl.rel_tol * np.abs(total))
        if done.all():
            break
    else:
        raise ConvergenceError(f"{p}F{q} did not converge in {ctl.max_terms} terms")

    total = total.reshape(xs.shape)
    return total.item() if total.ndim == 0 else total


@dataclass(frozen=True)
class MeijerGSpec:
    """Parameters of G^{m,n}_{p,q}(x | a; b).

    ``a_list`` holds a_1..a_p (the first ``n_idx`` form the upper-left block)
    and ``b_list`` holds b_1..b_q (the first ``m_idx`` form the lower-left block).
    """

    m_idx: int
    n_idx: int
    a_list: tuple = field(default=())
    b_list: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "a_list", tuple(float(v) for v in self.a_list))
        object.__setattr__(self, "b_list", tuple(float(v) for v in self.b_list))
        if not (0 <= self.m_idx <= self.q and 0 <= self.n_idx <= self.p):
            raise ValueError(f"invalid indices m={self.m_idx}, n={self.n_idx} for p={self.p}, q={self.q}")

    @property
    def p(self) -> int:
        return len(self.a_list)

    @property
    def q(self) -> int:
        return len(self.b_list)

    @property
    def upper_reducible(self) -> bool:
        return self.m_idx == 1 and self.q >= 1 and self.b_list[0] == 0.0 and self.n_idx == self.p

    @property
    def lower_only(self) -> bool:
        return self.n_idx == 0

    def mellin(self, s):
        """Gamma ratio whose inverse Mellin transform is this G-function."""
        return np.exp(_log_mellin(self, np.asarray(s, dtype=complex)))


def _log_mellin(spec: MeijerGSpec, s):
    m, n = spec.m_idx, spec.n_idx
    out = np.zeros_like(s, dtype=complex)
    for j, bj in enumerate(spec.b_list):
        if j < m:
            out += special.loggamma(bj + s)
        else:
            out -= special.loggamma(1 - bj - s)
    for j, aj in enumerate(spec.a_list):
        if j < n:
            out += special.loggamma(1 - aj - s)
        else:
            out -= special.loggamma(aj + s)
    return out


def _cancel_common(spec: MeijerGSpec) -> MeijerGSpec:
    """Drop a-parameters of the lower block that equal a lower-left b."""
    a = list(spec.a_list)
    b = list(spec.b_list)
    m = spec.m_idx
    changed = True
    while changed:
        changed = False
        for i in range(spec.n_idx, len(a)):
            for j in range(m):
                if a[i] == b[j]:
                    del a[i]
                    del b[j]
                    m -= 1
                    changed = True
                    break
            if changed:
                break
    return MeijerGSpec(m, spec.n_idx, tuple(a), tuple(b))


def _meijer_residue(spec: MeijerGSpec, x: float, ctl: SeriesControl) -> float:
    b1 = spec.b_list[0]
    pref = 1.0
    for aj in spec.a_list[: spec.n_idx]:
        arg = 1 + b1 - aj
        if _is_nonpositive_integer(arg):
            raise PoleError("coincident poles in the upper-reducible G-function")
        pref *= special.gamma(arg)
    for bj in spec.b_list[1:]:
        pref *= special.rgamma(1 + b1 - bj)
    for aj in spec.a_list[spec.n_idx:]:
        pref *= special.rgamma(aj - b1)
    if pref == 0.0:
        return 0.0
    sign = (-1) ** (spec.p - 1 - spec.n_idx)
    upper = [1 + b1 - aj for aj in spec.a_list]
    lower = [1 + b1 - bj for bj in spec.b_list[1:]]
    series = hypergeometric_pfq(upper, lower, sign * x, ctl)
    if b1 != 0.0:
        if x <= 0:
            raise DomainError("x**b1 is undefined for x <= 0 unless b1 == 0")
        pref *= x ** b1
    return float(np.real(pref * series))


def _saddle_offset(spec: MeijerGSpec, x: float, c0: float) -> float:
    """Minimum of |F(c) x^-c| on the real axis, searched right of ``c0``."""
    logx = math.log(x)

    def slope(c):
        v = -logx
        for j, bj in enumerate(spec.b_list):
            v += special.digamma(bj + c) if j < spec.m_idx else special.digamma(1 - bj - c)
        for aj in spec.a_list:
            v -= special.digamma(aj + c)
        return v

    if slope(c0) >= 0:
        return c0
    hi = c0 + 1.0
    while slope(hi) < 0:
        hi = c0 + 2 * (hi - c0)
        if hi - c0 > 1e9:
            # no saddle in reach; callers treat a huge offset as unusable
            return hi
    return optimize.brentq(slope, c0, hi, xtol=1e-6 * hi)


def _contour_sum(logf, x, c, scale, kappa, h, t_max):
    """Trapezoid sum of (1/pi) Im[F(s) x^-s s'(t)] over t in [0, t_max].

    The path is s(t) = c + scale * (i t - kappa (sqrt(1 + t^2) - 1)), a
    vertical line for kappa = 0 and a left-opening hyperbola otherwise.
    """
    t = np.arange(0.0, t_max + 0.5 * h, h)
    root = np.sqrt(1.0 + t * t)
    s = c + scale * (1j * t - kappa * (root - 1.0))
    ds = scale * (1j - kappa * t / root)
    vals = np.imag(np.exp(logf(s) - s * math.log(x)) * ds)
    w = np.full(t.shape, h)
    w[0] = 0.5 * h
    return float(np.dot(w, vals) / math.pi), np.abs(vals)


def _meijer_contour(spec: MeijerGSpec, x: float, ctl: SeriesControl) -> float:
    if x <= 0:
        raise DomainError("the contour route needs x > 0")
    spec = _cancel_common(spec)
    if spec.n_idx != 0:
        raise ContourError("the contour route handles only n == 0 shapes")
    p, q, m = spec.p, spec.q, spec.m_idx
    if m == 0:
        raise ContourError("G-function with m == 0 has no lower-left poles to enclose")
    decay = m - 0.5 * (p + q)
    rightmost = max(-bj for bj in spec.b_list[:m])
    if ctl.contour_offset is None:
        c = rightmost + 0.5
    else:
        c = float(ctl.contour_offset)
        if c <= rightmost:
            raise ContourError(f"offset {c} does not separate the poles (rightmost at {rightmost})")
    for bj in spec.b_list[:m]:
        if _is_nonpositive_integer(bj + c, 1e-9):
            raise ContourError("contour passes through a pole")

    if decay <= 0:
        if p != q or m != q:
            raise ContourError("Mellin-Barnes integral does not converge for this shape")
        if x > 1:
            # closing the contour to the right encloses no poles
            return 0.0
        if x == 1:
            raise ContourError("G^{q,0}_{q,q} at x = 1 is not evaluated")
        # on a vertical line the integrand only decays algebraically, so bend
        # the path left; scaling the bend with the offset keeps it away from
        # the origin, where the integrand would dwarf the result
        if ctl.contour_offset is None:
            c = _saddle_offset(spec, x, c)
        if c > 1e7:
            raise ContourError("argument too close to 1: log-gamma loses precision at the saddle")
        kappa = 1.0
        scale = max(c, 1.0)
    else:
        kappa = 0.0
        scale = 1.0
        if ctl.contour_offset is None:
            c = _saddle_offset(spec, x, c)

    def logf(s):
        return _log_mellin(spec, s)

    h = 2.0 * ctl.contour_halfwidth / (ctl.contour_points - 1)
    t_max = ctl.contour_halfwidth
    if kappa > 0:
        h = min(h, 0.05)
        t_max = min(t_max, 1.0)
    eps = np.finfo(float).eps

    def tolerance(value, mag, step):
        # never ask for more than the rounding floor of the summed magnitudes
        return max(ctl.rel_tol * abs(value), 64 * eps * step * float(mag.sum()) / math.pi)

    est, mag = _contour_sum(logf, x, c, scale, kappa, h, t_max)
    # double the half-width until the added stretch no longer moves the sum
    for _ in range(60):
        if t_max * 2 / h > ctl.max_contour_points:
            raise ConvergenceError("contour half-width grew past max_contour_points")
        longer, mag2 = _contour_sum(logf, x, c, scale, kappa, h, 2 * t_max)
        t_max *= 2
        settled = abs(longer - est) <= 0.1 * tolerance(longer, mag2, h)
        est, mag = longer, mag2
        if settled and mag[-1] <= 1e-3 * mag.max():
            break
    else:
        raise ConvergenceError("integrand does not decay along the contour")

    for _ in range(30):
        h *= 0.5
        if t_max / h > ctl.max_contour_points:
            raise ConvergenceError("contour step refinement exceeded max_contour_points")
        new, mag = _contour_sum(logf, x, c, scale, kappa, h, t_max)
        if abs(new - est) <= tolerance(new, mag, h):
            return new
        est = new
    raise ConvergenceError("contour sum did not settle under step halving")


def meijer_g(spec: MeijerGSpec, x: float, ctl: SeriesControl | None = None,
             method: str = "auto") -> float:
    """Evaluate G^{m,n}_{p,q}(x | a; b) for the two supported shapes.

    ``method`` is ``"residue"``, ``"contour"`` or ``"auto"`` (residue series
    for upper-reducible shapes, contour otherwise). ``ctl`` defaults to
    :data:`SERIES` on the residue route and :data:`CONTOUR` on the contour
    route.
    """
    x = float(x)
    if method == "auto":
        if spec.upper_reducible:
            method = "residue"
        elif spec.lower_only:
            method = "contour"
        else:
            raise ValueError("only upper-reducible (m_idx=1, b1=0) and lower-only (n_idx=0) shapes are supported")
    if method == "residue":
        if spec.m_idx != 1:
            raise ValueError("residue route needs m == 1")
        return _meijer_residue(spec, x, ctl or SERIES)
    if method == "contour":
        if not spec.lower_only:
            raise ValueError("contour route needs n == 0")
        return _meijer_contour(spec, x, ctl or CONTOUR)
    raise ValueError(f"unknown method {method!r}")


def meijer_g_values(spec: MeijerGSpec, xs, ctl: SeriesControl | None = None,
                    method: str = "auto") -> np.ndarray:
    """:func:`meijer_g` mapped over an array of arguments."""
    xs = np.asarray(xs, dtype=float)
    out = np.array([meijer_g(spec, v, ctl, method) for v in xs.ravel()])
    return out.reshape(xs.shape)


def with_tol(ctl: SeriesControl, rel_tol: float) -> SeriesControl:
    return replace(ctl, rel_tol=rel_tol)
