"""Photon-added coherent states of the Poschl-Teller chain.

A state with label z and m added quanta is

    |z; m> = N_m(|z|^2) sum_n z^n / K_n^m |n + m>,

where K_n^m is built from partial remainder sums and from a product of
weights Z_k. Two weight choices are supported: a pure phase, and a
Gamma-weighted modulus times the same phase.

Conventions fixed here:

* Z_k takes its modulus from the chain parameter a_{k+1} = 2 rho + 2k, and
  its phase exp(-i alpha R) from the remainder counted up from the
  photon-added floor, so that the product over k = m..n+m-1 carries
  exp(-i alpha E_n) for every m.
* K_n^m therefore has phase exp(+i alpha E_n) and the state amplitudes
  exp(-i alpha E_n).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import poschl_teller as pt
from .specfun import (SERIES, DomainError, MeijerGSpec, SeriesControl,
                      hypergeometric_pfq, log_gamma, meijer_g, with_tol)

PHASE = "phase"
GAMMA = "gamma"
TAIL_TOL = 1e-16
CLOSED = with_tol(SERIES, 1e-14)
MAX_RATIO = 0.99


class TruncationError(ValueError):
    pass


@dataclass(frozen=True)
class ZChoice:
    kind: str = PHASE
    alpha: float = 0.0
    kappa: float = 1.0

    def __post_init__(self):
        if self.kind not in (PHASE, GAMMA):
            raise ValueError(f"unknown Z choice {self.kind!r}")

    @classmethod
    def phase_only(cls, alpha: float = 0.0) -> "ZChoice":
        return cls(PHASE, alpha)

    @classmethod
    def gamma_weighted(cls, alpha: float = 0.0, kappa: float = 1.0) -> "ZChoice":
        return cls(GAMMA, alpha, kappa)

    def check(self, p: pt.PTParams):
        if self.kind == GAMMA and not math.isclose(p.lam, self.kappa, rel_tol=1e-12):
            raise ValueError(f"Gamma-weighted choice needs lam == kappa (lam={p.lam}, kappa={self.kappa})")

    def label_radius(self) -> float:
        """Radius of convergence in |z| (infinite for the phase choice)."""
        return math.inf if self.kind == PHASE else 1.0


@dataclass
class CoefficientTable:
    m: int
    mod2: np.ndarray
    phase: np.ndarray


@dataclass
class StateExpansion:
    z: complex
    m: int
    norm_const: float
    coeffs: np.ndarray = field(repr=False)
    truncation: int = 0

    def probabilities(self) -> np.ndarray:
        return np.abs(self.coeffs) ** 2


def _lg(s) -> float:
    return log_gamma(s).real


# ---------------------------------------------------------------- Z weights

def z_factor(choice: ZChoice, p: pt.PTParams, k: int, m: int = 0) -> complex:
    """Single weight Z_k for a family with m added quanta (k >= m - 1)."""
    phase = cmath.exp(-1j * choice.alpha * p.lam ** 2 * (2 * p.rho + 2 * (k - m + 1) - 1))
    if choice.kind == PHASE:
        return phase
    a = 2 * p.rho + 2 * k
    return choice.kappa * math.sqrt(a * (a + 1)) * phase


def z_product(choice: ZChoice, p: pt.PTParams, m: int, n: int) -> complex:
    """prod_{k=m}^{n+m-1} Z_k as a literal product of factors."""
    choice.check(p)
    out = 1.0 + 0j
    for k in range(m, n + m):
        out *= z_factor(choice, p, k, m)
    return out


def z_product_closed(choice: ZChoice, p: pt.PTParams, m: int, n: int) -> complex:
    choice.check(p)
    phase = cmath.exp(-1j * choice.alpha * pt.energy(p, n))
    if choice.kind == PHASE:
        return phase
    log_mod2 = 2 * n * math.log(choice.kappa) + _lg(2 * n + 2 * m + 2 * p.rho) - _lg(2 * m + 2 * p.rho)
    return math.exp(0.5 * log_mod2) * phase


# ------------------------------------------------------------ coefficients

def _partial_sum(p: pt.PTParams, k: int, top: int) -> float:
    return sum(pt.remainder(p, s) for s in range(k, top + 1))


def coefficient_raw(choice: ZChoice, p: pt.PTParams, m: int, n: int) -> complex:
    """K_n^m from literal products of remainder partial sums and Z weights."""
    if m < 0 or n < 0:
        raise ValueError("m and n must be non-negative")
    top = n + m
    num = 1.0
    for k in range(m + 1, top + 1):
        num *= _partial_sum(p, k, top)
    den = 1.0
    for k in range(1, m + 1):
        den *= _partial_sum(p, k, top)
    return math.sqrt(num) / (z_product(choice, p, m, n) * math.sqrt(den))


def log_mod2_closed(choice: ZChoice, p: pt.PTParams, m: int, n):
    """log |K_n^m|^2 from the Gamma closed forms (vectorized over n)."""
    n = np.asarray(n, dtype=float)
    lgv = lambda s: np.real(log_gamma(s)) if np.ndim(s) == 0 else np.real(log_gamma(np.asarray(s, dtype=float)))
    if choice.kind == PHASE:
        r2 = 2 * p.rho
        out = (2 * (n - m) * math.log(p.lam) + 2 * lgv(n + 1) + lgv(2 * n + 2 * m + r2)
               + lgv(n + m + r2) - lgv(n + m + 1) - 2 * lgv(n + 2 * m + r2))
    else:
        choice.check(p)
        nu = p.nu
        out = (-2 * m * math.log(choice.kappa) + 2 * lgv(n + 1) + lgv(n + m + nu + 1)
               + _lg(2 * m + nu + 1) - lgv(n + m + 1) - 2 * lgv(n + 2 * m + nu + 1))
    return out


def coefficient_closed(choice: ZChoice, p: pt.PTParams, m: int, n: int) -> complex:
    """K_n^m from the Gamma closed forms; phase exp(+i alpha E_n)."""
    if m < 0 or n < 0:
        raise ValueError("m and n must be non-negative")
    mod = math.exp(0.5 * float(log_mod2_closed(choice, p, m, n)))
    return mod * cmath.exp(1j * choice.alpha * pt.energy(p, n))


def coefficient_table(choice: ZChoice, p: pt.PTParams, m: int, n_max: int) -> CoefficientTable:
    n = np.arange(n_max + 1)
    mod2 = np.exp(log_mod2_closed(choice, p, m, n))
    phase = np.angle(np.exp(1j * choice.alpha * pt.energies(p, n_max)))
    return CoefficientTable(m, mod2, phase)


# ----------------------------------------------------------- normalization

def _check_label(choice: ZChoice, x: float):
    if x < 0:
        raise DomainError("|z|^2 must be non-negative")
    if choice.kind == GAMMA and x >= 1:
        raise DomainError("Gamma-weighted states need |z| < 1")


def series_terms(choice: ZChoice, p: pt.PTParams, m: int, x: float, rel_tol: float = TAIL_TOL,
                 max_terms: int = 100000) -> np.ndarray:
    """Terms x^n / |K_n^m|^2 up to the point where the geometric tail bound is negligible."""
    _check_label(choice, x)
    if x == 0:
        return np.exp(-log_mod2_closed(choice, p, m, np.array([0.0])))
    # the term ratio decreases towards x for the Gamma-weighted series
    if choice.kind == GAMMA and x >= MAX_RATIO:
        raise TruncationError(f"limiting term ratio {x:.4f} too close to 1 for a reliable tail bound")
    logx = math.log(x)
    chunk = 64
    terms: list[np.ndarray] = []
    total = 0.0
    start = 0
    while start < max_terms:
        n = np.arange(start, start + chunk + 1, dtype=float)
        logt = n * logx - log_mod2_closed(choice, p, m, n)
        t = np.exp(logt)
        ratio = np.exp(np.diff(logt))
        for i in range(chunk):
            total += t[i]
            r = ratio[i]
            if r < MAX_RATIO and t[i + 1] / (1 - r) <= rel_tol * total:
                terms.append(t[: i + 1])
                return np.concatenate(terms)
        terms.append(t[:chunk])
        start += chunk
    raise TruncationError(f"series did not settle within {max_terms} terms")


def normalization(choice: ZChoice, p: pt.PTParams, m: int, x: float) -> float:
    """N_m(x) = [sum_n x^n / |K_n^m|^2]^(-1/2) by direct summation."""
    return 1.0 / math.sqrt(float(np.sum(series_terms(choice, p, m, x))))


def _norm_hyper_params(choice: ZChoice, p: pt.PTParams, m: int):
    """(log prefactor, upper, lower, argument scale) of N_m^-2 as a pFq."""
    if choice.kind == PHASE:
        r2, rho = 2 * p.rho, p.rho
        logpref = 2 * m * math.log(p.lam) + _lg(m + 1) + _lg(2 * m + r2) - _lg(m + r2)
        upper = [m + 1, 2 * m + r2, 2 * m + r2]
        lower = [1.0, m + rho, m + 2 * rho, m + rho + 0.5]
        scale = 1.0 / (4 * p.lam ** 2)
    else:
        choice.check(p)
        nu = p.nu
        logpref = 2 * m * math.log(choice.kappa) + _lg(m + 1) + _lg(2 * m + nu + 1) - _lg(m + nu + 1)
        upper = [m + 1, 2 * m + nu + 1, 2 * m + nu + 1]
        lower = [1.0, m + nu + 1]
        scale = 1.0
    return logpref, upper, lower, scale


def normalization_closed(choice: ZChoice, p: pt.PTParams, m: int, x: float, form: str = "pfq",
                         ctl: SeriesControl = CLOSED) -> float:
    """N_m(x) from the hypergeometric closed form or its Meijer G equivalent.

    ``form="meijer"`` uses pFq(a; b; y) = prod Gamma(b)/prod Gamma(a) *
    G^{1,p}_{p,q+1}(-y | 1-a; 0, 1-b), evaluated on the residue route.
    """
    _check_label(choice, x)
    logpref, upper, lower, scale = _norm_hyper_params(choice, p, m)
    y = x * scale
    if form == "pfq":
        series = hypergeometric_pfq(upper, lower, y, ctl)
    elif form == "meijer":
        spec = MeijerGSpec(1, len(upper), [1 - v for v in upper], [0.0] + [1 - v for v in lower])
        g = meijer_g(spec, -y, ctl)
        series = g * math.exp(sum(_lg(v) for v in lower) - sum(_lg(v) for v in upper))
    else:
        raise ValueError(f"unknown form {form!r}")
    return math.exp(-0.5 * logpref) / math.sqrt(series)


# --------------------------------------------------------------- states

def _amplitudes(choice: ZChoice, p: pt.PTParams, z: complex, m: int, count: int) -> np.ndarray:
    """z^n / K_n^m for n < count (unnormalized)."""
    n = np.arange(count, dtype=float)
    inv_mod = np.exp(-0.5 * log_mod2_closed(choice, p, m, n))
    phase = np.exp(-1j * choice.alpha * pt.energies(p, count - 1))
    zpow = np.power(complex(z), n) if z != 0 else (n == 0).astype(complex)
    return zpow * inv_mod * phase


def required_truncation(choice: ZChoice, p: pt.PTParams, m: int, x: float, rel_tol: float = 1e-12) -> int:
    return len(series_terms(choice, p, m, x, rel_tol))


def state_coefficients(choice: ZChoice, p: pt.PTParams, z: complex, m: int,
                       truncation: int | None = None) -> StateExpansion:
    """Normalized Fock amplitudes N_m z^n / K_n^m placed at index n + m."""
    choice.check(p)
    x = abs(z) ** 2
    need = required_truncation(choice, p, m, x)
    if truncation is None:
        truncation = need
    elif truncation < need:
        raise TruncationError(f"truncation {truncation} < {need} needed for a 1e-12 tail")
    nrm = normalization(choice, p, m, x)
    amps = _amplitudes(choice, p, z, m, truncation) * nrm
    coeffs = np.concatenate([np.zeros(m, dtype=complex), amps])
    return StateExpansion(complex(z), m, nrm, coeffs, truncation)


def _overlap_terms(choice: ZChoice, p: pt.PTParams, z1: complex, m1: int, z2: complex, m2: int) -> np.ndarray:
    size = max(m1 + required_truncation(choice, p, m1, abs(z1) ** 2, TAIL_TOL),
               m2 + required_truncation(choice, p, m2, abs(z2) ** 2, TAIL_TOL))
    s1 = state_coefficients(choice, p, z1, m1, size - m1)
    s2 = state_coefficients(choice, p, z2, m2, size - m2)
    return s1.coeffs.conj() * s2.coeffs


def overlap(choice: ZChoice, p: pt.PTParams, z1: complex, m1: int, z2: complex, m2: int) -> complex:
    """<z1; m1 | z2; m2> by summing the two Fock expansions over a shared range."""
    return complex(np.sum(_overlap_terms(choice, p, z1, m1, z2, m2)))


def overlap_scale(choice: ZChoice, p: pt.PTParams, z1: complex, m1: int, z2: complex, m2: int) -> float:
    """sum_n |<n|z1; m1>| |<n|z2; m2>|, at most 1.

    Rounding in either overlap route is proportional to this, so nearly
    orthogonal labels (overlap far below the scale) lose relative accuracy.
    """
    return float(np.sum(np.abs(_overlap_terms(choice, p, z1, m1, z2, m2))))


def overlap_closed(choice: ZChoice, p: pt.PTParams, z1: complex, m1: int, z2: complex, m2: int,
                   ctl: SeriesControl = CLOSED) -> complex:
    """<z1; m1 | z2; m2> from the hypergeometric closed form.

    Written for m2 >= m1; the other order follows by conjugate symmetry. The
    closed form has an n-independent phase only when alpha = 0 or m1 = m2;
    other cases raise.
    """
    if m2 < m1:
        return overlap_closed(choice, p, z2, m2, z1, m1, ctl).conjugate()
    if choice.alpha != 0 and m1 != m2:
        raise ValueError("closed overlap form needs alpha = 0 when m1 != m2")
    m, mp, zp, z = m2, m1, complex(z1), complex(z2)
    d = m - mp
    arg = zp.conjugate() * z
    n_m = normalization(choice, p, m, abs(z) ** 2)
    n_mp = normalization(choice, p, mp, abs(zp) ** 2)
    if choice.kind == PHASE:
        r2, rho = 2 * p.rho, p.rho
        logc = (2 * mp * math.log(p.lam) + _lg(m + 1) + _lg(m + mp + r2)
                - _lg(d + 1) - _lg(m + r2))
        upper = [m + 1, 2 * m + r2, m + mp + r2]
        lower = [d + 1, m + rho, m + rho + 0.5, m + r2]
        y = arg / (4 * p.lam ** 2)
    else:
        choice.check(p)
        nu = p.nu
        logc = ((m + mp) * math.log(choice.kappa) + _lg(m + 1) + _lg(2 * m + nu + 1)
                + _lg(m + mp + nu + 1) - _lg(d + 1) - _lg(m + nu + 1)
                - 0.5 * (_lg(2 * m + nu + 1) + _lg(2 * mp + nu + 1)))
        upper = [m + 1, 2 * m + nu + 1, m + mp + nu + 1]
        lower = [d + 1, m + nu + 1]
        y = arg
    series = hypergeometric_pfq(upper, lower, y, ctl)
    return n_m * n_mp * zp.conjugate() ** d * math.exp(logc) * complex(series)


def lowering_eigenvalue_check(choice: ZChoice, p: pt.PTParams, z: complex,
                              truncation: int | None = None) -> float:
    """Relative residual of B_- |z> = z Z_{-1} |z> for m = 0 states.

    B_- lowers |n> to b_n |n-1> with b_n^2 the ratio of consecutive products
    of remainder partial sums; passing B_- through the weights shifts each
    Z_k to Z_{k-1}, the first becoming Z_{-1} at chain parameter 2 rho - 2.
    The left side uses the partial-sum ladder factors and the shifted
    literal Z products, the right side the closed-form coefficients.
    """
    choice.check(p)
    if z == 0:
        return 0.0
    x = abs(z) ** 2
    need = required_truncation(choice, p, 0, x)
    if truncation is None:
        truncation = need
    elif truncation < need:
        raise TruncationError(f"truncation {truncation} < {need} needed")
    nrm = normalization(choice, p, 0, x)
    z = complex(z)
    lhs = np.zeros(truncation, dtype=complex)
    rhs = np.zeros(truncation, dtype=complex)
    z_minus = z_factor(choice, p, -1)
    log_c_prev = 0.0
    shifted = z_minus
    for n in range(1, truncation + 1):
        log_c = sum(math.log(_partial_sum(p, k, n)) for k in range(1, n + 1))
        b_n = math.exp(0.5 * (log_c - log_c_prev))
        if n >= 2:
            shifted *= z_factor(choice, p, n - 2)
        # coefficient of |n> in |z>, with every Z_k replaced by Z_{k-1}
        lhs[n - 1] = nrm * z ** n * shifted * math.exp(-0.5 * log_c) * b_n
        rhs[n - 1] = z * z_minus * nrm * z ** (n - 1) / coefficient_closed(choice, p, 0, n - 1)
        log_c_prev = log_c
    return float(np.linalg.norm(lhs - rhs) / np.linalg.norm(rhs))
