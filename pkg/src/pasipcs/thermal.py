"""Canonical ensemble over the photon-added family.

The density operator is rho = sum_n exp(-beta E_n) |n+m><n+m| / Z, with the
Boltzmann sums evaluated directly. The P-function is the diagonal
coherent-state density of the geometric weights q^n (1 - q), q = exp(-beta lam^2),
i.e. the linear part of the spectrum; it is built from the weight kernels
stretched by 1/q.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import coherent_states as cs
from . import measure
from . import poschl_teller as pt

BOLTZMANN_FLOOR = 1e-16
MAX_LEVELS = 1_000_000


@dataclass(frozen=True)
class ThermalConfig:
    beta: float
    m: int = 0
    truncation: int | None = None

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if self.m < 0:
            raise ValueError("m must be non-negative")


@dataclass
class ThermalReport:
    partition: float
    mean_N: float
    mean_N2: float
    g2: float
    mandel_q: float

    @property
    def variance(self) -> float:
        return self.mean_N2 - self.mean_N ** 2


@dataclass
class Crosscheck:
    """Reference closed forms next to the direct values, one block per n-bar convention."""
    direct: ThermalReport
    closed: dict[str, dict[str, float]] = field(default_factory=dict)
    deviation: dict[str, dict[str, float]] = field(default_factory=dict)


def levels(p: pt.PTParams, cfg: ThermalConfig) -> int:
    """Number of levels kept: exp(-beta E_n) drops below the floor at n = levels."""
    need = 1
    while cfg.beta * pt.energy(p, need) < -math.log(BOLTZMANN_FLOOR):
        need += 1
        if need > MAX_LEVELS:
            raise ValueError("beta too small for a finite Boltzmann truncation")
    need += 1
    if cfg.truncation is None:
        return need
    if cfg.truncation < need:
        raise cs.TruncationError(f"truncation {cfg.truncation} < {need} needed for the Boltzmann tail")
    return cfg.truncation


def boltzmann_weights(p: pt.PTParams, cfg: ThermalConfig) -> np.ndarray:
    return np.exp(-cfg.beta * pt.energies(p, levels(p, cfg) - 1))


def partition_function(p: pt.PTParams, cfg: ThermalConfig) -> float:
    return float(np.sum(boltzmann_weights(p, cfg)))


def _husimi_sum(p: pt.PTParams, choice: cs.ZChoice, cfg: ThermalConfig, x: float) -> float:
    """sum_n x^n exp(-beta E_n) / |K_n^m|^2, without normalization factors.

    The Boltzmann factor makes the terms fall off like exp(-beta lam^2 n^2), so
    the level count doubles until the last term is below the floor of the sum.
    """
    count = levels(p, cfg)
    while True:
        n = np.arange(count, dtype=float)
        logt = -cfg.beta * pt.energies(p, count - 1) - cs.log_mod2_closed(choice, p, cfg.m, n)
        if x == 0:
            return float(np.exp(logt[0]))
        logt = logt + n * math.log(x)
        top = logt.max()
        if logt[-1] < top + math.log(BOLTZMANN_FLOOR) and logt[-1] < logt[-2]:
            return float(np.exp(top) * np.sum(np.exp(logt - top)))
        count *= 2
        if count > MAX_LEVELS:
            raise cs.TruncationError("Husimi series did not settle")


def husimi(p: pt.PTParams, choice: cs.ZChoice, cfg: ThermalConfig, z: complex) -> float:
    """<z; m| rho |z; m> by direct series."""
    x = abs(z) ** 2
    nrm = cs.normalization(choice, p, cfg.m, x)
    return nrm ** 2 * _husimi_sum(p, choice, cfg, x) / partition_function(p, cfg)


def husimi_trace(p: pt.PTParams, choice: cs.ZChoice, cfg: ThermalConfig) -> float:
    """int d^2z omega_m Q(z), which equals Tr rho = 1.

    pi omega_m N_m^2 is the radial density, so the normalization factors of the
    weight and of the Husimi function cancel before integrating; this keeps
    the Gamma choice clear of the slowly convergent 1/N^2 series near x = 1.
    """
    spec = measure.WeightSpec(choice, p, cfg.m)
    z_part = partition_function(p, cfg)
    fn = lambda xs: np.array([[_husimi_sum(p, choice, cfg, x) / z_part] for x in xs])
    return float(measure.radial_integral(spec, fn, levels(p, cfg), rel_tol=1e-9)[0])


def occupation_factor(p: pt.PTParams, beta: float) -> float:
    """n_A = 1 / (exp(beta lam^2) - 1)."""
    return 1.0 / math.expm1(beta * p.lam ** 2)


def p_function(p: pt.PTParams, choice: cs.ZChoice, cfg: ThermalConfig, x: float) -> float:
    """Diagonal coherent-state density of the weights q^n (1 - q) on level n + m.

    P(x) = (1 / n_A) 𝒲_m(x / q) / 𝒲_m(x), a quotient of the same Meijer G kernel
    at stretched and plain arguments; the power x^m of the phase kernel turns
    into the factor ((n_A + 1) / n_A)^m.
    """
    spec = measure.WeightSpec(choice, p, cfg.m)
    q = math.exp(-cfg.beta * p.lam ** 2)
    nbar = occupation_factor(p, cfg.beta)
    num = measure.radial_density(spec, x, stretch=q)
    if num == 0.0:
        return 0.0
    return num / (nbar * measure.radial_density(spec, x))


def p_function_support(p: pt.PTParams, choice: cs.ZChoice, cfg: ThermalConfig) -> float:
    return math.exp(-cfg.beta * p.lam ** 2) if choice.kind == cs.GAMMA else math.inf


def p_normalization(p: pt.PTParams, choice: cs.ZChoice, cfg: ThermalConfig) -> float:
    """int d^2z omega_m P, which should be 1."""
    spec = measure.WeightSpec(choice, p, cfg.m)
    upper = p_function_support(p, choice, cfg)
    return measure.omega_integral(spec, lambda x: p_function(p, choice, cfg, x), rel_tol=1e-7,
                                  upper=None if math.isinf(upper) else upper)


def p_diagonal(p: pt.PTParams, choice: cs.ZChoice, cfg: ThermalConfig, n_max: int) -> np.ndarray:
    """<n+m| rho_P |n+m> for n <= n_max from quadrature of P against the projectors.

    Should equal q^n (1 - q).
    """
    spec = measure.WeightSpec(choice, p, cfg.m)
    targets = np.exp(cs.log_mod2_closed(choice, p, cfg.m, np.arange(n_max + 1)))
    powers = np.arange(n_max + 1)

    def fn(xs):
        pv = np.array([p_function(p, choice, cfg, x) for x in xs])
        return pv[:, None] * xs[:, None] ** powers[None, :]
    vals = np.asarray(measure.radial_integral(spec, fn, n_max, rel_tol=1e-8))
    return vals / targets


def cs_expectations(p: pt.PTParams, choice: cs.ZChoice, z: complex, m: int) -> tuple[float, float]:
    """<N> and <N^2> in |z; m>, where N has eigenvalue E_{n+m} on |n+m>."""
    x = abs(z) ** 2
    terms = cs.series_terms(choice, p, m, x)
    e = pt.energies(p, len(terms) + m - 1)[m:]
    total = np.sum(terms)
    return float(np.dot(terms, e) / total), float(np.dot(terms, e * e) / total)


def _report(z_part: float, mean: float, mean2: float) -> ThermalReport:
    g2 = (mean2 - mean) / mean ** 2 if mean > 0 else math.nan
    q = (mean2 - mean ** 2 - mean) / mean if mean > 0 else math.nan
    return ThermalReport(z_part, mean, mean2, g2, q)


def thermal_report(p: pt.PTParams, choice: cs.ZChoice, cfg: ThermalConfig) -> ThermalReport:
    """Direct Boltzmann averages of N and N^2 (choice only fixes the state family)."""
    w = boltzmann_weights(p, cfg)
    e = pt.energies(p, len(w) + cfg.m - 1)[cfg.m:]
    z_part = float(np.sum(w))
    return _report(z_part, float(np.dot(w, e)) / z_part, float(np.dot(w, e * e)) / z_part)


def _closed_forms(p: pt.PTParams, choice: cs.ZChoice, m: int, beta: float, nbar: float) -> dict[str, float]:
    """Reference expressions for <N>, <N^2>, g2 and Q, kept term by term as given."""
    c1, c2 = m + 1.0, m + 1.0 + 2 * p.rho
    d = 1.0 - math.exp(-beta)
    s1 = 1 / c1 + 1 / c2
    pair = nbar / d + nbar ** 2
    cubic = nbar / d ** 2 + 4 * nbar ** 2 / d + nbar ** 3
    quartic = nbar / d ** 3 + 11 * nbar ** 2 / d ** 2 + 11 * nbar ** 3 / d + nbar ** 4
    mean_bracket = 1 + s1 * nbar + pair / (c1 * c2)
    sq_bracket = (1 + 2 * s1 * nbar + (1 / c1 ** 2 + 1 / c2 ** 2 + 4 / (c1 * c2)) * pair
                  + 2 * (1 / (c1 ** 2 * c2) + 1 / (c1 * c2 ** 2)) * cubic
                  + quartic / (c1 * c2) ** 2)
    fluct = (s1 ** 2 * nbar / d
             + (1 / (c1 ** 2 * c2) + 1 / (c1 * c2 ** 2)) * (2 * nbar / d ** 2 + 6 * nbar ** 2 / d)
             + (nbar / d ** 3 + 10 * nbar ** 2 / d ** 2 + 9 * nbar ** 3 / d) / (c1 * c2) ** 2)
    if choice.kind == cs.PHASE:
        lam, a = p.lam, p.a
        quarter = (a * a / 4) ** (m + 1)
        ratio = m * (m + 2 * p.rho) / (c1 * c2)
        mean = quarter * lam ** (-2 * (m - 1)) * ratio * mean_bracket
        mean2 = quarter * lam ** (-2 * (m - 2)) * ratio ** 2 * sq_bracket
        scaled = (a * a / 4) ** (-(m + 1) / 2) * lam ** m * mean
        g2 = 1 + fluct / scaled ** 2 - 1 / scaled if scaled else math.nan
        q = fluct / scaled - 1 if scaled else math.nan
    else:
        k2, nu = choice.kappa ** 2, p.nu
        mean = k2 * m * (m + nu + 1) * mean_bracket
        mean2 = k2 ** 2 * m ** 2 * (m + nu + 1) ** 2 * sq_bracket
        g2 = 1 + fluct / mean ** 2 - 1 / mean if mean else math.nan
        q = fluct / mean - 1 if mean else math.nan
    return {"mean_N": mean, "mean_N2": mean2, "g2": g2, "mandel_q": q}


def closed_form_crosscheck(p: pt.PTParams, choice: cs.ZChoice, cfg: ThermalConfig) -> Crosscheck:
    """Signed relative deviation of the reference closed forms from the direct sums.

    Two occupation conventions are reported: ``minus_beta`` uses
    1 / (exp(-beta) - 1), ``plus_beta`` uses 1 / (exp(beta) - 1).
    Nothing is asserted.
    """
    direct = thermal_report(p, choice, cfg)
    out = Crosscheck(direct)
    conventions = {"minus_beta": 1.0 / math.expm1(-cfg.beta), "plus_beta": 1.0 / math.expm1(cfg.beta)}
    for name, nbar in conventions.items():
        closed = _closed_forms(p, choice, cfg.m, cfg.beta, nbar)
        out.closed[name] = closed
        dev = {}
        for key, val in closed.items():
            ref = getattr(direct, key)
            dev[key] = (val - ref) / abs(ref) if ref and math.isfinite(ref) else math.nan
        out.deviation[name] = dev
    return out
