"""Resolution-of-identity weights and their moment checks.

Radial variable x = |z|^2. The radial density 𝒲_m(x) = pi N_m(x)^2 omega_m(x)
has moments  int x^n 𝒲_m(x) dx = |K_n^m|^2, and omega_m is the weight that
enters  int d^2z omega_m(|z|^2) |z; m><z; m| = 1 on the m-shifted space.

Phase choice: 𝒲_m(x) = x^m C G^{5,0}_{3,5}(x / 4 lam^2 | 0, m+2rho-1, m+2rho-1;
-m, -m, 2rho-1, rho-1, rho-1/2), C = lam^{-2(2m+1)} 2^{2rho-3} / sqrt(pi), on (0, inf).
Gamma choice: 𝒲_m(x) = kappa^{-2m} Gamma(2m+nu+1) G^{3,0}_{3,3}(x | m, 2m+nu, 2m+nu;
0, 0, m+nu), on (0, 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import coherent_states as cs
from . import poschl_teller as pt
from .quadrature import integrate
from .specfun import ContourError, MeijerGSpec, SeriesControl, log_gamma, meijer_g

WEIGHT_CTL = SeriesControl(rel_tol=1e-10)
PHASE_MOMENT_TOL = 1e-4
GAMMA_MOMENT_TOL = 1e-6


@dataclass(frozen=True)
class WeightSpec:
    choice: cs.ZChoice
    p: pt.PTParams
    m: int = 0

    def __post_init__(self):
        self.choice.check(self.p)
        if self.m < 0:
            raise ValueError("m must be non-negative")

    @property
    def domain(self) -> tuple[float, float]:
        return (0.0, math.inf) if self.choice.kind == cs.PHASE else (0.0, 1.0)

    def meijer(self) -> MeijerGSpec:
        m, p = self.m, self.p
        if self.choice.kind == cs.PHASE:
            r2 = 2 * p.rho
            return MeijerGSpec(5, 0, [0.0, m + r2 - 1, m + r2 - 1],
                               [-m, -m, r2 - 1, p.rho - 1, p.rho - 0.5])
        nu = p.nu
        return MeijerGSpec(3, 0, [m, 2 * m + nu, 2 * m + nu], [0.0, 0.0, m + nu])

    def log_prefactor(self) -> float:
        m, p = self.m, self.p
        if self.choice.kind == cs.PHASE:
            return (-2 * (2 * m + 1) * math.log(p.lam) + (2 * p.rho - 3) * math.log(2.0)
                    - 0.5 * math.log(math.pi))
        return -2 * m * math.log(self.choice.kappa) + log_gamma(2 * m + p.nu + 1).real

    def argument_scale(self) -> float:
        return 1.0 / (4 * self.p.lam ** 2) if self.choice.kind == cs.PHASE else 1.0


@dataclass
class MomentResult:
    n: int
    integral: float
    target: float
    rel_err: float


@dataclass
class IdentityReport:
    spec: WeightSpec
    tolerance: float
    moments: list[MomentResult] = field(default_factory=list)

    @property
    def worst(self) -> float:
        return max(r.rel_err for r in self.moments)

    @property
    def ok(self) -> bool:
        return self.worst <= self.tolerance


def _check_x(spec: WeightSpec, x: float):
    lo, hi = spec.domain
    if not lo < x < hi:
        raise ValueError(f"x = {x} outside the weight domain ({lo}, {hi})")


def radial_density(spec: WeightSpec, x: float, ctl: SeriesControl = WEIGHT_CTL,
                   stretch: float = 1.0) -> float:
    """𝒲_m(x / stretch) through the Meijer G kernel (stretch = 1 gives 𝒲_m(x))."""
    y = x / stretch
    if spec.choice.kind == cs.GAMMA and y >= 1.0:
        return 0.0
    g = meijer_g(spec.meijer(), y * spec.argument_scale(), ctl)
    power = y ** spec.m if spec.choice.kind == cs.PHASE else 1.0
    return math.exp(spec.log_prefactor()) * power * g


def weight_function(spec: WeightSpec, x: float, ctl: SeriesControl = WEIGHT_CTL) -> float:
    """omega_m(x) = 𝒲_m(x) / (pi N_m(x)^2)."""
    _check_x(spec, x)
    inv_norm2 = float(np.sum(cs.series_terms(spec.choice, spec.p, spec.m, x)))
    return radial_density(spec, x, ctl) * inv_norm2 / math.pi


def weight_closed_m0(spec: WeightSpec, x: float) -> float:
    """Elementary omega_0 of the Gamma choice: nu / (pi (1 - x)^2)."""
    if spec.choice.kind != cs.GAMMA or spec.m != 0:
        raise ValueError("elementary form exists for the Gamma choice at m = 0 only")
    return spec.p.nu / (math.pi * (1 - x) ** 2)


def _tail_end(spec: WeightSpec, n_max: int) -> float:
    """Upper x beyond which x^n 𝒲_m(x) is negligible (decay ~ exp(-sqrt(x) / lam))."""
    lam = spec.p.lam
    x = 100.0 * lam ** 2
    while math.sqrt(x) / lam - (n_max + spec.m + 2) * math.log(x) < 60.0:
        x *= 1.5
    return x


def radial_integral(spec: WeightSpec, fn, n_max: int, rel_tol: float = 1e-9,
                    ctl: SeriesControl = WEIGHT_CTL):
    """int fn(x) 𝒲_m(x) dx where fn maps an x array to rows of values.

    The Gamma choice integrates on (0, 1) with a split near the endpoint log
    singularity at 0; the phase choice maps x = e^v to cover (0, inf).
    """
    dens = np.vectorize(lambda x: radial_density(spec, x, ctl))
    if spec.choice.kind == cs.GAMMA:
        res = integrate(lambda x: fn(x) * dens(x)[:, None], 0.0, 1.0, rel_tol=rel_tol,
                        breakpoints=(1e-8, 1e-4, 0.5))
        return res.value
    upper = math.log(_tail_end(spec, n_max))
    lower = -40.0

    def mapped(v):
        x = np.exp(v)
        return fn(x) * (dens(x) * x)[:, None]
    res = integrate(mapped, lower, upper, rel_tol=rel_tol, breakpoints=(-10.0, 0.0))
    return res.value


def omega_integral(spec: WeightSpec, fn, rel_tol: float = 1e-8, upper: float | None = None,
                   ctl: SeriesControl = WEIGHT_CTL) -> float:
    """pi int omega_m(x) fn(x) dx, the radial form of int d^2z omega_m fn.

    ``fn`` is a scalar function of x. For the Gamma choice ``upper`` must keep
    x below the 0.99 cap of the normalization series.
    """
    def integrand(x):
        return np.array([math.pi * weight_function(spec, xi, ctl) * fn(xi) for xi in x])
    if spec.choice.kind == cs.GAMMA:
        hi = 0.99 if upper is None else upper
        cuts = [c for c in (1e-8, 1e-4, 0.5 * hi) if c < hi]
        return float(integrate(integrand, 0.0, hi, rel_tol=rel_tol, breakpoints=cuts).value)
    hi = math.log(_tail_end(spec, 0) if upper is None else upper)

    def mapped(v):
        x = np.exp(v)
        return integrand(x) * x
    cuts = [c for c in (-10.0, 0.0) if c < hi]
    return float(integrate(mapped, -40.0, hi, rel_tol=rel_tol, breakpoints=cuts).value)


def moment_integrals(spec: WeightSpec, n_max: int, rel_tol: float = 1e-9) -> np.ndarray:
    powers = np.arange(n_max + 1)
    return np.asarray(radial_integral(spec, lambda x: x[:, None] ** powers[None, :], n_max, rel_tol))


def moment_check(spec: WeightSpec, n: int) -> MomentResult:
    integral = float(moment_integrals(spec, n)[n])
    target = math.exp(float(cs.log_mod2_closed(spec.choice, spec.p, spec.m, n)))
    return MomentResult(n, integral, target, abs(integral - target) / target)


def identity_resolution_report(spec: WeightSpec, n_max: int, tolerance: float | None = None) -> IdentityReport:
    if tolerance is None:
        tolerance = PHASE_MOMENT_TOL if spec.choice.kind == cs.PHASE else GAMMA_MOMENT_TOL
    integrals = moment_integrals(spec, n_max)
    targets = np.exp(cs.log_mod2_closed(spec.choice, spec.p, spec.m, np.arange(n_max + 1)))
    report = IdentityReport(spec, tolerance)
    for n in range(n_max + 1):
        report.moments.append(MomentResult(n, float(integrals[n]), float(targets[n]),
                                           float(abs(integrals[n] - targets[n]) / targets[n])))
    return report


@dataclass
class CurveSet:
    x: np.ndarray
    curves: dict[int, np.ndarray]
    failures: dict[int, int]


def sample_weights(choice: cs.ZChoice, p: pt.PTParams, m_list, xs,
                   ctl: SeriesControl = WEIGHT_CTL) -> CurveSet:
    """omega_m on a grid for each m; failed points become NaN and are counted."""
    xs = np.asarray(xs, dtype=float)
    curves, failures = {}, {}
    for m in m_list:
        spec = WeightSpec(choice, p, m)
        vals = np.full(xs.shape, np.nan)
        bad = 0
        for i, x in enumerate(xs):
            try:
                vals[i] = weight_function(spec, x, ctl)
            except (ContourError, ArithmeticError, ValueError):
                bad += 1
        curves[m], failures[m] = vals, bad
    return CurveSet(xs, curves, failures)


def family_curves(xs, m_list=(0, 1, 2, 3, 4), rho: float = 2.0, lam: float = 1.0) -> CurveSet:
    return sample_weights(cs.ZChoice.phase_only(), pt.PTParams.from_rho(rho, lam), m_list, xs)
