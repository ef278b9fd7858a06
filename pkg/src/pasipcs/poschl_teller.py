"""Trigonometric Poschl-Teller well on (0, pi a).

The parameters (l, l') shift to (l+1, l'+1) under one step of the shape-
invariance chain, so the chain parameter is taken as l + l' (step 2) and
remainders are R_k = lam^2 (2 rho + 2k - 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .specfun import DomainError, log_gamma
from .susy_core import ChainModel, ParameterChain


@dataclass(frozen=True)
class PTParams:
    l: float = 2.0
    l_prime: float = 2.0
    a: float = 1.0

    def __post_init__(self):
        if self.l < 1.5 or self.l_prime < 1.5:
            raise ValueError(f"l and l' must be >= 3/2, got {self.l}, {self.l_prime}")
        if not self.a > 0:
            raise ValueError("a must be positive")

    @property
    def lam(self) -> float:
        return 1.0 / self.a

    @property
    def rho(self) -> float:
        return 0.5 * (self.l + self.l_prime)

    @property
    def nu(self) -> float:
        return 2.0 * self.rho - 1.0

    @property
    def length(self) -> float:
        return math.pi * self.a

    def u(self, x):
        return np.asarray(x) / (2.0 * self.a)

    def shifted(self, k: int = 1) -> "PTParams":
        return PTParams(self.l + k, self.l_prime + k, self.a)

    @classmethod
    def from_rho(cls, rho: float, lam: float = 1.0) -> "PTParams":
        """Symmetric well (l = l') with the given rho and lam."""
        return cls(rho, rho, 1.0 / lam)


def _check_domain(p: PTParams, x):
    xa = np.asarray(x)
    if np.any(np.real(xa) <= 0) or np.any(np.real(xa) >= p.length):
        raise DomainError("x must lie strictly inside (0, pi a)")


def potential_value(p: PTParams, x):
    """V(x) including the constant shift that puts the ground state at zero."""
    _check_domain(p, x)
    u = p.u(x)
    pref = 1.0 / (4.0 * p.a ** 2)
    return pref * (p.l * (p.l - 1) / np.sin(u) ** 2
                   + p.l_prime * (p.l_prime - 1) / np.cos(u) ** 2) \
        - (p.l + p.l_prime) ** 2 / (4.0 * p.a ** 2)


def superpotential_value(p: PTParams, x):
    """W(x) = -(1/2a) [l cot u - l' tan u]; accepts complex x for complex-step derivatives."""
    _check_domain(p, x)
    u = p.u(x)
    return -(p.l / np.tan(u) - p.l_prime * np.tan(u)) / (2.0 * p.a)


def ground_state(p: PTParams, x):
    """Normalized sin^l(u) cos^l'(u)."""
    u = p.u(x)
    norm2 = p.a * special.beta(p.l + 0.5, p.l_prime + 0.5)
    return np.sin(u) ** p.l * np.cos(u) ** p.l_prime / math.sqrt(norm2)


def remainder(p: PTParams, k: int) -> float:
    if k < 1:
        raise ValueError("chain index starts at 1")
    return p.lam ** 2 * (p.l + p.l_prime + 2 * k - 1)


def energy(p: PTParams, n: int) -> float:
    if n < 0:
        raise ValueError("n must be non-negative")
    return p.lam ** 2 * n * (n + 2 * p.rho)


def energies(p: PTParams, n_max: int) -> np.ndarray:
    n = np.arange(n_max + 1, dtype=float)
    return p.lam ** 2 * n * (n + 2 * p.rho)


def partial_remainder_sum(p: PTParams, k: int, top: int) -> float:
    """Sum of R_s for s = k..top, in closed form."""
    return p.lam ** 2 * (top - k + 1) * (top + k - 1 + 2 * p.rho)


def log_gamma_products(p: PTParams, m: int, n: int) -> tuple[float, float]:
    """Logs of prod_{k=m+1}^{n+m} S(k, n+m) and prod_{k=1}^{m} S(k, n+m).

    S(k, top) is the partial remainder sum; both products collapse to Gamma
    ratios.
    """
    if m < 0 or n < 0:
        raise ValueError("m and n must be non-negative")
    lg = lambda s: log_gamma(s).real
    r2 = 2 * p.rho
    two_log_lam = 2 * math.log(p.lam)
    numerator = (n * two_log_lam + lg(n + 1) + lg(2 * n + 2 * m + r2) - lg(n + 2 * m + r2))
    denominator = (m * two_log_lam + lg(n + m + 1) - lg(n + 1)
                   + lg(n + 2 * m + r2) - lg(n + m + r2))
    return numerator, denominator


def gamma_products(p: PTParams, m: int, n: int) -> tuple[float, float]:
    num, den = log_gamma_products(p, m, n)
    return math.exp(num), math.exp(den)


def pt_chain(p: PTParams) -> ParameterChain:
    """Shape-invariance chain with parameter l + l' and step 2."""
    lam2, r2 = p.lam ** 2, 2 * p.rho
    return ParameterChain(a1=r2, shift=2.0, remainder_fn=lambda k: lam2 * (r2 + 2 * k - 1))


def params_at(p: PTParams, chain_value: float) -> PTParams:
    """PTParams reached when the chain parameter l + l' equals ``chain_value``."""
    half = 0.5 * (chain_value - 2 * p.rho)
    return PTParams(p.l + half, p.l_prime + half, p.a)


def parity(p: PTParams) -> tuple[int, int]:
    """Reflection parities of the ground state at x = 0 and x = pi a.

    sin^l is even or odd about 0 according to (-1)^l for integer l; for
    non-integer exponents there is no smooth reflection and the odd
    (sine-series) extension is used.
    """
    def one(v):
        return (-1) ** int(round(v)) if float(v).is_integer() else -1
    return one(p.l), one(p.l_prime)


def pt_model(p: PTParams) -> ChainModel:
    """Chain callables for the well, keyed by the chain parameter l + l'."""
    return ChainModel(
        chain=pt_chain(p),
        ground_state=lambda c, x: ground_state(params_at(p, c), x),
        superpotential=lambda c, x: superpotential_value(params_at(p, c), x),
        potential=lambda c, x: potential_value(params_at(p, c), x),
        x_min=0.0,
        x_max=p.length,
        parity=lambda c: parity(params_at(p, c)),
    )
