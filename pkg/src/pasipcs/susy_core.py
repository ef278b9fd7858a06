"""Shape-invariance machinery: remainder chains, spectra and grid operators.

Grid functions live on the open, cell-centred grid x_j = x_min + (j + 1/2) h
with h = (x_max - x_min)/N. Reflection about either end maps this grid onto
itself, so a function with known reflection parities at the two ends extends
to a smooth periodic (or antiperiodic) sequence and is differentiated by FFT.
Plain sine-series differentiation is the special case of odd parity at both
ends; it converges only algebraically for profiles that are even about an
end (e.g. sin^2 near 0), which is why the parities are tracked.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal

DEFAULT_POINTS = 2048


class GridResolutionWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ParameterChain:
    """a_k = a1 + (k - 1) * shift together with the remainders R(a_k)."""

    a1: float
    shift: float
    remainder_fn: Callable[[int], float]

    def param(self, k: int) -> float:
        if k < 1:
            raise ValueError("chain index starts at 1")
        return self.a1 + (k - 1) * self.shift

    def remainder(self, k: int) -> float:
        return float(self.remainder_fn(k))


@dataclass
class SpectrumTable:
    energies: np.ndarray

    def __post_init__(self):
        self.energies = np.asarray(self.energies, dtype=float)

    def __getitem__(self, n):
        return self.energies[n]

    def __len__(self):
        return len(self.energies)


def remainder_sequence(chain: ParameterChain, count: int) -> np.ndarray:
    if count < 1:
        raise ValueError("count must be at least 1")
    return np.array([chain.remainder(k) for k in range(1, count + 1)])


def spectrum(chain: ParameterChain, n_max: int) -> SpectrumTable:
    """E_n as partial sums of the remainders; E_0 = 0."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    if n_max == 0:
        return SpectrumTable([0.0])
    return SpectrumTable(np.concatenate([[0.0], np.cumsum(remainder_sequence(chain, n_max))]))


@dataclass
class GridFunction:
    """Samples on the cell-centred grid with reflection parities at both ends.

    ``parity`` is (s0, sL) with +1 for even and -1 for odd reflection about
    x_min and x_max respectively.
    """

    x_min: float
    x_max: float
    values: np.ndarray
    parity: tuple = (-1, -1)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)

    @classmethod
    def sample(cls, fn, x_min, x_max, n_points=DEFAULT_POINTS, parity=(-1, -1)):
        x = grid_points(x_min, x_max, n_points)
        return cls(x_min, x_max, np.asarray(fn(x), dtype=float), tuple(parity))

    @property
    def n_points(self) -> int:
        return len(self.values)

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / self.n_points

    @property
    def x(self) -> np.ndarray:
        return grid_points(self.x_min, self.x_max, self.n_points)

    def inner(self, other: "GridFunction") -> float:
        return float(self.h * np.dot(self.values, other.values))

    def norm(self) -> float:
        return math.sqrt(self.inner(self))

    def interior_norm(self) -> float:
        """Norm with the first and last points dropped (endpoint singularities)."""
        return math.sqrt(self.h * float(np.dot(self.values[1:-1], self.values[1:-1])))

    def normalized(self) -> "GridFunction":
        nrm = self.norm()
        if not np.isfinite(nrm) or nrm == 0.0:
            raise FloatingPointError("grid function has zero or non-finite norm")
        return self.like(self.values / nrm)

    def like(self, values, parity=None) -> "GridFunction":
        return GridFunction(self.x_min, self.x_max, values, self.parity if parity is None else parity)

    def __sub__(self, other):
        return self.like(self.values - other.values)

    def __mul__(self, c):
        return self.like(self.values * c)

    __rmul__ = __mul__


def grid_points(x_min: float, x_max: float, n_points: int) -> np.ndarray:
    h = (x_max - x_min) / n_points
    return x_min + (np.arange(n_points) + 0.5) * h


def _flip(parity):
    return (-parity[0], -parity[1])


def _extended_spectrum(f: GridFunction):
    v = f.values
    s0, sl = f.parity
    ext = np.concatenate([s0 * v[::-1], v])
    if s0 * sl < 0:
        # antiperiodic over 2L: double the period
        ext = np.concatenate([ext, -ext])
    spec = np.fft.fft(ext)
    k = 2 * np.pi * np.fft.fftfreq(len(ext), d=f.h)
    return spec, k


def _band_limit(spec):
    """Band of modes standing clear of the rounding-noise floor.

    The floor is the median magnitude over the top quarter of frequencies;
    modes less than 1e3 times above it carry no resolved signal. Returns the
    highest kept mode index and the floor relative to the peak.
    """
    mag = np.abs(spec)
    idx = np.abs(np.fft.fftfreq(len(spec)) * len(spec))
    peak = mag.max()
    if peak == 0.0:
        return 0, 0.0
    top = idx >= 0.75 * idx.max()
    # an antiperiodic extension has only odd modes; ignore the empty even ones
    carrying = mag > 1e-200 * peak
    floor = float(np.median(mag[top & carrying])) if np.any(top & carrying) else 0.0
    live = idx[mag > max(1e3 * floor, 1e-15 * peak)]
    return int(live.max()) if live.size else 0, floor / peak


def _filtered(f: GridFunction, order: int, check: bool):
    spec, k = _extended_spectrum(f)
    band, floor = _band_limit(spec)
    nyq = len(k) // 2
    if check and floor > 1e-10:
        warnings.warn(f"grid too coarse: spectral floor at {floor:.1e} of peak",
                      GridResolutionWarning, stacklevel=3)
    idx = np.abs(np.fft.fftfreq(len(k)) * len(k))
    mult = (1j * k) ** order
    mult[idx > band] = 0.0
    if order % 2 == 1:
        mult[nyq] = 0.0
    d = np.fft.ifft(spec * mult).real
    n = f.n_points
    return f.like(d[n:2 * n], _flip(f.parity) if order % 2 else f.parity)


def band_limited(f: GridFunction, check: bool = True) -> GridFunction:
    """Projection of ``f`` onto the modes standing clear of the noise floor."""
    return _filtered(f, 0, check)


def spectral_derivative(f: GridFunction, order: int = 1, check: bool = True) -> GridFunction:
    """Derivative of a grid function through its parity-respecting extension.

    Modes lost in the rounding-noise floor are dropped; otherwise the noise is
    multiplied by |k|^order at every application and a chain of operators
    amplifies it geometrically.
    """
    return _filtered(f, order, check)


def apply_lowering(w, f: GridFunction) -> GridFunction:
    """A f = f' + W f.

    The input is projected onto its resolved band first: W grows like 1/x
    at a hard wall and would otherwise magnify rounding noise in the samples
    next to it.
    """
    g = band_limited(f)
    d = spectral_derivative(g, check=False)
    return d.like(d.values + w(g.x) * g.values)


def apply_raising(w, f: GridFunction) -> GridFunction:
    """A^dagger f = -f' + W f, with the same input projection as apply_lowering."""
    g = band_limited(f)
    d = spectral_derivative(g, check=False)
    return d.like(-d.values + w(g.x) * g.values)


def apply_hamiltonian(potential, f: GridFunction) -> GridFunction:
    """-f'' + V f with the spectral second derivative."""
    g = band_limited(f)
    d2 = spectral_derivative(g, 2, check=False)
    return g.like(-d2.values + potential(g.x) * g.values)


def build_eigenfunction(chain: ParameterChain, ground_state_fn, n: int, superpotential_fn,
                        x_min: float, x_max: float, n_points: int = DEFAULT_POINTS,
                        parity_fn=None) -> GridFunction:
    """Normalized A^dagger(a_1) ... A^dagger(a_n) psi_0(a_{n+1}) on the grid.

    ``ground_state_fn(a, x)`` and ``superpotential_fn(a, x)`` take the chain
    parameter value first; ``parity_fn(a)`` gives the ground-state parities
    (odd at both ends when omitted). The state is renormalized after each
    raising step, which is equivalent to dividing by the square root of the
    partial remainder sums.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    a_top = chain.param(n + 1)
    parity = parity_fn(a_top) if parity_fn else (-1, -1)
    phi = GridFunction.sample(lambda x: ground_state_fn(a_top, x), x_min, x_max, n_points, parity)
    phi = phi.normalized()
    for k in range(n, 0, -1):
        ak = chain.param(k)
        phi = apply_raising(lambda x, ak=ak: superpotential_fn(ak, x), phi).normalized()
    return phi


def complex_step_derivative(fn, x, step: float = 1e-20):
    return np.imag(fn(np.asarray(x) + 1j * step)) / step


@dataclass
class ChainModel:
    """Callables describing one shape-invariant family, keyed by chain parameter."""

    chain: ParameterChain
    ground_state: Callable
    superpotential: Callable
    potential: Callable
    x_min: float
    x_max: float
    parity: Callable | None = None
    ground_energy: float = 0.0

    def eigenfunction(self, n: int, n_points: int = DEFAULT_POINTS) -> GridFunction:
        return build_eigenfunction(self.chain, self.ground_state, n, self.superpotential,
                                   self.x_min, self.x_max, n_points, self.parity)


@dataclass
class PartnerReport:
    riccati: float
    annihilation: float
    isospectral: list = field(default_factory=list)
    energy_residual: list = field(default_factory=list)
    partner_residual: list = field(default_factory=list)
    raise_lower_residual: list = field(default_factory=list)
    tolerances: dict = field(default_factory=lambda: {
        "riccati": 1e-8, "annihilation": 1e-8, "isospectral": 1e-10,
        "energy_residual": 1e-6, "partner_residual": 1e-6, "raise_lower_residual": 1e-6})

    def status(self) -> dict:
        out = {}
        for key, tol in self.tolerances.items():
            val = getattr(self, key)
            worst = max(val) if isinstance(val, list) and val else (0.0 if isinstance(val, list) else val)
            out[key] = (worst, worst <= tol)
        return out

    @property
    def ok(self) -> bool:
        return all(flag for _, flag in self.status().values())


def _relative(res: GridFunction, ref: GridFunction) -> float:
    return res.interior_norm() / ref.interior_norm()


def riccati_residual(model: ChainModel, n_points: int = DEFAULT_POINTS) -> float:
    """max |V - E_0 - (W^2 - W')| over the interior grid, W' by complex step."""
    a1 = model.chain.a1
    x = grid_points(model.x_min, model.x_max, n_points)[1:-1]
    w = model.superpotential(a1, x)
    dw = complex_step_derivative(lambda z: model.superpotential(a1, z), x)
    v = model.potential(a1, x)
    return float(np.max(np.abs(v - model.ground_energy - (w * w - dw))))


def verify_partner_relations(model: ChainModel, n_max: int,
                             n_points: int = DEFAULT_POINTS) -> PartnerReport:
    """Grid checks of the factorization, partner isospectrality and intertwining.

    For each n <= n_max: H1 psi_n = E_n psi_n, the partner H2 = A A^dagger
    has A psi_{n+1} as eigenfunction with E_{n+1}, and A(a1) A^dagger(a1)
    applied to psi_n(a2) returns E_{n+1} psi_n(a2).
    """
    chain = model.chain
    a1, a2 = chain.param(1), chain.param(2)
    w1 = lambda x: model.superpotential(a1, x)
    v1 = lambda x: model.potential(a1, x) - model.ground_energy
    v2 = lambda x: w1(x) ** 2 + complex_step_derivative(w1, x)
    e1 = spectrum(chain, n_max + 1).energies
    shifted = ParameterChain(a2, chain.shift, lambda k: chain.remainder(k + 1))
    e_shift = spectrum(shifted, n_max).energies

    psi0 = model.eigenfunction(0, n_points)
    report = PartnerReport(
        riccati=riccati_residual(model, n_points),
        annihilation=apply_lowering(w1, psi0).interior_norm() / psi0.interior_norm(),
    )
    for n in range(n_max + 1):
        report.isospectral.append(abs(chain.remainder(1) + e_shift[n] - e1[n + 1]))
        psi_n = model.eigenfunction(n, n_points)
        res = apply_hamiltonian(v1, psi_n) - psi_n * e1[n]
        report.energy_residual.append(_relative(res, psi_n))

        lowered = apply_lowering(w1, model.eigenfunction(n + 1, n_points))
        res2 = apply_hamiltonian(v2, lowered) - lowered * e1[n + 1]
        report.partner_residual.append(_relative(res2, lowered))

        up = build_eigenfunction(shifted, model.ground_state, n, model.superpotential,
                                 model.x_min, model.x_max, n_points, model.parity)
        back = apply_lowering(w1, apply_raising(w1, up))
        report.raise_lower_residual.append(_relative(back - up * e1[n + 1], up) / e1[n + 1])
    return report


def dirichlet_fd_eigenpairs(potential, x_min: float, x_max: float, n_points: int, count: int):
    """Lowest eigenpairs of -d^2/dx^2 + V by second-order finite differences.

    Uses the same cell-centred grid as :class:`GridFunction`, with the
    Dirichlet condition imposed through odd ghost values half a cell beyond
    each end. Eigenvectors are normalized in the grid L2 sense.
    """
    x = grid_points(x_min, x_max, n_points)
    h = (x_max - x_min) / n_points
    diag = 2.0 / h ** 2 + potential(x)
    diag[0] += 1.0 / h ** 2
    diag[-1] += 1.0 / h ** 2
    off = np.full(n_points - 1, -1.0 / h ** 2)
    vals, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))
    vecs = vecs / math.sqrt(h)
    return vals, vecs


def reference_energies(potential, x_min, x_max, n_points, count):
    """Richardson-extrapolated finite-difference energies from grids N and 2N."""
    coarse, _ = dirichlet_fd_eigenpairs(potential, x_min, x_max, n_points, count)
    fine, _ = dirichlet_fd_eigenpairs(potential, x_min, x_max, 2 * n_points, count)
    return (4.0 * fine - coarse) / 3.0


def fd_overlaps(model: ChainModel, n_max: int, n_points: int = DEFAULT_POINTS) -> list[float]:
    """|<psi_n, phi_n>| between operator-chain states and finite-difference eigenvectors."""
    a1 = model.chain.a1
    _, vecs = dirichlet_fd_eigenpairs(lambda x: model.potential(a1, x), model.x_min, model.x_max,
                                      n_points, n_max + 1)
    out = []
    for n in range(n_max + 1):
        psi = model.eigenfunction(n, n_points)
        out.append(abs(psi.inner(psi.like(vecs[:, n]))))
    return out
