"""Single-photon wave packets: polarization, spectral and temporal amplitudes,
pairwise overlaps, and the integration-time validity bound.

Frequencies are angular (rad per unit time); times use the inverse unit. The
library is unit-agnostic as long as the caller stays consistent.

The frequency-to-time transform is the unitary kernel
F[f](t) = (2*pi)^(-1/2) * integral f(w) exp(-i w t) dw, which sends the
sinc-shaped spectrum of bandwidth dw to the flat envelope
sqrt(dw/2) * rect(dw t / 2) with rect equal to 1 inside |x| < 1/2, 1/2 on the
boundary, and 0 outside.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import erfcinv

from .errors import DimensionError, ResolutionError, ValidationError
from .quadrature import adaptive_simpson, grid_trapezoid, integrate_piecewise

SHAPE_FAMILIES = ("gaussian", "sinc", "tabulated")

# Per-photon envelope windows keep all but this much of the |chi|^2 mass.
WINDOW_MASS_TOL = 1e-6
_GAUSS_WINDOW_SIGMAS = float(erfcinv(WINDOW_MASS_TOL)) * np.sqrt(2.0)

DEFAULT_THETA = 0.05
MIN_POINTS_PER_BANDWIDTH = 64


def rect(x):
    """Unit box: 1 inside |x| < 1/2, 1/2 exactly on the boundary, else 0."""
    ax = np.abs(x)
    return np.where(ax < 0.5, 1.0, np.where(ax == 0.5, 0.5, 0.0))


@dataclass(frozen=True)
class Polarization:
    """Unit-norm Jones vector in a fixed transverse basis."""

    jones: np.ndarray

    def __post_init__(self):
        j = np.asarray(self.jones, dtype=np.complex128)
        if j.shape != (2,):
            raise DimensionError("a Jones vector has exactly two components")
        norm = float(np.sum(np.abs(j) ** 2))
        if abs(norm - 1.0) > 1e-12:
            raise ValidationError(f"Jones vector norm^2 = {norm!r}, expected 1")
        object.__setattr__(self, "jones", j)

    @staticmethod
    def basis(index: int) -> "Polarization":
        """Basis polarization 1 or 2."""
        if index not in (1, 2):
            raise ValidationError(f"basis polarization index must be 1 or 2, got {index}")
        v = np.zeros(2, dtype=np.complex128)
        v[index - 1] = 1.0
        return Polarization(v)

    @staticmethod
    def linear(angle: float) -> "Polarization":
        return Polarization(np.array([np.cos(angle), np.sin(angle)], dtype=np.complex128))

    def component(self, index: int) -> complex:
        """Projection onto basis vector 1 or 2 (conjugate-paired, trivially
        equal to the raw component for the real basis)."""
        return complex(self.jones[index - 1])

    def overlap(self, other: "Polarization") -> complex:
        """Physical inner product <self|other> (self conjugated)."""
        return complex(np.vdot(self.jones, other.jones))

    def dot(self, other: "Polarization") -> complex:
        """Bilinear dot product, no conjugation."""
        return complex(self.jones @ other.jones)


@dataclass(frozen=True)
class SpectralAmplitude:
    """One photon: spectral shape family, color, emission time, polarization.

    ``bandwidth`` is the family scale dw. For tabulated shapes, ``grid`` holds
    uniformly spaced offsets from the central frequency and ``values`` the
    real shape samples, square-normalized to 1.
    """

    shape: str
    bandwidth: float
    central_frequency: float
    emission_time: float
    polarization: Polarization
    grid: Optional[np.ndarray] = None
    values: Optional[np.ndarray] = None
    _norm_tol: float = field(default=1e-8, repr=False)

    def __post_init__(self):
        if self.shape not in SHAPE_FAMILIES:
            raise ValidationError(f"unknown shape family {self.shape!r}")
        if not self.bandwidth > 0:
            raise ValidationError("bandwidth must be positive")
        if self.shape == "tabulated":
            if self.grid is None or self.values is None:
                raise ValidationError("tabulated shape needs both grid and values")
            g = np.asarray(self.grid, dtype=np.float64)
            v = np.asarray(self.values, dtype=np.float64)
            if g.ndim != 1 or g.shape != v.shape or g.size < 2:
                raise ValidationError("tabulated grid and values must be matching 1-d arrays")
            dg = np.diff(g)
            if not np.allclose(dg, dg[0], rtol=1e-9, atol=0.0):
                raise ValidationError("tabulated grid must be uniformly spaced")
            object.__setattr__(self, "grid", g)
            object.__setattr__(self, "values", v)
            mass = float(grid_trapezoid(v**2, float(dg[0])))
            if abs(mass - 1.0) > self._norm_tol:
                raise ValidationError(
                    f"tabulated shape has squared mass {mass!r}; normalize to 1 first"
                )
        elif self.grid is not None or self.values is not None:
            raise ValidationError("grid/values are only meaningful for tabulated shapes")

    @property
    def grid_spacing(self) -> float:
        return float(self.grid[1] - self.grid[0])

    @property
    def narrowband_ratio(self) -> float:
        """Bandwidth over central frequency. The model assumes this is small
        (the color enters only as a carrier phase) but does not enforce it;
        the ratio is recorded so callers can police their own regime."""
        if self.central_frequency == 0.0:
            return np.inf
        return abs(self.bandwidth / self.central_frequency)

    def shape_value(self, offset):
        """Real spectral shape evaluated at an offset from the color."""
        u = np.asarray(offset, dtype=np.float64)
        dw = self.bandwidth
        if self.shape == "gaussian":
            return (2.0 * np.pi * dw**2) ** (-0.25) * np.exp(-(u**2) / (4.0 * dw**2))
        if self.shape == "sinc":
            # np.sinc is sin(pi x)/(pi x); the family uses sin(x)/x
            return np.sinc(u / (np.pi * dw)) / np.sqrt(np.pi * dw)
        return np.interp(u, self.grid, self.values, left=0.0, right=0.0)

    def spectral_window(self) -> tuple[float, float]:
        """Frequency offsets outside which the shape is numerically negligible
        (exact support cannot be given for the algebraic sinc tails; callers
        that need tail-exact sinc integrals use the closed forms instead)."""
        dw = self.bandwidth
        if self.shape == "gaussian":
            return (-20.0 * dw, 20.0 * dw)
        if self.shape == "sinc":
            return (-200.0 * dw, 200.0 * dw)
        return (float(self.grid[0]), float(self.grid[-1]))

    def envelope(self, t):
        """Time-domain envelope, centered on zero (emission time/delay are
        applied by :class:`TemporalAmplitude`). Real for the named families."""
        tt = np.asarray(t, dtype=np.float64)
        dw = self.bandwidth
        if self.shape == "gaussian":
            return (2.0 * dw**2 / np.pi) ** 0.25 * np.exp(-(dw**2) * tt**2)
        if self.shape == "sinc":
            return np.sqrt(dw / 2.0) * rect(dw * tt / 2.0)
        phase = np.exp(-1j * np.multiply.outer(tt, self.grid))
        vals = grid_trapezoid(
            (self.values * phase).T, self.grid_spacing
        ) / np.sqrt(2.0 * np.pi)
        return vals if np.ndim(t) else complex(vals)

    def envelope_window(self) -> tuple[float, float]:
        """Centered time window holding all but WINDOW_MASS_TOL of the
        envelope's squared mass (exact support for the flat family)."""
        dw = self.bandwidth
        if self.shape == "gaussian":
            half = _GAUSS_WINDOW_SIGMAS / (2.0 * dw)
            return (-half, half)
        if self.shape == "sinc":
            return (-1.0 / dw, 1.0 / dw)
        # One alias-free Nyquist period of the sampled spectrum.
        half = np.pi / self.grid_spacing
        return (-half, half)

    def quadrature_window(self) -> tuple[float, float]:
        """Wider centered window for envelope integrals, chosen so the
        truncated tail sits far below the 1e-9 quadrature budget."""
        if self.shape == "gaussian":
            half = 8.0 / self.bandwidth
            return (-half, half)
        return self.envelope_window()

    def envelope_breakpoints(self) -> tuple[float, ...]:
        """Points where the envelope is not smooth, for piecewise quadrature."""
        if self.shape == "sinc":
            return (-1.0 / self.bandwidth, 1.0 / self.bandwidth)
        return ()


@dataclass(frozen=True)
class TemporalAmplitude:
    """Detection-time amplitude of one photon after propagation.

    The full Jones amplitude at time t is
    envelope(t - t0 - delay) * exp(i w0 (t - t0 - delay)) * jones.
    """

    spectrum: SpectralAmplitude
    propagation_delay: float

    @property
    def central_frequency(self) -> float:
        return self.spectrum.central_frequency

    @property
    def emission_time(self) -> float:
        return self.spectrum.emission_time

    @property
    def polarization(self) -> Polarization:
        return self.spectrum.polarization

    @property
    def arrival_center(self) -> float:
        return self.spectrum.emission_time + self.propagation_delay

    def envelope(self, t):
        """Envelope evaluated at detection time t (shifts applied)."""
        return self.spectrum.envelope(np.asarray(t) - self.arrival_center)

    def scalar(self, t):
        """Complex scalar amplitude (envelope times the carrier phase)."""
        tau = np.asarray(t) - self.arrival_center
        return self.spectrum.envelope(tau) * np.exp(1j * self.central_frequency * tau)

    def jones(self, t) -> np.ndarray:
        """Full two-component amplitude at time t."""
        return np.multiply.outer(np.asarray(self.scalar(t)), self.polarization.jones)

    def projected(self, basis_index: int, t):
        """Amplitude seen by a detector set to basis polarization 1 or 2."""
        return self.polarization.component(basis_index) * self.scalar(t)

    def support_window(self) -> tuple[float, float]:
        lo, hi = self.spectrum.envelope_window()
        return (lo + self.arrival_center, hi + self.arrival_center)


def temporal_amplitude(spec: SpectralAmplitude, delay: float) -> TemporalAmplitude:
    """Propagated time-domain amplitude of a photon (transform of the
    spectrum, shifted by the common interferometer delay)."""
    if spec.shape == "tabulated":
        points_per_bandwidth = spec.bandwidth / spec.grid_spacing
        if points_per_bandwidth < MIN_POINTS_PER_BANDWIDTH:
            raise ResolutionError(
                f"tabulated grid has {points_per_bandwidth:.1f} points per bandwidth; "
                f"need at least {MIN_POINTS_PER_BANDWIDTH}"
            )
    return TemporalAmplitude(spec, float(delay))


def _envelope_overlap(a: SpectralAmplitude, b: SpectralAmplitude, tol: float) -> float:
    """integral |chi_a(t - t0a)| |chi_b(t - t0b)| dt for one photon pair."""
    da, db = a.bandwidth, b.bandwidth
    delta = b.emission_time - a.emission_time
    if a.shape == "sinc" and b.shape == "sinc":
        lo = max(a.emission_time - 1.0 / da, b.emission_time - 1.0 / db)
        hi = min(a.emission_time + 1.0 / da, b.emission_time + 1.0 / db)
        return 0.5 * np.sqrt(da * db) * max(0.0, hi - lo)
    if a.shape == "gaussian" and b.shape == "gaussian":
        ssum = da**2 + db**2
        return float(
            np.sqrt(2.0 * da * db / ssum) * np.exp(-(da**2) * db**2 * delta**2 / ssum)
        )
    lo_a, hi_a = a.quadrature_window()
    lo_b, hi_b = b.quadrature_window()
    lo = max(lo_a + a.emission_time, lo_b + b.emission_time)
    hi = min(hi_a + a.emission_time, hi_b + b.emission_time)
    if hi <= lo:
        return 0.0
    points = {lo, hi}
    for spec in (a, b):
        for p in spec.envelope_breakpoints():
            q = p + spec.emission_time
            if lo < q < hi:
                points.add(q)

    def integrand(t):
        return float(
            np.abs(a.envelope(t - a.emission_time)) * np.abs(b.envelope(t - b.emission_time))
        )

    return float(integrate_piecewise(integrand, points, tol))


def interference_matrix(specs, delay: float = 0.0, tol: float = 1e-9) -> np.ndarray:
    """Pairwise indistinguishability matrix a(s, s') of a photon set.

    Entry (s, s') is the polarization overlap magnitude times the overlap of
    the envelope moduli. The common propagation delay shifts every envelope
    equally and cancels in each pairwise integral, so ``delay`` never enters
    the numbers; it is accepted to mirror the rest of the photon pipeline.
    Symmetric with unit diagonal, entries in [0, 1].
    """
    specs = list(specs)
    n = len(specs)
    a = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            pol = abs(specs[i].polarization.overlap(specs[j].polarization))
            val = pol * _envelope_overlap(specs[i], specs[j], tol)
            a[i, j] = a[j, i] = val
    return a


def _sinc_pair_overlap(s1, s2, tau: float) -> complex:
    """Closed-form full-line overlap of two sinc-family spectra with the
    combined emission phase exp(i w tau) folded in. Derived by moving to the
    time domain, where both factors are flat on finite intervals."""
    lo = max(-1.0 / s1.bandwidth, -tau - 1.0 / s2.bandwidth)
    hi = min(1.0 / s1.bandwidth, -tau + 1.0 / s2.bandwidth)
    if hi <= lo:
        return 0.0 + 0.0j
    beta = s2.central_frequency - s1.central_frequency
    if beta == 0.0:
        kernel = hi - lo
    else:
        kernel = (np.exp(1j * beta * hi) - np.exp(1j * beta * lo)) / (1j * beta)
    return 0.5 * np.sqrt(s1.bandwidth * s2.bandwidth) * np.exp(1j * s2.central_frequency * tau) * kernel


def spectral_overlap(
    s1: SpectralAmplitude,
    s2: SpectralAmplitude,
    conjugate: bool = False,
    tol: float = 1e-9,
) -> complex:
    """Frequency-domain pairwise overlap of two photons over w >= 0.

    By default the product is bilinear (no conjugation), matching the
    convention in which fully color-separated photons overlap to ~0. With
    ``conjugate=True`` the first photon enters conjugated, giving the
    Hermitian inner product instead.

    Sinc pairs use an exact closed form over the whole frequency line; their
    algebraic tails make direct quadrature hopeless at tight tolerances, and
    under the narrow-bandwidth assumption the negative-frequency remainder is
    negligible. All other pairs are integrated by adaptive Simpson on the
    clipped effective support.
    """
    if conjugate:
        pol = s1.polarization.overlap(s2.polarization)
        tau = s2.emission_time - s1.emission_time
    else:
        pol = s1.polarization.dot(s2.polarization)
        tau = s2.emission_time + s1.emission_time
    if pol == 0.0:
        return 0.0 + 0.0j
    if s1.shape == "sinc" and s2.shape == "sinc":
        return pol * _sinc_pair_overlap(s1, s2, tau)

    lo1, hi1 = s1.spectral_window()
    lo2, hi2 = s2.spectral_window()
    lo = max(0.0, lo1 + s1.central_frequency, lo2 + s2.central_frequency)
    hi = min(hi1 + s1.central_frequency, hi2 + s2.central_frequency)
    if hi <= lo:
        return 0.0 + 0.0j

    def re_part(w):
        prod = s1.shape_value(w - s1.central_frequency) * s2.shape_value(
            w - s2.central_frequency
        )
        return float(prod * np.cos(w * tau))

    def im_part(w):
        prod = s1.shape_value(w - s1.central_frequency) * s2.shape_value(
            w - s2.central_frequency
        )
        return float(prod * np.sin(w * tau))

    half = 0.5 * tol
    return pol * complex(
        adaptive_simpson(re_part, lo, hi, half), adaptive_simpson(im_part, lo, hi, half)
    )


def max_integration_time(specs, theta: float = DEFAULT_THETA) -> float:
    """Largest half-bin width keeping both the envelope variation and every
    pairwise beat phase below theta across one bin."""
    specs = list(specs)
    if not specs:
        raise ValidationError("need at least one photon")
    if not 0.0 < theta < 1.0:
        raise ValidationError(f"theta must lie in (0, 1), got {theta}")
    scale = max(s.bandwidth for s in specs)
    freqs = [s.central_frequency for s in specs]
    for i in range(len(freqs)):
        for j in range(i + 1, len(freqs)):
            scale = max(scale, abs(freqs[i] - freqs[j]))
    return theta / scale


def check_interference_condition(a: np.ndarray, tol: float = 1e-6) -> str:
    """Classify an interference matrix as 'full', 'partial', or 'vanishing'."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError("interference matrix must be square")
    if np.max(np.abs(a - a.T)) > 1e-9:
        raise ValidationError("interference matrix must be symmetric")
    if np.max(np.abs(np.diag(a) - 1.0)) > 1e-9:
        raise ValidationError("interference matrix must have unit diagonal")
    if np.min(a) < -1e-9 or np.max(a) > 1.0 + 1e-9:
        raise ValidationError("interference matrix entries must lie in [0, 1]")
    if np.any(a <= 1e-9):
        return "vanishing"
    if np.all(a >= 1.0 - tol):
        return "full"
    return "partial"
